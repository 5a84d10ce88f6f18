//! `randlat exact-moments`: exact limiting joint moments of the pair
//! counting process, by the matrix form, the partition form, or the combined
//! pair moment 2^{-k} * (matrix form).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::output::{write_report, Meta};
use crate::parse::parse_rational_list;
use crate::{AppError, AppResult, ExactMomentsArgs, Form};
use randlat::{limit_moment_matrix_form, limit_moment_partition_form, pair_moment, MomentSpec};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ExactValue {
    exact: String,
    approx: f64,
}

impl From<&BigRational> for ExactValue {
    fn from(r: &BigRational) -> Self {
        ExactValue { exact: r.to_string(), approx: r.to_f64().unwrap_or(f64::NAN) }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MomentReport {
    meta: Meta,
    volumes: Vec<String>,
    form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identity_holds: Option<bool>,
}

pub fn run(a: &ExactMomentsArgs) -> AppResult<()> {
    let volumes = parse_rational_list(&a.volumes)?;
    let spec = MomentSpec::new(volumes)?;
    let k = spec.k();
    let form_name = format!("{:?}", a.form).to_lowercase();
    let meta = Meta::new(
        "exact-moments",
        json!({"volumes": a.volumes, "form": form_name}),
        a.out.deterministic,
    );
    let mut report = MomentReport {
        meta,
        volumes: spec.volumes().iter().map(|v| v.to_string()).collect(),
        form: form_name,
        matrix: None,
        partition: None,
        pair: None,
        identity_holds: None,
    };
    let wants_matrix = matches!(a.form, Form::Matrix | Form::Both);
    let wants_partition = matches!(a.form, Form::Partition | Form::Both);
    let mut halved_matrix: Option<BigRational> = None;
    if wants_matrix {
        let m = limit_moment_matrix_form(&spec)?;
        halved_matrix =
            Some(&m / BigRational::from(BigInt::from(2u8).pow(k as u32)));
        report.matrix = Some((&m).into());
    }
    if wants_partition {
        let p = limit_moment_partition_form(&spec)?;
        if let Some(hm) = &halved_matrix {
            let holds = hm == &p;
            report.identity_holds = Some(holds);
            if !holds {
                return Err(AppError::Verify(format!(
                    "identity failed: 2^-{k} * matrix = {hm} but partition = {p}"
                )));
            }
        }
        report.partition = Some((&p).into());
    }
    if matches!(a.form, Form::Pair | Form::Both) {
        report.pair = Some((&pair_moment(&spec)?).into());
    }
    write_report(&a.out, &report)
}
