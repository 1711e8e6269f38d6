use clap::ValueEnum;
use rayon::prelude::*;
use residue_tilings::decomp::reciprocity_free_sum;
use residue_tilings::kasteleyn::{second_supplement_sign, signed_sum_via_det};
use residue_tilings::residue::theorem_rhs;
use residue_tilings::spectral::{norm_product, round_signed};
use residue_tilings::tiling::signed_sum;
use residue_tilings::{board, Error, GaussianInt};
use serde::Serialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dp,
    Det,
    ReciprocityFree,
    Spectral,
}

#[derive(Debug, Serialize)]
pub struct Case {
    pub m: u64,
    pub n: u64,
    pub method: Method,
    pub lhs: Option<String>,
    pub rhs: i64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub limited: bool,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub limited: usize,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn outcome(&self) -> CliResult<()> {
        if self.summary.failed > 0 {
            Err(CliError::Failure)
        } else if self.summary.limited > 0 {
            Err(CliError::Limit(format!(
                "{} cases exceeded resource limits",
                self.summary.limited
            )))
        } else {
            Ok(())
        }
    }
}

/// Left-hand side by one method; the spectral value is rounded within `tol`
/// and carries the sign correction for even `m`.
fn evaluate(m: u64, n: u64, method: Method, tol: f64) -> Result<GaussianInt, Error> {
    match method {
        Method::Dp => signed_sum(&board::rectangle(m as u32 - 1, n as u32 - 1)),
        Method::Det => signed_sum_via_det(m as u32, n as u32).map(GaussianInt::from),
        Method::ReciprocityFree => reciprocity_free_sum(m, n).map(GaussianInt::from),
        Method::Spectral => {
            let det = round_signed(norm_product(m, n)?, tol)?;
            let sign = if m.is_multiple_of(2) {
                second_supplement_sign(n as u32)
            } else {
                1
            };
            Ok(GaussianInt::from(det * sign))
        }
    }
}

fn check(m: u64, n: u64, method: Method, tol: f64) -> CliResult<Case> {
    let rhs = theorem_rhs(m, n)?.value();
    let (lhs, pass, error) = match evaluate(m, n, method, tol) {
        Ok(v) => {
            let pass = v == GaussianInt::from(rhs);
            (Some(v.to_string()), pass, None)
        }
        Err(e @ (Error::Tolerance { .. } | Error::Postcondition(_)))
        | Err(e @ (Error::SizeLimit { .. } | Error::ProfileLimit { .. })) => (None, false, Some(e)),
        Err(e) => return Err(e.into()),
    };
    let limited = error.as_ref().is_some_and(Error::is_limit);
    let error = error.map(|e| e.to_string());
    Ok(Case {
        m,
        n,
        method,
        lhs,
        rhs,
        pass,
        error,
        limited,
    })
}

pub fn run(
    m_max: u64,
    n_max: u64,
    methods: &[Method],
    jobs: usize,
    tol: f64,
) -> CliResult<VerificationReport> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage("--tol must be non-negative".into()));
    }
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let work: Vec<(u64, u64, Method)> = (1..=n_max)
        .step_by(2)
        .flat_map(|n| (1..=m_max).map(move |m| (m, n)))
        .flat_map(|(m, n)| methods.iter().map(move |&k| (m, n, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut cases = pool.install(|| {
        work.par_iter()
            .map(|&(m, n, k)| check(m, n, k, tol))
            .collect::<CliResult<Vec<Case>>>()
    })?;
    cases.sort_by_key(|c| (c.n, c.m, c.method));
    let limited = cases.iter().filter(|c| c.limited).count();
    let passed = cases.iter().filter(|c| c.pass).count();
    let summary = Summary {
        cases: cases.len(),
        passed,
        failed: cases.len() - passed - limited,
        limited,
    };
    Ok(VerificationReport { cases, summary })
}
