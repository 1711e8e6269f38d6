use std::collections::BTreeSet;
use std::fmt::Display;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use residue_tilings::board::{l_board, rectangle, y_board, LShapeSpec};
use residue_tilings::decomp::{
    admissible_a, half_board_conditions, half_board_sum, l_signed_sum_closed, periodicity_factor,
    verify_decomposition_with, y_decomposition, ya_parity, DecompositionLimits,
    DEFAULT_FREE_CELL_LIMIT,
};
use residue_tilings::kasteleyn::{build_kasteleyn, det_exact, signed_sum_via_det};
use residue_tilings::residue::{gauss_sign, gauss_sign_even_half, jacobi};
use residue_tilings::spectral::{
    eisenstein_product, ktf_count, norm_product, round_signed, within_relative, COUNT_TOLERANCE,
    SIGN_TOLERANCE,
};
use residue_tilings::tiling::{
    count_tilings, enumerate_tilings_with_limit, flip_component, signed_sum, totally_vertical,
};
use residue_tilings::{Board, Error, GaussianInt};
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaName {
    FlipConnectivity,
    HEven,
    KasteleynDet,
    NormBridge,
    Gauss,
    GaussEven,
    LClosedForm,
    Decomposition,
    Periodicity,
    CoprimeVanishing,
    YDecomposition,
    HalfBoard,
    Parity,
    Eisenstein,
    Ktf,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaParams {
    /// Fix a single m (periodicity only)
    #[arg(long)]
    pub m: Option<u64>,
    /// Fix a single n (periodicity only)
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m_max: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Range bound for lemmas with a single parameter
    #[arg(long)]
    pub max: Option<u64>,
    /// Absolute tolerance for floating products
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct LemmaCase {
    pub inputs: Value,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaName,
    pub params: Value,
    pub cases: Vec<LemmaCase>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

fn case(inputs: Value, lhs: impl Display, rhs: impl Display, pass: bool) -> LemmaCase {
    LemmaCase {
        inputs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass,
    }
}

fn odd_upto(hi: u64) -> impl Iterator<Item = u64> {
    (1..=hi).step_by(2)
}

fn coprime(a: u64, b: u64) -> bool {
    num_integer::gcd(a, b) == 1
}

fn subsets(n: u32) -> impl Iterator<Item = BTreeSet<u32>> {
    (0u64..1 << (n - 1)).map(move |mask| (1..n).filter(|a| mask >> (a - 1) & 1 == 1).collect())
}

/// Odd coprime `(m, n)` with `n < m < 3n` and `m ≤ max`.
fn windows(max: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for n in (3..=max).step_by(2) {
        for m in (n + 2..3 * n).step_by(2) {
            if m <= max && coprime(m, n) {
                out.push((m as u32, n as u32));
            }
        }
    }
    out
}

fn s_rect(m: u64, n: u64) -> residue_tilings::Result<GaussianInt> {
    signed_sum(&rectangle(m as u32 - 1, n as u32 - 1))
}

fn flip_corpus(max: u64) -> Vec<(u32, u32)> {
    (2..=max)
        .step_by(2)
        .flat_map(|n| (1..=max / n).map(move |m| (m as u32, n as u32)))
        .collect()
}

fn decomposition_corpus(n_max: u64, m_max: u64) -> Vec<(Board, Board)> {
    let mut corpus = Vec::new();
    // T = R_{n,n} at the left end of R_{m+n+1,n}
    for n in 1..=n_max as u32 {
        for m in 1..=m_max as u32 {
            corpus.push((rectangle(m + n + 1, n), rectangle(n, n)));
        }
    }
    // T = Y inside R_{m−1,n−1}
    for (m, n) in windows(m_max.max(5)) {
        if n <= 5 {
            corpus.push((
                rectangle(m - 1, n - 1),
                y_board(m, n, &BTreeSet::new()).unwrap(),
            ));
        }
    }
    let corner = Board::from_pairs([(1, 1)]).expect("valid cell");
    for w in 1..=4 {
        for h in 1..=4 {
            corpus.push((rectangle(w, h), corner.clone()));
            corpus.push((rectangle(w, h), rectangle(1, h)));
        }
    }
    corpus
}

fn l_specs(arm_max: u32) -> Vec<Vec<(u32, u32)>> {
    let arms: Vec<(u32, u32)> = (0..=arm_max)
        .flat_map(|a| (0..=arm_max).map(move |b| (a, b)))
        .filter(|&(a, b)| a.abs_diff(b) <= 1)
        .collect();
    let mut all = Vec::new();
    let mut layer: Vec<Vec<(u32, u32)>> = vec![vec![]];
    for _ in 0..3 {
        layer = layer
            .iter()
            .flat_map(|s| {
                arms.iter().map(move |&arm| {
                    let mut s = s.clone();
                    s.push(arm);
                    s
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn primes_upto(max: u64) -> Vec<u64> {
    (3..=max)
        .step_by(2)
        .filter(|&p| {
            (3..p)
                .step_by(2)
                .take_while(|d| d * d <= p)
                .all(|d| p % d != 0)
        })
        .collect()
}

pub fn run(name: LemmaName, args: &LemmaParams, limit: usize) -> CliResult<LemmaReport> {
    let tol = args.tol.unwrap_or(SIGN_TOLERANCE);
    let mut cases = Vec::new();
    let params;
    match name {
        LemmaName::FlipConnectivity | LemmaName::HEven => {
            let max = args.max.unwrap_or(24);
            params = json!({ "max": max, "limit": limit });
            for (m, n) in flip_corpus(max) {
                let all: BTreeSet<_> = enumerate_tilings_with_limit(&rectangle(m, n), limit)?
                    .into_iter()
                    .collect();
                if name == LemmaName::FlipConnectivity {
                    let reached = flip_component(&totally_vertical(m, n)?);
                    cases.push(case(
                        json!({ "m": m, "n": n }),
                        reached.len(),
                        all.len(),
                        reached == all,
                    ));
                } else {
                    let odd = all.iter().filter(|t| t.horizontal_count() % 2 == 1).count();
                    cases.push(case(json!({ "m": m, "n": n }), odd, 0, odd == 0));
                }
            }
        }
        LemmaName::KasteleynDet => {
            let (m_max, n_max) = (args.m_max.unwrap_or(12), args.n_max.unwrap_or(9));
            params = json!({ "m_max": m_max, "n_max": n_max });
            for n in odd_upto(n_max) {
                for m in 1..=m_max {
                    let det = signed_sum_via_det(m as u32, n as u32)?;
                    let s = s_rect(m, n)?;
                    let pass = GaussianInt::from(det.clone()) == s;
                    cases.push(case(json!({ "m": m, "n": n }), det, s, pass));
                }
            }
        }
        LemmaName::NormBridge => {
            let (m_max, n_max) = (args.m_max.unwrap_or(13), args.n_max.unwrap_or(13));
            params = json!({ "m_max": m_max, "n_max": n_max, "tol": tol });
            for n in odd_upto(n_max) {
                for m in 1..=m_max {
                    let z = norm_product(m, n)?;
                    let det = det_exact(&build_kasteleyn(m as u32, n as u32)?);
                    let (lhs, pass) = match round_signed(z, tol) {
                        Ok(v) => {
                            let vanishes = coprime(m, n) || z.abs() <= tol;
                            (v.to_string(), BigInt::from(v) == det && vanishes)
                        }
                        Err(Error::Tolerance { .. }) => (format!("{}{:+}i", z.re, z.im), false),
                        Err(e) => return Err(e.into()),
                    };
                    cases.push(case(json!({ "m": m, "n": n }), lhs, det, pass));
                }
            }
        }
        LemmaName::Gauss | LemmaName::GaussEven => {
            let max = args.max.unwrap_or(99);
            params = json!({ "max": max });
            for n in odd_upto(max) {
                for m in 1..=max {
                    if !coprime(m, n) {
                        continue;
                    }
                    let counter = if name == LemmaName::Gauss {
                        gauss_sign(m, n)?
                    } else {
                        gauss_sign_even_half(m, n)?
                    };
                    let j = jacobi(m, n)?;
                    cases.push(case(json!({ "m": m, "n": n }), counter, j, counter == j));
                }
            }
        }
        LemmaName::LClosedForm => {
            let max = args.max.unwrap_or(4);
            params = json!({ "arm_max": max, "arms": 3 });
            for s in l_specs(max as u32) {
                let (a, b): (Vec<u32>, Vec<u32>) = s.iter().copied().unzip();
                let spec = LShapeSpec::new(a.clone(), b.clone())?;
                let closed = l_signed_sum_closed(&spec)?;
                let direct = signed_sum(&l_board(&spec))?;
                let pass = closed == direct;
                cases.push(case(json!({ "a": a, "b": b }), closed, direct, pass));
            }
        }
        LemmaName::Decomposition => {
            let (n_max, m_max) = (args.n_max.unwrap_or(3), args.m_max.unwrap_or(7));
            params = json!({ "n_max": n_max, "m_max": m_max, "limit": limit });
            let limits = DecompositionLimits {
                cells: limit,
                free_cells: DEFAULT_FREE_CELL_LIMIT,
            };
            for (board, subset) in decomposition_corpus(n_max, m_max) {
                let r = verify_decomposition_with(&board, &subset, limits)?;
                cases.push(case(
                    json!({ "board": board, "subset": subset }),
                    &r.lhs,
                    &r.rhs,
                    r.holds,
                ));
            }
        }
        LemmaName::Periodicity => {
            let n_range: Vec<u64> = match args.n {
                Some(n) => vec![n],
                None => (1..=args.n_max.unwrap_or(10)).collect(),
            };
            let m_range: Vec<u64> = match args.m {
                Some(m) => vec![m],
                None => (1..=args.m_max.unwrap_or(10)).collect(),
            };
            params = json!({ "n": n_range, "m": m_range });
            for &n in &n_range {
                for &m in &m_range {
                    let (m, n) = (m as u32, n as u32);
                    let lhs = signed_sum(&rectangle(m + n + 1, n))?;
                    let rhs = signed_sum(&rectangle(m, n))? * periodicity_factor(n);
                    let pass = lhs == rhs;
                    cases.push(case(json!({ "m": m, "n": n }), lhs, rhs, pass));
                }
            }
        }
        LemmaName::CoprimeVanishing => {
            let max = args.max.unwrap_or(15);
            params = json!({ "max": max });
            for n in odd_upto(max) {
                for m in 1..=max {
                    if !coprime(m, n) {
                        let s = s_rect(m, n)?;
                        let pass = s == GaussianInt::from(0);
                        cases.push(case(json!({ "m": m, "n": n }), s, 0, pass));
                    }
                }
            }
        }
        LemmaName::YDecomposition => {
            let max = args.max.unwrap_or(11);
            params = json!({ "max": max });
            for (m, n) in windows(max) {
                let dec = y_decomposition(m, n)?;
                let s = s_rect(m as u64, n as u64)?;
                let admissible = admissible_a(m, n)?;
                let found: Vec<_> = dec.nonzero.iter().map(|t| t.subset.clone()).collect();
                let pass = dec.total == s && found == [admissible.clone()];
                cases.push(case(
                    json!({ "m": m, "n": n, "nonzero": found, "admissible": admissible }),
                    &dec.total,
                    s,
                    pass,
                ));
            }
        }
        LemmaName::HalfBoard => {
            let max = args.max.unwrap_or(11);
            params = json!({ "max": max });
            for (m, n) in windows(max) {
                for a in subsets(n) {
                    let support = half_board_conditions(m, n, &a)?;
                    let (value, pass) = match half_board_sum(m, n, &a) {
                        Ok(v) => {
                            let pass = (v != GaussianInt::from(0)) == support;
                            (v.to_string(), pass)
                        }
                        Err(Error::Postcondition(msg)) => (msg, false),
                        Err(e) => return Err(e.into()),
                    };
                    cases.push(case(
                        json!({ "m": m, "n": n, "A": a }),
                        value,
                        if support { "unit" } else { "0" },
                        pass,
                    ));
                }
            }
        }
        LemmaName::Parity => {
            let max = args.max.unwrap_or(9);
            params = json!({ "max": max, "limit": limit });
            for (m, n) in windows(max) {
                for a in subsets(n) {
                    let board = y_board(m, n, &a)?;
                    if count_tilings(&board)? == 0u32.into() {
                        continue;
                    }
                    let parity = ya_parity(m, n, &a);
                    let tilings = enumerate_tilings_with_limit(&board, limit)?;
                    let bad = match parity {
                        Ok(p) => tilings
                            .iter()
                            .filter(|t| t.horizontal_count() % 2 != p as usize)
                            .count(),
                        Err(_) => tilings.len(),
                    };
                    let expected = parity.map_or_else(|e| e.to_string(), |p| p.to_string());
                    cases.push(case(
                        json!({ "m": m, "n": n, "A": a, "tilings": tilings.len() }),
                        format!("{bad} mismatches"),
                        expected,
                        bad == 0,
                    ));
                }
            }
        }
        LemmaName::Eisenstein => {
            let max = args.max.unwrap_or(23);
            params = json!({ "max": max, "tol": tol });
            let primes = primes_upto(max);
            for &p in &primes {
                for &q in &primes {
                    if p == q {
                        continue;
                    }
                    let v = eisenstein_product(p, q)?;
                    let j = jacobi(q, p)?;
                    let pass = (v - j.value() as f64).abs() <= tol;
                    cases.push(case(json!({ "p": p, "q": q }), v, j, pass));
                }
            }
        }
        LemmaName::Ktf => {
            let max = args.max.unwrap_or(11);
            params = json!({ "max": max, "tol": COUNT_TOLERANCE });
            for m in odd_upto(max) {
                for n in odd_upto(max) {
                    let approx = ktf_count(m, n)?;
                    let exact = count_tilings(&rectangle(m as u32 - 1, n as u32 - 1))?;
                    let pass = exact
                        .to_f64()
                        .is_some_and(|e| within_relative(approx, e, COUNT_TOLERANCE));
                    cases.push(case(json!({ "m": m, "n": n }), approx, exact, pass));
                }
            }
        }
    }
    let passed = cases.iter().filter(|c| c.pass).count();
    Ok(LemmaReport {
        lemma: name,
        params,
        failed: cases.len() - passed,
        all_pass: passed == cases.len(),
        passed,
        cases,
    })
}
