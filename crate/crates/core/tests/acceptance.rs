//! Acceptance gate. Each criterion prints one PASS or FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use residue_tilings::board::{l_board, rectangle, y_board, LShapeSpec};
use residue_tilings::decomp::{
    admissible_a, half_board_conditions, half_board_sum, l_signed_sum_closed, periodicity_factor,
    reciprocity_free_sum, verify_decomposition_with, y_decomposition, ya_parity,
    DecompositionLimits, DEFAULT_FREE_CELL_LIMIT,
};
use residue_tilings::kasteleyn::{build_kasteleyn, det_exact, signed_sum_via_det};
use residue_tilings::residue::{
    gauss_sign, gauss_sign_even_half, jacobi, jacobi_call_count, theorem_rhs, ResidueSign,
};
use residue_tilings::spectral::{
    eisenstein_product, ktf_count, norm_product, round_signed, within_relative, COUNT_TOLERANCE,
    SIGN_TOLERANCE,
};
use residue_tilings::tiling::{
    count_tilings, enumerate_tilings, enumerate_tilings_with_limit, flip_component, flip_moves,
    normalize_to_vertical, signed_sum, signed_sum_bruteforce, totally_vertical,
};
use residue_tilings::{Board, GaussianInt};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn odd(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|v| v % 2 == 1)
}

fn s_rect(m: u64, n: u64) -> GaussianInt {
    signed_sum(&rectangle(m as u32 - 1, n as u32 - 1)).expect("within the DP limits")
}

fn real(v: ResidueSign) -> GaussianInt {
    v.to_gaussian()
}

fn main_theorem() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for n in odd(1, 13) {
        for m in 1..=20 {
            let lhs = s_rect(m, n);
            let rhs = real(theorem_rhs(m, n).map_err(|e| e.to_string())?);
            if lhs != rhs {
                return Err(format!("S(R_{},{}) = {lhs}, expected {rhs}", m - 1, n - 1));
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("sweep took {elapsed:.1?}, budget 60 s"));
    }
    Ok(format!("{cases} cases in {elapsed:.2?}"))
}

fn determinant_bridge() -> Check {
    let mut cases = 0;
    for n in odd(1, 9) {
        for m in 1..=12 {
            let det = signed_sum_via_det(m as u32, n as u32).map_err(|e| e.to_string())?;
            if GaussianInt::from_int(det.clone()) != s_rect(m, n) {
                return Err(format!("m = {m}, n = {n}: det route gives {det}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn spectral_bridge() -> Check {
    let mut cases = 0;
    let mut vanishing = 0;
    for n in odd(1, 13) {
        for m in 1..=13u64 {
            let z = norm_product(m, n).map_err(|e| e.to_string())?;
            let det = det_exact(&build_kasteleyn(m as u32, n as u32).map_err(|e| e.to_string())?);
            let rounded =
                round_signed(z, SIGN_TOLERANCE).map_err(|e| format!("m = {m}, n = {n}: {e}"))?;
            if BigInt::from(rounded) != det {
                return Err(format!("m = {m}, n = {n}: product {z:?}, det {det}"));
            }
            if m.gcd(&n) > 1 {
                if z.abs() > SIGN_TOLERANCE {
                    return Err(format!("m = {m}, n = {n}: |product| = {}", z.abs()));
                }
                vanishing += 1;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, {vanishing} vanishing"))
}

fn gauss_counters() -> Check {
    let mut cases = 0;
    for n in odd(1, 99) {
        for m in 1..=99 {
            if m.gcd(&n) != 1 {
                continue;
            }
            let j = jacobi(m, n).map_err(|e| e.to_string())?;
            let g = gauss_sign(m, n).map_err(|e| e.to_string())?;
            let h = gauss_sign_even_half(m, n).map_err(|e| e.to_string())?;
            if g != j || h != j {
                return Err(format!("({m}/{n}) = {j}, counters {g} and {h}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} coprime pairs"))
}

fn reciprocity_free() -> Check {
    let source = include_str!("../src/decomp.rs");
    let body = source.split("#[cfg(test)]").next().unwrap_or(source);
    for needle in ["jacobi(", "theorem_rhs", "residue::jacobi"] {
        if body.contains(needle) {
            return Err(format!("decomp source mentions `{needle}`"));
        }
    }
    let mut cases = 0;
    for n in odd(1, 11) {
        for m in 1..=20 {
            let before = jacobi_call_count();
            let value = reciprocity_free_sum(m, n).map_err(|e| format!("m = {m}, n = {n}: {e}"))?;
            if jacobi_call_count() != before {
                return Err(format!("m = {m}, n = {n}: the call path entered jacobi"));
            }
            let rhs = theorem_rhs(m, n).map_err(|e| e.to_string())?;
            if value != BigInt::from(rhs.value()) {
                return Err(format!("m = {m}, n = {n}: got {value}, expected {rhs}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, no jacobi calls"))
}

fn ktf() -> Check {
    let mut cases = 0;
    let mut largest = 0.0f64;
    for m in odd(1, 11) {
        for n in odd(1, 11) {
            let approx = ktf_count(m, n).map_err(|e| e.to_string())?;
            let exact = count_tilings(&rectangle(m as u32 - 1, n as u32 - 1))
                .map_err(|e| e.to_string())?
                .to_f64()
                .ok_or("count does not fit a double")?;
            if !within_relative(approx, exact, COUNT_TOLERANCE) {
                return Err(format!("m = {m}, n = {n}: product {approx}, count {exact}"));
            }
            largest = largest.max(exact);
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, largest count {largest}"))
}

fn eisenstein() -> Check {
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23];
    let mut cases = 0;
    for &p in &primes {
        for &q in &primes {
            if p == q {
                continue;
            }
            let v = eisenstein_product(p, q).map_err(|e| e.to_string())?;
            let rounded = v.round();
            let expected = jacobi(q, p).map_err(|e| e.to_string())?.value() as f64;
            if (v - rounded).abs() > SIGN_TOLERANCE || rounded != expected {
                return Err(format!(
                    "p = {p}, q = {q}: product {v}, ({q}/{p}) = {expected}"
                ));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} ordered pairs"))
}

fn flip_structure() -> Check {
    let mut rects = 0;
    let mut tilings = 0;
    for n in (2..=24u32).step_by(2) {
        for m in 1..=24 / n {
            let all: BTreeSet<_> = enumerate_tilings(&rectangle(m, n))
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect();
            let start = totally_vertical(m, n).map_err(|e| e.to_string())?;
            if flip_component(&start) != all {
                return Err(format!("{m} × {n}: flip graph is disconnected"));
            }
            if let Some(t) = all.iter().find(|t| t.horizontal_count() % 2 == 1) {
                return Err(format!(
                    "{m} × {n}: tiling with h = {}",
                    t.horizontal_count()
                ));
            }
            rects += 1;
            tilings += all.len();
        }
    }
    let mut paths = 0;
    for (m, n) in [(4u32, 4u32), (6, 4)] {
        let target = totally_vertical(m, n).map_err(|e| e.to_string())?;
        for t in enumerate_tilings(&rectangle(m, n)).map_err(|e| e.to_string())? {
            let path = normalize_to_vertical(&t, m, n).map_err(|e| e.to_string())?;
            let valid = path.first() == Some(&t)
                && path.last() == Some(&target)
                && path.windows(2).all(|w| flip_moves(&w[0]).contains(&w[1]));
            if !valid {
                return Err(format!("{m} × {n}: invalid flip path from {t:?}"));
            }
            paths += 1;
        }
    }
    Ok(format!(
        "{rects} rectangles, {tilings} tilings, {paths} flip paths"
    ))
}

fn l_shapes() -> std::result::Result<usize, String> {
    let arms: Vec<(u32, u32)> = (0..=4u32)
        .flat_map(|a| (0..=4u32).map(move |b| (a, b)))
        .filter(|&(a, b)| a.abs_diff(b) <= 1)
        .collect();
    let mut specs: Vec<Vec<(u32, u32)>> = vec![vec![]];
    let mut checked = 0;
    for _ in 0..3 {
        specs = specs
            .iter()
            .flat_map(|s| {
                arms.iter().map(move |&arm| {
                    let mut s = s.clone();
                    s.push(arm);
                    s
                })
            })
            .collect();
        for s in &specs {
            let (a, b): (Vec<u32>, Vec<u32>) = s.iter().copied().unzip();
            let spec = LShapeSpec::new(a, b).map_err(|e| e.to_string())?;
            let closed = l_signed_sum_closed(&spec).map_err(|e| e.to_string())?;
            let brute = signed_sum_bruteforce(&l_board(&spec)).map_err(|e| e.to_string())?;
            if closed != brute {
                return Err(format!("L{s:?}: closed form {closed}, brute force {brute}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn decomposition_corpus() -> Vec<(Board, Board)> {
    let mut corpus = Vec::new();
    // T = R_{n,n} at the left end of R_{m+n+1,n}
    for n in 1..=3u32 {
        for m in 1..=(24 / n).saturating_sub(n + 1) {
            corpus.push((rectangle(m + n + 1, n), rectangle(n, n)));
        }
    }
    // T = Y inside R_{m−1,n−1}
    for n in odd(3, 5) {
        for m in odd(n + 2, 3 * n - 1) {
            let (m, n) = (m as u32, n as u32);
            corpus.push((
                rectangle(m - 1, n - 1),
                y_board(m, n, &BTreeSet::new()).unwrap(),
            ));
        }
    }
    let single = Board::from_pairs([(1, 1)]).unwrap();
    for w in 1..=5u32 {
        for h in 1..=4u32 {
            let rect = rectangle(w, h);
            corpus.push((rect.clone(), single.clone()));
            corpus.push((rect.clone(), rectangle(1, h)));
            corpus.push((rect, Board::empty()));
        }
    }
    for a in [vec![2, 3], vec![3, 2, 2], vec![4, 3], vec![2, 2, 2]] {
        let spec = LShapeSpec::new(a.clone(), a.iter().map(|x| x + 1).collect()).unwrap();
        let board = l_board(&spec);
        let first = Board::from_cells(board.first());
        corpus.push((board, first));
    }
    corpus
}

fn lemma_suite() -> Check {
    let specs = l_shapes()?;
    if specs < 200 {
        return Err(format!("only {specs} L specs"));
    }

    let corpus = decomposition_corpus();
    if corpus.len() < 50 {
        return Err(format!("only {} decomposition pairs", corpus.len()));
    }
    let limits = DecompositionLimits {
        cells: 48,
        free_cells: DEFAULT_FREE_CELL_LIMIT,
    };
    for (board, subset) in &corpus {
        let report = verify_decomposition_with(board, subset, limits).map_err(|e| {
            format!(
                "board {:?}, subset {:?}: {e}",
                board.to_pairs(),
                subset.to_pairs()
            )
        })?;
        if !report.holds {
            return Err(format!(
                "decomposition fails on {:?} with T = {:?}: {} vs {}",
                board.to_pairs(),
                subset.to_pairs(),
                report.lhs,
                report.rhs
            ));
        }
    }

    for n in 1..=10u32 {
        for m in 1..=10u32 {
            let lhs = signed_sum(&rectangle(m + n + 1, n)).map_err(|e| e.to_string())?;
            let rhs =
                signed_sum(&rectangle(m, n)).map_err(|e| e.to_string())? * periodicity_factor(n);
            if lhs != rhs {
                return Err(format!("periodicity fails at m = {m}, n = {n}"));
            }
        }
    }

    let mut vanishing = 0;
    for n in odd(1, 15) {
        for m in 1..=15 {
            if m.gcd(&n) > 1 {
                if !s_rect(m, n).is_zero() {
                    return Err(format!("S(R_{},{}) ≠ 0", m - 1, n - 1));
                }
                vanishing += 1;
            }
        }
    }

    let mut windows = 0;
    let mut painted = 0;
    for n in odd(3, 11) {
        for m in odd(n + 2, (3 * n - 1).min(11)) {
            if m.gcd(&n) != 1 {
                continue;
            }
            let (m, n) = (m as u32, n as u32);
            let dec = y_decomposition(m, n).map_err(|e| e.to_string())?;
            if dec.total != s_rect(m as u64, n as u64) {
                return Err(format!("Y-decomposition total wrong at m = {m}, n = {n}"));
            }
            let admissible = admissible_a(m, n).map_err(|e| e.to_string())?;
            if dec.nonzero.len() != 1 || dec.nonzero[0].subset != admissible {
                return Err(format!(
                    "m = {m}, n = {n}: nonzero summands {:?}",
                    dec.nonzero
                ));
            }
            for mask in 0u32..1 << (n - 1) {
                let a: BTreeSet<u32> = (1..n).filter(|x| mask >> (x - 1) & 1 == 1).collect();
                let value = half_board_sum(m, n, &a).map_err(|e| e.to_string())?;
                let support = half_board_conditions(m, n, &a).map_err(|e| e.to_string())?;
                if value.is_zero() == support {
                    return Err(format!("m = {m}, n = {n}, A = {a:?}: S(Y_A) = {value}"));
                }
                let board = y_board(m, n, &a).map_err(|e| e.to_string())?;
                let tilings =
                    enumerate_tilings_with_limit(&board, board.len()).map_err(|e| e.to_string())?;
                if tilings.is_empty() {
                    continue;
                }
                let p = ya_parity(m, n, &a).map_err(|e| format!("tilable Y_A: {e}"))?;
                if let Some(t) = tilings
                    .iter()
                    .find(|t| t.horizontal_count() % 2 != p as usize)
                {
                    return Err(format!(
                        "m = {m}, n = {n}, A = {a:?}: h = {} against parity {p}",
                        t.horizontal_count()
                    ));
                }
                painted += tilings.len();
            }
            windows += 1;
        }
    }

    Ok(format!(
        "{specs} L specs, {} decompositions, periodicity 100, {vanishing} vanishing, \
         {windows} Y windows, {painted} painted tilings",
        corpus.len()
    ))
}

fn reciprocity_output() -> Check {
    let mut cases = 0;
    for m in odd(1, 99) {
        for n in odd(1, 99) {
            if m.gcd(&n) != 1 {
                continue;
            }
            let product = gauss_sign(m, n).map_err(|e| e.to_string())?
                * gauss_sign(n, m).map_err(|e| e.to_string())?;
            let expected = ResidueSign::from_parity(((m - 1) / 2 * ((n - 1) / 2)) as usize);
            if product != expected {
                return Err(format!("m = {m}, n = {n}: product {product}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} coprime pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("main theorem, m ≤ 20, odd n ≤ 13", main_theorem),
        ("determinant bridge, m ≤ 12, odd n ≤ 9", determinant_bridge),
        ("spectral bridge, m ≤ 13, odd n ≤ 13", spectral_bridge),
        ("Gauss counters, arguments ≤ 99", gauss_counters),
        (
            "reciprocity-free path, m ≤ 20, odd n ≤ 11",
            reciprocity_free,
        ),
        ("KTF count, odd m, n ≤ 11", ktf),
        ("Eisenstein product, primes ≤ 23", eisenstein),
        ("flip structure, n even, m·n ≤ 24", flip_structure),
        ("decomposition lemma suite", lemma_suite),
        (
            "quadratic reciprocity as output, m, n ≤ 99",
            reciprocity_output,
        ),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
