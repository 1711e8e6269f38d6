//! Board decompositions and the reciprocity-free evaluation of `S(R_{m−1,n−1})`.
//!
//! The pieces, in the order they build on each other:
//!
//! - closed-form signed sums of chained L-shapes whose arms differ by at most one;
//! - closures `Cl_D(T)` of a subset under a tiling, their union `Cl(T)` and the
//!   restricted sums `S(T; X)`, which together give the identity
//!   `S(X) = Σ_{T ⊆ U ⊆ Cl(T)} S(X∖U)·S(T; U)`;
//! - the periodicity `S(R_{m+n+1,n}) = S(R_{m,n})·i^{e(n)}`;
//! - the half boards `Y_A`, their support and the painting parity of `h(D)`.
//!
//! Nothing in this module consults the Jacobi symbol. The final sign comes from
//! the even-half Gauss counter, so the main identity is reached without
//! reciprocity.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::board::{self, check_odd_pair, Board, Cell, LShapeSpec};
use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;
use crate::residue::{gauss_sign_even_half, half_residue};
use crate::tiling::{enumerate_tilings_with_limit, signed_sum, Tiling, DEFAULT_ENUMERATION_LIMIT};

/// Largest `|Cl(T) ∖ T|` for which [`verify_decomposition`] enumerates all
/// intermediate sets.
pub const DEFAULT_FREE_CELL_LIMIT: usize = 16;

/// `S(L(a; b))` for arms with `|a_k − b_k| ≤ 1`: zero when some `a_k = b_k ≠ 0`,
/// otherwise `∏_k i^{⌊a_k/2⌋}`.
pub fn l_signed_sum_closed(spec: &LShapeSpec) -> Result<GaussianInt> {
    if let Some((a, b)) = spec.arms().find(|&(a, b)| a.abs_diff(b) > 1) {
        return Err(Error::InvalidParameter(format!(
            "arms {a} and {b} differ by more than one"
        )));
    }
    if spec.arms().any(|(a, b)| a == b && a != 0) {
        return Ok(GaussianInt::zero());
    }
    let exponent: i64 = spec.arms().map(|(a, _)| (a / 2) as i64).sum();
    Ok(GaussianInt::i_pow(exponent))
}

fn check_subset(subset: &Board, board: &Board) -> Result<()> {
    if subset.is_subset(board) {
        Ok(())
    } else {
        Err(Error::NotSubset)
    }
}

/// `Cl_D(T)`: the smallest superset of `subset` that no domino of `t` crosses.
pub fn closure(board: &Board, t: &Tiling, subset: &Board) -> Result<Board> {
    check_subset(subset, board)?;
    if t.board() != board {
        return Err(Error::NotATiling(
            "tiling belongs to a different board".into(),
        ));
    }
    let cover = t.covering();
    let mut region = subset.clone();
    let mut work: Vec<Cell> = subset.cells().collect();
    while let Some(c) = work.pop() {
        for other in cover[&c].cells() {
            if region.insert(other) {
                work.push(other);
            }
        }
    }
    Ok(region)
}

/// A subset together with its closure under every tiling.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub subset: Board,
    pub per_tiling: Vec<(Tiling, Board)>,
    pub union: Board,
}

pub fn closure_report(board: &Board, subset: &Board, limit: usize) -> Result<ClosureReport> {
    check_subset(subset, board)?;
    let mut per_tiling = Vec::new();
    let mut union = Board::empty();
    for t in enumerate_tilings_with_limit(board, limit)? {
        let cl = closure(board, &t, subset)?;
        union = union.union(&cl);
        per_tiling.push((t, cl));
    }
    Ok(ClosureReport {
        subset: subset.clone(),
        per_tiling,
        union,
    })
}

/// `Cl(T)`, the union of `Cl_D(T)` over all tilings `D` of `board`.
pub fn closure_union(board: &Board, subset: &Board) -> Result<Board> {
    closure_union_with_limit(board, subset, DEFAULT_ENUMERATION_LIMIT)
}

pub fn closure_union_with_limit(board: &Board, subset: &Board, limit: usize) -> Result<Board> {
    closure_report(board, subset, limit).map(|r| r.union)
}

/// `S(T; X)`: the signed sum over tilings of `board` whose closure of
/// `subset` is all of `board`.
pub fn restricted_sum(subset: &Board, board: &Board) -> Result<GaussianInt> {
    restricted_sum_with_limit(subset, board, DEFAULT_ENUMERATION_LIMIT)
}

pub fn restricted_sum_with_limit(
    subset: &Board,
    board: &Board,
    limit: usize,
) -> Result<GaussianInt> {
    check_subset(subset, board)?;
    let mut total = GaussianInt::zero();
    for t in enumerate_tilings_with_limit(board, limit)? {
        if &closure(board, &t, subset)? == board {
            total += t.sign();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionTerm {
    pub intermediate: Board,
    /// `S(X ∖ U)`
    pub outside: GaussianInt,
    /// `S(T; U)`
    pub restricted: GaussianInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub board: Board,
    pub subset: Board,
    pub closure_union: Board,
    pub lhs: GaussianInt,
    pub rhs: GaussianInt,
    pub terms: Vec<DecompositionTerm>,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct DecompositionLimits {
    pub cells: usize,
    pub free_cells: usize,
}

impl Default for DecompositionLimits {
    fn default() -> Self {
        DecompositionLimits {
            cells: DEFAULT_ENUMERATION_LIMIT,
            free_cells: DEFAULT_FREE_CELL_LIMIT,
        }
    }
}

pub fn verify_decomposition(board: &Board, subset: &Board) -> Result<DecompositionReport> {
    verify_decomposition_with(board, subset, DecompositionLimits::default())
}

/// Evaluates both sides of `S(X) = Σ_{T ⊆ U ⊆ Cl(T)} S(X∖U)·S(T; U)`.
pub fn verify_decomposition_with(
    board: &Board,
    subset: &Board,
    limits: DecompositionLimits,
) -> Result<DecompositionReport> {
    let union = closure_union_with_limit(board, subset, limits.cells)?;
    let lhs = signed_sum(board)?;
    let mut terms = Vec::new();
    let mut rhs = GaussianInt::zero();
    // With no tilings Cl(T) is empty and, unless T is too, the index set is empty.
    if subset.is_subset(&union) {
        let free: Vec<Cell> = union.difference(subset).cells().collect();
        if free.len() > limits.free_cells {
            return Err(Error::SizeLimit {
                cells: free.len(),
                limit: limits.free_cells,
            });
        }
        for mask in 0u64..(1u64 << free.len()) {
            let mut u = subset.clone();
            for (bit, c) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    u.insert(*c);
                }
            }
            let outside = signed_sum(&board.difference(&u))?;
            let restricted = restricted_sum_with_limit(subset, &u, limits.cells)?;
            rhs += &outside * &restricted;
            terms.push(DecompositionTerm {
                intermediate: u,
                outside,
                restricted,
            });
        }
    }
    Ok(DecompositionReport {
        board: board.clone(),
        subset: subset.clone(),
        closure_union: union,
        holds: lhs == rhs,
        lhs,
        rhs,
        terms,
    })
}

/// Exponent `e(n)` with `S(R_{m+n+1,n}) = S(R_{m,n})·i^{e(n)}`.
pub fn periodicity_exponent(n: u32) -> u64 {
    let n = n as u64;
    if n.is_multiple_of(2) {
        (n * n + 2 * n) / 4
    } else {
        (n * n + 2 * n + 1) / 4
    }
}

pub fn periodicity_factor(n: u32) -> GaussianInt {
    GaussianInt::i_pow((periodicity_exponent(n) % 4) as i64)
}

fn check_window(m: u64, n: u64) -> Result<()> {
    check_odd_pair(m, n)?;
    if m >= 3 * n {
        return Err(Error::InvalidParameter(format!(
            "expected m < 3n, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// `{k · m/2 mod n : 1 ≤ k ≤ (n−1)/2}`, the only `A` with `S(Y_A) ≠ 0` and
/// `S(Y_{n−Aᶜ}) ≠ 0`.
pub fn admissible_a(m: u32, n: u32) -> Result<BTreeSet<u32>> {
    check_window(m as u64, n as u64)?;
    let half = half_residue(m as u64, n as u64, 2)?;
    Ok((1..=(n as u64 - 1) / 2)
        .map(|k| (k * half % n as u64) as u32)
        .collect())
}

/// `n − Aᶜ`, where `Aᶜ = [n−1] ∖ A`.
pub fn reflected_complement(n: u32, subset: &BTreeSet<u32>) -> BTreeSet<u32> {
    (1..n)
        .filter(|a| !subset.contains(a))
        .map(|a| n - a)
        .collect()
}

/// The three support conditions for `S(Y_A) ≠ 0`, with `m/2` read as the
/// residue `m · 2⁻¹ mod n`.
pub fn half_board_conditions(m: u32, n: u32, subset: &BTreeSet<u32>) -> Result<bool> {
    check_window(m as u64, n as u64)?;
    let half = half_residue(m as u64, n as u64, 2)? as u32;
    if !subset.contains(&((m - n) / 2)) {
        return Ok(false);
    }
    for i in 1..n {
        for j in i + 1..n {
            if (i + j) % n == half && subset.contains(&i) == subset.contains(&j) {
                return Ok(false);
            }
        }
        if (2 * i) % n == half && subset.contains(&i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S(Y_A)` for odd `n < m < 3n`, checked to lie in `{0, ±1, ±i}` and to vanish
/// whenever the support conditions fail.
pub fn half_board_sum(m: u32, n: u32, subset: &BTreeSet<u32>) -> Result<GaussianInt> {
    check_window(m as u64, n as u64)?;
    let value = signed_sum(&board::y_board(m, n, subset)?)?;
    if !value.is_zero() && value.unit_exponent().is_none() {
        return Err(Error::Postcondition(format!(
            "S(Y_A) = {value} is neither zero nor a unit (m = {m}, n = {n}, A = {subset:?})"
        )));
    }
    if !value.is_zero() && !half_board_conditions(m, n, subset)? {
        return Err(Error::Postcondition(format!(
            "S(Y_A) = {value} although A = {subset:?} fails the support conditions"
        )));
    }
    Ok(value)
}

/// Parity of `(n−1)/4 − #A/2 + #(A ∩ odd)`, which every tiling of `Y_A` shares
/// as the parity of its horizontal dominoes. A non-integral value means
/// `Y_A` has no tiling.
pub fn ya_parity(m: u32, n: u32, subset: &BTreeSet<u32>) -> Result<u8> {
    check_odd_pair(m as u64, n as u64)?;
    let odd = subset.iter().filter(|&&a| a % 2 == 1).count() as i64;
    let quadrupled = (n as i64 - 1) - 2 * subset.len() as i64 + 4 * odd;
    if quadrupled % 4 != 0 {
        return Err(Error::InvalidParameter(format!(
            "parity expression is {quadrupled}/4, not an integer"
        )));
    }
    Ok((quadrupled / 4).rem_euclid(2) as u8)
}

#[derive(Debug, Clone, Serialize)]
pub struct YTerm {
    pub subset: BTreeSet<u32>,
    pub reflected: GaussianInt,
    pub direct: GaussianInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct YDecomposition {
    pub m: u32,
    pub n: u32,
    pub total: GaussianInt,
    /// Summands `S(Y_{n−Aᶜ})·S(Y_A)` that are nonzero.
    pub nonzero: Vec<YTerm>,
}

/// `Σ_{A ⊆ [n−1]} S(Y_{n−Aᶜ})·S(Y_A)` for odd `m > n`.
pub fn y_decomposition(m: u32, n: u32) -> Result<YDecomposition> {
    check_odd_pair(m as u64, n as u64)?;
    let subsets: Vec<BTreeSet<u32>> = (0u64..1 << (n - 1))
        .map(|mask| (1..n).filter(|a| mask >> (a - 1) & 1 == 1).collect())
        .collect();
    let mut sums: BTreeMap<BTreeSet<u32>, GaussianInt> = BTreeMap::new();
    for a in &subsets {
        sums.insert(a.clone(), signed_sum(&board::y_board(m, n, a)?)?);
    }
    let mut total = GaussianInt::zero();
    let mut nonzero = Vec::new();
    for a in subsets {
        let direct = sums[&a].clone();
        let reflected = sums[&reflected_complement(n, &a)].clone();
        let term = &reflected * &direct;
        if !term.is_zero() {
            total += &term;
            nonzero.push(YTerm {
                subset: a,
                reflected,
                direct,
            });
        }
    }
    Ok(YDecomposition {
        m,
        n,
        total,
        nonzero,
    })
}

/// `S(R_{m−1,n−1})` for odd `n`, assembled from the periodicity, vanishing and
/// half-board results together with the even-half Gauss counter.
pub fn reciprocity_free_sum(m: u64, n: u64) -> Result<BigInt> {
    if m == 0 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "need m ≥ 1 and odd n, got m = {m}, n = {n}"
        )));
    }
    if n == 1 {
        // R_{m−1,0} is empty
        return Ok(BigInt::one());
    }
    if m.gcd(&n) != 1 {
        return Ok(BigInt::zero());
    }
    // Move m by multiples of n into the odd window n < m' < 3n. Each step of +n
    // multiplies the sum by i^{((n−1)² + 2(n−1))/4} = i^{(n²−1)/4}.
    let r = m % n;
    let window_m = if r.is_multiple_of(2) {
        r + n
    } else {
        r + 2 * n
    };
    let steps = (window_m as i64 - m as i64) / n as i64;
    let step_factor = periodicity_factor((n - 1) as u32);
    let step_exponent = step_factor.unit_exponent().expect("power of i") as i64;
    let correction = GaussianInt::i_pow(-steps * step_exponent);

    let (wm, wn) = (window_m as u32, n as u32);
    let a = admissible_a(wm, wn)?;
    let half_board = half_board_sum(wm, wn, &a)?;
    let base = &half_board * &half_board;

    // Painting parity: every tiling of Y_A has h ≡ p, so S(Y_A)² = (−1)^p.
    let parity = ya_parity(wm, wn, &a)?;
    let t = half_residue(window_m, n, 4)?;
    let counter = gauss_sign_even_half(t, n)?.to_gaussian();
    if base != GaussianInt::i_pow(2 * parity as i64) || base != counter {
        return Err(Error::Postcondition(format!(
            "S(Y_A)² = {base}, parity {parity}, even-half counter {counter} disagree \
             (m = {window_m}, n = {n})"
        )));
    }

    let value = &base * &correction;
    value
        .as_real()
        .cloned()
        .ok_or_else(|| Error::Postcondition(format!("reciprocity-free value {value} is not real")))
}
