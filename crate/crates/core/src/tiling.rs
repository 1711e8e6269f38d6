//! Domino tilings and the signed sum `S(X) = Σ_D i^{h(D)}`.
//!
//! Two independent evaluators are provided. [`enumerate_tilings`] backtracks
//! over every tiling and is the oracle for everything else; [`signed_sum`] and
//! [`count_tilings`] run a column-sweep broken-profile DP whose state is the
//! set of cells already covered by dominoes protruding from the previous
//! column. Cells missing from the board are treated as permanently blocked, so
//! the same sweep handles rectangles, L-shapes and half-rectangles alike.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::board::{self, Board, Cell};
use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;

/// Default cell limit for brute-force enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 36;

/// Largest profile (shorter bounding-box side) the DP accepts.
pub const DEFAULT_PROFILE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub fn code(self) -> &'static str {
        match self {
            Orientation::Horizontal => "h",
            Orientation::Vertical => "v",
        }
    }
}

/// Two edge-adjacent cells, stored with the lexicographically smaller first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domino {
    first: Cell,
    second: Cell,
}

impl Domino {
    pub fn new(a: Cell, b: Cell) -> Result<Domino> {
        let (first, second) = if a <= b { (a, b) } else { (b, a) };
        if first.right() == second || first.up() == second {
            Ok(Domino { first, second })
        } else {
            Err(Error::NotATiling(format!("{a} and {b} are not adjacent")))
        }
    }

    pub fn horizontal(at: Cell) -> Domino {
        Domino {
            first: at,
            second: at.right(),
        }
    }

    pub fn vertical(at: Cell) -> Domino {
        Domino {
            first: at,
            second: at.up(),
        }
    }

    pub fn first(&self) -> Cell {
        self.first
    }

    pub fn second(&self) -> Cell {
        self.second
    }

    pub fn cells(&self) -> [Cell; 2] {
        [self.first, self.second]
    }

    pub fn orientation(&self) -> Orientation {
        if self.first.j == self.second.j {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.orientation() == Orientation::Horizontal
    }

    pub fn transposed(&self) -> Domino {
        Domino {
            first: self.first.transposed(),
            second: self.second.transposed(),
        }
    }
}

impl Serialize for Domino {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Domino", 2)?;
        s.serialize_field(
            "cells",
            &[[self.first.i, self.first.j], [self.second.i, self.second.j]],
        )?;
        s.serialize_field("orientation", self.orientation().code())?;
        s.end()
    }
}

/// A perfect matching of a board by dominoes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tiling {
    board: Board,
    dominoes: BTreeSet<Domino>,
}

impl Tiling {
    /// Validates that `dominoes` cover every cell of `board` exactly once.
    pub fn new<I: IntoIterator<Item = Domino>>(board: Board, dominoes: I) -> Result<Tiling> {
        let dominoes: BTreeSet<Domino> = dominoes.into_iter().collect();
        let mut seen = BTreeSet::new();
        for d in &dominoes {
            for c in d.cells() {
                if !board.contains(&c) {
                    return Err(Error::NotATiling(format!("{c} is not on the board")));
                }
                if !seen.insert(c) {
                    return Err(Error::NotATiling(format!("{c} is covered twice")));
                }
            }
        }
        if seen.len() != board.len() {
            return Err(Error::NotATiling(format!(
                "{} of {} cells covered",
                seen.len(),
                board.len()
            )));
        }
        Ok(Tiling { board, dominoes })
    }

    pub fn empty() -> Tiling {
        Tiling {
            board: Board::empty(),
            dominoes: BTreeSet::new(),
        }
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn dominoes(&self) -> impl Iterator<Item = &Domino> {
        self.dominoes.iter()
    }

    pub fn len(&self) -> usize {
        self.dominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominoes.is_empty()
    }

    pub fn contains(&self, d: &Domino) -> bool {
        self.dominoes.contains(d)
    }

    /// `h(D)`.
    pub fn horizontal_count(&self) -> usize {
        self.dominoes.iter().filter(|d| d.is_horizontal()).count()
    }

    /// `i^{h(D)}`.
    pub fn sign(&self) -> GaussianInt {
        GaussianInt::i_pow(self.horizontal_count() as i64)
    }

    pub fn covering(&self) -> BTreeMap<Cell, Domino> {
        self.dominoes
            .iter()
            .flat_map(|d| d.cells().map(|c| (c, *d)))
            .collect()
    }

    pub fn transposed(&self) -> Tiling {
        Tiling {
            board: board::transpose(&self.board),
            dominoes: self.dominoes.iter().map(Domino::transposed).collect(),
        }
    }

    /// Rotates the 2×2 square with lower-left corner `at`, if two parallel
    /// dominoes of this tiling cover it.
    pub fn flip_at(&self, at: Cell) -> Option<Tiling> {
        let (lo_h, hi_h) = (Domino::horizontal(at), Domino::horizontal(at.up()));
        let (lo_v, hi_v) = (Domino::vertical(at), Domino::vertical(at.right()));
        let (remove, add) = if self.contains(&lo_h) && self.contains(&hi_h) {
            ([lo_h, hi_h], [lo_v, hi_v])
        } else if self.contains(&lo_v) && self.contains(&hi_v) {
            ([lo_v, hi_v], [lo_h, hi_h])
        } else {
            return None;
        };
        let mut dominoes = self.dominoes.clone();
        for d in remove {
            dominoes.remove(&d);
        }
        dominoes.extend(add);
        Some(Tiling {
            board: self.board.clone(),
            dominoes,
        })
    }
}

impl Serialize for Tiling {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.dominoes.iter())
    }
}

pub fn horizontal_count(t: &Tiling) -> usize {
    t.horizontal_count()
}

pub fn enumerate_tilings(board: &Board) -> Result<Vec<Tiling>> {
    enumerate_tilings_with_limit(board, DEFAULT_ENUMERATION_LIMIT)
}

/// All tilings of `board`, in the order produced by always covering the
/// lexicographically smallest free cell, horizontal placement first.
pub fn enumerate_tilings_with_limit(board: &Board, limit: usize) -> Result<Vec<Tiling>> {
    if board.len() > limit {
        return Err(Error::SizeLimit {
            cells: board.len(),
            limit,
        });
    }
    let mut out = Vec::new();
    if board.len() % 2 == 1 {
        return Ok(out);
    }
    let cells: Vec<Cell> = board.cells().collect();
    let mut covered = BTreeSet::new();
    let mut chosen = Vec::with_capacity(cells.len() / 2);
    backtrack(board, &cells, 0, &mut covered, &mut chosen, &mut out);
    Ok(out)
}

fn backtrack(
    board: &Board,
    cells: &[Cell],
    mut pos: usize,
    covered: &mut BTreeSet<Cell>,
    chosen: &mut Vec<Domino>,
    out: &mut Vec<Tiling>,
) {
    while pos < cells.len() && covered.contains(&cells[pos]) {
        pos += 1;
    }
    if pos == cells.len() {
        out.push(Tiling {
            board: board.clone(),
            dominoes: chosen.iter().copied().collect(),
        });
        return;
    }
    // Smaller neighbours of the first free cell are already covered.
    let c = cells[pos];
    for other in [c.right(), c.up()] {
        if board.contains(&other) && !covered.contains(&other) {
            covered.insert(c);
            covered.insert(other);
            chosen.push(Domino::new(c, other).expect("adjacent"));
            backtrack(board, cells, pos + 1, covered, chosen, out);
            chosen.pop();
            covered.remove(&other);
            covered.remove(&c);
        }
    }
}

pub fn signed_sum_bruteforce(board: &Board) -> Result<GaussianInt> {
    signed_sum_bruteforce_with_limit(board, DEFAULT_ENUMERATION_LIMIT)
}

pub fn signed_sum_bruteforce_with_limit(board: &Board, limit: usize) -> Result<GaussianInt> {
    Ok(enumerate_tilings_with_limit(board, limit)?
        .iter()
        .map(Tiling::sign)
        .sum())
}

/// Weights accumulated by the profile DP.
trait DpWeight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn accumulate(&mut self, other: Self);
    /// Weight after placing one horizontal domino.
    fn horizontal(self) -> Self;
}

impl DpWeight for GaussianInt {
    fn zero() -> Self {
        <GaussianInt as Zero>::zero()
    }
    fn one() -> Self {
        <GaussianInt as One>::one()
    }
    fn accumulate(&mut self, other: Self) {
        *self += other;
    }
    fn horizontal(self) -> Self {
        self.mul_i()
    }
}

impl DpWeight for BigUint {
    fn zero() -> Self {
        <BigUint as Zero>::zero()
    }
    fn one() -> Self {
        <BigUint as One>::one()
    }
    fn accumulate(&mut self, other: Self) {
        *self += other;
    }
    fn horizontal(self) -> Self {
        self
    }
}

/// Occupancy grid over the bounding box, oriented so the profile runs along
/// the shorter side.
struct Grid {
    cols: usize,
    rows: usize,
    present: Vec<bool>,
    /// Whether grid columns are board rows.
    transposed: bool,
}

impl Grid {
    fn new(board: &Board, limit: usize) -> Result<Grid> {
        let (mut i0, mut i1, mut j0, mut j1) = (u32::MAX, 0, u32::MAX, 0);
        for c in board.cells() {
            i0 = i0.min(c.i);
            i1 = i1.max(c.i);
            j0 = j0.min(c.j);
            j1 = j1.max(c.j);
        }
        let width = (i1 - i0 + 1) as usize;
        let height = (j1 - j0 + 1) as usize;
        let transposed = height > width;
        let (cols, rows) = if transposed {
            (height, width)
        } else {
            (width, height)
        };
        if rows > limit {
            return Err(Error::ProfileLimit {
                height: rows,
                limit,
            });
        }
        let mut present = vec![false; cols * rows];
        for c in board.cells() {
            let (x, y) = ((c.i - i0) as usize, (c.j - j0) as usize);
            let (col, row) = if transposed { (y, x) } else { (x, y) };
            present[col * rows + row] = true;
        }
        Ok(Grid {
            cols,
            rows,
            present,
            transposed,
        })
    }

    fn has(&self, col: usize, row: usize) -> bool {
        col < self.cols && row < self.rows && self.present[col * self.rows + row]
    }
}

fn profile_dp<W: DpWeight>(board: &Board, limit: usize) -> Result<W> {
    if board.is_empty() {
        return Ok(W::one());
    }
    let grid = Grid::new(board, limit)?;
    if board.len() % 2 == 1 {
        return Ok(W::zero());
    }
    // Bit r of a state: the cell in row r of the sweep frontier is covered.
    // Rows above the cursor refer to the next column, rows at or below it to
    // the current column.
    let mut states: HashMap<u32, W> = HashMap::from([(0, W::one())]);
    for col in 0..grid.cols {
        for row in 0..grid.rows {
            let bit = 1u32 << row;
            let mut next: HashMap<u32, W> = HashMap::with_capacity(states.len() * 2);
            let mut push = |mask: u32, w: W| match next.get_mut(&mask) {
                Some(acc) => acc.accumulate(w),
                None => {
                    next.insert(mask, w);
                }
            };
            for (mask, w) in states {
                if mask & bit != 0 || !grid.has(col, row) {
                    push(mask & !bit, w);
                    continue;
                }
                let across = grid.has(col + 1, row);
                let along = grid.has(col, row + 1) && mask & (bit << 1) == 0;
                // In the transposed frame, board-horizontal dominoes run along the column.
                match (across, along) {
                    (true, true) => {
                        let (w_across, w_along) = if grid.transposed {
                            (w.clone(), w.horizontal())
                        } else {
                            (w.clone().horizontal(), w)
                        };
                        push(mask | bit, w_across);
                        push(mask | (bit << 1), w_along);
                    }
                    (true, false) => {
                        let w = if grid.transposed { w } else { w.horizontal() };
                        push(mask | bit, w);
                    }
                    (false, true) => {
                        let w = if grid.transposed { w.horizontal() } else { w };
                        push(mask | (bit << 1), w);
                    }
                    (false, false) => {}
                }
            }
            states = next;
        }
    }
    Ok(states.remove(&0).unwrap_or_else(W::zero))
}

pub fn signed_sum(board: &Board) -> Result<GaussianInt> {
    signed_sum_with_limit(board, DEFAULT_PROFILE_LIMIT)
}

/// `S(X)` by transfer-matrix DP; `limit` bounds the shorter bounding-box side.
pub fn signed_sum_with_limit(board: &Board, limit: usize) -> Result<GaussianInt> {
    profile_dp(board, limit)
}

pub fn count_tilings(board: &Board) -> Result<BigUint> {
    count_tilings_with_limit(board, DEFAULT_PROFILE_LIMIT)
}

pub fn count_tilings_with_limit(board: &Board, limit: usize) -> Result<BigUint> {
    profile_dp(board, limit)
}

/// Every tiling one flip away from `t`, ordered by the flipped square.
pub fn flip_moves(t: &Tiling) -> Vec<Tiling> {
    t.dominoes().filter_map(|d| t.flip_at(d.first())).collect()
}

/// The tiling of `R_{m,n}` by vertical dominoes only.
pub fn totally_vertical(m: u32, n: u32) -> Result<Tiling> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "height {n} is odd, no totally vertical tiling"
        )));
    }
    let dominoes = (1..=m)
        .flat_map(|i| {
            (1..n)
                .step_by(2)
                .map(move |j| Domino::vertical(Cell { i, j }))
        })
        .collect();
    Ok(Tiling {
        board: board::rectangle(m, n),
        dominoes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizeStrategy {
    /// Constructive diagonal-staircase flips, column pair by column pair.
    #[default]
    Staircase,
    /// Shortest flip path found by breadth-first search.
    Bfs,
}

pub fn normalize_to_vertical(t: &Tiling, m: u32, n: u32) -> Result<Vec<Tiling>> {
    normalize_to_vertical_with(t, m, n, NormalizeStrategy::Staircase)
}

/// A flip path from `t` to the totally vertical tiling of `R_{m,n}`, `n` even.
/// The first element is `t` itself; consecutive tilings differ by one flip.
pub fn normalize_to_vertical_with(
    t: &Tiling,
    m: u32,
    n: u32,
    strategy: NormalizeStrategy,
) -> Result<Vec<Tiling>> {
    let target = totally_vertical(m, n)?;
    if t.board() != target.board() {
        return Err(Error::InvalidParameter(format!(
            "tiling is not a tiling of the {m} × {n} rectangle"
        )));
    }
    match strategy {
        NormalizeStrategy::Staircase => staircase_path(t, m, n, &target),
        NormalizeStrategy::Bfs => bfs_path(t, &target),
    }
}

fn staircase_path(t: &Tiling, m: u32, n: u32, target: &Tiling) -> Result<Vec<Tiling>> {
    let mut path = vec![t.clone()];
    for x in (1..m).step_by(2) {
        for y in (1..n).step_by(2) {
            make_vertical(&mut path, Cell { i: x, j: y })?;
            make_vertical(&mut path, Cell { i: x + 1, j: y })?;
        }
    }
    // An odd last column is forced once every other column is vertical.
    if path.last() != Some(target) {
        return Err(Error::NotATiling(
            "staircase procedure did not reach the vertical tiling".into(),
        ));
    }
    Ok(path)
}

/// Flips until `c` is the lower cell of a vertical domino. Everything to the
/// left of `c`'s column and below `c` in it is already vertical.
fn make_vertical(path: &mut Vec<Tiling>, c: Cell) -> Result<()> {
    let current = path.last().expect("path starts non-empty");
    let cover = current.covering();
    let d = cover[&c];
    if d == Domino::vertical(c) {
        return Ok(());
    }
    if d != Domino::horizontal(c) {
        return Err(Error::NotATiling(format!(
            "{c} is covered from an already normalized cell"
        )));
    }
    // q_k = c + (⌈k/2⌉ − 1, ⌈(k+1)/2⌉ − 1)
    let q = |k: u32| Cell {
        i: c.i + k.div_ceil(2) - 1,
        j: c.j + (k + 2) / 2 - 1,
    };
    let orientation = |cell: Cell| cover.get(&cell).map(Domino::orientation);
    let mut k = 1;
    loop {
        match (orientation(q(k)), orientation(q(k + 1))) {
            (Some(a), Some(b)) if a == b => break,
            (Some(_), Some(_)) => k += 1,
            _ => {
                return Err(Error::NotATiling(format!(
                    "staircase from {c} left the board"
                )))
            }
        }
    }
    for step in (1..=k).rev() {
        let next = path
            .last()
            .and_then(|t| t.flip_at(q(step)))
            .ok_or_else(|| Error::NotATiling(format!("square at {} is not flippable", q(step))))?;
        path.push(next);
    }
    Ok(())
}

fn bfs_path(start: &Tiling, target: &Tiling) -> Result<Vec<Tiling>> {
    let mut parent: HashMap<Tiling, Option<Tiling>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(t) = queue.pop_front() {
        if &t == target {
            let mut path = vec![t.clone()];
            let mut cur = t;
            while let Some(Some(prev)) = parent.get(&cur) {
                path.push(prev.clone());
                cur = prev.clone();
            }
            path.reverse();
            return Ok(path);
        }
        for u in flip_moves(&t) {
            if !parent.contains_key(&u) {
                parent.insert(u.clone(), Some(t.clone()));
                queue.push_back(u);
            }
        }
    }
    Err(Error::NotATiling(
        "vertical tiling is unreachable by flips".into(),
    ))
}

/// Tilings reachable from `start` by flips, including `start`.
pub fn flip_component(start: &Tiling) -> BTreeSet<Tiling> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(t) = queue.pop_front() {
        for u in flip_moves(&t) {
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    seen
}
