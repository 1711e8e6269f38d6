//! Finite lattice regions with 1-indexed coordinates.
//!
//! A [`Board`] is a set of [`Cell`]s kept in canonical lexicographic order, so
//! iteration, equality and serialization are deterministic. Rectangles,
//! chained L-shapes and the half-rectangles `Y_A` are all plain boards.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A unit square at column `i`, row `j`; both are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub i: u32,
    pub j: u32,
}

impl Cell {
    pub fn new(i: u32, j: u32) -> Result<Cell> {
        if i == 0 || j == 0 {
            return Err(Error::InvalidCell {
                i: i as i64,
                j: j as i64,
            });
        }
        Ok(Cell { i, j })
    }

    /// Checked construction from signed coordinates.
    pub fn from_signed(i: i64, j: i64) -> Result<Cell> {
        if i < 1 || j < 1 || i > u32::MAX as i64 || j > u32::MAX as i64 {
            return Err(Error::InvalidCell { i, j });
        }
        Ok(Cell {
            i: i as u32,
            j: j as u32,
        })
    }

    pub fn right(self) -> Cell {
        Cell {
            i: self.i + 1,
            j: self.j,
        }
    }

    pub fn up(self) -> Cell {
        Cell {
            i: self.i,
            j: self.j + 1,
        }
    }

    pub fn transposed(self) -> Cell {
        Cell {
            i: self.j,
            j: self.i,
        }
    }

    /// Edge-adjacent cells, clipped to the positive quadrant.
    pub fn neighbors(self) -> impl Iterator<Item = Cell> {
        let (i, j) = (self.i as i64, self.j as i64);
        [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
            .into_iter()
            .filter_map(|(a, b)| Cell::from_signed(a, b).ok())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Board {
    cells: BTreeSet<Cell>,
}

impl Board {
    pub fn empty() -> Board {
        Board::default()
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Board {
        Board {
            cells: cells.into_iter().collect(),
        }
    }

    /// Builds a board from raw coordinate pairs, rejecting non-positive ones.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Result<Board> {
        pairs
            .into_iter()
            .map(|(i, j)| Cell::from_signed(i, j))
            .collect::<Result<BTreeSet<_>>>()
            .map(|cells| Board { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.cells.contains(cell)
    }

    /// Cells in lexicographic `(i, j)` order.
    pub fn cells(&self) -> impl DoubleEndedIterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    pub fn first(&self) -> Option<Cell> {
        self.cells.first().copied()
    }

    pub fn is_subset(&self, other: &Board) -> bool {
        self.cells.is_subset(&other.cells)
    }

    pub fn union(&self, other: &Board) -> Board {
        Board {
            cells: self.cells.union(&other.cells).copied().collect(),
        }
    }

    pub fn difference(&self, other: &Board) -> Board {
        Board {
            cells: self.cells.difference(&other.cells).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Board) -> Board {
        Board {
            cells: self.cells.intersection(&other.cells).copied().collect(),
        }
    }

    pub fn insert(&mut self, cell: Cell) -> bool {
        self.cells.insert(cell)
    }

    /// `(max i, max j)` over all cells, `(0, 0)` for the empty board.
    pub fn extent(&self) -> (u32, u32) {
        self.cells
            .iter()
            .fold((0, 0), |(w, h), c| (w.max(c.i), h.max(c.j)))
    }

    pub fn translate(&self, di: i64, dj: i64) -> Result<Board> {
        Board::from_pairs(self.cells().map(|c| (c.i as i64 + di, c.j as i64 + dj)))
    }

    pub fn to_pairs(&self) -> Vec<[u32; 2]> {
        self.cells().map(|c| [c.i, c.j]).collect()
    }
}

impl FromIterator<Cell> for Board {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Board {
        Board::from_cells(iter)
    }
}

impl Serialize for Board {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Board {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Board, D::Error> {
        let pairs = Vec::<[i64; 2]>::deserialize(deserializer)?;
        Board::from_pairs(pairs.into_iter().map(|[i, j]| (i, j))).map_err(serde::de::Error::custom)
    }
}

/// Arm lengths of a chained L-shaped board: `a` are the widths, `b` the heights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LShapeSpec {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl LShapeSpec {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<LShapeSpec> {
        if a.len() != b.len() {
            return Err(Error::UnequalArms {
                widths: a.len(),
                heights: b.len(),
            });
        }
        Ok(LShapeSpec { a, b })
    }

    pub fn widths(&self) -> &[u32] {
        &self.a
    }

    pub fn heights(&self) -> &[u32] {
        &self.b
    }

    pub fn arms(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.a.iter().copied().zip(self.b.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `[w] × [h]`.
pub fn rectangle(w: u32, h: u32) -> Board {
    (1..=w)
        .flat_map(|i| (1..=h).map(move |j| Cell { i, j }))
        .collect()
}

/// Union of the translated hooks `(k−1, k−1) + L(a_k, b_k)`, where
/// `L(a, b) = [a]×[1] ∪ [1]×[b]` and `L(a, b) = ∅` when either arm is zero.
pub fn l_board(spec: &LShapeSpec) -> Board {
    let mut board = Board::empty();
    for (k, (a, b)) in spec.arms().enumerate() {
        if a == 0 || b == 0 {
            continue;
        }
        let k = k as u32;
        for i in 1..=a {
            board.insert(Cell { i: i + k, j: 1 + k });
        }
        for j in 1..=b {
            board.insert(Cell { i: 1 + k, j: j + k });
        }
    }
    board
}

pub(crate) fn check_odd_pair(m: u64, n: u64) -> Result<()> {
    if m.is_multiple_of(2) || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "expected odd m and n, got m = {m}, n = {n}"
        )));
    }
    if m <= n {
        return Err(Error::InvalidParameter(format!(
            "expected m > n, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// The half rectangle `Y = {(i, j) ∈ R_{m−1,n−1} : i + j < (m+n)/2}` plus the
/// anti-diagonal cells `((m+n)/2 − a, a)` for `a ∈ subset`.
pub fn y_board(m: u32, n: u32, subset: &BTreeSet<u32>) -> Result<Board> {
    check_odd_pair(m as u64, n as u64)?;
    if let Some(&bad) = subset.iter().find(|&&a| a == 0 || a >= n) {
        return Err(Error::InvalidParameter(format!(
            "index {bad} is not in [1, {}]",
            n - 1
        )));
    }
    let diag = (m + n) / 2;
    let mut board: Board = rectangle(m - 1, n - 1)
        .cells()
        .filter(|c| c.i + c.j < diag)
        .collect();
    for &a in subset {
        board.insert(Cell { i: diag - a, j: a });
    }
    Ok(board)
}

pub fn transpose(board: &Board) -> Board {
    board.cells().map(Cell::transposed).collect()
}

/// Image of a board inside `R_{m−1,n−1}` under `(i, j) ↦ (m − i, n − j)`.
pub fn rotate180_within(m: u32, n: u32, board: &Board) -> Result<Board> {
    board
        .cells()
        .map(|c| {
            if c.i >= m || c.j >= n {
                Err(Error::InvalidCell {
                    i: c.i as i64,
                    j: c.j as i64,
                })
            } else {
                Ok(Cell {
                    i: m - c.i,
                    j: n - c.j,
                })
            }
        })
        .collect::<Result<BTreeSet<_>>>()
        .map(|cells| Board { cells })
}
