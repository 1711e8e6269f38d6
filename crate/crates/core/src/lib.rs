//! Exact signed domino-tiling sums and their number-theoretic counterparts.
//!
//! For a board `X` the signed sum is `S(X) = Σ_D i^{h(D)}`, where `D` runs over
//! the domino tilings of `X` and `h(D)` counts horizontal dominoes. On the
//! rectangle `R_{m−1,n−1}` (width `m − 1`, height `n − 1`) with `n` odd the sum
//! equals the Jacobi symbol `(m/n)` for odd `m` and `(m/2 / n)` for even `m`.
//!
//! The crate computes both sides by several independent routes:
//!
//! - [`tiling`]: brute-force enumeration and a broken-profile transfer-matrix DP;
//! - [`kasteleyn`]: the signed adjacency operator on the reflected quotient
//!   space and its fraction-free determinant;
//! - [`spectral`]: floating-point cosine and root-of-unity products;
//! - [`residue`]: the Jacobi symbol and two Gauss-lemma style counters;
//! - [`decomp`]: board decompositions that evaluate the sum without any
//!   appeal to quadratic reciprocity.

pub mod board;
pub mod decomp;
pub mod error;
pub mod gaussian;
pub mod kasteleyn;
pub mod residue;
pub mod spectral;
pub mod tiling;

pub use board::{Board, Cell, LShapeSpec};
pub use error::{Error, Result};
pub use gaussian::GaussianInt;
pub use kasteleyn::SignedMatrix;
pub use residue::ResidueSign;
pub use spectral::ComplexApprox;
pub use tiling::{Domino, Orientation, Tiling};
