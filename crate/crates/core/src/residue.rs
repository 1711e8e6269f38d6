//! Jacobi symbols and the two Gauss-lemma counters.
//!
//! [`jacobi`] is the textbook reduce-and-flip algorithm and therefore relies
//! on quadratic reciprocity. [`gauss_sign`] and [`gauss_sign_even_half`] only
//! count how multiplication by a unit permutes a half system of residues; the
//! reciprocity-free evaluation in [`crate::decomp`] uses the latter alone.

use std::cell::Cell as StdCell;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidueSign {
    MinusOne,
    Zero,
    One,
}

impl ResidueSign {
    pub fn value(self) -> i64 {
        match self {
            ResidueSign::MinusOne => -1,
            ResidueSign::Zero => 0,
            ResidueSign::One => 1,
        }
    }

    /// `(−1)^count`.
    pub fn from_parity(count: usize) -> ResidueSign {
        if count.is_multiple_of(2) {
            ResidueSign::One
        } else {
            ResidueSign::MinusOne
        }
    }

    pub fn from_value(v: i64) -> Option<ResidueSign> {
        match v {
            -1 => Some(ResidueSign::MinusOne),
            0 => Some(ResidueSign::Zero),
            1 => Some(ResidueSign::One),
            _ => None,
        }
    }

    pub fn to_gaussian(self) -> GaussianInt {
        GaussianInt::from(self.value())
    }
}

impl std::ops::Mul for ResidueSign {
    type Output = ResidueSign;
    fn mul(self, rhs: ResidueSign) -> ResidueSign {
        ResidueSign::from_value(self.value() * rhs.value()).expect("closed under products")
    }
}

impl fmt::Display for ResidueSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for ResidueSign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.value())
    }
}

thread_local! {
    static JACOBI_CALLS: StdCell<u64> = const { StdCell::new(0) };
}

/// Number of [`jacobi`] evaluations made on the current thread so far.
pub fn jacobi_call_count() -> u64 {
    JACOBI_CALLS.with(StdCell::get)
}

fn check_odd_modulus(n: u64) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "modulus must be odd and positive, got {n}"
        )));
    }
    Ok(())
}

/// The Jacobi symbol `(a/n)` for odd `n ≥ 1`.
pub fn jacobi(a: u64, n: u64) -> Result<ResidueSign> {
    check_odd_modulus(n)?;
    JACOBI_CALLS.with(|c| c.set(c.get() + 1));
    let (mut a, mut n) = (a % n, n);
    let mut negate = false;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            negate = !negate;
        }
        if a % 4 == 3 && n % 4 == 3 {
            negate = !negate;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(match (n, negate) {
        (1, false) => ResidueSign::One,
        (1, true) => ResidueSign::MinusOne,
        _ => ResidueSign::Zero,
    })
}

fn check_coprime(a: u64, n: u64) -> Result<()> {
    if a.gcd(&n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    Ok(())
}

/// `(−1)^{#G_n}` where `G_n` collects the `j ∈ {1, …, (n−1)/2}` whose multiple
/// `m·j` has a negative representative in `(−n/2, n/2)`.
pub fn gauss_sign(m: u64, n: u64) -> Result<ResidueSign> {
    check_odd_modulus(n)?;
    check_coprime(m, n)?;
    let m = m % n;
    let flipped = (1..=(n - 1) / 2)
        .filter(|&j| (m as u128 * j as u128 % n as u128) as u64 > n / 2)
        .count();
    Ok(ResidueSign::from_parity(flipped))
}

/// `(−1)^{#G_{n,t}}` over the even half system `{2, 4, …, n−1}`: `i` lands in
/// the negated set exactly when `t·i mod n` is odd.
pub fn gauss_sign_even_half(t: u64, n: u64) -> Result<ResidueSign> {
    check_odd_modulus(n)?;
    check_coprime(t, n)?;
    let t = t % n;
    let flipped = (1..=(n - 1) / 2)
        .map(|k| 2 * k)
        .filter(|&i| (t as u128 * i as u128 % n as u128) % 2 == 1)
        .count();
    Ok(ResidueSign::from_parity(flipped))
}

/// The right-hand side of the tiling identity: `(m/n)` for odd `m`, `(m/2 / n)`
/// for even `m`.
pub fn theorem_rhs(m: u64, n: u64) -> Result<ResidueSign> {
    if m % 2 == 1 {
        jacobi(m, n)
    } else {
        jacobi(m / 2, n)
    }
}

/// `m · d⁻¹ mod n`, in `[0, n)`.
pub fn half_residue(m: u64, n: u64, d: u64) -> Result<u64> {
    check_odd_modulus(n)?;
    if d != 2 && d != 4 {
        return Err(Error::InvalidParameter(format!(
            "divisor must be 2 or 4, got {d}"
        )));
    }
    check_coprime(m, n)?;
    let inv = mod_inverse(d, n).expect("powers of two are units modulo odd n");
    Ok((m % n) * inv % n)
}

pub(crate) fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}
