//! Gaussian integers `a + b·i` over unbounded integers.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> GaussianInt {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_int(re: impl Into<BigInt>) -> GaussianInt {
        GaussianInt::new(re, 0)
    }

    pub fn i() -> GaussianInt {
        GaussianInt::new(0, 1)
    }

    /// `i^k` for any integer exponent.
    pub fn i_pow(k: i64) -> GaussianInt {
        match k.rem_euclid(4) {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    /// Multiplication by `i`, i.e. `(a + bi)·i = −b + ai`.
    pub fn mul_i(&self) -> GaussianInt {
        GaussianInt {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn conj(&self) -> GaussianInt {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The real part when the imaginary part vanishes.
    pub fn as_real(&self) -> Option<&BigInt> {
        self.is_real().then_some(&self.re)
    }

    /// Returns `k` with `self = i^k`, if `self` is a unit.
    pub fn unit_exponent(&self) -> Option<u8> {
        match (self.re.to_i8()?, self.im.to_i8()?) {
            (1, 0) => Some(0),
            (0, 1) => Some(1),
            (-1, 0) => Some(2),
            (0, -1) => Some(3),
            _ => None,
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(v: i64) -> GaussianInt {
        GaussianInt::from_int(v)
    }
}

impl From<BigInt> for GaussianInt {
    fn from(v: BigInt) -> GaussianInt {
        GaussianInt::from_int(v)
    }
}

impl Zero for GaussianInt {
    fn zero() -> GaussianInt {
        GaussianInt::new(0, 0)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianInt {
    fn one() -> GaussianInt {
        GaussianInt::new(1, 0)
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussianInt> for GaussianInt {
    fn add_assign(&mut self, rhs: &GaussianInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: GaussianInt) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl MulAssign<&GaussianInt> for GaussianInt {
    fn mul_assign(&mut self, rhs: &GaussianInt) {
        *self = &*self * rhs;
    }
}

impl Sum for GaussianInt {
    fn sum<I: Iterator<Item = GaussianInt>>(iter: I) -> GaussianInt {
        iter.fold(GaussianInt::zero(), |acc, x| acc + x)
    }
}

impl Product for GaussianInt {
    fn product<I: Iterator<Item = GaussianInt>>(iter: I) -> GaussianInt {
        iter.fold(GaussianInt::one(), |acc, x| acc * x)
    }
}

/// Canonical rendering: `a`, `bi`, `a+bi` or `a-bi` without spaces, with a
/// unit imaginary coefficient written as `i` / `-i`, and zero as `0`.
impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, b: &BigInt, signed: bool| {
            let sign = if b.is_negative() {
                "-"
            } else if signed {
                "+"
            } else {
                ""
            };
            let mag = b.abs();
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{mag}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => imag(f, &self.im, false),
            (false, false) => {
                write!(f, "{}", self.re)?;
                imag(f, &self.im, true)
            }
        }
    }
}

impl Serialize for GaussianInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
