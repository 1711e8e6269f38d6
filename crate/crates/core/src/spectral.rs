//! Floating-point product formulas: the root-of-unity norm product that
//! equals `det K`, the cosine product counting tilings of `R_{m−1,n−1}`, and
//! the cosine product for the Legendre symbol of two odd primes.
//!
//! Every root of unity is produced directly from its angle `2πk/N`; nothing is
//! obtained by repeated multiplication, so each factor carries only the
//! rounding of one `sin`/`cos` evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default absolute tolerance for sign-valued products.
pub const SIGN_TOLERANCE: f64 = 1e-6;

/// Default relative tolerance for tiling counts.
pub const COUNT_TOLERANCE: f64 = 1e-6;

/// Magnitude above which a running product is rescaled by a power of two.
const RENORM_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64) -> ComplexApprox {
        ComplexApprox { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex64> for ComplexApprox {
    fn from(z: Complex64) -> ComplexApprox {
        ComplexApprox { re: z.re, im: z.im }
    }
}

/// `ζ_N^k = e^{2πik/N}`.
pub fn root_of_unity(k: i64, big_n: u64) -> Complex64 {
    let k = k.rem_euclid(big_n as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / big_n as f64)
}

/// Running product kept as `mantissa · 2^exponent`.
struct ScaledProduct {
    mantissa: Complex64,
    exponent: i32,
}

impl ScaledProduct {
    fn new() -> ScaledProduct {
        ScaledProduct {
            mantissa: Complex64::new(1.0, 0.0),
            exponent: 0,
        }
    }

    fn mul(&mut self, factor: Complex64) {
        self.mantissa *= factor;
        let norm = self.mantissa.norm();
        if norm > RENORM_THRESHOLD || (norm != 0.0 && norm < 1.0 / RENORM_THRESHOLD) {
            let shift = norm.log2().round() as i32;
            self.mantissa = self.mantissa.unscale(2f64.powi(shift));
            self.exponent += shift;
        }
    }

    fn finish(self) -> Complex64 {
        self.mantissa.scale(2f64.powi(self.exponent))
    }
}

fn check_odd(name: &str, v: u64) -> Result<()> {
    if v == 0 || v.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be odd and positive, got {v}"
        )));
    }
    Ok(())
}

/// `∏_{i=1}^{m−1} ∏_{j=1}^{(n−1)/2} (ζ_{2m}^i + ζ_{2m}^{−i} + ζ_n^j + ζ_n^{−j})`.
pub fn norm_product(m: u64, n: u64) -> Result<ComplexApprox> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    check_odd("n", n)?;
    let mut acc = ScaledProduct::new();
    for i in 1..m {
        let x = root_of_unity(i as i64, 2 * m) + root_of_unity(-(i as i64), 2 * m);
        for j in 1..=(n - 1) / 2 {
            let y = root_of_unity(j as i64, n) + root_of_unity(-(j as i64), n);
            acc.mul(x + y);
        }
    }
    finite(acc.finish().into())
}

/// `∏_{j=1}^{(n−1)/2} (ξ^{mj} − 1)/(ξ^j − 1)` with `ξ = ζ_n²`; unimodular for
/// coprime `m, n`.
pub fn xi_quotient_product(m: u64, n: u64) -> Result<ComplexApprox> {
    check_odd("n", n)?;
    let mut acc = ScaledProduct::new();
    let one = Complex64::new(1.0, 0.0);
    for j in 1..=(n - 1) / 2 {
        let num = root_of_unity(2 * ((m * j) % n) as i64, n) - one;
        let den = root_of_unity(2 * j as i64, n) - one;
        acc.mul(num / den);
    }
    finite(acc.finish().into())
}

/// Cosine product for the number of tilings of `R_{m−1,n−1}`, `m`, `n` odd.
pub fn ktf_count(m: u64, n: u64) -> Result<f64> {
    check_odd("m", m)?;
    check_odd("n", n)?;
    cos_squared_product(m, n, 1.0)
}

/// Cosine product whose value is the Legendre symbol `(q/p)`.
pub fn eisenstein_product(p: u64, q: u64) -> Result<f64> {
    check_odd("p", p)?;
    check_odd("q", q)?;
    if p == q {
        return Err(Error::InvalidParameter("p and q must differ".into()));
    }
    cos_squared_product(p, q, -1.0)
}

/// `4^{(a−1)/2·(b−1)/2} ∏_j ∏_k (cos²(2πj/a) + sign·cos²(2πk/b))`.
fn cos_squared_product(a: u64, b: u64, sign: f64) -> Result<f64> {
    let mut acc = ScaledProduct::new();
    for j in 1..=(a - 1) / 2 {
        let cj = (2.0 * PI * j as f64 / a as f64).cos();
        for k in 1..=(b - 1) / 2 {
            let ck = (2.0 * PI * k as f64 / b as f64).cos();
            acc.mul(Complex64::new(4.0 * (cj * cj + sign * ck * ck), 0.0));
        }
    }
    let value = acc.finish().re;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter("product overflowed".into()))
    }
}

fn finite(z: ComplexApprox) -> Result<ComplexApprox> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::InvalidParameter("product overflowed".into()))
    }
}

/// Nearest integer to `z`, provided both residuals are within `tol`.
pub fn round_signed(z: ComplexApprox, tol: f64) -> Result<i64> {
    let nearest = z.re.round();
    let re_residual = (z.re - nearest).abs();
    let im_residual = z.im.abs();
    if !(re_residual <= tol && im_residual <= tol) {
        return Err(Error::Tolerance {
            re_residual,
            im_residual,
            tol,
        });
    }
    nearest.to_i64().ok_or(Error::Tolerance {
        re_residual,
        im_residual,
        tol,
    })
}

/// `|approx − exact| ≤ tol · max(|exact|, 1)`.
pub fn within_relative(approx: f64, exact: f64, tol: f64) -> bool {
    (approx - exact).abs() <= tol * exact.abs().max(1.0)
}
