use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::bernoulli::{scaled_bernoulli, MAX_BERNOULLI_INDEX};
use crate::error::{Error, Result};
use crate::numeric::{ensure_finite, exprel};

/// Euler–Maclaurin parameters: the head sum runs over `n < ⌈scale·|s|⌉ + offset`
/// and `order` Bernoulli correction terms are added.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerMaclaurin {
    pub scale: f64,
    pub offset: usize,
    pub order: usize,
}

impl Default for EulerMaclaurin {
    fn default() -> Self {
        EulerMaclaurin {
            scale: 1.0,
            offset: 20,
            order: 20,
        }
    }
}

impl EulerMaclaurin {
    /// Shorter head with more correction terms, for heights in the thousands
    /// and beyond. The correction series then converges geometrically with
    /// ratio about `1 / (2π · 0.25) ≈ 0.64` per order.
    pub fn large_height() -> Self {
        EulerMaclaurin {
            scale: 0.25,
            offset: 30,
            order: 50,
        }
    }

    pub fn with_order(self, order: usize) -> Self {
        EulerMaclaurin { order, ..self }
    }

    pub fn truncation(&self, s_abs: f64) -> usize {
        (self.scale * s_abs).ceil() as usize + self.offset
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.scale >= 0.0 && self.scale.is_finite()) || self.offset == 0 {
            return Err(Error::domain("Euler–Maclaurin scale must be ≥ 0 and offset ≥ 1"));
        }
        if self.order == 0 || self.order > MAX_BERNOULLI_INDEX {
            return Err(Error::domain(format!(
                "Euler–Maclaurin order must lie in 1..={MAX_BERNOULLI_INDEX}"
            )));
        }
        Ok(())
    }
}

/// A value together with a bound on its truncation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: Complex64,
    pub error_bound: f64,
}

/// Tail `Σ_{n≥0} (x+n)^{-s}` minus its pole part `1/(s-1)`, by Euler–Maclaurin
/// at the point `x`, with a bound on the omitted remainder.
pub(crate) fn em_tail_regular(s: Complex64, x: f64, order: usize) -> (Complex64, f64) {
    (em_tail_value(s, x, order), remainder_bound(s, x, order))
}

/// [`em_tail_regular`] without the remainder bound.
pub(crate) fn em_tail_value(s: Complex64, x: f64, order: usize) -> Complex64 {
    let log_x = x.ln();
    let x_pow = (-s * log_x).exp();
    let one = Complex64::new(1.0, 0.0);
    // ((x^{1-s} - 1) / (s - 1)
    let integral = -log_x * exprel((one - s) * log_x);
    let mut total = integral + 0.5 * x_pow;

    let table = scaled_bernoulli();
    let inv_x2 = 1.0 / (x * x);
    // T_1 = B_2/2! · s · x^{-s-1}
    let mut term = table[1] * s * x_pow / x;
    total += term;
    for k in 2..=order {
        let a = s + (2 * k - 3) as f64;
        let b = s + (2 * k - 2) as f64;
        term = term * a * b * inv_x2 * (table[k] / table[k - 1]);
        total += term;
    }
    total
}

// 4|(s)_{2M}| / (2π)^{2M} · x^{-(σ+2M-1)} / (σ+2M-1), evaluated in logs.
fn remainder_bound(s: Complex64, x: f64, order: usize) -> f64 {
    let two_m = 2 * order;
    let denom = s.re + two_m as f64 - 1.0;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let mut log_bound = 4.0_f64.ln() - two_m as f64 * (2.0 * PI).ln() - denom * x.ln() - denom.ln();
    for j in 0..two_m {
        log_bound += (s + j as f64).norm().ln();
    }
    log_bound.exp()
}

/// `ζ(s, a) - 1/(s-1)` for any `a > 0`; finite at `s = 1`.
pub(crate) fn hurwitz_regular(s: Complex64, a: f64, em: &EulerMaclaurin) -> (Complex64, f64) {
    let n = em.truncation(s.norm());
    let mut head = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    for j in 0..n {
        let log = (j as f64 + a).ln();
        let term = (-s * log).exp();
        head += term;
        rounding += term.norm() * rounding_weight(s, log);
    }
    let x = n as f64 + a;
    let (tail, bound) = em_tail_regular(s, x, em.order);
    rounding += tail.norm() * rounding_weight(s, x.ln());
    (head + tail, bound + rounding)
}

/// First-order rounding error of a term `x^{-s}` relative to its size: the
/// phase `t·ln x` carries an absolute error of about `|s|·|ln x|·ε`.
pub(crate) fn rounding_weight(s: Complex64, log: f64) -> f64 {
    f64::EPSILON * (4.0 + s.norm() * log.abs())
}

pub(crate) fn is_pole_point(s: Complex64) -> bool {
    s.re == 1.0 && s.im == 0.0
}

/// The Hurwitz zeta-function `ζ(s, α) = Σ_{n≥0} (n+α)^{-s}` continued to
/// `s ≠ 1`, for `0 < α ≤ 1`.
pub fn hurwitz_zeta(s: Complex64, alpha: f64) -> Result<Evaluation> {
    hurwitz_zeta_with(s, alpha, &EulerMaclaurin::default())
}

pub fn hurwitz_zeta_with(s: Complex64, alpha: f64, em: &EulerMaclaurin) -> Result<Evaluation> {
    ensure_finite(s)?;
    em.validate()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("Hurwitz parameter α = {alpha} outside (0, 1]")));
    }
    if is_pole_point(s) {
        return Err(Error::Pole(s));
    }
    let (regular, error_bound) = hurwitz_regular(s, alpha, em);
    let pole = 1.0 / (s - 1.0);
    Ok(Evaluation {
        value: regular + pole,
        error_bound: error_bound + f64::EPSILON * (regular.norm() + pole.norm()),
    })
}
