use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) fn cis(angle: f64) -> Complex64 {
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// `e^{2πix}` with the angle reduced in turns, exact at multiples of a quarter turn.
pub(crate) fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.round();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if r.abs() == 0.5 {
        Complex64::new(-1.0, 0.0)
    } else if r == 0.25 {
        Complex64::new(0.0, 1.0)
    } else if r == -0.25 {
        Complex64::new(0.0, -1.0)
    } else {
        cis(2.0 * std::f64::consts::PI * r)
    }
}

pub(crate) fn ensure_finite(s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("non-finite point {s}")))
    }
}

/// `(e^w - 1) / w`, continuous at `w = 0`.
pub(crate) fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        // Σ w^k / (k+1)!, 24 terms leave < 0.5^24 / 25! relative error.
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..24 {
            term = term * w / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Neumaier-compensated sum of reals.
pub(crate) fn sum_compensated(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0, 0.0);
    for x in values {
        sum = neumaier(sum, x, &mut comp);
    }
    sum + comp
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Dot product accumulated in double-double arithmetic.
pub(crate) fn dot_extended(a: &[f64], b: &[f64]) -> f64 {
    let (mut hi, mut lo) = (0.0_f64, 0.0_f64);
    for (&x, &y) in a.iter().zip(b) {
        let (p, pe) = two_prod(x, y);
        let (s, se) = two_sum(hi, p);
        hi = s;
        lo += se + pe;
    }
    hi + lo
}

/// Format with 17 significant digits, the width used by every CSV writer.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
