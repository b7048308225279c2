use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hurwitz::{
    em_tail_regular, em_tail_value, hurwitz_regular, is_pole_point, rounding_weight, EulerMaclaurin, Evaluation,
};
use crate::error::{Error, Result};
use crate::numeric::ensure_finite;

/// One period of a periodic coefficient sequence; `coeffs[r]` is the value
/// at every index `m ≡ r (mod period)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence", into = "RawSequence")]
pub struct PeriodicSequence {
    coeffs: Vec<Complex64>,
    mean: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    coeffs: Vec<Complex64>,
    period: usize,
}

impl TryFrom<RawSequence> for PeriodicSequence {
    type Error = Error;

    fn try_from(raw: RawSequence) -> Result<Self> {
        if raw.period != raw.coeffs.len() {
            return Err(Error::InvalidSequence(format!(
                "period {} does not match {} coefficients",
                raw.period,
                raw.coeffs.len()
            )));
        }
        PeriodicSequence::new(raw.coeffs)
    }
}

impl From<PeriodicSequence> for RawSequence {
    fn from(seq: PeriodicSequence) -> Self {
        RawSequence {
            period: seq.coeffs.len(),
            coeffs: seq.coeffs,
        }
    }
}

impl PeriodicSequence {
    /// Rejects empty, non-finite and non-minimal periods.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let period = coeffs.len();
        if period == 0 {
            return Err(Error::InvalidSequence("empty period".into()));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidSequence("non-finite coefficient".into()));
        }
        if let Some(d) = (1..period)
            .filter(|d| period.is_multiple_of(*d))
            .find(|&d| (0..period).all(|i| coeffs[i] == coeffs[i % d]))
        {
            return Err(Error::InvalidSequence(format!(
                "period {period} is not minimal: the coefficients repeat with period {d}"
            )));
        }
        let mean = coeffs.iter().sum::<Complex64>() / period as f64;
        Ok(PeriodicSequence { coeffs, mean })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn ones() -> Self {
        Self::from_real(&[1.0]).expect("constant sequence")
    }

    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient at index `m`.
    pub fn at(&self, m: u64) -> Complex64 {
        self.coeffs[(m % self.coeffs.len() as u64) as usize]
    }

    /// `b = (1/l) Σ b_r`, the residue of the associated Hurwitz-type series at `s = 1`.
    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    /// Whether the mean vanishes up to rounding, i.e. the continued series is entire.
    pub fn has_zero_mean(&self) -> bool {
        let scale: f64 = self.coeffs.iter().map(|c| c.norm()).sum();
        self.mean.norm() * self.period() as f64 <= 64.0 * f64::EPSILON * scale
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sequence `m ↦ self.at(m + 1)`, one period starting at index 1.
    pub(crate) fn shifted_by_one(&self) -> Vec<Complex64> {
        let l = self.period();
        (0..l).map(|r| self.coeffs[(r + 1) % l]).collect()
    }
}

/// A periodic Hurwitz zeta-function `ζ(s, α; 𝔅) = Σ_{m≥0} b_m (m+α)^{-s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHurwitzSpec")]
pub struct PeriodicHurwitzSpec {
    pub seq: PeriodicSequence,
    pub alpha: f64,
}

#[derive(Deserialize)]
struct RawHurwitzSpec {
    seq: PeriodicSequence,
    alpha: f64,
}

impl TryFrom<RawHurwitzSpec> for PeriodicHurwitzSpec {
    type Error = Error;
    fn try_from(raw: RawHurwitzSpec) -> Result<Self> {
        PeriodicHurwitzSpec::new(raw.seq, raw.alpha)
    }
}

impl PeriodicHurwitzSpec {
    pub fn new(seq: PeriodicSequence, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("α = {alpha} outside (0, 1)")));
        }
        Ok(PeriodicHurwitzSpec { seq, alpha })
    }
}

/// Evaluates `Σ_{m≥0} b_m (m+a)^{-s}` through the Hurwitz reduction
/// `l^{-s} Σ_r b_r ζ(s, (r+a)/l)`, each Hurwitz value by its own Euler–Maclaurin sum.
pub(crate) fn periodic_series_reduction(
    coeffs: &[Complex64],
    entire: bool,
    a: f64,
    s: Complex64,
    em: &EulerMaclaurin,
) -> Result<Evaluation> {
    ensure_finite(s)?;
    em.validate()?;
    if is_pole_point(s) && !entire {
        return Err(Error::Pole(s));
    }
    let l = coeffs.len() as f64;
    let l_pow = (-s * l.ln()).exp();
    let mut regular = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for (r, b) in coeffs.iter().enumerate() {
        if *b == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (value, err) = hurwitz_regular(s, (r as f64 + a) / l, em);
        regular += b * value;
        bound += b.norm() * err;
    }
    let mut value = l_pow * regular;
    if !entire {
        let total: Complex64 = coeffs.iter().sum();
        value += l_pow * total / (s - 1.0);
    }
    Ok(Evaluation {
        value,
        error_bound: bound * l_pow.norm() + value.norm() * rounding_weight(s, l.ln()),
    })
}

/// Second route for the same series: one head sum `Σ_{m < lN} b_m (m+a)^{-s}`
/// in the original variable, then the per-residue Euler–Maclaurin tails at a
/// common cut `N`.
pub(crate) fn periodic_series_blockwise(
    coeffs: &[Complex64],
    entire: bool,
    a: f64,
    s: Complex64,
    em: &EulerMaclaurin,
) -> Result<Evaluation> {
    ensure_finite(s)?;
    em.validate()?;
    if is_pole_point(s) && !entire {
        return Err(Error::Pole(s));
    }
    let n_cut = em.truncation(s.norm());
    let l = coeffs.len();
    let mut head = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    for m in 0..n_cut * l {
        let b = coeffs[m % l];
        if b != Complex64::new(0.0, 0.0) {
            let log = (m as f64 + a).ln();
            let term = b * (-s * log).exp();
            head += term;
            rounding += term.norm() * rounding_weight(s, log);
        }
    }
    let (tail, bound) = periodic_tail(coeffs, entire, a, s, n_cut, em.order);
    Ok(Evaluation {
        value: head + tail,
        error_bound: bound + rounding + f64::EPSILON * tail.norm(),
    })
}

/// Value of [`periodic_tail`] without the bound, split into the entire part
/// and the coefficient of the pole term `1/(s-1)`.
pub(crate) fn periodic_tail_parts(
    coeffs: &[Complex64],
    entire: bool,
    a: f64,
    s: Complex64,
    n_cut: usize,
    order: usize,
) -> (Complex64, Complex64) {
    let l = coeffs.len() as f64;
    let l_pow = (-s * l.ln()).exp();
    let mut regular = Complex64::new(0.0, 0.0);
    for (r, b) in coeffs.iter().enumerate() {
        if *b != Complex64::new(0.0, 0.0) {
            regular += b * em_tail_value(s, n_cut as f64 + (r as f64 + a) / l, order);
        }
    }
    let residue = if entire {
        Complex64::new(0.0, 0.0)
    } else {
        l_pow * coeffs.iter().sum::<Complex64>()
    };
    (l_pow * regular, residue)
}

/// `Σ_{m ≥ lN} b_m (m+a)^{-s}` continued in `s`, via the per-residue
/// Euler–Maclaurin tails at `x_r = N + (r+a)/l`.
pub(crate) fn periodic_tail(
    coeffs: &[Complex64],
    entire: bool,
    a: f64,
    s: Complex64,
    n_cut: usize,
    order: usize,
) -> (Complex64, f64) {
    let l = coeffs.len() as f64;
    let l_pow = (-s * l.ln()).exp();
    let mut regular = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for (r, b) in coeffs.iter().enumerate() {
        if *b == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (t, e) = em_tail_regular(s, n_cut as f64 + (r as f64 + a) / l, order);
        regular += b * t;
        bound += b.norm() * e;
    }
    let mut value = l_pow * regular;
    if !entire {
        let total: Complex64 = coeffs.iter().sum();
        value += l_pow * total / (s - 1.0);
    }
    (value, bound * l_pow.norm())
}

/// The periodic Hurwitz zeta-function, continued to `ℂ` minus a possible
/// simple pole at `s = 1` (absent when the mean of `𝔅` vanishes).
pub fn periodic_hurwitz_zeta(spec: &PeriodicHurwitzSpec, s: Complex64) -> Result<Evaluation> {
    periodic_hurwitz_zeta_with(spec, s, &EulerMaclaurin::default())
}

pub fn periodic_hurwitz_zeta_with(spec: &PeriodicHurwitzSpec, s: Complex64, em: &EulerMaclaurin) -> Result<Evaluation> {
    periodic_series_reduction(spec.seq.coeffs(), spec.seq.has_zero_mean(), spec.alpha, s, em)
}

/// The same function by the blockwise route; used to cross-check the reduction.
pub fn periodic_hurwitz_zeta_blockwise(
    spec: &PeriodicHurwitzSpec,
    s: Complex64,
    em: &EulerMaclaurin,
) -> Result<Evaluation> {
    periodic_series_blockwise(spec.seq.coeffs(), spec.seq.has_zero_mean(), spec.alpha, s, em)
}

/// The periodic zeta-function `ζ(s; 𝔄) = Σ_{m≥1} a_m m^{-s}`, continued via
/// `Σ_{r=1}^{k} a_r k^{-s} ζ(s, r/k)`.
pub fn periodic_zeta(seq: &PeriodicSequence, s: Complex64) -> Result<Evaluation> {
    periodic_zeta_with(seq, s, &EulerMaclaurin::default())
}

pub fn periodic_zeta_with(seq: &PeriodicSequence, s: Complex64, em: &EulerMaclaurin) -> Result<Evaluation> {
    periodic_series_reduction(&seq.shifted_by_one(), seq.has_zero_mean(), 1.0, s, em)
}
