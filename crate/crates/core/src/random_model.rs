//! Finite materializations of the torus `Ω = Ω₁ × Ω₂₁ × … × Ω₂ᵣ` with its
//! Haar measure, random Dirichlet series over it, and the orbit of the
//! identity under the shift `a_{α⃗,h⃗}`.
//!
//! Phases are drawn from SplitMix64: each phase uses the top 53 bits `u` of
//! one output as the angle `π - 2πu ∈ (-π, π]`, primes first in ascending
//! order, then `ω₂ⱼ(0..=m_bound)` for `j = 1..=r`.

use num_complex::Complex64;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arith::{factorize, primes_up_to, smallest_prime_factors};
use crate::error::{Error, Result};
use crate::numeric::{cis, ensure_finite};
use crate::smoothing::{
    phi_n_cutoff, smoothed_tail_bound, weight_v1, weight_v2, zeta_n_cutoff, Cutoff, SmoothingParams, Truncated,
    CUTOFF_CAP, TAIL_TOLERANCE,
};
use crate::special_functions::{DirichletCoefficients, PeriodicHurwitzSpec};

pub const DEFAULT_PRIME_BOUND: u64 = 10_000;
pub const DEFAULT_M_BOUND: u64 = 100_000;
/// Name recorded in run metadata for the phase generator.
pub const RNG_NAME: &str = "splitmix64";

const UNIT_TOLERANCE: f64 = 1e-12;

/// Seed of the `index`-th independent draw of a Monte-Carlo run.
pub fn draw_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}

/// A point of the torus with `ω₁(p)` for primes `p ≤ prime_bound` and
/// `ω₂ⱼ(m)` for `m ≤ m_bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct TorusPoint {
    pub prime_bound: u64,
    pub m_bound: u64,
    pub seed: Option<u64>,
    primes: Vec<u64>,
    omega1: Vec<Complex64>,
    omega2: Vec<Vec<Complex64>>,
}

#[derive(Deserialize)]
struct RawPoint {
    prime_bound: u64,
    m_bound: u64,
    seed: Option<u64>,
    primes: Vec<u64>,
    omega1: Vec<Complex64>,
    omega2: Vec<Vec<Complex64>>,
}

impl TryFrom<RawPoint> for TorusPoint {
    type Error = Error;
    fn try_from(raw: RawPoint) -> Result<Self> {
        if raw.primes != primes_up_to(raw.prime_bound) || raw.omega1.len() != raw.primes.len() {
            return Err(Error::Config("prime phases do not match the prime bound".into()));
        }
        if raw.omega2.iter().any(|c| c.len() as u64 != raw.m_bound + 1) {
            return Err(Error::Config("component phases do not match m_bound".into()));
        }
        let all = raw.omega1.iter().chain(raw.omega2.iter().flatten());
        for w in all {
            if !((w.norm() - 1.0).abs() <= UNIT_TOLERANCE) {
                return Err(Error::Config(format!("phase {w} is not of unit modulus")));
            }
        }
        Ok(TorusPoint {
            prime_bound: raw.prime_bound,
            m_bound: raw.m_bound,
            seed: raw.seed,
            primes: raw.primes,
            omega1: raw.omega1,
            omega2: raw.omega2,
        })
    }
}

fn check_bounds(prime_bound: u64, m_bound: u64) -> Result<()> {
    if prime_bound < 1 || m_bound < 1 {
        return Err(Error::domain("materialization bounds must be ≥ 1"));
    }
    Ok(())
}

fn haar_phase(rng: &mut SplitMix64) -> Complex64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    cis(PI - 2.0 * PI * u)
}

/// Independent Haar-uniform phases for every materialized coordinate.
pub fn sample_haar(seed: u64, prime_bound: u64, m_bound: u64, r: usize) -> Result<TorusPoint> {
    check_bounds(prime_bound, m_bound)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let primes = primes_up_to(prime_bound);
    let omega1 = primes.iter().map(|_| haar_phase(&mut rng)).collect();
    let omega2 = (0..r)
        .map(|_| (0..=m_bound).map(|_| haar_phase(&mut rng)).collect())
        .collect();
    Ok(TorusPoint {
        prime_bound,
        m_bound,
        seed: Some(seed),
        primes,
        omega1,
        omega2,
    })
}

impl TorusPoint {
    /// The identity element: every phase equal to 1.
    pub fn identity(prime_bound: u64, m_bound: u64, r: usize) -> Result<Self> {
        check_bounds(prime_bound, m_bound)?;
        let primes = primes_up_to(prime_bound);
        let one = Complex64::new(1.0, 0.0);
        Ok(TorusPoint {
            prime_bound,
            m_bound,
            seed: None,
            omega1: vec![one; primes.len()],
            primes,
            omega2: vec![vec![one; m_bound as usize + 1]; r],
        })
    }

    pub fn components(&self) -> usize {
        self.omega2.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `(p, ω₁(p))` in ascending order of `p`.
    pub fn prime_phases(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.primes.iter().copied().zip(self.omega1.iter().copied())
    }

    pub fn omega1(&self, p: u64) -> Result<Complex64> {
        self.primes.binary_search(&p).map(|i| self.omega1[i]).map_err(|_| {
            if p > self.prime_bound {
                Error::OutOfMaterializedRange {
                    what: "prime",
                    value: p,
                    bound: self.prime_bound,
                }
            } else {
                Error::domain(format!("{p} is not prime"))
            }
        })
    }

    /// Phases `ω₂ⱼ(0..=m_bound)` of component `j` (0-based).
    pub fn omega2(&self, j: usize) -> Result<&[Complex64]> {
        self.omega2
            .get(j)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::domain(format!("component {j} of {}", self.omega2.len())))
    }

    /// `ω₁(m) = ∏ ω₁(p)^{g_p}` over `m = ∏ p^{g_p}`.
    pub fn extend_multiplicative(&self, m: u64) -> Result<Complex64> {
        if m == 0 {
            return Err(Error::domain("m must be ≥ 1"));
        }
        let mut value = Complex64::new(1.0, 0.0);
        for (p, g) in factorize(m) {
            value *= self.omega1(p)?.powu(g);
        }
        Ok(value)
    }

    /// `ω₁(m)` for `m = 0..=m_max` (entry 0 is unused and set to 0).
    pub fn multiplicative_table(&self, m_max: u64) -> Result<Vec<Complex64>> {
        let spf = smallest_prime_factors(m_max as usize);
        let mut phase_of = vec![Complex64::new(0.0, 0.0); (self.prime_bound.min(m_max) + 1) as usize];
        for (p, w) in self.prime_phases() {
            if p > m_max {
                break;
            }
            phase_of[p as usize] = w;
        }
        let mut table = vec![Complex64::new(0.0, 0.0); m_max as usize + 1];
        if m_max >= 1 {
            table[1] = Complex64::new(1.0, 0.0);
        }
        for m in 2..=m_max as usize {
            let p = spf[m] as usize;
            if p as u64 > self.prime_bound {
                return Err(Error::OutOfMaterializedRange {
                    what: "prime",
                    value: p as u64,
                    bound: self.prime_bound,
                });
            }
            table[m] = phase_of[p] * table[m / p];
        }
        Ok(table)
    }
}

/// The deterministic shift `a_{α⃗,h⃗}` of the torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgodicShift {
    pub h1: f64,
    pub alphas: Vec<f64>,
    pub h2: Vec<f64>,
}

impl ErgodicShift {
    pub fn new(h1: f64, alphas: Vec<f64>, h2: Vec<f64>) -> Result<Self> {
        let shift = ErgodicShift { h1, alphas, h2 };
        shift.validate()?;
        Ok(shift)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h1 > 0.0 && self.h1.is_finite()) {
            return Err(Error::domain("h₁ must be positive"));
        }
        if self.alphas.is_empty() || self.alphas.len() != self.h2.len() {
            return Err(Error::domain("need r ≥ 1 matching α's and h₂'s"));
        }
        if self.alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
            return Err(Error::domain("every α must lie in (0, 1)"));
        }
        if self.h2.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::domain("every h₂ must be positive"));
        }
        Ok(())
    }
}

/// `a^k` applied to the identity: `ω₁(p) = p^{-ikh₁}`, `ω₂ⱼ(m) = (m+αⱼ)^{-ikh₂ⱼ}`.
/// Phases are computed directly from `k`, so no error accumulates along the orbit.
pub fn ergodic_orbit(shift: &ErgodicShift, k: u64, prime_bound: u64, m_bound: u64) -> Result<TorusPoint> {
    shift.validate()?;
    check_bounds(prime_bound, m_bound)?;
    let t1 = k as f64 * shift.h1;
    let primes = primes_up_to(prime_bound);
    let omega1 = primes.iter().map(|&p| cis(-t1 * (p as f64).ln())).collect();
    let omega2 = shift
        .alphas
        .iter()
        .zip(&shift.h2)
        .map(|(&alpha, &h)| {
            let t = k as f64 * h;
            (0..=m_bound).map(|m| cis(-t * (m as f64 + alpha).ln())).collect()
        })
        .collect();
    Ok(TorusPoint {
        prime_bound,
        m_bound,
        seed: None,
        primes,
        omega1,
        omega2,
    })
}

// Cutoff and tail for an unsmoothed series `Σ |c_m| m^{-σ}` with σ > 1:
// the tail past M is at most C·M^{1-σ}/(σ-1).
fn unsmoothed_tail(sigma: f64, coeff_bound: f64, cutoff: u64) -> f64 {
    coeff_bound * (cutoff as f64).powf(1.0 - sigma) / (sigma - 1.0)
}

pub(crate) fn unsmoothed_cutoff(sigma: f64, coeff_bound: f64, cutoff: Cutoff) -> Result<u64> {
    if sigma <= 1.0 {
        return Err(Error::UnsupportedRegion { sigma, sigma_phi: 1.0 });
    }
    match cutoff {
        Cutoff::Fixed(0) => Err(Error::domain("cutoff must be ≥ 1")),
        Cutoff::Fixed(m) => Ok(m),
        Cutoff::Auto => {
            if coeff_bound == 0.0 {
                return Ok(1);
            }
            let m = (coeff_bound / ((sigma - 1.0) * TAIL_TOLERANCE))
                .powf(1.0 / (sigma - 1.0))
                .ceil();
            if m > CUTOFF_CAP as f64 {
                return Err(Error::Convergence {
                    cap: CUTOFF_CAP as usize,
                    tail: unsmoothed_tail(sigma, coeff_bound, CUTOFF_CAP),
                    tolerance: TAIL_TOLERANCE,
                });
            }
            Ok(m as u64)
        }
    }
}

/// `φ(s, ω₁) = Σ c_m ω₁(m) m^{-s}` (σ > 1), or its smoothed form
/// `Σ c_m ω₁(m) v₁(m,n) m^{-s}` (σ > 1/2) when `params` is given.
pub fn random_phi<D: DirichletCoefficients + ?Sized>(
    coeffs: &D,
    s: Complex64,
    point: &TorusPoint,
    params: Option<&SmoothingParams>,
    cutoff: Cutoff,
) -> Result<Truncated> {
    ensure_finite(s)?;
    let bound = coeffs.coefficient_bound();
    let (m_max, tail) = match params {
        Some(p) => {
            if s.re <= 0.5 {
                return Err(Error::UnsupportedRegion {
                    sigma: s.re,
                    sigma_phi: 0.5,
                });
            }
            let m = phi_n_cutoff(coeffs, s.re, p, cutoff)?;
            (m, smoothed_tail_bound(s.re, bound, m, 0.0, p))
        }
        None => {
            let m = unsmoothed_cutoff(s.re, bound, cutoff)?;
            (m, unsmoothed_tail(s.re, bound, m))
        }
    };
    let table = point.multiplicative_table(m_max)?;
    let mut value = Complex64::new(0.0, 0.0);
    for (m, w) in table.iter().enumerate().skip(1) {
        let m = m as u64;
        let c = coeffs.coefficient(m);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let weight = params.map_or(1.0, |p| weight_v1(m, p));
        value += c * w * weight * (-s * (m as f64).ln()).exp();
    }
    Ok(Truncated {
        value,
        tail_bound: tail,
        cutoff: m_max,
    })
}

/// `ζ(s, α, ω₂ⱼ; 𝔅) = Σ b_m ω₂ⱼ(m) (m+α)^{-s}` for component `j` (0-based),
/// smoothed with `v₂` when `params` is given.
pub fn random_zeta(
    spec: &PeriodicHurwitzSpec,
    component: usize,
    s: Complex64,
    point: &TorusPoint,
    params: Option<&SmoothingParams>,
    cutoff: Cutoff,
) -> Result<Truncated> {
    ensure_finite(s)?;
    let bound = spec.seq.max_abs();
    let (m_max, tail) = match params {
        Some(p) => {
            if s.re <= 0.5 {
                return Err(Error::UnsupportedRegion {
                    sigma: s.re,
                    sigma_phi: 0.5,
                });
            }
            let m = zeta_n_cutoff(spec, s.re, p, cutoff)?;
            (m, smoothed_tail_bound(s.re, bound, m, spec.alpha, p))
        }
        None => {
            let m = unsmoothed_cutoff(s.re, bound, cutoff)?;
            // Σ_{m>M} (m+α)^{-σ} ≤ ∫_M^∞ (x+α)^{-σ} dx
            (m, bound * (m as f64 + spec.alpha).powf(1.0 - s.re) / (s.re - 1.0))
        }
    };
    if m_max > point.m_bound {
        return Err(Error::OutOfMaterializedRange {
            what: "m",
            value: m_max,
            bound: point.m_bound,
        });
    }
    let phases = point.omega2(component)?;
    let mut value = Complex64::new(0.0, 0.0);
    for m in 0..=m_max {
        let b = spec.seq.at(m);
        if b == Complex64::new(0.0, 0.0) {
            continue;
        }
        let weight = params.map_or(1.0, |p| weight_v2(m, spec.alpha, p));
        value += b * phases[m as usize] * weight * (-s * (m as f64 + spec.alpha).ln()).exp();
    }
    Ok(Truncated {
        value,
        tail_bound: tail,
        cutoff: m_max,
    })
}
