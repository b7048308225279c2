//! Finite-dimensional checks of the limit theorems: values of the shifted
//! tuple `Z(s⃗ + ikh⃗)` at fixed test points, `k = 0..=N`, against values of
//! the random element `Z(s⃗, ω)` at independent Haar points.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random_model::{draw_seed, sample_haar, unsmoothed_cutoff, RNG_NAME};
use crate::shifts::{ShiftEngine, ShiftedSlot, SlotSeries};
use crate::smoothing::{phi_n_cutoff, weight_v1, weight_v2, zeta_n_cutoff, Cutoff, SmoothingParams};
use crate::special_functions::{DirichletCoefficients, PeriodicHurwitzSpec, SteudingFunctionSpec};
use crate::universality_search::ShiftLattice;

/// Two-sample KS critical value factor at the 0.1% level.
pub const KS_FACTOR: f64 = 1.949;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleSource {
    Lattice { h1: f64, h2: Vec<f64>, n: u64 },
    HaarMonteCarlo { seed: u64, draws: u64, rng: String },
}

/// Sample tuples, one value per slot (`φ` first) at that slot's test point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub samples: Vec<Vec<Complex64>>,
    pub source: SampleSource,
    pub test_points: Vec<Complex64>,
}

impl EmpiricalDistribution {
    pub fn slots(&self) -> usize {
        self.test_points.len()
    }

    pub fn slot_values(&self, j: usize) -> Vec<Complex64> {
        self.samples.iter().map(|s| s[j]).collect()
    }
}

fn check_points(zetas: &[PeriodicHurwitzSpec], test_points: &[Complex64]) -> Result<()> {
    if test_points.len() != zetas.len() + 1 {
        return Err(Error::LengthMismatch {
            left: test_points.len(),
            right: zetas.len() + 1,
        });
    }
    Ok(())
}

/// `samples[k] = (φ(s₁ + ikh₁), ζ(s₂ⱼ + ikh₂ⱼ, αⱼ; 𝔅ⱼ))` for `k = 0..=N`.
pub fn collect_lattice_samples(
    phi: &SteudingFunctionSpec,
    zetas: &[PeriodicHurwitzSpec],
    lattice: &ShiftLattice,
    test_points: &[Complex64],
    engine: &ShiftEngine,
) -> Result<EmpiricalDistribution> {
    check_points(zetas, test_points)?;
    lattice.validate(zetas.len())?;
    if test_points[0].re <= phi.sigma_phi {
        return Err(Error::UnsupportedRegion {
            sigma: test_points[0].re,
            sigma_phi: phi.sigma_phi,
        });
    }
    let point_slot = |series, s: Complex64, h| ShiftedSlot {
        series,
        center: s,
        nodes: vec![s],
        h,
    };
    let mut slots = vec![point_slot(SlotSeries::steuding(phi), test_points[0], lattice.h1)];
    for ((spec, &s), &h) in zetas.iter().zip(&test_points[1..]).zip(&lattice.h2) {
        slots.push(point_slot(SlotSeries::periodic_hurwitz(spec), s, h));
    }
    let samples = engine.map_shifts(&slots, lattice.n, |_, v| v.iter().map(|x| x[0]).collect())?;
    Ok(EmpiricalDistribution {
        samples,
        source: SampleSource::Lattice {
            h1: lattice.h1,
            h2: lattice.h2.clone(),
            n: lattice.n,
        },
        test_points: test_points.to_vec(),
    })
}

/// `n_samples` independent draws of `Z(s⃗, ω)`, draw `i` seeded with
/// `seed + i`. Without smoothing the test points need `σ > 1`.
pub fn collect_model_samples(
    phi: &SteudingFunctionSpec,
    zetas: &[PeriodicHurwitzSpec],
    test_points: &[Complex64],
    n_samples: u64,
    seed: u64,
    smoothing: Option<&SmoothingParams>,
    cutoff: Cutoff,
) -> Result<EmpiricalDistribution> {
    check_points(zetas, test_points)?;
    if n_samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let resolve = |sigma: f64, bound: f64, f: &dyn Fn(&SmoothingParams) -> Result<u64>| -> Result<u64> {
        match smoothing {
            Some(_) if sigma <= 0.5 => Err(Error::UnsupportedRegion { sigma, sigma_phi: 0.5 }),
            Some(p) => f(p),
            None => unsmoothed_cutoff(sigma, bound, cutoff),
        }
    };
    let s1 = test_points[0];
    let m1 = resolve(s1.re, phi.coefficient_bound(), &|p| phi_n_cutoff(phi, s1.re, p, cutoff))?;
    let phi_terms: Vec<Complex64> = (1..=m1)
        .map(|m| phi.coefficient(m) * smoothing.map_or(1.0, |p| weight_v1(m, p)) * (-s1 * (m as f64).ln()).exp())
        .collect();
    let mut zeta_terms = Vec::with_capacity(zetas.len());
    for (spec, &s) in zetas.iter().zip(&test_points[1..]) {
        let m = resolve(s.re, spec.seq.max_abs(), &|p| zeta_n_cutoff(spec, s.re, p, cutoff))?;
        zeta_terms.push(
            (0..=m)
                .map(|m| {
                    spec.seq.at(m)
                        * smoothing.map_or(1.0, |p| weight_v2(m, spec.alpha, p))
                        * (-s * (m as f64 + spec.alpha).ln()).exp()
                })
                .collect::<Vec<_>>(),
        );
    }
    let m_bound = zeta_terms.iter().map(|t| t.len() as u64).max().unwrap_or(1).max(1);
    let samples = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let point = sample_haar(draw_seed(seed, i), m1, m_bound, zetas.len())?;
            let table = point.multiplicative_table(m1)?;
            let mut tuple = vec![phi_terms.iter().zip(&table[1..]).map(|(a, w)| a * w).sum()];
            for (j, terms) in zeta_terms.iter().enumerate() {
                let phases = point.omega2(j)?;
                tuple.push(terms.iter().zip(phases).map(|(a, w)| a * w).sum());
            }
            Ok(tuple)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalDistribution {
        samples,
        source: SampleSource::HaarMonteCarlo {
            seed,
            draws: n_samples,
            rng: RNG_NAME.into(),
        },
        test_points: test_points.to_vec(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: Complex64,
    /// `E|x - mean|²`.
    pub variance: f64,
    /// `E|x|²`.
    pub second: f64,
    /// Variance of `|x|²`.
    pub second_variance: f64,
    pub count: u64,
}

pub fn moments(values: &[Complex64]) -> Moments {
    let n = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / n;
    let variance = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / n;
    let second = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / n;
    let second_variance = values.iter().map(|v| (v.norm_sqr() - second).powi(2)).sum::<f64>() / n;
    Moments {
        mean,
        variance,
        second,
        second_variance,
        count: values.len() as u64,
    }
}

/// Largest gap between the empirical distribution functions of two samples.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut gap) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        gap = gap.max((i as f64 / na - j as f64 / nb).abs());
    }
    gap
}

/// `(x, F(x))` at up to `max_points` order statistics, for plotting.
pub fn ecdf_nodes(values: &[f64], max_points: usize) -> Vec<(f64, f64)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let stride = n.div_ceil(max_points.max(1)).max(1);
    (0..n)
        .filter(|i| i % stride == stride - 1 || *i == n - 1)
        .map(|i| (v[i], (i + 1) as f64 / n as f64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalGap {
    pub statistic: f64,
    pub threshold: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotComparison {
    pub slot: usize,
    pub test_point: Complex64,
    pub a: Moments,
    pub b: Moments,
    pub mean_gap: f64,
    /// `sqrt(var_a/n_a + var_b/n_b)` for the means.
    pub mean_se: f64,
    pub second_gap: f64,
    pub second_se: f64,
    pub re: MarginalGap,
    pub im: MarginalGap,
}

impl SlotComparison {
    pub fn flagged(&self) -> bool {
        self.re.flagged || self.im.flagged
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub slots: Vec<SlotComparison>,
}

impl ComparisonReport {
    pub fn flagged(&self) -> bool {
        self.slots.iter().any(SlotComparison::flagged)
    }
}

fn marginal(a: &[f64], b: &[f64]) -> MarginalGap {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let statistic = ks_statistic(a, b);
    let threshold = KS_FACTOR * ((n + m) / (n * m)).sqrt();
    MarginalGap {
        statistic,
        threshold,
        flagged: statistic > threshold,
    }
}

/// Moments and per-marginal KS gaps, slot by slot.
pub fn compare(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<ComparisonReport> {
    if a.test_points != b.test_points {
        return Err(Error::domain("distributions are taken at different test points"));
    }
    if a.samples.is_empty() || b.samples.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    let slots = (0..a.slots())
        .map(|j| {
            let (va, vb) = (a.slot_values(j), b.slot_values(j));
            let (ma, mb) = (moments(&va), moments(&vb));
            let (na, nb) = (ma.count as f64, mb.count as f64);
            let part = |v: &[Complex64], f: fn(&Complex64) -> f64| v.iter().map(f).collect::<Vec<f64>>();
            SlotComparison {
                slot: j,
                test_point: a.test_points[j],
                mean_gap: (ma.mean - mb.mean).norm(),
                mean_se: (ma.variance / na + mb.variance / nb).sqrt(),
                second_gap: (ma.second - mb.second).abs(),
                second_se: (ma.second_variance / na + mb.second_variance / nb).sqrt(),
                re: marginal(&part(&va, |z| z.re), &part(&vb, |z| z.re)),
                im: marginal(&part(&va, |z| z.im), &part(&vb, |z| z.im)),
                a: ma,
                b: mb,
            }
        })
        .collect();
    Ok(ComparisonReport { slots })
}

/// A normalized mean square and the difference to the same rule at twice the step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanValue {
    pub t: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: u64,
}

/// `(1/T) ∫₀ᵀ |f|²` by the trapezoid rule from `2n + 1` equally spaced
/// values, with `|I_h - I_{2h}|` as error estimate.
pub fn trapezoid_mean_square(values: &[Complex64], t: f64) -> Result<MeanValue> {
    if values.len() < 3 || values.len().is_multiple_of(2) {
        return Err(Error::domain("need an odd number (≥ 3) of equally spaced values"));
    }
    let sq: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    let rule = |stride: usize| {
        let pts: Vec<f64> = sq.iter().step_by(stride).copied().collect();
        let inner: f64 = pts[1..pts.len() - 1].iter().sum();
        (0.5 * (pts[0] + pts[pts.len() - 1]) + inner) / (pts.len() - 1) as f64
    };
    let fine = rule(1);
    let coarse = rule(2);
    Ok(MeanValue {
        t,
        value: fine,
        error_estimate: (fine - coarse).abs(),
        intervals: (values.len() - 1) as u64,
    })
}

/// Default quadrature density: intervals per unit of `t`.
pub const DEFAULT_INTERVALS_PER_UNIT: f64 = 8.0;

/// `(1/T) ∫₀ᵀ |φ(σ₀ + it)|² dt` by the trapezoid rule.
pub fn mean_value_diagnostic(
    spec: &SteudingFunctionSpec,
    sigma0: f64,
    t: f64,
    intervals_per_unit: f64,
    engine: &ShiftEngine,
) -> Result<MeanValue> {
    if !(t > 0.0 && t.is_finite()) || !(intervals_per_unit > 0.0) {
        return Err(Error::domain("need T > 0 and a positive quadrature density"));
    }
    if sigma0 <= spec.sigma_phi {
        return Err(Error::UnsupportedRegion {
            sigma: sigma0,
            sigma_phi: spec.sigma_phi,
        });
    }
    let half = ((t * intervals_per_unit) / 2.0).ceil().max(1.0) as u64;
    let intervals = 2 * half;
    let s0 = Complex64::new(sigma0, 0.0);
    let slot = ShiftedSlot {
        series: SlotSeries::steuding(spec),
        center: s0,
        nodes: vec![s0],
        h: t / intervals as f64,
    };
    let values = engine.map_shifts(&[slot], intervals, |_, v| v[0][0])?;
    trapezoid_mean_square(&values, t)
}
