//! Exponentially smoothed Dirichlet series
//!
//! `φ_n(s) = Σ_{m≥1} c_m v₁(m,n) m^{-s}` with `v₁(m,n) = exp(-(m/n)^c)` and
//! `ζ_n(s,α;𝔅) = Σ_{m≥0} b_m v₂(m,n,α) (m+α)^{-s}` with
//! `v₂(m,n,α) = exp(-((m+α)/(n+α))^c)`, where `c = σ₀*`. Both converge
//! absolutely for `σ > 0`; sums are truncated at a cutoff whose tail is
//! bounded explicitly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ensure_finite;
use crate::shifts::{ShiftEngine, ShiftedSlot, SlotSeries};
use crate::special_functions::{DirichletCoefficients, PeriodicHurwitzSpec, SteudingFunctionSpec, StripRegion};
use crate::universality_search::{rectangle_boundary, ShiftLattice};

/// Target size of the certified tail when the cutoff is chosen automatically.
pub const TAIL_TOLERANCE: f64 = 1e-12;
/// Largest cutoff the automatic search will consider.
pub const CUTOFF_CAP: u64 = 100_000_000;
pub const DEFAULT_SIGMA0_STAR: f64 = 0.7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SmoothingParams {
    pub n: u64,
    pub sigma0_star: f64,
}

#[derive(Deserialize)]
struct RawParams {
    n: u64,
    #[serde(default = "default_sigma0")]
    sigma0_star: f64,
}

fn default_sigma0() -> f64 {
    DEFAULT_SIGMA0_STAR
}

impl TryFrom<RawParams> for SmoothingParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        SmoothingParams::with_exponent(raw.n, raw.sigma0_star)
    }
}

impl SmoothingParams {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_exponent(n, DEFAULT_SIGMA0_STAR)
    }

    pub fn with_exponent(n: u64, sigma0_star: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("smoothing level n must be ≥ 1"));
        }
        if !(sigma0_star > 0.5 && sigma0_star < 1.0) {
            return Err(Error::domain(format!("σ₀* = {sigma0_star} must lie in (1/2, 1)")));
        }
        Ok(SmoothingParams { n, sigma0_star })
    }
}

/// How far a smoothed series is summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    /// Smallest cutoff whose certified tail is below [`TAIL_TOLERANCE`].
    #[default]
    Auto,
    Fixed(u64),
}

/// A truncated series value and a bound on everything past the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncated {
    pub value: Complex64,
    pub tail_bound: f64,
    pub cutoff: u64,
}

pub fn weight_v1(m: u64, params: &SmoothingParams) -> f64 {
    (-(m as f64 / params.n as f64).powf(params.sigma0_star)).exp()
}

pub fn weight_v2(m: u64, alpha: f64, params: &SmoothingParams) -> f64 {
    (-((m as f64 + alpha) / (params.n as f64 + alpha)).powf(params.sigma0_star)).exp()
}

// Γ(a, u) from above. For u > a - 1 the integrand ratio gives
// Γ(a,u) ≤ u^{a-1} e^{-u} · u / (u - a + 1); otherwise Γ(a) ≤ 1 on [1, 2].
fn upper_gamma_bound(a: f64, u: f64) -> f64 {
    if a <= 1.0 {
        (a - 1.0) * u.ln() - u
    } else if u > a - 1.0 {
        (a - 1.0) * u.ln() - u + (u / (u - a + 1.0)).ln()
    } else {
        return 1.0;
    }
    .exp()
}

/// Bound on `Σ_{x > X} C·exp(-(x/n)^c)·x^{-σ}` over `x = X+1, X+2, …`
/// (`X = cutoff + shift`, `n = n + shift`), by comparison with the integral.
pub fn smoothed_tail_bound(sigma: f64, coeff_bound: f64, cutoff: u64, shift: f64, params: &SmoothingParams) -> f64 {
    if coeff_bound == 0.0 {
        return 0.0;
    }
    let x = cutoff as f64 + shift;
    let n = params.n as f64 + shift;
    let c = params.sigma0_star;
    let u = (x / n).powf(c);
    let a = 1.0 / c;
    let via_gamma = x.powf(-sigma) * (n / c) * upper_gamma_bound(a, u);
    let via_power = if sigma > 1.0 {
        (-u).exp() * x.powf(1.0 - sigma) / (sigma - 1.0)
    } else {
        f64::INFINITY
    };
    coeff_bound * via_gamma.min(via_power)
}

/// Cutoff where `(M/n)^c ≥ 40`, i.e. every omitted weight is below `e^{-40}`.
pub fn rule_of_forty(params: &SmoothingParams) -> u64 {
    let m = params.n as f64 * 40f64.powf(1.0 / params.sigma0_star);
    (m.ceil() as u64).min(CUTOFF_CAP)
}

/// Smallest `M ≤ CUTOFF_CAP` whose certified tail at `σ` is below the tolerance.
pub fn auto_cutoff(sigma: f64, coeff_bound: f64, shift: f64, params: &SmoothingParams) -> Result<u64> {
    let tail = |m: u64| smoothed_tail_bound(sigma, coeff_bound, m, shift, params);
    let cap_tail = tail(CUTOFF_CAP);
    if !(cap_tail < TAIL_TOLERANCE) {
        return Err(Error::Convergence {
            cap: CUTOFF_CAP as usize,
            tail: cap_tail,
            tolerance: TAIL_TOLERANCE,
        });
    }
    // The bound decreases in M; bisect for the first admissible cutoff.
    let (mut lo, mut hi) = (0u64, rule_of_forty(params).max(1));
    while !(tail(hi) < TAIL_TOLERANCE) {
        lo = hi;
        hi = (hi * 2).min(CUTOFF_CAP);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) < TAIL_TOLERANCE {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn resolve_cutoff(cutoff: Cutoff, sigma: f64, coeff_bound: f64, shift: f64, params: &SmoothingParams) -> Result<u64> {
    match cutoff {
        Cutoff::Auto => auto_cutoff(sigma, coeff_bound, shift, params),
        Cutoff::Fixed(0) => Err(Error::domain("cutoff must be ≥ 1")),
        Cutoff::Fixed(m) => Ok(m),
    }
}

fn check_half_plane(s: Complex64) -> Result<()> {
    ensure_finite(s)?;
    if s.re <= 0.5 {
        return Err(Error::UnsupportedRegion {
            sigma: s.re,
            sigma_phi: 0.5,
        });
    }
    Ok(())
}

/// Coefficients `c_m v₁(m,n)` for `m = 1..=cutoff`, index 0 holding `m = 1`.
pub fn phi_n_coefficients<D: DirichletCoefficients + ?Sized>(
    coeffs: &D,
    params: &SmoothingParams,
    cutoff: u64,
) -> Vec<Complex64> {
    (1..=cutoff)
        .map(|m| coeffs.coefficient(m) * weight_v1(m, params))
        .collect()
}

/// Coefficients `b_m v₂(m,n,α)` for `m = 0..=cutoff`.
pub fn zeta_n_coefficients(spec: &PeriodicHurwitzSpec, params: &SmoothingParams, cutoff: u64) -> Vec<Complex64> {
    (0..=cutoff)
        .map(|m| spec.seq.at(m) * weight_v2(m, spec.alpha, params))
        .collect()
}

/// Cutoff for `φ_n` valid for every `σ ≥ sigma`.
pub fn phi_n_cutoff<D: DirichletCoefficients + ?Sized>(
    coeffs: &D,
    sigma: f64,
    params: &SmoothingParams,
    cutoff: Cutoff,
) -> Result<u64> {
    resolve_cutoff(cutoff, sigma, coeffs.coefficient_bound(), 0.0, params)
}

pub fn zeta_n_cutoff(spec: &PeriodicHurwitzSpec, sigma: f64, params: &SmoothingParams, cutoff: Cutoff) -> Result<u64> {
    resolve_cutoff(cutoff, sigma, spec.seq.max_abs(), spec.alpha, params)
}

/// The smoothed approximant `φ_n(s)` for `σ > 1/2`.
pub fn phi_n<D: DirichletCoefficients + ?Sized>(
    coeffs: &D,
    s: Complex64,
    params: &SmoothingParams,
    cutoff: Cutoff,
) -> Result<Truncated> {
    check_half_plane(s)?;
    let m_max = phi_n_cutoff(coeffs, s.re, params, cutoff)?;
    let mut value = Complex64::new(0.0, 0.0);
    for m in 1..=m_max {
        let c = coeffs.coefficient(m);
        if c != Complex64::new(0.0, 0.0) {
            value += c * weight_v1(m, params) * (-s * (m as f64).ln()).exp();
        }
    }
    Ok(Truncated {
        value,
        tail_bound: smoothed_tail_bound(s.re, coeffs.coefficient_bound(), m_max, 0.0, params),
        cutoff: m_max,
    })
}

/// The smoothed approximant `ζ_n(s, α; 𝔅)` for `σ > 1/2`.
pub fn zeta_n(spec: &PeriodicHurwitzSpec, s: Complex64, params: &SmoothingParams, cutoff: Cutoff) -> Result<Truncated> {
    check_half_plane(s)?;
    let m_max = zeta_n_cutoff(spec, s.re, params, cutoff)?;
    let mut value = Complex64::new(0.0, 0.0);
    for m in 0..=m_max {
        let b = spec.seq.at(m);
        if b != Complex64::new(0.0, 0.0) {
            value += b * weight_v2(m, spec.alpha, params) * (-s * (m as f64 + spec.alpha).ln()).exp();
        }
    }
    Ok(Truncated {
        value,
        tail_bound: smoothed_tail_bound(s.re, spec.seq.max_abs(), m_max, spec.alpha, params),
        cutoff: m_max,
    })
}

/// Inputs of [`approximation_deficit`]. The distance between a function and
/// its approximant is the sup over `boundary_nodes` points on the boundary of
/// `region`; for a tuple it is the largest such sup over the slots.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeficitRequest {
    pub phi: SteudingFunctionSpec,
    pub zetas: Vec<PeriodicHurwitzSpec>,
    pub region: StripRegion,
    /// `None` compares every function with itself.
    pub smoothing: Option<SmoothingParams>,
    pub lattice: ShiftLattice,
    #[serde(default = "default_deficit_nodes")]
    pub boundary_nodes: usize,
    #[serde(default)]
    pub cutoff: Cutoff,
}

fn default_deficit_nodes() -> usize {
    64
}

/// `(1/(N+1)) Σ_{k=0}^{N} ϱ(Z(s + ikh), Z_n(s + ikh))`, summed in ascending `k`.
pub fn approximation_deficit(req: &DeficitRequest, engine: &ShiftEngine) -> Result<f64> {
    req.region.validate()?;
    req.lattice.validate(req.zetas.len())?;
    let r = &req.region;
    if !(r.t_min.is_finite() && r.t_max.is_finite()) {
        return Err(Error::domain("deficit region must be bounded"));
    }
    if r.sigma_min <= 0.5 || r.sigma_min <= req.phi.sigma_phi {
        return Err(Error::UnsupportedRegion {
            sigma: r.sigma_min,
            sigma_phi: 0.5f64.max(req.phi.sigma_phi),
        });
    }
    let nodes = rectangle_boundary(
        Complex64::new(r.sigma_min, r.t_min),
        Complex64::new(r.sigma_max, r.t_max),
        req.boundary_nodes,
    )?;
    let center = Complex64::new(0.5 * (r.sigma_min + r.sigma_max), 0.5 * (r.t_min + r.t_max));
    let slot = |series: SlotSeries, h: f64| ShiftedSlot {
        series,
        center,
        nodes: nodes.clone(),
        h,
    };

    let mut slots = vec![slot(SlotSeries::steuding(&req.phi), req.lattice.h1)];
    for (spec, &h) in req.zetas.iter().zip(&req.lattice.h2) {
        slots.push(slot(SlotSeries::periodic_hurwitz(spec), h));
    }
    if let Some(params) = &req.smoothing {
        let m = phi_n_cutoff(&req.phi, r.sigma_min, params, req.cutoff)?;
        slots.push(slot(
            SlotSeries::finite(1, phi_n_coefficients(&req.phi, params, m), 0.0),
            req.lattice.h1,
        ));
        for (spec, &h) in req.zetas.iter().zip(&req.lattice.h2) {
            let m = zeta_n_cutoff(spec, r.sigma_min, params, req.cutoff)?;
            slots.push(slot(
                SlotSeries::finite(0, zeta_n_coefficients(spec, params, m), spec.alpha),
                h,
            ));
        }
    }
    let pairs = 1 + req.zetas.len();
    let smoothed = req.smoothing.is_some();
    let rho = engine.map_shifts(&slots, req.lattice.n, |_, values| {
        (0..pairs)
            .map(|j| {
                let approx = if smoothed { values[pairs + j] } else { values[j] };
                values[j]
                    .iter()
                    .zip(approx)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    })?;
    Ok(rho.iter().sum::<f64>() / rho.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::{hurwitz_zeta, steuding_eval, PeriodicSequence};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    struct OnlyFirst;

    impl DirichletCoefficients for OnlyFirst {
        fn coefficient(&self, m: u64) -> Complex64 {
            if m == 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        }
        fn coefficient_bound(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn weights() {
        let p = SmoothingParams::new(7).unwrap();
        assert!((weight_v1(7, &p) - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(weight_v2(7, 0.3, &p), (-1.0f64).exp());
        let p1 = SmoothingParams::new(1).unwrap();
        assert_eq!(weight_v1(2, &p1), (-(2f64.powf(0.7))).exp());
        assert_eq!(weight_v2(0, 0.3, &p), (-(0.3f64 / 7.3).powf(0.7)).exp());
        // v₂ > v₁ exactly when m > n
        assert!(weight_v2(9, 0.5, &p) > weight_v1(9, &p));
        assert!(weight_v2(3, 0.5, &p) < weight_v1(3, &p));
        let mut last = 0.0;
        for n in [1, 10, 100, 1000, 10_000] {
            let w = weight_v1(5, &SmoothingParams::new(n).unwrap());
            assert!(w > last && w < 1.0);
            last = w;
        }
        assert!(SmoothingParams::with_exponent(3, 0.5).is_err());
        assert!(SmoothingParams::with_exponent(0, 0.7).is_err());
    }

    #[test]
    fn tail_bound_dominates_the_omitted_sum() {
        let p = SmoothingParams::new(10).unwrap();
        for (sigma, cutoff) in [(0.6, 200u64), (1.0, 400), (2.0, 100)] {
            let omitted: f64 = (cutoff + 1..2_000_000)
                .map(|m| weight_v1(m, &p) * (m as f64).powf(-sigma))
                .sum();
            let bound = smoothed_tail_bound(sigma, 1.0, cutoff, 0.0, &p);
            assert!(omitted <= bound, "σ = {sigma}: {omitted} > {bound}");
            assert!(bound < 100.0 * omitted + 1e-300);
        }
    }

    #[test]
    fn auto_cutoff_is_minimal() {
        let p = SmoothingParams::new(50).unwrap();
        let m = auto_cutoff(0.65, 1.0, 0.0, &p).unwrap();
        assert!(smoothed_tail_bound(0.65, 1.0, m, 0.0, &p) < TAIL_TOLERANCE);
        assert!(smoothed_tail_bound(0.65, 1.0, m - 1, 0.0, &p) >= TAIL_TOLERANCE);
        assert!(m <= rule_of_forty(&p));
        let huge = SmoothingParams::new(50_000_000).unwrap();
        assert!(matches!(
            auto_cutoff(0.6, 1.0, 0.0, &huge),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn phi_n_against_brute_force() {
        let r = SteudingFunctionSpec::riemann();
        let p = SmoothingParams::new(10).unwrap();
        let got = phi_n(&r, c(2.0, 0.0), &p, Cutoff::Auto).unwrap();
        let brute: f64 = (1..=1_000_000u64)
            .map(|m| weight_v1(m, &p) / (m as f64 * m as f64))
            .sum();
        assert!((got.value.re - brute).abs() < 1e-12);
        assert!(got.tail_bound < TAIL_TOLERANCE);
        let single = phi_n(&OnlyFirst, c(0.8, 3.0), &p, Cutoff::Fixed(50)).unwrap();
        assert_eq!(single.value, c(weight_v1(1, &p), 0.0));
    }

    #[test]
    fn zeta_n_basics() {
        let p = SmoothingParams::new(2).unwrap();
        let zero = PeriodicHurwitzSpec::new(PeriodicSequence::from_real(&[0.0]).unwrap(), 0.4).unwrap();
        assert_eq!(zeta_n(&zero, c(0.7, 1.0), &p, Cutoff::Auto).unwrap().value, c(0.0, 0.0));
        let ones = PeriodicHurwitzSpec::new(PeriodicSequence::ones(), 0.5).unwrap();
        let s = c(2.0, 0.0);
        let exact = hurwitz_zeta(s, 0.5).unwrap().value;
        let d1 = (zeta_n(&ones, s, &SmoothingParams::new(1).unwrap(), Cutoff::Auto)
            .unwrap()
            .value
            - exact)
            .norm();
        let d2 = (zeta_n(&ones, s, &p, Cutoff::Auto).unwrap().value - exact).norm();
        assert!(d2 < d1);
    }

    #[test]
    fn doubling_the_cutoff_stays_within_the_tail() {
        let r = SteudingFunctionSpec::riemann();
        let p = SmoothingParams::new(30).unwrap();
        let s = c(0.7, 12.0);
        let a = phi_n(&r, s, &p, Cutoff::Auto).unwrap();
        let b = phi_n(&r, s, &p, Cutoff::Fixed(2 * a.cutoff)).unwrap();
        assert!((a.value - b.value).norm() <= a.tail_bound + 1e-13);
    }

    #[test]
    fn deficit_decreases_toward_the_limit() {
        let r = SteudingFunctionSpec::riemann();
        let s = c(2.0, 0.0);
        let exact = steuding_eval(&r, s).unwrap().value;
        let mut last = f64::INFINITY;
        for n in [10, 100, 1000] {
            let d = (phi_n(&r, s, &SmoothingParams::new(n).unwrap(), Cutoff::Auto)
                .unwrap()
                .value
                - exact)
                .norm();
            assert!(d < last);
            last = d;
        }
    }

    #[test]
    fn cutoff_json() {
        assert_eq!(serde_json::from_str::<Cutoff>(r#""auto""#).unwrap(), Cutoff::Auto);
        assert_eq!(
            serde_json::from_str::<Cutoff>(r#"{"fixed": 12}"#).unwrap(),
            Cutoff::Fixed(12)
        );
        let p: SmoothingParams = serde_json::from_str(r#"{"n": 5}"#).unwrap();
        assert_eq!(p.sigma0_star, DEFAULT_SIGMA0_STAR);
        assert!(serde_json::from_str::<SmoothingParams>(r#"{"n": 5, "sigma0_star": 1.2}"#).is_err());
    }
}
