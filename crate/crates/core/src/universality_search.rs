//! Discrete universality scans.
//!
//! For each `k = 0..=N` the scan measures how well the shifted functions
//! `φ(s + ikh₁)` and `ζ(s + ikh₂ⱼ, αⱼ; 𝔅ⱼ)` approximate their targets on
//! compact sets, as a sup over a node grid, and counts the `k` where every
//! distance is below `ε`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::numeric::cis_turns;
use crate::random_model::{random_phi, random_zeta, sample_haar, DEFAULT_M_BOUND, DEFAULT_PRIME_BOUND};
use crate::shifts::{ShiftEngine, ShiftedSlot, SlotSeries};
use crate::smoothing::{phi_n_coefficients, phi_n_cutoff, zeta_n_coefficients, zeta_n_cutoff, Cutoff, SmoothingParams};
use crate::special_functions::{PeriodicHurwitzSpec, SteudingFunctionSpec, StripRegion};

pub const DEFAULT_BOUNDARY_NODES: usize = 128;
pub const DEFAULT_INTERIOR_NODES: usize = 25;
pub const MIN_BOUNDARY_NODES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetGeometry {
    Disc {
        center: Complex64,
        radius: f64,
    },
    Rectangle {
        lower_left: Complex64,
        upper_right: Complex64,
    },
}

/// A compact set with connected complement, discretized by boundary nodes
/// (in order along the boundary) followed by interior nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSetSpec {
    #[serde(flatten)]
    pub geometry: SetGeometry,
    #[serde(default = "default_boundary")]
    pub boundary_nodes: usize,
    #[serde(default = "default_interior")]
    pub interior_nodes: usize,
    #[serde(default = "default_host")]
    pub host_strip: StripRegion,
}

fn default_boundary() -> usize {
    DEFAULT_BOUNDARY_NODES
}

fn default_interior() -> usize {
    DEFAULT_INTERIOR_NODES
}

fn default_host() -> StripRegion {
    StripRegion::strip(0.5, 1.0)
}

impl CompactSetSpec {
    pub fn disc(center: Complex64, radius: f64) -> Self {
        CompactSetSpec {
            geometry: SetGeometry::Disc { center, radius },
            boundary_nodes: DEFAULT_BOUNDARY_NODES,
            interior_nodes: DEFAULT_INTERIOR_NODES,
            host_strip: default_host(),
        }
    }

    pub fn rectangle(lower_left: Complex64, upper_right: Complex64) -> Self {
        CompactSetSpec {
            geometry: SetGeometry::Rectangle {
                lower_left,
                upper_right,
            },
            ..Self::disc(Complex64::new(0.0, 0.0), 1.0)
        }
    }

    pub fn center(&self) -> Complex64 {
        match self.geometry {
            SetGeometry::Disc { center, .. } => center,
            SetGeometry::Rectangle {
                lower_left,
                upper_right,
            } => 0.5 * (lower_left + upper_right),
        }
    }

    /// `(σ_min, σ_max, t_min, t_max)` of the set.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match self.geometry {
            SetGeometry::Disc { center, radius } => (
                center.re - radius,
                center.re + radius,
                center.im - radius,
                center.im + radius,
            ),
            SetGeometry::Rectangle {
                lower_left,
                upper_right,
            } => (lower_left.re, upper_right.re, lower_left.im, upper_right.im),
        }
    }

    /// Whether the set lies in `region` with a positive margin.
    pub fn inside(&self, region: &StripRegion) -> bool {
        let (s0, s1, t0, t1) = self.bounding_box();
        region.sigma_min < s0 && s1 < region.sigma_max && region.t_min < t0 && t1 < region.t_max
    }

    pub fn validate(&self) -> Result<()> {
        if self.boundary_nodes < MIN_BOUNDARY_NODES {
            return Err(Error::domain(format!(
                "need at least {MIN_BOUNDARY_NODES} boundary nodes"
            )));
        }
        match self.geometry {
            SetGeometry::Disc { center, radius } => {
                if !(radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) {
                    return Err(Error::domain("disc needs a finite center and positive radius"));
                }
            }
            SetGeometry::Rectangle {
                lower_left: a,
                upper_right: b,
            } => {
                if !(a.re < b.re
                    && a.im < b.im
                    && b.re.is_finite()
                    && b.im.is_finite()
                    && a.re.is_finite()
                    && a.im.is_finite())
                {
                    return Err(Error::domain("rectangle corners must be finite and ordered"));
                }
            }
        }
        self.host_strip.validate()?;
        if !self.inside(&self.host_strip) {
            return Err(Error::Invariant(format!(
                "compact set {:?} is not inside its host strip",
                self.geometry
            )));
        }
        Ok(())
    }
}

/// `count` nodes along the rectangle boundary, counterclockwise from the
/// lower-left corner, equally spaced in arc length.
pub fn rectangle_boundary(lower_left: Complex64, upper_right: Complex64, count: usize) -> Result<Vec<Complex64>> {
    let w = upper_right.re - lower_left.re;
    let h = upper_right.im - lower_left.im;
    if !(w > 0.0 && h > 0.0) || count == 0 {
        return Err(Error::domain("rectangle needs positive sides and at least one node"));
    }
    let perimeter = 2.0 * (w + h);
    Ok((0..count)
        .map(|j| {
            let arc = perimeter * (j as f64 / count as f64);
            let offset = if arc < w {
                Complex64::new(arc, 0.0)
            } else if arc < w + h {
                Complex64::new(w, arc - w)
            } else if arc < 2.0 * w + h {
                Complex64::new(w - (arc - w - h), h)
            } else {
                Complex64::new(0.0, h - (arc - 2.0 * w - h))
            };
            lower_left + offset
        })
        .collect())
}

// Cell centers of a q×q lattice over the box, row by row, first `count` kept.
fn lattice_nodes(lower_left: Complex64, upper_right: Complex64, count: usize) -> Vec<Complex64> {
    let q = (count as f64).sqrt().ceil() as usize;
    let step = (upper_right - lower_left) / q as f64;
    (0..q)
        .flat_map(|i| (0..q).map(move |j| (i, j)))
        .take(count)
        .map(|(i, j)| lower_left + Complex64::new((j as f64 + 0.5) * step.re, (i as f64 + 0.5) * step.im))
        .collect()
}

/// Boundary nodes in order along the boundary, then interior nodes.
pub fn grid_points(set: &CompactSetSpec) -> Result<Vec<Complex64>> {
    set.validate()?;
    let b = set.boundary_nodes;
    let mut nodes = match set.geometry {
        SetGeometry::Disc { center, radius } => (0..b)
            .map(|j| center + radius * cis_turns(j as f64 / b as f64))
            .collect(),
        SetGeometry::Rectangle {
            lower_left,
            upper_right,
        } => rectangle_boundary(lower_left, upper_right, b)?,
    };
    let interior = match set.geometry {
        SetGeometry::Disc { center, radius } => {
            let half = Complex64::new(radius * FRAC_1_SQRT_2, radius * FRAC_1_SQRT_2);
            lattice_nodes(center - half, center + half, set.interior_nodes)
        }
        SetGeometry::Rectangle {
            lower_left,
            upper_right,
        } => lattice_nodes(lower_left, upper_right, set.interior_nodes),
    };
    nodes.extend(interior);
    Ok(nodes)
}

/// `max_i |f_i - g_i|`.
pub fn sup_distance(f: &[Complex64], g: &[Complex64]) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    Ok(f.iter().zip(g).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

/// How a target function is given. Polynomial coefficients are in powers of
/// `s - c` with `c` the center of the target's set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum TargetForm {
    Polynomial {
        coeffs: Vec<Complex64>,
    },
    ExpPolynomial {
        coeffs: Vec<Complex64>,
    },
    /// The smoothed random model of the slot at a Haar point drawn from `seed`.
    Sampled {
        seed: u64,
        smoothing: SmoothingParams,
        #[serde(default = "default_prime_bound")]
        prime_bound: u64,
        #[serde(default = "default_m_bound")]
        m_bound: u64,
    },
}

fn default_prime_bound() -> u64 {
    DEFAULT_PRIME_BOUND
}

fn default_m_bound() -> u64 {
    DEFAULT_M_BOUND
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    #[serde(flatten)]
    pub form: TargetForm,
    pub set: CompactSetSpec,
}

/// The function a target is drawn from when it is sampled.
#[derive(Clone, Copy, Debug)]
pub enum SlotFunction<'a> {
    Phi(&'a SteudingFunctionSpec),
    Zeta(&'a PeriodicHurwitzSpec),
}

/// A target evaluated on its grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltTarget {
    pub nodes: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub boundary_nodes: usize,
    /// Analytic targets are compared on the boundary only.
    pub analytic: bool,
}

impl BuiltTarget {
    /// Nodes the distance is measured on.
    pub fn distance_nodes(&self) -> &[Complex64] {
        if self.analytic {
            &self.nodes[..self.boundary_nodes]
        } else {
            &self.nodes
        }
    }

    pub fn distance_values(&self) -> &[Complex64] {
        &self.values[..self.distance_nodes().len()]
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Net number of turns of `values` taken in order around a closed curve.
pub fn winding_number(values: &[Complex64]) -> i64 {
    let total: f64 = values
        .iter()
        .zip(values.iter().cycle().skip(1))
        .map(|(a, b)| (b / a).arg())
        .sum();
    (total / std::f64::consts::TAU).round() as i64
}

/// Evaluates the target on its grid. For the `φ` slot the target must be
/// identically zero or free of zeros on the set; this is checked on the grid
/// and by the winding number of the boundary values.
pub fn build_target(spec: &TargetSpec, slot: SlotFunction<'_>) -> Result<BuiltTarget> {
    let nodes = grid_points(&spec.set)?;
    let center = spec.set.center();
    let (values, analytic, identically_zero) = match &spec.form {
        TargetForm::Polynomial { coeffs } => (
            nodes.iter().map(|z| horner(coeffs, z - center)).collect::<Vec<_>>(),
            true,
            coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)),
        ),
        TargetForm::ExpPolynomial { coeffs } => (
            nodes.iter().map(|z| horner(coeffs, z - center).exp()).collect(),
            true,
            false,
        ),
        TargetForm::Sampled {
            seed,
            smoothing,
            prime_bound,
            m_bound,
        } => {
            let r = usize::from(matches!(slot, SlotFunction::Zeta(_)));
            let point = sample_haar(*seed, *prime_bound, *m_bound, r)?;
            let values = nodes
                .iter()
                .map(|&s| {
                    match slot {
                        SlotFunction::Phi(phi) => random_phi(phi, s, &point, Some(smoothing), Cutoff::Auto),
                        SlotFunction::Zeta(z) => random_zeta(z, 0, s, &point, Some(smoothing), Cutoff::Auto),
                    }
                    .map(|t| t.value)
                })
                .collect::<Result<Vec<_>>>()?;
            (values, false, false)
        }
    };
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonAdmissibleTarget("target is not finite on the grid".into()));
    }
    if matches!(slot, SlotFunction::Phi(_)) && !identically_zero {
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if values.iter().any(|v| v.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::NonAdmissibleTarget(
                "φ-slot target vanishes on the grid without being identically zero".into(),
            ));
        }
        let turns = winding_number(&values[..spec.set.boundary_nodes]);
        if turns != 0 {
            return Err(Error::NonAdmissibleTarget(format!(
                "φ-slot target has {turns} zero(s) inside the set"
            )));
        }
    }
    Ok(BuiltTarget {
        nodes,
        values,
        boundary_nodes: spec.set.boundary_nodes,
        analytic,
    })
}

/// Least-squares polynomial of the given degree in `s - center` through
/// `(nodes, values)`; returns the coefficients and the largest residual.
pub fn fit_polynomial(
    nodes: &[Complex64],
    values: &[Complex64],
    center: Complex64,
    degree: usize,
) -> Result<(Vec<Complex64>, f64)> {
    if nodes.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: nodes.len(),
            right: values.len(),
        });
    }
    if nodes.len() <= degree {
        return Err(Error::domain("need more nodes than the polynomial degree"));
    }
    // Scale the variable to unit size to keep the Vandermonde matrix tame.
    let radius = nodes
        .iter()
        .map(|z| (z - center).norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let a = DMatrix::from_fn(nodes.len(), degree + 1, |i, j| {
        ((nodes[i] - center) / radius).powu(j as u32)
    });
    let b = DVector::from_column_slice(values);
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::domain(format!("least-squares solve failed: {e}")))?;
    let residual = (&a * &x - &b).iter().map(|r| r.norm()).fold(0.0, f64::max);
    let coeffs = x.iter().enumerate().map(|(j, c)| c / radius.powi(j as i32)).collect();
    Ok((coeffs, residual))
}

/// Common differences and range of the discrete shifts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftLattice {
    pub h1: f64,
    pub h2: Vec<f64>,
    #[serde(alias = "N")]
    pub n: u64,
}

impl ShiftLattice {
    pub fn validate(&self, r: usize) -> Result<()> {
        if !(self.h1 > 0.0 && self.h1.is_finite()) || self.h2.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::domain("shift steps must be positive and finite"));
        }
        if self.h2.len() != r {
            return Err(Error::domain(format!(
                "{} steps h₂ for {r} periodic functions",
                self.h2.len()
            )));
        }
        Ok(())
    }
}

/// One universality experiment: `φ`, `r` periodic Hurwitz functions, a
/// target per slot (φ first), the tolerance and the shift lattice. With
/// `smoothing` set, the smoothed approximants are scanned instead.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftExperiment {
    pub phi_member: SteudingFunctionSpec,
    pub zeta_specs: Vec<PeriodicHurwitzSpec>,
    pub targets: Vec<TargetSpec>,
    pub epsilon: f64,
    pub lattice: ShiftLattice,
    #[serde(default)]
    pub smoothing: Option<SmoothingParams>,
}

impl ShiftExperiment {
    pub fn validate(&self) -> Result<()> {
        let r = self.zeta_specs.len();
        if r == 0 {
            return Err(Error::domain("need at least one periodic Hurwitz function"));
        }
        if self.targets.len() != r + 1 {
            return Err(Error::domain(format!(
                "{} targets for {} slots",
                self.targets.len(),
                r + 1
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain("ε must be finite and non-negative"));
        }
        self.lattice.validate(r)?;
        let phi_strip = StripRegion::strip(self.phi_member.sigma_star, 1.0);
        let zeta_strip = StripRegion::strip(0.5, 1.0);
        for (j, target) in self.targets.iter().enumerate() {
            target.set.validate()?;
            let strip = if j == 0 { &phi_strip } else { &zeta_strip };
            if !target.set.inside(strip) {
                return Err(Error::Invariant(format!(
                    "target set {j} is not inside D({}, {})",
                    strip.sigma_min, strip.sigma_max
                )));
            }
        }
        Ok(())
    }

    pub fn slot_function(&self, j: usize) -> SlotFunction<'_> {
        if j == 0 {
            SlotFunction::Phi(&self.phi_member)
        } else {
            SlotFunction::Zeta(&self.zeta_specs[j - 1])
        }
    }

    pub fn step(&self, j: usize) -> f64 {
        if j == 0 {
            self.lattice.h1
        } else {
            self.lattice.h2[j - 1]
        }
    }
}

/// Distances of every slot at one shift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub k: u64,
    pub distances: Vec<f64>,
    pub hit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub hits: u64,
    pub total: u64,
    pub density: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_k_distances: Option<Vec<ShiftRow>>,
}

/// A strict hit: every distance below `ε`.
pub fn is_hit(distances: &[f64], epsilon: f64) -> bool {
    distances.iter().all(|&d| d < epsilon)
}

/// Recount hits among rows with `k ≤ n_prefix`.
pub fn recount(rows: &[ShiftRow], epsilon: f64, n_prefix: u64) -> DensityEstimate {
    let kept: Vec<&ShiftRow> = rows.iter().filter(|r| r.k <= n_prefix).collect();
    let hits = kept.iter().filter(|r| is_hit(&r.distances, epsilon)).count() as u64;
    let total = kept.len() as u64;
    DensityEstimate {
        hits,
        total,
        density: if total == 0 { 0.0 } else { hits as f64 / total as f64 },
        per_k_distances: None,
    }
}

/// Hits of each slot on its own.
pub fn marginal_hits(rows: &[ShiftRow], epsilon: f64) -> Vec<u64> {
    let slots = rows.first().map_or(0, |r| r.distances.len());
    (0..slots)
        .map(|j| rows.iter().filter(|r| r.distances[j] < epsilon).count() as u64)
        .collect()
}

fn slot_series(exp: &ShiftExperiment, j: usize, sigma_min: f64) -> Result<SlotSeries> {
    Ok(match (exp.slot_function(j), &exp.smoothing) {
        (SlotFunction::Phi(phi), None) => SlotSeries::steuding(phi),
        (SlotFunction::Zeta(z), None) => SlotSeries::periodic_hurwitz(z),
        (SlotFunction::Phi(phi), Some(p)) => {
            let m = phi_n_cutoff(phi, sigma_min, p, Cutoff::Auto)?;
            SlotSeries::finite(1, phi_n_coefficients(phi, p, m), 0.0)
        }
        (SlotFunction::Zeta(z), Some(p)) => {
            let m = zeta_n_cutoff(z, sigma_min, p, Cutoff::Auto)?;
            SlotSeries::finite(0, zeta_n_coefficients(z, p, m), z.alpha)
        }
    })
}

/// Runs the scan over `k = 0..=N` and returns the hit count with the per-`k` table.
pub fn scan(exp: &ShiftExperiment, engine: &ShiftEngine) -> Result<DensityEstimate> {
    exp.validate()?;
    let targets = exp
        .targets
        .iter()
        .enumerate()
        .map(|(j, t)| build_target(t, exp.slot_function(j)))
        .collect::<Result<Vec<_>>>()?;
    let slots = targets
        .iter()
        .enumerate()
        .map(|(j, t)| {
            Ok(ShiftedSlot {
                series: slot_series(exp, j, exp.targets[j].set.bounding_box().0)?,
                center: exp.targets[j].set.center(),
                nodes: t.distance_nodes().to_vec(),
                h: exp.step(j),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let epsilon = exp.epsilon;
    let rows = engine.map_shifts(&slots, exp.lattice.n, |k, values| {
        let distances: Vec<f64> = values
            .iter()
            .zip(&targets)
            .map(|(v, t)| {
                v.iter()
                    .zip(t.distance_values())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        let hit = is_hit(&distances, epsilon);
        ShiftRow { k, distances, hit }
    })?;
    let mut estimate = recount(&rows, epsilon, exp.lattice.n);
    estimate.per_k_distances = Some(rows);
    Ok(estimate)
}

/// Densities for each `ε`, recounted from a completed scan's table.
pub fn density_vs_epsilon(rows: &[ShiftRow], epsilons: &[f64]) -> Result<Vec<(f64, DensityEstimate)>> {
    if epsilons.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("ε values must be sorted ascending"));
    }
    let n = rows.iter().map(|r| r.k).max().unwrap_or(0);
    Ok(epsilons.iter().map(|&e| (e, recount(rows, e, n))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::PeriodicSequence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_and_rectangle_grids() {
        let mut disc = CompactSetSpec::disc(c(0.75, 0.0), 0.1);
        disc.boundary_nodes = 16;
        disc.interior_nodes = 0;
        let nodes = grid_points(&disc).unwrap();
        assert_eq!(nodes.len(), 16);
        assert!(nodes.iter().all(|z| ((z - c(0.75, 0.0)).norm() - 0.1).abs() < 1e-15));

        let mut rect = CompactSetSpec::rectangle(c(0.5, -0.1), c(0.7, 0.1));
        rect.host_strip = StripRegion::strip(0.4, 1.0);
        let nodes = grid_points(&rect).unwrap();
        assert_eq!(nodes.len(), 128 + 25);
        assert!(nodes
            .iter()
            .all(|z| z.re >= 0.5 && z.re <= 0.7 && z.im >= -0.1 && z.im <= 0.1));

        for set in [disc, rect] {
            let mut coarse = set;
            coarse.boundary_nodes = 32;
            let mut fine = set;
            fine.boundary_nodes = 64;
            let a = grid_points(&coarse).unwrap();
            let b = grid_points(&fine).unwrap();
            assert!(a[..32].iter().all(|z| b[..64].contains(z)));
        }
    }

    #[test]
    fn set_validation() {
        let outside = CompactSetSpec::disc(c(0.45, 0.0), 0.1);
        assert!(matches!(outside.validate(), Err(Error::Invariant(_))));
        let mut few = CompactSetSpec::disc(c(0.75, 0.0), 0.1);
        few.boundary_nodes = 8;
        assert!(few.validate().is_err());
    }

    #[test]
    fn distances() {
        let f = vec![c(1.0, 2.0), c(-0.5, 0.0), c(3.0, -1.0)];
        assert_eq!(sup_distance(&f, &f).unwrap(), 0.0);
        let g: Vec<_> = f.iter().map(|z| z + c(0.3, -0.4)).collect();
        assert!((sup_distance(&f, &g).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(sup_distance(&f, &g[..2]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn polynomial_targets() {
        let set = CompactSetSpec::disc(c(0.75, 0.0), 0.1);
        let phi = SteudingFunctionSpec::riemann();
        let constant = TargetSpec {
            form: TargetForm::Polynomial {
                coeffs: vec![c(0.4, 0.2)],
            },
            set,
        };
        let t = build_target(&constant, SlotFunction::Phi(&phi)).unwrap();
        assert!(t.values.iter().all(|v| *v == c(0.4, 0.2)));
        let exp_zero = TargetSpec {
            form: TargetForm::ExpPolynomial { coeffs: vec![] },
            set,
        };
        assert!(build_target(&exp_zero, SlotFunction::Phi(&phi))
            .unwrap()
            .values
            .iter()
            .all(|v| *v == c(1.0, 0.0)));
        let zero = TargetSpec {
            form: TargetForm::Polynomial {
                coeffs: vec![c(0.0, 0.0)],
            },
            set,
        };
        assert!(build_target(&zero, SlotFunction::Phi(&phi)).is_ok());
        // s - 0.75 vanishes at the center.
        let vanishing = TargetSpec {
            form: TargetForm::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(1.0, 0.0)],
            },
            set,
        };
        assert!(matches!(
            build_target(&vanishing, SlotFunction::Phi(&phi)),
            Err(Error::NonAdmissibleTarget(_))
        ));
        let hurwitz = PeriodicHurwitzSpec::new(PeriodicSequence::ones(), 0.5).unwrap();
        assert!(build_target(&vanishing, SlotFunction::Zeta(&hurwitz)).is_ok());
    }

    #[test]
    fn winding() {
        let circle: Vec<Complex64> = (0..64).map(|j| cis_turns(j as f64 / 64.0)).collect();
        assert_eq!(winding_number(&circle), 1);
        let squared: Vec<Complex64> = circle.iter().map(|z| z * z).collect();
        assert_eq!(winding_number(&squared), 2);
        let shifted: Vec<Complex64> = circle.iter().map(|z| z + 3.0).collect();
        assert_eq!(winding_number(&shifted), 0);
    }

    #[test]
    fn fit_residual_drops_with_degree() {
        let mut set = CompactSetSpec::disc(c(0.75, 0.0), 0.1);
        set.boundary_nodes = 64;
        set.interior_nodes = 0;
        let target = TargetSpec {
            form: TargetForm::Sampled {
                seed: 11,
                smoothing: SmoothingParams::new(50).unwrap(),
                prime_bound: 10_000,
                m_bound: 10,
            },
            set,
        };
        let phi = SteudingFunctionSpec::riemann();
        let built = build_target(&target, SlotFunction::Phi(&phi)).unwrap();
        let mut last = f64::INFINITY;
        for degree in 3..=5 {
            let (coeffs, residual) = fit_polynomial(&built.nodes, &built.values, set.center(), degree).unwrap();
            assert!(residual < last);
            last = residual;
            // Normal equations AᴴA x = Aᴴb hold at the solution.
            let a = DMatrix::from_fn(64, degree + 1, |i, j| (built.nodes[i] - set.center()).powu(j as u32));
            let x = DVector::from_vec(coeffs);
            let b = DVector::from_column_slice(&built.values);
            let normal = a.adjoint() * (&a * &x - &b);
            assert!(normal.norm() < 1e-9 * b.norm());
        }
    }

    #[test]
    fn recounts() {
        let rows: Vec<ShiftRow> = (0..10u64)
            .map(|k| {
                let d = vec![k as f64 * 0.1, 0.35];
                ShiftRow {
                    k,
                    hit: is_hit(&d, 0.5),
                    distances: d,
                }
            })
            .collect();
        let dense = recount(&rows, 0.5, 9);
        assert_eq!((dense.hits, dense.total), (5, 10));
        assert_eq!(recount(&rows, 0.35, 9).hits, 0);
        assert_eq!(recount(&rows, 0.5, 2).total, 3);
        let table = density_vs_epsilon(&rows, &[0.0, 0.4, 0.45, 10.0]).unwrap();
        assert!(table.windows(2).all(|w| w[0].1.density <= w[1].1.density));
        assert_eq!(table[3].1.density, 1.0);
        assert!(density_vs_epsilon(&rows, &[0.5, 0.4]).is_err());
        let marginal = marginal_hits(&rows, 0.5);
        assert!(dense.hits <= *marginal.iter().min().unwrap());
    }

    #[test]
    fn target_json() {
        let text = r#"{"form": "sampled", "seed": 3, "smoothing": {"n": 50},
                       "set": {"kind": "disc", "center": [0.75, 0.0], "radius": 0.1}}"#;
        let t: TargetSpec = serde_json::from_str(text).unwrap();
        assert_eq!(t.set.boundary_nodes, DEFAULT_BOUNDARY_NODES);
        assert!(matches!(
            t.form,
            TargetForm::Sampled {
                prime_bound: 10_000,
                ..
            }
        ));
        let back: TargetSpec = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
