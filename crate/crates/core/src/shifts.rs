//! Batched evaluation of Dirichlet-type series along vertical shifts.
//!
//! For a slot with nodes `s_q` (offsets `z_q` from a center `c`) and step
//! `h`, the engine produces `F(s_q + ikh)` for `k = 0..=N`. The head sum
//! `Σ_m a_m (m+β)^{-s}` is shared by all nodes through the expansion
//!
//! `Σ_m a_m (m+β)^{-c-z-ikh} = Σ_j z^j/j! · Σ_m a_m (m+β)^{-c} (-L_m)^j e^{-ikhL_m}`
//!
//! with `L_m = log(m+β)`, so one pass over `m` serves every node. Phases
//! `e^{-ikhL_m}` advance by multiplication inside a block of consecutive `k`
//! and are recomputed exactly at each block start, so results do not depend
//! on how blocks are distributed over threads. Continued slots add the
//! Euler–Maclaurin tail per node.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{cis, cis_turns, ensure_finite};
use crate::special_functions::{periodic_tail_parts, EulerMaclaurin, PeriodicHurwitzSpec, SteudingFunctionSpec};

/// The series attached to a slot.
#[derive(Clone, Debug, PartialEq)]
pub enum SlotSeries {
    /// `Σ_{m≥0} b_{m mod l} (m+a)^{-s}`, continued to the plane.
    Periodic {
        coeffs: Vec<Complex64>,
        entire: bool,
        a: f64,
    },
    /// `Σ_i c_i (start + i + shift)^{-s}`, a finite sum.
    Finite {
        start: u64,
        shift: f64,
        coeffs: Vec<Complex64>,
    },
}

impl SlotSeries {
    pub fn steuding(spec: &SteudingFunctionSpec) -> Self {
        let seq = spec.coefficient_sequence();
        SlotSeries::Periodic {
            coeffs: seq.shifted_by_one(),
            entire: seq.has_zero_mean(),
            a: 1.0,
        }
    }

    pub fn periodic_hurwitz(spec: &PeriodicHurwitzSpec) -> Self {
        SlotSeries::Periodic {
            coeffs: spec.seq.coeffs().to_vec(),
            entire: spec.seq.has_zero_mean(),
            a: spec.alpha,
        }
    }

    /// Coefficient `coeffs[i]` belongs to the base `start + i + shift`.
    pub fn finite(start: u64, coeffs: Vec<Complex64>, shift: f64) -> Self {
        SlotSeries::Finite { start, shift, coeffs }
    }
}

/// One slot of a shift scan: the series, the nodes it is evaluated at and
/// the step of its progression.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedSlot {
    pub series: SlotSeries,
    /// Expansion point; ideally the center of the node set.
    pub center: Complex64,
    pub nodes: Vec<Complex64>,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShiftEngine {
    pub em: EulerMaclaurin,
    /// Consecutive shifts sharing one pass over the coefficients.
    pub block: usize,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for ShiftEngine {
    fn default() -> Self {
        ShiftEngine {
            em: EulerMaclaurin::large_height(),
            block: 64,
            workers: None,
        }
    }
}

// Below this the Taylor remainder is negligible against the term sizes.
const TAYLOR_TOLERANCE: f64 = 1e-17;

enum Basis {
    Taylor { order: usize, powers: Vec<Complex64> },
    Direct,
}

fn taylor_order(radius: f64, max_log: f64) -> usize {
    let x = radius * max_log;
    let growth = x.exp();
    let mut term = 1.0;
    let mut j = 0usize;
    while term * growth > TAYLOR_TOLERANCE {
        j += 1;
        term *= x / j as f64;
        if j > 200 {
            break;
        }
    }
    j.max(1)
}

impl ShiftEngine {
    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self, slots: &[ShiftedSlot]) -> Result<()> {
        self.em.validate()?;
        if self.block == 0 {
            return Err(Error::domain("block size must be ≥ 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::domain("worker count must be ≥ 1"));
        }
        for slot in slots {
            ensure_finite(slot.center)?;
            for &z in &slot.nodes {
                ensure_finite(z)?;
            }
            if !slot.h.is_finite() {
                return Err(Error::domain("shift step must be finite"));
            }
            match &slot.series {
                SlotSeries::Periodic { coeffs, a, .. } => {
                    if coeffs.is_empty() || !(*a > 0.0) {
                        return Err(Error::domain("periodic slot needs coefficients and a > 0"));
                    }
                }
                SlotSeries::Finite { start, shift, .. } => {
                    if !(*start as f64 + shift > 0.0) {
                        return Err(Error::domain("finite slot bases must be positive"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Calls `f(k, values)` for `k = 0..=n`, where `values[i][q]` is slot `i`
    /// at its node `q` shifted by `ikh_i`, and returns the results in order of `k`.
    pub fn map_shifts<T, F>(&self, slots: &[ShiftedSlot], n: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, &[&[Complex64]]) -> T + Sync,
    {
        self.map_range(slots, 0, n, f)
    }

    /// As [`map_shifts`](Self::map_shifts) for `k = first..=last`.
    pub fn map_range<T, F>(&self, slots: &[ShiftedSlot], first: u64, last: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, &[&[Complex64]]) -> T + Sync,
    {
        self.validate(slots)?;
        if last < first {
            return Ok(Vec::new());
        }
        let block = self.block as u64;
        let starts: Vec<u64> = (first..=last).step_by(self.block).collect();
        let run = || {
            starts
                .par_iter()
                .map(|&k0| {
                    let len = (last - k0 + 1).min(block) as usize;
                    let values = slots
                        .iter()
                        .map(|slot| self.slot_block(slot, k0, len))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((0..len)
                        .map(|kk| {
                            let views: Vec<&[Complex64]> = slots
                                .iter()
                                .zip(&values)
                                .map(|(slot, v)| &v[kk * slot.nodes.len()..(kk + 1) * slot.nodes.len()])
                                .collect();
                            f(k0 + kk as u64, &views)
                        })
                        .collect::<Vec<T>>())
                })
                .collect::<Result<Vec<Vec<T>>>>()
        };
        let blocks = match self.workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?
                .install(run)?,
            None => run()?,
        };
        Ok(blocks.into_iter().flatten().collect())
    }

    /// Values `[kk * Q + q]` for `k = k0 + kk`, `kk < len`.
    fn slot_block(&self, slot: &ShiftedSlot, k0: u64, len: usize) -> Result<Vec<Complex64>> {
        let q = slot.nodes.len();
        if q == 0 {
            return Ok(Vec::new());
        }
        let height = |k: u64| k as f64 * slot.h;
        match &slot.series {
            SlotSeries::Finite { start, shift, coeffs } => {
                let bases = (0..coeffs.len()).map(|i| (*start + i as u64) as f64 + shift);
                let max_base = (*start + coeffs.len() as u64) as f64 + shift;
                Ok(accumulate(slot, bases.zip(coeffs.iter().copied()), max_base, k0, len))
            }
            SlotSeries::Periodic { coeffs, entire, a } => {
                let max_abs = [k0, k0 + len as u64 - 1]
                    .iter()
                    .flat_map(|&k| {
                        slot.nodes
                            .iter()
                            .map(move |z| (z + Complex64::new(0.0, height(k))).norm())
                    })
                    .fold(0.0, f64::max);
                let n_cut = self.em.truncation(max_abs);
                let l = coeffs.len();
                let head_len = n_cut * l;
                let terms = (0..head_len).map(|m| (m as f64 + a, coeffs[m % l]));
                let mut values = accumulate(slot, terms, head_len as f64 + a, k0, len);
                let ring = TailRing::new(slot, head_len as f64 + a);
                let mut samples = vec![Complex64::new(0.0, 0.0); ring.as_ref().map_or(0, |r| r.points.len())];
                for kk in 0..len {
                    let k = k0 + kk as u64;
                    let shift = Complex64::new(0.0, height(k));
                    if let Some(ring) = &ring {
                        for (v, p) in samples.iter_mut().zip(&ring.points) {
                            *v = periodic_tail_parts(coeffs, true, *a, slot.center + shift + p, n_cut, self.em.order).0;
                        }
                    }
                    for (qi, z) in slot.nodes.iter().enumerate() {
                        let s = z + shift;
                        if !entire && s == Complex64::new(1.0, 0.0) {
                            return Err(Error::AtShift {
                                k,
                                source: Box::new(Error::Pole(s)),
                            });
                        }
                        let tail = match &ring {
                            Some(ring) => {
                                let row = &ring.weights[qi * samples.len()..(qi + 1) * samples.len()];
                                let regular: Complex64 = row.iter().zip(&samples).map(|(w, v)| w * v).sum();
                                if *entire {
                                    regular
                                } else {
                                    regular + pole_term(coeffs, s)
                                }
                            }
                            None => {
                                let (regular, residue) =
                                    periodic_tail_parts(coeffs, *entire, *a, s, n_cut, self.em.order);
                                regular + residue / (s - 1.0)
                            }
                        };
                        values[kk * q + qi] += tail;
                    }
                }
                Ok(values)
            }
        }
    }
}

// `l^{-s} Σ b_r / (s - 1)`, the polar part of the tail.
fn pole_term(coeffs: &[Complex64], s: Complex64) -> Complex64 {
    let l = coeffs.len() as f64;
    (-s * l.ln()).exp() * coeffs.iter().sum::<Complex64>() / (s - 1.0)
}

// The entire part of the tail is sampled on a ring of `M` points around the
// shifted center and carried to the nodes by the interpolating polynomial,
// once `M` is below the node count. `weights[q * M + p]` maps ring value `p`
// to node `q`.
struct TailRing {
    points: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl TailRing {
    fn new(slot: &ShiftedSlot, max_base: f64) -> Option<Self> {
        let offsets: Vec<Complex64> = slot.nodes.iter().map(|z| z - slot.center).collect();
        let radius = offsets.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let m = taylor_order(radius, max_base.max(1.0).ln().max(1.0)) + 2;
        if radius == 0.0 || m >= offsets.len() {
            return None;
        }
        let points: Vec<Complex64> = (0..m).map(|p| radius * cis_turns(p as f64 / m as f64)).collect();
        let mut weights = Vec::with_capacity(offsets.len() * m);
        for z in &offsets {
            // Σ_j (z/R)^j ω^{-pj} / M
            let u = z / radius;
            for p in 0..m {
                let step = u * cis_turns(-(p as f64) / m as f64);
                let mut pw = Complex64::new(1.0, 0.0);
                let mut sum = Complex64::new(0.0, 0.0);
                for _ in 0..m {
                    sum += pw;
                    pw *= step;
                }
                weights.push(sum / m as f64);
            }
        }
        Some(TailRing { points, weights })
    }
}

// Head sums for one block, `[kk * Q + q]`.
fn accumulate(
    slot: &ShiftedSlot,
    terms: impl Iterator<Item = (f64, Complex64)>,
    max_base: f64,
    k0: u64,
    len: usize,
) -> Vec<Complex64> {
    let q = slot.nodes.len();
    let offsets: Vec<Complex64> = slot.nodes.iter().map(|z| z - slot.center).collect();
    let radius = offsets.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let order = taylor_order(radius, max_base.max(1.0).ln().max(1.0));
    let basis = if order < q {
        let mut powers = Vec::with_capacity(q * order);
        for z in &offsets {
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..order {
                powers.push(p);
                p *= z;
            }
        }
        Basis::Taylor { order, powers }
    } else {
        Basis::Direct
    };
    let dim = match &basis {
        Basis::Taylor { order, .. } => *order,
        Basis::Direct => q,
    };

    let zero = Complex64::new(0.0, 0.0);
    let mut acc = vec![zero; dim * len];
    let mut x = vec![zero; len];
    let t0 = k0 as f64 * slot.h;
    for (base, coeff) in terms {
        if coeff == zero {
            continue;
        }
        let log = base.ln();
        let amp = coeff * (-slot.center * log).exp();
        let rotor = cis(-slot.h * log);
        x[0] = amp * cis(-t0 * log);
        for kk in 1..len {
            x[kk] = x[kk - 1] * rotor;
        }
        match &basis {
            Basis::Taylor { order, .. } => {
                let mut pw = 1.0;
                for j in 0..*order {
                    let row = &mut acc[j * len..(j + 1) * len];
                    for (r, xv) in row.iter_mut().zip(&x) {
                        *r += xv * pw;
                    }
                    pw *= -log / (j + 1) as f64;
                }
            }
            Basis::Direct => {
                for (qi, z) in offsets.iter().enumerate() {
                    let e = (-z * log).exp();
                    let row = &mut acc[qi * len..(qi + 1) * len];
                    for (r, xv) in row.iter_mut().zip(&x) {
                        *r += xv * e;
                    }
                }
            }
        }
    }

    let mut out = vec![zero; len * q];
    for kk in 0..len {
        for qi in 0..q {
            out[kk * q + qi] = match &basis {
                Basis::Taylor { order, powers } => {
                    (0..*order).map(|j| acc[j * len + kk] * powers[qi * order + j]).sum()
                }
                Basis::Direct => acc[qi * len + kk],
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::{periodic_hurwitz_zeta, steuding_eval, PeriodicSequence};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(center: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|j| center + radius * cis(2.0 * PI * j as f64 / count as f64))
            .collect()
    }

    #[test]
    fn continued_slots_match_pointwise_evaluation() {
        let center = c(0.75, 0.0);
        let nodes = circle(center, 0.1, 40);
        let hurwitz = PeriodicHurwitzSpec::new(PeriodicSequence::from_real(&[1.0, -2.0, 0.5]).unwrap(), 0.41).unwrap();
        let l4 = SteudingFunctionSpec::dirichlet(4, 1).unwrap();
        let slots = vec![
            ShiftedSlot {
                series: SlotSeries::steuding(&SteudingFunctionSpec::riemann()),
                center,
                nodes: nodes.clone(),
                h: 1.1,
            },
            ShiftedSlot {
                series: SlotSeries::periodic_hurwitz(&hurwitz),
                center,
                nodes: nodes.clone(),
                h: 1.3,
            },
            ShiftedSlot {
                series: SlotSeries::steuding(&l4),
                center,
                nodes: nodes[..3].to_vec(),
                h: 0.7,
            },
        ];
        let engine = ShiftEngine {
            block: 16,
            ..ShiftEngine::default()
        };
        let picks = [0u64, 1, 17, 250, 1999];
        let got = engine
            .map_shifts(&slots, 1999, |k, v| {
                picks
                    .contains(&k)
                    .then(|| (k, v[0].to_vec(), v[1].to_vec(), v[2].to_vec()))
            })
            .unwrap();
        for (k, a, b, d) in got.into_iter().flatten() {
            for (qi, z) in nodes.iter().enumerate() {
                let ra = steuding_eval(&SteudingFunctionSpec::riemann(), z + c(0.0, k as f64 * 1.1)).unwrap();
                let rb = periodic_hurwitz_zeta(&hurwitz, z + c(0.0, k as f64 * 1.3)).unwrap();
                assert!(
                    (a[qi] - ra.value).norm() < 1e-10,
                    "k={k} q={qi}: {} vs {}",
                    a[qi],
                    ra.value
                );
                assert!((b[qi] - rb.value).norm() < 1e-10, "k={k} q={qi}");
                if qi < 3 {
                    let rd = steuding_eval(&l4, z + c(0.0, k as f64 * 0.7)).unwrap();
                    assert!((d[qi] - rd.value).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn finite_slot_is_the_plain_sum() {
        let coeffs: Vec<Complex64> = (0..300)
            .map(|i| c(1.0 / (1.0 + i as f64), (i % 7) as f64 * 0.1))
            .collect();
        let nodes = circle(c(0.6, 2.0), 0.12, 33);
        let slot = ShiftedSlot {
            series: SlotSeries::finite(2, coeffs.clone(), 0.25),
            center: c(0.6, 2.0),
            nodes: nodes.clone(),
            h: 2.5,
        };
        let got = ShiftEngine::default()
            .map_shifts(&[slot], 70, |_, v| v[0].to_vec())
            .unwrap();
        for (k, row) in got.iter().enumerate() {
            for (qi, z) in nodes.iter().enumerate() {
                let s = z + c(0.0, 2.5 * k as f64);
                let direct: Complex64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, b)| b * (-s * ((i + 2) as f64 + 0.25).ln()).exp())
                    .sum();
                assert!((row[qi] - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn result_does_not_depend_on_worker_count() {
        let slot = ShiftedSlot {
            series: SlotSeries::steuding(&SteudingFunctionSpec::riemann()),
            center: c(0.7, 0.0),
            nodes: circle(c(0.7, 0.0), 0.1, 24),
            h: 3.3,
        };
        let one = ShiftEngine::default()
            .with_workers(Some(1))
            .map_shifts(std::slice::from_ref(&slot), 300, |_, v| v[0].to_vec())
            .unwrap();
        let three = ShiftEngine::default()
            .with_workers(Some(3))
            .map_shifts(&[slot], 300, |_, v| v[0].to_vec())
            .unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn pole_is_reported_with_its_shift() {
        let slot = ShiftedSlot {
            series: SlotSeries::steuding(&SteudingFunctionSpec::riemann()),
            center: c(1.0, 0.0),
            nodes: vec![c(1.0, 0.0)],
            h: 1.0,
        };
        let err = ShiftEngine::default().map_shifts(&[slot], 3, |_, _| ()).unwrap_err();
        assert!(matches!(err, Error::AtShift { k: 0, .. }));
        assert_eq!(err.exit_code(), 3);
    }
}
