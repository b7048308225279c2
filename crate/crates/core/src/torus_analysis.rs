//! Characters of the torus along the shift orbit, and a numerical search for
//! integer relations in the frequency set.
//!
//! A character with index `(k⃗, l⃗₁, …, l⃗ᵣ)` takes the value `e^{-ikθ}` at the
//! `k`-th orbit point, where
//! `θ = h₁ Σ_p k_p log p + Σ_j h₂ⱼ Σ_m l_{mj} log(m+αⱼ)`.
//! Its orbit average `g_N = (1/(N+1)) Σ_{k=0}^{N} e^{-ikθ}` tends to zero
//! unless `θ ≡ 0 (mod 2π)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::arith::{gcd_slice, is_prime};
use crate::error::{Error, Result};
use crate::numeric::{cis, cis_turns, dot_extended, sum_compensated, CompensatedSum};
use crate::random_model::ErgodicShift;

/// Finitely supported exponents: `k_primes[p] = k_p`, `l_components[j][m] = l_{m,j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterIndex {
    #[serde(default)]
    pub k_primes: BTreeMap<u64, i64>,
    #[serde(default)]
    pub l_components: Vec<BTreeMap<u64, i64>>,
}

impl CharacterIndex {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.k_primes.values().all(|&k| k == 0) && self.l_components.iter().flat_map(|c| c.values()).all(|&l| l == 0)
    }

    pub fn validate(&self, shift: &ErgodicShift) -> Result<()> {
        if let Some(p) = self.k_primes.keys().find(|&&p| !is_prime(p)) {
            return Err(Error::domain(format!("character index key {p} is not prime")));
        }
        if self.l_components.len() > shift.alphas.len() {
            return Err(Error::domain(format!(
                "index has {} components but the shift has {}",
                self.l_components.len(),
                shift.alphas.len()
            )));
        }
        Ok(())
    }

    /// Compact text form of the support, e.g. `p2:2 p3:-1 m1[0]:4`.
    pub fn support_label(&self) -> String {
        let mut parts: Vec<String> = self
            .k_primes
            .iter()
            .filter(|(_, &k)| k != 0)
            .map(|(p, k)| format!("p{p}:{k}"))
            .collect();
        for (j, comp) in self.l_components.iter().enumerate() {
            parts.extend(
                comp.iter()
                    .filter(|(_, &l)| l != 0)
                    .map(|(m, l)| format!("m{m}[{j}]:{l}")),
            );
        }
        if parts.is_empty() {
            "trivial".into()
        } else {
            parts.join(" ")
        }
    }

    fn phase_terms(&self, shift: &ErgodicShift) -> Vec<f64> {
        let mut terms: Vec<f64> = self
            .k_primes
            .iter()
            .map(|(&p, &k)| shift.h1 * k as f64 * (p as f64).ln())
            .collect();
        for ((comp, &alpha), &h) in self.l_components.iter().zip(&shift.alphas).zip(&shift.h2) {
            terms.extend(comp.iter().map(|(&m, &l)| h * l as f64 * (m as f64 + alpha).ln()));
        }
        terms
    }
}

/// `θ` for the index, summed with compensation.
pub fn character_phase(index: &CharacterIndex, shift: &ErgodicShift) -> Result<f64> {
    shift.validate()?;
    index.validate(shift)?;
    Ok(sum_compensated(index.phase_terms(shift)))
}

/// Representative of `θ mod 2π` in `(-π, π]`, read off the argument of `e^{-iθ}`.
pub fn reduce_phase(theta: f64) -> f64 {
    -cis(-theta).arg()
}

/// `(1/(N+1)) Σ_{k=0}^{N} e^{-ikθ}` by direct summation.
pub fn gn_direct_from_phase(theta: f64, n: u64) -> Complex64 {
    let turns = reduce_phase(theta) / (2.0 * PI);
    let mut sum = CompensatedSum::default();
    for k in 0..=n {
        sum.add(cis_turns(-(k as f64) * turns));
    }
    sum.value() / (n as f64 + 1.0)
}

/// The closed form `sin((N+1)θ/2) / ((N+1) sin(θ/2)) · e^{-iNθ/2}` of the
/// same average, equal to `(1 - e^{-i(N+1)θ}) / ((N+1)(1 - e^{-iθ}))`.
pub fn gn_closed_from_phase(theta: f64, n: u64) -> Result<Complex64> {
    let turns = reduce_phase(theta) / (2.0 * PI);
    if turns == 0.0 {
        return Err(Error::DegenerateCharacter { theta });
    }
    let count = n as f64 + 1.0;
    let ratio = cis_turns(count * turns / 2.0).im / (count * cis_turns(turns / 2.0).im);
    Ok(ratio * cis_turns(-(n as f64) * turns / 2.0))
}

/// `2 / |1 - e^{-iθ}|`, the bound on `(N+1)|g_N|` for every `N`.
pub fn decay_envelope(theta: f64) -> f64 {
    1.0 / (reduce_phase(theta) / 2.0).sin().abs()
}

pub fn fourier_gn_direct(index: &CharacterIndex, shift: &ErgodicShift, n: u64) -> Result<Complex64> {
    let theta = character_phase(index, shift)?;
    Ok(gn_direct_from_phase(theta, n))
}

/// Closed form of `g_N`; 1 for the trivial index, and
/// [`Error::DegenerateCharacter`] when a nontrivial index has `θ ≡ 0` to
/// within the rounding of its terms.
pub fn fourier_gn_closed(index: &CharacterIndex, shift: &ErgodicShift, n: u64) -> Result<Complex64> {
    let theta = character_phase(index, shift)?;
    if index.is_trivial() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let scale: f64 = index.phase_terms(shift).iter().map(|t| t.abs()).sum();
    if reduce_phase(theta).abs() <= 64.0 * f64::EPSILON * scale.max(1.0) {
        return Err(Error::DegenerateCharacter { theta });
    }
    gn_closed_from_phase(theta, n)
}

/// Average of the character over the orbit points `a^k(1)`, `k = 0..=N`.
/// The character at `a^k(1)` is `e^{-ikθ}`, so this is `g_N` summed the same way.
pub fn birkhoff_character_average(index: &CharacterIndex, shift: &ErgodicShift, n: u64) -> Result<Complex64> {
    fourier_gn_direct(index, shift, n)
}

/// One row of a `g_N` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierRow {
    pub support: String,
    pub theta: f64,
    pub n: u64,
    pub gn: Complex64,
    /// `None` when the closed form is degenerate.
    pub gn_closed: Option<Complex64>,
}

pub fn fourier_table(index: &CharacterIndex, shift: &ErgodicShift, ns: &[u64]) -> Result<Vec<FourierRow>> {
    let theta = character_phase(index, shift)?;
    let support = index.support_label();
    ns.iter()
        .map(|&n| {
            let closed = match fourier_gn_closed(index, shift, n) {
                Ok(v) => Some(v),
                Err(Error::DegenerateCharacter { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(FourierRow {
                support: support.clone(),
                theta,
                n,
                gn: gn_direct_from_phase(theta, n),
                gn_closed: closed,
            })
        })
        .collect()
}

/// Labelled real numbers to be tested for linear independence over `ℚ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(String, f64)>", into = "Vec<(String, f64)>")]
pub struct FrequencySet {
    entries: Vec<(String, f64)>,
}

impl TryFrom<Vec<(String, f64)>> for FrequencySet {
    type Error = Error;
    fn try_from(entries: Vec<(String, f64)>) -> Result<Self> {
        FrequencySet::new(entries)
    }
}

impl From<FrequencySet> for Vec<(String, f64)> {
    fn from(set: FrequencySet) -> Self {
        set.entries
    }
}

impl FrequencySet {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self> {
        if let Some((label, v)) = entries.iter().find(|(_, v)| !(v.is_finite() && *v != 0.0)) {
            return Err(Error::domain(format!(
                "frequency {label} = {v} must be finite and nonzero"
            )));
        }
        Ok(FrequencySet { entries })
    }

    /// `{h₁ log p : p ≤ P} ∪ {h₂ⱼ log(m+αⱼ) : m ≤ M} ∪ {π}`.
    pub fn for_shift(shift: &ErgodicShift, prime_bound: u64, m_bound: u64) -> Result<Self> {
        shift.validate()?;
        let mut entries: Vec<(String, f64)> = crate::arith::primes_up_to(prime_bound)
            .into_iter()
            .map(|p| (format!("h1*log({p})"), shift.h1 * (p as f64).ln()))
            .collect();
        for (j, (&alpha, &h)) in shift.alphas.iter().zip(&shift.h2).enumerate() {
            for m in 0..=m_bound {
                entries.push((format!("h2[{j}]*log({m}+alpha[{j}])"), h * (m as f64 + alpha).ln()));
            }
        }
        entries.push(("pi".into(), PI));
        FrequencySet::new(entries)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `Σ coeffs[i] · value(indices[i]) ≈ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub labels: Vec<String>,
    pub indices: Vec<usize>,
    pub coeffs: Vec<i64>,
    pub residual: f64,
}

pub const RELATION_THRESHOLD: f64 = 1e-9;
pub const CONFIRMATION_THRESHOLD: f64 = 1e-12;

/// Every primitive relation `Σ cᵢvᵢ = 0` with `0 < |cᵢ| ≤ max_coeff` on a
/// subset of 2 to `subset_size` entries, sign-normalized so the first
/// coefficient is positive. Subsets of size 2 and 3 are scanned exhaustively
/// (the last coefficient is solved for by rounding); larger ones go through
/// LLL reduction. A candidate must pass `|Σ cᵢvᵢ| ≤ 1e-9` in double and
/// `≤ 1e-12` in double-double accumulation. An empty result is only the
/// absence of small relations.
pub fn integer_relation_scan(freqs: &FrequencySet, max_coeff: i64, subset_size: usize) -> Result<Vec<Relation>> {
    if max_coeff < 1 {
        return Err(Error::domain("max_coeff must be ≥ 1"));
    }
    if subset_size < 2 || subset_size > freqs.len() {
        return Err(Error::domain(format!(
            "subset size {subset_size} must lie in 2..={}",
            freqs.len()
        )));
    }
    let values: Vec<f64> = freqs.entries.iter().map(|(_, v)| *v).collect();
    let mut found = Vec::new();
    for size in 2..=subset_size {
        for subset in combinations(values.len(), size) {
            let sub: Vec<f64> = subset.iter().map(|&i| values[i]).collect();
            let candidates = match size {
                2 => scan_pairs(&sub, max_coeff),
                3 => scan_triples(&sub, max_coeff),
                _ => lll_candidates(&sub, max_coeff),
            };
            for coeffs in candidates {
                if let Some(residual) = confirm(&sub, &coeffs, max_coeff) {
                    found.push(Relation {
                        labels: subset.iter().map(|&i| freqs.entries[i].0.clone()).collect(),
                        indices: subset.clone(),
                        coeffs,
                        residual,
                    });
                }
            }
        }
    }
    found.sort_by(|a, b| (a.indices.len(), &a.indices, &a.coeffs).cmp(&(b.indices.len(), &b.indices, &b.coeffs)));
    found.dedup_by(|a, b| a.indices == b.indices && a.coeffs == b.coeffs);
    Ok(found)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn solve_last(partial: f64, last: f64, max_coeff: i64) -> Option<i64> {
    let c = (-partial / last).round();
    (c != 0.0 && c.abs() <= max_coeff as f64).then_some(c as i64)
}

fn scan_pairs(v: &[f64], max_coeff: i64) -> Vec<Vec<i64>> {
    (1..=max_coeff)
        .filter_map(|c0| solve_last(c0 as f64 * v[0], v[1], max_coeff).map(|c1| vec![c0, c1]))
        .collect()
}

fn scan_triples(v: &[f64], max_coeff: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for c0 in 1..=max_coeff {
        for c1 in -max_coeff..=max_coeff {
            if c1 == 0 {
                continue;
            }
            let partial = c0 as f64 * v[0] + c1 as f64 * v[1];
            if let Some(c2) = solve_last(partial, v[2], max_coeff) {
                out.push(vec![c0, c1, c2]);
            }
        }
    }
    out
}

// Residual if `coeffs` is a full-support, primitive, normalized relation within bounds.
fn confirm(v: &[f64], coeffs: &[i64], max_coeff: i64) -> Option<f64> {
    if coeffs.iter().any(|&c| c == 0 || c.abs() > max_coeff) || coeffs[0] < 0 {
        return None;
    }
    if gcd_slice(coeffs) != 1 {
        return None;
    }
    let as_f64: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
    let plain: f64 = v.iter().zip(&as_f64).map(|(a, b)| a * b).sum();
    if plain.abs() > RELATION_THRESHOLD {
        return None;
    }
    let refined = dot_extended(v, &as_f64);
    (refined.abs() <= CONFIRMATION_THRESHOLD).then_some(refined.abs())
}

// Rows `e_i ⊕ round(W vᵢ)`; short reduced rows carry relations in their first coordinates.
fn lll_candidates(v: &[f64], max_coeff: i64) -> Vec<Vec<i64>> {
    let d = v.len();
    let scale_max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let target = (10.0 * max_coeff as f64 * (d as f64).sqrt()).powi(d as i32);
    let weight = target.clamp(1e6, 1e15) / scale_max;
    let mut basis: Vec<Vec<i128>> = (0..d)
        .map(|i| {
            let mut row = vec![0i128; d + 1];
            row[i] = 1;
            row[d] = (weight * v[i]).round() as i128;
            row
        })
        .collect();
    lll_reduce(&mut basis, 0.99);
    basis
        .into_iter()
        .map(|row| {
            let mut c: Vec<i64> = row[..d].iter().map(|&x| x as i64).collect();
            if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            c
        })
        .collect()
}

fn gram_schmidt(basis: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = basis.len();
    let rows: Vec<Vec<f64>> = basis.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            let m = dot(&rows[i], &star[j]) / norms[j];
            mu[i][j] = m;
            v.iter_mut().zip(&star[j]).for_each(|(a, b)| *a -= m * b);
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lll_reduce(basis: &mut [Vec<i128>], delta: f64) {
    let n = basis.len();
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(basis);
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i128;
                let row_j = basis[j].clone();
                basis[k].iter_mut().zip(&row_j).for_each(|(a, b)| *a -= q * b);
            }
        }
        let (mu, norms) = gram_schmidt(basis);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}
