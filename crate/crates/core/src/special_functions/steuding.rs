use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::characters::DirichletCharacter;
use super::hurwitz::{EulerMaclaurin, Evaluation};
use super::periodic::{periodic_zeta_with, PeriodicSequence};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::numeric::ensure_finite;

/// Anything with a Dirichlet series `Σ_{m≥1} c_m m^{-s}` and a uniform
/// bound `|c_m| ≤ C`.
pub trait DirichletCoefficients {
    fn coefficient(&self, m: u64) -> Complex64;
    fn coefficient_bound(&self) -> f64;
}

/// Growth constants of the class normalization. Stored as given; nothing
/// computed here depends on them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GrowthConstants {
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
    #[serde(default)]
    pub c3: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
enum Member {
    Riemann,
    Dirichlet(DirichletCharacter),
}

/// An Euler-product zeta-function with a known continuation: the Riemann
/// zeta-function or `L(s, χ)` for a primitive character `χ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MemberConfig", into = "MemberConfig")]
pub struct SteudingFunctionSpec {
    pub name: String,
    member: Member,
    /// Continuation abscissa: evaluation is supported for `σ > sigma_phi`.
    pub sigma_phi: f64,
    pub sigma_star: f64,
    pub kappa: f64,
    pub poles: Vec<Complex64>,
    pub growth: Option<GrowthConstants>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberChoice {
    Riemann,
    Dirichlet { modulus: u64, index: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MemberConfig {
    member: MemberChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthConstants>,
}

impl TryFrom<MemberConfig> for SteudingFunctionSpec {
    type Error = Error;
    fn try_from(cfg: MemberConfig) -> Result<Self> {
        let mut spec = SteudingFunctionSpec::from_choice(&cfg.member)?;
        spec.growth = cfg.growth;
        Ok(spec)
    }
}

impl From<SteudingFunctionSpec> for MemberConfig {
    fn from(spec: SteudingFunctionSpec) -> Self {
        MemberConfig {
            member: spec.choice(),
            growth: spec.growth,
        }
    }
}

impl SteudingFunctionSpec {
    pub fn riemann() -> Self {
        SteudingFunctionSpec {
            name: "riemann".into(),
            member: Member::Riemann,
            sigma_phi: 0.0,
            sigma_star: 0.5,
            kappa: 1.0,
            poles: vec![Complex64::new(1.0, 0.0)],
            growth: None,
        }
    }

    /// `L(s, χ)` for the primitive character with the given index mod `modulus`
    /// (see [`DirichletCharacter`] for the indexing).
    pub fn dirichlet(modulus: u64, index: u64) -> Result<Self> {
        if modulus < 3 {
            return Err(Error::domain(format!(
                "no nonprincipal primitive character mod {modulus}; use the riemann member"
            )));
        }
        let chi = DirichletCharacter::new(modulus, index)?;
        if !chi.is_primitive() {
            return Err(Error::domain(format!(
                "character {index} mod {modulus} is not primitive"
            )));
        }
        Ok(SteudingFunctionSpec {
            name: format!("dirichlet_{modulus}_{index}"),
            member: Member::Dirichlet(chi),
            sigma_phi: 0.0,
            sigma_star: 0.5,
            kappa: 1.0,
            poles: Vec::new(),
            growth: None,
        })
    }

    pub fn from_choice(choice: &MemberChoice) -> Result<Self> {
        match *choice {
            MemberChoice::Riemann => Ok(Self::riemann()),
            MemberChoice::Dirichlet { modulus, index } => Self::dirichlet(modulus, index),
        }
    }

    pub fn choice(&self) -> MemberChoice {
        match &self.member {
            Member::Riemann => MemberChoice::Riemann,
            Member::Dirichlet(chi) => MemberChoice::Dirichlet {
                modulus: chi.modulus(),
                index: chi.index(),
            },
        }
    }

    pub fn dirichlet_coeff(&self, m: u64) -> Complex64 {
        match &self.member {
            Member::Riemann => Complex64::new(1.0, 0.0),
            Member::Dirichlet(chi) => chi.value(m),
        }
    }

    /// Local roots `a_1(p), …, a_l(p)` of the Euler factor `∏_j (1 - a_j(p) p^{-s})^{-1}`.
    pub fn local_coeffs(&self, p: u64) -> Vec<Complex64> {
        vec![self.dirichlet_coeff(p)]
    }

    pub fn degree(&self) -> usize {
        1
    }

    /// The coefficient sequence as one period `c_0, …, c_{q-1}` (index `m mod q`).
    pub fn coefficient_sequence(&self) -> PeriodicSequence {
        match &self.member {
            Member::Riemann => PeriodicSequence::ones(),
            Member::Dirichlet(chi) => {
                PeriodicSequence::new(chi.values().to_vec()).expect("primitive character has minimal period")
            }
        }
    }

    pub fn is_pole(&self, s: Complex64) -> bool {
        self.poles.contains(&s)
    }

    /// `∏_{p ≤ P}` of the Euler factors, with a certified bound on the
    /// distance to the full product (`σ > 1` only).
    pub fn euler_product(&self, s: Complex64, prime_bound: u64) -> Result<Evaluation> {
        ensure_finite(s)?;
        if s.re <= 1.0 {
            return Err(Error::UnsupportedRegion {
                sigma: s.re,
                sigma_phi: 1.0,
            });
        }
        let mut value = Complex64::new(1.0, 0.0);
        for p in primes_up_to(prime_bound) {
            let p_pow = (-s * (p as f64).ln()).exp();
            for a in self.local_coeffs(p) {
                value /= 1.0 - a * p_pow;
            }
        }
        // |log of the omitted factors| ≤ l Σ_{n>P} n^{-σ} / (1 - P^{-σ}).
        let big_p = prime_bound.max(1) as f64;
        let sigma = s.re;
        let delta = self.degree() as f64 * big_p.powf(1.0 - sigma) / ((sigma - 1.0) * (1.0 - big_p.powf(-sigma)));
        Ok(Evaluation {
            value,
            error_bound: value.norm() * delta.exp_m1(),
        })
    }

    /// Partial Dirichlet series `Σ_{m ≤ terms} c_m m^{-s}`.
    pub fn dirichlet_series(&self, s: Complex64, terms: u64) -> Complex64 {
        (1..=terms)
            .map(|m| self.dirichlet_coeff(m) * (-s * (m as f64).ln()).exp())
            .sum()
    }
}

impl DirichletCoefficients for SteudingFunctionSpec {
    fn coefficient(&self, m: u64) -> Complex64 {
        self.dirichlet_coeff(m)
    }

    fn coefficient_bound(&self) -> f64 {
        1.0
    }
}

/// Evaluates the member at `s` through its continuation.
pub fn steuding_eval(spec: &SteudingFunctionSpec, s: Complex64) -> Result<Evaluation> {
    steuding_eval_with(spec, s, &EulerMaclaurin::default())
}

pub fn steuding_eval_with(spec: &SteudingFunctionSpec, s: Complex64, em: &EulerMaclaurin) -> Result<Evaluation> {
    ensure_finite(s)?;
    if s.re <= spec.sigma_phi {
        return Err(Error::UnsupportedRegion {
            sigma: s.re,
            sigma_phi: spec.sigma_phi,
        });
    }
    if spec.is_pole(s) {
        return Err(Error::Pole(s));
    }
    periodic_zeta_with(&spec.coefficient_sequence(), s, em)
}

/// `(1/π(x)) Σ_{p ≤ x} |a(p)|²`.
pub fn prime_mean_square(spec: &SteudingFunctionSpec, x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::domain(format!("x = {x} must be ≥ 2")));
    }
    let primes = primes_up_to(x.floor() as u64);
    let total: f64 = primes.iter().map(|&p| spec.dirichlet_coeff(p).norm_sqr()).sum();
    Ok(total / primes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::hurwitz_zeta;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn riemann_and_catalan() {
        let z = steuding_eval(&SteudingFunctionSpec::riemann(), c(2.0, 0.0))
            .unwrap()
            .value;
        assert!((z.re - 1.6449340668482264).abs() < 1e-13);
        let l = SteudingFunctionSpec::dirichlet(4, 1).unwrap();
        let g = steuding_eval(&l, c(2.0, 0.0)).unwrap().value;
        assert!((g.re - 0.915_965_594_177_219).abs() < 1e-13);
    }

    #[test]
    fn errors() {
        let r = SteudingFunctionSpec::riemann();
        assert!(matches!(steuding_eval(&r, c(1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(
            steuding_eval(&r, c(-0.5, 1.0)),
            Err(Error::UnsupportedRegion { .. })
        ));
        assert!(SteudingFunctionSpec::dirichlet(4, 0).is_err());
        assert!(SteudingFunctionSpec::dirichlet(6, 1).is_err());
        // L(s, χ_4) is entire.
        assert!(steuding_eval(&SteudingFunctionSpec::dirichlet(4, 1).unwrap(), c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn riemann_is_hurwitz_at_one() {
        let r = SteudingFunctionSpec::riemann();
        for s in [c(0.3, 5.0), c(0.8, -40.0), c(2.7, 0.1)] {
            let a = steuding_eval(&r, s).unwrap().value;
            let b = hurwitz_zeta(s, 1.0).unwrap().value;
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn euler_product_matches_series_at_three() {
        for spec in [
            SteudingFunctionSpec::riemann(),
            SteudingFunctionSpec::dirichlet(4, 1).unwrap(),
            SteudingFunctionSpec::dirichlet(5, 1).unwrap(),
        ] {
            let s = c(3.0, 2.0);
            let product = spec.euler_product(s, 100_000).unwrap();
            let series = spec.dirichlet_series(s, 1_000_000);
            assert!(product.error_bound < 1e-9);
            assert!((product.value - series).norm() < 1e-10, "{}", spec.name);
        }
    }

    #[test]
    fn euler_product_reproduces_dirichlet_series_at_two() {
        let spec = SteudingFunctionSpec::dirichlet(5, 2).unwrap();
        let s = c(2.0, 0.0);
        let product = spec.euler_product(s, 100_000).unwrap();
        let exact = steuding_eval(&spec, s).unwrap().value;
        assert!((product.value - exact).norm() <= product.error_bound);
        assert!(product.error_bound < 1e-4);
    }

    #[test]
    fn prime_mean_square_values() {
        let r = SteudingFunctionSpec::riemann();
        for x in [2.0, 3.5, 100.0, 12345.0] {
            assert_eq!(prime_mean_square(&r, x).unwrap(), 1.0);
        }
        let l = SteudingFunctionSpec::dirichlet(4, 1).unwrap();
        assert_eq!(prime_mean_square(&l, 2.0).unwrap(), 0.0);
        let k = prime_mean_square(&l, 1e5).unwrap();
        assert!((k - 1.0).abs() < 1e-3);
        assert_eq!(k, 1.0 - 1.0 / 9592.0);
        assert!(prime_mean_square(&r, 1.5).is_err());
    }

    #[test]
    fn member_json() {
        let spec: SteudingFunctionSpec = serde_json::from_str(r#"{"member": "riemann"}"#).unwrap();
        assert_eq!(spec, SteudingFunctionSpec::riemann());
        let spec: SteudingFunctionSpec =
            serde_json::from_str(r#"{"member": {"dirichlet": {"modulus": 5, "index": 1}}}"#).unwrap();
        assert_eq!(spec.name, "dirichlet_5_1");
        assert_eq!(
            serde_json::to_string(&spec).unwrap(),
            r#"{"member":{"dirichlet":{"modulus":5,"index":1}}}"#
        );
        assert!(serde_json::from_str::<SteudingFunctionSpec>(
            r#"{"member": {"dirichlet": {"modulus": 4, "index": 0}}}"#
        )
        .is_err());
    }
}
