//! Hurwitz, periodic and periodic Hurwitz zeta-functions, and the
//! Euler-product members used in the experiments.
//!
//! All evaluation goes through Euler–Maclaurin summation of the Hurwitz
//! zeta-function. Periodic series `Σ b_m (m+α)^{-s}` of period `l` are
//! reduced to `l` Hurwitz values; the simple pole at `s = 1` is split off
//! exactly, so sequences with zero mean are evaluated without cancellation
//! near `s = 1`.

mod bernoulli;
mod characters;
mod hurwitz;
mod periodic;
mod steuding;

use serde::{Deserialize, Serialize};

pub use bernoulli::{scaled_bernoulli, MAX_BERNOULLI_INDEX};
pub use characters::{DirichletCharacter, MAX_MODULUS};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_with, EulerMaclaurin, Evaluation};
pub use periodic::{
    periodic_hurwitz_zeta, periodic_hurwitz_zeta_blockwise, periodic_hurwitz_zeta_with, periodic_zeta,
    periodic_zeta_with, PeriodicHurwitzSpec, PeriodicSequence,
};
pub use steuding::{
    prime_mean_square, steuding_eval, steuding_eval_with, DirichletCoefficients, GrowthConstants, MemberChoice,
    SteudingFunctionSpec,
};

pub(crate) use periodic::periodic_tail_parts;

use crate::error::{Error, Result};

/// The rectangle `sigma_min < σ < sigma_max`, `t_min < t < t_max`. Omitted
/// `t` bounds (in JSON) are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripRegion {
    pub sigma_min: f64,
    pub sigma_max: f64,
    #[serde(default = "neg_infinity", skip_serializing_if = "is_infinite")]
    pub t_min: f64,
    #[serde(default = "infinity", skip_serializing_if = "is_infinite")]
    pub t_max: f64,
}

fn neg_infinity() -> f64 {
    f64::NEG_INFINITY
}

fn infinity() -> f64 {
    f64::INFINITY
}

fn is_infinite(x: &f64) -> bool {
    x.is_infinite()
}

impl StripRegion {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let region = StripRegion {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        };
        region.validate()?;
        Ok(region)
    }

    /// The vertical strip `D(a, b)`, unbounded in `t`.
    pub fn strip(sigma_min: f64, sigma_max: f64) -> Self {
        StripRegion {
            sigma_min,
            sigma_max,
            t_min: f64::NEG_INFINITY,
            t_max: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_min < self.sigma_max && self.t_min < self.t_max) {
            return Err(Error::domain(format!("empty strip region {self:?}")));
        }
        Ok(())
    }

    /// Strict containment of the point.
    pub fn contains(&self, s: num_complex::Complex64) -> bool {
        self.sigma_min < s.re && s.re < self.sigma_max && self.t_min < s.im && s.im < self.t_max
    }
}
