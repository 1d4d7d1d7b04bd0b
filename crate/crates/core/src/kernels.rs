//! Interaction kernels of the write/readout passes.
//!
//! With dimensionless coordinates `p, q` in `[0, 1]`:
//!
//! ```text
//! G0(p, q) = (kappa/2) J0(kappa sqrt(pq))
//! G1(p, q) = delta(p) - (kappa/2) J1(kappa sqrt(qp)) sqrt(q/p) theta(p)
//! ```
//!
//! The `delta(p)` part of `G1` is an identity contribution applied by the
//! operators that consume it; only the regular part is exposed pointwise. The
//! regular part equals `-q * (kappa/2) J1(kappa sqrt(s))/sqrt(s)` with `s = pq`,
//! an entire function of `s`, so it stays finite as `p -> 0`.

use crate::error::arg_err;
use crate::specfun::{j0, j1_over_x};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Dimensionless light–spin coupling `kappa >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(arg_err!("coupling must be finite and >= 0, got {kappa}"));
        }
        Ok(Self(kappa))
    }

    pub fn kappa(self) -> f64 {
        self.0
    }

    /// `G0(p, q)`.
    pub fn g0(self, p: f64, q: f64) -> Result<f64> {
        unit_arg("p", p)?;
        unit_arg("q", q)?;
        Ok(self.g0_unchecked(p, q))
    }

    #[inline]
    pub(crate) fn g0_unchecked(self, p: f64, q: f64) -> f64 {
        let k = self.0;
        // p*q commutes exactly, keeping G0 symmetric bit-for-bit
        0.5 * k * j0(k * (p * q).sqrt())
    }

    /// Regular (Volterra) part of `G1(p, q)` for `p > 0`.
    pub fn g1_regular(self, p: f64, q: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(arg_err!("g1_regular needs p in (0, 1], got {p}"));
        }
        unit_arg("q", q)?;
        Ok(-q * self.greens_j1_unchecked(q * p))
    }

    /// `(kappa/2) J1(kappa sqrt(s)) / sqrt(s)` for `s > 0`.
    ///
    /// Tends to `kappa^2 / 4` as `s -> 0+`; see
    /// [`Coupling::greens_j1_limit`].
    pub fn greens_j1_kernel(self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(arg_err!("greens_j1_kernel needs finite s > 0, got {s}"));
        }
        Ok(self.greens_j1_unchecked(s))
    }

    /// The `s -> 0+` limit of [`Coupling::greens_j1_kernel`].
    pub fn greens_j1_limit(self) -> f64 {
        0.25 * self.0 * self.0
    }

    /// Defined for `s >= 0`, including the limit point.
    #[inline]
    pub(crate) fn greens_j1_unchecked(self, s: f64) -> f64 {
        let k = self.0;
        0.5 * k * k * j1_over_x(k * s.sqrt())
    }
}

impl TryFrom<f64> for Coupling {
    type Error = crate::Error;
    fn try_from(v: f64) -> Result<Self> {
        Coupling::new(v)
    }
}

impl From<Coupling> for f64 {
    fn from(c: Coupling) -> f64 {
        c.0
    }
}

fn unit_arg(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(arg_err!("{name} must lie in [0, 1], got {v}"))
    }
}

/// Optical depth and spontaneous-emission probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCoupling {
    pub alpha0: f64,
    pub eta: f64,
}

impl PhysicalCoupling {
    /// `kappa = sqrt(alpha0 * eta)`.
    ///
    /// `eta = 1` is accepted with a warning: the relation is meant for
    /// `eta << 1`.
    pub fn to_coupling(self) -> Result<Coupling> {
        let Self { alpha0, eta } = self;
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(arg_err!("optical depth must be > 0, got {alpha0}"));
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(arg_err!(
                "spontaneous-emission probability must lie in (0, 1), got {eta}"
            ));
        }
        if eta == 1.0 {
            log::warn!("eta = 1 is outside the eta << 1 regime of kappa^2 = alpha0 * eta");
        }
        Coupling::new((alpha0 * eta).sqrt())
    }
}
