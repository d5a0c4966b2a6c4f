//! Dimensionless scattering parameters.
//!
//! Natural units `hbar = m = d = 1` throughout: all physics enters through
//! `kappa = k_0 d`, `w/d`, `g_tilde = m g_r / (hbar^2 d)` and the three
//! angles.

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Complete dimensionless input set for one scattering configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterParams<T> {
    /// `kappa = k_0 d > 0`.
    pub kappa: T,
    /// Wave-packet width over target separation, `w/d > 0`.
    pub w_over_d: T,
    /// Renormalized coupling `g_tilde >= 0`.
    pub g_tilde: T,
    /// Incident angle from the target axis, in `[0, pi]`.
    pub theta0: T,
    /// Detector angle from the target axis, in `[0, pi]`.
    pub theta_d: T,
    /// Detector half-aperture, in `(0, pi]`.
    pub dtheta: T,
}

impl<T: Real> ScatterParams<T> {
    pub fn new(kappa: T, w_over_d: T, g_tilde: T, theta0: T, theta_d: T, dtheta: T) -> Result<Self> {
        let p = ScatterParams {
            kappa,
            w_over_d,
            g_tilde,
            theta0,
            theta_d,
            dtheta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > T::zero()) {
            return Err(Error::Domain(format!("kappa must be positive, got {}", self.kappa)));
        }
        if !(self.w_over_d > T::zero()) {
            return Err(Error::Domain(format!(
                "w_over_d must be positive, got {}",
                self.w_over_d
            )));
        }
        if !(self.g_tilde >= T::zero()) {
            return Err(Error::Domain(format!(
                "g_tilde must be non-negative, got {}",
                self.g_tilde
            )));
        }
        for (name, angle, lo_open) in [
            ("theta0", self.theta0, false),
            ("theta_d", self.theta_d, false),
            ("dtheta", self.dtheta, true),
        ] {
            let lo_ok = if lo_open { angle > T::zero() } else { angle >= T::zero() };
            if !(lo_ok && angle <= T::PI()) {
                return Err(Error::Domain(format!(
                    "{name} must lie in {}, got {angle}",
                    if lo_open { "(0, pi]" } else { "[0, pi]" }
                )));
            }
        }
        Ok(())
    }

    /// Monochromaticity figure of merit `w k_0 = kappa * (w/d)`.
    ///
    /// The closed forms assume `w k_0 >> 1`; results degrade gracefully
    /// below, so this is a warning-level check rather than an error.
    pub fn monochromaticity(&self) -> T {
        self.kappa * self.w_over_d
    }

    /// True when `w k_0 >= 10`.
    pub fn is_well_monochromatized(&self) -> bool {
        self.monochromaticity() >= lit(10.0)
    }

    /// `d/w`, the inverse relative packet width.
    pub fn d_over_w(&self) -> T {
        T::one() / self.w_over_d
    }
}
