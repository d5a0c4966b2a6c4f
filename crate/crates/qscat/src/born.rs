//! Lowest-order (Born) concurrence and detection yield.
//!
//! After post-selecting the mediator spin-flipped inside the detector cap,
//! the target pair is described by a density matrix whose nonzero block is
//!
//! ```text
//! a11 = a22 = F dOmega
//! a12 = F e^{-i kappa cos(theta0)}
//!         Int_cap e^{i kappa k.d} e^{-[(k - k0).d]^2 (d/w)^2 / 8} d^2k
//! F   = (g_tilde^2 / 2 pi^3) (d/w)^2 e^{-(1 - cos^2 theta0)(d/w)^2 / 8}
//! ```
//!
//! The concurrence is `2|a12|/(a11+a22)` and the normalized yield carries
//! the figure-axis convention `P w^2 / (dOmega d^2)`.

use crate::capquad::{integrate_cap, CapRule};
use crate::error::{Error, Result};
use crate::params::ScatterParams;
use crate::real::{lit, phase, Cplx, Real};

/// Nonzero block of the post-selected two-qubit density matrix (the
/// one-excitation sector), unnormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoAB<T> {
    pub a11: T,
    pub a22: T,
    pub a12: Cplx<T>,
}

impl<T: Real> RhoAB<T> {
    /// Positivity: `|a12|^2 <= a11 a22` within roundoff.
    pub fn is_positive(&self) -> bool {
        let bound = self.a11 * self.a22;
        self.a11 >= T::zero()
            && self.a22 >= T::zero()
            && self.a12.norm_sqr() <= bound + lit::<T>(1e-12) * bound.max(T::one())
    }
}

/// Concurrence of the post-selected block, `2 |a12| / (a11 + a22)`.
pub fn concurrence_from_rho<T: Real>(rho: &RhoAB<T>) -> Result<T> {
    let total = rho.a11 + rho.a22;
    if !(total > T::zero()) {
        return Err(Error::ZeroYield);
    }
    Ok(lit::<T>(2.0) * rho.a12.norm() / total)
}

/// Reduced plane-wave scattering amplitude `e^{i (k - k0).d / 2}` shared by
/// the Born and full-order matrix elements. Arguments are the dimensionless
/// products `k.d` and `k0.d`.
pub fn plane_wave_amplitude<T: Real>(k_dot_d: T, k0_dot_d: T) -> Cplx<T> {
    phase((k_dot_d - k0_dot_d) * lit::<T>(0.5))
}

/// Quadrature tolerance used for the Born cap integrals.
const BORN_QUAD_TOL: f64 = 1e-11;

/// Born density-matrix block by cap quadrature.
///
/// The Gaussian packet factor stays inside the integrand (it matters for
/// `w <~ d`); for `w >> d` it degenerates to the plane-wave cap average.
pub fn born_rho<T: Real>(p: &ScatterParams<T>) -> Result<RhoAB<T>> {
    p.validate()?;
    let rule = CapRule::new(p.theta_d, p.dtheta)?.with_tol(lit(BORN_QUAD_TOL));
    let solid_angle = rule.solid_angle();

    let kappa = p.kappa;
    let cos_t0 = p.theta0.cos();
    let d_over_w = p.d_over_w();
    let eighth = lit::<T>(0.125);
    let gauss_scale = d_over_w * d_over_w * eighth;

    let integral = integrate_cap(
        |dir| {
            let mismatch = dir[2] - cos_t0;
            phase(kappa * dir[2]) * (-gauss_scale * mismatch * mismatch).exp()
        },
        &rule,
    )?;

    let two_pi3 = lit::<T>(2.0) * T::PI().powi(3);
    let packet = (-(T::one() - cos_t0 * cos_t0) * gauss_scale).exp();
    let prefactor = p.g_tilde * p.g_tilde / two_pi3 * d_over_w * d_over_w * packet;

    Ok(RhoAB {
        a11: prefactor * solid_angle,
        a22: prefactor * solid_angle,
        a12: integral * phase(-kappa * cos_t0) * prefactor,
    })
}

/// Born concurrence at the given parameters.
pub fn concurrence_born<T: Real>(p: &ScatterParams<T>) -> Result<T> {
    if !(p.g_tilde > T::zero()) {
        // The post-selected state needs at least one scattering event.
        return Err(Error::ZeroYield);
    }
    concurrence_from_rho(&born_rho(p)?)
}

/// Normalized Born yield `P w^2 / (dOmega d^2)`:
/// `(g_tilde^2 / pi^3) e^{-sin^2(theta0) (d/w)^2 / 8}`, independent of the
/// detector angle.
pub fn yield_born<T: Real>(p: &ScatterParams<T>) -> Result<T> {
    p.validate()?;
    let d_over_w = p.d_over_w();
    let sin_t0 = p.theta0.sin();
    let packet = (-(sin_t0 * sin_t0) * d_over_w * d_over_w * lit::<T>(0.125)).exp();
    Ok(p.g_tilde * p.g_tilde / T::PI().powi(3) * packet)
}

/// Outcome of the two high-entanglement conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighConcurrence<T> {
    /// Wide packets: phase spread across the cap stays below one period,
    /// `2 kappa sin(theta_d) sin(dtheta) <= 2 pi`.
    pub large_w_ok: bool,
    /// `2 pi` minus the phase spread (negative when violated).
    pub large_w_margin: T,
    /// Narrow packets: the path-length mismatch stays below the packet
    /// width over the whole cap, `max |(k - k0).d| (d/w) < 1`.
    pub small_w_ok: bool,
    /// Worst mismatch over the cap, in packet-width units.
    pub small_w_max: T,
    /// Mismatch at the cap center, in packet-width units.
    pub small_w_center: T,
}

/// Evaluates both closed-form conditions for retaining high concurrence.
pub fn high_concurrence_predicates<T: Real>(p: &ScatterParams<T>) -> Result<HighConcurrence<T>> {
    p.validate()?;
    let two = lit::<T>(2.0);
    let two_pi = two * T::PI();
    let spread = two * p.kappa * p.theta_d.sin() * p.dtheta.sin();

    // k.d over the cap spans [cos(min(pi, theta_d + dtheta)), cos(max(0, theta_d - dtheta))].
    let cos_t0 = p.theta0.cos();
    let hi = (p.theta_d - p.dtheta).max(T::zero()).cos();
    let lo = (p.theta_d + p.dtheta).min(T::PI()).cos();
    let d_over_w = p.d_over_w();
    let max_mismatch = (hi - cos_t0).abs().max((lo - cos_t0).abs()) * d_over_w;
    let center_mismatch = (p.theta_d.cos() - cos_t0).abs() * d_over_w;

    Ok(HighConcurrence {
        large_w_ok: spread <= two_pi,
        large_w_margin: two_pi - spread,
        small_w_ok: max_mismatch < T::one(),
        small_w_max: max_mismatch,
        small_w_center: center_mismatch,
    })
}
