//! The detector-cap average of the plane-wave phase,
//! `C = (1/dOmega) Int_cap e^{i kappa k.d} d^2k`, evaluated as an exact
//! double series and as a small-aperture closed form.
//!
//! The series form is
//!
//! ```text
//! C dOmega = -(2 pi i / kappa) e^{i kappa cos(theta_d) cos(dtheta)}
//!     Sum_{n>=0} Sum_{l<=n} [ u^{n+1} v^l - ub^{n+1} vb^l ] / ((n+1)! l!)
//! u  =  2 i kappa cos^2(theta_d/2) sin^2(dtheta/2)
//! v  =  2 i kappa sin^2(theta_d/2) cos^2(dtheta/2)
//! ub = -2 i kappa sin^2(theta_d/2) sin^2(dtheta/2)
//! vb = -2 i kappa cos^2(theta_d/2) cos^2(dtheta/2)
//! ```
//!
//! Terms are generated by multiplicative updates (no explicit factorials) and
//! the summation stops once a geometric tail majorant drops below the
//! requested tolerance.

use crate::error::{Error, Result};
use crate::real::{imag, lit, phase, Cplx, Real};

/// Termination control for the double series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCtl<T> {
    /// Absolute tolerance on the cap average (the result is bounded by 1).
    pub tol: T,
    /// Bound on the outer summation index; the inner index never exceeds it.
    pub max_terms: usize,
}

impl<T: Real> Default for SeriesCtl<T> {
    fn default() -> Self {
        SeriesCtl {
            tol: lit(1e-12),
            max_terms: 400,
        }
    }
}

/// One family of the double sum: terms `p^{n+1}/(n+1)! * Sum_{l<=n} q^l/l!`.
struct Family<T: Real> {
    p_mag: T,
    q_mag: T,
    /// `p^{n+1}/(n+1)!` for the current shell.
    outer: Cplx<T>,
    /// Running `Sum_{l<=n} q^l / l!`.
    inner: Cplx<T>,
    /// `q^n / n!`, the latest inner term.
    inner_term: Cplx<T>,
    q: Cplx<T>,
    p: Cplx<T>,
    /// `ln |p^{n+1}/(n+1)!|`, tracked to bound the tail without overflow.
    ln_outer_mag: T,
    /// A zero `p` kills every shell of the family.
    active: bool,
}

impl<T: Real> Family<T> {
    fn new(p: Cplx<T>, q: Cplx<T>) -> Self {
        let p_mag = p.norm();
        Family {
            p_mag,
            q_mag: q.norm(),
            outer: p,
            inner: Cplx::new(T::one(), T::zero()),
            inner_term: Cplx::new(T::one(), T::zero()),
            q,
            p,
            ln_outer_mag: if p_mag > T::zero() {
                p_mag.ln()
            } else {
                T::neg_infinity()
            },
            active: p_mag > T::zero(),
        }
    }

    fn shell(&self) -> Cplx<T> {
        if self.active {
            self.outer * self.inner
        } else {
            Cplx::new(T::zero(), T::zero())
        }
    }

    /// Moves from shell `n` to shell `n+1`.
    fn advance(&mut self, n: usize) {
        if !self.active {
            return;
        }
        let np1 = T::from_usize(n + 1).unwrap();
        let np2 = T::from_usize(n + 2).unwrap();
        self.inner_term = self.inner_term * self.q / np1;
        self.inner = self.inner + self.inner_term;
        self.outer = self.outer * self.p / np2;
        self.ln_outer_mag = self.ln_outer_mag + self.p_mag.ln() - np2.ln();
    }

    /// `ln` of a majorant on everything beyond the current shell, or `None`
    /// while the geometric ratio is still above 1.
    fn ln_tail(&self, n: usize) -> Option<T> {
        if !self.active {
            return Some(T::neg_infinity());
        }
        let ratio = self.p_mag / T::from_usize(n + 3).unwrap();
        if ratio >= T::one() {
            return None;
        }
        // Sum_{m > n} |outer_m| * |inner_m| <= |outer_{n+1}| e^{|q|} / (1 - ratio)
        Some(self.ln_outer_mag + self.q_mag - (T::one() - ratio).ln())
    }
}

/// Exact series for the cap average of `e^{i kappa k.d}`.
pub fn cap_average_series<T: Real>(
    kappa: T,
    theta_d: T,
    dtheta: T,
    ctl: &SeriesCtl<T>,
) -> Result<Cplx<T>> {
    if !(kappa > T::zero()) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    if !(theta_d >= T::zero() && theta_d <= T::PI()) {
        return Err(Error::Domain(format!(
            "detector angle must lie in [0, pi], got {theta_d}"
        )));
    }
    if !(dtheta > T::zero() && dtheta <= T::PI()) {
        return Err(Error::Domain(format!(
            "cap half-angle must lie in (0, pi], got {dtheta}"
        )));
    }

    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let c2 = (theta_d * half).cos().powi(2);
    let s2 = (theta_d * half).sin().powi(2);
    let cap_s2 = (dtheta * half).sin().powi(2);
    let cap_c2 = (dtheta * half).cos().powi(2);

    let mut fam_a = Family::new(imag(two * kappa * c2 * cap_s2), imag(two * kappa * s2 * cap_c2));
    let mut fam_b = Family::new(
        imag(-two * kappa * s2 * cap_s2),
        imag(-two * kappa * c2 * cap_c2),
    );

    // C dOmega = prefactor * sum; |sum| is of order 2 kappa sin^2(dtheta/2)
    // when |C| ~ 1, which fixes the absolute tolerance scale.
    let sum_scale = two * kappa * cap_s2;
    let solid_angle = lit::<T>(4.0) * T::PI() * cap_s2;
    let prefactor =
        Cplx::new(T::zero(), -two * T::PI() / kappa) * phase(kappa * theta_d.cos() * dtheta.cos());

    let mut sum = Cplx::new(T::zero(), T::zero());
    let mut tail_estimate = T::infinity();
    for n in 0..ctl.max_terms {
        sum = sum + fam_a.shell() - fam_b.shell();
        fam_a.advance(n);
        fam_b.advance(n);

        let ln_budget = (ctl.tol * sum_scale.max(sum.norm()) * half).ln();
        if let (Some(ta), Some(tb)) = (fam_a.ln_tail(n), fam_b.ln_tail(n)) {
            if ta <= ln_budget && tb <= ln_budget {
                return Ok(prefactor * sum / solid_angle);
            }
            tail_estimate = (ta.exp() + tb.exp()).to_f64().map(lit).unwrap_or(T::infinity());
        }
    }

    let partial = prefactor * sum / solid_angle;
    Err(Error::SeriesNoConverge {
        max_n: ctl.max_terms,
        partial_re: partial.re.to_f64().unwrap_or(f64::NAN),
        partial_im: partial.im.to_f64().unwrap_or(f64::NAN),
        tail_bound: tail_estimate.to_f64().unwrap_or(f64::INFINITY),
    })
}

/// Small-aperture closed form, accurate to fourth order in the cap angle:
/// `e^{i kappa cos(theta_d)} [1 - (kappa^2/2) sin^2(theta_d) sin^2(dtheta/2)
/// - i kappa cos(theta_d) sin^2(dtheta/2)]`.
pub fn cap_average_small_aperture<T: Real>(kappa: T, theta_d: T, dtheta: T) -> Cplx<T> {
    let half = lit::<T>(0.5);
    let cap_s2 = (dtheta * half).sin().powi(2);
    let (sin_td, cos_td) = theta_d.sin_cos();
    let bracket = Cplx::new(
        T::one() - half * kappa * kappa * sin_td * sin_td * cap_s2,
        -kappa * cos_td * cap_s2,
    );
    phase(kappa * cos_td) * bracket
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capquad::{integrate_cap, CapRule};
    use std::f64::consts::PI;

    fn series(kappa: f64, theta_d: f64, dtheta: f64) -> Cplx<f64> {
        cap_average_series(kappa, theta_d, dtheta, &SeriesCtl::default()).unwrap()
    }

    fn quad(kappa: f64, theta_d: f64, dtheta: f64) -> Cplx<f64> {
        let rule = CapRule::new(theta_d, dtheta).unwrap().with_tol(1e-12);
        let integral = integrate_cap(|dir| crate::real::phase(kappa * dir[2]), &rule).unwrap();
        integral / rule.solid_angle()
    }

    #[test]
    fn axial_detector_matches_closed_form() {
        let (kappa, dtheta) = (10.0, PI / 15.0);
        let got = series(kappa, 0.0, dtheta);
        let s2 = (dtheta / 2.0).sin().powi(2);
        let expect = (crate::real::phase(kappa) - crate::real::phase(kappa * dtheta.cos()))
            / Cplx::new(0.0, 2.0 * kappa * s2);
        assert!((got - expect).norm() < 1e-10);
    }

    #[test]
    fn zero_momentum_limit_is_unity() {
        let got = series(1e-9, 1.0, PI / 10.0);
        assert!((got - Cplx::new(1.0, 0.0)).norm() < 1e-8);
        assert!(cap_average_series(0.0, 1.0, 0.3, &SeriesCtl::default()).is_err());
    }

    #[test]
    fn matches_quadrature_at_awkward_angles() {
        for &(kappa, theta_d, dtheta) in &[
            (10.0, PI / 2.0, PI / 15.0),
            (25.0, 5.0 * PI / 6.0, PI / 6.0),
            (5.0, PI, PI / 25.0),
            (1.0, PI / 6.0, PI / 6.0),
        ] {
            let s = series(kappa, theta_d, dtheta);
            let q = quad(kappa, theta_d, dtheta);
            assert!(
                (s - q).norm() < 1e-9,
                "kappa={kappa} theta_d={theta_d} dtheta={dtheta}: {s} vs {q}"
            );
        }
    }

    #[test]
    fn small_aperture_value_frozen() {
        // |C| = 1 - (1/2) kappa^2 sin^2(dtheta/2) at theta_d = pi/2.
        let got = cap_average_small_aperture(10.0, PI / 2.0, PI / 15.0);
        assert!((got.norm() - 0.45369001834514).abs() < 1e-10);
        // dtheta -> 0 leaves only the pointing phase.
        let point = cap_average_small_aperture(7.0, 0.9, 1e-8);
        assert!((point - crate::real::phase(7.0 * 0.9f64.cos())).norm() < 1e-12);
    }

    #[test]
    fn small_aperture_tracks_series_in_regime() {
        // kappa * dtheta^2 <= 0.3 keeps the truncation within 1e-3 relative.
        for &kappa in &[1.0f64, 5.0, 10.0, 30.0] {
            let dtheta = (0.3 / kappa).sqrt() * 0.99;
            for &theta_d in &[0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
                let s = series(kappa, theta_d, dtheta);
                let a = cap_average_small_aperture(kappa, theta_d, dtheta);
                let rel = (s - a).norm() / s.norm();
                assert!(rel < 1e-3, "kappa={kappa} theta_d={theta_d}: rel={rel}");
            }
        }
    }

    #[test]
    fn modulus_never_exceeds_one() {
        for &kappa in &[0.5, 3.0, 12.0, 25.0] {
            for i in 0..=8 {
                let theta_d = PI * i as f64 / 8.0;
                for &dtheta in &[PI / 25.0, PI / 6.0, PI / 2.0, PI] {
                    let c = series(kappa, theta_d, dtheta);
                    assert!(c.norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn mirror_detector_conjugates() {
        // C(pi - theta_d) = conj(C(theta_d)); at theta_d = pi/2 the average is real.
        for &(kappa, theta_d, dtheta) in &[(10.0, 0.7, PI / 15.0), (5.0, 2.0, PI / 6.0)] {
            let a = series(kappa, theta_d, dtheta);
            let b = series(kappa, PI - theta_d, dtheta);
            assert!((a - b.conj()).norm() < 1e-12);
        }
        let mid = series(10.0, PI / 2.0, PI / 15.0);
        assert!(mid.im.abs() < 1e-14);
    }

    #[test]
    fn term_budget_violation_reports_partial_sum() {
        let ctl = SeriesCtl { tol: 1e-12, max_terms: 4 };
        match cap_average_series(60.0, PI / 2.0, PI / 2.0, &ctl) {
            Err(Error::SeriesNoConverge { max_n, partial_re, .. }) => {
                assert_eq!(max_n, 4);
                assert!(partial_re.is_finite());
            }
            other => panic!("expected series failure, got {other:?}"),
        }
    }
}
