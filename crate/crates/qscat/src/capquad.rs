//! Quadrature over the detector's spherical cap.
//!
//! The detector accepts directions within a half-angle `dtheta` of the
//! detector axis, which sits at polar angle `theta_d` from the target axis
//! `d`. In the frame where `d` is the z-axis, the integration uses a tensor
//! product rule: Gauss-Legendre in `cos(theta')` over `[cos(dtheta), 1]`
//! (polar angle measured from the detector axis) and a periodic trapezoid in
//! the azimuth. Node counts are doubled until two successive estimates agree
//! to the requested relative tolerance.

use crate::error::{Error, Result};
use crate::real::{lit, pairwise_sum, Cplx, Real};

/// Solid angle of a cap with half-angle `dtheta`: `4 pi sin^2(dtheta/2)`.
pub fn cap_solid_angle<T: Real>(dtheta: T) -> Result<T> {
    if !(dtheta > T::zero() && dtheta <= T::PI()) {
        return Err(Error::Domain(format!(
            "cap half-angle must lie in (0, pi], got {dtheta}"
        )));
    }
    let half = dtheta / lit::<T>(2.0);
    Ok(lit::<T>(4.0) * T::PI() * half.sin() * half.sin())
}

/// Quadrature rule over the detector cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapRule<T> {
    /// Polar angle of the detector axis measured from `d`, in `[0, pi]`.
    pub theta_d: T,
    /// Half-angle of the cap, in `(0, pi]`.
    pub dtheta: T,
    /// Initial Gauss-Legendre node count in `cos(theta')`.
    pub n_theta: usize,
    /// Initial azimuthal node count.
    pub n_phi: usize,
    /// Relative convergence tolerance between successive refinements.
    pub tol: T,
    /// Maximum number of node-count doublings.
    pub max_doublings: u32,
}

impl<T: Real> CapRule<T> {
    /// Rule with default node counts (4 x 4), tolerance `1e-9`, and 12
    /// doublings.
    pub fn new(theta_d: T, dtheta: T) -> Result<Self> {
        let rule = CapRule {
            theta_d,
            dtheta,
            n_theta: 4,
            n_phi: 4,
            tol: lit(1e-9),
            max_doublings: 12,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Same rule with a different tolerance.
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta_d >= T::zero() && self.theta_d <= T::PI()) {
            return Err(Error::Domain(format!(
                "detector angle must lie in [0, pi], got {}",
                self.theta_d
            )));
        }
        if !(self.dtheta > T::zero() && self.dtheta <= T::PI()) {
            return Err(Error::Domain(format!(
                "cap half-angle must lie in (0, pi], got {}",
                self.dtheta
            )));
        }
        if self.n_theta < 4 || self.n_phi < 4 {
            return Err(Error::Domain(
                "node counts must be at least 4".to_string(),
            ));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::Domain("tolerance must be positive".to_string()));
        }
        Ok(())
    }

    /// Solid angle covered by this rule's cap.
    pub fn solid_angle(&self) -> T {
        let half = self.dtheta / lit::<T>(2.0);
        lit::<T>(4.0) * T::PI() * half.sin() * half.sin()
    }
}

/// Integrates `f` over the cap, passing each node as a global-frame unit
/// vector `[x, y, z]` with `d` along z and the detector axis in the x-z
/// plane (`z = k.d`).
///
/// Node counts double until successive estimates differ by less than
/// `tol * max(|I|, I_abs)`, where `I_abs` integrates `|f|` and supplies the
/// natural magnitude scale when the integral itself nearly cancels.
pub fn integrate_cap<T, F>(f: F, rule: &CapRule<T>) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn([T; 3]) -> Cplx<T>,
{
    rule.validate()?;
    let mut n_theta = rule.n_theta;
    let mut n_phi = rule.n_phi;

    let (mut value, mut value_abs) = cap_pass(&f, rule, n_theta, n_phi);
    let mut last_change = f64::INFINITY;
    for _ in 0..rule.max_doublings {
        n_theta *= 2;
        n_phi *= 2;
        let (next, next_abs) = cap_pass(&f, rule, n_theta, n_phi);
        let scale = next.norm().max(next_abs);
        let delta = (next - value).norm();
        value = next;
        value_abs = next_abs;
        if delta <= rule.tol * scale {
            return Ok(value);
        }
        last_change = (delta / scale).to_f64().unwrap_or(f64::INFINITY);
    }
    let _ = value_abs;
    Err(Error::QuadratureNoConverge {
        refinements: rule.max_doublings,
        last_change,
    })
}

/// One fixed-size tensor-product pass; returns `(integral, integral of |f|)`.
fn cap_pass<T, F>(f: &F, rule: &CapRule<T>, n_theta: usize, n_phi: usize) -> (Cplx<T>, T)
where
    T: Real,
    F: Fn([T; 3]) -> Cplx<T>,
{
    let two = lit::<T>(2.0);
    let (cos_td, sin_td) = (rule.theta_d.cos(), rule.theta_d.sin());
    let lo = rule.dtheta.cos();
    let hi = T::one();
    let (nodes, weights) = gauss_legendre::<T>(n_theta, lo, hi);
    let w_phi = two * T::PI() / T::from_usize(n_phi).unwrap();

    let mut terms = Vec::with_capacity(n_theta * n_phi);
    let mut abs_acc = T::zero();
    for (&ct, &wt) in nodes.iter().zip(weights.iter()) {
        // ct = cos(theta') in the detector-local frame.
        let st = (T::one() - ct * ct).max(T::zero()).sqrt();
        for j in 0..n_phi {
            let phi = w_phi * T::from_usize(j).unwrap();
            let (sin_p, cos_p) = phi.sin_cos();
            // Rotation about y by theta_d carries local z to the detector axis.
            let dir = [
                cos_td * st * cos_p + sin_td * ct,
                st * sin_p,
                cos_td * ct - sin_td * st * cos_p,
            ];
            let val = f(dir) * (wt * w_phi);
            abs_acc += val.norm();
            terms.push(val);
        }
    }
    (pairwise_sum(&terms), abs_acc)
}

/// Gauss-Legendre nodes and weights on `[a, b]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let half = lit::<T>(0.5);
    let center = (a + b) * half;
    let halfwidth = (b - a) * half;
    let nf = T::from_usize(n).unwrap();

    for i in 0..(n + 1) / 2 {
        // Chebyshev-like initial guess.
        let theta = T::PI() * (T::from_usize(i).unwrap() + lit::<T>(0.75))
            / (nf + half);
        let mut x = theta.cos();
        let mut dp = T::zero();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = T::from_usize(k).unwrap();
                let p2 = ((two_k_minus_1::<T>(k) * x * p1) - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * (T::one() + x.abs()) {
                break;
            }
        }
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = center - halfwidth * x;
        weights[i] = halfwidth * w;
        nodes[n - 1 - i] = center + halfwidth * x;
        weights[n - 1 - i] = halfwidth * w;
    }
    (nodes, weights)
}

#[inline]
fn two_k_minus_1<T: Real>(k: usize) -> T {
    T::from_usize(2 * k - 1).unwrap()
}
