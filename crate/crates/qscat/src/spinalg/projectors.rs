//! The one-parameter projector family that closes the multiple-scattering
//! geometric series, and the spin-sector semantics behind it.
//!
//! With `CP = sigma_X.(sigma_B x sigma_A)`, `SP = sigma_X.(sigma_A+sigma_B)`
//! and `AB = sigma_A.sigma_B`:
//!
//! ```text
//! P_s(g) =  (s/2) sqrt((1/4+3g)(1/4-g)) CP + (1/2)(1/4-g) SP + g AB + 3/4
//! Q_s(g) = -(s/2) sqrt((1/4+3g)(1/4-g)) CP - (1/2)(1/4-g) SP - g AB + 1/4
//! R_+/-  = +/- (1/6)(SP + AB) + 1/2
//! ```
//!
//! `P` and `Q` are complementary idempotents for every complex `g`; `R_+`
//! extracts the total-spin-3/2 sector and satisfies `P R_+ = R_+` and
//! `Q R_- = Q`.

use super::{
    exchange_sum, pauli_dot, scalar_chirality, total_spin_squared, PauliPair, SpinOp, DIM,
};
use crate::error::{Error, Result};
use crate::real::{lit, Cplx, Real};

/// The sign label `s` with `s^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn signum<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Member of the projector family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorKind {
    P,
    Q,
    RPlus,
    RMinus,
}

/// Builds the requested projector. `s` and `gamma` only affect `P` and `Q`;
/// all complex square roots take the principal branch.
pub fn projector<T: Real>(kind: ProjectorKind, s: Sign, gamma: Cplx<T>) -> SpinOp<T> {
    let half = lit::<T>(0.5);
    let quarter = Cplx::new(lit::<T>(0.25), T::zero());
    match kind {
        ProjectorKind::P | ProjectorKind::Q => {
            let root = ((quarter + gamma * lit::<T>(3.0)) * (quarter - gamma)).sqrt();
            let cp_coeff = root * (s.signum::<T>() * half);
            let sp_coeff = (quarter - gamma) * half;
            let p = scalar_chirality() * cp_coeff
                + exchange_sum() * sp_coeff
                + pauli_dot(PauliPair::AB) * gamma
                + SpinOp::identity() * Cplx::new(lit::<T>(0.75), T::zero());
            match kind {
                ProjectorKind::P => p,
                _ => SpinOp::identity() - p,
            }
        }
        ProjectorKind::RPlus | ProjectorKind::RMinus => {
            let sign = match kind {
                ProjectorKind::RPlus => T::one(),
                _ => -T::one(),
            };
            let sixth = Cplx::new(sign / lit::<T>(6.0), T::zero());
            (exchange_sum() + pauli_dot(PauliPair::AB)) * sixth
                + SpinOp::identity() * Cplx::new(half, T::zero())
        }
    }
}

/// Diagnostics from [`verify_spin_sectors`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSectorReport<T> {
    /// Numerical rank of `R_+` (must be 4: the spin-3/2 sector).
    pub rank_r_plus: usize,
    /// `max |S^2 R_+ - (15/4) R_+|`.
    pub casimir_defect: T,
    /// `max |[S^2, R_+]|`.
    pub commutator_defect: T,
    /// `max |P_s(g) psi_+ - psi_+|`.
    pub fixed_state_defect_plus: T,
    /// `max |P_s(g) psi_- - psi_-|`.
    pub fixed_state_defect_minus: T,
}

impl<T: Real> SpinSectorReport<T> {
    pub fn passes(&self, tol: T) -> bool {
        self.rank_r_plus == 4
            && self.casimir_defect <= tol
            && self.commutator_defect <= tol
            && self.fixed_state_defect_plus <= tol
            && self.fixed_state_defect_minus <= tol
    }
}

/// Verifies the spin-sector semantics of the projector family at a real
/// `gamma`:
///
/// * `R_+` projects exactly the total-spin-3/2 subspace (rank 4, commutes
///   with `S^2`, Casimir eigenvalue 15/4 on its range);
/// * the spin-1/2 states `psi_+/-` built from the AB-triplet states and the
///   AB-singlet with weight `p = 3/4 - 3 gamma` are fixed by `P_s(gamma)`.
///
/// `gamma` must keep `p` inside `[0, 1]`, i.e. lie in `[-1/12, 1/4]`.
pub fn verify_spin_sectors<T: Real>(gamma: T, s: Sign) -> Result<SpinSectorReport<T>> {
    let p_weight = lit::<T>(0.75) - lit::<T>(3.0) * gamma;
    if !(p_weight >= T::zero() && p_weight <= T::one()) {
        return Err(Error::Domain(format!(
            "singlet weight p = 3/4 - 3 gamma must lie in [0, 1], got {p_weight}"
        )));
    }

    let r_plus: SpinOp<T> = projector(ProjectorKind::RPlus, s, Cplx::new(T::zero(), T::zero()));
    let s2 = total_spin_squared::<T>();
    let casimir = lit::<T>(15.0) / lit::<T>(4.0);
    let casimir_defect =
        (s2 * r_plus).max_abs_diff(&r_plus.scale(Cplx::new(casimir, T::zero())));
    let commutator_defect = (s2 * r_plus).max_abs_diff(&(r_plus * s2));

    let zero = Cplx::new(T::zero(), T::zero());
    let sqrt = |x: T| Cplx::new(x.sqrt(), T::zero());
    let third = T::one() / lit::<T>(3.0);

    // Basis indices |s_X s_A s_B> with up = 0: 4 s_X + 2 s_A + s_B.
    let mut phi_plus = [zero; DIM];
    // sqrt(1/3)|up>|1,0> - sqrt(2/3)|down>|up up>
    let inv_sqrt2 = sqrt(lit::<T>(0.5));
    phi_plus[0b001] = sqrt(third) * inv_sqrt2;
    phi_plus[0b010] = sqrt(third) * inv_sqrt2;
    phi_plus[0b100] = -sqrt(lit::<T>(2.0) * third);

    let mut phi_minus = [zero; DIM];
    // sqrt(2/3)|up>|down down> - sqrt(1/3)|down>|1,0>
    phi_minus[0b011] = sqrt(lit::<T>(2.0) * third);
    phi_minus[0b101] = -sqrt(third) * inv_sqrt2;
    phi_minus[0b110] = -sqrt(third) * inv_sqrt2;

    // AB singlet (|up down> - |down up>)/sqrt(2), tensored with X up or down.
    let singlet_weight = Cplx::new(T::zero(), -s.signum::<T>() * p_weight.sqrt());
    let triplet_weight = sqrt(T::one() - p_weight);
    let mut psi_plus = [zero; DIM];
    let mut psi_minus = [zero; DIM];
    for i in 0..DIM {
        psi_plus[i] = phi_plus[i] * triplet_weight;
        psi_minus[i] = phi_minus[i] * triplet_weight;
    }
    psi_plus[0b001] += singlet_weight * inv_sqrt2;
    psi_plus[0b010] -= singlet_weight * inv_sqrt2;
    psi_minus[0b101] += singlet_weight * inv_sqrt2;
    psi_minus[0b110] -= singlet_weight * inv_sqrt2;

    let p_op = projector(ProjectorKind::P, s, Cplx::new(gamma, T::zero()));
    let defect = |state: &[Cplx<T>; DIM]| {
        let image = p_op.apply(state);
        let mut worst = T::zero();
        for i in 0..DIM {
            worst = worst.max((image[i] - state[i]).norm());
        }
        worst
    };

    Ok(SpinSectorReport {
        rank_r_plus: r_plus.rank(),
        casimir_defect,
        commutator_defect,
        fixed_state_defect_plus: defect(&psi_plus),
        fixed_state_defect_minus: defect(&psi_minus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = SpinOp<f64>;

    fn rand_gamma(k: u32) -> Cplx<f64> {
        // Cheap deterministic scatter of complex gammas, away from any
        // special values.
        let a = (k as f64 * 0.7391 + 0.113).sin() * 0.8;
        let b = (k as f64 * 1.3117 + 0.523).cos() * 0.8;
        Cplx::new(a, b)
    }

    #[test]
    fn complementary_idempotents_for_random_gamma() {
        for k in 0..20 {
            let g = rand_gamma(k);
            for s in [Sign::Plus, Sign::Minus] {
                let p: Op = projector(ProjectorKind::P, s, g);
                let q: Op = projector(ProjectorKind::Q, s, g);
                assert!((p + q).max_abs_diff(&Op::identity()) < 1e-12);
                assert!((p * q).norm_max() < 1e-12);
                assert!((q * p).norm_max() < 1e-12);
                assert!(p.idempotence_defect() < 1e-12, "gamma = {g}");
            }
        }
    }

    #[test]
    fn r_family_projects() {
        let rp: Op = projector(ProjectorKind::RPlus, Sign::Plus, Cplx::new(0.0, 0.0));
        let rm: Op = projector(ProjectorKind::RMinus, Sign::Plus, Cplx::new(0.0, 0.0));
        assert!((rp + rm).max_abs_diff(&Op::identity()) < 1e-13);
        assert!(rp.idempotence_defect() < 1e-12);
        assert!((rp * rm).norm_max() < 1e-12);
    }

    #[test]
    fn mixed_products_with_r() {
        for k in 0..10 {
            let g = rand_gamma(k + 100);
            for s in [Sign::Plus, Sign::Minus] {
                let p: Op = projector(ProjectorKind::P, s, g);
                let q: Op = projector(ProjectorKind::Q, s, g);
                let rp: Op = projector(ProjectorKind::RPlus, s, g);
                let rm: Op = projector(ProjectorKind::RMinus, s, g);
                // P R+ = R+ P = R+, so R+ is inside the P sector.
                assert!((p * rp).max_abs_diff(&rp) < 1e-12);
                assert!((rp * p).max_abs_diff(&rp) < 1e-12);
                // Q R- = R- Q = Q.
                assert!((q * rm).max_abs_diff(&q) < 1e-12);
                assert!((rm * q).max_abs_diff(&q) < 1e-12);
                assert!((q * rp).norm_max() < 1e-12);
            }
        }
    }

    #[test]
    fn spin_sector_report_passes() {
        for &gamma in &[0.0, 0.125, 0.25, -1.0 / 12.0] {
            for s in [Sign::Plus, Sign::Minus] {
                let report = verify_spin_sectors(gamma, s).unwrap();
                assert!(report.passes(1e-12), "gamma={gamma} report={report:?}");
            }
        }
    }

    #[test]
    fn out_of_range_gamma_is_rejected() {
        assert!(matches!(
            verify_spin_sectors(0.3, Sign::Plus),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_spin_sectors(-0.2, Sign::Plus),
            Err(Error::Domain(_))
        ));
    }
}
