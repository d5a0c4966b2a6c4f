//! Exact operator algebra on the three-qubit spin space of the mediator X
//! and the two target spins A and B.
//!
//! The 8-dimensional basis is `|s_X s_A s_B>` with up mapped to 0 and down
//! to 1, so a basis state has index `4 s_X + 2 s_A + s_B`.

mod decomp;
mod oracle;
mod projectors;

pub use decomp::{
    decompose_kernel, kernel_matrix, reconstructed_kernel, resummed_inverse, CouplingState,
    DecompCoeffs, Side,
};
pub use oracle::{solve_sources_full, solve_sources_oracle, AmplitudePair};
pub use projectors::{projector, verify_spin_sectors, ProjectorKind, Sign, SpinSectorReport};

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::Result;
use crate::linalg;
use crate::real::{lit, Cplx, Real};

/// Dimension of the three-qubit spin space.
pub const DIM: usize = 8;

/// Basis index of `|up down down>`: mediator up, both targets down.
pub const INCIDENT_SPIN: usize = 3;
/// Basis index of `|down up down>`: mediator flipped, target A flipped.
pub const OUT_A_FLIPPED: usize = 5;
/// Basis index of `|down down up>`: mediator flipped, target B flipped.
pub const OUT_B_FLIPPED: usize = 6;

/// One of the three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    X,
    A,
    B,
}

impl Qubit {
    #[inline]
    fn shift(self) -> usize {
        match self {
            Qubit::X => 2,
            Qubit::A => 1,
            Qubit::B => 0,
        }
    }
}

/// Which pair of qubits a Pauli dot product couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliPair {
    XA,
    XB,
    AB,
}

impl PauliPair {
    fn qubits(self) -> (Qubit, Qubit) {
        match self {
            PauliPair::XA => (Qubit::X, Qubit::A),
            PauliPair::XB => (Qubit::X, Qubit::B),
            PauliPair::AB => (Qubit::A, Qubit::B),
        }
    }
}

/// Dense complex operator on the three-qubit spin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOp<T> {
    m: [[Cplx<T>; DIM]; DIM],
}

impl<T: Real> SpinOp<T> {
    pub fn zero() -> Self {
        SpinOp {
            m: [[Cplx::new(T::zero(), T::zero()); DIM]; DIM],
        }
    }

    pub fn identity() -> Self {
        let mut op = Self::zero();
        for i in 0..DIM {
            op.m[i][i] = Cplx::new(T::one(), T::zero());
        }
        op
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Cplx<T>) -> Self {
        let mut op = Self::zero();
        for (i, row) in op.m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        }
        op
    }

    pub fn entries(&self) -> &[[Cplx<T>; DIM]; DIM] {
        &self.m
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..DIM).fold(Cplx::new(T::zero(), T::zero()), |acc, i| acc + self.m[i][i])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i].conj())
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> T {
        let mut best = T::zero();
        for row in &self.m {
            for e in row {
                best = best.max(e.norm());
            }
        }
        best
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut best = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                best = best.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        best
    }

    /// Deviation from Hermiticity, `max |M - M^dagger|`.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// Deviation from idempotence, `max |M^2 - M|`.
    pub fn idempotence_defect(&self) -> T {
        (*self * *self).max_abs_diff(self)
    }

    pub fn apply(&self, v: &[Cplx<T>; DIM]) -> [Cplx<T>; DIM] {
        let mut out = [Cplx::new(T::zero(), T::zero()); DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                out[i] += self.m[i][j] * v[j];
            }
        }
        out
    }

    /// Generic dense inverse (LU based); the independent check on the
    /// projector-expansion inverse.
    pub fn inverse(&self) -> Result<Self> {
        let inv = linalg::invert(&self.m, lit(1e-13))?;
        Ok(SpinOp { m: inv })
    }

    /// Numerical rank at a relative tolerance of `1e-10`.
    pub fn rank(&self) -> usize {
        linalg::rank(&self.m, lit(1e-10))
    }

    /// Scales by a complex factor.
    pub fn scale(&self, z: Cplx<T>) -> Self {
        Self::from_fn(|i, j| self.m[i][j] * z)
    }
}

impl<T: Real> Index<(usize, usize)> for SpinOp<T> {
    type Output = Cplx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.m[i][j]
    }
}

impl<T: Real> Add for SpinOp<T> {
    type Output = SpinOp<T>;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] + rhs.m[i][j])
    }
}

impl<T: Real> Sub for SpinOp<T> {
    type Output = SpinOp<T>;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] - rhs.m[i][j])
    }
}

impl<T: Real> Neg for SpinOp<T> {
    type Output = SpinOp<T>;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.m[i][j])
    }
}

impl<T: Real> Mul for SpinOp<T> {
    type Output = SpinOp<T>;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..DIM {
            for k in 0..DIM {
                let a = self.m[i][k];
                if a.norm() == T::zero() {
                    continue;
                }
                for j in 0..DIM {
                    out.m[i][j] += a * rhs.m[k][j];
                }
            }
        }
        out
    }
}

impl<T: Real> Mul<Cplx<T>> for SpinOp<T> {
    type Output = SpinOp<T>;
    fn mul(self, z: Cplx<T>) -> SpinOp<T> {
        self.scale(z)
    }
}

/// 2x2 Pauli matrix along axis 0, 1, 2 (x, y, z) in the (up, down) basis.
fn sigma<T: Real>(axis: usize) -> [[Cplx<T>; 2]; 2] {
    let zero = Cplx::new(T::zero(), T::zero());
    let one = Cplx::new(T::one(), T::zero());
    let i = Cplx::new(T::zero(), T::one());
    match axis {
        0 => [[zero, one], [one, zero]],
        1 => [[zero, -i], [i, zero]],
        2 => [[one, zero], [zero, -one]],
        _ => unreachable!("Pauli axis out of range"),
    }
}

/// Embeds a single-qubit operator into the three-qubit space.
fn embed<T: Real>(q: Qubit, m2: [[Cplx<T>; 2]; 2]) -> SpinOp<T> {
    let shift = q.shift();
    let mask = 1usize << shift;
    SpinOp::from_fn(|i, j| {
        if (i & !mask) == (j & !mask) {
            m2[(i >> shift) & 1][(j >> shift) & 1]
        } else {
            Cplx::new(T::zero(), T::zero())
        }
    })
}

/// Pauli dot product `sigma^(i) . sigma^(j)` for the requested pair.
pub fn pauli_dot<T: Real>(pair: PauliPair) -> SpinOp<T> {
    let (q1, q2) = pair.qubits();
    let mut out = SpinOp::zero();
    for axis in 0..3 {
        out = out + embed(q1, sigma(axis)) * embed(q2, sigma(axis));
    }
    out
}

/// Scalar spin chirality `sigma^(X) . (sigma^(B) x sigma^(A))`, built from
/// the Levi-Civita contraction.
pub fn scalar_chirality<T: Real>() -> SpinOp<T> {
    let mut out = SpinOp::zero();
    const EPS: [(usize, usize, usize, f64); 6] = [
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (2, 1, 0, -1.0),
        (1, 0, 2, -1.0),
    ];
    for &(i, j, k, sign) in &EPS {
        let term = embed(Qubit::X, sigma(i)) * embed(Qubit::B, sigma(j)) * embed(Qubit::A, sigma(k));
        out = out + term.scale(Cplx::new(lit(sign), T::zero()));
    }
    out
}

/// `sigma^(X) . (sigma^(A) + sigma^(B))`, the mediator-target exchange sum.
pub fn exchange_sum<T: Real>() -> SpinOp<T> {
    pauli_dot(PauliPair::XA) + pauli_dot(PauliPair::XB)
}

/// Total spin squared `S^2 = (1/4)(sigma^(X)+sigma^(A)+sigma^(B))^2` with
/// `hbar = 1`.
pub fn total_spin_squared<T: Real>() -> SpinOp<T> {
    let quarter = Cplx::new(lit::<T>(0.25), T::zero());
    let nine = Cplx::new(lit::<T>(9.0), T::zero());
    let two = Cplx::new(lit::<T>(2.0), T::zero());
    (SpinOp::identity() * nine + (exchange_sum() + pauli_dot(PauliPair::AB)) * two) * quarter
}
