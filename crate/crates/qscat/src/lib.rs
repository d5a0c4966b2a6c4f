//! Entanglement generation by qubit scattering in three dimensions.
//!
//! A spin-1/2 mediator prepared spin-up scatters off two fixed target spins
//! (both down) through spin-exchange contact potentials at `+/- d/2`. When
//! the mediator is detected spin-flipped inside a finite solid-angle cap,
//! the targets are left in an entangled state. This crate computes the
//! two-qubit concurrence of that state and the detection yield:
//!
//! * to lowest order in the coupling ([`born`]), and
//! * in the fully resummed multiple-scattering theory with renormalized
//!   contact couplings ([`fullorder`]),
//!
//! validated against independent brute-force oracles: dense linear algebra
//! for the operator resummation ([`spinalg`]), tensor-product quadrature
//! over the detector cap ([`capquad`]), and an exact double series for the
//! cap phase average ([`series`]).
//!
//! Everything is generic over the scalar type through [`Real`]; concrete
//! `f64` aliases live at the crate root.

pub mod born;
pub mod capquad;
pub mod error;
pub mod fullorder;
mod linalg;
pub mod params;
mod real;
pub mod series;
pub mod spinalg;

pub use error::{Error, Result};
pub use real::{Cplx, Real};

pub use born::{HighConcurrence, RhoAB};
pub use capquad::CapRule;
pub use fullorder::{CapAverage, FullCoeffs, StrongCoupling};
pub use params::ScatterParams;
pub use series::SeriesCtl;
pub use spinalg::{AmplitudePair, CouplingState, DecompCoeffs, Sign, SpinOp};

/// `f64` spin operator.
pub type SpinOp64 = SpinOp<f64>;
/// `f64` scattering parameters.
pub type ScatterParams64 = ScatterParams<f64>;
/// `f64` cap-quadrature rule.
pub type CapRule64 = CapRule<f64>;
/// `f64` series control.
pub type SeriesCtl64 = SeriesCtl<f64>;
/// `f64` coupling state.
pub type CouplingState64 = CouplingState<f64>;
/// `f64` kernel-decomposition coefficients.
pub type DecompCoeffs64 = DecompCoeffs<f64>;
/// `f64` density-matrix block.
pub type RhoAB64 = RhoAB<f64>;
/// `f64` amplitude pair.
pub type AmplitudePair64 = AmplitudePair<f64>;
/// `f64` full-order coefficients.
pub type FullCoeffs64 = FullCoeffs<f64>;
/// `f64` complex number.
pub type Cplx64 = Cplx<f64>;
