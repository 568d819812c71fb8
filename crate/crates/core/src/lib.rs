#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod abelian;
pub mod centroid;
pub mod error;
pub mod flowsim;
pub mod lsq;
pub mod melnikov;
pub mod model;
pub mod ode;
pub mod ovals;
pub mod picard_fuchs;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

pub type Spec = model::HamiltonianSpec<f64>;
pub type Spec32 = model::HamiltonianSpec<f32>;
pub type Coeffs = model::MelnikovCoeffs<f64>;
pub type Perturbation = model::PerturbationSpec<f64>;
pub type Triple = abelian::AbelianTriple<f64>;
pub type Slice = ovals::OvalSlice<f64>;
pub type Segment = ovals::Section<f64>;
pub type Pf = picard_fuchs::PfSystem<f64>;
pub type Series = picard_fuchs::FundamentalSeries<f64>;
pub type Curve = centroid::CentroidCurve<f64>;
pub type Flow = flowsim::FlowSpec<f64>;
pub type Census = flowsim::CycleCensus<f64>;
