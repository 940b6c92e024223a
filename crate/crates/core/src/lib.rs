//! Minimal Lagrangian surfaces in CP² built from spectral data.
//!
//! The crate covers the whole pipeline: Riemann theta functions evaluated by
//! lattice summation, two-point Baker–Akhiezer functions (in closed form on a
//! reducible rational curve and through the generic theta-function formula),
//! the surface families they produce, and a verification engine that checks
//! the differential-geometric identities of the construction on evaluation
//! grids.
//!
//! All numerical code is generic over a floating-point scalar implementing
//! [`Real`]; the residue calculus in [`rational_form`] works over any field,
//! which lets tests run it in exact rational arithmetic. Concrete `f64`
//! aliases live at the crate root.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baker_akhiezer;
pub mod diffgeo;
pub mod error;
pub mod expsum;
pub mod linalg;
pub mod parse;
pub mod rational_form;
pub mod report;
pub mod spectral_curve;
pub mod surface;
pub mod theta;

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

pub use error::{Error, Result};

/// Floating-point scalar used throughout the numerical modules (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Arithmetic needed by the residue calculus: any commutative field with
/// equality. Covered by `f64`, `Complex<f64>` and `num_rational::Ratio<_>`.
pub trait Field: Num + Clone + PartialEq + Debug + std::ops::Neg<Output = Self> {}

impl<F> Field for F where F: Num + Clone + PartialEq + Debug + std::ops::Neg<Output = F> {}

pub type Complex<T> = num_complex::Complex<T>;
pub type C64 = num_complex::Complex<f64>;

pub type PeriodMatrix = theta::PeriodMatrix<f64>;
pub type LatticeTruncation = theta::LatticeTruncation<f64>;
pub type RationalOneForm = rational_form::RationalOneForm<C64>;
pub type ReducibleCurve = spectral_curve::ReducibleCurve<f64>;
pub type BaRationalValue = baker_akhiezer::BaRationalValue<f64>;
pub type ThetaBaInputs = baker_akhiezer::ThetaBaInputs<f64>;
pub type SurfaceJet = surface::SurfaceJet<f64>;
pub type MetricData = diffgeo::MetricData<f64>;
pub type FrameData = diffgeo::FrameData<f64>;
pub type ChristoffelData = diffgeo::ChristoffelData<f64>;
