//! A computational toolkit for the `x a, x b` action on the circle
//! `T = R/Z`, generated by `T_a(x) = a x` and `T_b(x) = b x mod 1`.
//!
//! * [`torus`]: exact rational points, digit words and cylinders.
//! * [`orbit`]: the sweep over `T_a^m T_b^n x` used by every average.
//! * [`empirical`]: empirical measures, Fourier averages, weak* distance,
//!   invariance defects and semiequidistribution profiles.
//! * [`moran`]: homogeneous Moran structures, their dimension bounds and
//!   box-counting cross-checks.
//! * [`irregular`]: synthesis and verification of points whose empirical
//!   measures oscillate.
//! * [`entropy`]: k-distributions, type-class counting and the Hausdorff
//!   dimension bound formulas.
//! * [`numtheory`]: primality and perfect-power helpers.
//!
//! Real-valued layers are generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common `f64` choice.

pub mod empirical;
pub mod entropy;
pub mod error;
pub mod irregular;
pub mod moran;
pub mod numtheory;
pub mod orbit;
pub mod scalar;
pub mod torus;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use torus::{orbit_grid, CylinderInterval, DigitWord, TorusPoint};

pub type EmpiricalMeasure64 = empirical::EmpiricalMeasure<f64>;
pub type FourierCoefficients64 = empirical::FourierCoefficients<f64>;
pub type SemiEquidistReport64 = empirical::SemiEquidistReport<f64>;
pub type DimensionPair64 = moran::DimensionPair<f64>;
pub type KDistribution64 = entropy::KDistribution<f64>;
pub type ChoiceRecord64 = entropy::ChoiceRecord<f64>;
pub type TestFamily64 = irregular::TestFamily<f64>;
pub type IrregularReport64 = irregular::IrregularReport<f64>;
