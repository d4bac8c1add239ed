//! Spherical harmonics and spherical monogenics on the unit sphere in R^3.

pub mod clifford3;
pub mod error;
pub mod harmonics;
pub mod monogenics;
pub mod near_zonal;
pub mod orthopoly;
pub mod polyfield;
pub mod qlinalg;
pub mod scalar;
pub mod sphere_opt;
pub mod sphere_quad;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Vec3};

/// Double-precision aliases.
pub type Multivector = clifford3::Multivector3<f64>;
pub type Point = sphere_quad::SpherePoint<f64>;
pub type PointEnsemble = sphere_opt::Ensemble<f64>;
pub type Quadrature = sphere_quad::QuadratureRule<f64>;
pub type NearZonal = near_zonal::NearZonalBasis<f64>;
pub type ZonalHarmonic = harmonics::ZonalHarmonicBasis<f64>;
pub type Config = sphere_opt::OptimizerConfig<f64>;

/// Single-precision aliases.
pub type Multivector32 = clifford3::Multivector3<f32>;
pub type Point32 = sphere_quad::SpherePoint<f32>;
