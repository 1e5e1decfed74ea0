//! Accumulation times for diffusion in a unit disc with small absorbing holes.
//!
//! Analytic parts (special functions, Green's functions, asymptotics,
//! spectral estimates, the 1D model) are generic over [`Real`] and work in
//! `f32` or `f64`; the aliases below fix `f64`, with `F32*` variants for single
//! precision. The finite-difference oracle, field sweeps and file formats are
//! `f64` only.

pub mod asymptotics;
pub mod error;
pub mod field_io;
pub mod geometry;
pub mod greens;
pub mod linalg;
pub mod morphogen;
pub mod oracle;
pub mod quadrature;
pub mod real;
pub mod scene;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use real::Real;

pub type Point = geometry::Point2<f64>;
pub type Scene = scene::Scene<f64>;
pub type RawScene = scene::RawScene<f64>;
pub type RawHole = scene::RawHole<f64>;
pub type GreensEval = greens::GreensEval<f64>;
pub type HelmholtzParams = greens::HelmholtzParams<f64>;
pub type HelmholtzKernel = greens::HelmholtzKernel<f64>;
pub type SteadyCoeffs = asymptotics::SteadyCoeffs<f64>;
pub type LaplaceCoeffs = asymptotics::LaplaceCoeffs<f64>;
pub type SpectralEstimate = spectral::SpectralEstimate<f64>;
pub type Morphogen1DParams = morphogen::Morphogen1DParams<f64>;

pub type F32Point = geometry::Point2<f32>;
pub type F32Scene = scene::Scene<f32>;
pub type F32RawScene = scene::RawScene<f32>;
pub type F32HelmholtzParams = greens::HelmholtzParams<f32>;
pub type F32Morphogen1DParams = morphogen::Morphogen1DParams<f32>;
