//! Reconstruction of 2D images from 1D Radon projections taken at unknown
//! angles with a known angle distribution.
//!
//! The library follows the order-statistics route: recover a circular
//! ordering of the projections, assign the i-th ordered projection the grid
//! angle `2 pi i / N`, estimate the Fourier coefficients of every frequency
//! ring of the image spectrum from those assigned angles, and invert the
//! resulting polar spectrum. The same estimator solves the underlying 1D
//! problem of reconstructing a quasi-bandlimited periodic signal from sorted
//! samples at unknown uniform locations, with tolerance for misordering and
//! additive noise.
//!
//! Numeric kernels are generic over the scalar type through [`num::Real`];
//! the `*64` aliases below pin the `f64` instantiations used by the shipped
//! binaries and file formats.

pub mod error;
pub mod fourier;
pub mod image;
pub mod io;
pub mod num;
pub mod ordering;
pub mod qbl;
pub mod rng;
pub mod sampling;
pub mod tomo;

pub use error::{Error, Result};
pub use rng::RngSeed;

/// `f64` instantiations of the core types.
pub type FourierSeries64 = fourier::FourierSeries<f64>;
pub type PeriodicSignal64 = fourier::PeriodicSignal<f64>;
pub type Image64 = image::Image2D<f64>;
pub type Sinogram64 = tomo::Sinogram<f64>;
pub type ProjectionSpectra64 = tomo::ProjectionSpectra<f64>;
pub type RingCoeffs64 = tomo::RingCoeffs<f64>;
pub type PolarSpectrum64 = tomo::PolarSpectrum<f64>;
pub type ReconstructionConfig64 = tomo::ReconstructionConfig<f64>;
pub type QblParams64 = qbl::QblParams<f64>;
pub type NoiseSpec64 = qbl::NoiseSpec<f64>;
pub type OrderedSampleSet64 = qbl::OrderedSampleSet<f64>;
pub type SobolevStats64 = tomo::SobolevStats<f64>;
