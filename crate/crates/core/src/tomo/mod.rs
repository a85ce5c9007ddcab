//! Tomographic pipeline: forward Radon model, projection spectra, Fourier
//! ring estimation, polar synthesis and inversion, spectral diagnostics.
//!
//! The unknown-angle reconstruction composes the stages as
//! `project_spectra -> reconstruct_rings -> evaluate_polar -> inverse_polar_ft`,
//! where `reconstruct_rings` takes whatever ordering is supplied (recovered by
//! nearest neighbor, loaded from a file, or ground truth).

pub mod config;
pub mod polar;
pub mod radon;
pub mod rings;
pub mod sinogram;
pub mod sobolev;
pub mod spectra;

pub use config::{assigned_angle, ring_k0, BandwidthPolicy, CutoffPolicy, ReconstructionConfig, RING_DECAY_RATE};
pub use polar::{evaluate_polar, inverse_polar_ft, PolarSpectrum};
pub use radon::radon;
pub use rings::{reconstruct_rings, reconstruct_rings_known_angles, resolve_nu0, RingCoeffs};
pub use sinogram::{add_projection_noise, Sinogram};
pub use sobolev::{sobolev_tail, SobolevStats};
pub use spectra::{fst_relative_errors, project_spectra, ProjectionSpectra, Spectrum2D};

use crate::error::Result;
use crate::image::Image2D;
use crate::num::Real;
use crate::ordering::Permutation;

/// Full unknown-angle reconstruction from a sinogram and a claimed ordering.
pub fn reconstruct_unknown_angles<R: Real>(
    s: &Sinogram<R>,
    cfg: &ReconstructionConfig<R>,
    order: &Permutation,
) -> Result<Image2D<R>> {
    let spectra = project_spectra(s, cfg.oversample)?;
    let rings = reconstruct_rings(&spectra, order, cfg)?;
    let ps = evaluate_polar(&rings, cfg.spokes)?;
    inverse_polar_ft(&ps, cfg.grid)
}

/// Reconstruction using the ground-truth angles carried on the sinogram
/// (diagnostic sanity path; errors if the angles are absent).
pub fn reconstruct_known_angles<R: Real>(
    s: &Sinogram<R>,
    cfg: &ReconstructionConfig<R>,
) -> Result<Image2D<R>> {
    let angles = s
        .angles_known()
        .ok_or(crate::error::Error::EmptyInput("sinogram carries no ground-truth angles"))?
        .to_vec();
    let spectra = project_spectra(s, cfg.oversample)?;
    let rings = reconstruct_rings_known_angles(&spectra, &angles, cfg)?;
    let ps = evaluate_polar(&rings, cfg.spokes)?;
    inverse_polar_ft(&ps, cfg.grid)
}
