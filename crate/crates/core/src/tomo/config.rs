//! Reconstruction configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{real, real_of, Real};

/// Angular decay rate of the Fourier rings of a bounded, compactly supported
/// image: ring coefficients obey `|a_k| <= d exp(-0.765 k)` beyond
/// `k1(nu) = 2 pi nu r0 / 0.765`.
pub const RING_DECAY_RATE: f64 = 0.765;

/// Cutoff radius policy: data-driven (fraction of mean projection spectral
/// energy enclosed) or explicit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutoffPolicy<R> {
    Value(R),
    Auto {
        energy_fraction: R,
    },
}

/// Ring bandwidth policy: `ceil(ln N / 0.765)` or explicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BandwidthPolicy {
    Explicit(usize),
    Auto {
        #[serde(rename = "auto")]
        auto: bool,
    },
}

/// Knobs for the unknown-angle reconstruction pipeline.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ReconstructionConfig<R: Real> {
    /// Cutoff radius for the reconstructed Fourier disc.
    pub nu0: CutoffPolicy<R>,
    /// Global ring bandwidth.
    pub k0: BandwidthPolicy,
    /// Number of uniformly spaced polar spokes (must cover 2 k0 + 1).
    pub spokes: usize,
    /// DFT oversampling factor for the projection spectra.
    pub oversample: usize,
    /// Output image side length in pixels.
    pub grid: usize,
}

impl<R: Real> ReconstructionConfig<R> {
    pub fn validate(&self) -> Result<()> {
        if self.spokes < 2 {
            return Err(Error::InvalidParameter("spokes must be >= 2".into()));
        }
        if self.oversample < 1 {
            return Err(Error::InvalidParameter("oversample must be >= 1".into()));
        }
        if self.grid < 2 {
            return Err(Error::InvalidParameter("grid must be >= 2".into()));
        }
        if let CutoffPolicy::Value(v) = self.nu0 {
            if v <= R::zero() {
                return Err(Error::InvalidParameter("nu0 must be positive".into()));
            }
        }
        Ok(())
    }

    /// Global bandwidth for `n` projections, clamped below the estimator's
    /// aliasing limit.
    pub fn global_k0(&self, n: usize) -> Result<usize> {
        match self.k0 {
            BandwidthPolicy::Explicit(k) => Ok(k.min((n.max(1) - 1) / 2)),
            BandwidthPolicy::Auto { .. } => {
                crate::qbl::choose_k0(n, real::<R>(RING_DECAY_RATE))
            }
        }
    }
}

impl<R: Real> Default for ReconstructionConfig<R> {
    fn default() -> Self {
        ReconstructionConfig {
            nu0: CutoffPolicy::Auto {
                energy_fraction: real::<R>(0.999),
            },
            k0: BandwidthPolicy::Auto { auto: true },
            spokes: 96,
            oversample: 2,
            grid: 128,
        }
    }
}

/// Per-ring bandwidth: the global `k0` capped at the ring's own quasi-band
/// limit `ceil(2 pi nu r0 / 0.765) + 2`. Low-radius rings carry few
/// meaningful harmonics, so the cap cuts estimator variance.
pub fn ring_k0<R: Real>(global_k0: usize, nu: R, support_radius: R) -> usize {
    let k1 = (real::<R>(2.0) * R::PI() * nu * support_radius / real::<R>(RING_DECAY_RATE)).ceil();
    let k1 = k1.to_usize().unwrap_or(usize::MAX);
    global_k0.min(k1.saturating_add(2))
}

/// Angle assigned to claimed position `i` (0-based): `2 pi i / n`, anchor at 0.
pub fn assigned_angle<R: Real>(i: usize, n: usize) -> R {
    real::<R>(2.0) * R::PI() * real_of::<R>(i) / real_of::<R>(n)
}
