//! Projection data: N projections by B offset bins.

use crate::error::{Error, Result};
use crate::num::{real, real_of, Real};
use crate::rng::RngSeed;

/// Radon projections, one row per angle, bins uniform over `[-r0, r0]`.
///
/// `angles_known` carries the ground-truth angles when available; it is a
/// diagnostic aid only and is not part of the on-disk format.
#[derive(Clone, Debug)]
pub struct Sinogram<R: Real> {
    num_projections: usize,
    num_bins: usize,
    bin_spacing: R,
    data: Vec<R>,
    angles_known: Option<Vec<R>>,
}

impl<R: Real> Sinogram<R> {
    pub fn new(
        data: Vec<R>,
        num_projections: usize,
        num_bins: usize,
        bin_spacing: R,
        angles_known: Option<Vec<R>>,
    ) -> Result<Self> {
        if num_bins < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 bins, got {num_bins}")));
        }
        if data.len() != num_projections * num_bins {
            return Err(Error::DimensionMismatch(format!(
                "sinogram buffer {} vs {}x{}",
                data.len(),
                num_projections,
                num_bins
            )));
        }
        if bin_spacing <= R::zero() {
            return Err(Error::InvalidParameter("bin_spacing must be positive".into()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sinogram values"));
        }
        if let Some(angles) = &angles_known {
            if angles.len() != num_projections {
                return Err(Error::DimensionMismatch("angles vs projections".into()));
            }
        }
        Ok(Sinogram {
            num_projections,
            num_bins,
            bin_spacing,
            data,
            angles_known,
        })
    }

    pub fn num_projections(&self) -> usize {
        self.num_projections
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn bin_spacing(&self) -> R {
        self.bin_spacing
    }

    pub fn data(&self) -> &[R] {
        &self.data
    }

    pub fn angles_known(&self) -> Option<&[R]> {
        self.angles_known.as_deref()
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.num_bins..(i + 1) * self.num_bins]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks_exact(self.num_bins)
    }

    /// Half-extent of the bin axis; bin centers run from `-r` to `+r`.
    pub fn support_radius(&self) -> R {
        self.bin_spacing * real_of::<R>(self.num_bins - 1) / real::<R>(2.0)
    }

    /// Offset of bin `b` (zero at the physical center).
    pub fn rho_of_bin(&self, b: usize) -> R {
        -self.support_radius() + self.bin_spacing * real_of::<R>(b)
    }

    /// Discrete integral of each projection over the offset axis.
    pub fn projection_masses(&self) -> Vec<R> {
        self.rows()
            .map(|row| row.iter().copied().sum::<R>() * self.bin_spacing)
            .collect()
    }

    /// Mean absolute bin value over the whole sinogram.
    pub fn mean_abs(&self) -> R {
        let s: R = self.data.iter().map(|v| v.abs()).sum();
        s / real_of::<R>(self.data.len())
    }
}

/// Add i.i.d. Gaussian noise with standard deviation
/// `sigma_rel * mean(|noiseless values|)` to every bin.
pub fn add_projection_noise<R: Real>(
    s: &Sinogram<R>,
    sigma_rel: R,
    seed: RngSeed,
) -> Result<Sinogram<R>> {
    if sigma_rel < R::zero() {
        return Err(Error::InvalidParameter("sigma_rel must be >= 0".into()));
    }
    if sigma_rel == R::zero() {
        return Ok(s.clone());
    }
    let sigma = sigma_rel * s.mean_abs();
    let mut rng = seed.rng();
    let data = s
        .data
        .iter()
        .map(|&v| v + sigma * R::sample_standard_normal(&mut rng))
        .collect();
    Sinogram::new(
        data,
        s.num_projections,
        s.num_bins,
        s.bin_spacing,
        s.angles_known.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(n: usize, bins: usize, value: f64) -> Sinogram<f64> {
        Sinogram::new(vec![value; n * bins], n, bins, 0.5, None).unwrap()
    }

    #[test]
    fn geometry_helpers() {
        let s = flat(3, 9, 1.0);
        assert_eq!(s.support_radius(), 2.0);
        assert_eq!(s.rho_of_bin(0), -2.0);
        assert_eq!(s.rho_of_bin(4), 0.0);
        assert_eq!(s.rho_of_bin(8), 2.0);
    }

    #[test]
    fn noise_zero_is_identity() {
        let s = flat(4, 16, 2.0);
        let out = add_projection_noise(&s, 0.0, RngSeed(1)).unwrap();
        assert_eq!(s.data(), out.data());
    }

    #[test]
    fn noise_scale_tracks_mean_projection_value() {
        let n = 200;
        let bins = 500;
        let s = flat(n, bins, 2.0);
        let out = add_projection_noise(&s, 0.05, RngSeed(3)).unwrap();
        let diffs: Vec<f64> =
            out.data().iter().zip(s.data()).map(|(a, b)| a - b).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64;
        let sigma = 0.05 * 2.0;
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.02, "var ratio {}", var / (sigma * sigma));
        assert!(mean.abs() < 4.0 * sigma / (diffs.len() as f64).sqrt());
    }
}
