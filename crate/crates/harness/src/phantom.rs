//! Procedural test image: an asymmetric mixture of Gaussian blobs clipped to
//! the support disc.
//!
//! The blobs sit well inside the disc (centers within 0.3 r0, widths around
//! 0.1 r0), so the clipped image agrees with the unclipped mixture to double
//! precision and the closed-form Fourier transform of the mixture doubles as
//! a machine-precision spectral oracle.

use num_complex::Complex64;
use uvtomo_core::fourier::FourierSeries;
use uvtomo_core::image::Image2D;
use uvtomo_core::Image64;

/// One blob: amplitude, center, width, all spatial quantities in units of the
/// support radius.
#[derive(Clone, Copy, Debug)]
pub struct Blob {
    pub amplitude: f64,
    pub cx: f64,
    pub cy: f64,
    pub sigma: f64,
}

/// The default asymmetric mixture (no mirror or rotational symmetry). The
/// off-center blobs give the Fourier rings genuine angular content, which is
/// what the order-statistics estimator has to work for.
pub const DEFAULT_BLOBS: [Blob; 5] = [
    Blob { amplitude: 1.00, cx: 0.34, cy: 0.10, sigma: 0.085 },
    Blob { amplitude: 0.80, cx: -0.25, cy: 0.33, sigma: 0.075 },
    Blob { amplitude: 0.65, cx: -0.38, cy: -0.18, sigma: 0.070 },
    Blob { amplitude: 0.90, cx: 0.05, cy: -0.06, sigma: 0.110 },
    Blob { amplitude: 0.55, cx: 0.27, cy: -0.35, sigma: 0.065 },
];

/// Render a blob mixture on a `grid x grid` image with unit pixels, clipped
/// to the inscribed support disc of radius `(grid - 1) / 2`.
pub fn gaussian_mixture_image(grid: usize, blobs: &[Blob]) -> Image64 {
    let r0 = (grid - 1) as f64 / 2.0;
    let c = (grid - 1) as f64 / 2.0;
    let mut px = vec![0.0f64; grid * grid];
    for row in 0..grid {
        for col in 0..grid {
            let x = col as f64 - c;
            let y = row as f64 - c;
            let mut v = 0.0;
            for b in blobs {
                let dx = x - b.cx * r0;
                let dy = y - b.cy * r0;
                let s = b.sigma * r0;
                v += b.amplitude * (-(dx * dx + dy * dy) / (2.0 * s * s)).exp();
            }
            px[row * grid + col] = v;
        }
    }
    Image2D::masked(px, grid, grid, 1.0, r0).expect("phantom pixels are finite")
}

/// The default phantom at the requested grid size.
pub fn default_phantom(grid: usize) -> Image64 {
    gaussian_mixture_image(grid, &DEFAULT_BLOBS)
}

/// Closed-form Fourier transform of the (unclipped) mixture rendered for a
/// `grid x grid` unit-pixel image.
pub fn analytic_ft(grid: usize, blobs: &[Blob], u: f64, v: f64) -> Complex64 {
    let r0 = (grid - 1) as f64 / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for b in blobs {
        let s = b.sigma * r0;
        let mag = b.amplitude * std::f64::consts::TAU * s * s
            * (-2.0 * std::f64::consts::PI.powi(2) * s * s * (u * u + v * v)).exp();
        let phase = -std::f64::consts::TAU * (u * b.cx * r0 + v * b.cy * r0);
        acc += Complex64::from_polar(mag, phase);
    }
    acc
}

/// Fourier-ring coefficients of the mixture at radius `nu`, via dense
/// angular sampling of the analytic transform. Machine-precision oracle for
/// the ring estimators.
pub fn analytic_ring_coeffs(grid: usize, blobs: &[Blob], nu: f64, k0: usize) -> FourierSeries<f64> {
    let len = (8 * k0.max(64)).next_power_of_two();
    let samples: Vec<Complex64> = (0..len)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / len as f64;
            analytic_ft(grid, blobs, nu * theta.cos(), nu * theta.sin())
        })
        .collect();
    FourierSeries::analyze(&samples, k0, std::f64::consts::TAU).expect("dense ring analysis")
}
