//! Polar spectrum assembly and the direct inverse polar Fourier transform.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image2D;
use crate::num::{real, real_of, Real};
use crate::tomo::rings::RingCoeffs;

/// Complex spectrum samples on a polar grid: `num_rings` radii spaced
/// `delta_nu` apart (starting at zero) by `spokes` uniform angles.
#[derive(Clone, Debug)]
pub struct PolarSpectrum<R: Real> {
    num_rings: usize,
    spokes: usize,
    delta_nu: R,
    support_radius: R,
    values: Vec<Complex<R>>,
}

impl<R: Real> PolarSpectrum<R> {
    pub fn num_rings(&self) -> usize {
        self.num_rings
    }

    pub fn spokes(&self) -> usize {
        self.spokes
    }

    pub fn delta_nu(&self) -> R {
        self.delta_nu
    }

    pub fn nu0(&self) -> R {
        self.delta_nu * real_of::<R>(self.num_rings - 1)
    }

    pub fn support_radius(&self) -> R {
        self.support_radius
    }

    pub fn value(&self, ring: usize, spoke: usize) -> Complex<R> {
        self.values[ring * self.spokes + spoke]
    }

    pub fn ring_values(&self, ring: usize) -> &[Complex<R>] {
        &self.values[ring * self.spokes..(ring + 1) * self.spokes]
    }
}

/// Evaluate every ring at `spokes` uniform angles after Hermitian
/// symmetrization (the image is real, the per-ring estimator does not know
/// that).
pub fn evaluate_polar<R: Real>(rings: &RingCoeffs<R>, spokes: usize) -> Result<PolarSpectrum<R>> {
    let need = 2 * rings.max_k0() + 1;
    if spokes < need {
        return Err(Error::InvalidParameter(format!(
            "{spokes} spokes cannot resolve ring bandwidth (need >= {need})"
        )));
    }
    let sym = rings.hermitian_symmetrized();
    let two_pi = real::<R>(2.0) * R::PI();
    let values: Vec<Complex<R>> = (0..sym.num_rings())
        .into_par_iter()
        .flat_map_iter(|r| {
            let fs = sym.ring(r).clone();
            (0..spokes).map(move |m| {
                let theta = two_pi * real_of::<R>(m) / real_of::<R>(spokes);
                fs.synthesize(theta)
            })
        })
        .collect();
    Ok(PolarSpectrum {
        num_rings: sym.num_rings(),
        spokes,
        delta_nu: sym.delta_nu(),
        support_radius: sym.support_radius(),
        values,
    })
}

/// Direct adjoint evaluation of the inverse Fourier transform on the polar
/// samples:
/// `f(x, y) = Re sum_{nu, m} w(nu) F(nu, theta_m) exp(+j 2 pi nu (x cos theta_m + y sin theta_m))`
/// with polar Jacobian weights `w = nu * dnu * dtheta`. The zero-radius bin
/// is the half-width innermost cell, a disc of radius `dnu / 2` whose area
/// is spread over the spokes (`w0 = pi (dnu/2)^2 / M`); anything heavier
/// over-weights the image mean. The output grid spans the support disc
/// (`pixel_size = 2 r0 / (grid - 1)`) and is masked to the support radius.
pub fn inverse_polar_ft<R: Real>(ps: &PolarSpectrum<R>, grid: usize) -> Result<Image2D<R>> {
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must be >= 2".into()));
    }
    let r0 = ps.support_radius();
    if r0 <= R::zero() {
        return Err(Error::InvalidParameter("polar spectrum has no support radius".into()));
    }
    let pixel_size = real::<R>(2.0) * r0 / real_of::<R>(grid - 1);
    let two_pi = real::<R>(2.0) * R::PI();
    let d_theta = two_pi / real_of::<R>(ps.spokes());
    let half_grid = real_of::<R>(grid - 1) / real::<R>(2.0);

    // Accumulate per output row: each (ring, spoke) term is separable in x
    // and y, so a row sees a constant row phase times a geometric column
    // phase. Row-level parallelism keeps the accumulation order fixed.
    let rows: Vec<Vec<R>> = (0..grid)
        .into_par_iter()
        .map(|row| {
            let y = (real_of::<R>(row) - half_grid) * pixel_size;
            let mut acc = vec![Complex::new(R::zero(), R::zero()); grid];
            for ring in 0..ps.num_rings() {
                let nu = ps.delta_nu() * real_of::<R>(ring);
                let w = if ring == 0 {
                    R::PI() * ps.delta_nu() * ps.delta_nu()
                        / (real::<R>(4.0) * real_of::<R>(ps.spokes()))
                } else {
                    nu * ps.delta_nu() * d_theta
                };
                for m in 0..ps.spokes() {
                    let theta = d_theta * real_of::<R>(m);
                    let (sin_t, cos_t) = theta.sin_cos();
                    let coeff = ps.value(ring, m) * w;
                    // phase at column 0 plus per-column rotation
                    let x0 = -half_grid * pixel_size;
                    let base = two_pi * nu * (x0 * cos_t + y * sin_t);
                    let step = two_pi * nu * cos_t * pixel_size;
                    let rot = Complex::from_polar(R::one(), step);
                    let mut phase = Complex::from_polar(R::one(), base);
                    for slot in acc.iter_mut() {
                        *slot += coeff * phase;
                        phase *= rot;
                    }
                }
            }
            acc.into_iter().map(|c| c.re).collect()
        })
        .collect();

    let mut pixels = Vec::with_capacity(grid * grid);
    for row in rows {
        pixels.extend(row);
    }
    Image2D::masked(pixels, grid, grid, pixel_size, r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FourierSeries;

    fn dc_only_rings(num: usize, value: f64) -> RingCoeffs<f64> {
        let series: Vec<FourierSeries<f64>> = (0..num)
            .map(|_| {
                let mut fs = FourierSeries::zeros(2, std::f64::consts::TAU);
                fs.set_coeff(0, Complex::new(value, 0.0));
                fs
            })
            .collect();
        RingCoeffs::new(series, 0.01, 40.0).unwrap()
    }

    #[test]
    fn dc_ring_gives_constant_spokes() {
        let ps = evaluate_polar(&dc_only_rings(4, 3.0), 16).unwrap();
        for ring in 0..4 {
            for m in 0..16 {
                let v = ps.value(ring, m);
                assert!((v.re - 3.0).abs() < 1e-12);
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spoke_count_must_cover_bandwidth() {
        let rings = dc_only_rings(2, 1.0);
        assert!(evaluate_polar(&rings, 4).is_err());
        assert!(evaluate_polar(&rings, 5).is_ok());
    }

    #[test]
    fn symmetrization_is_idempotent() {
        let mut fs = FourierSeries::zeros(3, std::f64::consts::TAU);
        fs.set_coeff(0, Complex::new(1.0, 0.5));
        fs.set_coeff(1, Complex::new(0.3, -0.2));
        fs.set_coeff(-1, Complex::new(-0.1, 0.7));
        fs.set_coeff(3, Complex::new(0.05, 0.02));
        let rings = RingCoeffs::new(vec![fs], 0.01, 40.0).unwrap();
        let once = rings.hermitian_symmetrized();
        let twice = once.hermitian_symmetrized();
        for k in -3i64..=3 {
            let d = (once.ring(0).coeff(k) - twice.ring(0).coeff(k)).norm();
            assert!(d < 1e-15, "k={k}: {d}");
        }
    }

    #[test]
    fn evaluate_matches_synthesize() {
        // Coefficients satisfying the real-image ring symmetry
        // a_k = (-1)^k conj(a_{-k}), so symmetrization leaves them alone.
        let mut fs = FourierSeries::zeros(2, std::f64::consts::TAU);
        fs.set_coeff(0, Complex::new(0.9, 0.0));
        fs.set_coeff(1, Complex::new(0.4, 0.1));
        fs.set_coeff(-1, Complex::new(-0.4, 0.1));
        fs.set_coeff(2, Complex::new(-0.2, 0.3));
        fs.set_coeff(-2, Complex::new(-0.2, -0.3));
        let rings = RingCoeffs::new(vec![fs.clone()], 0.01, 40.0).unwrap();
        let m = 12;
        let ps = evaluate_polar(&rings, m).unwrap();
        for i in 0..m {
            let theta = std::f64::consts::TAU * i as f64 / m as f64;
            let d = (ps.value(0, i) - fs.synthesize(theta)).norm();
            assert!(d < 1e-12, "spoke {i}: {d}");
        }
    }

    #[test]
    fn zero_spectrum_inverts_to_zero_image() {
        let ps = evaluate_polar(&dc_only_rings(3, 0.0), 8).unwrap();
        let img = inverse_polar_ft(&ps, 16).unwrap();
        assert!(img.pixels().iter().all(|&p| p == 0.0));
    }
}
