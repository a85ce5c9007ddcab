//! Projection spectra (oversampled 1D DFTs) and the 2D spectrum oracle.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::image::Image2D;
use crate::num::{real, real_of, Real};
use crate::tomo::sinogram::Sinogram;

/// Oversampled 1D Fourier transforms of the projections, one row per angle.
///
/// Bin `m` holds `sum_b R(rho_b) exp(-j 2 pi nu_m rho_b) * bin_spacing` with
/// the zero-padded-DFT frequencies `nu_m = m / (F * bin_spacing)` wrapped to
/// the signed range. The phase is referenced to `rho = 0` at the physical
/// center of the bin axis, so rows of a real sinogram are Hermitian and rings
/// assembled across rows are continuous in angle.
#[derive(Clone, Debug)]
pub struct ProjectionSpectra<R: Real> {
    num_projections: usize,
    freq_bins: usize,
    freq_spacing: R,
    oversample: usize,
    support_radius: R,
    data: Vec<Complex<R>>,
}

impl<R: Real> ProjectionSpectra<R> {
    pub fn num_projections(&self) -> usize {
        self.num_projections
    }

    pub fn freq_bins(&self) -> usize {
        self.freq_bins
    }

    pub fn freq_spacing(&self) -> R {
        self.freq_spacing
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    /// Support radius of the projected image (from the bin axis extent).
    pub fn support_radius(&self) -> R {
        self.support_radius
    }

    pub fn row(&self, i: usize) -> &[Complex<R>] {
        &self.data[i * self.freq_bins..(i + 1) * self.freq_bins]
    }

    /// Signed frequency of bin `m`.
    pub fn freq_of(&self, m: usize) -> R {
        if m <= self.freq_bins / 2 {
            self.freq_spacing * real_of::<R>(m)
        } else {
            -self.freq_spacing * real_of::<R>(self.freq_bins - m)
        }
    }

    /// Largest non-negative frequency on the grid.
    pub fn max_freq(&self) -> R {
        self.freq_spacing * real_of::<R>(self.freq_bins / 2)
    }

    /// Mean power per non-negative frequency bin, negative frequencies folded
    /// in. Index r corresponds to `nu = r * freq_spacing`.
    pub fn mean_power_profile(&self) -> Vec<R> {
        let half = self.freq_bins / 2;
        let mut profile = vec![R::zero(); half + 1];
        for i in 0..self.num_projections {
            let row = self.row(i);
            for (r, p) in profile.iter_mut().enumerate() {
                let mut e = row[r].norm_sqr();
                let mirror = (self.freq_bins - r) % self.freq_bins;
                if mirror != r && mirror > half {
                    e += row[mirror].norm_sqr();
                }
                *p += e;
            }
        }
        let inv = R::one() / real_of::<R>(self.num_projections);
        for p in &mut profile {
            *p *= inv;
        }
        profile
    }

    /// Smallest radius whose cumulative mean spectral energy reaches
    /// `fraction` of the total.
    pub fn nu0_for_energy_fraction(&self, fraction: R) -> R {
        let profile = self.mean_power_profile();
        let total: R = profile.iter().copied().sum();
        if total <= R::zero() {
            return R::zero();
        }
        let target = fraction * total;
        let mut cum = R::zero();
        for (r, &p) in profile.iter().enumerate() {
            cum += p;
            if cum >= target {
                return self.freq_spacing * real_of::<R>(r);
            }
        }
        self.max_freq()
    }
}

/// Zero-padded DFT of every projection, `oversample * num_bins` frequency
/// bins per row.
pub fn project_spectra<R: Real>(s: &Sinogram<R>, oversample: usize) -> Result<ProjectionSpectra<R>> {
    if oversample < 1 {
        return Err(Error::InvalidParameter("oversample must be >= 1".into()));
    }
    let bins = s.num_bins();
    let f_len = oversample * bins;
    let freq_spacing = R::one() / (real_of::<R>(f_len) * s.bin_spacing());
    let rho0 = -s.support_radius();

    let mut planner = FftPlanner::<R>::new();
    let fft = planner.plan_fft_forward(f_len);
    let two_pi = real::<R>(2.0) * R::PI();

    let mut data = Vec::with_capacity(s.num_projections() * f_len);
    let mut buf = vec![Complex::new(R::zero(), R::zero()); f_len];
    for row in s.rows() {
        for (b, slot) in buf.iter_mut().enumerate() {
            *slot = if b < bins {
                Complex::new(row[b], R::zero())
            } else {
                Complex::new(R::zero(), R::zero())
            };
        }
        fft.process(&mut buf);
        // scale by bin spacing and re-reference the phase to rho = 0
        for (m, v) in buf.iter().enumerate() {
            let nu = if m <= f_len / 2 {
                freq_spacing * real_of::<R>(m)
            } else {
                -freq_spacing * real_of::<R>(f_len - m)
            };
            let phase = Complex::from_polar(R::one(), -two_pi * nu * rho0);
            data.push(v * phase * s.bin_spacing());
        }
    }

    Ok(ProjectionSpectra {
        num_projections: s.num_projections(),
        freq_bins: f_len,
        freq_spacing,
        oversample,
        support_radius: s.support_radius(),
        data,
    })
}

/// Centered 2D spectrum of an image, sampled on the DFT grid.
///
/// Values approximate the continuous transform: pixel-area weighting and the
/// phase referenced to the grid center. Index `(i, j)` holds frequency
/// `((j - size/2) d, (i - size/2) d)` with `d = 1 / (size * pixel_size)`.
#[derive(Clone, Debug)]
pub struct Spectrum2D<R: Real> {
    size: usize,
    delta_freq: R,
    values: Vec<Complex<R>>,
}

impl<R: Real> Spectrum2D<R> {
    pub fn of_image(img: &Image2D<R>) -> Result<Spectrum2D<R>> {
        Spectrum2D::of_image_padded(img, 1)
    }

    /// Spectrum of the image embedded centered in a `pad`-times larger zero
    /// grid. Padding refines the frequency grid, which matters when the
    /// spectrum oscillates faster than the unpadded spacing can support
    /// (sharp-edged images sampled off-grid).
    pub fn of_image_padded(img: &Image2D<R>, pad: usize) -> Result<Spectrum2D<R>> {
        if img.width() != img.height() {
            return Err(Error::InvalidParameter("Spectrum2D expects a square image".into()));
        }
        if pad == 0 {
            return Err(Error::InvalidParameter("pad factor must be >= 1".into()));
        }
        if pad > 1 {
            let n = img.width();
            let big = pad * n;
            if (big - n) % 2 != 0 {
                return Err(Error::InvalidParameter(
                    "padding must keep the grid center on a pixel (n*(pad-1) even)".into(),
                ));
            }
            let offset = (big - n) / 2;
            let mut px = vec![R::zero(); big * big];
            for row in 0..n {
                for col in 0..n {
                    px[(row + offset) * big + (col + offset)] = img.get(row, col);
                }
            }
            let embedded = Image2D::from_pixels(px, big, big, img.pixel_size())?;
            return Spectrum2D::of_image_padded(&embedded, 1);
        }
        let n = img.width();
        let delta_freq = R::one() / (real_of::<R>(n) * img.pixel_size());
        let mut planner = FftPlanner::<R>::new();
        let fft = planner.plan_fft_forward(n);

        let mut grid: Vec<Complex<R>> =
            img.pixels().iter().map(|&p| Complex::new(p, R::zero())).collect();
        // rows
        for row in 0..n {
            fft.process(&mut grid[row * n..(row + 1) * n]);
        }
        // columns
        let mut col = vec![Complex::new(R::zero(), R::zero()); n];
        for c in 0..n {
            for r in 0..n {
                col[r] = grid[r * n + c];
            }
            fft.process(&mut col);
            for r in 0..n {
                grid[r * n + c] = col[r];
            }
        }

        // center the phases, apply pixel area, shift to centered layout
        let two_pi = real::<R>(2.0) * R::PI();
        let center = real_of::<R>(n - 1) / real::<R>(2.0);
        let area = img.pixel_size() * img.pixel_size();
        let half = n / 2;
        let mut values = vec![Complex::new(R::zero(), R::zero()); n * n];
        for i in 0..n {
            // signed index along rows (v frequency)
            let ky = i as i64 - half as i64;
            let src_r = ((ky + n as i64) % n as i64) as usize;
            for j in 0..n {
                let kx = j as i64 - half as i64;
                let src_c = ((kx + n as i64) % n as i64) as usize;
                let phase = two_pi * (real::<R>(kx as f64) + real::<R>(ky as f64)) * center
                    / real_of::<R>(n);
                let rot = Complex::from_polar(R::one(), phase);
                values[i * n + j] = grid[src_r * n + src_c] * rot * area;
            }
        }
        Ok(Spectrum2D {
            size: n,
            delta_freq,
            values,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn delta_freq(&self) -> R {
        self.delta_freq
    }

    /// Largest frequency representable along an axis.
    pub fn max_freq(&self) -> R {
        self.delta_freq * real_of::<R>(self.size / 2 - 1)
    }

    pub fn value_at_index(&self, i: usize, j: usize) -> Complex<R> {
        self.values[i * self.size + j]
    }

    /// Bilinear sample at physical frequency `(u, v)`; zero outside the grid.
    pub fn sample(&self, u: R, v: R) -> Complex<R> {
        let half = real_of::<R>(self.size / 2);
        let fj = u / self.delta_freq + half;
        let fi = v / self.delta_freq + half;
        let j0 = fj.floor();
        let i0 = fi.floor();
        let tx = fj - j0;
        let ty = fi - i0;
        let j0 = j0.to_isize().unwrap_or(isize::MIN);
        let i0 = i0.to_isize().unwrap_or(isize::MIN);
        let mut acc = Complex::new(R::zero(), R::zero());
        for (di, wy) in [(0isize, R::one() - ty), (1, ty)] {
            for (dj, wx) in [(0isize, R::one() - tx), (1, tx)] {
                let i = i0 + di;
                let j = j0 + dj;
                if i >= 0 && (i as usize) < self.size && j >= 0 && (j as usize) < self.size {
                    acc += self.values[i as usize * self.size + j as usize] * (wy * wx);
                }
            }
        }
        acc
    }

    /// Total spectral energy `sum |F|^2 du dv`.
    pub fn total_energy(&self) -> R {
        let cell = self.delta_freq * self.delta_freq;
        self.values.iter().map(|v| v.norm_sqr()).sum::<R>() * cell
    }
}

/// Fourier slice check: for each angle, the relative L2 distance between the
/// projection spectrum row and the interpolated radial slice of the image's
/// 2D spectrum.
pub fn fst_relative_errors<R: Real>(
    img: &Image2D<R>,
    spectra: &ProjectionSpectra<R>,
    angles: &[R],
) -> Result<Vec<R>> {
    if angles.len() != spectra.num_projections() {
        return Err(Error::DimensionMismatch("angles vs spectra rows".into()));
    }
    // pad factor 2: the slice is interpolated off-grid, and sharp-edged
    // images oscillate too fast for bilinear interpolation on the raw grid
    let f2 = Spectrum2D::of_image_padded(img, 2)?;
    // stay inside the interpolable square
    let nu_lim = f2.max_freq().min(spectra.max_freq());
    let mut out = Vec::with_capacity(angles.len());
    for (i, &theta) in angles.iter().enumerate() {
        let (sin_t, cos_t) = theta.sin_cos();
        let row = spectra.row(i);
        let mut num = R::zero();
        let mut den = R::zero();
        for (m, &val) in row.iter().enumerate() {
            let nu = spectra.freq_of(m);
            if nu.abs() > nu_lim {
                continue;
            }
            let slice = f2.sample(nu * cos_t, nu * sin_t);
            num += (val - slice).norm_sqr();
            den += slice.norm_sqr();
        }
        out.push(if den > R::zero() { (num / den).sqrt() } else { R::zero() });
    }
    Ok(out)
}
