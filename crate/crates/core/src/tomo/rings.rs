//! Per-frequency Fourier ring reconstruction.
//!
//! For every radial bin `nu <= nu0` the N spectral values across projections
//! are samples of a period-2pi ring signal at the (unknown) projection
//! angles. Reordering them by the recovered permutation and assigning the
//! i-th position the grid angle `2 pi i / N` turns each ring into the 1D
//! problem solved by [`crate::qbl::estimate_coeffs`].

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::num::{real, real_of, Real};
use crate::ordering::Permutation;
use crate::qbl::{estimate_coeffs, OrderedSampleSet};
use crate::tomo::config::{ring_k0, CutoffPolicy, ReconstructionConfig};
use crate::tomo::spectra::ProjectionSpectra;

/// One Fourier series (period 2pi) per radial frequency bin.
#[derive(Clone, Debug)]
pub struct RingCoeffs<R: Real> {
    series: Vec<FourierSeries<R>>,
    delta_nu: R,
    support_radius: R,
}

impl<R: Real> RingCoeffs<R> {
    pub fn new(series: Vec<FourierSeries<R>>, delta_nu: R, support_radius: R) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::EmptyInput("RingCoeffs: no rings"));
        }
        Ok(RingCoeffs {
            series,
            delta_nu,
            support_radius,
        })
    }

    pub fn num_rings(&self) -> usize {
        self.series.len()
    }

    pub fn delta_nu(&self) -> R {
        self.delta_nu
    }

    pub fn support_radius(&self) -> R {
        self.support_radius
    }

    /// Outermost reconstructed radius.
    pub fn nu0(&self) -> R {
        self.delta_nu * real_of::<R>(self.series.len() - 1)
    }

    pub fn ring(&self, r: usize) -> &FourierSeries<R> {
        &self.series[r]
    }

    pub fn rings(&self) -> &[FourierSeries<R>] {
        &self.series
    }

    pub fn max_k0(&self) -> usize {
        self.series.iter().map(|s| s.k0()).max().unwrap_or(0)
    }

    /// Enforce the real-image symmetry `F(nu, theta + pi) = conj(F(nu, theta))`
    /// by conjugate averaging in coefficient space:
    /// `a_k <- (a_k + (-1)^k conj(a_{-k})) / 2`. Idempotent.
    pub fn hermitian_symmetrized(&self) -> RingCoeffs<R> {
        let half = real::<R>(0.5);
        let series = self
            .series
            .iter()
            .map(|fs| {
                let k0 = fs.k0();
                let mut out = FourierSeries::zeros(k0, fs.period());
                for k in -(k0 as i64)..=(k0 as i64) {
                    let sign = if k.rem_euclid(2) == 0 { R::one() } else { -R::one() };
                    let combined = (fs.coeff(k) + fs.coeff(-k).conj() * sign) * half;
                    out.set_coeff(k, combined);
                }
                out
            })
            .collect();
        RingCoeffs {
            series,
            delta_nu: self.delta_nu,
            support_radius: self.support_radius,
        }
    }
}

/// Resolve the cutoff radius for a spectra set under the given policy.
pub fn resolve_nu0<R: Real>(spectra: &ProjectionSpectra<R>, policy: CutoffPolicy<R>) -> R {
    let max = spectra.max_freq();
    match policy {
        CutoffPolicy::Value(v) => v.min(max),
        CutoffPolicy::Auto { energy_fraction } => spectra.nu0_for_energy_fraction(energy_fraction),
    }
}

/// Estimate ring coefficients for every radial bin up to the configured
/// cutoff, reordering the projections by `order` and assigning order-statistic
/// grid angles.
pub fn reconstruct_rings<R: Real>(
    spectra: &ProjectionSpectra<R>,
    order: &Permutation,
    cfg: &ReconstructionConfig<R>,
) -> Result<RingCoeffs<R>> {
    cfg.validate()?;
    let n = spectra.num_projections();
    if order.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "ordering of {} vs {} projections",
            order.len(),
            n
        )));
    }
    let global_k0 = cfg.global_k0(n)?;
    if n < 2 * global_k0 + 1 {
        return Err(Error::Aliasing { k0: global_k0, n });
    }
    let nu0 = resolve_nu0(spectra, cfg.nu0);
    let num_rings = (nu0 / spectra.freq_spacing())
        .floor()
        .to_usize()
        .unwrap_or(0)
        .min(spectra.freq_bins() / 2)
        + 1;
    let two_pi = real::<R>(2.0) * R::PI();
    let r0 = spectra.support_radius();

    let series: Vec<FourierSeries<R>> = (0..num_rings)
        .into_par_iter()
        .map(|r| {
            let nu = spectra.freq_spacing() * real_of::<R>(r);
            let k0 = ring_k0(global_k0, nu, r0);
            let values: Vec<Complex<R>> =
                (0..n).map(|i| spectra.row(order.image_of(i))[r]).collect();
            let samples = OrderedSampleSet::new(values, two_pi)?;
            estimate_coeffs(&samples, k0)
        })
        .collect::<Result<_>>()?;

    RingCoeffs::new(series, spectra.freq_spacing(), r0)
}

/// Ring coefficients from known angles (diagnostic path).
///
/// Uses the circular gap-trapezoid quadrature
/// `a_k = sum_i v_i exp(-j k theta_i) w_i / (2 pi)` with
/// `w_i = (theta_{i+1} - theta_{i-1}) / 2`, which beats the order-statistics
/// assignment whenever the true angles are available.
pub fn reconstruct_rings_known_angles<R: Real>(
    spectra: &ProjectionSpectra<R>,
    angles: &[R],
    cfg: &ReconstructionConfig<R>,
) -> Result<RingCoeffs<R>> {
    cfg.validate()?;
    let n = spectra.num_projections();
    if angles.len() != n {
        return Err(Error::DimensionMismatch("angles vs projections".into()));
    }
    let global_k0 = cfg.global_k0(n)?;
    if n < 2 * global_k0 + 1 {
        return Err(Error::Aliasing { k0: global_k0, n });
    }
    let nu0 = resolve_nu0(spectra, cfg.nu0);
    let num_rings = (nu0 / spectra.freq_spacing())
        .floor()
        .to_usize()
        .unwrap_or(0)
        .min(spectra.freq_bins() / 2)
        + 1;
    let two_pi = real::<R>(2.0) * R::PI();
    let r0 = spectra.support_radius();

    // circular gap weights
    let mut weights = vec![R::zero(); n];
    for i in 0..n {
        let next = angles[(i + 1) % n] + if i + 1 == n { two_pi } else { R::zero() };
        let prev = if i == 0 { angles[n - 1] - two_pi } else { angles[i - 1] };
        weights[i] = (next - prev) / real::<R>(2.0);
    }

    let series: Vec<FourierSeries<R>> = (0..num_rings)
        .into_par_iter()
        .map(|r| {
            let nu = spectra.freq_spacing() * real_of::<R>(r);
            let k0 = ring_k0(global_k0, nu, r0);
            let mut fs = FourierSeries::zeros(k0, two_pi);
            for k in -(k0 as i64)..=(k0 as i64) {
                let mut acc = Complex::new(R::zero(), R::zero());
                for i in 0..n {
                    let phase = Complex::from_polar(R::one(), -real::<R>(k as f64) * angles[i]);
                    acc += spectra.row(i)[r] * phase * weights[i];
                }
                fs.set_coeff(k, acc / two_pi);
            }
            fs
        })
        .collect();

    RingCoeffs::new(series, spectra.freq_spacing(), r0)
}
