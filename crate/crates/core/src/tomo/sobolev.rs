//! Sobolev-style spectral tail diagnostics.

use crate::error::{Error, Result};
use crate::image::Image2D;
use crate::num::{real, Real};
use crate::tomo::spectra::Spectrum2D;

/// Discrete estimates of the weighted spectral norm and the out-of-disc tail
/// energy, with the bound `nu0^(-2 alpha) ||f||_alpha^2` reported alongside.
#[derive(Clone, Debug)]
pub struct SobolevStats<R: Real> {
    pub alpha: R,
    pub norm_alpha_sq: R,
    /// `(nu0, e_f(nu0), bound)` triples, ascending in `nu0`.
    pub tail: Vec<(R, R, R)>,
}

/// Estimate `||f||_alpha^2 = (1/2pi) sum (1 + u^2 + v^2)^alpha |F|^2 du dv`
/// and the tail `e_f(nu0) = (1/2pi) sum_{u^2+v^2 > nu0^2} |F|^2 du dv` for
/// each requested cutoff.
pub fn sobolev_tail<R: Real>(img: &Image2D<R>, alpha: R, nu0_list: &[R]) -> Result<SobolevStats<R>> {
    if alpha < R::zero() {
        return Err(Error::InvalidParameter("alpha must be >= 0".into()));
    }
    if nu0_list.is_empty() {
        return Err(Error::EmptyInput("sobolev_tail: no cutoffs"));
    }
    let f2 = Spectrum2D::of_image(img)?;
    let n = f2.size();
    let d = f2.delta_freq();
    let cell = d * d;
    let inv_two_pi = (real::<R>(2.0) * R::PI()).recip();
    let half = n / 2;

    let mut cutoffs: Vec<R> = nu0_list.to_vec();
    cutoffs.sort_by(|a, b| a.partial_cmp(b).expect("finite cutoffs"));

    let mut norm_alpha = R::zero();
    let mut tails = vec![R::zero(); cutoffs.len()];
    for i in 0..n {
        let v = d * (real::<R>(i as f64) - real::<R>(half as f64));
        for j in 0..n {
            let u = d * (real::<R>(j as f64) - real::<R>(half as f64));
            let r2 = u * u + v * v;
            let p = f2.value_at_index(i, j).norm_sqr() * cell;
            norm_alpha += (R::one() + r2).powf(alpha) * p;
            let r = r2.sqrt();
            for (t, &nu0) in tails.iter_mut().zip(cutoffs.iter()) {
                if r > nu0 {
                    *t += p;
                }
            }
        }
    }
    norm_alpha *= inv_two_pi;

    let tail = cutoffs
        .iter()
        .zip(tails.iter())
        .map(|(&nu0, &t)| {
            let bound = if nu0 > R::zero() {
                nu0.powf(-real::<R>(2.0) * alpha) * norm_alpha
            } else {
                R::infinity()
            };
            (nu0, t * inv_two_pi, bound)
        })
        .collect();

    Ok(SobolevStats {
        alpha,
        norm_alpha_sq: norm_alpha,
        tail,
    })
}
