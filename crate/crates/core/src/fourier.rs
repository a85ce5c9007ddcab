//! Fourier series with symmetric coefficient indexing.
//!
//! A [`FourierSeries`] holds complex coefficients `a_k` for `k` in
//! `[-k0, k0]`, stored as one array with the `k = 0` entry at offset `k0`.
//! The period is carried on every series (1 for the 1D sampling problems,
//! 2*pi for the angular Fourier rings) because the two halves of the pipeline
//! use different conventions.

use num_complex::Complex;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::num::{real, real_of, Real};

/// Truncated Fourier series `g(t) = sum_{|k| <= k0} a_k exp(j 2 pi k t / period)`.
#[derive(Clone, Debug)]
pub struct FourierSeries<R: Real> {
    k0: usize,
    period: R,
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> FourierSeries<R> {
    /// All-zero series of half-bandwidth `k0`.
    pub fn zeros(k0: usize, period: R) -> Self {
        FourierSeries {
            k0,
            period,
            coeffs: vec![Complex::new(R::zero(), R::zero()); 2 * k0 + 1],
        }
    }

    /// Build from a coefficient array of length `2*k0 + 1` ordered `k = -k0..=k0`.
    pub fn from_coeffs(coeffs: Vec<Complex<R>>, period: R) -> Result<Self> {
        if coeffs.len() % 2 == 0 || coeffs.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "coefficient array length must be odd, got {}",
                coeffs.len()
            )));
        }
        if period <= R::zero() {
            return Err(Error::InvalidParameter("period must be positive".into()));
        }
        Ok(FourierSeries {
            k0: (coeffs.len() - 1) / 2,
            period,
            coeffs,
        })
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn period(&self) -> R {
        self.period
    }

    /// Coefficient `a_k`; zero outside the stored band.
    pub fn coeff(&self, k: i64) -> Complex<R> {
        let idx = k + self.k0 as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex::new(R::zero(), R::zero())
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn set_coeff(&mut self, k: i64, value: Complex<R>) {
        let idx = (k + self.k0 as i64) as usize;
        self.coeffs[idx] = value;
    }

    /// Iterate `(k, a_k)` over the stored band.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<R>)> + '_ {
        let k0 = self.k0 as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - k0, c))
    }

    /// `sum_k |a_k|^2`.
    pub fn energy(&self) -> R {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Evaluate the series at phase `t`.
    pub fn synthesize(&self, t: R) -> Complex<R> {
        let two_pi = real::<R>(2.0) * R::PI();
        let base = two_pi * t / self.period;
        // Incremental rotation over k = -k0..=k0 keeps this O(k0) without a
        // trig call per coefficient.
        let step = Complex::from_polar(R::one(), base);
        let mut phase = Complex::from_polar(R::one(), -base * real_of::<R>(self.k0));
        let mut acc = Complex::new(R::zero(), R::zero());
        for &c in &self.coeffs {
            acc += c * phase;
            phase *= step;
        }
        acc
    }

    /// Recover coefficients from `n >= 2*k0 + 1` samples on the exact uniform
    /// grid `t_i = i * period / n`, `i = 0..n-1`.
    ///
    /// Exact (up to roundoff) for any series with half-bandwidth `<= k0`;
    /// this is the plain DFT and is distinct from the estimator in
    /// [`crate::qbl::estimate_coeffs`], whose sample index starts at 1.
    pub fn analyze(samples: &[Complex<R>], k0: usize, period: R) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::EmptyInput("analyze: no samples"));
        }
        if 2 * k0 + 1 > n {
            return Err(Error::Aliasing { k0, n });
        }
        let mut out = FourierSeries::zeros(k0, period);
        let inv_n = R::one() / real_of::<R>(n);
        let two_pi = real::<R>(2.0) * R::PI();
        for k in -(k0 as i64)..=(k0 as i64) {
            let mut acc = Complex::new(R::zero(), R::zero());
            for (i, &v) in samples.iter().enumerate() {
                let angle = -two_pi * real_of::<R>(i) * real::<R>(k as f64) / real_of::<R>(n);
                acc += v * Complex::from_polar(R::one(), angle);
            }
            out.set_coeff(k, acc * inv_n);
        }
        Ok(out)
    }
}

/// L2 distance between two series sharing a period, computed in coefficient
/// space over the union of index ranges (missing coefficients are zero).
pub fn l2_distance_periodic<R: Real>(a: &FourierSeries<R>, b: &FourierSeries<R>) -> Result<R> {
    let rel = (a.period - b.period).abs() / a.period.max(b.period);
    if rel > real::<R>(1e-12) {
        return Err(Error::PeriodMismatch(
            a.period.to_f64().unwrap_or(f64::NAN),
            b.period.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let kmax = a.k0.max(b.k0) as i64;
    let mut sum = R::zero();
    for k in -kmax..=kmax {
        sum += (a.coeff(k) - b.coeff(k)).norm_sqr();
    }
    Ok(sum.sqrt())
}

/// A periodic complex-valued signal given by an evaluation rule.
///
/// The evaluation phase is wrapped into `[0, period)` so periodicity holds by
/// construction.
#[derive(Clone)]
pub struct PeriodicSignal<R: Real> {
    period: R,
    eval: Arc<dyn Fn(R) -> Complex<R> + Send + Sync>,
}

impl<R: Real> PeriodicSignal<R> {
    pub fn new(period: R, eval: impl Fn(R) -> Complex<R> + Send + Sync + 'static) -> Self {
        PeriodicSignal {
            period,
            eval: Arc::new(eval),
        }
    }

    pub fn from_series(series: FourierSeries<R>) -> Self {
        PeriodicSignal {
            period: series.period(),
            eval: Arc::new(move |t| series.synthesize(t)),
        }
    }

    pub fn period(&self) -> R {
        self.period
    }

    pub fn eval(&self, t: R) -> Complex<R> {
        let mut t = t % self.period;
        if t < R::zero() {
            t += self.period;
        }
        (self.eval)(t)
    }
}

impl<R: Real> std::fmt::Debug for PeriodicSignal<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodicSignal").field("period", &self.period.to_f64()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_series_is_constant() {
        let mut fs = FourierSeries::zeros(3, 1.0);
        fs.set_coeff(0, c(2.5, -1.0));
        for &t in &[0.0, 0.1, 0.37, 0.99] {
            let v = fs.synthesize(t);
            assert_relative_eq!(v.re, 2.5, max_relative = 1e-12);
            assert_relative_eq!(v.im, -1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn cosine_from_two_coefficients() {
        let mut fs = FourierSeries::zeros(1, 1.0);
        fs.set_coeff(1, c(0.5, 0.0));
        fs.set_coeff(-1, c(0.5, 0.0));
        for &t in &[0.0, 0.125, 0.3, 0.75] {
            let v = fs.synthesize(t);
            assert_relative_eq!(v.re, (2.0 * std::f64::consts::PI * t).cos(), epsilon = 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn synthesize_is_periodic() {
        let mut rng = crate::rng::RngSeed(3).rng();
        use rand::Rng;
        let coeffs: Vec<Complex64> =
            (0..9).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let fs = FourierSeries::from_coeffs(coeffs, 1.0).unwrap();
        for &t in &[0.0, 0.21, 0.68] {
            let d = (fs.synthesize(t) - fs.synthesize(t + 1.0)).norm();
            assert!(d < 1e-12, "periodicity violated by {d}");
        }
    }

    #[test]
    fn l2_distance_examples() {
        let zero = FourierSeries::<f64>::zeros(0, 1.0);
        let mut a0 = FourierSeries::zeros(0, 1.0);
        a0.set_coeff(0, c(1.0, 0.0));
        assert_relative_eq!(l2_distance_periodic(&a0, &a0).unwrap(), 0.0);
        assert_relative_eq!(l2_distance_periodic(&a0, &zero).unwrap(), 1.0);

        // f = {a_1 = 3i, a_-2 = 4}, g empty: Pythagorean 5.
        let mut f = FourierSeries::zeros(2, 1.0);
        f.set_coeff(1, c(0.0, 3.0));
        f.set_coeff(-2, c(4.0, 0.0));
        assert_relative_eq!(l2_distance_periodic(&f, &zero).unwrap(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn l2_distance_rejects_period_mismatch() {
        let a = FourierSeries::<f64>::zeros(1, 1.0);
        let b = FourierSeries::<f64>::zeros(1, std::f64::consts::TAU);
        assert!(matches!(l2_distance_periodic(&a, &b), Err(Error::PeriodMismatch(_, _))));
    }

    #[test]
    fn periodic_signal_wraps_phase() {
        let sig = PeriodicSignal::new(2.0, |t| c(t, 0.0));
        assert_relative_eq!(sig.eval(2.5).re, 0.5);
        assert_relative_eq!(sig.eval(-0.5).re, 1.5);
    }
}
