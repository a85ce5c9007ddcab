//! Scoring helpers.

use uvtomo_core::error::{Error, Result};
use uvtomo_core::Image64;

/// Squared relative reconstruction error `||fhat - f||^2 / ||f||^2` over all
/// pixels.
pub fn relative_error(reference: &Image64, estimate: &Image64) -> Result<f64> {
    if reference.width() != estimate.width() || reference.height() != estimate.height() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            reference.width(),
            reference.height(),
            estimate.width(),
            estimate.height()
        )));
    }
    let denom = reference.l2_norm_sq();
    if denom <= 0.0 {
        return Err(Error::InvalidParameter("relative error against a zero reference".into()));
    }
    let num: f64 = reference
        .pixels()
        .iter()
        .zip(estimate.pixels())
        .map(|(&f, &g)| (g - f) * (g - f))
        .sum();
    Ok(num / denom)
}

/// Least-squares slope of `ln(value)` against `ln(n)`.
pub fn slope_fit(n_list: &[usize], values: &[f64]) -> Result<f64> {
    if n_list.len() != values.len() {
        return Err(Error::DimensionMismatch("n_list vs values".into()));
    }
    if n_list.len() < 3 {
        return Err(Error::InvalidParameter("slope fit needs at least 3 points".into()));
    }
    if values.iter().any(|&v| !(v > 0.0)) || n_list.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParameter("slope fit needs positive data".into()));
    }
    let xs: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if den == 0.0 {
        return Err(Error::InvalidParameter("slope fit needs distinct n values".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use uvtomo_core::image::Image2D;

    fn img(values: &[f64], w: usize) -> Image64 {
        Image2D::from_pixels(values.to_vec(), w, values.len() / w, 1.0).unwrap()
    }

    #[test]
    fn relative_error_basic_values() {
        let f = img(&[1.0, 2.0, -1.0, 0.5], 2);
        assert_relative_eq!(relative_error(&f, &f).unwrap(), 0.0);
        let zero = img(&[0.0; 4], 2);
        assert_relative_eq!(relative_error(&f, &zero).unwrap(), 1.0);
        let double = img(&[2.0, 4.0, -2.0, 1.0], 2);
        assert_relative_eq!(relative_error(&f, &double).unwrap(), 1.0);
        assert!(relative_error(&zero, &f).is_err());
    }

    #[test]
    fn relative_error_rejects_dimension_mismatch() {
        let f = img(&[1.0, 2.0, -1.0, 0.5], 2);
        let g = img(&[1.0, 2.0], 2);
        assert!(relative_error(&f, &g).is_err());
    }

    #[test]
    fn slope_fit_recovers_power_laws() {
        let ns = [100usize, 1000, 10_000, 100_000];
        let inv: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
        assert_relative_eq!(slope_fit(&ns, &inv).unwrap(), -1.0, epsilon = 1e-12);
        let flat = vec![0.37; ns.len()];
        assert_relative_eq!(slope_fit(&ns, &flat).unwrap(), 0.0, epsilon = 1e-12);
        let inv2: Vec<f64> = ns.iter().map(|&n| 1.0 / (n as f64).powi(2)).collect();
        assert_relative_eq!(slope_fit(&ns, &inv2).unwrap(), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn slope_fit_rejects_degenerate_input() {
        assert!(slope_fit(&[10, 20], &[1.0, 0.5]).is_err());
        assert!(slope_fit(&[10, 20, 30], &[1.0, 0.0, 0.5]).is_err());
        assert!(slope_fit(&[10, 10, 10], &[1.0, 1.0, 1.0]).is_err());
    }
}
