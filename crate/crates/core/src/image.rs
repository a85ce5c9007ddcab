//! Real pixel grids with a physical support disc.

use crate::error::{Error, Result};
use crate::num::{real, real_of, Real};

/// Row-major real image with square pixels.
///
/// The support radius is the distance from the grid center to the farthest
/// nonzero pixel center; everything beyond it is exactly zero. `max_abs` is
/// the largest absolute pixel value. Both are recomputed on construction so
/// the invariants hold by definition.
#[derive(Clone, Debug)]
pub struct Image2D<R: Real> {
    width: usize,
    height: usize,
    pixel_size: R,
    pixels: Vec<R>,
    support_radius: R,
    max_abs: R,
}

impl<R: Real> Image2D<R> {
    pub fn from_pixels(pixels: Vec<R>, width: usize, height: usize, pixel_size: R) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyInput("Image2D: zero-sized grid"));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "pixel buffer {} vs {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        if pixel_size <= R::zero() {
            return Err(Error::InvalidParameter("pixel_size must be positive".into()));
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("image pixels"));
        }
        let mut img = Image2D {
            width,
            height,
            pixel_size,
            pixels,
            support_radius: R::zero(),
            max_abs: R::zero(),
        };
        img.recompute_derived();
        Ok(img)
    }

    /// Build with pixels beyond `radius` from the center forced to zero.
    pub fn masked(
        mut pixels: Vec<R>,
        width: usize,
        height: usize,
        pixel_size: R,
        radius: R,
    ) -> Result<Self> {
        let cx = real_of::<R>(width - 1) / real::<R>(2.0);
        let cy = real_of::<R>(height - 1) / real::<R>(2.0);
        let r2 = (radius / pixel_size) * (radius / pixel_size);
        for row in 0..height {
            for col in 0..width {
                let dx = real_of::<R>(col) - cx;
                let dy = real_of::<R>(row) - cy;
                if dx * dx + dy * dy > r2 {
                    pixels[row * width + col] = R::zero();
                }
            }
        }
        Image2D::from_pixels(pixels, width, height, pixel_size)
    }

    pub fn zeros(width: usize, height: usize, pixel_size: R) -> Self {
        Image2D::from_pixels(vec![R::zero(); width * height], width, height, pixel_size)
            .expect("zero image is valid")
    }

    fn recompute_derived(&mut self) {
        let cx = real_of::<R>(self.width - 1) / real::<R>(2.0);
        let cy = real_of::<R>(self.height - 1) / real::<R>(2.0);
        let mut max_r2 = R::zero();
        let mut max_abs = R::zero();
        for row in 0..self.height {
            for col in 0..self.width {
                let v = self.pixels[row * self.width + col];
                if v != R::zero() {
                    let dx = real_of::<R>(col) - cx;
                    let dy = real_of::<R>(row) - cy;
                    max_r2 = max_r2.max(dx * dx + dy * dy);
                    max_abs = max_abs.max(v.abs());
                }
            }
        }
        self.support_radius = max_r2.sqrt() * self.pixel_size;
        self.max_abs = max_abs;
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_size(&self) -> R {
        self.pixel_size
    }

    pub fn pixels(&self) -> &[R] {
        &self.pixels
    }

    pub fn support_radius(&self) -> R {
        self.support_radius
    }

    pub fn max_abs(&self) -> R {
        self.max_abs
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> R {
        self.pixels[row * self.width + col]
    }

    /// Physical x of a column center (grid center at the origin).
    #[inline]
    pub fn x_of_col(&self, col: usize) -> R {
        (real_of::<R>(col) - real_of::<R>(self.width - 1) / real::<R>(2.0)) * self.pixel_size
    }

    /// Physical y of a row center.
    #[inline]
    pub fn y_of_row(&self, row: usize) -> R {
        (real_of::<R>(row) - real_of::<R>(self.height - 1) / real::<R>(2.0)) * self.pixel_size
    }

    /// Bilinear sample at a physical point; zero outside the grid.
    pub fn sample_bilinear(&self, x: R, y: R) -> R {
        let half = real::<R>(2.0).recip();
        let fc = x / self.pixel_size + real_of::<R>(self.width - 1) * half;
        let fr = y / self.pixel_size + real_of::<R>(self.height - 1) * half;
        let c0 = fc.floor();
        let r0 = fr.floor();
        let tx = fc - c0;
        let ty = fr - r0;
        let c0i = c0.to_isize().unwrap_or(isize::MIN);
        let r0i = r0.to_isize().unwrap_or(isize::MIN);
        let mut acc = R::zero();
        for (dr, wy) in [(0isize, R::one() - ty), (1, ty)] {
            for (dc, wx) in [(0isize, R::one() - tx), (1, tx)] {
                let r = r0i + dr;
                let c = c0i + dc;
                if r >= 0 && (r as usize) < self.height && c >= 0 && (c as usize) < self.width {
                    acc += self.pixels[r as usize * self.width + c as usize] * wy * wx;
                }
            }
        }
        acc
    }

    /// Sum of squared pixels.
    pub fn l2_norm_sq(&self) -> R {
        self.pixels.iter().map(|&p| p * p).sum()
    }

    /// Total pixel sum times pixel area (the discrete integral of f).
    pub fn mass(&self) -> R {
        let s: R = self.pixels.iter().copied().sum();
        s * self.pixel_size * self.pixel_size
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn support_radius_of_single_offset_pixel() {
        let mut px = vec![0.0f64; 9 * 9];
        px[4 * 9 + 7] = 2.0; // 3 columns right of center
        let img = Image2D::from_pixels(px, 9, 9, 0.5).unwrap();
        assert_relative_eq!(img.support_radius(), 1.5);
        assert_relative_eq!(img.max_abs(), 2.0);
    }

    #[test]
    fn zero_image_has_zero_support() {
        let img = Image2D::<f64>::zeros(8, 8, 1.0);
        assert_eq!(img.support_radius(), 0.0);
        assert_eq!(img.max_abs(), 0.0);
    }

    #[test]
    fn masked_zeroes_outside_radius() {
        let px = vec![1.0f64; 33 * 33];
        let img = Image2D::masked(px, 33, 33, 1.0, 10.0).unwrap();
        for row in 0..33 {
            for col in 0..33 {
                let dx = col as f64 - 16.0;
                let dy = row as f64 - 16.0;
                let inside = (dx * dx + dy * dy).sqrt() <= 10.0;
                assert_eq!(img.get(row, col) != 0.0, inside, "({row},{col})");
            }
        }
        assert!(img.support_radius() <= 10.0);
    }

    #[test]
    fn non_finite_pixels_rejected() {
        let px = vec![0.0, f64::NAN, 0.0, 0.0];
        assert!(matches!(
            Image2D::from_pixels(px, 2, 2, 1.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn bilinear_interpolates_linearly() {
        // f(x, y) = x over a small grid reproduces exactly under bilinear
        // interpolation away from the border.
        let w = 5;
        let mut px = vec![0.0f64; w * w];
        for row in 0..w {
            for col in 0..w {
                px[row * w + col] = col as f64 - 2.0;
            }
        }
        let img = Image2D::from_pixels(px, w, w, 1.0).unwrap();
        assert_relative_eq!(img.sample_bilinear(0.25, 0.0), 0.25, epsilon = 1e-14);
        assert_relative_eq!(img.sample_bilinear(-1.5, 0.7), -1.5, epsilon = 1e-14);
    }
}
