//! On-disk formats.
//!
//! Images and sinograms are stored as a JSON header file plus a sibling
//! `.bin` file holding the raw little-endian `f64` payload (row-major for
//! images, projection-major for sinograms). Write-then-read round trips are
//! bit-exact for `f64` data.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image2D;
use crate::num::{real, Real};
use crate::ordering::Permutation;
use crate::tomo::Sinogram;

#[derive(Serialize, Deserialize)]
struct ImageHeader {
    width: usize,
    height: usize,
    pixel_size: f64,
    dtype: String,
}

#[derive(Serialize, Deserialize)]
struct SinogramHeader {
    num_projections: usize,
    num_bins: usize,
    bin_spacing: f64,
}

fn payload_path(header: &Path) -> PathBuf {
    header.with_extension("bin")
}

fn write_f64_payload(path: &Path, values: impl Iterator<Item = f64>) -> Result<()> {
    let mut bytes = Vec::new();
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn read_f64_payload(path: &Path, expected: usize) -> Result<Vec<f64>> {
    let bytes = fs::read(path)?;
    if bytes.len() != expected * 8 {
        return Err(Error::Format(format!(
            "payload {} holds {} bytes, expected {}",
            path.display(),
            bytes.len(),
            expected * 8
        )));
    }
    let mut out = Vec::with_capacity(expected);
    for chunk in bytes.chunks_exact(8) {
        let v = f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        if !v.is_finite() {
            return Err(Error::Format(format!("non-finite payload value in {}", path.display())));
        }
        out.push(v);
    }
    Ok(out)
}

/// Write an image as JSON header + sibling `.bin` payload.
pub fn write_image<R: Real>(path: &Path, img: &Image2D<R>) -> Result<()> {
    let header = ImageHeader {
        width: img.width(),
        height: img.height(),
        pixel_size: img.pixel_size().to_f64().expect("finite pixel size"),
        dtype: "f64le".to_string(),
    };
    fs::write(path, serde_json::to_string_pretty(&header)?)?;
    write_f64_payload(
        &payload_path(path),
        img.pixels().iter().map(|p| p.to_f64().expect("finite pixel")),
    )
}

pub fn read_image<R: Real>(path: &Path) -> Result<Image2D<R>> {
    let header: ImageHeader = serde_json::from_str(&fs::read_to_string(path)?)?;
    if header.dtype != "f64le" {
        return Err(Error::Format(format!("unsupported dtype {:?}", header.dtype)));
    }
    if header.width == 0 || header.height == 0 || !header.pixel_size.is_finite() {
        return Err(Error::Format("malformed image header".into()));
    }
    let raw = read_f64_payload(&payload_path(path), header.width * header.height)?;
    let pixels = raw.into_iter().map(real::<R>).collect();
    Image2D::from_pixels(pixels, header.width, header.height, real::<R>(header.pixel_size))
}

/// Write a sinogram as JSON header + sibling `.bin` payload
/// (projection-major). Ground-truth angles are not part of the format.
pub fn write_sinogram<R: Real>(path: &Path, s: &Sinogram<R>) -> Result<()> {
    let header = SinogramHeader {
        num_projections: s.num_projections(),
        num_bins: s.num_bins(),
        bin_spacing: s.bin_spacing().to_f64().expect("finite bin spacing"),
    };
    fs::write(path, serde_json::to_string_pretty(&header)?)?;
    write_f64_payload(
        &payload_path(path),
        s.data().iter().map(|v| v.to_f64().expect("finite bin")),
    )
}

pub fn read_sinogram<R: Real>(path: &Path) -> Result<Sinogram<R>> {
    let header: SinogramHeader = serde_json::from_str(&fs::read_to_string(path)?)?;
    if header.num_bins < 2 || !header.bin_spacing.is_finite() || header.bin_spacing <= 0.0 {
        return Err(Error::Format("malformed sinogram header".into()));
    }
    let raw = read_f64_payload(&payload_path(path), header.num_projections * header.num_bins)?;
    let data = raw.into_iter().map(real::<R>).collect();
    Sinogram::new(data, header.num_projections, header.num_bins, real::<R>(header.bin_spacing), None)
}

/// Write a permutation as a 1-based JSON integer array.
pub fn write_permutation(path: &Path, perm: &Permutation) -> Result<()> {
    fs::write(path, serde_json::to_string(&perm.to_one_based())?)?;
    Ok(())
}

pub fn read_permutation(path: &Path, anchor_fixed: bool) -> Result<Permutation> {
    let map: Vec<usize> = serde_json::from_str(&fs::read_to_string(path)?)?;
    Permutation::from_one_based(map, anchor_fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn image_round_trip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.json");
        let mut px = vec![0.0f64; 16 * 16];
        px[5 * 16 + 7] = 1.0 / 3.0;
        px[8 * 16 + 8] = -2.5e-7;
        let img = Image2D::from_pixels(px, 16, 16, 0.125).unwrap();
        write_image(&path, &img).unwrap();
        let back: Image2D<f64> = read_image(&path).unwrap();
        assert_eq!(img.pixels(), back.pixels());
        assert_eq!(img.pixel_size(), back.pixel_size());
        assert_eq!(img.support_radius(), back.support_radius());
    }

    #[test]
    fn sinogram_round_trip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("sino.json");
        let data: Vec<f64> = (0..3 * 17).map(|i| (i as f64 * 0.731).sin()).collect();
        let s = Sinogram::new(data, 3, 17, 0.25, None).unwrap();
        write_sinogram(&path, &s).unwrap();
        let back: Sinogram<f64> = read_sinogram(&path).unwrap();
        assert_eq!(s.data(), back.data());
        assert_eq!(s.bin_spacing(), back.bin_spacing());
    }

    #[test]
    fn size_mismatch_is_a_format_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.json");
        let img = Image2D::<f64>::zeros(8, 8, 1.0);
        write_image(&path, &img).unwrap();
        fs::write(payload_path(&path), [0u8; 16]).unwrap();
        assert!(matches!(read_image::<f64>(&path), Err(Error::Format(_))));
    }

    #[test]
    fn non_finite_payload_is_a_format_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.json");
        let img = Image2D::<f64>::zeros(2, 2, 1.0);
        write_image(&path, &img).unwrap();
        let mut bytes = Vec::new();
        for v in [f64::NAN, 0.0, 0.0, 0.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(payload_path(&path), bytes).unwrap();
        assert!(matches!(read_image::<f64>(&path), Err(Error::Format(_))));
    }

    #[test]
    fn malformed_header_is_an_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.json");
        fs::write(&path, "{\"width\": 4}").unwrap();
        assert!(read_image::<f64>(&path).is_err());
    }

    #[test]
    fn permutation_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("perm.json");
        let p = crate::ordering::synth_good_map(30, 3, 4, crate::rng::RngSeed(5)).unwrap();
        write_permutation(&path, &p).unwrap();
        let q = read_permutation(&path, true).unwrap();
        assert_eq!(p, q);
    }
}
