//! Encryption-quality metrics: Shannon entropy, adjacent-byte correlation,
//! histogram uniformity, NPCR, UACI, MSE and PSNR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "pixel count {} does not match {width}x{height}",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    /// Copy with the center pixel incremented by one (mod 256); the standard
    /// probe plaintext for the diffusion metrics.
    pub fn with_center_pixel_bumped(&self) -> Self {
        let mut out = self.clone();
        let idx = (self.height / 2) * self.width + self.width / 2;
        out.pixels[idx] = out.pixels[idx].wrapping_add(1);
        out
    }
}

/// Byte-frequency histogram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ByteHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl ByteHistogram {
    pub fn from_bytes(data: &[u8]) -> Self {
        let mut counts = vec![0u64; 256];
        for &b in data {
            counts[b as usize] += 1;
        }
        Self { counts, total: data.len() as u64 }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Shannon entropy in bits/byte: `H = -sum p_i log2 p_i` with `0 log 0 = 0`.
pub fn shannon_entropy(h: &ByteHistogram) -> Result<f64> {
    if h.total == 0 {
        return Err(Error::invalid("entropy of an empty histogram is undefined"));
    }
    let total = h.total as f64;
    let mut entropy = 0.0;
    for &c in &h.counts {
        if c > 0 {
            let p = c as f64 / total;
            entropy -= p * p.log2();
        }
    }
    Ok(entropy)
}

/// Pearson correlation over the sequential pairs `(data[i], data[i+1])`.
pub fn adjacent_correlation(data: &[u8]) -> Result<f64> {
    if data.len() < 3 {
        return Err(Error::invalid("adjacent correlation needs at least 3 bytes"));
    }
    let n = (data.len() - 1) as f64;
    let xs = &data[..data.len() - 1];
    let ys = &data[1..];
    let mean_x = xs.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mean_y = ys.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x as f64 - mean_x;
        let dy = y as f64 - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(cov / (var_x * var_y).sqrt())
}

/// Complemented, normalized total-variation distance from the uniform
/// distribution: 1.0 for exactly uniform counts, 0.0 for a single bin.
pub fn histogram_uniformity(h: &ByteHistogram) -> Result<f64> {
    if h.total == 0 {
        return Err(Error::invalid("uniformity of an empty histogram is undefined"));
    }
    let total = h.total as f64;
    let expected = total / 256.0;
    let tv: f64 = h.counts.iter().map(|&c| (c as f64 - expected).abs()).sum();
    Ok(1.0 - tv / (2.0 * total * (1.0 - 1.0 / 256.0)))
}

fn check_dims(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::invalid(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    Ok(())
}

/// Number of Pixels Change Rate, in percent.
pub fn npcr(c1: &ImageBuffer, c2: &ImageBuffer) -> Result<f64> {
    check_dims(c1, c2)?;
    let differing = c1.pixels.iter().zip(&c2.pixels).filter(|(a, b)| a != b).count();
    Ok(100.0 * differing as f64 / c1.pixels.len() as f64)
}

/// Unified Average Changing Intensity, in percent.
pub fn uaci(c1: &ImageBuffer, c2: &ImageBuffer) -> Result<f64> {
    check_dims(c1, c2)?;
    let sum: f64 = c1
        .pixels
        .iter()
        .zip(&c2.pixels)
        .map(|(&a, &b)| (a as f64 - b as f64).abs() / 255.0)
        .sum();
    Ok(100.0 * sum / c1.pixels.len() as f64)
}

/// Mean squared error and peak signal-to-noise ratio in dB. PSNR is positive
/// infinity for identical images so comparison tables stay representable.
pub fn mse_psnr(p: &ImageBuffer, c: &ImageBuffer) -> Result<(f64, f64)> {
    check_dims(p, c)?;
    let sum: f64 = p
        .pixels
        .iter()
        .zip(&c.pixels)
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    let mse = sum / p.pixels.len() as f64;
    let psnr = if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    };
    Ok((mse, psnr))
}
