//! Binary PGM (P5, maxval 255) reader/writer and the seeded synthetic image
//! generator used when no dataset is on disk.

use std::io::Write;

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;

use crate::error::{Error, Result};
use crate::metrics::ImageBuffer;

/// Serializes an image as binary PGM.
pub fn write_pgm(image: &ImageBuffer) -> Vec<u8> {
    let mut out = Vec::with_capacity(image.pixels().len() + 32);
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height()).unwrap();
    out.extend_from_slice(image.pixels());
    out
}

/// Parses binary PGM. Comments (`#` to end of line) are allowed in the
/// header; the maxval must be 255.
pub fn read_pgm(data: &[u8]) -> Result<ImageBuffer> {
    if !data.starts_with(b"P5") {
        return Err(Error::invalid("not a binary PGM file (missing P5 magic)"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // Skip whitespace and comment lines.
        loop {
            while pos < data.len() && data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < data.len() && data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < data.len() && data[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::invalid("malformed PGM header"));
        }
        let text = std::str::from_utf8(&data[start..pos]).unwrap();
        *field = text
            .parse()
            .map_err(|_| Error::invalid("PGM header field out of range"))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::invalid(format!("unsupported PGM maxval {maxval}, expected 255")));
    }
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(Error::invalid("malformed PGM header"));
    }
    pos += 1; // single whitespace byte separates header from pixels
    let pixels = &data[pos..];
    if pixels.len() != width * height {
        return Err(Error::invalid(format!(
            "PGM body holds {} bytes, expected {}",
            pixels.len(),
            width * height
        )));
    }
    ImageBuffer::new(width, height, pixels.to_vec())
}

/// Deterministic synthetic workload: a diagonal gradient XORed with a
/// seed-keyed SHAKE-128 stream. Stands in for the benchmark dataset so
/// golden metrics stay reproducible from just a seed.
pub fn synthetic_image(seed: u64, width: usize, height: usize) -> Result<ImageBuffer> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("image dimensions must be positive"));
    }
    let mut hasher = Shake128::default();
    hasher.update(b"cryptochaos-synth-image");
    hasher.update(&seed.to_le_bytes());
    let mut reader = hasher.finalize_xof();
    let mut noise = vec![0u8; width * height];
    reader.read(&mut noise);

    let mut pixels = vec![0u8; width * height];
    for y in 0..height {
        for x in 0..width {
            let idx = y * width + x;
            let gradient = ((x + y) % 256) as u8;
            pixels[idx] = gradient ^ noise[idx];
        }
    }
    ImageBuffer::new(width, height, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pgm_round_trip() {
        let image = synthetic_image(7, 64, 48).unwrap();
        let bytes = write_pgm(&image);
        assert!(bytes.starts_with(b"P5\n64 48\n255\n"));
        let back = read_pgm(&bytes).unwrap();
        assert_eq!(back, image);
    }

    #[test]
    fn pgm_handles_comments() {
        let mut data = b"P5\n# a comment\n4 2\n# another\n255\n".to_vec();
        data.extend_from_slice(&[1, 2, 3, 4, 5, 6, 7, 8]);
        let image = read_pgm(&data).unwrap();
        assert_eq!((image.width(), image.height()), (4, 2));
    }

    #[test]
    fn pgm_rejects_malformed_input() {
        assert!(read_pgm(b"P6\n1 1\n255\nx").is_err());
        assert!(read_pgm(b"P5\n2 2\n255\nab").is_err()); // body too short
        assert!(read_pgm(b"P5\n1 1\n65535\n\x00\x00").is_err());
    }

    #[test]
    fn synthetic_image_is_seed_deterministic() {
        let a = synthetic_image(42, 512, 512).unwrap();
        let b = synthetic_image(42, 512, 512).unwrap();
        let c = synthetic_image(43, 512, 512).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.pixels().len(), 512 * 512);
    }

    proptest! {
        #[test]
        fn prop_pgm_round_trip(
            w in 1usize..40,
            h in 1usize..40,
            seed in any::<u64>(),
        ) {
            let image = synthetic_image(seed, w, h).unwrap();
            let back = read_pgm(&write_pgm(&image)).unwrap();
            prop_assert_eq!(back, image);
        }
    }
}
