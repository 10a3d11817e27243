//! CryptoChaos: a hybrid chaos-based encryption toolkit.
//!
//! Four discrete chaotic maps seed a 128-byte entropy pool that is folded
//! through SHA3-256, an ephemeral-static X25519 exchange, Blake3 and
//! HKDF-SHA256 into an AES-256-GCM key. Around that pipeline the crate ships
//! the full evaluation apparatus: statistical and visual ciphertext metrics,
//! a seven-test SP 800-22 subset, a Grover-attack resource estimator, and a
//! multi-cipher benchmark harness.
//!
//! Module map:
//! - [`chaos`]: the four maps, quantization, and pre-key assembly
//! - [`keyforge`]: the layered key-derivation chain and key files
//! - [`envelope`]: AES-256-GCM sealing and the `.cch` wire format
//! - [`metrics`]: entropy, correlation, uniformity, NPCR/UACI, MSE/PSNR
//! - [`pgm`]: P5 image I/O and the seeded synthetic workload
//! - [`nist`]: the statistical test suite
//! - [`grover`]: quantum-attack cost model and reference table
//! - [`bench`]: the cipher comparison harness

pub mod bench;
pub mod chaos;
pub mod envelope;
pub mod error;
pub mod grover;
pub mod keyforge;
pub mod metrics;
pub mod nist;
pub mod pgm;

pub use error::{Error, ParseFault, Result};
