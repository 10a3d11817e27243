//! Pluggable cipher-comparison harness: per-algorithm latency, the metric
//! battery, and statistical-suite pass counts over a common image workload.
//!
//! Assumptions baked into the comparison (also emitted in the report
//! header): legacy 64-bit-block ciphers run in CBC mode with PKCS#7 padding;
//! ChaCha20 is measured as a pure stream cipher without an authenticator;
//! timing covers the encrypt call only, with a second column for the full
//! key-derivation chain of the chaos pipeline.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;
use x25519_dalek::PublicKey;

use crate::envelope;
use crate::error::{Error, Result};
use crate::keyforge::{
    agree, chaos_key_for_passphrase, derive_final_key, ephemeral_from_bytes, FinalKey, Passphrase,
    RecipientKeypair,
};
use crate::metrics::{
    adjacent_correlation, histogram_uniformity, mse_psnr, npcr, shannon_entropy, uaci,
    ByteHistogram, ImageBuffer,
};
use crate::nist;
use crate::pgm;

/// A cipher under comparison. `encrypt`/`decrypt` exchange self-contained
/// containers (fresh randomness allowed); `encrypt_stream_pinned` exposes the
/// bare cipher output deterministically for the metric battery, with `lane`
/// selecting a pinned nonce/IV.
pub trait CipherAdapter {
    fn name(&self) -> &'static str;
    fn key_bits(&self) -> u32;
    fn encrypt(&mut self, plaintext: &[u8]) -> Result<Vec<u8>>;
    fn decrypt(&mut self, ciphertext: &[u8]) -> Result<Vec<u8>>;
    fn encrypt_stream_pinned(&self, plaintext: &[u8], lane: u64) -> Result<Vec<u8>>;

    /// Encryption including the key-derivation chain; only meaningful for the
    /// chaos pipeline, whose derivation is the novelty being measured.
    fn encrypt_with_key_derivation(&mut self, _plaintext: &[u8]) -> Option<Result<Vec<u8>>> {
        None
    }
}

/// Deterministic per-adapter, per-lane nonce/IV material.
fn lane_bytes<const N: usize>(name: &str, lane: u64) -> [u8; N] {
    let mut hasher = Shake128::default();
    hasher.update(b"bench-lane");
    hasher.update(name.as_bytes());
    hasher.update(&lane.to_le_bytes());
    let mut out = [0u8; N];
    hasher.finalize_xof().read(&mut out);
    out
}

/// Full chaos pipeline: passphrase + ephemeral-static X25519 + HKDF + GCM.
pub struct CryptoChaosAdapter {
    passphrase: Passphrase,
    recipient: RecipientKeypair,
    ephemeral_scalar: [u8; 32],
    ephemeral_public: [u8; 32],
    salt: [u8; 32],
    key: FinalKey,
    rng: ChaCha20Rng,
}

impl CryptoChaosAdapter {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let passphrase = Passphrase::new(format!("bench-passphrase-{seed}")).unwrap();
        let recipient = RecipientKeypair::generate(&mut rng).unwrap();
        let mut ephemeral_scalar = [0u8; 32];
        rng.fill_bytes(&mut ephemeral_scalar);
        let mut salt = [0u8; 32];
        rng.fill_bytes(&mut salt);

        let ephemeral = ephemeral_from_bytes(ephemeral_scalar);
        let ephemeral_public = *PublicKey::from(&ephemeral).as_bytes();
        let shared = agree(&ephemeral, &PublicKey::from(recipient.public_bytes())).unwrap();
        let chaos = chaos_key_for_passphrase(&passphrase);
        let key = derive_final_key(&shared, &chaos, &salt);
        Self { passphrase, recipient, ephemeral_scalar, ephemeral_public, salt, key, rng }
    }
}

impl CipherAdapter for CryptoChaosAdapter {
    fn name(&self) -> &'static str {
        "CryptoChaos"
    }

    fn key_bits(&self) -> u32 {
        256
    }

    fn encrypt(&mut self, plaintext: &[u8]) -> Result<Vec<u8>> {
        let env = envelope::seal(
            &self.key,
            self.ephemeral_public,
            self.salt,
            plaintext,
            &mut self.rng,
        )?;
        Ok(env.serialize())
    }

    fn decrypt(&mut self, ciphertext: &[u8]) -> Result<Vec<u8>> {
        envelope::decrypt(&self.passphrase, &self.recipient, ciphertext)
    }

    fn encrypt_stream_pinned(&self, plaintext: &[u8], lane: u64) -> Result<Vec<u8>> {
        let nonce: [u8; 12] = lane_bytes(self.name(), lane);
        let env =
            envelope::seal_with_nonce(&self.key, self.ephemeral_public, self.salt, nonce, plaintext);
        Ok(env.ciphertext)
    }

    fn encrypt_with_key_derivation(&mut self, plaintext: &[u8]) -> Option<Result<Vec<u8>>> {
        let mut nonce = [0u8; 12];
        self.rng.fill_bytes(&mut nonce);
        Some(envelope::encrypt_pinned(
            &self.passphrase,
            &PublicKey::from(self.recipient.public_bytes()),
            plaintext,
            self.ephemeral_scalar,
            self.salt,
            nonce,
        ))
    }
}

/// AES-256-GCM baseline; container is `nonce || ciphertext || tag`.
pub struct AesGcmAdapter {
    key: FinalKey,
    rng: ChaCha20Rng,
}

impl AesGcmAdapter {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut key = [0u8; 32];
        rng.fill_bytes(&mut key);
        Self { key: FinalKey(key), rng }
    }
}

impl CipherAdapter for AesGcmAdapter {
    fn name(&self) -> &'static str {
        "AES-GCM"
    }

    fn key_bits(&self) -> u32 {
        256
    }

    fn encrypt(&mut self, plaintext: &[u8]) -> Result<Vec<u8>> {
        let mut nonce = [0u8; 12];
        self.rng.fill_bytes(&mut nonce);
        let (ct, tag) = envelope::aead_encrypt(&self.key, &nonce, &[], plaintext);
        let mut out = Vec::with_capacity(12 + ct.len() + 16);
        out.extend_from_slice(&nonce);
        out.extend_from_slice(&ct);
        out.extend_from_slice(&tag);
        Ok(out)
    }

    fn decrypt(&mut self, ciphertext: &[u8]) -> Result<Vec<u8>> {
        if ciphertext.len() < 28 {
            return Err(Error::invalid("AES-GCM container too short"));
        }
        let nonce: [u8; 12] = ciphertext[..12].try_into().unwrap();
        let tag: [u8; 16] = ciphertext[ciphertext.len() - 16..].try_into().unwrap();
        envelope::aead_decrypt(&self.key, &nonce, &[], &ciphertext[12..ciphertext.len() - 16], &tag)
    }

    fn encrypt_stream_pinned(&self, plaintext: &[u8], lane: u64) -> Result<Vec<u8>> {
        let nonce: [u8; 12] = lane_bytes(self.name(), lane);
        let (ct, _tag) = envelope::aead_encrypt(&self.key, &nonce, &[], plaintext);
        Ok(ct)
    }
}

/// Pure ChaCha20 stream encryption (no authenticator), matching the naming
/// in the comparison tables; container is `nonce || ciphertext`.
pub struct ChaCha20Adapter {
    key: [u8; 32],
    rng: ChaCha20Rng,
}

impl ChaCha20Adapter {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut key = [0u8; 32];
        rng.fill_bytes(&mut key);
        Self { key, rng }
    }

    fn apply(&self, nonce: &[u8; 12], data: &mut [u8]) {
        use chacha20::cipher::{KeyIvInit, StreamCipher};
        let mut cipher = chacha20::ChaCha20::new(&self.key.into(), nonce.into());
        cipher.apply_keystream(data);
    }
}

impl CipherAdapter for ChaCha20Adapter {
    fn name(&self) -> &'static str {
        "ChaCha20"
    }

    fn key_bits(&self) -> u32 {
        256
    }

    fn encrypt(&mut self, plaintext: &[u8]) -> Result<Vec<u8>> {
        let mut nonce = [0u8; 12];
        self.rng.fill_bytes(&mut nonce);
        let mut body = plaintext.to_vec();
        self.apply(&nonce, &mut body);
        let mut out = Vec::with_capacity(12 + body.len());
        out.extend_from_slice(&nonce);
        out.extend_from_slice(&body);
        Ok(out)
    }

    fn decrypt(&mut self, ciphertext: &[u8]) -> Result<Vec<u8>> {
        if ciphertext.len() < 12 {
            return Err(Error::invalid("ChaCha20 container too short"));
        }
        let nonce: [u8; 12] = ciphertext[..12].try_into().unwrap();
        let mut body = ciphertext[12..].to_vec();
        self.apply(&nonce, &mut body);
        Ok(body)
    }

    fn encrypt_stream_pinned(&self, plaintext: &[u8], lane: u64) -> Result<Vec<u8>> {
        let nonce: [u8; 12] = lane_bytes(self.name(), lane);
        let mut body = plaintext.to_vec();
        self.apply(&nonce, &mut body);
        Ok(body)
    }
}

/// Shared shape for the two legacy 64-bit-block CBC adapters.
macro_rules! cbc_adapter {
    ($name:ident, $cipher:ty, $label:literal, $key_len:expr) => {
        pub struct $name {
            key: [u8; $key_len],
            rng: ChaCha20Rng,
        }

        impl $name {
            pub fn new(seed: u64) -> Self {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let mut key = [0u8; $key_len];
                rng.fill_bytes(&mut key);
                Self { key, rng }
            }

            fn encrypt_cbc(&self, iv: &[u8; 8], plaintext: &[u8]) -> Result<Vec<u8>> {
                use cbc::cipher::{block_padding::Pkcs7, BlockEncryptMut, KeyIvInit};
                let enc = cbc::Encryptor::<$cipher>::new_from_slices(&self.key, iv)
                    .map_err(|e| Error::invalid(format!("{}: {e}", $label)))?;
                Ok(enc.encrypt_padded_vec_mut::<Pkcs7>(plaintext))
            }
        }

        impl CipherAdapter for $name {
            fn name(&self) -> &'static str {
                $label
            }

            fn key_bits(&self) -> u32 {
                ($key_len * 8) as u32
            }

            fn encrypt(&mut self, plaintext: &[u8]) -> Result<Vec<u8>> {
                let mut iv = [0u8; 8];
                self.rng.fill_bytes(&mut iv);
                let body = self.encrypt_cbc(&iv, plaintext)?;
                let mut out = Vec::with_capacity(8 + body.len());
                out.extend_from_slice(&iv);
                out.extend_from_slice(&body);
                Ok(out)
            }

            fn decrypt(&mut self, ciphertext: &[u8]) -> Result<Vec<u8>> {
                use cbc::cipher::{block_padding::Pkcs7, BlockDecryptMut, KeyIvInit};
                if ciphertext.len() < 16 {
                    return Err(Error::invalid(concat!($label, " container too short")));
                }
                let iv: [u8; 8] = ciphertext[..8].try_into().unwrap();
                let dec = cbc::Decryptor::<$cipher>::new_from_slices(&self.key, &iv)
                    .map_err(|e| Error::invalid(format!("{}: {e}", $label)))?;
                dec.decrypt_padded_vec_mut::<Pkcs7>(&ciphertext[8..])
                    .map_err(|_| Error::AuthenticationFailure)
            }

            fn encrypt_stream_pinned(&self, plaintext: &[u8], lane: u64) -> Result<Vec<u8>> {
                let iv: [u8; 8] = lane_bytes(self.name(), lane);
                self.encrypt_cbc(&iv, plaintext)
            }
        }
    };
}

cbc_adapter!(BlowfishCbcAdapter, blowfish::Blowfish, "Blowfish", 16);
cbc_adapter!(Cast5CbcAdapter, cast5::Cast5, "CAST5", 16);

/// Adapter selection. The first three are required baselines; the legacy
/// ciphers are optional comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdapterKind {
    CryptoChaos,
    AesGcm,
    ChaCha20,
    BlowfishCbc,
    Cast5Cbc,
}

impl AdapterKind {
    pub const ALL: [AdapterKind; 5] = [
        AdapterKind::CryptoChaos,
        AdapterKind::AesGcm,
        AdapterKind::ChaCha20,
        AdapterKind::BlowfishCbc,
        AdapterKind::Cast5Cbc,
    ];

    pub fn required(self) -> bool {
        matches!(self, AdapterKind::CryptoChaos | AdapterKind::AesGcm | AdapterKind::ChaCha20)
    }

    pub fn label(self) -> &'static str {
        match self {
            AdapterKind::CryptoChaos => "CryptoChaos",
            AdapterKind::AesGcm => "AES-GCM",
            AdapterKind::ChaCha20 => "ChaCha20",
            AdapterKind::BlowfishCbc => "Blowfish",
            AdapterKind::Cast5Cbc => "CAST5",
        }
    }

    fn build(self, seed: u64) -> Box<dyn CipherAdapter> {
        match self {
            AdapterKind::CryptoChaos => Box::new(CryptoChaosAdapter::new(seed)),
            AdapterKind::AesGcm => Box::new(AesGcmAdapter::new(seed)),
            AdapterKind::ChaCha20 => Box::new(ChaCha20Adapter::new(seed)),
            AdapterKind::BlowfishCbc => Box::new(BlowfishCbcAdapter::new(seed)),
            AdapterKind::Cast5Cbc => Box::new(Cast5CbcAdapter::new(seed)),
        }
    }
}

impl std::str::FromStr for AdapterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cryptochaos" => Ok(AdapterKind::CryptoChaos),
            "aes-gcm" | "aesgcm" => Ok(AdapterKind::AesGcm),
            "chacha20" => Ok(AdapterKind::ChaCha20),
            "blowfish" => Ok(AdapterKind::BlowfishCbc),
            "cast5" => Ok(AdapterKind::Cast5Cbc),
            other => Err(Error::invalid(format!("unknown adapter {other:?}"))),
        }
    }
}

/// Image source for the benchmark workload.
#[derive(Debug, Clone)]
pub enum Workload {
    Synthetic { seed: u64, width: usize, height: usize },
    File(PathBuf),
}

impl Workload {
    fn load(&self) -> Result<ImageBuffer> {
        match self {
            Workload::Synthetic { seed, width, height } => {
                pgm::synthetic_image(*seed, *width, *height)
            }
            Workload::File(path) => pgm::read_pgm(&std::fs::read(path)?),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub runs: usize,
    pub warmup: usize,
    pub seed: u64,
    pub workload: Workload,
    pub adapters: Vec<AdapterKind>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            runs: 30,
            warmup: 5,
            seed: 0,
            workload: Workload::Synthetic { seed: 0, width: 512, height: 512 },
            adapters: AdapterKind::ALL.to_vec(),
        }
    }
}

/// Row status: failed adapters never abort the whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason")]
pub enum RowOutcome {
    Ok,
    Failed(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowMeasurements {
    pub median_latency_s: f64,
    pub iqr_latency_s: f64,
    /// Only the chaos pipeline reports a with-derivation column.
    pub median_latency_with_key_derivation_s: Option<f64>,
    pub entropy_bits_per_byte: f64,
    pub adjacent_correlation: f64,
    pub histogram_uniformity: f64,
    pub npcr_percent: f64,
    pub uaci_percent: f64,
    pub mse: f64,
    pub psnr_db: f64,
    pub nist_passed: usize,
    pub nist_total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub key_bits: u32,
    pub outcome: RowOutcome,
    pub measurements: Option<RowMeasurements>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Comparison assumptions, emitted with every report.
    pub assumptions: Vec<String>,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// True when every required adapter produced a healthy row.
    pub fn required_ok(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| {
                AdapterKind::ALL
                    .iter()
                    .any(|k| k.required() && k.label() == r.algorithm)
            })
            .all(|r| r.outcome == RowOutcome::Ok)
    }
}

fn report_assumptions() -> Vec<String> {
    vec![
        "Blowfish and CAST5 run in CBC mode with PKCS#7 padding (modes unstated upstream)".into(),
        "ChaCha20 is timed as a pure stream cipher without an authenticator".into(),
        "latency covers the encrypt call only; the with-derivation column includes the chaos key chain".into(),
        "metric battery runs on pinned-nonce cipher output truncated to the plaintext length".into(),
    ]
}

fn median_of(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn time_encryptions<F: FnMut() -> Result<Vec<u8>>>(
    runs: usize,
    warmup: usize,
    mut op: F,
) -> Result<(f64, f64)> {
    for _ in 0..warmup {
        op()?;
    }
    let mut samples = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        let out = op()?;
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(&out);
        samples.push(elapsed);
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = median_of(&samples);
    let iqr = samples[(samples.len() * 3) / 4] - samples[samples.len() / 4];
    Ok((median, iqr))
}

fn measure_adapter(
    adapter: &mut dyn CipherAdapter,
    image: &ImageBuffer,
    cfg: &BenchConfig,
    rng: &mut ChaCha20Rng,
) -> Result<RowMeasurements> {
    // Round-trip validation on random plaintexts before any timing.
    for i in 0..100 {
        let len = rng.gen_range(0..512usize);
        let mut plaintext = vec![0u8; len.max(1)];
        rng.fill_bytes(&mut plaintext);
        let sealed = adapter.encrypt(&plaintext)?;
        let opened = adapter.decrypt(&sealed)?;
        if opened != plaintext {
            return Err(Error::invalid(format!(
                "round-trip mismatch on validation plaintext {i}"
            )));
        }
    }

    let pixels = image.pixels();
    let (median, iqr) = time_encryptions(cfg.runs, cfg.warmup, || adapter.encrypt(pixels))?;
    let with_kdf = match adapter.encrypt_with_key_derivation(pixels) {
        Some(first) => {
            first?;
            let (m, _) = time_encryptions(cfg.runs, 0, || {
                adapter.encrypt_with_key_derivation(pixels).expect("supported")
            })?;
            Some(m)
        }
        None => None,
    };

    // Metric battery on pinned-lane cipher output. Padding modes may emit
    // more bytes than the plaintext; compare on the plaintext length.
    let c1_full = adapter.encrypt_stream_pinned(pixels, 0)?;
    let bumped = image.with_center_pixel_bumped();
    let c2_full = adapter.encrypt_stream_pinned(bumped.pixels(), 1)?;
    let c1 = &c1_full[..pixels.len()];
    let c2 = &c2_full[..pixels.len()];

    let hist = ByteHistogram::from_bytes(c1);
    let c1_img = ImageBuffer::new(image.width(), image.height(), c1.to_vec())?;
    let c2_img = ImageBuffer::new(image.width(), image.height(), c2.to_vec())?;
    let (mse, psnr) = mse_psnr(image, &c1_img)?;
    let suite = nist::run_suite(c1)?;

    Ok(RowMeasurements {
        median_latency_s: median,
        iqr_latency_s: iqr,
        median_latency_with_key_derivation_s: with_kdf,
        entropy_bits_per_byte: shannon_entropy(&hist)?,
        adjacent_correlation: adjacent_correlation(c1)?,
        histogram_uniformity: histogram_uniformity(&hist)?,
        npcr_percent: npcr(&c1_img, &c2_img)?,
        uaci_percent: uaci(&c1_img, &c2_img)?,
        mse,
        psnr_db: psnr,
        nist_passed: suite.passed,
        nist_total: suite.total,
    })
}

/// Runs the harness with the standard adapter set from `cfg.adapters`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let adapters: Vec<Box<dyn CipherAdapter>> = cfg
        .adapters
        .iter()
        .enumerate()
        .map(|(i, kind)| kind.build(cfg.seed.wrapping_add(i as u64)))
        .collect();
    run_bench_with_adapters(cfg, adapters)
}

/// Harness entry point with caller-supplied adapters (also the seam used by
/// tests to inject broken adapters).
pub fn run_bench_with_adapters(
    cfg: &BenchConfig,
    adapters: Vec<Box<dyn CipherAdapter>>,
) -> Result<BenchReport> {
    if cfg.runs == 0 {
        return Err(Error::invalid("bench runs must be >= 1"));
    }
    if adapters.is_empty() {
        return Err(Error::invalid("at least one adapter must be selected"));
    }
    let image = cfg.workload.load()?;

    let mut rows = Vec::with_capacity(adapters.len());
    for mut adapter in adapters {
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ 0x9E3779B97F4A7C15);
        let algorithm = adapter.name().to_string();
        let key_bits = adapter.key_bits();
        let row = match measure_adapter(adapter.as_mut(), &image, cfg, &mut rng) {
            Ok(measurements) => BenchRow {
                algorithm,
                key_bits,
                outcome: RowOutcome::Ok,
                measurements: Some(measurements),
            },
            Err(e) => BenchRow {
                algorithm,
                key_bits,
                outcome: RowOutcome::Failed(e.to_string()),
                measurements: None,
            },
        };
        rows.push(row);
    }
    Ok(BenchReport { assumptions: report_assumptions(), rows })
}

/// Output formats for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned table mirroring the published column order.
    Text,
    /// Machine-readable; round-trips through [`parse_report`].
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::invalid(format!("unknown report format {other:?}"))),
        }
    }
}

const CSV_HEADER: &str = "algorithm,entropy_bits_per_byte,adjacent_correlation,\
median_latency_s,iqr_latency_s,median_latency_with_key_derivation_s,\
histogram_uniformity,npcr_percent,uaci_percent,mse,psnr_db,nist_passed,status";

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            Ok(serde_json::to_string_pretty(report).expect("report serializes"))
        }
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for row in &report.rows {
                let status = match &row.outcome {
                    RowOutcome::Ok => "ok".to_string(),
                    RowOutcome::Failed(r) => format!("failed: {r}"),
                    RowOutcome::Skipped(r) => format!("skipped: {r}"),
                };
                match &row.measurements {
                    Some(m) => {
                        let kdf = m
                            .median_latency_with_key_derivation_s
                            .map(|v| format!("{v:.6}"))
                            .unwrap_or_default();
                        out.push_str(&format!(
                            "{},{:.5},{:.5},{:.6},{:.6},{},{:.5},{:.4},{:.4},{:.1},{:.2},{}/{},{}\n",
                            row.algorithm,
                            m.entropy_bits_per_byte,
                            m.adjacent_correlation,
                            m.median_latency_s,
                            m.iqr_latency_s,
                            kdf,
                            m.histogram_uniformity,
                            m.npcr_percent,
                            m.uaci_percent,
                            m.mse,
                            m.psnr_db,
                            m.nist_passed,
                            m.nist_total,
                            status
                        ));
                    }
                    None => {
                        out.push_str(&format!(
                            "{},,,,,,,,,,,,{}\n",
                            row.algorithm,
                            status.replace(',', ";")
                        ));
                    }
                }
            }
            Ok(out)
        }
        ReportFormat::Text => {
            let mut out = String::new();
            for a in &report.assumptions {
                out.push_str(&format!("# {a}\n"));
            }
            out.push_str(&format!(
                "{:<12} {:>9} {:>12} {:>13} {:>12} {:>11} {:>8} {:>8} {:>9} {:>7} {:>6}\n",
                "Algorithm",
                "Entropy",
                "AdjCorr",
                "EncTime(s)",
                "+KDF(s)",
                "Uniformity",
                "NPCR%",
                "UACI%",
                "MSE",
                "PSNR",
                "NIST"
            ));
            for row in &report.rows {
                match (&row.outcome, &row.measurements) {
                    (RowOutcome::Ok, Some(m)) => {
                        let kdf = m
                            .median_latency_with_key_derivation_s
                            .map(|v| format!("{v:.6}"))
                            .unwrap_or_else(|| "-".into());
                        out.push_str(&format!(
                            "{:<12} {:>9.5} {:>12.5} {:>13.6} {:>12} {:>11.5} {:>8.4} {:>8.4} {:>9.1} {:>7.2} {:>6}\n",
                            row.algorithm,
                            m.entropy_bits_per_byte,
                            m.adjacent_correlation,
                            m.median_latency_s,
                            kdf,
                            m.histogram_uniformity,
                            m.npcr_percent,
                            m.uaci_percent,
                            m.mse,
                            m.psnr_db,
                            format!("{}/{}", m.nist_passed, m.nist_total)
                        ));
                    }
                    (outcome, _) => {
                        let status = match outcome {
                            RowOutcome::Failed(r) => format!("FAILED: {r}"),
                            RowOutcome::Skipped(r) => format!("skipped: {r}"),
                            RowOutcome::Ok => "ok (no measurements)".into(),
                        };
                        out.push_str(&format!("{:<12} {status}\n", row.algorithm));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Inverse of [`emit_report`] for the structured format.
pub fn parse_report(json: &str) -> Result<BenchReport> {
    serde_json::from_str(json).map_err(|e| Error::invalid(format!("malformed report JSON: {e}")))
}
