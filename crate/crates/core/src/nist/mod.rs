//! The seven SP 800-22 statistical tests used by the evaluation tables:
//! monobit, block frequency, runs, longest run of ones, spectral (DFT),
//! non-overlapping template matching, and serial. Each returns a
//! [`NistResult`] carrying one or two p-values; a test passes when every
//! p-value is at least the 0.01 significance level.

pub mod special;

use std::collections::BTreeMap;
use std::fmt;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use special::{erfc, igamc};

/// Significance level for every test.
pub const ALPHA: f64 = 0.01;

/// An ordered sequence of bits, expanded from bytes most-significant-bit
/// first.
#[derive(Debug, Clone)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl BitSequence {
    pub fn from_bytes(data: &[u8]) -> Self {
        let mut bits = Vec::with_capacity(data.len() * 8);
        for &byte in data {
            for shift in (0..8).rev() {
                bits.push((byte >> shift) & 1);
            }
        }
        Self { bits }
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::invalid("bit sequence must be non-empty"));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::invalid("bit values must be 0 or 1"));
        }
        Ok(Self { bits })
    }

    /// Parse a string of '0'/'1' characters.
    pub fn from_str_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::invalid(format!("invalid bit character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

/// Outcome of a single test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NistResult {
    pub test_name: String,
    /// One p-value for most tests, two for serial.
    pub p_values: Vec<f64>,
    /// True iff every p-value is >= 0.01.
    pub passed: bool,
    /// Block/template settings actually used.
    pub parameters: BTreeMap<String, String>,
    /// Present when a structural prerequisite failed rather than the
    /// statistic itself (e.g. the runs-test frequency precondition).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl NistResult {
    fn new(name: &str, p_values: Vec<f64>, parameters: BTreeMap<String, String>) -> Self {
        let passed = p_values.iter().all(|&p| p >= ALPHA);
        Self { test_name: name.to_string(), p_values, passed, parameters, note: None }
    }

    pub fn min_p(&self) -> f64 {
        self.p_values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn require_len(s: &BitSequence, min: usize, test: &str) -> Result<()> {
    if s.len() < min {
        return Err(Error::invalid(format!(
            "{test}: sequence too short, minimum {min} bits, got {}",
            s.len()
        )));
    }
    Ok(())
}

/// Frequency (monobit) test: S = |sum of +-1| / sqrt(n), p = erfc(S / sqrt(2)).
pub fn monobit(s: &BitSequence) -> Result<NistResult> {
    require_len(s, 1, "monobit")?;
    let n = s.len() as f64;
    let ones = s.bits().iter().map(|&b| b as i64).sum::<i64>();
    let sum = 2 * ones - s.len() as i64;
    let s_obs = (sum.abs() as f64) / n.sqrt();
    let p = erfc(s_obs / std::f64::consts::SQRT_2);
    Ok(NistResult::new("monobit", vec![p], params(&[("n", s.len().to_string())])))
}

/// Default block length for the block-frequency test: at least 128, grown so
/// that no more than 100 blocks are evaluated.
pub fn default_block_len(n: usize) -> usize {
    128usize.max(n.div_ceil(100))
}

/// Block frequency test with block length `m` (default 128, grown for long
/// sequences so the block count stays <= 100).
pub fn block_frequency(s: &BitSequence, m: Option<usize>) -> Result<NistResult> {
    let m = m.unwrap_or_else(|| default_block_len(s.len()));
    if m == 0 {
        return Err(Error::invalid("block_frequency: block length must be >= 1"));
    }
    require_len(s, m, "block_frequency")?;
    let n_blocks = s.len() / m;
    let mut chi2 = 0.0;
    for block in s.bits().chunks_exact(m).take(n_blocks) {
        let pi = block.iter().map(|&b| b as f64).sum::<f64>() / m as f64;
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * m as f64;
    let p = igamc(n_blocks as f64 / 2.0, chi2 / 2.0);
    Ok(NistResult::new(
        "block_frequency",
        vec![p],
        params(&[("M", m.to_string()), ("N", n_blocks.to_string())]),
    ))
}

/// Runs test. The frequency prerequisite |pi - 1/2| < 2/sqrt(n) must hold;
/// when it does not, the test reports p = 0 with a note, per the reference
/// procedure.
pub fn runs(s: &BitSequence) -> Result<NistResult> {
    require_len(s, 2, "runs")?;
    let n = s.len() as f64;
    let pi = s.bits().iter().map(|&b| b as f64).sum::<f64>() / n;
    let pars = params(&[("n", s.len().to_string())]);
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        let mut r = NistResult::new("runs", vec![0.0], pars);
        r.note = Some("frequency prerequisite |pi - 1/2| < 2/sqrt(n) violated".into());
        return Ok(r);
    }
    let v = 1 + s.bits().windows(2).filter(|w| w[0] != w[1]).count();
    let num = (v as f64 - 2.0 * n * pi * (1.0 - pi)).abs();
    let den = 2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi);
    let p = erfc(num / den);
    Ok(NistResult::new("runs", vec![p], pars))
}

/// Category table for the longest-run test at a given sequence length.
#[derive(Debug, Clone)]
pub struct LongestRunConfig {
    /// Block length.
    pub m: usize,
    /// Degrees of freedom; the table has `k + 1` categories.
    pub k: usize,
    /// Longest-run value mapped to the lowest category (runs <= this value).
    pub v_min: u32,
    /// Category probabilities under randomness, `k + 1` entries.
    pub pi: Vec<f64>,
}

impl LongestRunConfig {
    /// The n-dependent schedule from the reference test suite. The n = 128
    /// table is exact: numerators are counts over all 256 byte blocks.
    pub fn for_length(n: usize) -> Result<Self> {
        if n >= 750_000 {
            Ok(Self {
                m: 10_000,
                k: 6,
                v_min: 10,
                pi: vec![0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
            })
        } else if n >= 6272 {
            Ok(Self {
                m: 128,
                k: 5,
                v_min: 4,
                pi: vec![0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124],
            })
        } else if n >= 128 {
            Ok(Self {
                m: 8,
                k: 3,
                v_min: 1,
                pi: vec![55.0 / 256.0, 94.0 / 256.0, 59.0 / 256.0, 48.0 / 256.0],
            })
        } else {
            Err(Error::invalid(format!(
                "longest_run: sequence too short, minimum 128 bits, got {n}"
            )))
        }
    }

    fn category(&self, longest: u32) -> usize {
        let idx = longest.saturating_sub(self.v_min) as usize;
        idx.min(self.k)
    }
}

/// Longest run of ones within fixed-size blocks, chi-squared against the
/// schedule in [`LongestRunConfig`].
pub fn longest_run(s: &BitSequence) -> Result<NistResult> {
    let cfg = LongestRunConfig::for_length(s.len())?;
    let n_blocks = s.len() / cfg.m;
    let mut counts = vec![0u64; cfg.k + 1];
    for block in s.bits().chunks_exact(cfg.m).take(n_blocks) {
        let mut longest = 0u32;
        let mut run = 0u32;
        for &b in block {
            if b == 1 {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 0;
            }
        }
        counts[cfg.category(longest)] += 1;
    }
    let mut chi2 = 0.0;
    for (i, &obs) in counts.iter().enumerate() {
        let expected = n_blocks as f64 * cfg.pi[i];
        chi2 += (obs as f64 - expected) * (obs as f64 - expected) / expected;
    }
    let p = igamc(cfg.k as f64 / 2.0, chi2 / 2.0);
    Ok(NistResult::new(
        "longest_run",
        vec![p],
        params(&[("M", cfg.m.to_string()), ("K", cfg.k.to_string()), ("N", n_blocks.to_string())]),
    ))
}

/// Spectral (discrete Fourier transform) test on the +-1 expansion.
pub fn spectral_dft(s: &BitSequence) -> Result<NistResult> {
    require_len(s, 1000, "spectral_dft")?;
    let n = s.len();
    let mut buf: Vec<Complex<f64>> = s
        .bits()
        .iter()
        .map(|&b| Complex::new(2.0 * b as f64 - 1.0, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let threshold = (n as f64 * (1.0 / 0.05f64).ln()).sqrt();
    let half = n / 2;
    let n1 = buf[..half].iter().filter(|c| c.norm() < threshold).count();
    let n0 = 0.95 * half as f64;
    let d = (n1 as f64 - n0) / (n as f64 * 0.95 * 0.05 / 4.0).sqrt();
    let p = erfc(d.abs() / std::f64::consts::SQRT_2);
    Ok(NistResult::new(
        "spectral_dft",
        vec![p],
        params(&[("n", n.to_string()), ("T", format!("{threshold:.4}"))]),
    ))
}

/// Default template for the non-overlapping template test: `000000001`.
pub fn default_template() -> Vec<u8> {
    vec![0, 0, 0, 0, 0, 0, 0, 0, 1]
}

/// Non-overlapping template matching over `n_blocks` blocks (default 8).
/// On a match the scan advances by the template length, otherwise by one.
pub fn non_overlapping_template(
    s: &BitSequence,
    template: &[u8],
    n_blocks: usize,
) -> Result<NistResult> {
    let m = template.len();
    if m < 2 || m > 21 {
        return Err(Error::invalid("template length must be in [2, 21]"));
    }
    if template.iter().any(|&b| b > 1) {
        return Err(Error::invalid("template bits must be 0 or 1"));
    }
    if n_blocks == 0 {
        return Err(Error::invalid("template block count must be >= 1"));
    }
    let min = n_blocks * (m + 1);
    require_len(s, min, "non_overlapping_template")?;
    let block_len = s.len() / n_blocks;

    let mu = (block_len - m + 1) as f64 / 2f64.powi(m as i32);
    let sigma2 = block_len as f64
        * (2f64.powi(-(m as i32)) - (2 * m - 1) as f64 * 2f64.powi(-2 * m as i32));

    let mut chi2 = 0.0;
    let mut w_counts = Vec::with_capacity(n_blocks);
    for block in s.bits().chunks_exact(block_len).take(n_blocks) {
        let mut w = 0u64;
        let mut i = 0;
        while i + m <= block_len {
            if block[i..i + m] == *template {
                w += 1;
                i += m;
            } else {
                i += 1;
            }
        }
        w_counts.push(w);
        chi2 += (w as f64 - mu) * (w as f64 - mu) / sigma2;
    }
    let p = igamc(n_blocks as f64 / 2.0, chi2 / 2.0);
    let template_str: String = template.iter().map(|b| char::from(b'0' + b)).collect();
    Ok(NistResult::new(
        "non_overlapping_template",
        vec![p],
        params(&[
            ("template", template_str),
            ("m", m.to_string()),
            ("N", n_blocks.to_string()),
            ("M", block_len.to_string()),
            ("mu", format!("{mu:.4}")),
        ]),
    ))
}

/// Serial test with overlapping m-bit patterns (wraparound included),
/// producing two p-values; both must clear the significance level.
pub fn serial(s: &BitSequence, m: usize) -> Result<NistResult> {
    if !(2..=16).contains(&m) {
        return Err(Error::invalid("serial: pattern length m must be in [2, 16]"));
    }
    let min = 1 << (m + 1);
    require_len(s, min, "serial")?;

    let psi2 = |mm: usize| -> f64 {
        if mm == 0 {
            return 0.0;
        }
        let n = s.len();
        let mut counts = vec![0u64; 1 << mm];
        let mask = (1usize << mm) - 1;
        // Seed the rolling window with the first mm bits.
        let mut window = 0usize;
        for j in 0..mm {
            window = (window << 1) | s.bits()[j] as usize;
        }
        for i in 0..n {
            counts[window] += 1;
            let next = s.bits()[(i + mm) % n] as usize;
            window = ((window << 1) | next) & mask;
        }
        let sum_sq: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
        (1 << mm) as f64 / n as f64 * sum_sq - n as f64
    };

    let psi_m = psi2(m);
    let psi_m1 = psi2(m - 1);
    let psi_m2 = psi2(m.saturating_sub(2));
    let d1 = psi_m - psi_m1;
    let d2 = psi_m - 2.0 * psi_m1 + psi_m2;
    let p1 = igamc(2f64.powi(m as i32 - 2), d1 / 2.0);
    let p2 = igamc(2f64.powi(m as i32 - 3), d2 / 2.0);
    Ok(NistResult::new("serial", vec![p1, p2], params(&[("m", m.to_string())])))
}

/// Aggregate report for one input: the seven results plus the pass count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NistReport {
    pub results: Vec<NistResult>,
    pub passed: usize,
    pub total: usize,
}

impl NistReport {
    pub fn passed_fraction(&self) -> String {
        format!("{}/{}", self.passed, self.total)
    }
}

impl fmt::Display for NistReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<26} {:>12} {:>12}  {}", "Test", "p-value", "p-value 2", "Result")?;
        for r in &self.results {
            let p1 = format!("{:.6}", r.p_values[0]);
            let p2 = r.p_values.get(1).map(|p| format!("{p:.6}")).unwrap_or_else(|| "-".into());
            let verdict = if r.passed { "Pass" } else { "Fail" };
            write!(f, "{:<26} {:>12} {:>12}  {}", r.test_name, p1, p2, verdict)?;
            if let Some(note) = &r.note {
                write!(f, "  ({note})")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "Tests Passed {}", self.passed_fraction())
    }
}

/// Tunable settings for [`run_suite_with`]; `Default` mirrors the reference
/// parameters used across the result tables.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Block length for the block-frequency test; `None` selects
    /// [`default_block_len`].
    pub block_len: Option<usize>,
    /// Template bits for the template test.
    pub template: Vec<u8>,
    /// Block count for the template test.
    pub template_blocks: usize,
    /// Pattern length for the serial test.
    pub serial_m: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            block_len: None,
            template: default_template(),
            template_blocks: 8,
            serial_m: 2,
        }
    }
}

/// Runs all seven tests over a byte string (expanded MSB-first) with the
/// default parameters.
pub fn run_suite(data: &[u8]) -> Result<NistReport> {
    run_suite_with(data, &SuiteOptions::default())
}

pub fn run_suite_with(data: &[u8], opts: &SuiteOptions) -> Result<NistReport> {
    let s = BitSequence::from_bytes(data);
    if s.len() < 1000 {
        return Err(Error::invalid(format!(
            "suite: sequence too short, minimum 1000 bits (125 bytes), got {} bits",
            s.len()
        )));
    }
    let results = vec![
        monobit(&s)?,
        block_frequency(&s, opts.block_len)?,
        runs(&s)?,
        longest_run(&s)?,
        spectral_dft(&s)?,
        non_overlapping_template(&s, &opts.template, opts.template_blocks)?,
        serial(&s, opts.serial_m)?,
    ];
    let passed = results.iter().filter(|r| r.passed).count();
    let total = results.len();
    Ok(NistReport { results, passed, total })
}
