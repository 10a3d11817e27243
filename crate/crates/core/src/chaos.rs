//! Discrete chaotic maps with 8-bit quantization.
//!
//! Four map families feed the entropy pool: a fixed-point logistic map, a
//! degree-5 Chebyshev map evaluated through a precomputed lookup table, a
//! discretized tent map (mu = 2), and the real-valued Henon map quantized to
//! bytes on output. Each map owns its own state and emits one byte per step;
//! [`build_pre_key`] concatenates 32 bytes from each into the 128-byte
//! pre-key.
//!
//! Finite-precision iteration has two failure modes the continuous maps do
//! not: absorbing fixed points and short forced cycles. The steps below carry
//! documented escape rules (see the individual step functions) so that no
//! state can stall for more than one consecutive step.

use std::sync::OnceLock;

use zeroize::{Zeroize, ZeroizeOnDrop};

/// Lowest admissible fixed-point parameter, floor(256 * 3.5703..).
pub const R_FIXED_MIN: u16 = 914;
/// Highest admissible fixed-point parameter, floor(256 * 3.996).
pub const R_FIXED_MAX: u16 = 1023;

/// Additive escape constant for degenerate fixed points: 0x9E, derived from
/// the golden ratio (floor(256 / phi)).
const ESCAPE_OFFSET: u8 = 158;

/// Per-map stream length contributed to the pre-key.
pub const SEGMENT_LEN: usize = 32;
/// Iterations discarded before any byte is emitted.
pub const BURN_IN: usize = 100;

/// Applies the anti-degeneracy rule: a step that maps a byte to itself is
/// replaced by `(x + 158 + counter) mod 256`. When `counter % 256 == 98` the
/// replacement is the identity, so a state may repeat once but never twice
/// (the counter has moved on).
#[inline]
fn escape_fixed_point(new: u8, old: u8, counter: u64) -> u8 {
    if new == old {
        new.wrapping_add(ESCAPE_OFFSET).wrapping_add(counter as u8)
    } else {
        new
    }
}

/// One byte per iteration of a chaotic map.
pub trait ChaoticMap {
    fn step(&mut self) -> u8;
}

/// Logistic map in 8-bit fixed point:
/// `x' = floor(r_fixed * x * (256 - x) / 256) mod 256`.
#[derive(Debug, Clone)]
pub struct LogisticState {
    x: u8,
    r_fixed: u16,
    counter: u64,
}

impl LogisticState {
    /// `r_fixed` must lie in `[914, 1023]`, i.e. `r` in (3.57, 4.0).
    pub fn new(x0: u8, r_fixed: u16) -> crate::Result<Self> {
        if !(R_FIXED_MIN..=R_FIXED_MAX).contains(&r_fixed) {
            return Err(crate::Error::invalid(format!(
                "r_fixed {r_fixed} outside [{R_FIXED_MIN}, {R_FIXED_MAX}]"
            )));
        }
        Ok(Self { x: x0, r_fixed, counter: 0 })
    }

    /// Map a 32-byte seed onto an initial state.
    ///
    /// seed[0] is the initial byte (0 is promoted to 1 to avoid starting on
    /// the absorbing origin), seed[1] selects the chaotic parameter, and
    /// seed[2..4] preload the iteration counter so that downstream
    /// counter-coupled perturbations differ per seed.
    pub fn from_seed(seed: &[u8; 32]) -> Self {
        Self {
            x: if seed[0] == 0 { 1 } else { seed[0] },
            r_fixed: R_FIXED_MIN + u16::from(seed[1]) % 110,
            counter: u64::from(u16::from_le_bytes([seed[2], seed[3]])),
        }
    }

    pub fn x(&self) -> u8 {
        self.x
    }

    pub fn r_fixed(&self) -> u16 {
        self.r_fixed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl ChaoticMap for LogisticState {
    fn step(&mut self) -> u8 {
        let x = u32::from(self.x);
        let raw = ((u32::from(self.r_fixed) * x * (256 - x)) / 256) % 256;
        self.x = escape_fixed_point(raw as u8, self.x, self.counter);
        self.counter += 1;
        self.x
    }
}

/// Degree-5 Chebyshev images for all 256 midpoint-quantized inputs.
///
/// `lut[i] = quantize(cos(5 * arccos(dequantize(i))))` with
/// `dequantize(i) = (2i + 1)/256 - 1` (midpoints, so the fixed points at
/// exactly +-1 are never sampled) and
/// `quantize(v) = clamp(floor((v + 1)/2 * 256), 0, 255)`.
pub fn chebyshev_lut() -> &'static [u8; 256] {
    static LUT: OnceLock<[u8; 256]> = OnceLock::new();
    LUT.get_or_init(|| {
        let mut lut = [0u8; 256];
        for (i, slot) in lut.iter_mut().enumerate() {
            let u = (2.0 * i as f64 + 1.0) / 256.0 - 1.0;
            let v = (5.0 * u.acos()).cos();
            *slot = (((v + 1.0) / 2.0 * 256.0).floor()).clamp(0.0, 255.0) as u8;
        }
        lut
    })
}

/// Chebyshev map through the shared lookup table. A pure 256-state table
/// iteration is forced into a cycle of length <= 256, so each step XORs the
/// low counter byte into the output to break those cycles.
#[derive(Debug, Clone)]
pub struct ChebyshevState {
    x: u8,
    counter: u64,
}

impl ChebyshevState {
    pub fn new(x0: u8) -> Self {
        Self { x: x0, counter: 0 }
    }

    pub fn from_seed(seed: &[u8; 32]) -> Self {
        Self {
            x: seed[0],
            counter: u64::from(u16::from_le_bytes([seed[2], seed[3]])),
        }
    }

    pub fn x(&self) -> u8 {
        self.x
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl ChaoticMap for ChebyshevState {
    fn step(&mut self) -> u8 {
        self.x = chebyshev_lut()[usize::from(self.x)] ^ (self.counter as u8);
        self.counter += 1;
        self.x
    }
}

/// Tent map (mu = 2) discretized to bytes: doubling below the midpoint,
/// folded doubling above it, with the counter parity bit filling the low bit
/// the doubling would otherwise zero out. The same fixed-point escape rule as
/// the logistic map applies.
#[derive(Debug, Clone)]
pub struct TentState {
    x: u8,
    counter: u64,
}

impl TentState {
    pub fn new(x0: u8) -> Self {
        Self { x: x0, counter: 0 }
    }

    pub fn from_seed(seed: &[u8; 32]) -> Self {
        Self {
            x: if seed[0] == 0 { 1 } else { seed[0] },
            counter: u64::from(u16::from_le_bytes([seed[2], seed[3]])),
        }
    }

    pub fn x(&self) -> u8 {
        self.x
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl ChaoticMap for TentState {
    fn step(&mut self) -> u8 {
        let parity = (self.counter & 1) as u16;
        let raw = if self.x < 128 {
            2 * u16::from(self.x) + parity
        } else {
            2 * (255 - u16::from(self.x)) + parity
        };
        self.x = escape_fixed_point(raw as u8, self.x, self.counter);
        self.counter += 1;
        self.x
    }
}

/// Henon map with canonical parameters, iterated in double precision and
/// quantized to a byte on output. Orbits off the attractor basin escape to
/// infinity, so any step with |x'| > 10 resets to a counter-dependent point
/// near the origin instead.
#[derive(Debug, Clone)]
pub struct HenonState {
    x: f64,
    y: f64,
    counter: u64,
}

pub const HENON_A: f64 = 1.4;
pub const HENON_B: f64 = 0.3;
const HENON_BOUND: f64 = 10.0;

impl HenonState {
    pub fn new(x0: f64, y0: f64) -> Self {
        Self { x: x0, y: y0, counter: 0 }
    }

    pub fn from_seed(seed: &[u8; 32]) -> Self {
        Self {
            x: f64::from(seed[0]) / 255.0 - 0.5,
            y: f64::from(seed[1]) / 255.0 * 0.5 - 0.25,
            counter: u64::from(u16::from_le_bytes([seed[2], seed[3]])),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl ChaoticMap for HenonState {
    fn step(&mut self) -> u8 {
        let mut x_next = self.y + 1.0 - HENON_A * self.x * self.x;
        let mut y_next = HENON_B * self.x;
        if x_next.abs() > HENON_BOUND {
            x_next = ((self.counter * 37) % 256) as f64 / 256.0 - 0.5;
            y_next = 0.0;
        }
        self.x = x_next;
        self.y = y_next;
        self.counter += 1;
        (((self.x + 1.5) / 3.0 * 256.0).floor()).clamp(0.0, 255.0) as u8
    }
}

/// Iterates `burn_in` discarded steps, then collects `n_bytes` output bytes.
pub fn generate_stream<M: ChaoticMap>(map: &mut M, n_bytes: usize, burn_in: usize) -> Vec<u8> {
    for _ in 0..burn_in {
        map.step();
    }
    (0..n_bytes).map(|_| map.step()).collect()
}

/// Per-map 32-byte seeds, all derived from one passphrase.
#[derive(Clone, Zeroize, ZeroizeOnDrop)]
pub struct MapSeedSet {
    pub seed_logistic: [u8; 32],
    pub seed_chebyshev: [u8; 32],
    pub seed_tent: [u8; 32],
    pub seed_henon: [u8; 32],
}

impl MapSeedSet {
    /// Explicitly erase the seed material.
    pub fn wipe(&mut self) {
        self.zeroize();
    }
}

/// The 128-byte entropy pool `K1 || K2 || K3 || K4`.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct PreKey(pub(crate) [u8; 128]);

impl std::fmt::Debug for PreKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("PreKey(..)")
    }
}

impl PreKey {
    pub const LEN: usize = 128;

    pub fn from_bytes(bytes: &[u8]) -> crate::Result<Self> {
        let arr: [u8; 128] = bytes
            .try_into()
            .map_err(|_| crate::Error::invalid(format!("pre-key must be 128 bytes, got {}", bytes.len())))?;
        Ok(Self(arr))
    }

    pub fn as_bytes(&self) -> &[u8; 128] {
        &self.0
    }

    /// Segment `i` (0..4) as emitted by map `i`.
    pub fn segment(&self, i: usize) -> &[u8] {
        &self.0[i * SEGMENT_LEN..(i + 1) * SEGMENT_LEN]
    }

    pub fn wipe(&mut self) {
        self.zeroize();
    }
}

/// Runs each map for 100 burn-in steps plus 32 output bytes, in the fixed
/// order logistic, Chebyshev, tent, Henon, and concatenates the streams.
pub fn build_pre_key(seeds: &MapSeedSet) -> PreKey {
    let mut out = [0u8; 128];
    let segments: [Vec<u8>; 4] = [
        generate_stream(&mut LogisticState::from_seed(&seeds.seed_logistic), SEGMENT_LEN, BURN_IN),
        generate_stream(&mut ChebyshevState::from_seed(&seeds.seed_chebyshev), SEGMENT_LEN, BURN_IN),
        generate_stream(&mut TentState::from_seed(&seeds.seed_tent), SEGMENT_LEN, BURN_IN),
        generate_stream(&mut HenonState::from_seed(&seeds.seed_henon), SEGMENT_LEN, BURN_IN),
    ];
    for (i, seg) in segments.iter().enumerate() {
        out[i * SEGMENT_LEN..(i + 1) * SEGMENT_LEN].copy_from_slice(seg);
    }
    PreKey(out)
}
