//! Layered key derivation: passphrase -> map seeds -> pre-key -> SHA3-256
//! chaos key -> X25519 shared secret -> Blake3 compression -> HKDF-SHA256
//! final key.
//!
//! The exchange is ephemeral-static: the recipient holds a long-term X25519
//! keypair, the sender generates a fresh ephemeral pair per encryption and
//! ships the ephemeral public key inside the envelope. Recovering the final
//! key therefore requires both the recipient secret key and the shared
//! passphrase.

use hkdf::Hkdf;
use rand::{CryptoRng, RngCore};
use sha2::Sha256;
use sha3::{Digest, Sha3_256};
pub use x25519_dalek::PublicKey;
use x25519_dalek::StaticSecret;
use zeroize::{Zeroize, ZeroizeOnDrop};

use crate::chaos::{build_pre_key, MapSeedSet, PreKey};
use crate::error::{Error, Result};

/// HKDF info string; bump alongside the envelope version byte.
pub const KDF_INFO: &[u8] = b"CryptoChaos-v1-AES256GCM";

/// Domain-separation ids for the per-map seed derivation.
const MAP_IDS: [u8; 4] = [0x01, 0x02, 0x03, 0x04];

/// Secret-bearing types never render their contents.
macro_rules! redacted_debug {
    ($ty:ty) => {
        impl std::fmt::Debug for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(concat!(stringify!($ty), "(..)"))
            }
        }
    };
}

/// Non-empty UTF-8 passphrase bytes.
#[derive(Clone, Zeroize, ZeroizeOnDrop)]
pub struct Passphrase(Vec<u8>);

redacted_debug!(Passphrase);

impl Passphrase {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(Error::invalid("passphrase must be non-empty"));
        }
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn wipe(&mut self) {
        self.zeroize();
    }
}

/// 256-bit intermediate key hashed out of the pre-key.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct ChaosKey(pub(crate) [u8; 32]);

redacted_debug!(ChaosKey);

impl ChaosKey {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn wipe(&mut self) {
        self.zeroize();
    }
}

/// X25519 output of the ephemeral-static exchange.
#[derive(Clone, Zeroize, ZeroizeOnDrop)]
pub struct SharedSecret(pub(crate) [u8; 32]);

redacted_debug!(SharedSecret);

impl SharedSecret {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn wipe(&mut self) {
        self.zeroize();
    }
}

/// 256-bit AES-GCM key at the end of the chain.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct FinalKey(pub(crate) [u8; 32]);

redacted_debug!(FinalKey);

impl FinalKey {
    pub fn from_bytes(bytes: [u8; 32]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn wipe(&mut self) {
        self.zeroize();
    }
}

/// Long-term recipient keypair. The secret scalar is stored clamped.
pub struct RecipientKeypair {
    secret: StaticSecret,
    public: PublicKey,
}

/// X25519 scalar clamp per RFC 7748.
pub(crate) fn clamp(mut scalar: [u8; 32]) -> [u8; 32] {
    scalar[0] &= 248;
    scalar[31] &= 127;
    scalar[31] |= 64;
    scalar
}

/// Builds a sender-side ephemeral secret from explicit scalar bytes.
/// Random in production; pinned by tests and the deterministic encrypt path.
pub fn ephemeral_from_bytes(scalar: [u8; 32]) -> StaticSecret {
    StaticSecret::from(clamp(scalar))
}

impl RecipientKeypair {
    /// Generates a fresh keypair from a cryptographically secure source.
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Result<Self> {
        let mut scalar = [0u8; 32];
        rng.try_fill_bytes(&mut scalar)
            .map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
        Ok(Self::from_secret_bytes(scalar))
    }

    /// Rebuilds the pair from stored secret bytes (clamping is idempotent).
    pub fn from_secret_bytes(scalar: [u8; 32]) -> Self {
        let secret = StaticSecret::from(clamp(scalar));
        let public = PublicKey::from(&secret);
        Self { secret, public }
    }

    pub fn secret_bytes(&self) -> [u8; 32] {
        self.secret.to_bytes()
    }

    pub fn public_bytes(&self) -> [u8; 32] {
        *self.public.as_bytes()
    }

    pub fn secret(&self) -> &StaticSecret {
        &self.secret
    }
}

/// Derives the four 32-byte map seeds: `SHA3-256(passphrase || 0x00 || id)`
/// with ids 0x01..0x04 for logistic, Chebyshev, tent and Henon.
pub fn derive_seeds(passphrase: &Passphrase) -> MapSeedSet {
    let seed_for = |id: u8| -> [u8; 32] {
        let mut h = Sha3_256::new();
        h.update(passphrase.as_bytes());
        h.update([0x00, id]);
        h.finalize().into()
    };
    MapSeedSet {
        seed_logistic: seed_for(MAP_IDS[0]),
        seed_chebyshev: seed_for(MAP_IDS[1]),
        seed_tent: seed_for(MAP_IDS[2]),
        seed_henon: seed_for(MAP_IDS[3]),
    }
}

/// `K_chaos = SHA3-256(pre-key)`.
pub fn derive_chaos_key(pre_key: &PreKey) -> ChaosKey {
    let digest = Sha3_256::digest(pre_key.as_bytes());
    ChaosKey(digest.into())
}

/// Full passphrase-side derivation in one call.
pub fn chaos_key_for_passphrase(passphrase: &Passphrase) -> ChaosKey {
    let seeds = derive_seeds(passphrase);
    let mut pre_key = build_pre_key(&seeds);
    let key = derive_chaos_key(&pre_key);
    pre_key.wipe();
    key
}

/// X25519 agreement; low-order peer points surface as the all-zero output
/// and are rejected.
pub fn agree(secret: &StaticSecret, peer_public: &PublicKey) -> Result<SharedSecret> {
    let shared = secret.diffie_hellman(peer_public);
    let bytes = *shared.as_bytes();
    if bytes == [0u8; 32] {
        return Err(Error::NonContributory);
    }
    Ok(SharedSecret(bytes))
}

/// `K_final = HKDF-SHA256(ikm = Blake3-256(S) || K_chaos, salt, info)`.
pub fn derive_final_key(shared: &SharedSecret, chaos: &ChaosKey, salt: &[u8; 32]) -> FinalKey {
    let compressed = blake3::hash(shared.as_bytes());
    let mut ikm = [0u8; 64];
    ikm[..32].copy_from_slice(compressed.as_bytes());
    ikm[32..].copy_from_slice(chaos.as_bytes());

    let hk = Hkdf::<Sha256>::new(Some(salt), &ikm);
    let mut okm = [0u8; 32];
    hk.expand(KDF_INFO, &mut okm)
        .expect("32-byte output is always valid for HKDF-SHA256");
    ikm.zeroize();
    FinalKey(okm)
}

/// Key-file helpers: secret keys are 32 raw bytes with owner-only
/// permissions, public keys are 64 lowercase hex characters plus a newline.
pub mod keyfiles {
    use std::fs;
    use std::path::Path;

    use super::*;

    pub fn write_secret_key(path: &Path, keypair: &RecipientKeypair) -> Result<()> {
        #[cfg(unix)]
        {
            use std::io::Write;
            use std::os::unix::fs::OpenOptionsExt;
            let mut f = fs::OpenOptions::new()
                .write(true)
                .create(true)
                .truncate(true)
                .mode(0o600)
                .open(path)?;
            f.write_all(&keypair.secret_bytes())?;
        }
        #[cfg(not(unix))]
        fs::write(path, keypair.secret_bytes())?;
        Ok(())
    }

    pub fn write_public_key(path: &Path, keypair: &RecipientKeypair) -> Result<()> {
        let mut line = hex::encode(keypair.public_bytes());
        line.push('\n');
        fs::write(path, line)?;
        Ok(())
    }

    pub fn read_secret_key(path: &Path) -> Result<RecipientKeypair> {
        let bytes = fs::read(path)?;
        let scalar: [u8; 32] = bytes
            .as_slice()
            .try_into()
            .map_err(|_| Error::invalid(format!("secret key file must hold exactly 32 bytes, got {}", bytes.len())))?;
        Ok(RecipientKeypair::from_secret_bytes(scalar))
    }

    pub fn read_public_key(path: &Path) -> Result<PublicKey> {
        let text = fs::read_to_string(path)?;
        let trimmed = text.trim_end();
        let bytes = hex::decode(trimmed)
            .map_err(|e| Error::invalid(format!("public key file is not valid hex: {e}")))?;
        let arr: [u8; 32] = bytes
            .as_slice()
            .try_into()
            .map_err(|_| Error::invalid("public key must be 64 hex characters"))?;
        Ok(PublicKey::from(arr))
    }
}
