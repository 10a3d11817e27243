//! AES-256-GCM sealing and the bit-exact ciphertext container.
//!
//! Wire layout, all multi-byte integers big-endian:
//!
//! ```text
//! magic "CCH1" | version 0x01 | ephemeral_public 32 | salt 32 | nonce 12
//! | ct_len u64 | ciphertext ct_len | tag 16
//! ```
//!
//! The header fields `magic || version || ephemeral_public || salt` ride as
//! associated data, so header tampering fails authentication just like
//! ciphertext tampering. Files carrying this layout use the `.cch` extension.

use aes_gcm::aead::{Aead, Payload};
use aes_gcm::{Aes256Gcm, Key, KeyInit, Nonce};
use rand::{CryptoRng, RngCore};
use x25519_dalek::{PublicKey, StaticSecret};

use crate::error::{Error, ParseFault, Result};
use crate::keyforge::{
    agree, chaos_key_for_passphrase, derive_final_key, ephemeral_from_bytes, FinalKey, Passphrase,
    RecipientKeypair,
};

pub const MAGIC: [u8; 4] = *b"CCH1";
pub const VERSION: u8 = 0x01;
pub const NONCE_LEN: usize = 12;
pub const TAG_LEN: usize = 16;
/// Bytes before the ciphertext plus the trailing tag.
pub const OVERHEAD: usize = 4 + 1 + 32 + 32 + NONCE_LEN + 8 + TAG_LEN;

/// Parsed ciphertext container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub ephemeral_public: [u8; 32],
    pub salt: [u8; 32],
    pub nonce: [u8; NONCE_LEN],
    pub ciphertext: Vec<u8>,
    pub tag: [u8; TAG_LEN],
}

impl Envelope {
    /// Header bytes bound as associated data.
    fn associated_data(&self) -> [u8; 69] {
        let mut aad = [0u8; 69];
        aad[..4].copy_from_slice(&MAGIC);
        aad[4] = VERSION;
        aad[5..37].copy_from_slice(&self.ephemeral_public);
        aad[37..69].copy_from_slice(&self.salt);
        aad
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(OVERHEAD + self.ciphertext.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&self.ephemeral_public);
        out.extend_from_slice(&self.salt);
        out.extend_from_slice(&self.nonce);
        out.extend_from_slice(&(self.ciphertext.len() as u64).to_be_bytes());
        out.extend_from_slice(&self.ciphertext);
        out.extend_from_slice(&self.tag);
        out
    }

    /// Strict parse: magic and version must match, and the total length must
    /// equal the header-declared size exactly (no trailing bytes).
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < OVERHEAD {
            return Err(ParseFault::Truncated { expected: OVERHEAD, actual: bytes.len() }.into());
        }
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(ParseFault::BadMagic { found: magic }.into());
        }
        if bytes[4] != VERSION {
            return Err(ParseFault::UnsupportedVersion(bytes[4]).into());
        }
        let ephemeral_public: [u8; 32] = bytes[5..37].try_into().unwrap();
        let salt: [u8; 32] = bytes[37..69].try_into().unwrap();
        let nonce: [u8; NONCE_LEN] = bytes[69..81].try_into().unwrap();
        let ct_len = u64::from_be_bytes(bytes[81..89].try_into().unwrap());
        let body = &bytes[89..];
        let actual_ct = body.len() - TAG_LEN;
        if ct_len != actual_ct as u64 {
            return Err(ParseFault::LengthMismatch { declared: ct_len, actual: actual_ct }.into());
        }
        let ciphertext = body[..actual_ct].to_vec();
        let tag: [u8; TAG_LEN] = body[actual_ct..].try_into().unwrap();
        Ok(Self { ephemeral_public, salt, nonce, ciphertext, tag })
    }
}

/// Raw AES-256-GCM with detached tag; the seal/open pair below routes
/// through here so published GCM vectors can pin this exact code path.
pub(crate) fn aead_encrypt(
    key: &FinalKey,
    nonce: &[u8; NONCE_LEN],
    aad: &[u8],
    plaintext: &[u8],
) -> (Vec<u8>, [u8; TAG_LEN]) {
    let cipher = Aes256Gcm::new(Key::<Aes256Gcm>::from_slice(key.as_bytes()));
    let mut combined = cipher
        .encrypt(Nonce::from_slice(nonce), Payload { msg: plaintext, aad })
        .expect("AES-GCM encryption is infallible for in-memory buffers");
    let tag_start = combined.len() - TAG_LEN;
    let tag: [u8; TAG_LEN] = combined[tag_start..].try_into().unwrap();
    combined.truncate(tag_start);
    (combined, tag)
}

pub(crate) fn aead_decrypt(
    key: &FinalKey,
    nonce: &[u8; NONCE_LEN],
    aad: &[u8],
    ciphertext: &[u8],
    tag: &[u8; TAG_LEN],
) -> Result<Vec<u8>> {
    let cipher = Aes256Gcm::new(Key::<Aes256Gcm>::from_slice(key.as_bytes()));
    let mut combined = Vec::with_capacity(ciphertext.len() + TAG_LEN);
    combined.extend_from_slice(ciphertext);
    combined.extend_from_slice(tag);
    cipher
        .decrypt(Nonce::from_slice(nonce), Payload { msg: &combined, aad })
        .map_err(|_| Error::AuthenticationFailure)
}

/// Seals a plaintext under `key` with a fresh random 96-bit nonce.
pub fn seal<R: RngCore + CryptoRng>(
    key: &FinalKey,
    ephemeral_public: [u8; 32],
    salt: [u8; 32],
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Envelope> {
    let mut nonce = [0u8; NONCE_LEN];
    rng.try_fill_bytes(&mut nonce)
        .map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
    Ok(seal_with_nonce(key, ephemeral_public, salt, nonce, plaintext))
}

/// Deterministic seal with a caller-supplied nonce. Reusing a nonce under one
/// key voids GCM's guarantees; this exists for tests, benchmarks and the
/// seeded CLI mode, which pin nonces to make outputs reproducible.
pub fn seal_with_nonce(
    key: &FinalKey,
    ephemeral_public: [u8; 32],
    salt: [u8; 32],
    nonce: [u8; NONCE_LEN],
    plaintext: &[u8],
) -> Envelope {
    let mut envelope = Envelope {
        ephemeral_public,
        salt,
        nonce,
        ciphertext: Vec::new(),
        tag: [0u8; TAG_LEN],
    };
    let aad = envelope.associated_data();
    let (ciphertext, tag) = aead_encrypt(key, &nonce, &aad, plaintext);
    envelope.ciphertext = ciphertext;
    envelope.tag = tag;
    envelope
}

/// Verifies the tag over (associated data, nonce, ciphertext) and returns the
/// plaintext only on success.
pub fn open(key: &FinalKey, envelope: &Envelope) -> Result<Vec<u8>> {
    let aad = envelope.associated_data();
    aead_decrypt(key, &envelope.nonce, &aad, &envelope.ciphertext, &envelope.tag)
}

/// Full-pipeline encryption: chaos key from the passphrase, fresh ephemeral
/// X25519 exchange against the recipient public key, HKDF combine, GCM seal.
/// Returns the serialized envelope.
pub fn encrypt<R: RngCore + CryptoRng>(
    passphrase: &Passphrase,
    recipient_public: &PublicKey,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Vec<u8>> {
    let mut scalar = [0u8; 32];
    rng.try_fill_bytes(&mut scalar)
        .map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
    let mut salt = [0u8; 32];
    rng.try_fill_bytes(&mut salt)
        .map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
    let mut nonce = [0u8; NONCE_LEN];
    rng.try_fill_bytes(&mut nonce)
        .map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
    encrypt_pinned(passphrase, recipient_public, plaintext, scalar, salt, nonce)
}

/// Deterministic variant of [`encrypt`] with pinned ephemeral scalar, salt
/// and nonce. Production callers should prefer [`encrypt`].
pub fn encrypt_pinned(
    passphrase: &Passphrase,
    recipient_public: &PublicKey,
    plaintext: &[u8],
    ephemeral_scalar: [u8; 32],
    salt: [u8; 32],
    nonce: [u8; NONCE_LEN],
) -> Result<Vec<u8>> {
    let ephemeral: StaticSecret = ephemeral_from_bytes(ephemeral_scalar);
    let ephemeral_public = PublicKey::from(&ephemeral);
    let shared = agree(&ephemeral, recipient_public)?;
    let mut chaos = chaos_key_for_passphrase(passphrase);
    let mut key = derive_final_key(&shared, &chaos, &salt);
    chaos.wipe();
    let envelope = seal_with_nonce(&key, *ephemeral_public.as_bytes(), salt, nonce, plaintext);
    key.wipe();
    Ok(envelope.serialize())
}

/// Full-pipeline decryption. Requires both the correct recipient secret key
/// and the correct passphrase; either being wrong yields the same
/// authentication failure.
pub fn decrypt(
    passphrase: &Passphrase,
    recipient: &RecipientKeypair,
    serialized: &[u8],
) -> Result<Vec<u8>> {
    let envelope = Envelope::parse(serialized)?;
    let shared = agree(recipient.secret(), &PublicKey::from(envelope.ephemeral_public))?;
    let mut chaos = chaos_key_for_passphrase(passphrase);
    let mut key = derive_final_key(&shared, &chaos, &envelope.salt);
    chaos.wipe();
    let result = open(&key, &envelope);
    key.wipe();
    result
}
