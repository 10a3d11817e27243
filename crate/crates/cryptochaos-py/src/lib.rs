//! Python bindings for the CryptoChaos toolkit.
//!
//! Build the extension with `cargo build -p cryptochaos-py --release`; the
//! produced `libcryptochaos_py.so` imports as `cryptochaos_py` once renamed
//! onto the Python path (see `python/smoke_test.py`).

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict, PyList};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use cryptochaos::chaos::{
    build_pre_key, generate_stream, ChebyshevState, HenonState, LogisticState,
    TentState,
};
use cryptochaos::envelope;
use cryptochaos::grover::{self, GroverParams};
use cryptochaos::keyforge::{derive_seeds, Passphrase, PublicKey, RecipientKeypair};
use cryptochaos::metrics::{
    adjacent_correlation, histogram_uniformity, mse_psnr, npcr, shannon_entropy, uaci,
    ByteHistogram, ImageBuffer,
};
use cryptochaos::nist;
use cryptochaos::pgm;
use cryptochaos::Error;

create_exception!(
    cryptochaos_py,
    AuthenticationError,
    pyo3::exceptions::PyException,
    "Envelope failed to authenticate (wrong passphrase, wrong key, or tampering)."
);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::AuthenticationFailure | Error::NonContributory => {
            AuthenticationError::new_err(e.to_string())
        }
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn passphrase_from(bytes: &[u8]) -> PyResult<Passphrase> {
    Passphrase::new(bytes.to_vec()).map_err(to_py_err)
}

fn array32(name: &str, bytes: &[u8]) -> PyResult<[u8; 32]> {
    bytes
        .try_into()
        .map_err(|_| PyValueError::new_err(format!("{name} must be exactly 32 bytes, got {}", bytes.len())))
}

/// Generate a recipient keypair; returns `(secret_bytes, public_bytes)`.
#[pyfunction]
fn keygen(py: Python<'_>) -> PyResult<(Py<PyBytes>, Py<PyBytes>)> {
    let mut rng = ChaCha20Rng::from_entropy();
    let keypair = RecipientKeypair::generate(&mut rng).map_err(to_py_err)?;
    Ok((
        PyBytes::new_bound(py, &keypair.secret_bytes()).into(),
        PyBytes::new_bound(py, &keypair.public_bytes()).into(),
    ))
}

/// Public key for stored secret key bytes.
#[pyfunction]
fn public_key(py: Python<'_>, secret: &[u8]) -> PyResult<Py<PyBytes>> {
    let keypair = RecipientKeypair::from_secret_bytes(array32("secret", secret)?);
    Ok(PyBytes::new_bound(py, &keypair.public_bytes()).into())
}

/// Encrypt plaintext to a recipient public key under a shared passphrase;
/// returns the serialized envelope.
#[pyfunction]
fn encrypt(
    py: Python<'_>,
    passphrase: &[u8],
    recipient_public: &[u8],
    plaintext: &[u8],
) -> PyResult<Py<PyBytes>> {
    let passphrase = passphrase_from(passphrase)?;
    let public = PublicKey::from(array32("recipient_public", recipient_public)?);
    let mut rng = ChaCha20Rng::from_entropy();
    let sealed = envelope::encrypt(&passphrase, &public, plaintext, &mut rng).map_err(to_py_err)?;
    Ok(PyBytes::new_bound(py, &sealed).into())
}

/// Deterministic encryption with pinned ephemeral scalar, salt and nonce.
/// Test/benchmark use only: reusing a nonce voids the AEAD guarantees.
#[pyfunction]
fn encrypt_pinned(
    py: Python<'_>,
    passphrase: &[u8],
    recipient_public: &[u8],
    plaintext: &[u8],
    ephemeral_scalar: &[u8],
    salt: &[u8],
    nonce: &[u8],
) -> PyResult<Py<PyBytes>> {
    let passphrase = passphrase_from(passphrase)?;
    let public = PublicKey::from(array32("recipient_public", recipient_public)?);
    let nonce: [u8; 12] = nonce
        .try_into()
        .map_err(|_| PyValueError::new_err("nonce must be exactly 12 bytes"))?;
    let sealed = envelope::encrypt_pinned(
        &passphrase,
        &public,
        plaintext,
        array32("ephemeral_scalar", ephemeral_scalar)?,
        array32("salt", salt)?,
        nonce,
    )
    .map_err(to_py_err)?;
    Ok(PyBytes::new_bound(py, &sealed).into())
}

/// Decrypt a serialized envelope; requires both the recipient secret key and
/// the passphrase. Raises `AuthenticationError` when either is wrong.
#[pyfunction]
fn decrypt(
    py: Python<'_>,
    passphrase: &[u8],
    recipient_secret: &[u8],
    sealed: &[u8],
) -> PyResult<Py<PyBytes>> {
    let passphrase = passphrase_from(passphrase)?;
    let recipient = RecipientKeypair::from_secret_bytes(array32("recipient_secret", recipient_secret)?);
    let plaintext = envelope::decrypt(&passphrase, &recipient, sealed).map_err(to_py_err)?;
    Ok(PyBytes::new_bound(py, &plaintext).into())
}

/// The 128-byte chaotic pre-key derived from a passphrase.
#[pyfunction]
fn pre_key(py: Python<'_>, passphrase: &[u8]) -> PyResult<Py<PyBytes>> {
    let passphrase = passphrase_from(passphrase)?;
    let seeds = derive_seeds(&passphrase);
    let pre_key = build_pre_key(&seeds);
    Ok(PyBytes::new_bound(py, pre_key.as_bytes()).into())
}

/// Raw chaotic byte stream from one map family seeded by a 32-byte seed.
/// `map_name` is one of "logistic", "chebyshev", "tent", "henon".
#[pyfunction]
#[pyo3(signature = (map_name, seed, n_bytes, burn_in = 100))]
fn chaos_stream(
    py: Python<'_>,
    map_name: &str,
    seed: &[u8],
    n_bytes: usize,
    burn_in: usize,
) -> PyResult<Py<PyBytes>> {
    let seed = array32("seed", seed)?;
    let stream = match map_name {
        "logistic" => generate_stream(&mut LogisticState::from_seed(&seed), n_bytes, burn_in),
        "chebyshev" => generate_stream(&mut ChebyshevState::from_seed(&seed), n_bytes, burn_in),
        "tent" => generate_stream(&mut TentState::from_seed(&seed), n_bytes, burn_in),
        "henon" => generate_stream(&mut HenonState::from_seed(&seed), n_bytes, burn_in),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown map {other:?}; expected logistic|chebyshev|tent|henon"
            )))
        }
    };
    Ok(PyBytes::new_bound(py, &stream).into())
}

/// Seeded synthetic grayscale image, serialized as binary PGM.
#[pyfunction]
#[pyo3(signature = (seed = 0, width = 512, height = 512))]
fn synth_image_pgm(py: Python<'_>, seed: u64, width: usize, height: usize) -> PyResult<Py<PyBytes>> {
    let image = pgm::synthetic_image(seed, width, height).map_err(to_py_err)?;
    Ok(PyBytes::new_bound(py, &pgm::write_pgm(&image)).into())
}

/// Entropy, adjacent correlation and histogram uniformity of a byte string.
/// Constant input reports `adjacent_correlation = None`.
#[pyfunction]
fn analyze(py: Python<'_>, data: &[u8]) -> PyResult<Py<PyDict>> {
    if data.len() < 3 {
        return Err(PyValueError::new_err("analyze needs at least 3 bytes"));
    }
    let hist = ByteHistogram::from_bytes(data);
    let out = PyDict::new_bound(py);
    out.set_item("bytes", data.len())?;
    out.set_item("entropy_bits_per_byte", shannon_entropy(&hist).map_err(to_py_err)?)?;
    out.set_item("histogram_uniformity", histogram_uniformity(&hist).map_err(to_py_err)?)?;
    match adjacent_correlation(data) {
        Ok(v) => out.set_item("adjacent_correlation", v)?,
        Err(Error::ZeroVariance) => out.set_item("adjacent_correlation", py.None())?,
        Err(e) => return Err(to_py_err(e)),
    }
    Ok(out.into())
}

/// NPCR/UACI/MSE/PSNR between two equal-length byte strings.
#[pyfunction]
fn analyze_pair(py: Python<'_>, a: &[u8], b: &[u8]) -> PyResult<Py<PyDict>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(PyValueError::new_err("inputs must be non-empty and equal length"));
    }
    let ia = ImageBuffer::new(a.len(), 1, a.to_vec()).map_err(to_py_err)?;
    let ib = ImageBuffer::new(b.len(), 1, b.to_vec()).map_err(to_py_err)?;
    let (mse, psnr) = mse_psnr(&ia, &ib).map_err(to_py_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("npcr_percent", npcr(&ia, &ib).map_err(to_py_err)?)?;
    out.set_item("uaci_percent", uaci(&ia, &ib).map_err(to_py_err)?)?;
    out.set_item("mse", mse)?;
    out.set_item("psnr_db", psnr)?;
    Ok(out.into())
}

/// Run the seven-test statistical suite over a byte string.
#[pyfunction]
fn nist_suite(py: Python<'_>, data: &[u8]) -> PyResult<Py<PyDict>> {
    let report = nist::run_suite(data).map_err(to_py_err)?;
    let results = PyList::empty_bound(py);
    for r in &report.results {
        let item = PyDict::new_bound(py);
        item.set_item("test_name", &r.test_name)?;
        item.set_item("p_values", r.p_values.clone())?;
        item.set_item("passed", r.passed)?;
        item.set_item("parameters", r.parameters.clone())?;
        results.append(item)?;
    }
    let out = PyDict::new_bound(py);
    out.set_item("results", results)?;
    out.set_item("passed", report.passed)?;
    out.set_item("total", report.total)?;
    Ok(out.into())
}

/// Grover cost model: exact iteration and T-gate counts as Python ints.
#[pyfunction]
#[pyo3(signature = (key_bits = 256, t_per_oracle = 2_100_000_000, overhead = 1.0))]
fn grover_estimate(py: Python<'_>, key_bits: u32, t_per_oracle: u64, overhead: f64) -> PyResult<Py<PyDict>> {
    let estimate = grover::estimate(&GroverParams {
        key_bits,
        t_per_oracle,
        error_correction_overhead: overhead,
    })
    .map_err(to_py_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("iterations", BigUint::from(estimate.iterations))?;
    out.set_item("effective_keyspace_bits", estimate.effective_keyspace_bits)?;
    out.set_item("total_t_gates", BigUint::from(estimate.total_t_gates))?;
    Ok(out.into())
}

/// The published quantum-resource table (stored constants, not model output).
#[pyfunction]
fn grover_reference_table(py: Python<'_>) -> PyResult<Py<PyList>> {
    let rows = PyList::empty_bound(py);
    for row in grover::paper_reference_table() {
        let item = PyDict::new_bound(py);
        item.set_item("algorithm", row.algorithm)?;
        item.set_item("t_gate_count", row.t_gate_count)?;
        item.set_item("grover_speedup_estimate", row.grover_speedup_estimate)?;
        rows.append(item)?;
    }
    Ok(rows.into())
}

#[pymodule]
fn cryptochaos_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(keygen, m)?)?;
    m.add_function(wrap_pyfunction!(public_key, m)?)?;
    m.add_function(wrap_pyfunction!(encrypt, m)?)?;
    m.add_function(wrap_pyfunction!(encrypt_pinned, m)?)?;
    m.add_function(wrap_pyfunction!(decrypt, m)?)?;
    m.add_function(wrap_pyfunction!(pre_key, m)?)?;
    m.add_function(wrap_pyfunction!(chaos_stream, m)?)?;
    m.add_function(wrap_pyfunction!(synth_image_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_pair, m)?)?;
    m.add_function(wrap_pyfunction!(nist_suite, m)?)?;
    m.add_function(wrap_pyfunction!(grover_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(grover_reference_table, m)?)?;
    m.add("AuthenticationError", m.py().get_type_bound::<AuthenticationError>())?;
    Ok(())
}
