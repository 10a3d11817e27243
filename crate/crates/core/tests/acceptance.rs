//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; a failed assertion fails the criterion.

use std::time::Instant;

use cryptochaos::bench::{AdapterKind, BenchConfig, Workload};
use cryptochaos::chaos::{
    chebyshev_lut, generate_stream, ChaoticMap, HenonState, LogisticState, R_FIXED_MAX,
    R_FIXED_MIN,
};
use cryptochaos::envelope;
use cryptochaos::error::Error;
use cryptochaos::grover::{estimate, paper_reference_table, GroverParams};
use cryptochaos::keyforge::{
    derive_seeds, keyfiles, FinalKey, Passphrase, RecipientKeypair,
};
use cryptochaos::metrics::{
    adjacent_correlation, histogram_uniformity, mse_psnr, npcr, shannon_entropy, uaci,
    ByteHistogram, ImageBuffer,
};
use cryptochaos::nist;
use cryptochaos::pgm::synthetic_image;
use cryptochaos::{bench, chaos};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use x25519_dalek::PublicKey;

fn pass(criterion: &str) {
    println!("[acceptance] {criterion}: PASS");
}

fn pw(s: &str) -> Passphrase {
    Passphrase::new(s.as_bytes().to_vec()).unwrap()
}

/// The seeded benchmark workload shared by criteria 2-5.
fn benchmark_image() -> ImageBuffer {
    synthetic_image(0, 512, 512).unwrap()
}

/// Deterministic full-pipeline ciphertext body of the benchmark image.
fn benchmark_ciphertext(lane: u64) -> Vec<u8> {
    let adapter = bench::CryptoChaosAdapter::new(0);
    use bench::CipherAdapter;
    adapter
        .encrypt_stream_pinned(benchmark_image().pixels(), lane)
        .unwrap()
}

#[test]
fn criterion_01_round_trip_and_tamper_rejection() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let recipient = RecipientKeypair::generate(&mut rng).unwrap();
    let recipient_public = PublicKey::from(recipient.public_bytes());
    let passphrase = pw("acceptance criterion one");

    // 1000 random plaintexts across the required length mix.
    let lengths = [0usize, 1, 17, 4096, 1 << 20];
    for i in 0..1000 {
        let len = lengths[i % lengths.len()];
        let mut plaintext = vec![0u8; len];
        rng.fill_bytes(&mut plaintext);
        let sealed = envelope::encrypt(&passphrase, &recipient_public, &plaintext, &mut rng)
            .unwrap();
        let opened = envelope::decrypt(&passphrase, &recipient, &sealed).unwrap();
        assert_eq!(opened, plaintext, "round trip failed at message {i} (len {len})");
    }

    // Single-bit tampering over every bit position of a 1 KiB envelope.
    let key = FinalKey::from_bytes([0x42; 32]);
    let body_len = 1024 - envelope::OVERHEAD;
    let mut plaintext = vec![0u8; body_len];
    rng.fill_bytes(&mut plaintext);
    let env = envelope::seal_with_nonce(&key, [5; 32], [6; 32], [7; 12], &plaintext);
    let sealed = env.serialize();
    assert_eq!(sealed.len(), 1024);
    for byte_idx in 0..sealed.len() {
        for bit in 0..8 {
            let mut tampered = sealed.clone();
            tampered[byte_idx] ^= 1 << bit;
            let outcome = envelope::Envelope::parse(&tampered).and_then(|e| envelope::open(&key, &e));
            assert!(outcome.is_err(), "tampered bit accepted at byte {byte_idx} bit {bit}");
            let structural = byte_idx < 5 || (81..89).contains(&byte_idx);
            if !structural {
                assert!(
                    matches!(outcome, Err(Error::AuthenticationFailure)),
                    "byte {byte_idx} bit {bit}: expected authentication failure"
                );
            }
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 1 took {elapsed:.1}s, budget 60s");
    pass("criterion 1 (round-trip + tamper rejection)");
}

#[test]
fn criterion_02_ciphertext_entropy() {
    let start = Instant::now();
    let ciphertext = benchmark_ciphertext(0);
    let entropy = shannon_entropy(&ByteHistogram::from_bytes(&ciphertext)).unwrap();
    assert!(entropy >= 7.995, "ciphertext entropy {entropy:.5} < 7.995");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "criterion 2 took {elapsed:.2}s, budget 5s");
    pass(&format!("criterion 2 (entropy {entropy:.5} >= 7.995)"));
}

#[test]
fn criterion_03_adjacent_correlation() {
    let ciphertext = benchmark_ciphertext(0);
    let r = adjacent_correlation(&ciphertext).unwrap();
    assert!(r.abs() <= 0.01, "|adjacent correlation| = {} > 0.01", r.abs());
    pass(&format!("criterion 3 (|r| = {:.5} <= 0.01)", r.abs()));
}

#[test]
fn criterion_04_diffusion_metrics() {
    let image = benchmark_image();
    let c1 = benchmark_ciphertext(0);

    // One-pixel-change protocol: bump the center pixel, re-encrypt with the
    // pinned key/salt on the second nonce lane.
    let adapter = bench::CryptoChaosAdapter::new(0);
    use bench::CipherAdapter;
    let bumped = image.with_center_pixel_bumped();
    let c2 = adapter.encrypt_stream_pinned(bumped.pixels(), 1).unwrap();

    let c1_img = ImageBuffer::new(512, 512, c1.clone()).unwrap();
    let c2_img = ImageBuffer::new(512, 512, c2).unwrap();
    let npcr_value = npcr(&c1_img, &c2_img).unwrap();
    let uaci_value = uaci(&c1_img, &c2_img).unwrap();
    assert!(
        (99.5..=99.7).contains(&npcr_value),
        "NPCR {npcr_value:.4} outside [99.5, 99.7]"
    );
    assert!(
        (33.0..=34.5).contains(&uaci_value),
        "UACI {uaci_value:.4} outside [33.0, 34.5]"
    );

    let (mse, psnr) = mse_psnr(&image, &c1_img).unwrap();
    assert!(psnr < 10.0, "plaintext-vs-ciphertext PSNR {psnr:.2} dB >= 10");
    assert!(mse > 9000.0, "plaintext-vs-ciphertext MSE {mse:.1} <= 9000");
    pass(&format!(
        "criterion 4 (NPCR {npcr_value:.4}%, UACI {uaci_value:.4}%, MSE {mse:.1}, PSNR {psnr:.2} dB)"
    ));
}

#[test]
fn criterion_05_nist_calibration_and_benchmark() {
    let start = Instant::now();

    // 100 seeded CSPRNG sequences of 10^6 bits: per-test rejection <= 4%.
    let mut rejections = std::collections::BTreeMap::<String, u32>::new();
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut data = vec![0u8; 125_000];
        rng.fill_bytes(&mut data);
        let report = nist::run_suite(&data).unwrap();
        for result in &report.results {
            if !result.passed {
                *rejections.entry(result.test_name.clone()).or_default() += 1;
            }
        }
    }
    for (test, count) in &rejections {
        assert!(*count <= 4, "{test} rejected {count}/100 sequences (> 4%)");
    }

    // All-zero input fails all seven.
    let zeros = nist::run_suite(&vec![0u8; 125_000]).unwrap();
    assert_eq!(zeros.passed, 0, "all-zero input passed {} tests", zeros.passed);

    // The benchmark-image ciphertext passes at least 5/7.
    let report = nist::run_suite(&benchmark_ciphertext(0)).unwrap();
    assert!(report.passed >= 5, "ciphertext passed only {}/7", report.passed);

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "criterion 5 took {elapsed:.0}s, budget 600s");
    pass(&format!(
        "criterion 5 (calibration rejections {:?}, ciphertext {}/7)",
        rejections, report.passed
    ));
}

#[test]
fn criterion_06_nist_worked_values() {
    let monobit = nist::monobit(&nist::BitSequence::from_str_bits("1011010101").unwrap()).unwrap();
    assert!((monobit.p_values[0] - 0.527089).abs() <= 1e-6);

    let blockfreq = nist::block_frequency(
        &nist::BitSequence::from_str_bits("0110011010").unwrap(),
        Some(3),
    )
    .unwrap();
    assert!((blockfreq.p_values[0] - 0.801252).abs() <= 1e-6);

    let runs = nist::runs(&nist::BitSequence::from_str_bits("1001101011").unwrap()).unwrap();
    assert!((runs.p_values[0] - 0.147232).abs() <= 1e-6);

    // Longest-run pi table for n = 128 equals the exhaustive enumeration of
    // longest-run-of-ones over all 256 byte blocks.
    let cfg = nist::LongestRunConfig::for_length(128).unwrap();
    let mut counts = [0u32; 4];
    for byte in 0..=255u8 {
        let mut longest = 0u32;
        let mut run = 0u32;
        for shift in (0..8).rev() {
            if (byte >> shift) & 1 == 1 {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 0;
            }
        }
        counts[(longest.saturating_sub(1) as usize).min(3)] += 1;
    }
    for (i, &count) in counts.iter().enumerate() {
        assert_eq!(cfg.pi[i], count as f64 / 256.0, "pi[{i}]");
    }
    pass("criterion 6 (worked p-values and exact longest-run pi table)");
}

#[test]
fn criterion_07_chaos_core_oracles() {
    let start = Instant::now();

    // Logistic step vs wide-integer brute force on all 256 x 110 pairs.
    for r in R_FIXED_MIN..=R_FIXED_MAX {
        for x in 0..=255u8 {
            let mut state = LogisticState::new(x, r).unwrap();
            let got = state.step();
            let wide = (r as u128) * (x as u128) * (256 - x as u128);
            let mut expected = ((wide / 256) % 256) as u8;
            if expected == x {
                expected = ((expected as u16 + 158) % 256) as u8;
            }
            assert_eq!(got, expected, "logistic x={x} r={r}");
        }
    }

    // Chebyshev LUT vs the closed-form T5 polynomial on all 256 entries.
    for i in 0..256usize {
        let u = (2.0 * i as f64 + 1.0) / 256.0 - 1.0;
        let poly = 16.0 * u.powi(5) - 20.0 * u.powi(3) + 5.0 * u;
        let expected = (((poly + 1.0) / 2.0 * 256.0).floor()).clamp(0.0, 255.0) as u8;
        assert_eq!(chebyshev_lut()[i], expected, "lut[{i}]");
    }

    // Henon guarded orbits: 10^6 steps x 100 random seeds stay bounded.
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for trial in 0..100 {
        let mut seed = [0u8; 32];
        rng.fill_bytes(&mut seed);
        let mut state = HenonState::from_seed(&seed);
        for step in 0..1_000_000u32 {
            state.step();
            assert!(
                state.x().abs() <= 10.0 && state.y().abs() <= 10.0,
                "trial {trial} step {step}: orbit escaped"
            );
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "criterion 7 took {elapsed:.1}s, budget 30s");
    pass("criterion 7 (logistic oracle, LUT oracle, Henon boundedness)");
}

#[test]
fn criterion_08_grover_model() {
    let e256 = estimate(&GroverParams { key_bits: 256, t_per_oracle: 1, error_correction_overhead: 1.0 })
        .unwrap();
    assert_eq!(e256.effective_keyspace_bits, 128.0);

    let table = paper_reference_table();
    assert_eq!(table.len(), 5);
    let expected = [
        ("CryptoChaos", 2.10e9, 3.09e37),
        ("AES-GCM", 1.78e9, 3.09e37),
        ("ChaCha20", 1.45e9, 3.09e37),
        ("Blowfish", 0.95e9, 1.68e18),
        ("CAST5", 0.89e9, 1.68e18),
    ];
    for (row, (name, t, speedup)) in table.iter().zip(expected) {
        assert_eq!(row.algorithm, name);
        assert_eq!(row.t_gate_count, t);
        assert_eq!(row.grover_speedup_estimate, speedup);
    }

    // Monotone over the sweep.
    let mut last = None;
    for k in [64u32, 128, 192, 256] {
        let e = estimate(&GroverParams { key_bits: k, t_per_oracle: 3, error_correction_overhead: 1.5 })
            .unwrap();
        if let Some(prev) = last {
            assert!(e.total_t_gates > prev, "not monotone at k={k}");
        }
        last = Some(e.total_t_gates);
    }
    pass("criterion 8 (Grover model, reference table, monotone sweep)");
}

#[test]
fn criterion_09_performance_ordering() {
    let cfg = BenchConfig {
        runs: 15,
        warmup: 3,
        seed: 0,
        workload: Workload::Synthetic { seed: 0, width: 512, height: 512 },
        adapters: vec![AdapterKind::CryptoChaos, AdapterKind::AesGcm],
    };
    let report = bench::run_bench(&cfg).unwrap();
    let measurement = |name: &str| {
        report
            .rows
            .iter()
            .find(|r| r.algorithm == name)
            .and_then(|r| r.measurements.clone())
            .unwrap_or_else(|| panic!("{name} row missing"))
    };
    let chaos_row = measurement("CryptoChaos");
    let aes = measurement("AES-GCM");

    // 262144-byte encryption (excluding key derivation) under 50 ms median.
    assert!(
        chaos_row.median_latency_s <= 0.050,
        "CryptoChaos median {:.4}s > 50ms",
        chaos_row.median_latency_s
    );

    // Table ordering: plain AES-GCM beats the full chaos pipeline.
    let with_kdf = chaos_row
        .median_latency_with_key_derivation_s
        .expect("chaos adapter reports the with-derivation column");
    assert!(
        aes.median_latency_s < with_kdf,
        "AES-GCM ({:.6}s) not faster than CryptoChaos with derivation ({:.6}s)",
        aes.median_latency_s,
        with_kdf
    );
    pass(&format!(
        "criterion 9 (CryptoChaos {:.3} ms median, AES-GCM {:.3} ms < {:.3} ms with-KDF)",
        chaos_row.median_latency_s * 1e3,
        aes.median_latency_s * 1e3,
        with_kdf * 1e3
    ));
}

#[test]
fn criterion_10_determinism() {
    let passphrase = pw("determinism check");
    let recipient = RecipientKeypair::from_secret_bytes([0x51; 32]);
    let public = PublicKey::from(recipient.public_bytes());
    let plaintext = benchmark_image();

    let run = || {
        envelope::encrypt_pinned(
            &passphrase,
            &public,
            plaintext.pixels(),
            [0x61; 32],
            [0x71; 32],
            [0x81; 12],
        )
        .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "pinned envelopes differ across runs");

    // Pre-key golden vector (frozen from the independent reference run).
    let seeds = derive_seeds(&pw("correct horse battery staple"));
    let pre_key = chaos::build_pre_key(&seeds);
    assert_eq!(
        hex::encode(pre_key.as_bytes()),
        "e67d9f55efbac85f8b0f78db21be14e67d9f55efbac85f8b0f78db21be14e67d\
         6eb068b97dd1fa286f947bc1115aab52ae54ae4aa44dbe73f6e7b75cb85abb68\
         e33871e23b76ed244992db4891dc478ee33871e23b76ed244992db4891dc478e\
         3597b6acc594e338a0afbaabc88be8256cb4a3d075eb14365dabacc29add4cc5"
    );
    pass("criterion 10 (pinned-envelope determinism + pre-key golden)");
}

/// Not a numbered criterion, but the key-file surface the CLI depends on is
/// part of the external interface; exercise it here against a temp dir.
#[test]
fn key_file_interface() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let kp = RecipientKeypair::generate(&mut rng).unwrap();
    let secret = dir.path().join("k");
    let public = dir.path().join("k.pub");
    keyfiles::write_secret_key(&secret, &kp).unwrap();
    keyfiles::write_public_key(&public, &kp).unwrap();
    assert_eq!(std::fs::read(&secret).unwrap().len(), 32);
    let text = std::fs::read_to_string(&public).unwrap();
    assert_eq!(text.len(), 65);

    // Quality gate shared with the uniformity metric: a fresh histogram over
    // pinned ciphertext is effectively uniform.
    let ciphertext = benchmark_ciphertext(0);
    let uniformity = histogram_uniformity(&ByteHistogram::from_bytes(&ciphertext)).unwrap();
    assert!(uniformity >= 0.95);

    // Random range sanity for generate_stream on a fresh map.
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let x0 = rng.gen_range(1..=255u8);
    let stream = generate_stream(&mut LogisticState::new(x0, 997).unwrap(), 64, 100);
    assert_eq!(stream.len(), 64);
}
