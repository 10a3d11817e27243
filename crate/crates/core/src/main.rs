//! Command-line entry point: key generation, encryption/decryption,
//! ciphertext analysis, statistical testing, Grover estimation, benchmarking
//! and synthetic workload generation.
//!
//! Exit codes: 0 success, 1 usage error, 2 input/parse error,
//! 3 authentication failure, 4 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use cryptochaos::bench::{self, AdapterKind, BenchConfig, ReportFormat, Workload};
use cryptochaos::envelope;
use cryptochaos::error::Error;
use cryptochaos::grover::{self, GroverParams};
use cryptochaos::keyforge::{keyfiles, Passphrase, RecipientKeypair};
use cryptochaos::metrics::{
    adjacent_correlation, histogram_uniformity, mse_psnr, npcr, shannon_entropy, uaci,
    ByteHistogram, ImageBuffer,
};
use cryptochaos::nist::{self, SuiteOptions};
use cryptochaos::pgm;

const PASSPHRASE_ENV: &str = "CRYPTOCHAOS_PASSPHRASE";

#[derive(Parser)]
#[command(
    name = "cryptochaos",
    about = "Hybrid chaos-based encryption toolkit",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a recipient keypair: secret key file plus <out>.pub
    Keygen(KeygenArgs),
    /// Encrypt a file to a recipient public key (.cch envelope)
    Encrypt(EncryptArgs),
    /// Decrypt a .cch envelope with the recipient secret key
    Decrypt(DecryptArgs),
    /// Statistical metrics over a file's bytes
    Analyze(AnalyzeArgs),
    /// Run the SP 800-22 test subset over a file's bytes
    Nist(NistArgs),
    /// Grover-attack resource estimate plus the published reference table
    Grover(GroverArgs),
    /// Multi-cipher benchmark over an image workload
    Bench(BenchArgs),
    /// Write a seeded synthetic 8-bit grayscale PGM image
    SynthImage(SynthImageArgs),
}

#[derive(Args)]
struct KeygenArgs {
    /// Secret key path; the public key lands at <out>.pub
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    /// Recipient public key file (64 hex chars)
    #[arg(long)]
    to: PathBuf,
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Test mode: derive ephemeral key, salt and nonce from this seed.
    /// Deterministic output; never reuse a seed for two different messages.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DecryptArgs {
    /// Recipient secret key file (32 raw bytes)
    #[arg(long)]
    key: PathBuf,
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// Optional equal-length file for the pairwise metrics (NPCR, UACI,
    /// MSE, PSNR)
    #[arg(long)]
    compare: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NistArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// Template bits for the non-overlapping template test
    #[arg(long, default_value = "000000001")]
    template: String,
    /// Block length for the block-frequency test (default: adaptive)
    #[arg(long)]
    block_size: Option<usize>,
    /// Pattern length for the serial test
    #[arg(long, default_value_t = 2)]
    serial_m: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GroverArgs {
    #[arg(long, default_value_t = 256)]
    key_bits: u32,
    #[arg(long, default_value_t = 2_100_000_000)]
    t_per_oracle: u64,
    #[arg(long, default_value_t = 1.0)]
    overhead: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Timed samples per adapter
    #[arg(long, default_value_t = 30)]
    runs: usize,
    /// Untimed warmup encryptions per adapter
    #[arg(long, default_value_t = 5)]
    warmup: usize,
    /// Seed for the synthetic workload and all pinned test randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// PGM image workload; defaults to the seeded 512x512 synthetic image
    #[arg(long)]
    image: Option<PathBuf>,
    /// Comma-separated subset: cryptochaos,aes-gcm,chacha20,blowfish,cast5
    #[arg(long)]
    adapters: Option<String>,
    /// Output format: text, json or csv
    #[arg(long, default_value = "text")]
    format: String,
    /// Shorthand for --format json
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SynthImageArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are "errors" to clap but not to us.
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::AuthenticationFailure | Error::NonContributory => 3,
        Error::EntropyUnavailable(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> cryptochaos::Result<ExitCode> {
    match cli.command {
        Command::Keygen(args) => keygen(args),
        Command::Encrypt(args) => encrypt(args),
        Command::Decrypt(args) => decrypt(args),
        Command::Analyze(args) => analyze(args),
        Command::Nist(args) => nist_cmd(args),
        Command::Grover(args) => grover_cmd(args),
        Command::Bench(args) => bench_cmd(args),
        Command::SynthImage(args) => synth_image(args),
    }
}

/// Output files appear atomically: written to a sibling temp name, renamed on
/// success.
fn write_atomic(path: &Path, bytes: &[u8]) -> cryptochaos::Result<()> {
    let tmp = temp_sibling(path);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Passphrase from the environment (non-interactive use) or an echo-free
/// prompt. Never taken from argv: command lines leak through process lists.
fn read_passphrase() -> cryptochaos::Result<Passphrase> {
    if let Ok(value) = std::env::var(PASSPHRASE_ENV) {
        return Passphrase::new(value.into_bytes());
    }
    let value = rpassword::prompt_password("Passphrase: ")
        .map_err(|e| Error::invalid(format!("cannot read passphrase: {e}")))?;
    Passphrase::new(value.into_bytes())
}

fn keygen(args: KeygenArgs) -> cryptochaos::Result<ExitCode> {
    let mut rng = ChaCha20Rng::from_entropy();
    let keypair = RecipientKeypair::generate(&mut rng)?;

    let secret_tmp = temp_sibling(&args.out);
    keyfiles::write_secret_key(&secret_tmp, &keypair)?;
    fs::rename(&secret_tmp, &args.out)?;

    let pub_path = public_key_path(&args.out);
    let pub_tmp = temp_sibling(&pub_path);
    keyfiles::write_public_key(&pub_tmp, &keypair)?;
    fs::rename(&pub_tmp, &pub_path)?;

    println!("secret key: {}", args.out.display());
    println!("public key: {}", pub_path.display());
    Ok(ExitCode::SUCCESS)
}

fn public_key_path(secret: &Path) -> PathBuf {
    let mut name = secret.file_name().unwrap_or_default().to_os_string();
    name.push(".pub");
    secret.with_file_name(name)
}

fn encrypt(args: EncryptArgs) -> cryptochaos::Result<ExitCode> {
    let recipient = keyfiles::read_public_key(&args.to)?;
    let plaintext = fs::read(&args.r#in)?;
    let passphrase = read_passphrase()?;
    let mut rng = match args.seed {
        Some(seed) => ChaCha20Rng::seed_from_u64(seed),
        None => ChaCha20Rng::from_entropy(),
    };
    let sealed = envelope::encrypt(&passphrase, &recipient, &plaintext, &mut rng)?;
    write_atomic(&args.out, &sealed)?;
    println!("wrote {} ({} bytes)", args.out.display(), sealed.len());
    Ok(ExitCode::SUCCESS)
}

fn decrypt(args: DecryptArgs) -> cryptochaos::Result<ExitCode> {
    let recipient = keyfiles::read_secret_key(&args.key)?;
    let sealed = fs::read(&args.r#in)?;
    let passphrase = read_passphrase()?;
    let plaintext = envelope::decrypt(&passphrase, &recipient, &sealed)?;
    write_atomic(&args.out, &plaintext)?;
    println!("wrote {} ({} bytes)", args.out.display(), plaintext.len());
    Ok(ExitCode::SUCCESS)
}

fn analyze(args: AnalyzeArgs) -> cryptochaos::Result<ExitCode> {
    let data = fs::read(&args.r#in)?;
    if data.len() < 3 {
        return Err(Error::invalid("analyze needs at least 3 bytes of input"));
    }
    let hist = ByteHistogram::from_bytes(&data);
    let entropy = shannon_entropy(&hist)?;
    let uniformity = histogram_uniformity(&hist)?;
    // Zero variance is reported per metric, not fatal.
    let correlation = match adjacent_correlation(&data) {
        Ok(v) => Ok(v),
        Err(Error::ZeroVariance) => Err("zero variance: constant input".to_string()),
        Err(e) => return Err(e),
    };

    let pairwise = match &args.compare {
        Some(path) => {
            let other = fs::read(path)?;
            if other.len() != data.len() {
                return Err(Error::invalid(format!(
                    "compare file is {} bytes, input is {}",
                    other.len(),
                    data.len()
                )));
            }
            let a = ImageBuffer::new(data.len(), 1, data.clone())?;
            let b = ImageBuffer::new(other.len(), 1, other)?;
            let (mse, psnr) = mse_psnr(&a, &b)?;
            Some((npcr(&a, &b)?, uaci(&a, &b)?, mse, psnr))
        }
        None => None,
    };

    if args.json {
        let mut obj = serde_json::json!({
            "bytes": data.len(),
            "entropy_bits_per_byte": entropy,
            "histogram_uniformity": uniformity,
        });
        match &correlation {
            Ok(v) => obj["adjacent_correlation"] = serde_json::json!(v),
            Err(note) => obj["adjacent_correlation_error"] = serde_json::json!(note),
        }
        if let Some((n, u, mse, psnr)) = pairwise {
            obj["compare"] = serde_json::json!({
                "npcr_percent": n,
                "uaci_percent": u,
                "mse": mse,
                "psnr_db": psnr,
            });
        }
        println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
    } else {
        println!("bytes: {}", data.len());
        println!("entropy_bits_per_byte: {entropy:.5}");
        match &correlation {
            Ok(v) => println!("adjacent_correlation: {v:.5}"),
            Err(note) => println!("adjacent_correlation: error ({note})"),
        }
        println!("histogram_uniformity: {uniformity:.5}");
        if let Some((n, u, mse, psnr)) = pairwise {
            println!("npcr_percent: {n:.4}");
            println!("uaci_percent: {u:.4}");
            println!("mse: {mse:.1}");
            println!("psnr_db: {psnr:.2}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn nist_cmd(args: NistArgs) -> cryptochaos::Result<ExitCode> {
    let data = fs::read(&args.r#in)?;
    let template = args
        .template
        .chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::invalid(format!("template must be 0/1 bits, found {other:?}"))),
        })
        .collect::<cryptochaos::Result<Vec<u8>>>()?;
    let opts = SuiteOptions {
        block_len: args.block_size,
        template,
        serial_m: args.serial_m,
        ..SuiteOptions::default()
    };
    let report = nist::run_suite_with(&data, &opts)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        print!("{report}");
    }
    Ok(ExitCode::SUCCESS)
}

fn grover_cmd(args: GroverArgs) -> cryptochaos::Result<ExitCode> {
    let params = GroverParams {
        key_bits: args.key_bits,
        t_per_oracle: args.t_per_oracle,
        error_correction_overhead: args.overhead,
    };
    let estimate = grover::estimate(&params)?;
    let table = grover::paper_reference_table();

    if args.json {
        let obj = serde_json::json!({
            "model": {
                "key_bits": params.key_bits,
                "t_per_oracle": params.t_per_oracle,
                "error_correction_overhead": params.error_correction_overhead,
                "iterations": estimate.iterations.to_string(),
                "effective_keyspace_bits": estimate.effective_keyspace_bits,
                "total_t_gates": estimate.total_t_gates.to_string(),
            },
            "reference_table": table.iter().map(|row| serde_json::json!({
                "algorithm": row.algorithm,
                "t_gate_count": row.t_gate_count,
                "grover_speedup_estimate": row.grover_speedup_estimate,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
    } else {
        println!("Parametric Grover cost model");
        println!("  key bits:                {}", params.key_bits);
        println!("  T gates per oracle:      {}", params.t_per_oracle);
        println!("  error correction factor: {}", params.error_correction_overhead);
        println!("  effective keyspace:      2^{}", estimate.effective_keyspace_bits);
        println!("  Grover iterations:       {}", estimate.iterations);
        println!("  total T gates:           {}", estimate.total_t_gates);
        println!();
        println!("Published reference table (stored constants, not model output)");
        println!("  {:<12} {:>14} {:>24}", "Algorithm", "T Gate Count", "Grover Speedup Est.");
        for row in &table {
            println!(
                "  {:<12} {:>14.2e} {:>24.2e}",
                row.algorithm, row.t_gate_count, row.grover_speedup_estimate
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench_cmd(args: BenchArgs) -> cryptochaos::Result<ExitCode> {
    let adapters = match &args.adapters {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<AdapterKind>())
            .collect::<cryptochaos::Result<Vec<_>>>()?,
        None => AdapterKind::ALL.to_vec(),
    };
    let workload = match &args.image {
        Some(path) => Workload::File(path.clone()),
        None => Workload::Synthetic { seed: args.seed, width: 512, height: 512 },
    };
    let cfg = BenchConfig {
        runs: args.runs,
        warmup: args.warmup,
        seed: args.seed,
        workload,
        adapters,
    };
    let format = if args.json { ReportFormat::Json } else { args.format.parse()? };
    let report = bench::run_bench(&cfg)?;
    print!("{}", bench::emit_report(&report, format)?);
    if report.required_ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: a required adapter failed; see report");
        Ok(ExitCode::from(4))
    }
}

fn synth_image(args: SynthImageArgs) -> cryptochaos::Result<ExitCode> {
    let image = pgm::synthetic_image(args.seed, args.width, args.height)?;
    write_atomic(&args.out, &pgm::write_pgm(&image))?;
    println!(
        "wrote {} ({}x{}, seed {})",
        args.out.display(),
        args.width,
        args.height,
        args.seed
    );
    Ok(ExitCode::SUCCESS)
}
