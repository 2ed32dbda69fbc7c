//! Command implementations and the error → exit-code mapping.
//!
//! Every command returns `Result<(), CliError>`; `main` prints the message
//! to standard error and exits with the code. Library errors carry enough
//! type information to classify mechanically — the only context-sensitive
//! case is cover parsing, where `Format` means "malformed cover" (exit 4)
//! rather than the stego-layer reading of the same variant (exit 5).

use std::io::Write as _;
use std::path::{Path, PathBuf};

use stegovault::archive::{collect_entries, write_entries};
use stegovault::cipher::cipher_by_name;
use stegovault::covers::{capacity, parse_cover, CoverKind, CoverObject};
use stegovault::crypto::rsa::generate_keypair;
use stegovault::crypto::{fingerprint, load_private_key, load_public_key, save_private_key, save_public_key};
use stegovault::metrics::{distortion, lsb_diff_report};
use stegovault::pipeline::{embed_archive, extract_archive, EmbedRequest};
use stegovault::stego::prng::SplitMix64;
use stegovault::stego::{read_header, FLAG_ENCRYPTED, STEGO_VERSION};
use stegovault::Error;

use crate::Command;

/// A classified failure: what to tell the operator and how to exit.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

type CmdResult<T = ()> = std::result::Result<T, CliError>;

/// The default variant → exit-code map. `Format` lands on 5 because outside
/// cover parsing it means a damaged stego payload, key file, or archive —
/// the same operational answer as an integrity failure: wrong or corrupted
/// secret material.
fn classify(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 1,
        Error::Io { .. } => 2,
        Error::Capacity { .. } => 3,
        Error::UnsupportedCover(_) => 4,
        Error::Integrity(_) | Error::Key(_) | Error::Format(_) | Error::Audit(_) => 5,
        Error::NotStego(_) => 6,
        Error::UnsafePath(_) => 7,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError {
            code: classify(&err),
            message: err.to_string(),
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
    .into()
}

fn read_file(path: &Path) -> CmdResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| io_error(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    std::fs::write(path, bytes).map_err(|e| io_error(path, e))
}

/// Read and parse a cover file. Anything wrong with the file itself — not
/// BMP/WAV at all, a rejected variant, truncated or inconsistent structure —
/// exits 4; only the read failure keeps the I/O code.
fn load_cover(path: &Path) -> CmdResult<CoverObject> {
    let raw = read_file(path)?;
    parse_cover(raw).map_err(|err| match err {
        Error::Format(_) | Error::UnsupportedCover(_) => CliError {
            code: 4,
            message: format!("{}: {err}", path.display()),
        },
        other => other.into(),
    })
}

/// Errors while gathering embed inputs are the operator's to fix, so the
/// `Format` cases (duplicate inputs, unreadable names, special files) count
/// as usage errors here.
fn input_error(err: Error) -> CliError {
    if matches!(err, Error::Format(_)) {
        CliError {
            code: 1,
            message: err.to_string(),
        }
    } else {
        err.into()
    }
}

fn format_psnr(psnr_db: f64) -> String {
    if psnr_db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{psnr_db:.2}")
    }
}

fn kind_label(kind: CoverKind) -> &'static str {
    match kind {
        CoverKind::Bmp24 => "bmp",
        CoverKind::WavPcm8 | CoverKind::WavPcm16 => "wav",
    }
}

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Keygen {
            bits,
            out_pub,
            out_priv,
            seed,
        } => keygen(bits, &out_pub, &out_priv, seed),
        Command::Embed {
            cover,
            out,
            public_key,
            key_file,
            key_number,
            k,
            cipher,
            rng_seed,
            shred,
            inputs,
        } => embed(
            &cover, &out, &public_key, &key_file, key_number, k, &cipher, rng_seed, shred,
            &inputs,
        ),
        Command::Extract {
            stego,
            key_file,
            private_key,
            key_number,
            out_dir,
        } => extract(&stego, &key_file, &private_key, key_number, &out_dir),
        Command::Capacity { cover, k } => capacity_cmd(&cover, k),
        Command::Inspect { stego } => inspect(&stego),
        Command::Diff { cover, stego, k } => diff(&cover, &stego, k),
        Command::Bench {
            sizes,
            modes,
            repetitions,
            rng_seed,
            csv,
        } => crate::bench::run(&sizes, &modes, repetitions, rng_seed, csv.as_deref()),
    }
}

fn keygen(bits: u32, out_pub: &Path, out_priv: &Path, seed: Option<u64>) -> CmdResult {
    let seed = seed.unwrap_or_else(rand::random);
    let pair = generate_keypair(bits, seed)?;
    save_public_key(out_pub, &pair.public)?;
    save_private_key(out_priv, &pair.private)?;
    println!("wrote {}", out_pub.display());
    println!("wrote {}", out_priv.display());
    println!("fingerprint: {}", fingerprint(&pair.public.n));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn embed(
    cover_path: &Path,
    out_path: &Path,
    public_key_path: &Path,
    key_file_path: &Path,
    key_number: u64,
    k: u8,
    cipher_name: &str,
    rng_seed: Option<u64>,
    shred: bool,
    inputs: &[PathBuf],
) -> CmdResult {
    let cover = load_cover(cover_path)?;
    let public = load_public_key(public_key_path)?;
    let cipher = cipher_by_name(cipher_name)?;
    let entries = collect_entries(inputs).map_err(input_error)?;

    let seed = rng_seed.unwrap_or_else(rand::random);
    let mut rng = SplitMix64::new(seed);
    let request = EmbedRequest {
        cover: &cover,
        entries: &entries,
        public: &public,
        key_number,
        k,
        cipher,
    };
    let result = embed_archive(&request, &mut rng)?;

    write_file(out_path, &result.stego_raw)?;
    write_file(key_file_path, &result.key_file)?;

    println!(
        "cover: {} ({}, {} carriers)",
        cover_path.display(),
        cover.meta,
        cover.carrier_count()
    );
    println!(
        "payload: {}/{} bytes (k={k})",
        result.payload_bytes, result.capacity_bytes
    );
    println!("psnr: {} dB", format_psnr(result.report.psnr_db));
    println!("wrote {}", out_path.display());
    println!("wrote {}", key_file_path.display());

    if shred {
        for input in inputs {
            shred_path(input)?;
        }
        println!("shredded {} input path(s)", inputs.len());
    }
    println!("hiding done");
    Ok(())
}

fn extract(
    stego_path: &Path,
    key_file_path: &Path,
    private_key_path: &Path,
    key_number: u64,
    out_dir: &Path,
) -> CmdResult {
    let stego = load_cover(stego_path)?;
    let key_file = read_file(key_file_path)?;
    let private = load_private_key(private_key_path)?;

    let entries = extract_archive(&stego, &key_file, &private, key_number)?;
    write_entries(out_dir, &entries)?;

    let total: u64 = entries.iter().map(|e| e.payload().len() as u64).sum();
    println!("recovered {} file(s), {total} bytes", entries.len());
    println!("un-hide done");
    Ok(())
}

fn capacity_cmd(cover_path: &Path, k: Option<u8>) -> CmdResult {
    let cover = load_cover(cover_path)?;
    let cap = capacity(&cover);
    println!("format: {} ({})", kind_label(cover.kind), cover.meta);
    println!("carriers: {}", cap.carrier_count);
    println!("header cost: {} carriers", cap.header_cost_bytes);
    match k {
        Some(k) => println!("k={k}: {} bytes", cap.payload_capacity_bytes(k)),
        None => {
            println!("k=1: {} bytes", cap.payload_capacity_bytes(1));
            println!("k=2: {} bytes", cap.payload_capacity_bytes(2));
        }
    }
    Ok(())
}

fn inspect(stego_path: &Path) -> CmdResult {
    let stego = load_cover(stego_path)?;
    let header = read_header(&stego)?;
    println!("version: {STEGO_VERSION}");
    println!("k: {}", header.k);
    let label = if header.flags & FLAG_ENCRYPTED != 0 {
        "encrypted"
    } else {
        "plaintext"
    };
    println!("flags: 0x{:02x} ({label})", header.flags);
    println!("payload length: {} bytes", header.payload_len);
    println!("payload crc32: 0x{:08x}", header.payload_crc32);
    Ok(())
}

fn diff(cover_path: &Path, stego_path: &Path, k: u8) -> CmdResult {
    let cover = load_cover(cover_path)?;
    let stego = load_cover(stego_path)?;
    let report = distortion(&cover, &stego)?;
    println!("{}", report.to_key_value());
    let changed = lsb_diff_report(&cover, &stego, k)?;
    println!(
        "audit: ok ({} carrier byte(s) changed within {k} low bit(s))",
        changed.len()
    );
    Ok(())
}

/// Overwrite regular files with zeros and delete the path, bottom-up.
/// One pass through the ordinary filesystem API — journals, copy-on-write
/// filesystems, and SSD wear leveling can all keep stale copies, so this is
/// honest-effort destruction, not forensic erasure. Symlinks are removed
/// without following them.
fn shred_path(path: &Path) -> CmdResult {
    let meta = std::fs::symlink_metadata(path).map_err(|e| io_error(path, e))?;
    if meta.is_dir() {
        let items = std::fs::read_dir(path).map_err(|e| io_error(path, e))?;
        for item in items {
            let item = item.map_err(|e| io_error(path, e))?;
            shred_path(&item.path())?;
        }
        std::fs::remove_dir(path).map_err(|e| io_error(path, e))
    } else {
        if meta.is_file() {
            zero_file(path, meta.len())?;
        }
        std::fs::remove_file(path).map_err(|e| io_error(path, e))
    }
}

fn zero_file(path: &Path, len: u64) -> CmdResult {
    let mut file = std::fs::OpenOptions::new()
        .write(true)
        .open(path)
        .map_err(|e| io_error(path, e))?;
    let zeros = [0u8; 8192];
    let mut left = len;
    while left > 0 {
        let n = left.min(zeros.len() as u64) as usize;
        file.write_all(&zeros[..n]).map_err(|e| io_error(path, e))?;
        left -= n as u64;
    }
    file.sync_all().map_err(|e| io_error(path, e))
}
