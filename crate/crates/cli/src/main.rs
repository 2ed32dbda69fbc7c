//! `stegovault` — hide encrypted file archives in the low bits of BMP and
//! WAV covers.
//!
//! This binary is a thin shell over the `stegovault` library: it parses
//! arguments, reads and writes files, and maps library errors onto the
//! documented exit codes. All of the actual work happens in the library so
//! tests can drive it in-process.
//!
//! Exit codes (stable, part of the interface):
//!
//! | code | meaning                                            |
//! |------|----------------------------------------------------|
//! | 0    | success                                            |
//! | 1    | usage or configuration error                       |
//! | 2    | file I/O failure                                   |
//! | 3    | payload does not fit the cover                     |
//! | 4    | unsupported or malformed cover file                |
//! | 5    | integrity failure — wrong key number or key file   |
//! | 6    | not a stego object                                 |
//! | 7    | archive contains an unsafe path                    |
//!
//! Reports and data go to standard output; errors go to standard error.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "stegovault",
    version,
    about = "Hide encrypted file archives inside BMP/WAV covers",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an RSA key pair
    Keygen {
        /// Modulus size in bits (512, 768, 1024, or 2048)
        #[arg(long, default_value_t = 2048)]
        bits: u32,
        /// Where to write the public key
        #[arg(long, value_name = "FILE")]
        out_pub: PathBuf,
        /// Where to write the private key
        #[arg(long, value_name = "FILE")]
        out_priv: PathBuf,
        /// Seed for reproducible key generation (insecure; for tests)
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Hide files and folders inside a cover
    Embed {
        /// Cover image or audio file (24-bit BMP or PCM WAV)
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
        /// Where to write the stego object
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Recipient's public key
        #[arg(long, value_name = "FILE")]
        public_key: PathBuf,
        /// Where to write the generated key file
        #[arg(long, value_name = "FILE")]
        key_file: PathBuf,
        /// Shared numeric secret; the extractor must present the same one
        #[arg(long)]
        key_number: u64,
        /// Bits embedded per carrier byte
        #[arg(short, long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: u8,
        /// Payload cipher: des-hybrid (default) or none
        #[arg(long, default_value = "des-hybrid")]
        cipher: String,
        /// Seed for a reproducible run (insecure; for tests and benches)
        #[arg(long)]
        rng_seed: Option<u64>,
        /// Overwrite and delete the inputs after a successful embed
        #[arg(long)]
        shred: bool,
        /// Files and directories to hide
        #[arg(required = true, value_name = "PATH")]
        inputs: Vec<PathBuf>,
    },

    /// Recover the hidden files from a stego object
    Extract {
        /// Stego object produced by `embed`
        #[arg(long, value_name = "FILE")]
        stego: PathBuf,
        /// Key file produced by the matching `embed`
        #[arg(long, value_name = "FILE")]
        key_file: PathBuf,
        /// Private key matching the public key used at embed time
        #[arg(long, value_name = "FILE")]
        private_key: PathBuf,
        /// Shared numeric secret chosen at embed time
        #[arg(long)]
        key_number: u64,
        /// Directory to write the recovered tree into
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },

    /// Show how many payload bytes a cover can hold
    Capacity {
        /// Cover file to measure
        #[arg(value_name = "FILE")]
        cover: PathBuf,
        /// Report a single k instead of both
        #[arg(short, long, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: Option<u8>,
    },

    /// Print the stego header of an object without decrypting anything
    Inspect {
        /// Stego object to examine
        #[arg(value_name = "FILE")]
        stego: PathBuf,
    },

    /// Measure the distortion between a cover and its stego object
    Diff {
        /// Original cover
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
        /// Stego object made from that cover
        #[arg(long, value_name = "FILE")]
        stego: PathBuf,
        /// k the embed used (bounds the audit)
        #[arg(short, long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: u8,
    },

    /// Time the encrypt/embed/extract/decrypt phases at several sizes
    Bench {
        /// Payload sizes in bytes, comma-separated
        #[arg(long, default_value = "102400,863232", value_delimiter = ',')]
        sizes: Vec<u64>,
        /// Cipher modes to time, comma-separated: hybrid, rsa-direct, des-only
        #[arg(long, default_value = "hybrid,rsa-direct,des-only", value_delimiter = ',')]
        modes: Vec<String>,
        /// Timed repetitions per (size, mode)
        #[arg(long, default_value_t = 3)]
        repetitions: u32,
        /// Seed for reproducible payloads
        #[arg(long)]
        rng_seed: Option<u64>,
        /// Also write the timings as CSV to this file
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version are successful runs; everything else clap
            // rejects is a usage error.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
