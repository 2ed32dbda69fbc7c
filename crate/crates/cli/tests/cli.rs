//! Black-box tests for the `stegovault` binary: every subcommand, every
//! documented exit code, and the golden output lines scripts rely on.

use std::path::{Path, PathBuf};
use std::process::Output;

use stegovault::archive::crc32;
use stegovault::cipher::cipher_by_name;
use stegovault::covers::synth::{synth_bmp, synth_wav16};
use stegovault::covers::{parse_cover, serialize_cover};
use stegovault::crypto::rsa::generate_keypair;
use stegovault::crypto::{encode_key_file, save_private_key, save_public_key, wrap_secret, SessionSecret};
use stegovault::stego::prng::SplitMix64;
use stegovault::stego::{embed, PermutationSpec, HEADER_CARRIER_COST};

fn stegovault_cmd(dir: &Path, args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_stegovault"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("the binary should at least run")
}

#[track_caller]
fn assert_exit(out: &Output, expected: i32) {
    assert_eq!(
        out.status.code(),
        Some(expected),
        "exit code mismatch\nstdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Standard scene: a parsed keypair on disk, a 100×100 BMP cover, and a
/// small input tree. Most tests embed from here.
struct Scene {
    dir: tempfile::TempDir,
}

impl Scene {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::write(root.join("cover.bmp"), synth_bmp(100, 100, 11)).unwrap();
        std::fs::write(root.join("cover.wav"), synth_wav16(20_000, 12)).unwrap();

        let keygen = stegovault_cmd(
            root,
            &[
                "keygen", "--bits", "512", "--out-pub", "pub.svp", "--out-priv", "priv.svs",
                "--seed", "424242",
            ],
        );
        assert_exit(&keygen, 0);

        let tree = root.join("tree");
        std::fs::create_dir_all(tree.join("sub/deeper")).unwrap();
        std::fs::write(tree.join("a.txt"), b"alpha\n").unwrap();
        std::fs::write(tree.join("empty.bin"), b"").unwrap();
        std::fs::write(tree.join("sub/b.bin"), vec![0xB7; 2000]).unwrap();
        std::fs::write(tree.join("sub/deeper/c.txt"), b"down here").unwrap();
        Scene { dir }
    }

    fn root(&self) -> &Path {
        self.dir.path()
    }

    fn run(&self, args: &[&str]) -> Output {
        stegovault_cmd(self.root(), args)
    }

    /// Embed the standard tree; returns (stego, key file) paths.
    fn embed_tree(&self, extra: &[&str]) -> (PathBuf, PathBuf) {
        let mut args = vec![
            "embed", "--cover", "cover.bmp", "--out", "stego.bmp", "--public-key", "pub.svp",
            "--key-file", "out.svk", "--key-number", "9001", "--rng-seed", "5",
        ];
        args.extend_from_slice(extra);
        args.push("tree");
        let out = self.run(&args);
        assert_exit(&out, 0);
        (self.root().join("stego.bmp"), self.root().join("out.svk"))
    }
}

fn assert_tree_recovered(root: &Path, restored: &Path) {
    for rel in ["a.txt", "empty.bin", "sub/b.bin", "sub/deeper/c.txt"] {
        let original = std::fs::read(root.join("tree").join(rel)).unwrap();
        let recovered = std::fs::read(restored.join("tree").join(rel))
            .unwrap_or_else(|e| panic!("missing {rel}: {e}"));
        assert_eq!(original, recovered, "{rel} differs");
    }
}

// --- plumbing and usage ----------------------------------------------------

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["--help"][..], &["--version"][..], &["embed", "--help"][..]] {
        let out = stegovault_cmd(dir.path(), args);
        assert_exit(&out, 0);
    }
}

#[test]
fn bad_usage_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // unknown subcommand, missing required flag, k out of range
    for args in [
        &["frobnicate"][..],
        &["embed", "--cover", "x.bmp"][..],
        &["embed", "--cover", "x.bmp", "--out", "y", "--public-key", "p", "--key-file", "k",
          "--key-number", "1", "-k", "3", "in"][..],
    ] {
        let out = stegovault_cmd(dir.path(), args);
        assert_exit(&out, 1);
    }
}

// --- keygen ------------------------------------------------------------------

#[test]
fn keygen_is_deterministic_under_a_seed() {
    let scene = Scene::new();
    for (out_pub, out_priv) in [("p1.svp", "p1.svs"), ("p2.svp", "p2.svs")] {
        let out = scene.run(&[
            "keygen", "--bits", "512", "--out-pub", out_pub, "--out-priv", out_priv, "--seed",
            "99",
        ]);
        assert_exit(&out, 0);
        assert!(stdout_of(&out).contains("fingerprint: "));
    }
    let root = scene.root();
    assert_eq!(
        std::fs::read(root.join("p1.svp")).unwrap(),
        std::fs::read(root.join("p2.svp")).unwrap()
    );
    assert_eq!(
        std::fs::read(root.join("p1.svs")).unwrap(),
        std::fs::read(root.join("p2.svs")).unwrap()
    );
}

#[test]
fn keygen_rejects_unsupported_bits() {
    let scene = Scene::new();
    let out = scene.run(&["keygen", "--bits", "100", "--out-pub", "x.svp", "--out-priv", "x.svs"]);
    assert_exit(&out, 1);
    assert!(!scene.root().join("x.svp").exists());
}

// --- embed / extract ---------------------------------------------------------

#[test]
fn golden_usage_line_for_a_1_kib_file() {
    let scene = Scene::new();
    std::fs::write(scene.root().join("data.bin"), vec![0x5A; 1024]).unwrap();
    let out = scene.run(&[
        "embed", "--cover", "cover.bmp", "--out", "g.bmp", "--public-key", "pub.svp",
        "--key-file", "g.svk", "--key-number", "1", "data.bin",
    ]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("payload: 1056/3726 bytes (k=1)"), "got:\n{text}");
    assert!(text.contains("psnr: "), "got:\n{text}");
    assert!(text.contains("hiding done"), "got:\n{text}");
}

#[test]
fn roundtrip_preserves_a_nested_tree() {
    let scene = Scene::new();
    scene.embed_tree(&[]);
    let out = scene.run(&[
        "extract", "--stego", "stego.bmp", "--key-file", "out.svk", "--private-key", "priv.svs",
        "--key-number", "9001", "--out-dir", "restored",
    ]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("recovered 4 file(s), 2015 bytes"), "got:\n{text}");
    assert!(text.contains("un-hide done"), "got:\n{text}");
    assert_tree_recovered(scene.root(), &scene.root().join("restored"));
}

#[test]
fn wav_cover_roundtrips_too() {
    let scene = Scene::new();
    let out = scene.run(&[
        "embed", "--cover", "cover.wav", "--out", "stego.wav", "--public-key", "pub.svp",
        "--key-file", "w.svk", "--key-number", "31337", "-k", "2", "tree",
    ]);
    assert_exit(&out, 0);
    let out = scene.run(&[
        "extract", "--stego", "stego.wav", "--key-file", "w.svk", "--private-key", "priv.svs",
        "--key-number", "31337", "--out-dir", "restored",
    ]);
    assert_exit(&out, 0);
    assert_tree_recovered(scene.root(), &scene.root().join("restored"));
}

#[test]
fn embed_is_bit_identical_under_a_fixed_seed() {
    let scene = Scene::new();
    for (stego, key) in [("s1.bmp", "k1.svk"), ("s2.bmp", "k2.svk")] {
        let out = scene.run(&[
            "embed", "--cover", "cover.bmp", "--out", stego, "--public-key", "pub.svp",
            "--key-file", key, "--key-number", "7", "--rng-seed", "1234", "tree",
        ]);
        assert_exit(&out, 0);
    }
    let root = scene.root();
    assert_eq!(
        std::fs::read(root.join("s1.bmp")).unwrap(),
        std::fs::read(root.join("s2.bmp")).unwrap()
    );
    assert_eq!(
        std::fs::read(root.join("k1.svk")).unwrap(),
        std::fs::read(root.join("k2.svk")).unwrap()
    );
}

#[test]
fn cipher_none_skips_encryption_but_keeps_both_factors() {
    let scene = Scene::new();
    scene.embed_tree(&["--cipher", "none"]);

    let inspect = scene.run(&["inspect", "stego.bmp"]);
    assert_exit(&inspect, 0);
    assert!(stdout_of(&inspect).contains("flags: 0x00 (plaintext)"));

    // extraction still needs the right key number…
    let wrong = scene.run(&[
        "extract", "--stego", "stego.bmp", "--key-file", "out.svk", "--private-key", "priv.svs",
        "--key-number", "9002", "--out-dir", "nope",
    ]);
    assert_exit(&wrong, 5);
    // …and the right one recovers the tree
    let ok = scene.run(&[
        "extract", "--stego", "stego.bmp", "--key-file", "out.svk", "--private-key", "priv.svs",
        "--key-number", "9001", "--out-dir", "restored",
    ]);
    assert_exit(&ok, 0);
    assert_tree_recovered(scene.root(), &scene.root().join("restored"));
}

#[test]
fn shred_overwrites_and_removes_inputs() {
    let scene = Scene::new();
    std::fs::write(scene.root().join("burn.txt"), b"ephemeral").unwrap();
    let out = scene.run(&[
        "embed", "--cover", "cover.bmp", "--out", "s.bmp", "--public-key", "pub.svp",
        "--key-file", "s.svk", "--key-number", "1", "--shred", "burn.txt", "tree",
    ]);
    assert_exit(&out, 0);
    assert!(stdout_of(&out).contains("shredded 2 input path(s)"));
    assert!(!scene.root().join("burn.txt").exists());
    assert!(!scene.root().join("tree").exists());

    // the data still comes back out of the stego object
    let out = scene.run(&[
        "extract", "--stego", "s.bmp", "--key-file", "s.svk", "--private-key", "priv.svs",
        "--key-number", "1", "--out-dir", "restored",
    ]);
    assert_exit(&out, 0);
    assert_eq!(
        std::fs::read(scene.root().join("restored/burn.txt")).unwrap(),
        b"ephemeral"
    );
}

// --- error exit codes ----------------------------------------------------------

#[test]
fn wrong_key_number_exits_5_and_writes_nothing() {
    let scene = Scene::new();
    scene.embed_tree(&[]);
    let out = scene.run(&[
        "extract", "--stego", "stego.bmp", "--key-file", "out.svk", "--private-key", "priv.svs",
        "--key-number", "9002", "--out-dir", "leak",
    ]);
    assert_exit(&out, 5);
    assert!(stderr_of(&out).contains("integrity failure"));
    assert!(!scene.root().join("leak").exists(), "failed extract must write nothing");
}

#[test]
fn mismatched_key_file_exits_5() {
    let scene = Scene::new();
    scene.embed_tree(&[]);
    // a valid key file from an unrelated embed
    let out = scene.run(&[
        "embed", "--cover", "cover.bmp", "--out", "other.bmp", "--public-key", "pub.svp",
        "--key-file", "other.svk", "--key-number", "9001", "--rng-seed", "77", "tree",
    ]);
    assert_exit(&out, 0);
    let out = scene.run(&[
        "extract", "--stego", "stego.bmp", "--key-file", "other.svk", "--private-key", "priv.svs",
        "--key-number", "9001", "--out-dir", "leak",
    ]);
    assert_exit(&out, 5);
    assert!(!scene.root().join("leak").exists());
}

#[test]
fn pristine_cover_exits_6() {
    let scene = Scene::new();
    scene.embed_tree(&[]);
    let out = scene.run(&[
        "extract", "--stego", "cover.bmp", "--key-file", "out.svk", "--private-key", "priv.svs",
        "--key-number", "9001", "--out-dir", "leak",
    ]);
    assert_exit(&out, 6);
    assert!(stderr_of(&out).contains("not a stego object"));
}

#[test]
fn truncated_stego_exits_4() {
    let scene = Scene::new();
    let (stego, _) = scene.embed_tree(&[]);
    let full = std::fs::read(&stego).unwrap();
    std::fs::write(scene.root().join("cut.bmp"), &full[..full.len() / 2]).unwrap();
    let out = scene.run(&[
        "extract", "--stego", "cut.bmp", "--key-file", "out.svk", "--private-key", "priv.svs",
        "--key-number", "9001", "--out-dir", "leak",
    ]);
    assert_exit(&out, 4);
    assert!(!scene.root().join("leak").exists());
}

#[test]
fn oversized_payload_exits_3() {
    let scene = Scene::new();
    std::fs::write(scene.root().join("big.bin"), vec![1u8; 5 * 1024]).unwrap();
    let out = scene.run(&[
        "embed", "--cover", "cover.bmp", "--out", "s.bmp", "--public-key", "pub.svp",
        "--key-file", "k.svk", "--key-number", "1", "big.bin",
    ]);
    assert_exit(&out, 3);
    assert!(stderr_of(&out).contains("payload too large"));
    assert!(!scene.root().join("s.bmp").exists());
}

#[test]
fn missing_files_exit_2() {
    let scene = Scene::new();
    let out = scene.run(&[
        "embed", "--cover", "nosuch.bmp", "--out", "s.bmp", "--public-key", "pub.svp",
        "--key-file", "k.svk", "--key-number", "1", "tree",
    ]);
    assert_exit(&out, 2);
    let out = scene.run(&[
        "embed", "--cover", "cover.bmp", "--out", "s.bmp", "--public-key", "pub.svp",
        "--key-file", "k.svk", "--key-number", "1", "nosuch-input",
    ]);
    assert_exit(&out, 2);
}

#[test]
fn unknown_cipher_exits_1() {
    let scene = Scene::new();
    let out = scene.run(&[
        "embed", "--cover", "cover.bmp", "--out", "s.bmp", "--public-key", "pub.svp",
        "--key-file", "k.svk", "--key-number", "1", "--cipher", "rot13", "tree",
    ]);
    assert_exit(&out, 1);
    assert!(stderr_of(&out).contains("unknown cipher"));
}

#[test]
fn non_cover_file_exits_4() {
    let scene = Scene::new();
    std::fs::write(scene.root().join("plain.txt"), b"just text, no pixels").unwrap();
    for args in [
        &["capacity", "plain.txt"][..],
        &["inspect", "plain.txt"][..],
        &["embed", "--cover", "plain.txt", "--out", "s.bmp", "--public-key", "pub.svp",
          "--key-file", "k.svk", "--key-number", "1", "tree"][..],
    ] {
        let out = scene.run(args);
        assert_exit(&out, 4);
    }
}

/// A stego object whose (correctly encrypted) archive names a path outside
/// the extraction root. The binary must refuse with exit 7 before writing
/// anything — built by hand because the library refuses to pack such paths.
#[test]
fn unsafe_archive_path_exits_7_and_writes_nothing() {
    let scene = Scene::new();
    let root = scene.root();

    let keypair = generate_keypair(512, 4242).unwrap();
    save_public_key(&root.join("evil-pub.svp"), &keypair.public).unwrap();
    save_private_key(&root.join("evil-priv.svs"), &keypair.private).unwrap();

    // archive: magic, count=2, first entry innocent, second escapes
    let mut archive = Vec::new();
    archive.extend_from_slice(b"SVA1");
    archive.extend_from_slice(&2u32.to_le_bytes());
    for (path, payload) in [("ok.txt", &b"fine"[..]), ("../evil.sh", &b"rm -rf"[..])] {
        archive.extend_from_slice(&(path.len() as u16).to_le_bytes());
        archive.extend_from_slice(path.as_bytes());
        archive.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        archive.extend_from_slice(&crc32(payload).to_le_bytes());
        archive.extend_from_slice(payload);
    }

    let mut rng = SplitMix64::new(99);
    let secret = SessionSecret::generate(&mut rng);
    let ciphertext = cipher_by_name("des-hybrid")
        .unwrap()
        .seal(&archive, &secret)
        .unwrap();
    let wrapped = wrap_secret(&secret, &keypair.public, &mut rng).unwrap();
    std::fs::write(root.join("evil.svk"), encode_key_file(&wrapped)).unwrap();

    let cover = parse_cover(synth_bmp(80, 80, 5)).unwrap();
    let spec = PermutationSpec {
        key_number: 1,
        perm_salt: secret.perm_salt,
        domain_size: cover.carrier_count() - HEADER_CARRIER_COST,
    };
    let stego = embed(&cover, &ciphertext, 1, &spec, true).unwrap();
    std::fs::write(root.join("evil.bmp"), serialize_cover(&stego)).unwrap();

    let out = scene.run(&[
        "extract", "--stego", "evil.bmp", "--key-file", "evil.svk", "--private-key",
        "evil-priv.svs", "--key-number", "1", "--out-dir", "trap",
    ]);
    assert_exit(&out, 7);
    assert!(stderr_of(&out).contains("unsafe path"));
    assert!(!root.join("trap").exists(), "nothing may be written");
    assert!(!root.join("evil.sh").exists(), "the escape must not land");
}

// --- capacity / inspect / diff ---------------------------------------------------

#[test]
fn capacity_reports_the_documented_numbers() {
    let scene = Scene::new();
    let out = scene.run(&["capacity", "cover.bmp"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("carriers: 30000"), "got:\n{text}");
    assert!(text.contains("header cost: 192 carriers"), "got:\n{text}");
    assert!(text.contains("k=1: 3726 bytes"), "got:\n{text}");
    assert!(text.contains("k=2: 7452 bytes"), "got:\n{text}");

    let out = scene.run(&["capacity", "cover.bmp", "-k", "2"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("k=2: 7452 bytes"));
    assert!(!text.contains("k=1:"));
}

#[test]
fn inspect_prints_the_header_fields() {
    let scene = Scene::new();
    scene.embed_tree(&["-k", "2"]);
    let out = scene.run(&["inspect", "stego.bmp"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("version: 1"), "got:\n{text}");
    assert!(text.contains("k: 2"), "got:\n{text}");
    assert!(text.contains("flags: 0x01 (encrypted)"), "got:\n{text}");
    assert!(text.contains("payload length: "), "got:\n{text}");
    assert!(text.contains("payload crc32: 0x"), "got:\n{text}");
}

#[test]
fn diff_reports_distortion_and_a_clean_audit() {
    let scene = Scene::new();
    scene.embed_tree(&[]);
    let out = scene.run(&["diff", "--cover", "cover.bmp", "--stego", "stego.bmp"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("mse="), "got:\n{text}");
    assert!(text.contains("psnr_db="), "got:\n{text}");
    assert!(text.contains("changed_outside_carriers=0"), "got:\n{text}");
    assert!(text.contains("audit: ok"), "got:\n{text}");
}

#[test]
fn diff_against_an_unrelated_file_is_a_usage_error() {
    let scene = Scene::new();
    std::fs::write(scene.root().join("other.bmp"), synth_bmp(40, 40, 1)).unwrap();
    let out = scene.run(&["diff", "--cover", "cover.bmp", "--stego", "other.bmp"]);
    assert_exit(&out, 1);
}

// --- bench -----------------------------------------------------------------------

#[test]
fn bench_writes_one_csv_row_per_size_mode_phase_and_rep() {
    let scene = Scene::new();
    let out = scene.run(&[
        "bench", "--sizes", "2000,3000", "--repetitions", "2", "--rng-seed", "8",
        "--csv", "bench.csv",
    ]);
    assert_exit(&out, 0);

    let csv = std::fs::read_to_string(scene.root().join("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("size_bytes,mode,phase,seconds"));
    let rows: Vec<&str> = lines.collect();
    // 2 sizes × 3 modes × 4 phases × 2 repetitions
    assert_eq!(rows.len(), 48, "csv:\n{csv}");
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4, "bad row: {row}");
        assert!(["2000", "3000"].contains(&fields[0]), "bad size: {row}");
        assert!(["hybrid", "rsa-direct", "des-only"].contains(&fields[1]), "bad mode: {row}");
        assert!(["encrypt", "embed", "extract", "decrypt"].contains(&fields[2]), "bad phase: {row}");
        let secs: f64 = fields[3].parse().expect("seconds parse");
        assert!(secs >= 0.0);
    }
    for (size, mode, phase) in
        [("2000", "hybrid", "encrypt"), ("3000", "des-only", "decrypt")]
    {
        let count = rows
            .iter()
            .filter(|r| {
                let f: Vec<&str> = r.split(',').collect();
                f[0] == size && f[1] == mode && f[2] == phase
            })
            .count();
        assert_eq!(count, 2, "expected one row per repetition for {size}/{mode}/{phase}");
    }
}

#[test]
fn bench_rejects_bad_requests() {
    let scene = Scene::new();
    for args in [
        &["bench", "--sizes", "0"][..],
        &["bench", "--sizes", "1000", "--repetitions", "0"][..],
        &["bench", "--sizes", "1000", "--modes", "quantum"][..],
    ] {
        let out = scene.run(args);
        assert_exit(&out, 1);
    }
}
