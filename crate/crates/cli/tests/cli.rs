use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pfec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfec")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn sample(path: &str, len: usize) -> Vec<u8> {
    let data: Vec<u8> = (0..len).map(|i| (i * 131 + i / 7) as u8).collect();
    fs::write(path, &data).unwrap();
    data
}

fn encode(extra: &[&str], input: &str, out: &str) -> Output {
    let mut a = vec!["encode", "--in", input, "--out", out];
    a.extend_from_slice(extra);
    pfec(&a)
}

#[test]
fn roundtrip_each_mode() {
    let d = TempDir::new().unwrap();
    let (i, e, o) = (p(&d, "in"), p(&d, "enc"), p(&d, "out"));
    for (len, args) in [
        (3000, &["--mode", "rr", "--N", "64", "--k", "16", "--t", "4"][..]),
        (0, &["--mode", "rr", "--N", "32", "--k", "8", "--t", "2", "--no-crc"][..]),
        (777, &["--mode", "bch-gen", "--N", "63", "--k", "32", "--t", "3", "--seed", "flow"][..]),
        (500, &["--mode", "bch-idem", "--N", "31", "--k", "8", "--t", "2", "--chunk", "4"][..]),
    ] {
        let data = sample(&i, len);
        assert_eq!(code(&encode(args, &i, &e)), 0, "{args:?}");
        let mut dec = vec!["decode", "--in", &e, "--out", &o];
        if args.contains(&"--seed") {
            dec.extend(["--seed", "flow"]);
        }
        let r = pfec(&dec);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
        assert_eq!(fs::read(&o).unwrap(), data);
    }
}

#[test]
fn one_mebibyte_roundtrip() {
    let d = TempDir::new().unwrap();
    let (i, e, o) = (p(&d, "in"), p(&d, "enc"), p(&d, "out"));
    let data = sample(&i, 1 << 20);
    assert_eq!(code(&encode(&["--mode", "rr", "--N", "1024", "--k", "32", "--t", "8"], &i, &e)), 0);
    assert_eq!(code(&pfec(&["decode", "--in", &e, "--out", &o])), 0);
    assert_eq!(fs::read(&o).unwrap(), data);
}

#[test]
fn bad_parameters_exit_2() {
    let d = TempDir::new().unwrap();
    let i = p(&d, "in");
    sample(&i, 10);
    let e = p(&d, "enc");
    assert_eq!(code(&encode(&["--mode", "rr", "--N", "16", "--k", "8", "--t", "8"], &i, &e)), 2);
    assert_eq!(code(&encode(&["--mode", "rr", "--N", "16", "--k", "12", "--t", "2"], &i, &e)), 2);
    assert_eq!(code(&encode(&["--mode", "rr", "--N", "16", "--k", "8", "--t", "2", "--a", "4"], &i, &e)), 2);
    assert_eq!(code(&pfec(&["size", "--N", "64", "--p", "2", "--eps", "1e-9"])), 2);
    assert_eq!(code(&pfec(&["frobnicate"])), 2);
    assert!(!Path::new(&e).exists());
}

#[test]
fn encode_and_corrupt_are_deterministic() {
    let d = TempDir::new().unwrap();
    let i = p(&d, "in");
    sample(&i, 2000);
    let args = ["--mode", "rr", "--N", "64", "--k", "8", "--t", "3", "--seed", "s"];
    let (a, b) = (p(&d, "a"), p(&d, "b"));
    encode(&args, &i, &a);
    encode(&args, &i, &b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let (x, y, z) = (p(&d, "x"), p(&d, "y"), p(&d, "z"));
    for (out, seed) in [(&x, "4"), (&y, "4"), (&z, "5")] {
        assert_eq!(code(&pfec(&["corrupt", "--in", &a, "--out", out, "--model", "iid:0.05", "--rng-seed", seed])), 0);
    }
    assert_eq!(fs::read(&x).unwrap(), fs::read(&y).unwrap());
    assert_ne!(fs::read(&x).unwrap(), fs::read(&z).unwrap());

    pfec(&["corrupt", "--in", &a, "--out", &x, "--model", "iid:0", "--include-header"]);
    assert_eq!(fs::read(&x).unwrap(), fs::read(&a).unwrap());
}

#[test]
fn single_symbol_corruption_is_corrected() {
    let d = TempDir::new().unwrap();
    let (i, e, o) = (p(&d, "in"), p(&d, "enc"), p(&d, "out"));
    let data = sample(&i, 100);
    encode(&["--mode", "bch-gen", "--N", "31", "--k", "8", "--t", "2"], &i, &e);
    let mut bytes = fs::read(&e).unwrap();
    // stream prefix 4 + header 24, then payload symbols
    bytes[4 + 24 + 5] ^= 0x5A;
    fs::write(&e, &bytes).unwrap();
    let r = pfec(&["decode", "--in", &e, "--out", &o]);
    assert_eq!(code(&r), 0);
    assert!(String::from_utf8_lossy(&r.stderr).contains("CorrectedErrors(1,0)"));
    assert_eq!(fs::read(&o).unwrap(), data);

    // far beyond t: the frame fails and decode exits 1
    for v in &mut bytes[4 + 24..4 + 24 + 20] {
        *v ^= 0xFF;
    }
    fs::write(&e, &bytes).unwrap();
    assert_eq!(code(&pfec(&["decode", "--in", &e, "--out", &o])), 1);
}

#[test]
fn one_corrupt_byte_per_frame() {
    let d = TempDir::new().unwrap();
    let (i, e, c, o) = (p(&d, "in"), p(&d, "enc"), p(&d, "bad"), p(&d, "out"));
    let data = sample(&i, 4000);
    encode(&["--mode", "bch-gen", "--N", "63", "--k", "16", "--t", "3"], &i, &e);
    assert_eq!(code(&pfec(&["corrupt", "--in", &e, "--out", &c, "--model", "burst:1", "--rng-seed", "8"])), 0);
    let r = pfec(&["decode", "--in", &c, "--out", &o]);
    assert_eq!(code(&r), 0);
    let log = String::from_utf8_lossy(&r.stderr);
    assert_eq!(log.matches("CorrectedErrors(1,0)").count(), log.lines().count());
    assert_eq!(fs::read(&o).unwrap(), data);
}

// B bytes at a uniform byte offset touch ceil(8B/k) or one more k-bit symbols,
// always contiguous.
#[test]
fn burst_span_in_symbols() {
    let d = TempDir::new().unwrap();
    let (i, e, c) = (p(&d, "in"), p(&d, "enc"), p(&d, "bad"));
    sample(&i, 20_000);
    encode(&["--mode", "rr", "--N", "64", "--k", "32", "--t", "4", "--no-crc"], &i, &e);
    let clean = fs::read(&e).unwrap();
    let frame = 4 + 24 + 64 * 4;
    for b in [1usize, 3, 4, 9] {
        let arg = format!("burst:{b}");
        pfec(&["corrupt", "--in", &e, "--out", &c, "--model", &arg, "--rng-seed", "2"]);
        let bad = fs::read(&c).unwrap();
        let want = b.div_ceil(4);
        for (x, y) in clean.chunks(frame).zip(bad.chunks(frame)) {
            assert_eq!(x[..28], y[..28]);
            let syms: Vec<usize> = (0..64).filter(|&j| x[28 + 4 * j..32 + 4 * j] != y[28 + 4 * j..32 + 4 * j]).collect();
            assert!(syms.len() == want || syms.len() == want + 1, "B={b}: {syms:?}");
            assert_eq!(syms.last().unwrap() - syms[0] + 1, syms.len());
        }
    }
}

#[test]
fn truncated_or_garbage_stream_exits_3() {
    let d = TempDir::new().unwrap();
    let (i, e, o) = (p(&d, "in"), p(&d, "enc"), p(&d, "out"));
    sample(&i, 400);
    encode(&["--mode", "rr", "--N", "32", "--k", "16", "--t", "2"], &i, &e);
    let bytes = fs::read(&e).unwrap();
    fs::write(&e, &bytes[..bytes.len() - 3]).unwrap();
    assert_eq!(code(&pfec(&["decode", "--in", &e, "--out", &o])), 3);
    fs::write(&e, b"not a frame stream").unwrap();
    assert_eq!(code(&pfec(&["decode", "--in", &e, "--out", &o])), 3);
    assert_eq!(code(&pfec(&["decode", "--in", &p(&d, "missing"), "--out", &o])), 3);
}

#[test]
fn tables_check_and_files() {
    let d = TempDir::new().unwrap();
    let out = p(&d, "t");
    let r = pfec(&["tables", "--which", "all", "--check", "--out", &out]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    for f in ["sizing.csv", "sizing_odd.csv", "bursts.csv", "complexity.csv", "oddparams.csv", "failcurve.csv"] {
        assert!(d.path().join("t").join(f).exists(), "{f}");
    }
    assert_eq!(code(&pfec(&["tables", "--which", "6"])), 2);
}

#[test]
fn failcurve_is_monotone() {
    let r = pfec(&["tables", "--which", "failcurve", "--N", "1024", "--t", "32", "--points", "25"]);
    assert_eq!(code(&r), 0);
    let csv = String::from_utf8(r.stdout).unwrap();
    let v: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(v.len(), 25);
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn size_picks_t() {
    let t_for = |n: &str, prob: &str, eps: &str| {
        let r = pfec(&["size", "--N", n, "--p", prob, "--eps", eps]);
        assert_eq!(code(&r), 0);
        let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
        v["t"].as_u64().unwrap()
    };
    assert_eq!(t_for("1024", "1e-6", "1e-9"), 8);
    assert_eq!(t_for("4096", "1e-5", "1e-9"), 9);
    assert_eq!(t_for("1024", "0", "1e-9"), 7);
}

#[test]
fn config_file_fills_missing_flags() {
    let d = TempDir::new().unwrap();
    let (i, e, o, c) = (p(&d, "in"), p(&d, "enc"), p(&d, "out"), p(&d, "cfg"));
    let data = sample(&i, 300);
    fs::write(&c, "mode = rr\nN = 32\nk = 8\nt = 9 # overridden\nno-crc = true\n").unwrap();
    assert_eq!(code(&pfec(&["encode", "--config", &c, "--t", "3", "--in", &i, "--out", &e])), 0);
    assert_eq!(code(&pfec(&["decode", "--in", &e, "--out", &o])), 0);
    assert_eq!(fs::read(&o).unwrap(), data);
    assert_eq!(code(&pfec(&["encode", "--config", &p(&d, "nope"), "--in", &i, "--out", &e])), 3);
}
