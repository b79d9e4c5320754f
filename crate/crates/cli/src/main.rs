use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pfec::analysis::{
    check_table, code_point_report, failcurve, log_grid, simulate_channel, size_t, table_csv, SizingInput, TableId,
    POW2_LENGTHS,
};
use pfec::channel::{corrupt_bytes, FaultModel};
use pfec::frame::{
    split_stream, write_stream, Codec, FrameEnvelope, FrameHeader, Mode, MultiplierPolicy, Session, Status,
    DEFAULT_CHUNK_SYMBOLS, HEADER_LEN,
};
use pfec::interleave::derive_multiplier;
use pfec::par::{decode_batch, encode_batch, thread_cap};
use pfec::ring::{RingElement, RingParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

mod config;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Error carrying the process exit code.
struct Exit(u8, String);

impl Exit {
    fn usage(e: impl ToString) -> Self {
        Exit(EXIT_USAGE, e.to_string())
    }

    fn io(e: impl ToString) -> Self {
        Exit(EXIT_IO, e.to_string())
    }
}

type Res<T> = std::result::Result<T, Exit>;

#[derive(Parser)]
#[command(name = "pfec", version, about = "Error correction for polynomial frames over Z_2^k[X]/(X^N+1)")]
struct Cli {
    /// key=value file supplying defaults for flags not given on the command line
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rr,
    BchGen,
    BchIdem,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rr => Mode::Rr,
            ModeArg::BchGen => Mode::BchGen,
            ModeArg::BchIdem => Mode::BchIdem,
        }
    }
}

#[derive(clap::Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    t: usize,
    /// BCH window start
    #[arg(long, default_value_t = 1)]
    b: usize,
    /// Fixed interleaver multiplier (odd, coprime to 2N)
    #[arg(long, conflicts_with = "seed")]
    a: Option<u64>,
    /// Public flow seed; derives a fresh multiplier per frame
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    no_crc: bool,
    /// Symbols per CRC-16 chunk
    #[arg(long, default_value_t = DEFAULT_CHUNK_SYMBOLS)]
    chunk: usize,
}

impl CodeArgs {
    fn session(&self) -> Res<Session> {
        let codec = Codec::build(self.mode.into(), self.n, self.k, self.t, self.b).map_err(Exit::usage)?;
        let multiplier = match (&self.seed, self.a) {
            (Some(s), _) => MultiplierPolicy::PerFrame(s.as_bytes().to_vec()),
            (None, Some(a)) => MultiplierPolicy::Fixed(a),
            (None, None) => MultiplierPolicy::Fixed(derive_multiplier(b"pfec", 0, self.n).map_err(Exit::usage)?.a()),
        };
        if let MultiplierPolicy::Fixed(a) = multiplier {
            pfec::interleave::InterleaveParams::new(a, self.n).map_err(Exit::usage)?;
        }
        Ok(Session::new(codec, multiplier).with_crc(!self.no_crc).with_chunk_symbols(self.chunk))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a file into a .pfec frame stream
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a .pfec stream back to the original bytes
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<String>,
    },
    /// Corrupt frame payloads with a seeded fault model
    Corrupt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// iid:P (per symbol) or burst:B (bytes)
        #[arg(long)]
        model: FaultModel,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        include_header: bool,
    },
    /// Emit the sizing, burst, complexity, odd-length and failure-curve tables
    Tables {
        /// 1-5, failcurve or all
        #[arg(long, default_value = "all")]
        which: String,
        /// Output directory; CSV goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against the printed values; exit 1 on any mismatch
        #[arg(long)]
        check: bool,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        p_min: f64,
        #[arg(long, default_value_t = 0.2)]
        p_max: f64,
        #[arg(long, default_value_t = 60)]
        points: usize,
    },
    /// Size t for a per-symbol error rate and failure budget
    Size {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 32)]
        k: u32,
    },
    /// Run the seeded channel simulation and print a JSON report
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        model: FaultModel,
        #[arg(long, default_value_t = 1000)]
        frames: u64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
}

fn read(path: &Path) -> Res<Vec<u8>> {
    fs::read(path).map_err(|e| Exit::io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Res<()> {
    fs::write(path, data).map_err(|e| Exit::io(format!("{}: {e}", path.display())))
}

fn frame_bytes(codec: &Codec) -> usize {
    codec.message_len() * codec.params().k() as usize / 8
}

/// u64 LE length prefix, then the data, then zeros up to a whole number of
/// frames.
fn pad(data: &[u8], per_frame: usize) -> Vec<u8> {
    let mut v = (data.len() as u64).to_le_bytes().to_vec();
    v.extend_from_slice(data);
    let frames = v.len().div_ceil(per_frame).max(1);
    v.resize(frames * per_frame, 0);
    v
}

fn unpad(v: &[u8]) -> Res<&[u8]> {
    let len = v
        .get(..8)
        .map(|b| u64::from_le_bytes(b.try_into().unwrap()) as usize)
        .filter(|&l| l <= v.len() - 8)
        .ok_or_else(|| Exit(EXIT_FAIL, "length prefix is damaged".into()))?;
    Ok(&v[8..8 + len])
}

fn to_message(chunk: &[u8], p: RingParams) -> RingElement {
    let s = p.k() as usize / 8;
    let mut c = vec![0u64; p.n()];
    for (slot, sym) in c.iter_mut().zip(chunk.chunks(s)) {
        let mut w = [0u8; 8];
        w[..s].copy_from_slice(sym);
        *slot = u64::from_le_bytes(w);
    }
    RingElement::new(p, c).expect("symbols fit k bits")
}

fn from_message(m: &RingElement, len: usize, out: &mut Vec<u8>) {
    let s = m.params().k() as usize / 8;
    for &c in &m.coeffs()[..len] {
        out.extend_from_slice(&c.to_le_bytes()[..s]);
    }
}

fn status_str(s: &Status) -> String {
    match s {
        Status::Ok => "Ok".into(),
        Status::CorrectedErrors { errors, erasures } => format!("CorrectedErrors({errors},{erasures})"),
        Status::Fail(why) => format!("Fail({why})"),
    }
}

fn cmd_encode(code: &CodeArgs, input: &Path, out: &Path) -> Res<()> {
    let session = code.session()?;
    let data = read(input)?;
    let per = frame_bytes(&session.codec);
    let p = session.codec.params();
    let msgs: Vec<RingElement> = pad(&data, per).chunks(per).map(|c| to_message(c, p)).collect();
    let frames = encode_batch(&session, &msgs, 0, thread_cap()).map_err(Exit::usage)?;
    for (i, f) in frames.iter().enumerate() {
        eprintln!("frame {i}: N={} k={} t={} a/index={} bytes={}", f.header.n, f.header.k, f.header.t, f.header.a_or_index, f.to_bytes().len());
    }
    write(out, &write_stream(&frames))
}

fn cmd_decode(input: &Path, out: &Path, seed: Option<&str>) -> Res<()> {
    let bytes = read(input)?;
    let raw = split_stream(&bytes).map_err(Exit::io)?;
    let frames = raw
        .iter()
        .map(|b| FrameEnvelope::from_bytes(b))
        .collect::<pfec::Result<Vec<_>>>()
        .map_err(Exit::io)?;
    let Some(first) = frames.first() else {
        return Err(Exit::io("empty stream"));
    };
    let session = Session::from_header(&first.header, seed.map(str::as_bytes)).map_err(Exit::usage)?;
    let len = session.codec.message_len();
    let reports = decode_batch(&session, &frames, thread_cap());
    let mut data = Vec::with_capacity(frames.len() * frame_bytes(&session.codec));
    let mut failed = 0;
    for (i, r) in reports.into_iter().enumerate() {
        let (status, msg) = match r {
            Ok(rep) => (status_str(&rep.status), rep.message),
            Err(e) => (format!("Fail({e})"), None),
        };
        eprintln!("frame {i}: {status}");
        match msg {
            Some(m) => from_message(&m, len, &mut data),
            None => {
                failed += 1;
                data.resize(data.len() + frame_bytes(&session.codec), 0);
            }
        }
    }
    let body = if failed == 0 { unpad(&data)? } else { unpad(&data).unwrap_or(&data) };
    write(out, body)?;
    if failed > 0 {
        return Err(Exit(EXIT_FAIL, format!("{failed} of {} frames failed", frames.len())));
    }
    Ok(())
}

fn cmd_corrupt(input: &Path, out: &Path, model: &FaultModel, seed: u64, include_header: bool) -> Res<()> {
    let bytes = read(input)?;
    let raw = split_stream(&bytes).map_err(Exit::io)?;
    let mut frames = Vec::with_capacity(raw.len());
    let mut total = 0;
    for (i, f) in raw.iter().enumerate() {
        let h = FrameHeader::parse(f).map_err(Exit::io)?;
        let mut f = f.to_vec();
        let lo = if include_header { 0 } else { HEADER_LEN };
        let hi = HEADER_LEN + h.n as usize * h.symbol_bytes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        total += corrupt_bytes(&mut f[lo..hi], h.symbol_bytes(), model, &mut rng).map_err(Exit::usage)?;
        frames.push(f);
    }
    eprintln!("corrupted {total} units in {} frames", frames.len());
    let mut outb = Vec::new();
    for f in frames {
        outb.extend_from_slice(&(f.len() as u32).to_le_bytes());
        outb.extend(f);
    }
    write(out, &outb)
}

fn emit(name: &str, csv: &str, out: Option<&Path>) -> Res<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Exit::io(format!("{}: {e}", dir.display())))?;
            write(&dir.join(name), csv.as_bytes())
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_tables(which: &str, out: Option<&Path>, check: bool, n: Option<usize>, t: Option<usize>, p_min: f64, p_max: f64, points: usize) -> Res<()> {
    let (ids, curve): (Vec<TableId>, bool) = match which {
        "all" => (TableId::ALL.to_vec(), true),
        "failcurve" => (Vec::new(), true),
        w => {
            let id = w.parse().ok().and_then(TableId::from_number).ok_or_else(|| Exit::usage(format!("unknown table {w:?}")))?;
            (vec![id], false)
        }
    };
    let mut mismatches = 0;
    for id in ids {
        let t = table_csv(id).map_err(Exit::usage)?;
        emit(t.file, &t.to_csv(), out)?;
        if check {
            let (cells, bad) = check_table(id).map_err(Exit::usage)?;
            for m in &bad {
                eprintln!("table {} row {} col {}: expected {}, got {}", m.table, m.row, m.col, m.expected, m.got);
            }
            eprintln!("table {}: {cells} cells, {} mismatches", id.number(), bad.len());
            mismatches += bad.len();
        }
    }
    if curve {
        if !(p_min > 0.0 && p_min < p_max && p_max < 1.0 && points >= 2) {
            return Err(Exit::usage("failcurve needs 0 < p-min < p-max < 1 and at least 2 points"));
        }
        let lengths = n.map_or(POW2_LENGTHS.to_vec(), |n| vec![n]);
        let mut csv = String::new();
        for (i, n) in lengths.into_iter().enumerate() {
            let part = failcurve(n, t.unwrap_or(n / 32), &log_grid(p_min, p_max, points)).to_csv();
            csv.push_str(if i == 0 { &part } else { part.split_once('\n').map_or("", |x| x.1) });
        }
        emit("failcurve.csv", &csv, out)?;
    }
    if mismatches > 0 {
        return Err(Exit(EXIT_FAIL, format!("{mismatches} cells differ from the printed tables")));
    }
    Ok(())
}

fn cmd_size(n: usize, p: f64, eps: f64, k: u32) -> Res<()> {
    let input = SizingInput::new(n, p, eps).map_err(Exit::usage)?;
    let t = size_t(&input);
    let r = code_point_report(n, k, t).map_err(Exit::usage)?;
    let v = json!({
        "N": n, "p": p, "eps": eps, "k": k, "t": t,
        "overhead": r.overhead, "overhead_percent": r.overhead_percent(), "rate": r.rate,
        "tau_max": r.tau_max, "rho_max": r.rho_max,
        "burst_unknown_bytes": r.burst_unknown_bytes, "burst_erasure_bytes": r.burst_erasure_bytes,
        "syndrome_ops": r.syndrome_ops,
    });
    println!("{v}");
    Ok(())
}

fn cmd_simulate(code: &CodeArgs, model: &FaultModel, frames: u64, seed: u64) -> Res<()> {
    let session = code.session()?;
    let r = simulate_channel(&session, model, frames, seed).map_err(Exit::usage)?;
    println!("{}", serde_json::to_string(&r).map_err(Exit::io)?);
    Ok(())
}

fn run() -> Res<()> {
    let args = config::merged_args(std::env::args_os().collect()).map_err(|e| Exit(EXIT_IO, e))?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return if code == 0 { Ok(()) } else { Err(Exit(code, String::new())) };
        }
    };
    match &cli.cmd {
        Cmd::Encode { code, input, out } => cmd_encode(code, input, out),
        Cmd::Decode { input, out, seed } => cmd_decode(input, out, seed.as_deref()),
        Cmd::Corrupt {
            input,
            out,
            model,
            rng_seed,
            include_header,
        } => cmd_corrupt(input, out, model, *rng_seed, *include_header),
        Cmd::Tables {
            which,
            out,
            check,
            n,
            t,
            p_min,
            p_max,
            points,
        } => cmd_tables(which, out.as_deref(), *check, *n, *t, *p_min, *p_max, *points),
        Cmd::Size { n, p, eps, k } => cmd_size(*n, *p, *eps, *k),
        Cmd::Simulate {
            code,
            model,
            frames,
            rng_seed,
        } => cmd_simulate(code, model, *frames, *rng_seed),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("pfec: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
