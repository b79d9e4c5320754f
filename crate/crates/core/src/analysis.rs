//! Sizing rule, exact binomial tails, the code-point tables and a seeded
//! end-to-end channel simulator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{inject_symbols, FaultModel};
use crate::error::{Error, Result};
use crate::frame::{encode_and_send, recv_and_decode, Session, Status};
use crate::gf2::ord2_mod;
use crate::par::map_indexed_with;
use crate::ring::RingElement;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizingInput {
    pub n: usize,
    pub p: f64,
    pub eps: f64,
}

impl SizingInput {
    pub fn new(n: usize, p: f64, eps: f64) -> Result<Self> {
        if n == 0 || !(0.0..1.0).contains(&p) || !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParams(format!("sizing needs N > 0, 0 <= p < 1, 0 < eps < 1 (N={n}, p={p}, eps={eps})")));
        }
        Ok(Self { n, p, eps })
    }
}

/// `t = ceil(Np + sqrt(2 Np ln(1/eps)) + ln(1/eps) / 3)`.
pub fn size_t(input: &SizingInput) -> usize {
    let mu = input.n as f64 * input.p;
    let l = (1.0 / input.eps).ln();
    (mu + (2.0 * mu * l).sqrt() + l / 3.0).ceil() as usize
}

fn ln_choose(n: usize, j: usize) -> f64 {
    let j = j.min(n - j);
    (1..=j).map(|i| ((n - j + i) as f64 / i as f64).ln()).sum()
}

/// `ln Pr[Bin(n, p) = j]` for each `j` in `lo..=n`; `None` marks an exact zero.
fn log_pmf_from(n: usize, p: f64, lo: usize) -> Vec<Option<f64>> {
    if p <= 0.0 || p >= 1.0 {
        let hit = if p <= 0.0 { 0 } else { n };
        return (lo..=n).map(|j| (j == hit).then_some(0.0)).collect();
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut l = ln_choose(n, lo) + lo as f64 * lp + (n - lo) as f64 * lq;
    let mut out = Vec::with_capacity(n + 1 - lo);
    for j in lo..=n {
        out.push(Some(l));
        if j < n {
            l += ((n - j) as f64 / (j + 1) as f64).ln() + lp - lq;
        }
    }
    out
}

/// Neumaier-compensated sum of `exp(l)` over the finite entries, scaled by
/// the largest one so tiny tails do not underflow early.
fn sum_exp(logs: &[Option<f64>]) -> f64 {
    let Some(max) = logs.iter().flatten().copied().reduce(f64::max) else {
        return 0.0;
    };
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in logs.iter().flatten().map(|l| (l - max).exp()) {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    (s + c) * max.exp()
}

fn binom_pmf(n: usize, p: f64, j: usize) -> f64 {
    match log_pmf_from(n, p, j)[0] {
        Some(l) => l.exp(),
        None => 0.0,
    }
}

/// `Pr[Bin(N, p) > t]`, summed exactly in log space.
pub fn fail_prob_iid(n: usize, p: f64, t: usize) -> f64 {
    if t >= n {
        return 0.0;
    }
    sum_exp(&log_pmf_from(n, p, t + 1)).min(1.0)
}

/// Joint tail over `(tau, rho)` with `2 tau + rho > 2t`, errors and
/// erasures independent binomials.
pub fn fail_prob_errors_erasures(n: usize, p_err: f64, p_era: f64, t: usize) -> f64 {
    let budget = 2 * t;
    let mut total = if budget >= n { 0.0 } else { fail_prob_iid(n, p_era, budget) };
    for rho in 0..=budget.min(n) {
        let w = binom_pmf(n, p_era, rho);
        if w > 0.0 {
            total += w * fail_prob_iid(n, p_err, (budget - rho) / 2);
        }
    }
    total.min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodePointReport {
    pub n: usize,
    pub k: u32,
    pub t: usize,
    pub overhead: f64,
    pub rate: f64,
    pub tau_max: usize,
    pub rho_max: usize,
    pub burst_unknown_bytes: usize,
    pub burst_erasure_bytes: usize,
    pub syndrome_ops: usize,
}

impl CodePointReport {
    /// Overhead in percent, three decimals, ties to even.
    pub fn overhead_percent(&self) -> String {
        round_half_even(200 * self.t as u128, self.n as u128, 3)
    }

    pub fn rate_str(&self) -> String {
        round_half_even((self.n - 2 * self.t) as u128, self.n as u128, 6)
    }
}

pub fn code_point_report(n: usize, k: u32, t: usize) -> Result<CodePointReport> {
    if 2 * t >= n {
        return Err(Error::InvalidParams(format!("2t = {} leaves no message symbols at N = {n}", 2 * t)));
    }
    if k == 0 || k > 64 || !k.is_multiple_of(8) {
        return Err(Error::InvalidParams(format!("byte tolerances need k a multiple of 8 up to 64, got {k}")));
    }
    let s = k as usize / 8;
    Ok(CodePointReport {
        n,
        k,
        t,
        overhead: 2.0 * t as f64 / n as f64,
        rate: 1.0 - 2.0 * t as f64 / n as f64,
        tau_max: t,
        rho_max: 2 * t,
        burst_unknown_bytes: t * s,
        burst_erasure_bytes: 2 * t * s,
        syndrome_ops: 2 * t * n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OddLengthParams {
    pub m_n: u32,
    pub deg_bound: usize,
    pub ratio: f64,
}

/// `m_N = ord_N(2)` and the generator degree bound `2t m_N`.
pub fn odd_length_params(n: usize, t: usize) -> Result<OddLengthParams> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("N = {n} is even")));
    }
    let m_n = ord2_mod(n)?;
    let deg_bound = 2 * t * m_n as usize;
    Ok(OddLengthParams {
        m_n,
        deg_bound,
        ratio: deg_bound as f64 / n as f64,
    })
}

/// `num / den` in decimal with `decimals` places, ties to even.
pub fn round_half_even(num: u128, den: u128, decimals: u32) -> String {
    let scaled = num * 10u128.pow(decimals);
    let (mut q, r) = (scaled / den, scaled % den);
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    let p = 10u128.pow(decimals);
    if decimals == 0 {
        return q.to_string();
    }
    format!("{}.{:0width$}", q / p, q % p, width = decimals as usize)
}

pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let ph = hits as f64 / n;
    let z2 = z * z;
    let centre = (ph + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

// Tables.

pub const TABLE_EPS: f64 = 1e-9;
pub const POW2_LENGTHS: [usize; 4] = [1024, 2048, 4096, 8192];
pub const ODD_LENGTHS: [usize; 4] = [1025, 2049, 4097, 8193];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    A,
    B,
}

impl Setting {
    pub fn p(self) -> f64 {
        match self {
            Setting::A => 1e-6,
            Setting::B => 1e-5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Setting::A => "A",
            Setting::B => "B",
        }
    }

    pub fn t(self, n: usize) -> usize {
        size_t(&SizingInput {
            n,
            p: self.p(),
            eps: TABLE_EPS,
        })
    }
}

const SETTINGS: [Setting; 2] = [Setting::A, Setting::B];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub file: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    Sizing,
    SizingOdd,
    Bursts,
    Complexity,
    OddParams,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::Sizing,
        TableId::SizingOdd,
        TableId::Bursts,
        TableId::Complexity,
        TableId::OddParams,
    ];

    /// Tables are numbered 1 to 5 in the order above.
    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn number(self) -> u8 {
        Self::ALL.iter().position(|&x| x == self).unwrap() as u8 + 1
    }
}

fn report(n: usize, k: u32, t: usize) -> CodePointReport {
    code_point_report(n, k, t).expect("table code points have 2t < N")
}

fn all_lengths() -> impl Iterator<Item = usize> {
    POW2_LENGTHS.into_iter().chain(ODD_LENGTHS)
}

/// Machine-readable CSV form.
pub fn table_csv(id: TableId) -> Result<Table> {
    let mut rows = Vec::new();
    let t = match id {
        TableId::Sizing | TableId::SizingOdd => {
            let lens = if id == TableId::Sizing { POW2_LENGTHS } else { ODD_LENGTHS };
            for n in lens {
                for s in SETTINGS {
                    let r = report(n, 32, s.t(n));
                    rows.push(vec![n.to_string(), "32".into(), s.name().into(), r.t.to_string(), r.overhead_percent(), r.rate_str()]);
                }
            }
            Table {
                file: if id == TableId::Sizing { "sizing.csv" } else { "sizing_odd.csv" },
                header: vec!["N", "k", "setting", "t", "overhead", "rate"],
                rows,
            }
        }
        TableId::Bursts => {
            for n in all_lengths() {
                for s in SETTINGS {
                    for k in [32, 64] {
                        let r = report(n, k, s.t(n));
                        rows.push(vec![
                            n.to_string(),
                            k.to_string(),
                            s.name().into(),
                            r.t.to_string(),
                            (k / 8).to_string(),
                            r.burst_unknown_bytes.to_string(),
                            r.burst_erasure_bytes.to_string(),
                        ]);
                    }
                }
            }
            Table {
                file: "bursts.csv",
                header: vec!["N", "k", "setting", "t", "s", "burst_unknown_bytes", "burst_erasure_bytes"],
                rows,
            }
        }
        TableId::Complexity => {
            for n in all_lengths() {
                for s in SETTINGS {
                    let r = report(n, 32, s.t(n));
                    rows.push(vec![n.to_string(), s.name().into(), r.t.to_string(), (2 * r.t).to_string(), r.syndrome_ops.to_string()]);
                }
            }
            Table {
                file: "complexity.csv",
                header: vec!["N", "setting", "t", "two_t", "syndrome_ops"],
                rows,
            }
        }
        TableId::OddParams => {
            for n in ODD_LENGTHS {
                let (a, b) = (odd_length_params(n, 8)?, odd_length_params(n, 9)?);
                rows.push(vec![
                    n.to_string(),
                    a.m_n.to_string(),
                    a.deg_bound.to_string(),
                    b.deg_bound.to_string(),
                    round_half_even(a.deg_bound as u128, n as u128, 3),
                ]);
            }
            Table {
                file: "oddparams.csv",
                header: vec!["N", "m_N", "deg_bound_t8", "deg_bound_t9", "ratio_t8"],
                rows,
            }
        }
    };
    Ok(t)
}

/// Computed values laid out like the printed tables, for cell comparison.
pub fn table_printed(id: TableId) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    match id {
        TableId::Sizing | TableId::SizingOdd => {
            let lens = if id == TableId::Sizing { POW2_LENGTHS } else { ODD_LENGTHS };
            for n in lens {
                let mut row = vec![n.to_string()];
                for s in SETTINGS {
                    let r = report(n, 32, s.t(n));
                    row.extend([r.t.to_string(), r.overhead_percent(), r.rate_str()]);
                }
                rows.push(row);
            }
        }
        TableId::Bursts => {
            for n in all_lengths() {
                let (a4, a8) = (report(n, 32, Setting::A.t(n)), report(n, 64, Setting::A.t(n)));
                let (b4, b8) = (report(n, 32, Setting::B.t(n)), report(n, 64, Setting::B.t(n)));
                let pair = |x: usize, y: usize| format!("{x}/{y}");
                rows.push(vec![
                    n.to_string(),
                    "4/8".into(),
                    pair(a4.burst_unknown_bytes, a8.burst_unknown_bytes),
                    pair(a4.burst_erasure_bytes, a8.burst_erasure_bytes),
                    "4/8".into(),
                    b4.t.to_string(),
                    pair(b4.burst_unknown_bytes, b8.burst_unknown_bytes),
                    pair(b4.burst_erasure_bytes, b8.burst_erasure_bytes),
                ]);
            }
        }
        TableId::Complexity => {
            for n in all_lengths() {
                let mut row = vec![n.to_string()];
                for s in SETTINGS {
                    let r = report(n, 32, s.t(n));
                    row.extend([(2 * r.t).to_string(), r.syndrome_ops.to_string()]);
                }
                rows.push(row);
            }
        }
        TableId::OddParams => {
            for r in table_csv(id)?.rows {
                rows.push(r);
            }
        }
    }
    Ok(rows)
}

const GOLDEN_SIZING: [[&str; 7]; 4] = [
    ["1024", "8", "1.562", "0.984375", "8", "1.562", "0.984375"],
    ["2048", "8", "0.781", "0.992188", "8", "0.781", "0.992188"],
    ["4096", "8", "0.391", "0.996094", "9", "0.439", "0.995605"],
    ["8192", "8", "0.195", "0.998047", "9", "0.220", "0.997803"],
];

const GOLDEN_SIZING_ODD: [[&str; 7]; 4] = [
    ["1025", "8", "1.561", "0.984390", "8", "1.561", "0.984390"],
    ["2049", "8", "0.781", "0.992191", "8", "0.781", "0.992191"],
    ["4097", "8", "0.391", "0.996095", "9", "0.439", "0.995607"],
    ["8193", "8", "0.195", "0.998047", "9", "0.220", "0.997803"],
];

const GOLDEN_BURSTS: [[&str; 8]; 8] = [
    ["1024", "4/8", "32/64", "64/128", "4/8", "8", "32/64", "64/128"],
    ["2048", "4/8", "32/64", "64/128", "4/8", "8", "32/64", "64/128"],
    ["4096", "4/8", "32/64", "64/128", "4/8", "9", "36/72", "72/144"],
    ["8192", "4/8", "32/64", "64/128", "4/8", "9", "36/72", "72/144"],
    ["1025", "4/8", "32/64", "64/128", "4/8", "8", "32/64", "64/128"],
    ["2049", "4/8", "32/64", "64/128", "4/8", "8", "32/64", "64/128"],
    ["4097", "4/8", "32/64", "64/128", "4/8", "9", "36/72", "72/144"],
    ["8193", "4/8", "32/64", "64/128", "4/8", "9", "36/72", "72/144"],
];

const GOLDEN_COMPLEXITY: [[&str; 5]; 8] = [
    ["1024", "16", "16384", "16", "16384"],
    ["2048", "16", "32768", "16", "32768"],
    ["4096", "16", "65536", "18", "73728"],
    ["8192", "16", "131072", "18", "147456"],
    ["1025", "16", "16400", "16", "16400"],
    ["2049", "16", "32784", "16", "32784"],
    ["4097", "16", "65552", "18", "73746"],
    ["8193", "16", "131088", "18", "147474"],
];

const GOLDEN_ODD_PARAMS: [[&str; 5]; 4] = [
    ["1025", "20", "320", "360", "0.312"],
    ["2049", "22", "352", "396", "0.172"],
    ["4097", "24", "384", "432", "0.094"],
    ["8193", "26", "416", "468", "0.051"],
];

/// The printed values, with thousands separators, percent signs and
/// `<=` prefixes stripped.
pub fn golden(id: TableId) -> Vec<Vec<&'static str>> {
    fn rows<const W: usize>(g: &[[&'static str; W]]) -> Vec<Vec<&'static str>> {
        g.iter().map(|r| r.to_vec()).collect()
    }
    match id {
        TableId::Sizing => rows(&GOLDEN_SIZING),
        TableId::SizingOdd => rows(&GOLDEN_SIZING_ODD),
        TableId::Bursts => rows(&GOLDEN_BURSTS),
        TableId::Complexity => rows(&GOLDEN_COMPLEXITY),
        TableId::OddParams => rows(&GOLDEN_ODD_PARAMS),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMismatch {
    pub table: u8,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub got: String,
}

/// Compares every computed cell with the printed one; returns the cell
/// count and the mismatches.
pub fn check_table(id: TableId) -> Result<(usize, Vec<CellMismatch>)> {
    let got = table_printed(id)?;
    let want = golden(id);
    let mut cells = 0;
    let mut bad = Vec::new();
    for (row, w) in want.iter().enumerate() {
        for (col, &e) in w.iter().enumerate() {
            cells += 1;
            let g = got.get(row).and_then(|r| r.get(col)).cloned().unwrap_or_default();
            if g != e {
                bad.push(CellMismatch {
                    table: id.number(),
                    row,
                    col,
                    expected: e.to_string(),
                    got: g,
                });
            }
        }
    }
    Ok((cells, bad))
}

/// Log-spaced probabilities from `lo` to `hi`, `points >= 2`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..points)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64))
        .collect()
}

/// Failure curve rows `(N, t, p, P_fail)`. The plotted preset is
/// `t = N/32`.
pub fn failcurve(n: usize, t: usize, ps: &[f64]) -> Table {
    Table {
        file: "failcurve.csv",
        header: vec!["N", "t", "p", "P_fail"],
        rows: ps
            .iter()
            .map(|&p| vec![n.to_string(), t.to_string(), format!("{p:.6e}"), format!("{:.6e}", fail_prob_iid(n, p, t))])
            .collect(),
    }
}

// Simulation.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Clean,
    Corrected,
    Failed,
    Miscorrected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub frames: u64,
    /// Frames whose payload arrived unchanged and decoded correctly.
    pub clean: u64,
    pub corrected: u64,
    pub failed: u64,
    /// Decoder reported success with the wrong message.
    pub miscorrected: u64,
    pub p_fail: f64,
    pub ci95: (f64, f64),
}

/// Per-frame RNG: ChaCha8 seeded from the master seed, stream = frame index.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

fn sim_frame(session: &Session, model: &FaultModel, seed: u64, frame: u64) -> Result<Outcome> {
    let mut rng = frame_rng(seed, frame);
    let p = session.codec.params();
    let mut m = vec![0u64; p.n()];
    for v in m.iter_mut().take(session.codec.message_len()) {
        *v = rng.random::<u64>() & p.mask();
    }
    let m = RingElement::new(p, m)?;
    let mut env = encode_and_send(&m, session, frame)?;
    let sent = env.payload.clone();
    inject_symbols(&mut env.payload, p.k(), model, &mut rng)?;
    let changed = env.payload != sent;
    let rep = recv_and_decode(&env, session)?;
    Ok(match (rep.status, rep.message) {
        (Status::Fail(_), _) => Outcome::Failed,
        (_, Some(got)) if got == m => {
            if changed {
                Outcome::Corrected
            } else {
                Outcome::Clean
            }
        }
        _ => Outcome::Miscorrected,
    })
}

/// Encode, interleave, corrupt the payload, deinterleave and decode
/// `frames` random messages. Deterministic for a fixed seed at any thread
/// count.
pub fn simulate_channel(session: &Session, model: &FaultModel, frames: u64, rng_seed: u64) -> Result<SimReport> {
    simulate_channel_with(crate::par::thread_cap(), session, model, frames, rng_seed)
}

pub fn simulate_channel_with(threads: Option<usize>, session: &Session, model: &FaultModel, frames: u64, rng_seed: u64) -> Result<SimReport> {
    model.validate(session.codec.params().n())?;
    let outcomes = map_indexed_with(threads, frames as usize, |i| sim_frame(session, model, rng_seed, i as u64));
    let mut r = SimReport {
        frames,
        clean: 0,
        corrected: 0,
        failed: 0,
        miscorrected: 0,
        p_fail: 0.0,
        ci95: (0.0, 1.0),
    };
    for o in outcomes {
        match o? {
            Outcome::Clean => r.clean += 1,
            Outcome::Corrected => r.corrected += 1,
            Outcome::Failed => r.failed += 1,
            Outcome::Miscorrected => r.miscorrected += 1,
        }
    }
    let bad = r.failed + r.miscorrected;
    r.p_fail = if frames == 0 { 0.0 } else { bad as f64 / frames as f64 };
    r.ci95 = wilson_interval(bad, frames, 1.959964);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizing_examples() {
        let t = |n, p, e| size_t(&SizingInput::new(n, p, e).unwrap());
        assert_eq!(t(1024, 1e-6, 1e-9), 8);
        assert_eq!(t(4096, 1e-5, 1e-9), 9);
        assert_eq!(t(77, 0.0, 1e-9), 7);
        assert!(SizingInput::new(8, 1.0, 0.1).is_err());
        assert!(SizingInput::new(8, 0.1, 0.0).is_err());
    }

    #[test]
    fn tails() {
        assert_eq!(fail_prob_iid(16, 0.3, 16), 0.0);
        assert_eq!(fail_prob_iid(16, 0.0, 2), 0.0);
        assert_eq!(fail_prob_iid(16, 1.0, 2), 1.0);
        // Pr[Bin(4, 1/2) > 1] = 11/16
        assert!((fail_prob_iid(4, 0.5, 1) - 11.0 / 16.0).abs() < 1e-15);
        let v = fail_prob_iid(1024, 1e-5, 8);
        assert!(v > 0.0 && v <= 1e-9, "{v}");
        assert_eq!(fail_prob_errors_erasures(64, 0.01, 0.0, 3), fail_prob_iid(64, 0.01, 3));
        assert!((fail_prob_errors_erasures(64, 0.0, 0.05, 3) - fail_prob_iid(64, 0.05, 6)).abs() < 1e-15);
    }

    #[test]
    fn code_points() {
        let r = code_point_report(1024, 32, 8).unwrap();
        assert_eq!((r.overhead_percent().as_str(), r.rate_str().as_str()), ("1.562", "0.984375"));
        assert_eq!((r.burst_unknown_bytes, r.burst_erasure_bytes, r.syndrome_ops), (32, 64, 16384));
        let r = code_point_report(8192, 64, 9).unwrap();
        assert_eq!(r.overhead_percent(), "0.220");
        assert_eq!((r.burst_unknown_bytes, r.burst_erasure_bytes, r.syndrome_ops), (72, 144, 147456));
        assert!(code_point_report(16, 8, 8).is_err());
        let o = odd_length_params(3, 1).unwrap();
        assert_eq!((o.m_n, o.deg_bound), (2, 4));
        assert!(odd_length_params(8, 1).is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_even(15625, 10000, 3), "1.562");
        assert_eq!(round_half_even(15635, 10000, 3), "1.564");
        assert_eq!(round_half_even(1, 3, 2), "0.33");
        assert_eq!(round_half_even(2, 3, 0), "1");
    }

    #[test]
    fn wilson() {
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    }
}
