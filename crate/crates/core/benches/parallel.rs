use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use pfec::frame::{Codec, Mode, MultiplierPolicy, Session};
use pfec::par::{decode_batch, encode_batch, parallel_enabled};
use pfec::ring::{RingElement, RingParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FRAMES: usize = 64;

fn setup(mode: Mode, n: usize, t: usize) -> (Session, Vec<RingElement>) {
    let codec = Codec::build(mode, n, 32, t, 1).unwrap();
    let session = Session::new(codec, MultiplierPolicy::PerFrame(b"bench".to_vec()));
    let p = RingParams::new(n, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let len = session.codec.message_len();
    let msgs = (0..FRAMES)
        .map(|_| {
            let c = (0..n).map(|i| if i < len { rng.random::<u32>() as u64 } else { 0 }).collect();
            RingElement::new(p, c).unwrap()
        })
        .collect();
    (session, msgs)
}

// `Some(1)` is the sequential path; `None` uses the whole pool. Built with
// --no-default-features both run sequentially.
fn batches(c: &mut Criterion) {
    let mut g = c.benchmark_group(if parallel_enabled() { "batch" } else { "batch-seq-build" });
    g.throughput(Throughput::Elements(FRAMES as u64));
    g.sample_size(10);
    for (name, mode, n) in [("rr", Mode::Rr, 1024), ("bch", Mode::BchGen, 1023)] {
        let (session, msgs) = setup(mode, n, 8);
        let mut frames = encode_batch(&session, &msgs, 0, Some(1)).unwrap();
        for (i, f) in frames.iter_mut().enumerate() {
            let j = (i * 37) % n;
            f.payload[j] ^= 1 << (i % 32);
        }
        for (label, threads) in [("sequential", Some(1)), ("parallel", None)] {
            g.bench_with_input(BenchmarkId::new(format!("{name}-encode"), label), &threads, |b, &t| {
                b.iter(|| encode_batch(&session, &msgs, 0, t).unwrap())
            });
            g.bench_with_input(BenchmarkId::new(format!("{name}-decode"), label), &threads, |b, &t| {
                b.iter(|| decode_batch(&session, &frames, t))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, batches);
criterion_main!(benches);
