use pfec::analysis::*;
use pfec::channel::FaultModel;
use pfec::frame::{Codec, Mode, MultiplierPolicy, Session};
use pfec::pattern::ErasureSet;
use pfec::ring::{RingElement, RingParams};
use pfec::rr::{rr_decode, RrConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

// Direct sum of C(n, j) p^j q^(n-j) with binomials built in f64 by Pascal's
// rule; C(1024, 512) still fits in an f64.
fn tail_pascal(n: usize, p: f64, t: usize) -> f64 {
    let mut row = vec![1f64];
    for _ in 0..n {
        let mut next = vec![1f64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    (t + 1..=n).map(|j| row[j] * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)).sum()
}

#[test]
fn tail_matches_pascal_sum() {
    for n in [8, 16, 33, 64] {
        for p in [1e-4, 0.01, 0.2, 0.5, 0.9] {
            for t in [0, 1, 3, n / 2, n - 1] {
                let (a, b) = (fail_prob_iid(n, p, t), tail_pascal(n, p, t));
                assert!((a - b).abs() <= 1e-9 * b.max(1e-300), "n={n} p={p} t={t}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn table_point_tail() {
    // (1024, 1e-5, 8) comes to 3.2633e-24
    let v = fail_prob_iid(1024, 1e-5, 8);
    let oracle = tail_pascal(1024, 1e-5, 8);
    assert!((v - oracle).abs() <= 1e-9 * oracle, "{v:e} vs {oracle:e}");
    assert!((v - 3.2633e-24).abs() < 1e-28);
}

#[test]
fn errors_and_erasures_against_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let check = |n: u64, pe: f64, pr: f64, t: usize, trials: u64, rng: &mut ChaCha8Rng| {
        let (be, br) = (Binomial::new(n, pe).unwrap(), Binomial::new(n, pr).unwrap());
        let fails = (0..trials)
            .filter(|_| 2 * be.sample(rng) + br.sample(rng) > 2 * t as u64)
            .count() as f64;
        let exact = fail_prob_errors_erasures(n as usize, pe, pr, t);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let emp = fails / trials as f64;
        assert!((emp - exact).abs() <= 3.0 * sigma + 1.0 / trials as f64, "n={n}: {emp} vs {exact}");
        exact
    };
    check(64, 0.02, 0.05, 4, 200_000, &mut rng);
    check(256, 0.01, 0.01, 5, 200_000, &mut rng);
    let tiny = check(1024, 1e-6, 1e-5, 8, 10_000_000, &mut rng);
    assert!(tiny < 1e-12);
}

#[test]
fn failcurve_is_monotone() {
    for n in POW2_LENGTHS {
        let rows = failcurve(n, n / 32, &log_grid(1e-3, 0.2, 40)).rows;
        let v: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] <= w[1]), "N={n}");
    }
}

#[test]
fn csv_shapes() {
    for id in TableId::ALL {
        let t = table_csv(id).unwrap();
        let csv = t.to_csv();
        let widths: Vec<usize> = csv.lines().map(|l| l.split(',').count()).collect();
        assert!(widths.iter().all(|&w| w == t.header.len()));
        assert_eq!(TableId::from_number(id.number()), Some(id));
    }
    assert_eq!(table_csv(TableId::Sizing).unwrap().rows.len(), 8);
    assert_eq!(table_csv(TableId::Bursts).unwrap().rows.len(), 32);
}

proptest! {
    #[test]
    fn sizing_is_monotone(
        n in 16usize..20_000,
        p1 in 0.0f64..0.01,
        dp in 0.0f64..0.01,
        e1 in 1e-15f64..0.5,
        shrink in 1.0f64..1e6,
    ) {
        let t = |p, e| size_t(&SizingInput::new(n, p, e).unwrap());
        prop_assert!(t(p1, e1) <= t(p1 + dp, e1));
        prop_assert!(t(p1, e1) <= t(p1, e1 / shrink));
        let pe = fail_prob_errors_erasures(n.min(2048), p1, dp, 3);
        prop_assert!(pe + 1e-15 >= fail_prob_iid(n.min(2048), p1, 3));
    }
}

#[test]
fn simulator_trivial_and_seeded() {
    let p = RingParams::new(32, 8).unwrap();
    let s = Session::new(Codec::Rr(RrConfig::new(p, 2).unwrap()), MultiplierPolicy::PerFrame(b"sim".to_vec()));
    let r = simulate_channel(&s, &FaultModel::iid(0.0), 300, 1).unwrap();
    assert_eq!((r.clean, r.failed, r.miscorrected), (300, 0, 0));
    let a = simulate_channel_with(Some(1), &s, &FaultModel::burst(3), 200, 2).unwrap();
    let b = simulate_channel_with(Some(4), &s, &FaultModel::burst(3), 200, 2).unwrap();
    assert_eq!(a, b);
}

// N=16, t=1, k=8, E[errors] = 0.5. A replaced symbol of a uniform codeword
// symbol differs by a uniform element of Z_256, so errors arrive with
// probability p * 255/256 and uniform nonzero magnitude. The decoder fixes a
// single error exactly when (position, magnitude) is in its capability
// region, measured exhaustively; two or more errors always fail.
#[test]
fn simulator_matches_capability_model() {
    let p = RingParams::new(16, 8).unwrap();
    let cfg = RrConfig::new(p, 1).unwrap();
    let mut ok = 0usize;
    for j in 0..16 {
        for e in 1..256 {
            let w = RingElement::monomial(p, j, e);
            ok += rr_decode(&w, &ErasureSet::empty(), &cfg).is_ok_and(|d| d.codeword.is_zero()) as usize;
        }
    }
    let f1 = 1.0 - ok as f64 / (16.0 * 255.0);
    let prob: f64 = 0.5 / 16.0;
    let pe = prob * 255.0 / 256.0;
    let p0 = (1.0 - pe).powi(16);
    let p1 = 16.0 * pe * (1.0 - pe).powi(15);
    let predicted = p1 * f1 + (1.0 - p0 - p1);

    let session = Session::new(Codec::Rr(cfg), MultiplierPolicy::PerFrame(b"e05".to_vec())).with_crc(false);
    let r = simulate_channel(&session, &FaultModel::iid(prob), 20_000, 5).unwrap();
    assert!(r.ci95.0 <= predicted && predicted <= r.ci95.1, "predicted {predicted}, got {r:?}");
    assert_eq!(r.frames, r.clean + r.corrected + r.failed + r.miscorrected);
}

#[test]
fn interleaved_bursts_within_t() {
    // B <= t contiguous symbols after interleaving at N=64, t=4: measured rate
    let p = RingParams::new(64, 8).unwrap();
    let cfg = RrConfig::new(p, 4).unwrap().with_search(4, 2_000_000);
    let s = Session::new(Codec::Rr(cfg), MultiplierPolicy::PerFrame(b"b".to_vec())).with_crc(false);
    let r = simulate_channel(&s, &FaultModel::burst(2), 400, 3).unwrap();
    let rate = (r.corrected + r.clean) as f64 / r.frames as f64;
    assert!(rate > 0.9, "{r:?}");
    let odd = Session::new(Codec::build(Mode::BchGen, 63, 8, 4, 1).unwrap(), MultiplierPolicy::PerFrame(b"b".to_vec())).with_crc(false);
    let r = simulate_channel(&odd, &FaultModel::burst(4), 400, 3).unwrap();
    assert_eq!(r.failed + r.miscorrected, 0, "{r:?}");
}
