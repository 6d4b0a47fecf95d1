mod common;

use asdgic::bounds::*;
use asdgic::envelope::{uce_1d, uce_at_power, PowerGrid};
use asdgic::model::{build_params, classify_regime, ChannelParams, Decoder, RawParams, StateVariance};
use asdgic::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::half_log2;

fn params(p1: f64, p2: f64, n1: f64, n2: f64, a12: f64, a21: f64) -> ChannelParams {
    build_params(RawParams::new(p1, p2, n1, n2, a12, a21)).unwrap()
}

fn coarse() -> PowerGrid {
    PowerGrid { density: 64, max_boost: 100.0 }
}

#[test]
fn outer_bound_examples() {
    assert_eq!(outer_sum_rate(&params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)).value, 0.5);
    let b = outer_sum_rate(&params(1.0, 1.0, 1.0, 1.0, 4.0, 4.0));
    assert!((b.value - 1.1610).abs() < 1e-4);
    assert_eq!(b.limiting_decoder, Decoder::One);
    let b = outer_sum_rate(&params(2.0, 1.0, 0.5, 1.0, 2.0, 1.0));
    assert!((b.value - 0.7925).abs() < 1e-4);
    assert_eq!(b.limiting_decoder, Decoder::Two);
    assert_eq!(b.kind, BoundKind::Outer);
}

#[test]
fn imbalanced_examples() {
    let r = imbalanced_sum_rate(&params(100.0, 1.0, 9.0, 1.0, 1.0, 1.0), Decoder::One).unwrap();
    assert!((r.value - half_log2(10.0 / 9.0)).abs() < 1e-15);
    assert!((r.value - 0.0760).abs() < 1e-4);
    let r = imbalanced_sum_rate(&params(16.0, 1.0, 2.0, 1.0, 4.0, 1.0), Decoder::One).unwrap();
    assert!((r.value - 0.7925).abs() < 1e-4);
    let e = imbalanced_sum_rate(&params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0), Decoder::One).unwrap_err();
    assert!(matches!(e, Error::ConditionNotMet(_)));
    assert!(e.is_condition_not_met());
}

#[test]
fn imbalanced_decoder_two_uses_its_own_gain() {
    // decoder 2 sees a21·P1 against N2
    let p = params(1.0, 16.0, 1.0, 2.0, 1.0, 4.0);
    let r = imbalanced_sum_rate(&p, Decoder::Two).unwrap();
    assert!((r.value - half_log2(1.0 + 4.0 / 2.0)).abs() < 1e-15);
}

#[test]
fn balanced_examples() {
    // P1 = 1, a12·P2 = 4, N1 = 1
    let r = balanced_raw_rate(&params(1.0, 1.0, 1.0, 1.0, 4.0, 4.0), Decoder::One).unwrap();
    assert!((r.value - 0.5).abs() < 1e-15);
    assert!(r.warnings.is_empty());
    let r = balanced_raw_rate(&params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0), Decoder::One).unwrap();
    assert!((r.value - half_log2(1.5)).abs() < 1e-15);
    assert_eq!(r.warnings.len(), 1);
    let r = balanced_raw_rate(&params(1.0, 1.0, 10.0, 1.0, 9.0, 1.0), Decoder::One).unwrap();
    assert_eq!(r.value, 0.0);
    let e = balanced_raw_rate(&params(16.0, 1.0, 2.0, 1.0, 4.0, 1.0), Decoder::One);
    assert!(matches!(e, Err(Error::ConditionNotMet(_))));
}

#[test]
fn mmse_examples() {
    let single = |p: ChannelParams| match mmse_alpha_imbalanced(&p, Decoder::One) {
        MmseCoeffs::Single { alpha, .. } => alpha,
        other => panic!("{other:?}"),
    };
    assert_eq!(single(params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)), 0.5);
    assert_eq!(single(params(1.0, 3.0, 1.0, 1.0, 1.0, 1.0)), 0.75);
    let lim = ChannelParams::limit_case(RawParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0)).unwrap();
    assert_eq!(single(lim), 1.0);
    assert!(single(params(1.0, 1.0, 1e-9, 1.0, 1.0, 1.0)) > 1.0 - 1e-8);

    let lim = ChannelParams::limit_case(RawParams::new(4.0, 1.0, 0.0, 1.0, 1.0, 1.0)).unwrap();
    match mmse_alphas_balanced(&lim, Decoder::One) {
        MmseCoeffs::Pair { alpha1, .. } => assert!((alpha1 - 1.2).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}

#[test]
fn mmse_ratio_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let p = params(
            rng.random_range(0.01..100.0),
            rng.random_range(0.01..100.0),
            rng.random_range(0.01..100.0),
            rng.random_range(0.01..100.0),
            rng.random_range(0.01..100.0),
            rng.random_range(0.01..100.0),
        );
        for d in [Decoder::One, Decoder::Two] {
            let MmseCoeffs::Pair { alpha1, alpha2, .. } = mmse_alphas_balanced(&p, d) else {
                panic!()
            };
            let o = p.oriented(d);
            let want = o.a12() * o.p2() / o.p1();
            assert!(((alpha2 / alpha1).powi(2) - want).abs() <= 1e-12 * want.max(1.0));
        }
    }
}

#[test]
fn achievable_examples() {
    // symmetric a = 4: both balanced, enveloped 0.5-bit terms
    let p = params(1.0, 1.0, 1.0, 1.0, 4.0, 4.0);
    let r = achievable_sum_rate(&p, &PowerGrid::default()).unwrap();
    assert_eq!(r.kind, BoundKind::AchievableEnveloped);
    assert!(r.value >= 0.5 && r.value <= 0.51);

    // decoder 1 imbalanced, decoder 2 balanced
    let p = params(16.0, 1.0, 2.0, 1.0, 4.0, 0.25);
    let f = classify_regime(&p);
    assert!(f.imbalanced_dec1 && !f.imbalanced_dec2 && f.balanced_dec2);
    let r = achievable_sum_rate(&p, &PowerGrid::default()).unwrap();
    let dec2 = balanced_enveloped_rate(&p, Decoder::Two, &PowerGrid::default()).unwrap().value;
    assert!((r.value - half_log2(3.0).min(dec2)).abs() < 1e-15);

    // no regime applies for decoder 1
    let p = params(1.0, 100.0, 5.0, 1.0, 1.0, 1.0);
    let f = classify_regime(&p);
    assert!(!f.imbalanced_dec1 && !f.balanced_dec1);
    assert_eq!(
        achievable_sum_rate(&p, &coarse()).unwrap_err(),
        Error::NoApplicableRegime { decoder: 1 }
    );
}

#[test]
fn both_imbalanced_at_boundaries_equals_outer() {
    // a12·a21 < 1 is needed for both strict conditions; place both noises on
    // their thresholds
    let (p1, p2, a12, a21) = (100.0f64, 50.0f64, 0.5f64, 0.3f64);
    let n1 = (a12 * p2 * p1).sqrt() - a12 * p2;
    let n2 = (a21 * p1 * p2).sqrt() - a21 * p1;
    let p = params(p1, p2, n1, n2, a12, a21);
    let f = classify_regime(&p);
    assert!(f.imbalanced_dec1 && f.imbalanced_dec2);
    let r = achievable_sum_rate(&p, &coarse()).unwrap();
    assert_eq!(r.kind, BoundKind::Capacity);
    assert_eq!(r.value, outer_sum_rate(&p).value);
}

#[test]
fn boundary_tightness() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let p2: f64 = rng.random_range(0.1..10.0);
        let a12: f64 = rng.random_range(0.1..10.0);
        let p1 = a12 * p2 * rng.random_range(1.5..100.0);
        let n1 = (a12 * p2 * p1).sqrt() - a12 * p2;
        let p = params(p1, p2, n1, rng.random_range(0.1..10.0), a12, rng.random_range(0.1..10.0));
        let r = imbalanced_sum_rate(&p, Decoder::One).unwrap();
        let oracle = half_log2(1.0 + a12 * p2 / n1);
        assert!((r.value - oracle).abs() <= 1e-12 * oracle);
    }
}

#[test]
fn dominance_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 2_000 {
        let p = params(
            10f64.powf(rng.random_range(-1.0..2.0)),
            10f64.powf(rng.random_range(-1.0..2.0)),
            10f64.powf(rng.random_range(-1.0..2.0)),
            10f64.powf(rng.random_range(-1.0..2.0)),
            10f64.powf(rng.random_range(-1.0..1.5)),
            10f64.powf(rng.random_range(-1.0..1.5)),
        );
        let Ok(a) = achievable_sum_rate(&p, &PowerGrid { density: 32, max_boost: 100.0 }) else {
            continue;
        };
        assert!(a.value <= outer_sum_rate(&p).value + 1e-12, "{p:?}");
        checked += 1;
    }
}

#[test]
fn gap_tilde_table() {
    let grid = PowerGrid::default();
    for (x, want) in [(0.1, 1.79), (0.5, 0.938), (1.0, 0.661), (10.0, 0.1257), (20.0, 0.0673)] {
        let r = gap_tilde(x, &grid).unwrap();
        assert!((r.gap - want).abs() <= 0.01, "x = {x}: {}", r.gap);
        assert!(r.term_inner_env >= r.term_inner_raw);
        assert!(r.term_inner_env <= r.term_inner_raw + 0.01);
        // independent evaluation of both closed-form terms
        assert!((r.term_outer - half_log2(1.0 + (x + 1.0) * (x + 1.0) / x)).abs() < 1e-14);
        assert!((r.term_inner_raw - half_log2(1.0 + x)).abs() < 1e-14);
    }
    assert!(gap_tilde(0.0, &grid).is_err());
}

#[test]
fn gap_tilde_decreasing() {
    let grid = PowerGrid::default();
    let xs: Vec<f64> = (0..200).map(|i| 0.05 * 1000f64.powf(i as f64 / 199.0)).collect();
    let gaps: Vec<f64> = xs.iter().map(|&x| gap_tilde(x, &grid).unwrap().gap).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    for (x, g) in xs.iter().zip(&gaps) {
        assert!(*g >= 0.0);
        if *x >= 1.0 {
            assert!(*g < 0.67);
        }
    }
}

#[test]
fn gap_symmetric_examples() {
    let grid = PowerGrid::default();
    let g4 = gap_symmetric(1.0, 1.0, 4.0, &grid).unwrap();
    assert!((g4 - gap_tilde(1.0, &grid).unwrap().gap).abs() < 1e-12);
    assert!((g4 - 0.661).abs() < 0.01);
    let g1 = gap_symmetric(1.0, 1.0, 1.0, &grid).unwrap();
    assert!(g1 <= 0.5 - half_log2(1.5) + 1e-12);
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=60 {
        let a = 1.0 + 3.0 * i as f64 / 60.0;
        let g = gap_symmetric(1.0, 1.0, a, &grid).unwrap();
        assert!(g >= prev - 1e-12, "a = {a}");
        prev = g;
    }
    assert!(gap_symmetric(1.0, 1.0, 2.0, &grid).unwrap() <= g4);
    assert!(matches!(gap_symmetric(1.0, 0.5, 4.0, &grid), Err(Error::ConditionNotMet(_))));
    assert!(matches!(gap_symmetric(1.0, 1.0, 0.5, &grid), Err(Error::ConditionNotMet(_))));
}

#[test]
fn binning_examples() {
    let p = params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    let f = StateVariance::Finite;
    let b = binning_sum_rate_bound(&p, f(2.0), f(2.0)).unwrap();
    let gamma = half_log2(2.0 * std::f64::consts::PI * std::f64::consts::E);
    assert!((b.value - gamma).abs() < 1e-12);
    assert!((b.value - 2.047).abs() < 1e-3);
    assert_eq!(binning_sum_rate_bound(&p, f(1e6), f(1e6)).unwrap().value, 0.0);
    let vals: Vec<f64> = [2.0, 10.0, 100.0, 1e4, 1e6]
        .iter()
        .map(|&q| binning_sum_rate_bound(&p, f(q), f(q)).unwrap().value)
        .collect();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));

    let q_star = binning_zero_threshold(&p);
    assert!((half_log2(2.0 / q_star) + gamma).abs() < 1e-12);
    for q in [q_star, q_star * 1.01, 1e3, 1e5] {
        assert_eq!(binning_sum_rate_bound(&p, f(q), f(q)).unwrap().value, 0.0);
    }
    assert!(binning_sum_rate_bound(&p, f(q_star * 0.99), f(q_star * 0.99)).unwrap().value > 0.0);
}

#[test]
fn corner_points_time_share_to_sum() {
    let b = outer_sum_rate(&params(1.0, 1.0, 1.0, 1.0, 4.0, 4.0));
    let [c1, c2] = b.corner_points();
    for l in [0.0, 0.3, 1.0] {
        let p = RatePoint::time_share(c1, c2, l);
        assert!((p.sum() - b.value).abs() < 1e-15);
        assert!(p.r1 >= 0.0 && p.r2 >= 0.0);
    }
}

// --- envelope ---

#[test]
fn envelope_on_gap_inner_term() {
    let grid: Vec<f64> = (0..101).map(|i| 5.0 + 10.0 * i as f64 / 100.0).collect();
    let vals: Vec<f64> = grid
        .iter()
        .map(|&x| half_log2((2.0 * x * x + 3.0 * x + 1.0) / (2.0 * x + 1.0)).max(0.0))
        .collect();
    let r = uce_1d(&grid, &vals).unwrap();
    assert!(r.env[50] >= half_log2(11.0) - 1e-15);
    assert!(r.eval(10.0).unwrap() >= 1.7297);
    for (e, v) in r.env.iter().zip(&r.raw) {
        assert!(e >= v);
    }
    for &i in &r.hull_vertices {
        assert_eq!(r.env[i], r.raw[i]);
    }
}

fn assert_concave(grid: &[f64], env: &[f64], tol: f64) {
    for i in 1..grid.len() - 1 {
        let left = (env[i] - env[i - 1]) / (grid[i] - grid[i - 1]);
        let right = (env[i + 1] - env[i]) / (grid[i + 1] - grid[i]);
        assert!(right <= left + tol, "i = {i}: {left} -> {right}");
    }
}

proptest! {
    #[test]
    fn prop_uce_1d_majorant_and_concave(vals in prop::collection::vec(-10.0f64..10.0, 2..60)) {
        let grid: Vec<f64> = (0..vals.len()).map(|i| i as f64 * 0.37 + (i * i) as f64 * 0.01).collect();
        let r = uce_1d(&grid, &vals).unwrap();
        for (e, v) in r.env.iter().zip(&vals) {
            prop_assert!(e >= v);
        }
        assert_concave(&grid, &r.env, 1e-12);
        prop_assert_eq!(r.hull_vertices[0], 0);
        prop_assert_eq!(*r.hull_vertices.last().unwrap(), vals.len() - 1);
    }
}

fn balanced_fn(a: f64, n: f64) -> impl Fn(f64, f64) -> f64 + Sync {
    move |p1, p2| balanced_raw_value(p1, a * p2, n)
}

#[test]
fn uce_at_power_properties() {
    let f = balanced_fn(1.0, 1.0);
    for density in [16, 32, 64, 128, 256] {
        let lo = uce_at_power(&f, 1.0, 1.0, &PowerGrid { density, max_boost: 100.0 });
        let hi = uce_at_power(&f, 1.0, 1.0, &PowerGrid { density: density * 2, max_boost: 100.0 });
        assert!(hi >= lo - 1e-9);
        assert!(lo >= f(1.0, 1.0));
    }
    assert_eq!(uce_at_power(|_, _| 0.0, 5.0, 5.0, &PowerGrid::default()), 0.0);
    for x in [0.1, 0.5, 1.0, 10.0, 20.0] {
        let a = ((x + 1.0) / x) * ((x + 1.0) / x);
        let raw = balanced_raw_value(x, a * x, 1.0);
        let env = uce_at_power(balanced_fn(a, 1.0), x, x, &PowerGrid::default());
        assert!(env >= raw && env <= raw + 0.01);
    }
}

#[test]
fn uce_at_power_section_concavity() {
    // the time-sharing envelope is the maximum over finitely many grid
    // operating points, so it is concave along a section only up to the
    // grid resolution
    let f = balanced_fn(1.0, 1.0);
    let grid: Vec<f64> = (1..=60).map(|i| i as f64 * 0.05).collect();
    let env: Vec<f64> = grid
        .iter()
        .map(|&p1| uce_at_power(&f, p1, 1.0, &PowerGrid::default()))
        .collect();
    assert_concave(&grid, &env, 1e-3);
}
