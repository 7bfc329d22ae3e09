//! Randomized cross-checks between the independent computation paths.

use bellspace::correlation::is_local;
use bellspace::spatial::all_space;
use bellspace::{
    chsh_facet_check, chsh_maximize, chsh_value, e_full, e_spin, g_factor, g_factor_montecarlo,
    g_factor_quadrature, lhv_membership, region_probability, tsirelson_settings, BoxRegion, ChshOptions,
    CorrelationTable, ProductWaveFunction, Scenario, UnitVector3,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT8: f64 = 2.0 * std::f64::consts::SQRT_2;

fn random_box_near(rng: &mut impl Rng, center: [f64; 3], m: f64) -> BoxRegion {
    let lo = center.map(|c| c + rng.random_range(-3.0..1.0) / m);
    let hi = [0, 1, 2].map(|i| lo[i] + rng.random_range(0.05..4.0) / m);
    BoxRegion::new(lo, hi).unwrap()
}

fn random_scenario(rng: &mut impl Rng) -> Scenario {
    let m = rng.random_range(0.2..5.0);
    let mean1 = [0, 1, 2].map(|_| rng.random_range(-5.0..5.0) / m);
    let mean2 = [0, 1, 2].map(|_| rng.random_range(-5.0..5.0) / m + 10.0 / m);
    let wave = ProductWaveFunction::new(m, mean1, mean2).unwrap();
    let r1 = random_box_near(rng, mean1, m);
    let r2 = random_box_near(rng, mean2, m);
    Scenario::new(wave, r1, r2)
}

fn tsirelson_table() -> CorrelationTable {
    let s = tsirelson_settings();
    CorrelationTable::from_correlator(vec![s.a, s.a_prime], vec![s.b, s.b_prime], e_spin).unwrap()
}

#[test]
fn g_bounds_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let s = random_scenario(&mut rng);
        let g = s.g();
        assert!((0.0..=1.0).contains(&g));
        let m = s.wave.inverse_width();
        let grow = |r: &BoxRegion, rng: &mut ChaCha8Rng| {
            let pad_lo = [0, 1, 2].map(|_| rng.random_range(0.0..2.0) / m);
            let pad_hi = [0, 1, 2].map(|_| rng.random_range(0.0..2.0) / m);
            BoxRegion::new([0, 1, 2].map(|i| r.lo()[i] - pad_lo[i]), [0, 1, 2].map(|i| r.hi()[i] + pad_hi[i])).unwrap()
        };
        let big1 = grow(&s.region1, &mut rng);
        let big2 = grow(&s.region2, &mut rng);
        assert!(big1.contains(&s.region1) && big2.contains(&s.region2));
        assert!(g <= g_factor(&s.wave, &big1, &s.region2));
        assert!(g <= g_factor(&s.wave, &s.region1, &big2));
        assert!(g_factor(&s.wave, &big1, &big2) <= 1.0);
    }
}

#[test]
fn factorization_and_translation_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let s = random_scenario(&mut rng);
        let p1 = region_probability(&s.wave.packet1, &s.region1);
        let p2 = region_probability(&s.wave.packet2, &s.region2);
        assert_eq!(s.g(), p1 * p2);
        let l = [0, 1, 2].map(|_| rng.random_range(-20.0..20.0));
        let moved = region_probability(&s.wave.packet1.translated(l), &s.region1.translate(l));
        assert!((moved - p1).abs() <= 1e-12);
    }
}

#[test]
fn three_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let n = 200_000;
    for k in 0..100 {
        let s = random_scenario(&mut rng);
        let closed = s.g();
        let quad = g_factor_quadrature(&s.wave, &s.region1, &s.region2, 1e-10).unwrap();
        assert!((quad - closed).abs() <= 1e-10, "scenario {k}: {quad} vs {closed}");
        let mc = g_factor_montecarlo(&s.wave, &s.region1, &s.region2, n, k).unwrap();
        // When no or every sample hits, the binomial stderr degenerates to 0; use one count instead.
        let band = 3.0 * mc.stderr.max(1.0 / n as f64);
        assert!((mc.estimate - closed).abs() <= band, "scenario {k}: mc {} +- {} vs {closed}", mc.estimate, mc.stderr);
    }
}

#[test]
fn all_space_is_one_on_every_path() {
    let wave = ProductWaveFunction::new(0.7, [1.0, 2.0, 3.0], [-4.0, 0.0, 9.0]).unwrap();
    let all = all_space(0.7);
    assert!((g_factor(&wave, &all, &all) - 1.0).abs() < 1e-12);
    assert!((g_factor_quadrature(&wave, &all, &all, 1e-10).unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(g_factor_montecarlo(&wave, &all, &all, 10_000, 9).unwrap().estimate, 1.0);
}

#[test]
fn chsh_scales_linearly_with_g() {
    let tol = 1e-6;
    let base = chsh_maximize(e_spin, &ChshOptions::with_tol(tol)).unwrap().value;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..8 {
        let g: f64 = rng.random_range(0.01..=1.0);
        let scaled = chsh_maximize(move |a: &UnitVector3, b: &UnitVector3| g * e_spin(a, b), &ChshOptions::with_tol(tol))
            .unwrap()
            .value;
        assert!((scaled - g * base).abs() <= 2.0 * tol, "g={g}: {scaled} vs {}", g * base);
    }
}

#[test]
fn local_scenarios_never_violate_chsh() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 12 {
        let s = random_scenario(&mut rng);
        if !is_local(s.g()) {
            continue;
        }
        let best = chsh_maximize(|a: &UnitVector3, b: &UnitVector3| e_full(&s, a, b), &ChshOptions::default()).unwrap();
        assert!(best.value <= 2.0 + 1e-6);
        let at_paper = chsh_value(|a: &UnitVector3, b: &UnitVector3| e_full(&s, a, b), &tsirelson_settings());
        assert!((at_paper.abs() - SQRT8 * s.g()).abs() <= 1e-9);
        checked += 1;
    }
}

#[test]
fn lp_matches_chsh_facets_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let tol = 1e-9;
    let base = tsirelson_table();
    for k in 0..1000 {
        let t = if k % 2 == 0 {
            let values = (0..2).map(|_| (0..2).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect();
            CorrelationTable::new(values).unwrap()
        } else {
            base.scaled(rng.random_range(0.0..=1.0)).unwrap()
        };
        let facet = chsh_facet_check(&t).unwrap();
        let m = lhv_membership(&t, tol).unwrap();
        assert_eq!(m.feasible, facet <= 2.0 + tol, "table {k}: facet {facet}, residual {}", m.residual);
        if let Some(model) = m.model {
            assert!(model.max_deviation(&t) <= tol);
            assert!((model.total_weight() - 1.0).abs() <= 1e-9);
            assert!(model.weights.iter().all(|&w| w >= 0.0));
        }
    }
}

#[test]
fn feasibility_is_closed_under_shrinking() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut feasible_seen = 0;
    for _ in 0..300 {
        let values = (0..3).map(|_| (0..3).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect();
        let t = CorrelationTable::new(values).unwrap();
        if !lhv_membership(&t, 1e-9).unwrap().feasible {
            continue;
        }
        feasible_seen += 1;
        for lambda in [0.0, 0.25, 0.5, 0.9, 1.0] {
            assert!(lhv_membership(&t.scaled(lambda).unwrap(), 1e-9).unwrap().feasible);
        }
    }
    assert!(feasible_seen > 10);
}

#[test]
fn singlet_table_becomes_local_below_threshold() {
    let t = tsirelson_table();
    assert!(!lhv_membership(&t, 1e-9).unwrap().feasible);
    for g in [1e-3, 0.1, 0.3, 0.5, 0.7, std::f64::consts::FRAC_1_SQRT_2] {
        let m = lhv_membership(&t.scaled(g).unwrap(), 1e-9).unwrap();
        assert!(m.feasible, "g = {g}");
    }
    for g in [0.7072, 0.8, 0.95] {
        assert!(!lhv_membership(&t.scaled(g).unwrap(), 1e-9).unwrap().feasible, "g = {g}");
    }
}
