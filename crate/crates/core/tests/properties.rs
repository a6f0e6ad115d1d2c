//! Property tests for the metric, measure and group invariants.

use std::collections::HashSet;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use slitcarpet::carpet::sample::{random_double_point, random_point};
use slitcarpet::geodesics::{DoubleMetric, LevelMetric};
use slitcarpet::symmetry::{
    h_epsilon, qs_apply, qs_compose, qs_inverse, random_elements, validate_l, Ambient,
    IsometryElement, LFunction, QSElement,
};
use slitcarpet::{CarpetPoint, Dyadic};

const EPS: f64 = 1e-9;

fn points(level: u32, seed: u64, double: bool) -> [CarpetPoint; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        if double {
            random_double_point(&mut rng, level, level + 3)
        } else {
            random_point(&mut rng, level, level + 3)
        }
    };
    [draw(), draw(), draw()]
}

fn element(seed: u64) -> QSElement {
    random_elements(1, seed).pop().unwrap()
}

/// A valid shear: `h(k'/2^m)` is a multiple of `2^(1-m)` at each reduced
/// breakpoint and `h(1)` is an even integer when there are no interior ones.
fn lfunction() -> impl Strategy<Value = LFunction> {
    (0u32..=4).prop_flat_map(|n| {
        prop::collection::vec(-6i128..=6, (1usize << n) + 1).prop_map(move |raw| {
            let values = raw
                .iter()
                .enumerate()
                .map(|(k, &a)| {
                    if k == 0 {
                        return Dyadic::ZERO;
                    }
                    let tz = (k as u32).trailing_zeros().min(n);
                    let m = n - tz;
                    let a = if n == 0 { 2 * a } else { a };
                    Dyadic::new(a, m.saturating_sub(1))
                })
                .collect();
            LFunction::new(n, values).expect("constructed inside L")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn level_metric_axioms(level in 0u32..=3, seed in any::<u64>()) {
        let m = LevelMetric::shared(level);
        let [p, q, r] = points(level, seed, false);
        let d = |a, b| m.distance(a, b).unwrap().0;
        prop_assert!(d(&p, &p).abs() < EPS);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < EPS);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + EPS);
        let (px, py) = p.xy();
        let (qx, qy) = q.xy();
        prop_assert!(d(&p, &q) + EPS >= (px - qx).hypot(py - qy));
    }

    #[test]
    fn double_metric_axioms(level in 0u32..=3, seed in any::<u64>()) {
        let m = DoubleMetric::shared(level);
        let [p, q, r] = points(level, seed, true);
        let d = |a, b| m.distance(a, b).unwrap().0;
        prop_assert!(d(&p, &p).abs() < EPS);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < EPS);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + EPS);
    }

    #[test]
    fn isometries_preserve_the_double_metric(level in 0u32..=3, seed in any::<u64>(), bits in 0u8..8) {
        let iso = IsometryElement::elements(Ambient::DS2)[bits as usize];
        let m = DoubleMetric::shared(level);
        let [p, q, _] = points(level, seed, true);
        let before = m.distance(&p, &q).unwrap().0;
        let after = m.distance(&iso.apply(&p), &iso.apply(&q)).unwrap().0;
        prop_assert!((before - after).abs() < EPS, "{before} vs {after}");
    }

    #[test]
    fn composition_acts_as_composition(a in any::<u64>(), b in any::<u64>(), seed in any::<u64>()) {
        let (g1, g2) = (element(a), element(b));
        let g = qs_compose(&g1, &g2).unwrap();
        let [p, _, _] = points(6, seed, true);
        let lhs = qs_apply(&g, &p).unwrap();
        let rhs = qs_apply(&g1, &qs_apply(&g2, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_undoes(a in any::<u64>(), seed in any::<u64>()) {
        let g = element(a);
        let inv = qs_inverse(&g).unwrap();
        let [p, _, _] = points(6, seed, true);
        let back = qs_apply(&inv, &qs_apply(&g, &p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let e = qs_compose(&g, &inv).unwrap();
        prop_assert_eq!(e.iso, IsometryElement::IDENTITY);
        prop_assert!(e.shear.clone().simplify().values().iter().all(|v| *v == Dyadic::ZERO));
    }

    #[test]
    fn composition_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (element(a), element(b), element(c));
        let left = qs_compose(&qs_compose(&x, &y).unwrap(), &z).unwrap();
        let right = qs_compose(&x, &qs_compose(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left.iso, right.iso);
        prop_assert_eq!(left.shear.simplify(), right.shear.simplify());
    }

    #[test]
    fn valid_shears_pass_the_brute_force_check(h in lfunction()) {
        let depth = h.breakpoint_exponent() + 5;
        let lip = validate_l(&h, depth).unwrap();
        prop_assert_eq!(lip, h.lip());
    }
}

#[test]
fn thousand_random_shears_are_valid_to_depth_n_plus_5() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = lfunction();
    for _ in 0..1000 {
        let h = strategy.new_tree(&mut runner).unwrap().current();
        let depth = h.breakpoint_exponent() + 5;
        assert!(validate_l(&h, depth).is_ok(), "{h}");
    }
}

#[test]
fn binary_shears_are_distinct() {
    let mut seen = HashSet::new();
    for code in 0u32..1 << 12 {
        let bits: Vec<bool> = (0..12).map(|m| code >> m & 1 == 1).collect();
        let h = h_epsilon(&bits).unwrap();
        assert!(seen.insert(h.simplify().to_string()));
    }
    assert_eq!(seen.len(), 4096);
}
