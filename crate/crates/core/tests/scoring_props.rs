mod common;

use common::{instance, kind};
use lectern::model::{EditConfig, PerKind, ShotKind};
use lectern::scoring::{
    broll_incentive, build_transition_matrix, semantic_scores, switch_penalty, Objective,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn switch_penalty_monotone_and_bounded(c_sw in 0.1f64..5.0, l_min in 1.0f64..30.0, gap in 1.0f64..60.0) {
        let cfg = EditConfig { c_sw, l_min, l_max: l_min + gap, ..EditConfig::default() };
        let mut prev = (f64::INFINITY, f64::NEG_INFINITY);
        for l in 1..=200 {
            let stay = switch_penalty(l as f64, false, &cfg);
            let cut = switch_penalty(l as f64, true, &cfg);
            prop_assert!(stay <= prev.0 && cut >= prev.1);
            prop_assert!((-c_sw..=0.0).contains(&stay) && (-c_sw..=0.0).contains(&cut));
            prev = (stay, cut);
        }
    }

    #[test]
    fn scores_take_two_values_and_flip_by_weight(inst in instance(3, 12), cam in 0usize..3, t in 0usize..12) {
        let s = &inst.scenario;
        let cam = cam % s.num_cameras();
        let t = t % s.len;
        let m = semantic_scores(s, &inst.cfg);
        for (c, camera) in s.cameras.iter().enumerate() {
            let (lo, w) = (inst.cfg.defaults.get(camera.kind), inst.cfg.weights.get(camera.kind));
            for x in 0..s.len {
                prop_assert!(m.get(c, x) == lo || m.get(c, x) == lo + w);
            }
        }
        let mut flipped = s.clone();
        flipped.cameras[cam].indicator[t] ^= 1;
        let m2 = semantic_scores(&flipped, &inst.cfg);
        let w = inst.cfg.weights.get(s.cameras[cam].kind);
        for c in 0..s.num_cameras() {
            for x in 0..s.len {
                if (c, x) == (cam, t) {
                    prop_assert!(((m2.get(c, x) - m.get(c, x)).abs() - w).abs() < 1e-12);
                } else {
                    prop_assert_eq!(m2.get(c, x), m.get(c, x));
                }
            }
        }
    }

    #[test]
    fn scaling_scores_keeps_semantic_argmax(inst in instance(3, 10), alpha in 0.1f64..10.0, k in 0usize..3, t in 0usize..10) {
        let s = &inst.scenario;
        let k = k % s.num_cameras();
        let t = t % s.len;
        let scaled = EditConfig {
            weights: PerKind(inst.cfg.weights.0.map(|w| w * alpha)),
            defaults: PerKind(inst.cfg.defaults.0.map(|d| d * alpha)),
            ..inst.cfg.clone()
        };
        let only_e = |cfg: &EditConfig| EditConfig { lambda_sw: 0.0, lambda_b: 0.0, ..cfg.clone() };
        let (a, b) = (only_e(&inst.cfg), only_e(&scaled));
        let ma = semantic_scores(s, &a);
        let mb = semantic_scores(s, &b);
        let oa = Objective::new(&ma, s.kinds(), &a).unwrap();
        let ob = Objective::new(&mb, s.kinds(), &b).unwrap();
        let best = |o: &Objective| (0..s.num_cameras()).fold(0, |bst, c| if o.step_reward(k, c, t, 1) > o.step_reward(k, bst, t, 1) { c } else { bst });
        for c in 0..s.num_cameras() {
            let (ra, rb) = (oa.step_reward(k, c, t, 1), ob.step_reward(k, c, t, 1));
            prop_assert!((rb - alpha * ra).abs() <= 1e-9 * (1.0 + rb.abs()));
            prop_assert_eq!(ra.signum(), rb.signum());
        }
        prop_assert_eq!(best(&oa), best(&ob));
    }

    #[test]
    fn step_reward_is_affine_in_each_lambda(inst in instance(3, 6), k in 0usize..3, c in 0usize..3, run in 1u32..80, x in 0.0f64..2.0, y in 0.0f64..2.0) {
        let s = &inst.scenario;
        let (k, c) = (k % s.num_cameras(), c % s.num_cameras());
        let scores = semantic_scores(s, &inst.cfg);
        let at = |e: f64, sw: f64, b: f64| {
            let cfg = EditConfig { lambda_e: e, lambda_sw: sw, lambda_b: b, ..inst.cfg.clone() };
            Objective::new(&scores, s.kinds(), &cfg).unwrap().step_reward(k, c, 0, run)
        };
        let tol = 1e-12;
        let mid = |f: &dyn Fn(f64) -> f64| (f((x + y) / 2.0) - (f(x) + f(y)) / 2.0).abs() < tol;
        prop_assert!(mid(&|v| at(v, 0.4, 0.3)));
        prop_assert!(mid(&|v| at(0.3, v, 0.3)));
        prop_assert!(mid(&|v| at(0.3, 0.4, v)));
    }

    #[test]
    fn transition_entries_are_plus_minus_epsilon(eps in 0.01f64..10.0, pairs in prop::collection::vec((kind(), kind()), 0..12)) {
        let mut sets = std::collections::BTreeMap::new();
        for (a, b) in pairs.iter().filter(|(a, b)| a != b) {
            sets.entry(*a).or_insert_with(std::collections::BTreeSet::new).insert(*b);
        }
        let t = build_transition_matrix(&sets, eps).unwrap();
        for a in ShotKind::ALL {
            for b in ShotKind::ALL {
                let v = t.get(a, b);
                let violates = sets.get(&a).is_some_and(|s| s.contains(&b));
                prop_assert_eq!(v, if violates { -eps } else { eps });
            }
            prop_assert_eq!(t.get(a, a), eps);
        }
    }
}

#[test]
fn broll_examples() {
    let cfg = EditConfig::default();
    assert_eq!(cfg.l_mean(), 40.0);
    assert_eq!(broll_incentive(21.0, ShotKind::OverviewLong, &cfg), cfg.c_broll);
    assert_eq!(broll_incentive(21.0, ShotKind::LeftMedium, &cfg), 0.0);
    assert_eq!(broll_incentive(5.0, ShotKind::StudentLong, &cfg), 0.0);
    assert_eq!(broll_incentive(20.0, ShotKind::SlideCloseUp, &cfg), 0.0);
}

#[test]
fn self_violation_rejected() {
    let mut sets = std::collections::BTreeMap::new();
    sets.insert(ShotKind::OverviewLong, std::collections::BTreeSet::from([ShotKind::OverviewLong]));
    assert!(build_transition_matrix(&sets, 1.0).is_err());
}
