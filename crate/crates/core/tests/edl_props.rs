mod common;

use common::instance;
use lectern::baselines::{fsm, randseg, ranking, BaselineParams};
use lectern::benchmark::{evaluate, optimize};
use lectern::model::{EditDecisionList, LookAhead};
use lectern::scoring::semantic_scores;
use lectern::solver::SolverChoice;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn from_sequence_is_valid_and_counts_cuts(seq in prop::collection::vec(0usize..4, 1..80)) {
        let ids: Vec<String> = (0..4).map(|i| format!("c{i}")).collect();
        let edl = EditDecisionList::from_sequence(&ids, &seq);
        edl.validate().unwrap();
        prop_assert_eq!(edl.len(), seq.len());
        prop_assert_eq!(edl.num_cuts(), seq.windows(2).filter(|w| w[0] != w[1]).count());
    }

    #[test]
    fn baselines_are_valid_and_never_beat_offline(inst in instance(3, 60), seed in any::<u64>(), n in 1usize..40) {
        let s = &inst.scenario;
        let params = BaselineParams { randseg_n: n, rng_seed: seed, ..BaselineParams::default() };
        let (best, best_edl) = optimize(s, &inst.cfg, LookAhead::Infinite, SolverChoice::Exact).unwrap();
        let offline = evaluate(s, &inst.cfg, &best_edl).unwrap();
        prop_assert_eq!(offline.total_reward, best.total_reward);
        let edls = [
            randseg(s, &params).unwrap(),
            ranking(s, &semantic_scores(s, &inst.cfg), &params).unwrap(),
            fsm(s, &params).unwrap(),
        ];
        for edl in edls {
            edl.validate().unwrap();
            prop_assert_eq!(edl.len(), s.len);
            let r = evaluate(s, &inst.cfg, &edl).unwrap();
            prop_assert!(r.total_reward <= offline.total_reward);
            prop_assert!((0.0..=1.0).contains(&r.r_max) && (0.0..=1.0).contains(&r.r_trans));
            prop_assert_eq!(r.n_sw, edl.segments.len() - 1);
            prop_assert_eq!(edl.segments.iter().map(|x| x.len()).sum::<usize>(), s.len);
        }
    }
}
