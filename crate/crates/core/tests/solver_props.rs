mod common;

use common::{instance, Instance};
use lectern::model::{EditConfig, LookAhead};
use lectern::scoring::{semantic_scores, Objective};
use lectern::solver::{brute_force, rescore, run_online, solve_exact_dp, solve_paper_dp, SolverChoice};
use proptest::prelude::*;

fn with_objective<R>(inst: &Instance, f: impl FnOnce(&Objective) -> R) -> R {
    let scores = semantic_scores(&inst.scenario, &inst.cfg);
    let obj = Objective::new(&scores, inst.scenario.kinds(), &inst.cfg).unwrap();
    f(&obj)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn exact_matches_brute_force_and_bounds_paper(inst in instance(3, 8)) {
        with_objective(&inst, |obj| {
            let h = obj.len();
            let b = brute_force(obj, inst.init, 0, h).unwrap();
            let e = solve_exact_dp(obj, inst.init, 0, h, inst.cfg.l_cap()).unwrap();
            let p = solve_paper_dp(obj, inst.init, 0, h).unwrap();
            prop_assert_eq!(rescore(obj, &e.sequence, inst.init, 0).unwrap(), e.total_reward);
            prop_assert_eq!(rescore(obj, &b.sequence, inst.init, 0).unwrap(), b.total_reward);
            prop_assert_eq!(rescore(obj, &p.sequence, inst.init, 0).unwrap(), p.total_reward);
            prop_assert_eq!(e.total_reward, b.total_reward);
            prop_assert!(p.total_reward <= e.total_reward);
            Ok(())
        })?;
    }

    #[test]
    fn separable_objective_makes_all_solvers_agree(inst in instance(3, 8)) {
        let inst = Instance { cfg: EditConfig { lambda_sw: 0.0, lambda_b: 0.0, ..inst.cfg }, ..inst };
        with_objective(&inst, |obj| {
            let h = obj.len();
            let b = brute_force(obj, inst.init, 0, h).unwrap().total_reward;
            let e = solve_exact_dp(obj, inst.init, 0, h, inst.cfg.l_cap()).unwrap().total_reward;
            let p = solve_paper_dp(obj, inst.init, 0, h).unwrap().total_reward;
            prop_assert_eq!(b, e);
            prop_assert_eq!(b, p);
            Ok(())
        })?;
    }

    #[test]
    fn online_never_beats_offline(inst in instance(3, 40), l in 1usize..12) {
        with_objective(&inst, |obj| {
            let off = run_online(obj, inst.init, LookAhead::Infinite, SolverChoice::Exact).unwrap();
            let on = run_online(obj, inst.init, LookAhead::Finite(l), SolverChoice::Exact).unwrap();
            prop_assert!(on.total_reward <= off.total_reward);
            let again = run_online(obj, inst.init, LookAhead::Finite(l), SolverChoice::Exact).unwrap();
            prop_assert_eq!(on, again);
            Ok(())
        })?;
    }
}

#[test]
fn paper_dp_work_is_quadratic_in_cameras_and_linear_in_horizon() {
    use lectern::scoring::ScoreMatrix;
    use lectern::model::ShotKind;
    use lectern::solver::InitState;
    let cfg = EditConfig::default();
    for c in 2..=7 {
        for l in [10, 100, 250] {
            let scores = ScoreMatrix::from_rows(vec![vec![1.0; l]; c]);
            let obj = Objective::new(&scores, ShotKind::ALL[..c].to_vec(), &cfg).unwrap();
            let r = solve_paper_dp(&obj, InitState { camera: 0, run_length: 1 }, 0, l).unwrap();
            assert_eq!(r.node_updates, (c * c * l) as u64);
        }
    }
}
