mod common;

use common::{Kind, KINDS};
use mmm_core::bounds::mmlb;
use mmm_core::exact::{brute_force_pool, dp_knapsack, rcg, solve_master, DpVariant, MasterConfig, RcgConfig};
use mmm_core::heuristics::{heur1, heur2, heurps, PartitionState};
use mmm_core::instance::{InstanceFile, PoolFile};
use mmm_core::minmax::{minmax, minmax_fixed, FixedBudgetedSet};
use mmm_core::scenario::{brute_force_scenarios, evaluate_pool, worst_case_scenario_with, AdversaryConfig};
use mmm_core::{Scenario, SolutionPool};
use proptest::prelude::*;
use rand::Rng;

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(KINDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn induced_cost_adds_deviations(seed in any::<u64>(), k in kind(), gamma in 0usize..4) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 9);
        let set = common::uncertainty(&p, &mut r, gamma);
        for delta in common::deltas(set.n(), set.gamma()) {
            let got = set.induced_cost(&Scenario::new(delta.clone())).unwrap();
            prop_assert_eq!(got, common::cost_at(&set, &delta));
        }
        let count = common::deltas(set.n(), set.gamma()).len() as u128;
        prop_assert_eq!(set.scenario_count(), count);
    }

    #[test]
    fn adversary_matches_enumeration(seed in any::<u64>(), k in kind(), gamma in 1usize..4, size in 1usize..5) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 10);
        let set = common::uncertainty(&p, &mut r, gamma);
        let pool = common::random_pool(&p, &mut r, size);
        let (value, delta) = common::worst(&set, &pool);
        let forced = AdversaryConfig { exhaustive_cutoff: 0 };
        let bb = worst_case_scenario_with(&set, &pool, &forced).unwrap();
        prop_assert_eq!(bb.value, value);
        prop_assert_eq!(bb.worst_scenario.delta(), &delta[..]);
        let bf = brute_force_scenarios(&set, &pool, u128::MAX).unwrap();
        prop_assert_eq!(&bf, &bb);
        // the reported argmin attains the value
        let c = set.induced_cost(&bb.worst_scenario).unwrap();
        prop_assert_eq!(pool[bb.argmin_index].cost(&c), value);
    }

    #[test]
    fn minmax_matches_double_enumeration(seed in any::<u64>(), k in kind(), gamma in 0usize..4) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 9);
        let set = common::uncertainty(&p, &mut r, gamma);
        let got = minmax(&p, &set).unwrap();
        prop_assert_eq!(got.value, common::minmax_over(&p, &set, |_| true));
        let worst = common::worst(&set, std::slice::from_ref(&got.solution)).0;
        prop_assert_eq!(worst, got.value);

        // one fixed index each way
        let n = set.n();
        let one = r.gen_range(0..n);
        let zero = (one + 1 + r.gen_range(0..n - 1)) % n;
        if set.gamma() >= 1 {
            let fixed = FixedBudgetedSet::with_fixings(set.clone(), &[one], &[zero]).unwrap();
            let want = common::minmax_over(&p, &set, |d| d[one] && !d[zero]);
            prop_assert_eq!(minmax_fixed(&p, &fixed).unwrap().value, want);
        }
    }

    #[test]
    fn bounds_are_ordered(seed in any::<u64>(), k in kind(), gamma in 1usize..3, kk in 1usize..4) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 7);
        let set = common::uncertainty(&p, &mut r, gamma);
        let kk = kk.min(set.n());
        let lb = mmlb(&p, &set).unwrap().value;
        prop_assert_eq!(lb, common::maxmin(&p, &set));
        let opt = common::best_pool(&p, &set, kk);
        prop_assert_eq!(brute_force_pool(&p, &set, kk).unwrap().value(), opt);
        prop_assert!(lb <= opt);
        let mm = minmax(&p, &set).unwrap().value;
        let h1 = heur1(&p, &set, kk, None).unwrap().value();
        let h2 = heur2(&p, &set, kk).unwrap();
        let ps = heurps(&p, &set, kk, seed).unwrap().value();
        prop_assert!(opt <= h1 && h1 <= mm);
        prop_assert!(opt <= h2.value() && h2.value() <= mm);
        prop_assert!(opt <= ps);
        if h2.optimal {
            prop_assert_eq!(h2.value(), lb);
        }
    }

    #[test]
    fn heuristic_pools_are_feasible_and_sized(seed in any::<u64>(), k in kind(), gamma in 0usize..4, kk in 1usize..5) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 4, 9);
        let set = common::uncertainty(&p, &mut r, gamma);
        let kk = kk.min(set.n());
        for res in [
            heur1(&p, &set, kk, None).unwrap(),
            heur2(&p, &set, kk).unwrap(),
            heurps(&p, &set, kk, seed).unwrap(),
        ] {
            prop_assert_eq!(res.pool.k(), kk);
            prop_assert!(res.pool.solutions().iter().all(|x| p.is_feasible(x)));
            prop_assert_eq!(&res.evaluation, &evaluate_pool(&set, &res.pool).unwrap());
        }
    }

    #[test]
    fn branching_keeps_a_partition(seed in any::<u64>(), k in kind(), gamma in 1usize..4) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 8);
        let set = common::uncertainty(&p, &mut r, gamma);
        let all = common::deltas(set.n(), set.gamma());
        let mut state = PartitionState::new(&p, &set).unwrap();
        let mut prev = state.max_value();
        for _ in 0..6 {
            if !state.branch_once(&p).unwrap() {
                break;
            }
            for d in &all {
                let s = Scenario::new(d.clone());
                let hits = state.cells().iter().filter(|c| c.set.contains(&s)).count();
                prop_assert_eq!(hits, 1);
            }
            // a child never exceeds its parent, so the max never grows
            prop_assert!(state.max_value() <= prev);
            prev = state.max_value();
        }
    }

    #[test]
    fn master_grows_with_scenarios(seed in any::<u64>(), k in prop::sample::select(vec![Kind::Knapsack, Kind::Selection]), kk in 1usize..4) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 8);
        let set = common::uncertainty(&p, &mut r, 2);
        let costs: Vec<Vec<i64>> = common::deltas(set.n(), set.gamma())
            .iter()
            .take(8)
            .map(|d| common::cost_at(&set, d))
            .collect();
        let mut prev = i64::MIN;
        for m in 1..=costs.len() {
            let res = solve_master(&p, &costs[..m], kk, &MasterConfig::default()).unwrap().unwrap();
            let pool = SolutionPool::new(res.pool.solutions().to_vec()).unwrap();
            let direct = costs[..m].iter().map(|c| pool.objective_at_cost(c).0).max().unwrap();
            prop_assert_eq!(direct, res.value);
            prop_assert!(res.value >= prev);
            prev = res.value;
        }
    }

    #[test]
    fn rcg_and_dp_match_the_oracle(seed in any::<u64>(), gamma in 1usize..3) {
        let mut r = common::rng(seed);
        let p = common::problem(Kind::Knapsack, &mut r, 3, 7);
        let set = common::uncertainty(&p, &mut r, gamma);
        let opt = common::best_pool(&p, &set, 2);
        let exact = rcg(&p, &set, 2, &RcgConfig::default()).unwrap();
        prop_assert!(!exact.result.limited);
        prop_assert_eq!(exact.result.value(), opt);
        prop_assert_eq!(exact.state.lower_bound, exact.state.upper_bound);
        prop_assert_eq!(dp_knapsack(&p, &set, 2, DpVariant::Min).unwrap().result.value(), opt);
    }

    #[test]
    fn worst_case_grows_with_budget(seed in any::<u64>(), k in kind(), size in 1usize..4) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 9);
        let set = common::uncertainty(&p, &mut r, 0);
        let pool = SolutionPool::new(common::random_pool(&p, &mut r, size)).unwrap();
        let mut prev = i64::MIN;
        for g in 0..=set.n() {
            let v = evaluate_pool(&set.with_gamma(g).unwrap(), &pool).unwrap().value;
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn files_round_trip(seed in any::<u64>(), k in kind(), gamma in 0usize..3) {
        let mut r = common::rng(seed);
        let p = common::problem(k, &mut r, 3, 8);
        let set = common::uncertainty(&p, &mut r, gamma);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("instance.json");
        let f = InstanceFile::new(&p, &set);
        f.save(&path).unwrap();
        let (p2, set2) = InstanceFile::load(&path).unwrap().build(None).unwrap();
        prop_assert_eq!(p2, p.clone());
        prop_assert_eq!(set2, set);
        let pool = SolutionPool::new(common::random_pool(&p, &mut r, 3)).unwrap();
        let pool_path = dir.path().join("pool.json");
        PoolFile::new(&pool).save(&pool_path).unwrap();
        prop_assert_eq!(PoolFile::load(&pool_path).unwrap().pool().unwrap(), pool);
    }
}
