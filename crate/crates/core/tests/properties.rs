use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use induct::graph::{build_vehicle_graph, local_energy_bounds, surplus_dynamic_stations, ArcKind};
use induct::ils::{Evaluator, Ils, IlsParams, Operator};
use induct::instances::random::random_tiny;
use induct::mip::{build_mip, encode_solution, oracle_solve, oracle_vehicle, prefix_configurations, MipOptions, OracleLimits};
use induct::model::io::{solution_from_str, solution_to_string};
use induct::model::{validate_plan, validate_solution, Configuration, Instance};
use induct::rcspp::{solve_vehicle, SolveOptions};

fn random_config(instance: &Instance, seed: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Configuration::empty(instance);
    for f in 0..instance.stationary.len() {
        c.stationary[f] = rng.gen_bool(0.5);
    }
    for (f, d) in instance.dynamic.iter().enumerate() {
        c.set_prefix(f, rng.gen_range(0..=d.segments.len()));
    }
    c
}

fn ils(instance: &Instance, seed: u64) -> Ils<'_> {
    Ils::new(instance, IlsParams { seed, ..IlsParams::default() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn label_search_matches_the_oracle(seed in 0u64..1_000_000) {
        let inst = random_tiny(seed).unwrap();
        for c in prefix_configurations(&inst) {
            for k in 0..inst.vehicles.len() {
                let bounds = local_energy_bounds(&inst, k);
                let want = oracle_vehicle(&inst, k, &c).map(|x| x.0);
                for opts in [SolveOptions::exact(), SolveOptions::forward_only()] {
                    let r = solve_vehicle(&inst, &bounds, k, &c, opts).unwrap();
                    match (r.cost(), want) {
                        (Some(g), Some(w)) => prop_assert!((g - w).abs() <= 1e-9, "{} k{k}: {g} vs {w}", c.to_bits()),
                        (None, None) => {}
                        (g, w) => prop_assert!(false, "{} k{k}: {g:?} vs {w:?}", c.to_bits()),
                    }
                    if let Some(plan) = &r.plan {
                        let v = validate_plan(&inst, &c, plan);
                        prop_assert!(v.is_empty(), "{v:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn charging_arcs_fit_the_battery(seed in 0u64..1_000_000, cfg in any::<u64>()) {
        let inst = random_tiny(seed).unwrap();
        let config = random_config(&inst, cfg);
        let room = inst.energy.q_max - inst.energy.q_min;
        for k in 0..inst.vehicles.len() {
            let g = build_vehicle_graph(&inst, &local_energy_bounds(&inst, k), k, &config);
            prop_assert_eq!(g.conservative, !surplus_dynamic_stations(&inst).is_empty());
            for a in &g.arcs {
                if let ArcKind::Charge { station, .. } = a.kind {
                    prop_assert!(config.stationary[station]);
                    let q_in: f64 = g.arcs.iter().filter(|b| b.to == a.from).map(|b| b.consumption).sum();
                    prop_assert!(a.recharge <= room + q_in + 1e-9);
                }
            }
        }
    }

    #[test]
    fn cached_costs_match_fresh_evaluation(seed in 0u64..1_000_000, cfgs in prop::collection::vec(any::<u64>(), 1..6)) {
        let inst = random_tiny(seed).unwrap();
        let mut cached = Evaluator::new(&inst, SolveOptions::default(), false);
        let configs: Vec<Configuration> = cfgs.iter().map(|&s| random_config(&inst, s)).collect();
        for c in configs.iter().chain(configs.iter().rev()) {
            let a = cached.cost(c);
            let b = Evaluator::new(&inst, SolveOptions::default(), false).cost(c);
            prop_assert!(a == b || (a - b).abs() <= 1e-9, "{}: {a} vs {b}", c.to_bits());
        }
    }

    #[test]
    fn operators_never_return_a_worse_candidate(seed in 0u64..1_000_000, op in 0usize..6, rng_seed in any::<u64>()) {
        let inst = random_tiny(seed).unwrap();
        let mut s = ils(&inst, rng_seed);
        let Ok(start) = s.initialize() else { return Ok(()) };
        let out = s.apply(Operator::ALL[op], start.clone());
        prop_assert!(out.cost <= start.cost + 1e-9);
        let sol = s.solution(&out).unwrap();
        prop_assert!(validate_solution(&inst, &sol).is_ok());
        prop_assert!((sol.total_cost - out.cost).abs() <= 1e-9);
    }

    #[test]
    fn tightening_returns_the_shortest_feasible_prefix(seed in 0u64..1_000_000, cfg in any::<u64>()) {
        let inst = random_tiny(seed).unwrap();
        let mut base = random_config(&inst, cfg);
        let mut s = ils(&inst, 0);
        for f in 0..inst.dynamic.len() {
            let m = inst.dynamic[f].segments.len();
            base.set_prefix(f, m);
            let out = s.tighten(&base, f);
            let r = out.config.segments[f].iter().filter(|&&b| b).count();
            prop_assert!(out.config.segments[f].iter().take(r).all(|&b| b));
            let mut fresh = Evaluator::new(&inst, SolveOptions::default(), false);
            if out.cost.is_finite() {
                if r > 0 {
                    let mut shorter = out.config.clone();
                    shorter.set_prefix(f, r - 1);
                    prop_assert!(!fresh.is_feasible(&shorter), "prefix {} of station {f} is feasible", r - 1);
                }
            } else {
                prop_assert_eq!(r, m);
                prop_assert!(!fresh.is_feasible(&base));
            }
        }
    }

    #[test]
    fn oracle_optimum_round_trips_and_satisfies_the_mip(seed in 0u64..1_000_000) {
        let inst = random_tiny(seed).unwrap();
        let Some(sol) = oracle_solve(&inst, &OracleLimits::default()).unwrap().solution else { return Ok(()) };
        let doc = solution_from_str(&solution_to_string(&inst, &sol)).unwrap();
        prop_assert!(validate_solution(&inst, &doc.solution).is_ok());
        prop_assert_eq!(doc.solution.total_cost.to_bits(), sol.total_cost.to_bits());
        let model = build_mip(&inst, MipOptions::default()).unwrap();
        let values = encode_solution(&inst, &model, &sol).unwrap();
        let bad = model.violations(&values, 1e-6);
        prop_assert!(bad.is_empty(), "{}", bad[0]);
        prop_assert!((model.objective_value(&values) - sol.total_cost).abs() <= 1e-6);
    }
}
