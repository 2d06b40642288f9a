use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::graph::{local_energy_bounds, routing_lower_bound, RouteBounds};
use crate::model::{Configuration, Instance, Solution, StationRef, VehiclePlan};
use crate::rcspp::{solve_vehicle, SolveOptions};

/// Priced outcome of a feasible configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub infrastructure: f64,
    pub total: f64,
    pub plans: Vec<VehiclePlan>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub requests: u64,
    pub cache_hits: u64,
    pub vehicle_solves: u64,
    pub vehicle_reuses: u64,
    pub heuristic_solves: u64,
}

impl EvalStats {
    pub fn hit_rate(&self) -> f64 {
        if self.requests == 0 {
            0.0
        } else {
            self.cache_hits as f64 / self.requests as f64
        }
    }
}

#[derive(Debug, Clone)]
struct Solved {
    config: Configuration,
    plan: Arc<VehiclePlan>,
}

/// Most recent per-vehicle solutions kept for reuse.
const REUSE_WINDOW: usize = 64;

/// Evaluates configurations by solving every vehicle subproblem, with a
/// configuration cache and per-vehicle reuse of earlier solutions.
#[derive(Debug)]
pub struct Evaluator<'a> {
    pub instance: &'a Instance,
    bounds: Vec<RouteBounds>,
    lower: Vec<f64>,
    opts: SolveOptions,
    parallel: bool,
    values: HashMap<Configuration, Arc<Evaluation>>,
    infeasible: HashSet<Configuration>,
    solved: Vec<Vec<Solved>>,
    pub stats: EvalStats,
}

/// `plan`, found optimal under `known`, stays optimal under `config` when
/// `config` only drops whole stations from `known` and keeps every station
/// the plan charges at.
fn reusable(instance: &Instance, config: &Configuration, known: &Configuration, plan: &VehiclePlan) -> bool {
    for f in 0..instance.stationary.len() {
        if config.stationary[f] && !known.stationary[f] {
            return false;
        }
    }
    for f in 0..instance.dynamic.len() {
        if config.inverters[f] && (!known.inverters[f] || config.segments[f] != known.segments[f]) {
            return false;
        }
    }
    plan.used_stations().into_iter().all(|s| match s {
        StationRef::Stationary(f) => config.stationary[f],
        StationRef::Dynamic(f) => config.inverters[f],
    })
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance, opts: SolveOptions, parallel: bool) -> Self {
        let bounds: Vec<RouteBounds> = (0..instance.vehicles.len()).map(|k| local_energy_bounds(instance, k)).collect();
        let lower = bounds.iter().map(|b| routing_lower_bound(instance, b)).collect();
        Evaluator {
            instance,
            bounds,
            lower,
            opts,
            parallel,
            values: HashMap::new(),
            infeasible: HashSet::new(),
            solved: vec![Vec::new(); instance.vehicles.len()],
            stats: EvalStats::default(),
        }
    }

    /// Sum of the per-vehicle routing lower bounds.
    pub fn routing_lower_bound(&self) -> f64 {
        self.lower.iter().sum()
    }

    pub fn lower_bounds(&self) -> &[f64] {
        &self.lower
    }

    pub fn clear_cache(&mut self) {
        self.values.clear();
        self.infeasible.clear();
        for s in &mut self.solved {
            s.clear();
        }
    }

    /// Total cost, or infinity when some vehicle has no feasible path.
    pub fn cost(&mut self, config: &Configuration) -> f64 {
        self.evaluate(config).map_or(f64::INFINITY, |e| e.total)
    }

    pub fn is_feasible(&mut self, config: &Configuration) -> bool {
        self.evaluate(config).is_some()
    }

    pub fn solution(&mut self, config: &Configuration) -> Option<Solution> {
        let eval = self.evaluate(config)?;
        Some(Solution::new(self.instance, config.clone(), eval.plans.clone()))
    }

    pub fn evaluate(&mut self, config: &Configuration) -> Option<Arc<Evaluation>> {
        self.stats.requests += 1;
        if let Some(v) = self.values.get(config) {
            self.stats.cache_hits += 1;
            return Some(v.clone());
        }
        if self.infeasible.contains(config) {
            self.stats.cache_hits += 1;
            return None;
        }
        let k_count = self.instance.vehicles.len();
        let mut plans: Vec<Option<Arc<VehiclePlan>>> = vec![None; k_count];
        let mut todo = Vec::new();
        for k in 0..k_count {
            let hit = self.solved[k].iter().rev().find(|s| reusable(self.instance, config, &s.config, &s.plan));
            match hit {
                Some(s) => {
                    self.stats.vehicle_reuses += 1;
                    plans[k] = Some(s.plan.clone());
                }
                None => todo.push(k),
            }
        }
        let instance = self.instance;
        let opts = self.opts;
        let solve = |k: usize, bounds: &RouteBounds| {
            let r = solve_vehicle(instance, bounds, k, config, opts).expect("decoding a found path");
            (k, r.plan.map(Arc::new), r.stats.heuristic)
        };
        let results: Vec<(usize, Option<Arc<VehiclePlan>>, bool)> = if self.parallel && todo.len() > 1 {
            todo.par_iter().map(|&k| solve(k, &self.bounds[k])).collect()
        } else {
            let mut out = Vec::new();
            for &k in &todo {
                let r = solve(k, &self.bounds[k]);
                let stop = r.1.is_none();
                out.push(r);
                if stop {
                    break;
                }
            }
            out
        };
        let mut feasible = true;
        for (k, plan, heuristic) in results {
            self.stats.vehicle_solves += 1;
            if heuristic {
                self.stats.heuristic_solves += 1;
            }
            match plan {
                Some(p) => {
                    let list = &mut self.solved[k];
                    if list.len() == REUSE_WINDOW {
                        list.remove(0);
                    }
                    list.push(Solved { config: config.clone(), plan: p.clone() });
                    plans[k] = Some(p);
                }
                None => feasible = false,
            }
        }
        if !feasible {
            self.infeasible.insert(config.clone());
            return None;
        }
        let plans: Vec<VehiclePlan> = plans.into_iter().map(|p| (*p.expect("every vehicle solved")).clone()).collect();
        let infrastructure = config.infrastructure_cost(self.instance);
        let total = infrastructure + plans.iter().map(|p| p.cost()).sum::<f64>();
        let eval = Arc::new(Evaluation { infrastructure, total, plans });
        self.values.insert(config.clone(), eval.clone());
        Some(eval)
    }
}
