//! Iterated local search over charging configurations.
//!
//! RNG streams derived from the run seed: 0 initialization, 1 to 6 the
//! operators in sweep order, 7 perturbation.

mod eval;
mod operators;
pub mod report;

use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use eval::{EvalStats, Evaluation, Evaluator};
pub use operators::{Operator, ScreenedMove};

use crate::model::{Configuration, Instance, Solution, StationRef};
use crate::rcspp::SolveOptions;
use crate::TOL;

#[derive(Debug, Error, PartialEq)]
pub enum IlsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no feasible initialization after {draws} draws")]
    NoFeasibleInitialization { draws: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlsParams {
    /// Baseline perturbation strength.
    pub phi: usize,
    /// Iterations without a new incumbent before the strength grows.
    pub xi_max: usize,
    /// Sample size of every operator neighbourhood.
    pub zeta: usize,
    pub epsilon: f64,
    /// Stations drawn per initialization attempt.
    pub kappa: usize,
    pub beta_min: u64,
    pub time_limit: Option<Duration>,
    pub max_iterations: Option<u64>,
    /// Stop as soon as the best cost is at or below this value.
    pub target: Option<f64>,
    pub seed: u64,
    pub max_init_draws: u64,
    /// Solve the vehicles of one configuration concurrently.
    pub parallel: bool,
    /// Keep every move rejected by the lower-bound screen.
    pub record_screens: bool,
    /// Log every label expansion of the routing subproblem.
    pub trace: bool,
}

impl Default for IlsParams {
    fn default() -> Self {
        IlsParams {
            phi: 2,
            xi_max: 10,
            zeta: 2,
            epsilon: 1e-3,
            kappa: 4,
            beta_min: 250_000,
            time_limit: Some(Duration::from_secs(60)),
            max_iterations: None,
            target: None,
            seed: 0,
            max_init_draws: 10_000,
            parallel: false,
            record_screens: false,
            trace: false,
        }
    }
}

impl IlsParams {
    pub fn validate(&self) -> Result<(), IlsError> {
        let bad = |m: &str| Err(IlsError::InvalidParams(m.into()));
        if self.phi < 1 {
            return bad("phi must be at least 1");
        }
        if self.xi_max < 1 {
            return bad("xi_max must be at least 1");
        }
        if self.zeta < 1 {
            return bad("zeta must be at least 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be positive");
        }
        if self.kappa < 1 {
            return bad("kappa must be at least 1");
        }
        if self.max_init_draws < 1 {
            return bad("max_init_draws must be at least 1");
        }
        Ok(())
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions { beta_min: self.beta_min, trace: self.trace, ..SolveOptions::default() }
    }
}

/// A configuration with its evaluated cost (infinite when infeasible).
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub config: Configuration,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorStats {
    pub calls: u64,
    /// Calls that returned a cheaper solution.
    pub improved: u64,
    /// Moves whose configuration was evaluated.
    pub moves: u64,
    /// Moves skipped by the lower-bound screen.
    pub screened: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub iteration: u64,
    /// Configuration evaluation requests issued so far.
    pub evaluations: u64,
    pub elapsed: Duration,
    pub cost: f64,
}

/// Why the search ended.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StopReason {
    #[default]
    TimeLimit,
    Iterations,
    Target,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::TimeLimit => "time-limit",
            StopReason::Iterations => "iterations",
            StopReason::Target => "target",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub iterations: u64,
    pub accepted: u64,
    pub init_draws: u64,
    pub perturbations: u64,
    pub perturbation_fallbacks: u64,
    pub operators: [OperatorStats; 6],
    pub eval: EvalStats,
    pub trajectory: Vec<TrajectoryPoint>,
    pub elapsed: Duration,
    pub stopped_by: StopReason,
}

#[derive(Debug, Clone)]
pub struct IlsResult {
    pub solution: Solution,
    pub stats: RunStats,
}

/// Search state: evaluator, parameters, random streams and statistics.
#[derive(Debug)]
pub struct Ils<'a> {
    pub eval: Evaluator<'a>,
    pub params: IlsParams,
    init_rng: ChaCha8Rng,
    op_rngs: Vec<ChaCha8Rng>,
    perturb_rng: ChaCha8Rng,
    pub stats: RunStats,
    pub screens: Vec<ScreenedMove>,
}

fn stream(seed: u64, s: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(s);
    r
}

impl<'a> Ils<'a> {
    pub fn new(instance: &'a Instance, params: IlsParams) -> Result<Self, IlsError> {
        params.validate()?;
        let eval = Evaluator::new(instance, params.solve_options(), params.parallel);
        Ok(Ils {
            eval,
            init_rng: stream(params.seed, 0),
            op_rngs: (1..=6).map(|s| stream(params.seed, s)).collect(),
            perturb_rng: stream(params.seed, 7),
            params,
            stats: RunStats::default(),
            screens: Vec::new(),
        })
    }

    pub fn instance(&self) -> &'a Instance {
        self.eval.instance
    }

    pub fn candidate(&mut self, config: Configuration) -> Candidate {
        let cost = self.eval.cost(&config);
        Candidate { config, cost }
    }

    pub fn solution(&mut self, c: &Candidate) -> Option<Solution> {
        self.eval.solution(&c.config)
    }

    /// Draws `kappa` stations uniformly until the drawn configuration is
    /// feasible. Dynamic stations are drawn with every segment.
    pub fn initialize(&mut self) -> Result<Candidate, IlsError> {
        let all: Vec<StationRef> = self.instance().stations().collect();
        let kappa = self.params.kappa.min(all.len());
        for draw in 1..=self.params.max_init_draws {
            let mut config = Configuration::empty(self.instance());
            for i in sample(&mut self.init_rng, all.len(), kappa) {
                config.add(all[i]);
            }
            let c = self.candidate(config);
            if c.cost.is_finite() {
                self.stats.init_draws = draw;
                return Ok(c);
            }
        }
        self.stats.init_draws = self.params.max_init_draws;
        Err(IlsError::NoFeasibleInitialization { draws: self.params.max_init_draws })
    }

    /// Binary search for the shortest feasible segment prefix of dynamic
    /// station `f`, all other stations fixed. The search starts from the full
    /// station; if that is infeasible the full station is returned.
    pub fn tighten(&mut self, config: &Configuration, f: usize) -> Candidate {
        let m = self.instance().dynamic[f].segments.len() as isize;
        let mut c = config.clone();
        let (mut lb, mut ub, mut r) = (-1isize, m, m);
        while ub - lb > 1 {
            c.set_prefix(f, r as usize);
            if self.eval.is_feasible(&c) {
                ub = r;
            } else {
                lb = r;
            }
            r = lb + (ub - lb) / 2;
        }
        c.set_prefix(f, ub as usize);
        self.candidate(c)
    }

    /// Removes up to `strength` random built stations, then adds random
    /// unbuilt stations, one more per failed attempt, until feasible. Falls
    /// back to `incumbent` when even every unbuilt station does not repair it.
    pub fn perturb(&mut self, incumbent: &Candidate, strength: usize) -> Candidate {
        self.stats.perturbations += 1;
        let mut destroyed = incumbent.config.clone();
        let built = destroyed.built();
        for i in sample(&mut self.perturb_rng, built.len(), strength.min(built.len())) {
            destroyed.remove(built[i]);
        }
        let mut current = self.candidate(destroyed);
        let mut strength = strength.max(1);
        while !current.cost.is_finite() {
            let pool = current.config.unbuilt();
            let n = strength.min(pool.len());
            let mut repaired = current.config.clone();
            for i in sample(&mut self.perturb_rng, pool.len(), n) {
                repaired.add(pool[i]);
            }
            let c = self.candidate(repaired);
            if c.cost.is_finite() {
                current = c;
                break;
            }
            if n == pool.len() {
                log::warn!("perturbation could not restore feasibility; keeping the incumbent");
                self.stats.perturbation_fallbacks += 1;
                return incumbent.clone();
            }
            strength += 1;
        }
        current
    }

    /// Applies the six operators in order until a sweep improves by less
    /// than epsilon.
    pub fn local_search(&mut self, mut s: Candidate) -> Candidate {
        let eps = self.params.epsilon;
        let mut local_min = s.cost + 2.0 * eps;
        while s.cost + eps <= local_min {
            local_min = s.cost;
            for op in Operator::ALL {
                s = self.apply(op, s);
            }
        }
        s
    }

    fn stop(&self, start: Instant, best: f64) -> Option<StopReason> {
        if matches!(self.params.target, Some(t) if best <= t + TOL) {
            return Some(StopReason::Target);
        }
        if matches!(self.params.max_iterations, Some(n) if self.stats.iterations >= n) {
            return Some(StopReason::Iterations);
        }
        if matches!(self.params.time_limit, Some(t) if start.elapsed() >= t) {
            return Some(StopReason::TimeLimit);
        }
        None
    }

    fn record(&mut self, start: Instant, cost: f64) {
        self.stats.trajectory.push(TrajectoryPoint {
            iteration: self.stats.iterations,
            evaluations: self.eval.stats.requests,
            elapsed: start.elapsed(),
            cost,
        });
    }

    /// Full search. Returns the cheapest solution seen, which can be up to
    /// epsilon cheaper than the final incumbent.
    pub fn run(&mut self) -> Result<IlsResult, IlsError> {
        let start = Instant::now();
        let s0 = self.initialize()?;
        let phi = self.params.phi;
        let phi_max = s0.config.size().max(1);
        let mut incumbent = self.local_search(s0);
        let mut best = incumbent.clone();
        self.record(start, best.cost);
        let (mut xi, mut strength) = (0usize, phi);
        loop {
            if let Some(reason) = self.stop(start, best.cost) {
                self.stats.stopped_by = reason;
                break;
            }
            self.stats.iterations += 1;
            if xi >= self.params.xi_max {
                strength = (strength + phi).min(phi_max);
            }
            let perturbed = self.perturb(&incumbent, strength);
            let searched = self.local_search(perturbed);
            if searched.cost <= incumbent.cost + self.params.epsilon {
                incumbent = searched;
                self.stats.accepted += 1;
                xi = 0;
                strength = phi;
            } else {
                xi += 1;
            }
            if incumbent.cost < best.cost {
                best = incumbent.clone();
                self.record(start, best.cost);
            }
        }
        self.stats.elapsed = start.elapsed();
        self.stats.eval = self.eval.stats;
        let solution = self.solution(&best).expect("incumbent is feasible");
        Ok(IlsResult { solution, stats: self.stats.clone() })
    }
}

/// Runs the search with `params` on `instance`.
pub fn run(instance: &Instance, params: IlsParams) -> Result<IlsResult, IlsError> {
    Ils::new(instance, params)?.run()
}
