use rand::seq::index::sample;

use super::{Candidate, Ils};
use crate::model::{Configuration, StationRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    StripDyn,
    RemoveStat,
    SwapToDyn,
    SwapToStat,
    AddDyn,
    AddStat,
}

impl Operator {
    /// Sweep order of the local search.
    pub const ALL: [Operator; 6] = [
        Operator::StripDyn,
        Operator::RemoveStat,
        Operator::SwapToDyn,
        Operator::SwapToStat,
        Operator::AddDyn,
        Operator::AddStat,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Operator::StripDyn => "strip-dyn",
            Operator::RemoveStat => "remove-stat",
            Operator::SwapToDyn => "swap-to-dyn",
            Operator::SwapToStat => "swap-to-stat",
            Operator::AddDyn => "add-dyn",
            Operator::AddStat => "add-stat",
        }
    }
}

/// A move skipped because its lower bound could not beat the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenedMove {
    pub operator: Operator,
    /// Configuration the new station would have been added to.
    pub base: Configuration,
    pub added: StationRef,
    pub bound: f64,
    pub threshold: f64,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Stationary,
    Dynamic,
}

fn of_kind(s: StationRef, kind: Kind) -> bool {
    matches!((s, kind), (StationRef::Stationary(_), Kind::Stationary) | (StationRef::Dynamic(_), Kind::Dynamic))
}

impl<'a> Ils<'a> {
    pub fn apply(&mut self, op: Operator, s: Candidate) -> Candidate {
        let before = s.cost;
        let out = match op {
            Operator::StripDyn => self.strip_dyn(s),
            Operator::RemoveStat => self.remove_stat(s),
            Operator::SwapToDyn => self.swap(op, s, Some(Kind::Stationary), Kind::Dynamic),
            Operator::SwapToStat => self.swap(op, s, None, Kind::Stationary),
            Operator::AddDyn => self.add(op, s, Kind::Dynamic),
            Operator::AddStat => self.add(op, s, Kind::Stationary),
        };
        let st = &mut self.stats.operators[op.index()];
        st.calls += 1;
        if out.cost + self.params.epsilon <= before {
            st.improved += 1;
        }
        out
    }

    /// Up to zeta distinct elements of `pool` drawn from the operator's stream.
    fn sample_pool(&mut self, op: Operator, pool: &[StationRef]) -> Vec<StationRef> {
        let n = self.params.zeta.min(pool.len());
        sample(&mut self.op_rngs[op.index()], pool.len(), n).into_iter().map(|i| pool[i]).collect()
    }

    fn built_of(config: &Configuration, kind: Option<Kind>) -> Vec<StationRef> {
        config.built().into_iter().filter(|&s| kind.is_none_or(|k| of_kind(s, k))).collect()
    }

    /// Unbuilt station of `kind` closest to (or farthest from) `f`, ties to
    /// the lower index.
    fn counterpart(&self, config: &Configuration, f: StationRef, kind: Kind, farthest: bool) -> Option<StationRef> {
        let inst = self.instance();
        let at = inst.station_anchor(f);
        let mut best: Option<(f64, StationRef)> = None;
        for g in config.unbuilt().into_iter().filter(|&g| of_kind(g, kind)) {
            let d = inst.network.distance(at, inst.station_anchor(g));
            let better = match best {
                None => true,
                Some((bd, _)) => if farthest { d > bd } else { d < bd },
            };
            if better {
                best = Some((d, g));
            }
        }
        best.map(|(_, g)| g)
    }

    fn min_added_cost(&self, g: StationRef) -> f64 {
        match g {
            StationRef::Stationary(f) => self.instance().stationary[f].cost,
            StationRef::Dynamic(f) => self.instance().dynamic[f].min_build_cost(),
        }
    }

    /// Whether the lower bound of adding `g` to `base` beats `threshold`.
    /// Skipped moves are counted and optionally recorded.
    fn passes_screen(&mut self, op: Operator, base: &Configuration, g: StationRef, threshold: f64) -> bool {
        let bound =
            base.infrastructure_cost(self.instance()) + self.eval.routing_lower_bound() + self.min_added_cost(g);
        if bound >= threshold {
            self.stats.operators[op.index()].screened += 1;
            if self.params.record_screens {
                self.screens.push(ScreenedMove { operator: op, base: base.clone(), added: g, bound, threshold });
            }
            return false;
        }
        true
    }

    fn strip_dyn(&mut self, s: Candidate) -> Candidate {
        let op = Operator::StripDyn;
        let pool = Self::built_of(&s.config, Some(Kind::Dynamic));
        let mut best = s.clone();
        for f in self.sample_pool(op, &pool) {
            let StationRef::Dynamic(f) = f else { unreachable!() };
            self.stats.operators[op.index()].moves += 1;
            let c = self.tighten(&s.config, f);
            if c.cost + self.params.epsilon <= best.cost {
                best = c;
            }
        }
        best
    }

    fn remove_stat(&mut self, s: Candidate) -> Candidate {
        let op = Operator::RemoveStat;
        let pool = Self::built_of(&s.config, Some(Kind::Stationary));
        let mut best = s.clone();
        for f in self.sample_pool(op, &pool) {
            self.stats.operators[op.index()].moves += 1;
            let mut config = s.config.clone();
            config.remove(f);
            let c = self.candidate(config);
            if c.cost + self.params.epsilon <= best.cost {
                best = c;
            }
        }
        best
    }

    /// Replaces sampled built stations (of `from`, or any kind) with their
    /// closest unbuilt counterpart of kind `to`.
    fn swap(&mut self, op: Operator, s: Candidate, from: Option<Kind>, to: Kind) -> Candidate {
        let pool = Self::built_of(&s.config, from);
        let mut best = s.clone();
        for f in self.sample_pool(op, &pool) {
            let Some(g) = self.counterpart(&s.config, f, to, false) else { continue };
            let mut config = s.config.clone();
            config.remove(f);
            if !self.passes_screen(op, &config, g, best.cost) {
                continue;
            }
            self.stats.operators[op.index()].moves += 1;
            config.add(g);
            let c = match g {
                StationRef::Dynamic(d) => self.tighten(&config, d),
                StationRef::Stationary(_) => self.candidate(config),
            };
            if c.cost + self.params.epsilon <= best.cost {
                best = c;
            }
        }
        best
    }

    /// Adds, for sampled built stations, the farthest unbuilt station of kind
    /// `to`.
    fn add(&mut self, op: Operator, s: Candidate, to: Kind) -> Candidate {
        let pool = Self::built_of(&s.config, None);
        let mut best = s.clone();
        for f in self.sample_pool(op, &pool) {
            let Some(g) = self.counterpart(&s.config, f, to, true) else { continue };
            if !self.passes_screen(op, &s.config, g, best.cost) {
                continue;
            }
            self.stats.operators[op.index()].moves += 1;
            let mut config = s.config.clone();
            config.add(g);
            let c = match g {
                StationRef::Dynamic(d) => self.tighten(&config, d),
                StationRef::Stationary(_) => self.candidate(config),
            };
            if c.cost + self.params.epsilon <= best.cost {
                best = c;
            }
        }
        best
    }
}
