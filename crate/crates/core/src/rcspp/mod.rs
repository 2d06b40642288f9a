//! Per-vehicle shortest paths under charge and time-window constraints.
//!
//! Bidirectional A* over a [`VehicleGraph`]: forward labels grow from the
//! depot departure, backward labels from the depot arrival, and compatible
//! pairs meeting at a vertex become joint labels holding a complete path.
//! Dominance is checked lazily when a label is popped.

mod decode;
mod label;
mod store;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub use decode::{decode_path, path_profile};
pub use label::{
    dominates_backward, dominates_forward, heuristic_backward, heuristic_forward, propagate_backward,
    propagate_forward, soc_deviation, try_join, Label,
};
pub use store::DominanceStore;

use crate::graph::{build_vehicle_graph, RouteBounds, VehicleGraph};
use crate::model::{Configuration, Instance, ModelError, VehiclePlan};

/// How often the switch into heuristic mode is considered.
pub const OVERLAP_CHECK_EVERY: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Pops before the search may turn heuristic; `u64::MAX` keeps it exact.
    pub beta_min: u64,
    pub bidirectional: bool,
    pub dominance: bool,
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { beta_min: 250_000, bidirectional: true, dominance: true, trace: false }
    }
}

impl SolveOptions {
    pub fn exact() -> Self {
        SolveOptions { beta_min: u64::MAX, ..Self::default() }
    }

    pub fn forward_only() -> Self {
        SolveOptions { bidirectional: false, ..Self::exact() }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub pops: u64,
    pub forward_pops: u64,
    pub backward_pops: u64,
    pub labels: u64,
    pub dominated: u64,
    pub joins: u64,
    pub heuristic: bool,
    pub trace: Vec<String>,
}

/// A complete path through the vehicle graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPath {
    /// Label cost as accumulated by the search.
    pub cost: f64,
    pub arcs: Vec<usize>,
    /// Graph vertices along the path, one more than `arcs`.
    pub vertices: Vec<usize>,
    /// Departure time at every vertex.
    pub times: Vec<f64>,
    /// SoC at departure from every vertex.
    pub socs: Vec<f64>,
    pub joined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    label: Label,
    vertex: usize,
    /// Forward: parent label and the arc leading here. Backward: the label
    /// this one was extended from and the arc leaving this vertex.
    parent: Option<(usize, usize)>,
    propagated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Forward(usize),
    Backward(usize),
    Joint(usize, usize),
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    priority: f64,
    cost: f64,
    time_key: f64,
    seq: u64,
    item: Item,
}

impl Entry {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then(self.cost.total_cmp(&other.cost))
            .then(self.time_key.total_cmp(&other.time_key))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

struct Search<'a> {
    instance: &'a Instance,
    graph: &'a VehicleGraph,
    bounds: &'a RouteBounds,
    opts: SolveOptions,
    fw: Vec<Node>,
    bw: Vec<Node>,
    fw_store: Vec<DominanceStore>,
    bw_store: Vec<DominanceStore>,
    fw_queue: BinaryHeap<Entry>,
    bw_queue: BinaryHeap<Entry>,
    joints: BinaryHeap<Entry>,
    seq: u64,
    heuristic: bool,
    stats: SolveStats,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, graph: &'a VehicleGraph, bounds: &'a RouteBounds, opts: SolveOptions) -> Self {
        let n = graph.vertices.len();
        Search {
            instance,
            graph,
            bounds,
            opts,
            fw: Vec::new(),
            bw: Vec::new(),
            fw_store: vec![DominanceStore::new(); n],
            bw_store: vec![DominanceStore::new(); n],
            fw_queue: BinaryHeap::new(),
            bw_queue: BinaryHeap::new(),
            joints: BinaryHeap::new(),
            seq: 0,
            heuristic: false,
            stats: SolveStats::default(),
        }
    }

    fn priority(&self, dir: Dir, label: &Label, vertex: usize) -> f64 {
        let bound = self.graph.vertices[vertex].bound;
        match (self.heuristic, dir) {
            (true, Dir::Forward) => soc_deviation(self.instance, label, true, bound, self.bounds),
            (true, Dir::Backward) => soc_deviation(self.instance, label, false, bound, self.bounds),
            (false, Dir::Forward) => label.cost + heuristic_forward(self.instance, label, bound),
            (false, Dir::Backward) => {
                label.cost + heuristic_backward(self.instance, label, bound, self.bounds.stop(0))
            }
        }
    }

    fn entry(&mut self, dir: Dir, id: usize) -> Entry {
        let node = match dir {
            Dir::Forward => self.fw[id],
            Dir::Backward => self.bw[id],
        };
        self.seq += 1;
        let (time_key, item) = match dir {
            Dir::Forward => (node.label.time, Item::Forward(id)),
            Dir::Backward => (-node.label.time, Item::Backward(id)),
        };
        Entry { priority: self.priority(dir, &node.label, node.vertex), cost: node.label.cost, time_key, seq: self.seq, item }
    }

    fn push(&mut self, dir: Dir, node: Node) {
        self.stats.labels += 1;
        let id = match dir {
            Dir::Forward => {
                self.fw.push(node);
                self.fw.len() - 1
            }
            Dir::Backward => {
                self.bw.push(node);
                self.bw.len() - 1
            }
        };
        let entry = self.entry(dir, id);
        match dir {
            Dir::Forward => self.fw_queue.push(entry),
            Dir::Backward => self.bw_queue.push(entry),
        }
    }

    fn push_joint(&mut self, f: usize, b: usize) {
        self.seq += 1;
        self.stats.joins += 1;
        let cost = self.fw[f].label.cost + self.bw[b].label.cost;
        self.joints.push(Entry { priority: cost, cost, time_key: 0.0, seq: self.seq, item: Item::Joint(f, b) });
    }

    /// Removes the globally smallest entry across the three heaps.
    fn pop_global(&mut self) -> Option<Entry> {
        let mut best: Option<(Entry, u8)> = None;
        for (which, top) in [(0u8, self.fw_queue.peek()), (1, self.bw_queue.peek()), (2, self.joints.peek())] {
            if let Some(&e) = top {
                if best.map_or(true, |(b, _)| e.key_cmp(&b) == Ordering::Less) {
                    best = Some((e, which));
                }
            }
        }
        let (_, which) = best?;
        match which {
            0 => self.fw_queue.pop(),
            1 => self.bw_queue.pop(),
            _ => self.joints.pop(),
        }
    }

    fn store_key(dir: Dir, label: &Label) -> (f64, f64, f64) {
        match dir {
            Dir::Forward => (label.cost, label.soc, label.time),
            Dir::Backward => (label.cost, -label.soc, -label.time),
        }
    }

    fn trace(&mut self, dir: &str, vertex: usize, label: &Label, priority: f64) {
        if self.opts.trace {
            let line = format!(
                "{dir} v={vertex} cost={:.9} soc={:.9} time={:.9} priority={:.9}",
                label.cost, label.soc, label.time, priority
            );
            log::trace!("vehicle {}: {line}", self.graph.vehicle);
            self.stats.trace.push(line);
        }
    }

    /// Handles one popped directional label. Returns whether a joint label was
    /// created.
    fn expand(&mut self, dir: Dir, id: usize, priority: f64) -> bool {
        let node = match dir {
            Dir::Forward => self.fw[id],
            Dir::Backward => self.bw[id],
        };
        let v = node.vertex;
        self.trace(if dir == Dir::Forward { "fw" } else { "bw" }, v, &node.label, priority);
        let (c, a, b) = Self::store_key(dir, &node.label);
        let own = match dir {
            Dir::Forward => &self.fw_store[v],
            Dir::Backward => &self.bw_store[v],
        };
        let dominated = if self.graph.conservative { own.is_dominated_same_a(c, a, b) } else { own.is_dominated(c, a, b) };
        if self.opts.dominance && dominated {
            self.stats.dominated += 1;
            return false;
        }
        let mut propagated = false;
        match dir {
            Dir::Forward => {
                for k in 0..self.graph.out_arcs[v].len() {
                    let arc_id = self.graph.out_arcs[v][k];
                    let arc = &self.graph.arcs[arc_id];
                    let head = &self.graph.vertices[arc.to];
                    if let Some(next) = propagate_forward(self.instance, &node.label, arc, head) {
                        propagated = true;
                        let to = arc.to;
                        self.push(dir, Node { label: next, vertex: to, parent: Some((id, arc_id)), propagated: false });
                    }
                }
            }
            Dir::Backward => {
                for k in 0..self.graph.in_arcs[v].len() {
                    let arc_id = self.graph.in_arcs[v][k];
                    let arc = &self.graph.arcs[arc_id];
                    let tail = &self.graph.vertices[arc.from];
                    if let Some(next) = propagate_backward(self.instance, &node.label, arc, tail) {
                        propagated = true;
                        let from = arc.from;
                        self.push(dir, Node { label: next, vertex: from, parent: Some((id, arc_id)), propagated: false });
                    }
                }
            }
        }
        let depot = v == self.graph.depot_start() || v == self.graph.depot_end();
        let keep = propagated || (dir == Dir::Backward && depot);
        if !keep {
            return false;
        }
        match dir {
            Dir::Forward => {
                self.fw[id].propagated = true;
                self.fw_store[v].insert(c, a, b, id);
            }
            Dir::Backward => {
                self.bw[id].propagated = true;
                self.bw_store[v].insert(c, a, b, id);
            }
        }
        let partner = match dir {
            Dir::Forward => self.bw_store[v].ids().iter().copied().find(|&o| try_join(&node.label, &self.bw[o].label).is_some()),
            Dir::Backward => self.fw_store[v].ids().iter().copied().find(|&o| try_join(&self.fw[o].label, &node.label).is_some()),
        };
        match (dir, partner) {
            (Dir::Forward, Some(o)) => {
                self.push_joint(id, o);
                true
            }
            (Dir::Backward, Some(o)) => {
                self.push_joint(o, id);
                true
            }
            _ => false,
        }
    }

    fn overlap(&self) -> bool {
        (0..self.graph.positions).any(|p| !self.fw_store[p].is_empty() && !self.bw_store[p].is_empty())
    }

    fn run(&mut self) -> Option<Item> {
        let e = &self.instance.energy;
        let start = self.graph.depot_start();
        let end = self.graph.depot_end();
        let s = &self.graph.vertices[start];
        self.push(Dir::Forward, Node { label: Label::forward(0.0, e.q_init, s.earliest), vertex: start, parent: None, propagated: false });
        if self.opts.bidirectional {
            let t = self.graph.vertices[end].latest;
            let l = Label::backward(0.0, e.q_min, t, e.q_max - e.q_min);
            self.push(Dir::Backward, Node { label: l, vertex: end, parent: None, propagated: false });
        }
        while !self.fw_queue.is_empty() || !self.joints.is_empty() {
            let entry = self.pop_global()?;
            self.stats.pops += 1;
            match entry.item {
                Item::Joint(..) => return Some(entry.item),
                Item::Forward(id) => {
                    self.stats.forward_pops += 1;
                    if self.fw[id].vertex == end {
                        return Some(entry.item);
                    }
                    self.expand(Dir::Forward, id, entry.priority);
                }
                Item::Backward(id) => {
                    self.stats.backward_pops += 1;
                    self.expand(Dir::Backward, id, entry.priority);
                }
            }
            if self.opts.bidirectional
                && self.opts.beta_min != u64::MAX
                && self.stats.pops > self.opts.beta_min
                && self.stats.pops % OVERLAP_CHECK_EVERY == 0
                && self.overlap()
            {
                return self.run_heuristic();
            }
        }
        None
    }

    /// Finishes the search greedily once the exact phase has run long enough.
    fn run_heuristic(&mut self) -> Option<Item> {
        self.stats.heuristic = true;
        if let Some(j) = self.joints.pop() {
            return Some(j.item);
        }
        self.heuristic = true;
        let dir = if self.fw_queue.len() <= self.bw_queue.len() { Dir::Forward } else { Dir::Backward };
        let queue = match dir {
            Dir::Forward => std::mem::take(&mut self.fw_queue),
            Dir::Backward => std::mem::take(&mut self.bw_queue),
        };
        let mut items: Vec<Entry> = queue.into_vec();
        items.sort_by(|a, b| a.seq.cmp(&b.seq));
        for old in items {
            let id = match old.item {
                Item::Forward(id) | Item::Backward(id) => id,
                Item::Joint(..) => unreachable!(),
            };
            let mut fresh = self.entry(dir, id);
            fresh.seq = old.seq;
            match dir {
                Dir::Forward => self.fw_queue.push(fresh),
                Dir::Backward => self.bw_queue.push(fresh),
            }
        }
        let end = self.graph.depot_end();
        while !self.fw_queue.is_empty() && !self.bw_queue.is_empty() {
            let entry = match dir {
                Dir::Forward => self.fw_queue.pop()?,
                Dir::Backward => self.bw_queue.pop()?,
            };
            self.stats.pops += 1;
            match entry.item {
                Item::Forward(id) => {
                    self.stats.forward_pops += 1;
                    if self.fw[id].vertex == end {
                        return Some(entry.item);
                    }
                    if self.expand(Dir::Forward, id, entry.priority) {
                        return self.joints.pop().map(|j| j.item);
                    }
                }
                Item::Backward(id) => {
                    self.stats.backward_pops += 1;
                    if self.expand(Dir::Backward, id, entry.priority) {
                        return self.joints.pop().map(|j| j.item);
                    }
                }
                Item::Joint(..) => unreachable!(),
            }
        }
        None
    }

    fn path(&self, item: Item) -> GraphPath {
        let (fw_id, bw_id, cost) = match item {
            Item::Forward(f) => (f, None, self.fw[f].label.cost),
            Item::Joint(f, b) => (f, Some(b), self.fw[f].label.cost + self.bw[b].label.cost),
            Item::Backward(_) => unreachable!(),
        };
        let mut arcs = Vec::new();
        let mut cur = fw_id;
        while let Some((parent, arc)) = self.fw[cur].parent {
            arcs.push(arc);
            cur = parent;
        }
        arcs.reverse();
        if let Some(mut b) = bw_id {
            while let Some((next, arc)) = self.bw[b].parent {
                arcs.push(arc);
                b = next;
            }
        }
        let (vertices, times, socs) = path_profile(self.instance, self.graph, &arcs);
        GraphPath { cost, arcs, vertices, times, socs, joined: bw_id.is_some() }
    }
}

/// Runs the label-setting search on one vehicle graph.
pub fn solve(
    instance: &Instance,
    graph: &VehicleGraph,
    bounds: &RouteBounds,
    opts: SolveOptions,
) -> (Option<GraphPath>, SolveStats) {
    let mut search = Search::new(instance, graph, bounds, opts);
    let found = search.run();
    let path = found.map(|item| search.path(item));
    (path, search.stats)
}

/// Outcome of one vehicle subproblem.
#[derive(Debug, Clone)]
pub struct VehicleResult {
    pub plan: Option<VehiclePlan>,
    pub path: Option<GraphPath>,
    pub stats: SolveStats,
}

impl VehicleResult {
    pub fn cost(&self) -> Option<f64> {
        self.plan.as_ref().map(|p| p.cost())
    }
}

/// Builds the graph of `vehicle` under `config`, solves it and decodes the path.
pub fn solve_vehicle(
    instance: &Instance,
    bounds: &RouteBounds,
    vehicle: usize,
    config: &Configuration,
    opts: SolveOptions,
) -> Result<VehicleResult, ModelError> {
    let graph = build_vehicle_graph(instance, bounds, vehicle, config);
    let (path, stats) = solve(instance, &graph, bounds, opts);
    let plan = match &path {
        Some(p) => Some(decode_path(instance, &graph, p)?),
        None => None,
    };
    Ok(VehicleResult { plan, path, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::local_energy_bounds;
    use crate::instances::tiny;
    use crate::model::{validate_plan, StationRef};

    fn run(name: &str, config: impl Fn(&Instance) -> Configuration, opts: SolveOptions) -> Vec<Option<f64>> {
        let inst = tiny::tiny_family(name).unwrap();
        let config = config(&inst);
        (0..inst.vehicles.len())
            .map(|k| {
                let bounds = local_energy_bounds(&inst, k);
                let r = solve_vehicle(&inst, &bounds, k, &config, opts).unwrap();
                if let Some(plan) = &r.plan {
                    let v = validate_plan(&inst, &config, plan);
                    assert!(v.is_empty(), "{name}: {v:?}");
                }
                r.cost()
            })
            .collect()
    }

    #[test]
    fn direct_route_when_no_charge_is_needed() {
        let inst = tiny::tiny_family("no-charge-needed").unwrap();
        let costs = run("no-charge-needed", Configuration::empty, SolveOptions::exact());
        let need = local_energy_bounds(&inst, 0).stop(0);
        assert!((costs[0].unwrap() - need * inst.energy.consumption_price).abs() < 1e-12);
    }

    #[test]
    fn missing_stations_make_the_vehicle_infeasible() {
        let costs = run("fig4-triangle", Configuration::empty, SolveOptions::exact());
        assert_eq!(costs, vec![None]);
    }

    #[test]
    fn toy_uses_the_dynamic_prefix() {
        let cfg = |inst: &Instance| {
            let mut c = Configuration::empty(inst);
            c.add(StationRef::Dynamic(0));
            c.set_prefix(0, 1);
            c
        };
        let costs = run("fig3-toy", cfg, SolveOptions::exact());
        assert!(costs[0].is_some());
    }

    #[test]
    fn variants_agree_on_the_catalog() {
        for name in tiny::TINY_NAMES {
            let exact = run(name, Configuration::full, SolveOptions::exact());
            let fwd = run(name, Configuration::full, SolveOptions::forward_only());
            let nodom = run(name, Configuration::full, SolveOptions { dominance: false, ..SolveOptions::exact() });
            for ((a, b), c) in exact.iter().zip(&fwd).zip(&nodom) {
                match (a, b, c) {
                    (Some(a), Some(b), Some(c)) => {
                        assert!((a - b).abs() < 1e-9 && (a - c).abs() < 1e-9, "{name}: {a} {b} {c}");
                    }
                    (None, None, None) => {}
                    _ => panic!("{name}: feasibility differs {a:?} {b:?} {c:?}"),
                }
            }
        }
    }

    #[test]
    fn trace_has_one_line_per_expanded_pop() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let bounds = local_energy_bounds(&inst, 0);
        let opts = SolveOptions { trace: true, ..SolveOptions::exact() };
        let r = solve_vehicle(&inst, &bounds, 0, &Configuration::full(&inst), opts).unwrap();
        assert!(!r.stats.trace.is_empty());
        assert!(r.stats.trace.len() as u64 <= r.stats.pops);
        assert!(r.stats.trace[0].starts_with("fw v=0") || r.stats.trace[0].starts_with("bw"));
    }

    #[test]
    fn heuristic_mode_returns_a_valid_path() {
        let inst = tiny::tiny_family("three-vehicles").unwrap();
        let config = Configuration::full(&inst);
        for k in 0..inst.vehicles.len() {
            let bounds = local_energy_bounds(&inst, k);
            let exact = solve_vehicle(&inst, &bounds, k, &config, SolveOptions::exact()).unwrap();
            let heur = solve_vehicle(&inst, &bounds, k, &config, SolveOptions { beta_min: 0, ..SolveOptions::default() })
                .unwrap();
            if let (Some(e), Some(h)) = (exact.cost(), heur.cost()) {
                assert!(h >= e - 1e-9);
                assert!(validate_plan(&inst, &config, heur.plan.as_ref().unwrap()).is_empty());
            }
        }
    }
}
