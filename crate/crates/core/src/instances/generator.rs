//! Synthetic benchmark instances: fixed routes over a point set, dynamic
//! candidates on the longest inter-stop arcs and stationary candidates at
//! crossings between routes of different vehicles.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::builder::InstanceBuilder;
use super::GenError;
use crate::ils::Evaluator;
use crate::model::{Configuration, EnergyParams, Instance, PriceCurve, RouteStop, VertexKind};
use crate::rcspp::SolveOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Clustered,
    Random,
    Mixed,
}

impl std::str::FromStr for Topology {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clustered" | "c" => Ok(Topology::Clustered),
            "random" | "r" => Ok(Topology::Random),
            "mixed" | "rc" => Ok(Topology::Mixed),
            _ => Err(GenError::InvalidSpec(format!("unknown topology '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenSpec {
    pub name: String,
    pub topology: Topology,
    /// Stops of the synthetic point set, shared out among the vehicles.
    pub stops: usize,
    pub vehicles: usize,
    /// Share of each route's inter-stop arcs that receive a dynamic candidate.
    pub dynamic_fraction: f64,
    /// Inclusive range of segments per dynamic candidate.
    pub segment_split: (usize, usize),
    /// Crossing stations to place; `None` means twice the vehicle count.
    pub max_intersections: Option<usize>,
    pub stationary_cost: (f64, f64),
    pub dynamic_cost: (f64, f64),
    pub segment_cost: f64,
    pub consumption_price: f64,
    pub recharge_price: f64,
    pub stationary_rate: f64,
    pub dynamic_rate: f64,
    pub boost_factor: f64,
    pub boost_probability: f64,
    pub consumption_rate: f64,
    pub speed: f64,
    /// Battery capacity as a share of the most demanding route's consumption.
    pub battery_factor: f64,
    /// Latest arrival as a multiple of the cumulative travel time.
    pub slack: f64,
    /// Side length of the square the points are drawn from.
    pub area: f64,
    pub seed: u64,
    pub max_attempts: usize,
    /// Regenerate until the all-stations configuration is feasible.
    pub check_feasibility: bool,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            name: "generated".into(),
            topology: Topology::Random,
            stops: 30,
            vehicles: 3,
            dynamic_fraction: 0.5,
            segment_split: (2, 3),
            max_intersections: None,
            stationary_cost: (15.0, 25.0),
            dynamic_cost: (1.5, 2.5),
            segment_cost: 1e-3,
            consumption_price: 5e-2,
            recharge_price: 5e-2,
            stationary_rate: 1.0,
            dynamic_rate: 1.0,
            boost_factor: 4.0,
            boost_probability: 2.0 / 3.0,
            consumption_rate: 1.0,
            speed: 1.0,
            battery_factor: 0.7,
            slack: 1.5,
            area: 100.0,
            seed: 0,
            max_attempts: 20,
            check_feasibility: true,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::InvalidSpec(m));
        if !(0.0..=0.5).contains(&self.dynamic_fraction) {
            return bad(format!("dynamic fraction {} outside [0, 0.5]", self.dynamic_fraction));
        }
        for (what, (lo, hi)) in [("stationary", self.stationary_cost), ("dynamic", self.dynamic_cost)] {
            if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
                return bad(format!("{what} cost range [{lo}, {hi}] is invalid"));
            }
        }
        if !(self.segment_cost >= 0.0 && self.consumption_price >= 0.0 && self.recharge_price >= 0.0) {
            return bad("costs and prices must be non-negative".into());
        }
        let (a, b) = self.segment_split;
        if a < 1 || a > b {
            return bad(format!("segment split ({a}, {b}) is invalid"));
        }
        if self.vehicles < 1 || self.stops < self.vehicles {
            return bad("need at least one vehicle and one stop per vehicle".into());
        }
        if !(0.0..=1.0).contains(&self.boost_probability) || self.boost_factor <= 0.0 {
            return bad("boost probability must lie in [0, 1] and the factor be positive".into());
        }
        if !(self.slack >= 1.0 && self.battery_factor > 0.0 && self.speed > 0.0 && self.area > 0.0) {
            return bad("slack must be at least 1; battery factor, speed and area positive".into());
        }
        if self.consumption_rate <= 0.0 || self.stationary_rate <= 0.0 || self.dynamic_rate <= 0.0 {
            return bad("rates must be positive".into());
        }
        if self.max_attempts < 1 {
            return bad("max_attempts must be at least 1".into());
        }
        Ok(())
    }
}

/// A stop on an externally supplied route. Missing windows are derived from
/// travel times and the spec's slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePoint {
    pub name: String,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub earliest: Option<f64>,
    #[serde(default)]
    pub latest: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPoint {
    pub name: String,
    pub x: f64,
    pub y: f64,
}

/// Stop sequences, one per vehicle, between a common depot. Stops sharing a
/// name are the same vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteSet {
    pub depot: (f64, f64),
    pub routes: Vec<Vec<RoutePoint>>,
    /// Stationary candidates placed in addition to the crossing stations.
    #[serde(default)]
    pub stations: Vec<NamedPoint>,
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        round2(rng.gen_range(lo..=hi))
    } else {
        lo
    }
}

fn synthetic_points(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let a = spec.area;
    let clamp = |v: f64| (v.clamp(0.0, a) * 10.0).round() / 10.0;
    let random = |rng: &mut ChaCha8Rng| (clamp(rng.gen_range(0.0..a)), clamp(rng.gen_range(0.0..a)));
    let centres: Vec<(f64, f64)> = (0..(spec.stops / 8).clamp(2, 8)).map(|_| random(rng)).collect();
    let clustered = |rng: &mut ChaCha8Rng| {
        let c = centres[rng.gen_range(0..centres.len())];
        let (r, t) = (rng.gen_range(0.0..a * 0.08), rng.gen_range(0.0..2.0 * PI));
        (clamp(c.0 + r * t.cos()), clamp(c.1 + r * t.sin()))
    };
    (0..spec.stops)
        .map(|i| match spec.topology {
            Topology::Random => random(rng),
            Topology::Clustered => clustered(rng),
            Topology::Mixed if i % 2 == 0 => clustered(rng),
            Topology::Mixed => random(rng),
        })
        .collect()
}

/// Share of stops handed to the next sector so that neighbouring routes cross.
const SPILL: f64 = 0.25;

/// Sweep partition around the depot from a random angle, with some stops
/// moved to the next sector, each part visited in nearest-neighbour order.
pub fn synthetic_routes(spec: &GenSpec, rng: &mut ChaCha8Rng) -> RouteSet {
    let depot = (spec.area / 2.0, spec.area / 2.0);
    let points = synthetic_points(spec, rng);
    let offset = rng.gen_range(0.0..2.0 * PI);
    let angle = |p: (f64, f64)| ((p.1 - depot.1).atan2(p.0 - depot.0) - offset).rem_euclid(2.0 * PI);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| angle(points[a]).total_cmp(&angle(points[b])).then(a.cmp(&b)));
    let k = spec.vehicles;
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (pos, &i) in order.iter().enumerate() {
        let mut v = pos * k / order.len();
        if k > 1 && rng.gen_bool(SPILL) {
            v = (v + 1) % k;
        }
        parts[v].push(i);
    }
    let mut routes = Vec::new();
    for mut left in parts {
        let mut at = depot;
        let mut route = Vec::new();
        while !left.is_empty() {
            let d = |i: usize| (points[i].0 - at.0).hypot(points[i].1 - at.1);
            let (pos, _) = left.iter().enumerate().min_by(|a, b| d(*a.1).total_cmp(&d(*b.1))).unwrap();
            let i = left.remove(pos);
            at = points[i];
            route.push(RoutePoint { name: format!("c{i}"), x: at.0, y: at.1, earliest: None, latest: None });
        }
        routes.push(route);
    }
    RouteSet { depot, routes, stations: Vec::new() }
}

/// Proper crossing point of segments `p1p2` and `q1q2`, excluding shared
/// endpoints and touching at an end.
fn crossing(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> Option<(f64, f64)> {
    let r = (p2.0 - p1.0, p2.1 - p1.1);
    let s = (q2.0 - q1.0, q2.1 - q1.1);
    let den = r.0 * s.1 - r.1 * s.0;
    if den.abs() < 1e-12 {
        return None;
    }
    let w = (q1.0 - p1.0, q1.1 - p1.1);
    let t = (w.0 * s.1 - w.1 * s.0) / den;
    let u = (w.0 * r.1 - w.1 * r.0) / den;
    let inner = 1e-6..1.0 - 1e-6;
    (inner.contains(&t) && inner.contains(&u)).then(|| (p1.0 + t * r.0, p1.1 + t * r.1))
}

fn build(spec: &GenSpec, routes: &RouteSet, rng: &mut ChaCha8Rng) -> Result<Instance, GenError> {
    let mut b = InstanceBuilder::new(&spec.name).speed(spec.speed).consumption_rate(spec.consumption_rate);
    let ds = b.vertex("depot", VertexKind::DepotStart, routes.depot.0, routes.depot.1);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, routes.depot.0, routes.depot.1);
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for route in &routes.routes {
        let mut path = vec![ds];
        for p in route {
            let v = *by_name.entry(p.name.clone()).or_insert_with(|| b.vertex(&p.name, VertexKind::Stop, p.x, p.y));
            path.push(v);
        }
        path.push(de);
        paths.push(path);
    }

    let mut longest: f64 = 0.0;
    for (k, path) in paths.iter().enumerate() {
        let mut t = 0.0;
        let mut q = 0.0;
        let mut stops = vec![RouteStop { vertex: ds, earliest: 0.0, latest: 0.0 }];
        for p in 1..path.len() {
            let (dt, dq) = b.leg(path[p - 1], path[p]);
            t += dt;
            q += dq;
            let given = routes.routes[k].get(p - 1);
            let earliest = given.and_then(|g| g.earliest).unwrap_or((t * 100.0).floor() / 100.0);
            let latest = given.and_then(|g| g.latest).unwrap_or(round2(spec.slack * t).max(earliest));
            stops.push(RouteStop { vertex: path[p], earliest, latest });
        }
        longest = longest.max(q);
        b.vehicle(&format!("v{k}"), stops);
    }

    let mut arcs_done: Vec<(usize, usize)> = Vec::new();
    for path in &paths {
        let inner: Vec<(usize, usize)> = (1..path.len().saturating_sub(2)).map(|p| (path[p], path[p + 1])).collect();
        let want = (spec.dynamic_fraction * inner.len() as f64).floor() as usize;
        let mut ranked: Vec<(usize, f64)> = inner.iter().enumerate().map(|(i, &(a, c))| (i, b.leg(a, c).0)).collect();
        ranked.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        for &(i, len) in ranked.iter().take(want) {
            let (a, c) = inner[i];
            if len <= 0.0 || arcs_done.contains(&(a, c)) {
                continue;
            }
            arcs_done.push((a, c));
            let (pa, pc) = (b.vertex_xy(a), b.vertex_xy(c));
            let n = rng.gen_range(spec.segment_split.0..=spec.segment_split.1);
            let points: Vec<(f64, f64)> = (0..=n)
                .map(|j| {
                    let s = 0.05 + 0.9 * j as f64 / n as f64;
                    (pa.0 + s * (pc.0 - pa.0), pa.1 + s * (pc.1 - pa.1))
                })
                .collect();
            let boosted = rng.gen_bool(spec.boost_probability);
            let rate = spec.dynamic_rate * if boosted { spec.boost_factor } else { 1.0 };
            let cost = uniform(rng, spec.dynamic_cost);
            b.dynamic(&points, rate, cost, spec.segment_cost);
        }
    }

    let mut crossings = Vec::new();
    for k in 0..paths.len() {
        for l in k + 1..paths.len() {
            for p in paths[k].windows(2) {
                for q in paths[l].windows(2) {
                    let c = crossing(b.vertex_xy(p[0]), b.vertex_xy(p[1]), b.vertex_xy(q[0]), b.vertex_xy(q[1]));
                    crossings.extend(c);
                }
            }
        }
    }
    let limit = spec.max_intersections.unwrap_or(2 * spec.vehicles);
    if crossings.len() < limit && spec.max_intersections.is_some() {
        log::warn!("only {} route crossings available for {} stations", crossings.len(), limit);
    }
    crossings.shuffle(rng);
    for (i, &(x, y)) in crossings.iter().take(limit).enumerate() {
        let v = b.vertex(&format!("x{i}"), VertexKind::Station, x, y);
        let cost = uniform(rng, spec.stationary_cost);
        b.stationary(v, spec.stationary_rate, cost);
    }
    for s in &routes.stations {
        let v = b.vertex(&s.name, VertexKind::Station, s.x, s.y);
        let cost = uniform(rng, spec.stationary_cost);
        b.stationary(v, spec.stationary_rate, cost);
    }

    let q_max = round2(spec.battery_factor * longest).max(0.01);
    b = b.energy(EnergyParams {
        q_init: q_max,
        q_min: 0.0,
        q_max,
        consumption_price: spec.consumption_price,
        period: 1.0,
    });
    b = b.price(PriceCurve::constant(spec.recharge_price));
    Ok(b.build()?)
}

fn sub_seed(seed: u64, attempt: u64) -> u64 {
    let mut z = seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Whether building every candidate yields a feasible instance.
pub fn all_stations_feasible(instance: &Instance) -> bool {
    Evaluator::new(instance, SolveOptions::default(), false).is_feasible(&Configuration::full(instance))
}

/// Generates an instance over `routes`, or over synthetic tours when none are
/// given. Attempts whose all-stations configuration is infeasible are
/// regenerated from a derived seed.
pub fn generate(spec: &GenSpec, routes: Option<&RouteSet>) -> Result<Instance, GenError> {
    spec.validate()?;
    for attempt in 0..spec.max_attempts as u64 {
        let seed = if attempt == 0 { spec.seed } else { sub_seed(spec.seed, attempt) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let synthetic;
        let set = match routes {
            Some(r) => r,
            None => {
                synthetic = synthetic_routes(spec, &mut rng);
                &synthetic
            }
        };
        let instance = build(spec, set, &mut rng)?;
        if !spec.check_feasibility || all_stations_feasible(&instance) {
            return Ok(instance);
        }
        log::warn!("attempt {attempt} of '{}' is infeasible with every station built; regenerating", spec.name);
    }
    Err(GenError::Infeasible { attempts: spec.max_attempts })
}
