//! Exhaustive reference solver for tiny instances.
//!
//! Works on the instance directly, without the expanded vehicle graphs: every
//! gap of a route is crossed directly, through a built stationary station with
//! any feasible number of charging periods, or along a built dynamic station.
//! States are merged only when that is provably lossless.

use std::collections::HashMap;

use rayon::prelude::*;

use super::MipError;
use crate::model::{Configuration, Instance, RouteStep, Solution, StepCharge};
use crate::model::price_plan;
use crate::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_stations: usize,
    pub max_vehicles: usize,
    /// Stops between the two depot visits.
    pub max_stops: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_stations: 12, max_vehicles: 3, max_stops: 6 }
    }
}

impl OracleLimits {
    pub fn check(&self, instance: &Instance) -> Result<(), MipError> {
        let stations = instance.station_count();
        let vehicles = instance.vehicles.len();
        let stops = instance.vehicles.iter().map(|v| v.stops.len().saturating_sub(2)).max().unwrap_or(0);
        if stations > self.max_stations || vehicles > self.max_vehicles || stops > self.max_stops {
            return Err(MipError::LimitsExceeded(format!(
                "{stations} stations, {vehicles} vehicles, {stops} stops per vehicle exceed {} / {} / {}",
                self.max_stations, self.max_vehicles, self.max_stops
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct State {
    cost: f64,
    soc: f64,
    time: f64,
    steps: Vec<RouteStep>,
}

fn step(vertex: usize, departure: f64, soc: f64, service: bool, recharge: f64, charge: StepCharge) -> RouteStep {
    RouteStep { vertex, departure, soc, service, recharge, charge }
}

/// Keeps, per exact SoC value, the states not beaten in both cost and time.
/// Time only matters through the tariff, so with a variable tariff states are
/// merged on exact time as well.
fn merge(states: Vec<State>, constant_price: bool) -> Vec<State> {
    let mut groups: HashMap<(u64, u64), Vec<State>> = HashMap::new();
    for s in states {
        let time_key = if constant_price { 0 } else { s.time.to_bits() };
        groups.entry((s.soc.to_bits(), time_key)).or_default().push(s);
    }
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort();
    let mut out = Vec::new();
    for key in keys {
        let mut group = groups.remove(&key).unwrap();
        group.sort_by(|a, b| a.cost.total_cmp(&b.cost).then(a.time.total_cmp(&b.time)));
        let mut best_time = f64::INFINITY;
        for s in group {
            if s.time < best_time {
                best_time = s.time;
                out.push(s);
            }
        }
    }
    out
}

/// Cheapest feasible plan of one vehicle under `config`, as priced steps.
pub fn oracle_vehicle(instance: &Instance, vehicle: usize, config: &Configuration) -> Option<(f64, Vec<RouteStep>)> {
    let net = &instance.network;
    let e = &instance.energy;
    let route = &instance.vehicles[vehicle].stops;
    let p_c = e.consumption_price;
    let price = |t: f64| instance.recharge_price.price_at(t).expect("non-negative time");
    let soc_ok = |q: f64| q >= e.q_min - TOL && q <= e.q_max + TOL;
    let constant = instance.recharge_price.is_constant();

    let d0 = &route[0];
    let mut states = vec![State {
        cost: 0.0,
        soc: e.q_init,
        time: d0.earliest,
        steps: vec![step(d0.vertex, d0.earliest, e.q_init, true, 0.0, StepCharge::None)],
    }];
    for gap in 1..route.len() {
        let (from, to) = (&route[gap - 1], &route[gap]);
        let mut next = Vec::new();
        let arrive = |s: &State, t: f64, q: f64, extra_cost: f64, mut steps: Vec<RouteStep>, merged: Option<(f64, StepCharge)>| {
            let time = f64::max(t, to.earliest);
            if time > to.latest + TOL || !soc_ok(q) {
                return None;
            }
            let (recharge, charge) = merged.unwrap_or((0.0, StepCharge::None));
            steps.push(step(to.vertex, time, q, true, recharge, charge));
            Some(State { cost: s.cost + extra_cost, soc: q, time, steps })
        };
        for s in &states {
            if let Some((t, q)) = net.leg(from.vertex, to.vertex) {
                if let Some(n) = arrive(s, s.time + t, s.soc - q, p_c * q, s.steps.clone(), None) {
                    next.push(n);
                }
            }
            for (f, st) in instance.stationary.iter().enumerate() {
                if !config.stationary[f] || st.vertex == from.vertex {
                    continue;
                }
                let (Some((t_in, q_in)), Some((t_out, q_out))) = (net.leg(from.vertex, st.vertex), net.leg(st.vertex, to.vertex))
                else {
                    continue;
                };
                let arrival = s.time + t_in;
                let soc_in = s.soc - q_in;
                if !soc_ok(soc_in) {
                    continue;
                }
                for periods in 1u32.. {
                    let duration = e.period * periods as f64;
                    let recharge = duration * st.rate;
                    let charged = soc_in + recharge;
                    if charged > e.q_max + TOL || arrival + duration + t_out > to.latest + TOL {
                        break;
                    }
                    let cost = p_c * (q_in + q_out) + price(arrival) * recharge;
                    let charge = StepCharge::Stationary { station: f, periods, start: arrival };
                    let n = if st.vertex == to.vertex {
                        arrive(s, arrival + duration + t_out, charged - q_out, cost, s.steps.clone(), Some((recharge, charge)))
                    } else {
                        let mut steps = s.steps.clone();
                        steps.push(step(st.vertex, arrival + duration, charged, false, recharge, charge));
                        arrive(s, arrival + duration + t_out, charged - q_out, cost, steps, None)
                    };
                    next.extend(n);
                }
            }
            for (f, d) in instance.dynamic.iter().enumerate() {
                if !config.inverters[f] {
                    continue;
                }
                let (Some((t0, q0)), Some((t1, q1))) = (net.leg(from.vertex, d.start()), net.leg(d.end(), to.vertex)) else {
                    continue;
                };
                let mut time = s.time + t0;
                let mut soc = s.soc - q0;
                let mut cost = p_c * q0;
                let mut steps = s.steps.clone();
                steps.push(step(d.start(), time, soc, false, 0.0, StepCharge::None));
                let mut ok = soc_ok(soc);
                let mut charge_start = None;
                let mut recharged = 0.0;
                for (theta, seg) in d.segments.iter().enumerate() {
                    let Some((t, q)) = net.leg(seg.from, seg.to) else {
                        ok = false;
                        break;
                    };
                    let on = config.segments[f][theta];
                    let r = if on { d.rate * t } else { 0.0 };
                    if on && charge_start.is_none() {
                        charge_start = Some(time);
                    }
                    time += t;
                    soc += r - q;
                    cost += p_c * q;
                    recharged += r;
                    let charge = if on { StepCharge::Segment { station: f, segment: theta } } else { StepCharge::None };
                    steps.push(step(seg.to, time, soc, false, r, charge));
                    ok &= soc_ok(soc);
                }
                if !ok {
                    continue;
                }
                if let Some(t) = charge_start {
                    cost += price(t) * recharged;
                }
                next.extend(arrive(s, time + t1, soc - q1, cost + p_c * q1, steps, None));
            }
        }
        states = merge(next, constant);
        if states.is_empty() {
            return None;
        }
    }
    states
        .into_iter()
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .map(|s| (s.cost, s.steps))
}

/// Every configuration the oracle considers: any stationary subset combined
/// with, per dynamic station, either nothing or a built prefix of segments.
pub fn prefix_configurations(instance: &Instance) -> Vec<Configuration> {
    let mut configs = Vec::new();
    let s = instance.stationary.len();
    let choices: Vec<usize> = instance.dynamic.iter().map(|d| d.segments.len() + 1).collect();
    let dyn_total: usize = choices.iter().product();
    for mask in 0..(1usize << s) {
        for mut code in 0..dyn_total {
            let mut c = Configuration::empty(instance);
            for f in 0..s {
                c.stationary[f] = mask >> f & 1 == 1;
            }
            for (f, &n) in choices.iter().enumerate() {
                c.set_prefix(f, code % n);
                code /= n;
            }
            configs.push(c);
        }
    }
    configs
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub solution: Option<Solution>,
    pub configurations: usize,
}

/// Globally cheapest solution over all prefix configurations.
pub fn oracle_solve(instance: &Instance, limits: &OracleLimits) -> Result<OracleResult, MipError> {
    limits.check(instance)?;
    let configs = prefix_configurations(instance);
    let best = configs
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let mut total = c.infrastructure_cost(instance);
            let mut plans = Vec::new();
            for k in 0..instance.vehicles.len() {
                let (cost, steps) = oracle_vehicle(instance, k, c)?;
                total += cost;
                plans.push(steps);
            }
            Some((total, i, plans))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let solution = match best {
        None => None,
        Some((_, i, plans)) => {
            let plans = plans
                .into_iter()
                .enumerate()
                .map(|(k, steps)| price_plan(instance, k, steps))
                .collect::<Result<Vec<_>, _>>()?;
            Some(Solution::new(instance, configs[i].clone(), plans))
        }
    };
    Ok(OracleResult { solution, configurations: configs.len() })
}
