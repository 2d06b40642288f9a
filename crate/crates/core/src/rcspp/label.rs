use crate::graph::{GraphArc, GraphVertex, RouteBounds};
use crate::model::Instance;
use crate::TOL;

/// Resource state of a partial path. Backward labels use `sigma`; forward
/// labels leave it at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub cost: f64,
    pub soc: f64,
    pub time: f64,
    pub sigma: f64,
}

impl Label {
    pub fn forward(cost: f64, soc: f64, time: f64) -> Self {
        Label { cost, soc, time, sigma: f64::INFINITY }
    }

    pub fn backward(cost: f64, soc: f64, time: f64, sigma: f64) -> Self {
        Label { cost, soc, time, sigma }
    }
}

fn price(instance: &Instance, t: f64) -> f64 {
    instance.recharge_price.price_at(t.max(0.0)).expect("non-negative time")
}

fn checkpoints_ok(instance: &Instance, soc: f64, arc: &GraphArc) -> bool {
    let e = &instance.energy;
    arc.checkpoints.iter().all(|&c| soc + c >= e.q_min - TOL && soc + c <= e.q_max + TOL)
}

/// Extends a forward label along `arc` into `head`.
pub fn propagate_forward(instance: &Instance, label: &Label, arc: &GraphArc, head: &GraphVertex) -> Option<Label> {
    let e = &instance.energy;
    let mut cost = label.cost + e.consumption_price * arc.consumption;
    if arc.recharge > 0.0 {
        cost += price(instance, label.time + arc.offset) * arc.recharge;
    }
    let soc = label.soc - arc.consumption + arc.recharge;
    let time = f64::max(label.time + arc.time, head.earliest);
    let valid = soc >= e.q_min - TOL && soc <= e.q_max + TOL && time <= head.latest + TOL && checkpoints_ok(instance, label.soc, arc);
    valid.then_some(Label::forward(cost, soc, time))
}

/// Extends a backward label along `arc` into its tail `tail`.
pub fn propagate_backward(instance: &Instance, label: &Label, arc: &GraphArc, tail: &GraphVertex) -> Option<Label> {
    let e = &instance.energy;
    let time = f64::min(label.time - arc.time, tail.latest);
    let mut cost = label.cost + e.consumption_price * arc.consumption;
    if arc.recharge > 0.0 {
        cost += price(instance, time + arc.offset) * arc.recharge;
    }
    let soc = label.soc + arc.consumption - arc.recharge;
    if !(soc >= e.q_min - TOL && soc <= e.q_max + TOL && time >= tail.earliest - TOL && checkpoints_ok(instance, soc, arc)) {
        return None;
    }
    let mut sigma = f64::min(label.sigma, e.q_max - soc);
    for &c in &arc.checkpoints {
        sigma = sigma.min(e.q_max - (soc + c));
    }
    Some(Label::backward(cost, soc, time, sigma))
}

pub fn dominates_forward(a: &Label, b: &Label) -> bool {
    a.cost <= b.cost && a.soc >= b.soc && a.time <= b.time
}

pub fn dominates_backward(a: &Label, b: &Label) -> bool {
    a.cost <= b.cost && a.soc <= b.soc && a.time >= b.time
}

/// SoC offset applied to the backward half when the two labels can be joined.
pub fn try_join(fw: &Label, bw: &Label) -> Option<f64> {
    let shift = fw.soc - bw.soc;
    (shift >= -TOL && shift <= bw.sigma + TOL && fw.time <= bw.time + TOL).then_some(shift.max(0.0))
}

/// Cost still to be paid from a forward label at a vertex with bound `bound`.
pub fn heuristic_forward(instance: &Instance, label: &Label, bound: f64) -> f64 {
    let e = &instance.energy;
    let deficit = f64::max(e.q_min + bound - label.soc, 0.0);
    let recharge = if deficit > 0.0 { deficit * instance.recharge_price.min_from(label.time.max(0.0)) } else { 0.0 };
    recharge + bound * e.consumption_price
}

/// Cost still to be paid ahead of a backward label at a vertex with bound
/// `bound`, where `start_bound` is the bound at the depot departure.
pub fn heuristic_backward(instance: &Instance, label: &Label, bound: f64, start_bound: f64) -> f64 {
    let e = &instance.energy;
    let ahead = start_bound - bound;
    let deficit = f64::max(label.soc + ahead - e.q_init, 0.0);
    let recharge = if deficit > 0.0 { deficit * instance.recharge_price.min_until(label.time) } else { 0.0 };
    recharge + ahead * e.consumption_price
}

/// Distance of a label from the charge it needs to finish its half of the
/// route, used to order labels once the search turns heuristic.
pub fn soc_deviation(instance: &Instance, label: &Label, forward: bool, bound: f64, bounds: &RouteBounds) -> f64 {
    let e = &instance.energy;
    if forward {
        (bound + e.q_min - label.soc).abs()
    } else {
        (e.q_init - bounds.stop(0) + bound - label.soc).abs()
    }
}
