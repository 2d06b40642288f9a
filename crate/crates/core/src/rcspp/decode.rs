use crate::graph::{ArcKind, VehicleGraph};
use crate::model::{price_plan, Instance, ModelError, RouteStep, StepCharge, VehiclePlan};

use super::GraphPath;

/// Replays `arcs` forward from the depot departure and returns the visited
/// graph vertices with their departure times and SoC values.
pub fn path_profile(instance: &Instance, graph: &VehicleGraph, arcs: &[usize]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let start = graph.depot_start();
    let mut vertices = vec![start];
    let mut times = vec![graph.vertices[start].earliest];
    let mut socs = vec![instance.energy.q_init];
    for &a in arcs {
        let arc = &graph.arcs[a];
        let t = *times.last().unwrap();
        let q = *socs.last().unwrap();
        vertices.push(arc.to);
        times.push(f64::max(t + arc.time, graph.vertices[arc.to].earliest));
        socs.push(q - arc.consumption + arc.recharge);
    }
    (vertices, times, socs)
}

fn step(vertex: usize, departure: f64, soc: f64, service: bool, recharge: f64, charge: StepCharge) -> RouteStep {
    RouteStep { vertex, departure, soc, service, recharge, charge }
}

/// Expands a graph path into network steps and prices it.
pub fn decode_path(instance: &Instance, graph: &VehicleGraph, path: &GraphPath) -> Result<VehiclePlan, ModelError> {
    let net = &instance.network;
    let start = graph.depot_start();
    let mut steps = vec![step(graph.vertices[start].network, path.times[0], path.socs[0], true, 0.0, StepCharge::None)];
    let mut pending: Option<(usize, u32, f64, f64)> = None;
    for (i, &a) in path.arcs.iter().enumerate() {
        let arc = &graph.arcs[a];
        let (t0, q0) = (path.times[i], path.socs[i]);
        let (t1, q1) = (path.times[i + 1], path.socs[i + 1]);
        let head = graph.vertices[arc.to].network;
        match arc.kind {
            ArcKind::Direct => steps.push(step(head, t1, q1, true, 0.0, StepCharge::None)),
            ArcKind::ToCharger { .. } => {}
            ArcKind::Charge { station, periods } => pending = Some((station, periods, t0, arc.recharge)),
            ArcKind::FromCharger { station } => {
                let (s, periods, start, recharge) =
                    pending.take().ok_or_else(|| ModelError::InvalidSolution("charger left without charging".into()))?;
                debug_assert_eq!(s, station);
                let charge = StepCharge::Stationary { station, periods, start };
                let at = instance.stationary[station].vertex;
                if at == head {
                    steps.push(step(head, t1, q1, true, recharge, charge));
                } else {
                    steps.push(step(at, t0, q0, false, recharge, charge));
                    steps.push(step(head, t1, q1, true, 0.0, StepCharge::None));
                }
            }
            ArcKind::Dynamic { station } => {
                let d = &instance.dynamic[station];
                let tail = graph.vertices[arc.from].network;
                let leg = |x, y| net.leg(x, y).ok_or_else(|| ModelError::InvalidSolution(format!("no arc {x} -> {y}")));
                let (t, q) = leg(tail, d.start())?;
                let (mut time, mut soc) = (t0 + t, q0 - q);
                steps.push(step(d.start(), time, soc, false, 0.0, StepCharge::None));
                for (theta, seg) in d.segments.iter().enumerate() {
                    let (t, q) = leg(seg.from, seg.to)?;
                    time += t;
                    let on = graph.config.segments[station][theta];
                    let r = if on { d.rate * t } else { 0.0 };
                    soc += r - q;
                    let charge = if on { StepCharge::Segment { station, segment: theta } } else { StepCharge::None };
                    steps.push(step(seg.to, time, soc, false, r, charge));
                }
                steps.push(step(head, t1, q1, true, 0.0, StepCharge::None));
            }
        }
    }
    price_plan(instance, graph.vehicle, steps)
}
