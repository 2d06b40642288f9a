//! Per-vehicle expanded graphs.
//!
//! The graph of a vehicle holds its route positions plus, for every gap
//! between consecutive positions and every built stationary station, an
//! entry and an exit copy of the station joined by one arc per admissible
//! number of charging periods. Built dynamic stations contribute one
//! contracted arc per gap that drives along the whole segment chain.

mod bounds;

use std::fmt::Write as _;

pub use bounds::{local_energy_bounds, routing_lower_bound, RouteBounds};

use crate::model::{Configuration, Instance, VertexId};
use crate::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Stop(usize),
    ChargerIn { station: usize, gap: usize },
    ChargerOut { station: usize, gap: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphVertex {
    pub node: Node,
    pub network: VertexId,
    pub earliest: f64,
    pub latest: f64,
    /// Lower bound on the energy still to be consumed from this vertex.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Direct,
    ToCharger { station: usize },
    FromCharger { station: usize },
    Charge { station: usize, periods: u32 },
    Dynamic { station: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphArc {
    pub from: usize,
    pub to: usize,
    pub time: f64,
    pub consumption: f64,
    pub recharge: f64,
    /// Time from departure until charging starts.
    pub offset: f64,
    /// Cumulative energy balance at every interior point of a contracted arc.
    pub checkpoints: Vec<f64>,
    pub kind: ArcKind,
    pub gap: usize,
}

#[derive(Debug, Clone)]
pub struct VehicleGraph {
    pub vehicle: usize,
    pub vertices: Vec<GraphVertex>,
    pub arcs: Vec<GraphArc>,
    pub out_arcs: Vec<Vec<usize>>,
    pub in_arcs: Vec<Vec<usize>>,
    /// Number of route positions; vertex `p < positions` is position `p`.
    pub positions: usize,
    pub config: Configuration,
    /// Built without the energy-based pruning; see [`surplus_dynamic_stations`].
    pub conservative: bool,
}

impl VehicleGraph {
    pub fn depot_start(&self) -> usize {
        0
    }

    pub fn depot_end(&self) -> usize {
        self.positions - 1
    }

    pub fn is_stop(&self, v: usize) -> bool {
        v < self.positions
    }

    fn add_vertex(&mut self, vertex: GraphVertex) -> usize {
        self.vertices.push(vertex);
        self.out_arcs.push(Vec::new());
        self.in_arcs.push(Vec::new());
        self.vertices.len() - 1
    }

    fn add_arc(&mut self, arc: GraphArc) {
        let id = self.arcs.len();
        self.out_arcs[arc.from].push(id);
        self.in_arcs[arc.to].push(id);
        self.arcs.push(arc);
    }

    pub fn charging_arcs(&self, station: usize, gap: usize) -> Vec<u32> {
        self.arcs
            .iter()
            .filter_map(|a| match a.kind {
                ArcKind::Charge { station: s, periods } if s == station && a.gap == gap => Some(periods),
                _ => None,
            })
            .collect()
    }

    pub fn dynamic_arcs(&self) -> Vec<&GraphArc> {
        self.arcs.iter().filter(|a| matches!(a.kind, ArcKind::Dynamic { .. })).collect()
    }

    /// Deterministic text dump, one line per vertex and arc.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let num = |x: f64| if x.is_finite() { format!("{:.6}", (x * 1e6).round() / 1e6 + 0.0) } else { "inf".to_string() };
        let _ = writeln!(out, "graph vehicle={} vertices={} arcs={}", self.vehicle, self.vertices.len(), self.arcs.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let node = match v.node {
                Node::Stop(p) => format!("stop pos={p}"),
                Node::ChargerIn { station, gap } => format!("charger-in station={station} gap={gap}"),
                Node::ChargerOut { station, gap } => format!("charger-out station={station} gap={gap}"),
            };
            let _ = writeln!(
                out,
                "v {i} {node} net={} window=[{},{}] bound={}",
                v.network,
                num(v.earliest),
                num(v.latest),
                num(v.bound)
            );
        }
        for (i, a) in self.arcs.iter().enumerate() {
            let kind = match a.kind {
                ArcKind::Direct => "direct".to_string(),
                ArcKind::ToCharger { station } => format!("to-charger station={station}"),
                ArcKind::FromCharger { station } => format!("from-charger station={station}"),
                ArcKind::Charge { station, periods } => format!("charge station={station} periods={periods}"),
                ArcKind::Dynamic { station } => format!("dynamic station={station}"),
            };
            let cps: Vec<String> = a.checkpoints.iter().map(|&c| num(c)).collect();
            let _ = writeln!(
                out,
                "a {i} {}->{} gap={} {kind} t={} q={} r={} offset={} checkpoints=[{}]",
                a.from,
                a.to,
                a.gap,
                num(a.time),
                num(a.consumption),
                num(a.recharge),
                num(a.offset),
                cps.join(",")
            );
        }
        out
    }
}

/// Dynamic stations whose full traversal recharges more than it consumes.
///
/// Charging is all-or-nothing and capped by `q_max`, so on instances with such
/// a station arriving with less energy can be the only way to take a full
/// dynamic charge. There the energy-based arc pruning and the SoC ordering in
/// the dominance rule may cut the optimum, and both are switched off.
pub fn surplus_dynamic_stations(instance: &Instance) -> Vec<usize> {
    let net = &instance.network;
    instance
        .dynamic
        .iter()
        .enumerate()
        .filter(|(_, d)| {
            let (mut r, mut c) = (0.0, 0.0);
            for s in &d.segments {
                if let Some((t, q)) = net.leg(s.from, s.to) {
                    r += d.rate * t;
                    c += q;
                }
            }
            r > c
        })
        .map(|(f, _)| f)
        .collect()
}

/// Outcome of the charging-period computation for one station and gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChargeLimit {
    /// Periods allowed by the time window and battery headroom alone.
    pub raw: u32,
    /// The detour consumes at least what charging could ever return.
    pub pruned: bool,
    /// Periods after pruning and tightening; zero suppresses the copies.
    pub periods: u32,
}

/// Maximum number of charging periods worth offering at stationary station
/// `station` in gap `gap` of `vehicle`.
pub fn max_charge_periods(
    instance: &Instance,
    bounds: &RouteBounds,
    vehicle: usize,
    gap: usize,
    station: usize,
) -> Option<ChargeLimit> {
    let route = &instance.vehicles[vehicle].stops;
    let (from, to) = (&route[gap - 1], &route[gap]);
    let st = &instance.stationary[station];
    let e = &instance.energy;
    let (t_in, q_in) = instance.network.leg(from.vertex, st.vertex)?;
    let (t_out, q_out) = instance.network.leg(st.vertex, to.vertex)?;
    let (_, q_direct) = instance.network.leg(from.vertex, to.vertex)?;
    let time_room = to.latest - from.earliest - t_in - t_out;
    let energy_room = (e.q_max - e.q_min + q_in) / st.rate;
    let raw_f = (time_room.min(energy_room) / e.period + TOL).floor();
    let raw = if raw_f > 0.0 { raw_f.min(u32::MAX as f64) as u32 } else { 0 };
    let per_period = e.period * st.rate;
    let pruned = q_in + q_out - q_direct >= raw as f64 * per_period - TOL;
    if !surplus_dynamic_stations(instance).is_empty() {
        return Some(ChargeLimit { raw, pruned, periods: raw });
    }
    if pruned {
        return Some(ChargeLimit { raw, pruned, periods: 0 });
    }
    let useful = bounds.stop(gap - 1) + q_out - q_direct;
    let cap_f = (useful / per_period - TOL).ceil();
    let cap = if cap_f > 0.0 { cap_f.min(u32::MAX as f64) as u32 } else { 0 };
    Some(ChargeLimit { raw, pruned, periods: raw.min(cap) })
}

/// Attributes of the contracted arc driving from `from` through dynamic
/// station `station` to `to`, given the built segment bits.
pub fn dynamic_arc(
    instance: &Instance,
    from: VertexId,
    to: VertexId,
    station: usize,
    built: &[bool],
) -> Option<(f64, f64, f64, f64, Vec<f64>)> {
    let d = &instance.dynamic[station];
    let (t0, q0) = instance.network.leg(from, d.start())?;
    let (t1, q1) = instance.network.leg(d.end(), to)?;
    let mut time = t0;
    let mut consumption = q0;
    let mut recharge = 0.0;
    let mut offset = None;
    let mut balance = -q0;
    let mut checkpoints = vec![balance];
    for (s, &on) in d.segments.iter().zip(built) {
        let (t, q) = instance.network.leg(s.from, s.to)?;
        if on && offset.is_none() {
            offset = Some(time);
        }
        let r = if on { d.rate * t } else { 0.0 };
        time += t;
        consumption += q;
        recharge += r;
        balance += r - q;
        checkpoints.push(balance);
    }
    Some((time + t1, consumption + q1, recharge, offset.unwrap_or(t0), checkpoints))
}

/// Builds the expanded graph of `vehicle` under `config`.
pub fn build_vehicle_graph(
    instance: &Instance,
    bounds: &RouteBounds,
    vehicle: usize,
    config: &Configuration,
) -> VehicleGraph {
    let route = &instance.vehicles[vehicle].stops;
    let mut g = VehicleGraph {
        vehicle,
        vertices: Vec::new(),
        arcs: Vec::new(),
        out_arcs: Vec::new(),
        in_arcs: Vec::new(),
        positions: route.len(),
        config: config.clone(),
        conservative: !surplus_dynamic_stations(instance).is_empty(),
    };
    for (p, s) in route.iter().enumerate() {
        g.add_vertex(GraphVertex {
            node: Node::Stop(p),
            network: s.vertex,
            earliest: s.earliest,
            latest: s.latest,
            bound: bounds.stop(p),
        });
    }
    for gap in 1..route.len() {
        let (a, b) = (route[gap - 1].vertex, route[gap].vertex);
        let (t, q) = instance.network.leg(a, b).expect("validated route arc");
        g.add_arc(GraphArc {
            from: gap - 1,
            to: gap,
            time: t,
            consumption: q,
            recharge: 0.0,
            offset: 0.0,
            checkpoints: Vec::new(),
            kind: ArcKind::Direct,
            gap,
        });
        for (f, st) in instance.stationary.iter().enumerate() {
            if !config.stationary[f] || st.vertex == a {
                continue;
            }
            let Some(limit) = max_charge_periods(instance, bounds, vehicle, gap, f) else { continue };
            if limit.periods == 0 {
                continue;
            }
            let Some(bound) = bounds.charger(gap, f) else { continue };
            let (t_in, q_in) = instance.network.leg(a, st.vertex).expect("checked by the period limit");
            let (t_out, q_out) = instance.network.leg(st.vertex, b).expect("checked by the period limit");
            let copy = |node| GraphVertex { node, network: st.vertex, earliest: 0.0, latest: f64::INFINITY, bound };
            let vin = g.add_vertex(copy(Node::ChargerIn { station: f, gap }));
            let vout = g.add_vertex(copy(Node::ChargerOut { station: f, gap }));
            let plain = |from, to, time, consumption, kind| GraphArc {
                from,
                to,
                time,
                consumption,
                recharge: 0.0,
                offset: 0.0,
                checkpoints: Vec::new(),
                kind,
                gap,
            };
            g.add_arc(plain(gap - 1, vin, t_in, q_in, ArcKind::ToCharger { station: f }));
            for l in 1..=limit.periods {
                let duration = instance.energy.period * l as f64;
                g.add_arc(GraphArc {
                    recharge: duration * st.rate,
                    ..plain(vin, vout, duration, 0.0, ArcKind::Charge { station: f, periods: l })
                });
            }
            g.add_arc(plain(vout, gap, t_out, q_out, ArcKind::FromCharger { station: f }));
        }
        for f in 0..instance.dynamic.len() {
            if !config.inverters[f] {
                continue;
            }
            let Some((time, consumption, recharge, offset, checkpoints)) =
                dynamic_arc(instance, a, b, f, &config.segments[f])
            else {
                continue;
            };
            if !g.conservative && recharge <= consumption - q + TOL {
                continue;
            }
            g.add_arc(GraphArc {
                from: gap - 1,
                to: gap,
                time,
                consumption,
                recharge,
                offset,
                checkpoints,
                kind: ArcKind::Dynamic { station: f },
                gap,
            });
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::tiny;

    #[test]
    fn triangle_has_three_periods_per_gap_and_one_dynamic_arc() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let bounds = local_energy_bounds(&inst, 0);
        let g = build_vehicle_graph(&inst, &bounds, 0, &Configuration::full(&inst));
        for gap in 1..4 {
            assert_eq!(g.charging_arcs(0, gap), vec![1, 2, 3], "gap {gap}");
        }
        let dynamic = g.dynamic_arcs();
        assert_eq!(dynamic.len(), 1);
        assert_eq!(dynamic[0].gap, 2);
        assert_eq!(g.vertices.len(), 4 + 6);
    }

    #[test]
    fn empty_configuration_leaves_only_direct_arcs() {
        let inst = tiny::tiny_family("three-vehicles").unwrap();
        for k in 0..inst.vehicles.len() {
            let bounds = local_energy_bounds(&inst, k);
            let g = build_vehicle_graph(&inst, &bounds, k, &Configuration::empty(&inst));
            assert_eq!(g.vertices.len(), inst.vehicles[k].stops.len());
            assert!(g.arcs.iter().all(|a| a.kind == ArcKind::Direct));
        }
    }

    #[test]
    fn charge_limit_caps_by_battery_headroom() {
        // headroom 5, leg into the station 1, rate 2 => floor(6 / 2) = 3
        let mut inst = tiny::tiny_family("fig4-triangle").unwrap();
        inst.energy.q_min = 0.0;
        inst.energy.q_max = 5.0;
        inst.energy.q_init = 5.0;
        inst.stationary[0].rate = 2.0;
        let route = inst.vehicles[0].stops.clone();
        let c = inst.stationary[0].vertex;
        let mut arcs: Vec<_> = inst.network.arcs().to_vec();
        for a in arcs.iter_mut() {
            if a.from == route[0].vertex && a.to == c {
                a.consumption = 1.0;
            }
        }
        inst.network = crate::model::Network::new(inst.network.vertices().to_vec(), arcs).unwrap();
        inst.vehicles[0].stops[1].latest = 100.0;
        let bounds = local_energy_bounds(&inst, 0);
        let limit = max_charge_periods(&inst, &bounds, 0, 1, 0).unwrap();
        assert_eq!(limit.raw, 3);
    }

    #[test]
    fn station_at_departing_stop_is_skipped() {
        let inst = tiny::tiny_family("stop-station").unwrap();
        let bounds = local_energy_bounds(&inst, 0);
        let g = build_vehicle_graph(&inst, &bounds, 0, &Configuration::full(&inst));
        // station 0 sits on route position 2: usable in gap 2 only, never in gap 3
        assert!(!g.charging_arcs(0, 2).is_empty());
        assert!(g.charging_arcs(0, 3).is_empty());
    }

    #[test]
    fn dynamic_offset_skips_unbuilt_leading_segments() {
        let inst = tiny::tiny_family("prefix-tightening").unwrap();
        let route = &inst.vehicles[0].stops;
        let (a, b) = (route[1].vertex, route[2].vertex);
        let (t, _, r, offset, cps) = dynamic_arc(&inst, a, b, 0, &[false, true, true]).unwrap();
        assert!((t - 6.0).abs() < 1e-12);
        assert!((offset - 2.0).abs() < 1e-12);
        assert!((r - 1.5 * 3.0).abs() < 1e-12);
        assert_eq!(cps.len(), 4);
    }

    #[test]
    fn tight_windows_suppress_station_copies() {
        let inst = tiny::tiny_family("tight-timetable").unwrap();
        let bounds = local_energy_bounds(&inst, 0);
        let g = build_vehicle_graph(&inst, &bounds, 0, &Configuration::full(&inst));
        assert!(g.vertices.iter().all(|v| matches!(v.node, Node::Stop(_))));
        assert_eq!(g.dynamic_arcs().len(), 1);
    }
}
