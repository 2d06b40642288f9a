use std::collections::HashMap;
use std::fmt::Write;

use super::model::{MipModel, NodeKind};
use super::{oracle_vehicle, MipError};
use crate::model::{price_plan, Configuration, Instance, ModelError, RouteStep, Solution, StationRef, StepCharge};

fn invalid(msg: String) -> MipError {
    MipError::Model(ModelError::InvalidSolution(msg))
}

/// Model values reproducing `solution`. Charging nodes a vehicle does not
/// visit sit at their lower time bound with minimum charge.
pub fn encode_solution(instance: &Instance, model: &MipModel, solution: &Solution) -> Result<Vec<f64>, MipError> {
    let e = &instance.energy;
    let mut vals: Vec<f64> = model.vars.iter().map(|v| if v.lower.is_finite() { v.lower.max(0.0) } else { 0.0 }).collect();
    let config = &solution.configuration;
    for (f, ids) in model.stationary.iter().enumerate() {
        for &y in ids {
            vals[y] = config.stationary[f] as u8 as f64;
        }
    }
    for (f, dv) in model.dynamic.iter().enumerate() {
        for (c, &w) in dv.inverter.iter().enumerate() {
            vals[w] = config.inverters[f] as u8 as f64;
            for (t, &z) in dv.segments[c].iter().enumerate() {
                vals[z] = config.segments[f][t] as u8 as f64;
            }
        }
    }
    let copies = model.options.copies + 1;
    for plan in &solution.plans {
        let k = plan.vehicle;
        let vn = model.vehicles.get(k).ok_or_else(|| invalid(format!("unknown vehicle {k}")))?;
        let route = &instance.vehicles[k].stops;
        for n in &vn.nodes {
            vals[n.rho] = e.q_min;
        }
        let find = |kind: NodeKind| vn.nodes.iter().position(|n| n.kind == kind).expect("node exists");
        let mut used: HashMap<StationRef, usize> = HashMap::new();
        let mut copy_of = |s: StationRef| -> Result<usize, MipError> {
            let c = used.entry(s).or_insert(0);
            *c += 1;
            if *c > copies {
                return Err(MipError::LimitsExceeded(format!("vehicle {k} uses {s:?} more than {copies} times")));
            }
            Ok(*c - 1)
        };
        let steps = &plan.steps;
        let mut path = vec![0usize];
        vals[vn.nodes[0].tau] = steps[0].departure;
        vals[vn.nodes[0].rho] = steps[0].soc;
        let mut p = 0;
        let mut i = 1;
        while i < steps.len() {
            let s = steps[i];
            let service = |p: &mut usize, path: &mut Vec<usize>, vals: &mut Vec<f64>| -> Result<(), MipError> {
                *p += 1;
                if *p >= route.len() || route[*p].vertex != s.vertex {
                    return Err(invalid(format!("step {i} does not serve route position {p}")));
                }
                path.push(*p);
                vals[vn.nodes[*p].tau] = s.departure;
                vals[vn.nodes[*p].rho] = s.soc;
                Ok(())
            };
            match s.charge {
                StepCharge::Stationary { station, periods, start } => {
                    let c = copy_of(StationRef::Stationary(station))?;
                    let n = &vn.nodes[find(NodeKind::Stationary { station, copy: c })];
                    path.push(find(n.kind));
                    vals[n.tau] = start + e.period * periods as f64;
                    vals[n.rho] = s.soc;
                    vals[n.dtau.unwrap()] = periods as f64;
                    vals[n.drho.unwrap()] = s.recharge;
                    if s.service {
                        service(&mut p, &mut path, &mut vals)?;
                    }
                    i += 1;
                }
                StepCharge::Segment { .. } => return Err(invalid(format!("step {i} enters a segment mid-way"))),
                StepCharge::None if s.service => {
                    service(&mut p, &mut path, &mut vals)?;
                    i += 1;
                }
                StepCharge::None => {
                    let f = instance
                        .dynamic
                        .iter()
                        .position(|d| {
                            d.start() == s.vertex
                                && d.segments.iter().enumerate().all(|(t, g)| steps.get(i + 1 + t).is_some_and(|x| x.vertex == g.to))
                        })
                        .ok_or_else(|| invalid(format!("step {i} at vertex {} is neither a stop nor a station", s.vertex)))?;
                    let c = copy_of(StationRef::Dynamic(f))?;
                    for t in 0..=instance.dynamic[f].segments.len() {
                        let n = find(NodeKind::SegmentPoint { station: f, copy: c, index: t });
                        path.push(n);
                        vals[vn.nodes[n].tau] = steps[i + t].departure;
                        vals[vn.nodes[n].rho] = steps[i + t].soc;
                    }
                    for (t, _) in instance.dynamic[f].segments.iter().enumerate() {
                        let from = find(NodeKind::SegmentPoint { station: f, copy: c, index: t });
                        let a = vn.arcs.iter().find(|a| a.from == from).expect("segment arc");
                        vals[a.segment.as_ref().unwrap().drho] = steps[i + 1 + t].recharge;
                    }
                    i += instance.dynamic[f].segments.len() + 1;
                }
            }
        }
        if p + 1 != route.len() {
            return Err(invalid(format!("plan of vehicle {k} ends before the route does")));
        }
        for w in path.windows(2) {
            let a = vn
                .arcs
                .iter()
                .find(|a| a.from == w[0] && a.to == w[1])
                .ok_or_else(|| invalid(format!("no model arc {} -> {}", vn.nodes[w[0]].label, vn.nodes[w[1]].label)))?;
            vals[a.x] = 1.0;
        }
        let select = |vals: &mut Vec<f64>, split: &[(usize, usize)], start: f64, amount: f64| {
            if split.is_empty() {
                return;
            }
            let b = model.tariff.partition_point(|&(t, _)| t <= start).max(1) - 1;
            for (t, &(u, r)) in split.iter().enumerate() {
                vals[u] = (t == b) as u8 as f64;
                vals[r] = if t == b { amount } else { 0.0 };
            }
        };
        for n in &vn.nodes {
            if let (Some(dt), Some(dr)) = (n.dtau, n.drho) {
                let (start, amount) = (vals[n.tau] - e.period * vals[dt], vals[dr]);
                select(&mut vals, &n.tariff, start, amount);
            }
        }
        for a in &vn.arcs {
            if let Some(seg) = &a.segment {
                let (start, amount) = (vals[vn.nodes[a.from].tau], vals[seg.drho]);
                select(&mut vals, &seg.tariff, start, amount);
            }
        }
    }
    Ok(vals)
}

/// Warm start that serves every route directly without charging, when that
/// is feasible for every vehicle.
pub fn shortest_route_start(instance: &Instance, model: &MipModel) -> Option<Vec<f64>> {
    let config = Configuration::empty(instance);
    let mut plans = Vec::new();
    for k in 0..instance.vehicles.len() {
        let (_, steps) = oracle_vehicle(instance, k, &config)?;
        plans.push(price_plan(instance, k, steps).ok()?);
    }
    encode_solution(instance, model, &Solution::new(instance, config, plans)).ok()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// CPLEX MST warm-start file listing the non-zero values.
pub fn write_mst(model: &MipModel, values: &[f64]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n");
    out.push_str("<CPLEXSolutions version=\"1.2\">\n <CPLEXSolution version=\"1.2\">\n");
    let _ = writeln!(out, "  <header problemName=\"{}\" solutionName=\"warmstart\" solutionIndex=\"0\"/>", xml_escape(&model.name));
    out.push_str("  <variables>\n");
    for (i, (v, &x)) in model.vars.iter().zip(values).enumerate() {
        if x != 0.0 {
            let _ = writeln!(out, "   <variable name=\"{}\" index=\"{i}\" value=\"{x}\"/>", v.name);
        }
    }
    out.push_str("  </variables>\n </CPLEXSolution>\n</CPLEXSolutions>\n");
    out
}

/// `name=value` lines for the non-zero values.
pub fn write_values(model: &MipModel, values: &[f64]) -> String {
    let mut out = String::new();
    for (v, &x) in model.vars.iter().zip(values) {
        if x != 0.0 {
            let _ = writeln!(out, "{}={x}", v.name);
        }
    }
    out
}

/// Reads `name=value` (or whitespace separated) lines. Blank lines and lines
/// starting with `#` are skipped; variables not listed are zero.
pub fn parse_values(model: &MipModel, text: &str) -> Result<Vec<f64>, MipError> {
    let mut vals = vec![0.0; model.vars.len()];
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .or_else(|| line.split_once(char::is_whitespace))
            .ok_or_else(|| MipError::Parse { line: n + 1, detail: format!("expected name=value, found '{line}'") })?;
        let (name, value) = (name.trim(), value.trim());
        let id = model.var(name).ok_or_else(|| MipError::UnknownVariable(name.to_string()))?;
        vals[id] = value
            .parse()
            .map_err(|_| MipError::Parse { line: n + 1, detail: format!("'{value}' is not a number") })?;
    }
    Ok(vals)
}

fn step(vertex: usize, departure: f64, soc: f64, service: bool, recharge: f64, charge: StepCharge) -> RouteStep {
    RouteStep { vertex, departure, soc, service, recharge, charge }
}

/// Rebuilds a solution from model values: the build variables of the
/// originals give the configuration, each vehicle follows its selected arcs,
/// and times are replayed as early as possible.
pub fn decode_solution(instance: &Instance, model: &MipModel, values: &[f64]) -> Result<Solution, MipError> {
    if values.len() != model.vars.len() {
        return Err(invalid(format!("{} values for {} variables", values.len(), model.vars.len())));
    }
    let on = |v: usize| values[v] > 0.5;
    let e = &instance.energy;
    let mut config = Configuration::empty(instance);
    for (f, ids) in model.stationary.iter().enumerate() {
        config.stationary[f] = on(ids[0]);
    }
    for (f, dv) in model.dynamic.iter().enumerate() {
        config.inverters[f] = on(dv.inverter[0]);
        for (t, &z) in dv.segments[0].iter().enumerate() {
            config.segments[f][t] = on(z);
        }
    }
    let mut plans = Vec::new();
    for (k, vn) in model.vehicles.iter().enumerate() {
        let route = &instance.vehicles[k].stops;
        let last = route.len() - 1;
        let (mut t, mut q) = (route[0].earliest, e.q_init);
        let mut steps = vec![step(route[0].vertex, t, q, true, 0.0, StepCharge::None)];
        let mut pending: Option<(f64, StepCharge)> = None;
        let mut node = 0;
        for _ in 0..=vn.arcs.len() {
            if node == last {
                break;
            }
            let a = vn
                .out_arcs(node)
                .find(|a| on(a.x))
                .ok_or_else(|| invalid(format!("vehicle {k} has no selected arc out of {}", vn.nodes[node].label)))?;
            let head = &vn.nodes[a.to];
            let arrival = t + a.time;
            q -= a.consumption;
            match head.kind {
                NodeKind::Position(p) => {
                    t = f64::max(arrival, route[p].earliest);
                    let (recharge, charge) = pending.take().unwrap_or((0.0, StepCharge::None));
                    steps.push(step(head.vertex, t, q, true, recharge, charge));
                }
                NodeKind::Stationary { station, .. } => {
                    let periods = values[head.dtau.unwrap()].round().max(0.0) as u32;
                    let duration = e.period * periods as f64;
                    let recharge = duration * instance.stationary[station].rate;
                    t = arrival + duration;
                    q += recharge;
                    let charge = if periods > 0 {
                        StepCharge::Stationary { station, periods, start: arrival }
                    } else {
                        StepCharge::None
                    };
                    let next = vn.out_arcs(a.to).find(|b| on(b.x)).map(|b| vn.nodes[b.to].vertex);
                    if next == Some(head.vertex) {
                        pending = Some((recharge, charge));
                    } else {
                        steps.push(step(head.vertex, t, q, false, recharge, charge));
                    }
                }
                NodeKind::SegmentPoint { station, index, .. } => {
                    t = arrival;
                    let (recharge, charge) = match a.segment.as_ref() {
                        Some(seg) if config.segments[station][seg.index] && config.inverters[station] => {
                            (instance.dynamic[station].rate * a.time, StepCharge::Segment { station, segment: index - 1 })
                        }
                        _ => (0.0, StepCharge::None),
                    };
                    q += recharge;
                    steps.push(step(head.vertex, t, q, false, recharge, charge));
                }
            }
            node = a.to;
        }
        if node != last {
            return Err(invalid(format!("vehicle {k} does not reach the depot")));
        }
        plans.push(price_plan(instance, k, steps)?);
    }
    Ok(Solution::new(instance, config, plans))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::tiny::{tiny_family, TINY_NAMES};
    use crate::mip::{build_mip, oracle_solve, MipOptions, OracleLimits};
    use crate::model::validate_solution;

    fn gaps(instance: &Instance) -> usize {
        instance.vehicles.iter().map(|v| v.stops.len() - 1).max().unwrap()
    }

    #[test]
    fn oracle_optimum_satisfies_every_row() {
        for name in TINY_NAMES {
            let inst = tiny_family(name).unwrap();
            let Some(best) = oracle_solve(&inst, &OracleLimits::default()).unwrap().solution else { continue };
            let model = build_mip(&inst, MipOptions { copies: gaps(&inst) - 1, ..MipOptions::default() }).unwrap();
            let vals = encode_solution(&inst, &model, &best).unwrap();
            let bad = model.violations(&vals, 1e-7);
            assert!(bad.is_empty(), "{name}: {bad:?}");
            let obj = model.objective_value(&vals);
            assert!((obj - best.total_cost).abs() < 1e-6, "{name}: {obj} vs {}", best.total_cost);
            let back = decode_solution(&inst, &model, &vals).unwrap();
            validate_solution(&inst, &back).unwrap();
            assert!((back.total_cost - best.total_cost).abs() < 1e-9, "{name}");
        }
    }

    #[test]
    fn values_round_trip_through_text() {
        let inst = tiny_family("fig4-triangle").unwrap();
        let model = build_mip(&inst, MipOptions::default()).unwrap();
        let best = oracle_solve(&inst, &OracleLimits::default()).unwrap().solution.unwrap();
        let vals = encode_solution(&inst, &model, &best).unwrap();
        assert_eq!(parse_values(&model, &write_values(&model, &vals)).unwrap(), vals);
        let mst = write_mst(&model, &vals);
        assert_eq!(mst.matches("<variable ").count(), vals.iter().filter(|&&v| v != 0.0).count());
        assert!(matches!(parse_values(&model, "nope=1"), Err(MipError::UnknownVariable(_))));
        assert!(matches!(parse_values(&model, "x_0_p0_p1=abc"), Err(MipError::Parse { line: 1, .. })));
    }

    #[test]
    fn shortest_route_start_needs_no_charging() {
        let inst = tiny_family("no-charge-needed").unwrap();
        let model = build_mip(&inst, MipOptions::default()).unwrap();
        let vals = shortest_route_start(&inst, &model).unwrap();
        assert!(model.violations(&vals, 1e-7).is_empty());
        let fig4 = tiny_family("fig4-triangle").unwrap();
        assert!(shortest_route_start(&fig4, &build_mip(&fig4, MipOptions::default()).unwrap()).is_none());
    }
}
