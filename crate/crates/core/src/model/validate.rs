use std::fmt;

use serde::{Deserialize, Serialize};

use super::{charge_events, operational_cost, Configuration, Instance, Solution, StepCharge, VehiclePlan};
use crate::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Structure,
    MissingArc,
    StopOrder,
    TimeWindow,
    TimePropagation,
    SocLower,
    SocUpper,
    SocPropagation,
    UnbuiltStation,
    ChargeAmount,
    ChargeTiming,
    ChargePrice,
    Configuration,
    Cost,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Structure => "structure",
            Self::MissingArc => "missing-arc",
            Self::StopOrder => "stop-order",
            Self::TimeWindow => "time-window",
            Self::TimePropagation => "time-propagation",
            Self::SocLower => "soc-lower",
            Self::SocUpper => "soc-upper",
            Self::SocPropagation => "soc-propagation",
            Self::UnbuiltStation => "unbuilt-station",
            Self::ChargeAmount => "charge-amount",
            Self::ChargeTiming => "charge-timing",
            Self::ChargePrice => "charge-price",
            Self::Configuration => "configuration",
            Self::Cost => "cost",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub vehicle: Option<usize>,
    pub step: Option<usize>,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.as_str())?;
        if let Some(k) = self.vehicle {
            write!(f, " vehicle={k}")?;
        }
        if let Some(s) = self.step {
            write!(f, " step={s}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * f64::max(1.0, a.abs().max(b.abs()))
}

/// Checks every constraint of the model on a complete solution.
pub fn validate_solution(instance: &Instance, solution: &Solution) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let config = &solution.configuration;
    let shape_ok = config.stationary.len() == instance.stationary.len()
        && config.inverters.len() == instance.dynamic.len()
        && config.segments.len() == instance.dynamic.len()
        && config.segments.iter().zip(&instance.dynamic).all(|(z, d)| z.len() == d.segments.len());
    if !shape_ok {
        out.push(Violation {
            vehicle: None,
            step: None,
            kind: ViolationKind::Configuration,
            detail: "configuration does not match the instance".into(),
        });
        return Err(out);
    }
    if !config.is_consistent() {
        out.push(Violation {
            vehicle: None,
            step: None,
            kind: ViolationKind::Configuration,
            detail: "segment built without its inverter".into(),
        });
    }
    let mut covered = vec![false; instance.vehicles.len()];
    for plan in &solution.plans {
        if plan.vehicle >= instance.vehicles.len() || covered[plan.vehicle] {
            out.push(Violation {
                vehicle: Some(plan.vehicle),
                step: None,
                kind: ViolationKind::Structure,
                detail: "unknown or duplicated vehicle plan".into(),
            });
            continue;
        }
        covered[plan.vehicle] = true;
        out.extend(validate_plan(instance, config, plan));
    }
    for (k, c) in covered.iter().enumerate() {
        if !c {
            out.push(Violation { vehicle: Some(k), step: None, kind: ViolationKind::Structure, detail: "vehicle has no plan".into() });
        }
    }
    let infra = config.infrastructure_cost(instance);
    let ops: f64 = solution.plans.iter().map(VehiclePlan::cost).sum();
    if !close(infra, solution.infrastructure_cost) || !close(ops, solution.operational_cost) || !close(infra + ops, solution.total_cost) {
        out.push(Violation {
            vehicle: None,
            step: None,
            kind: ViolationKind::Cost,
            detail: format!(
                "reported costs ({}, {}, {}) differ from recomputed ({infra}, {ops}, {})",
                solution.infrastructure_cost,
                solution.operational_cost,
                solution.total_cost,
                infra + ops
            ),
        });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Checks one vehicle plan against the route, the energy limits and the
/// configuration.
pub fn validate_plan(instance: &Instance, config: &Configuration, plan: &VehiclePlan) -> Vec<Violation> {
    let mut out = Vec::new();
    let k = plan.vehicle;
    let mut push = |step: Option<usize>, kind: ViolationKind, detail: String| {
        out.push(Violation { vehicle: Some(k), step, kind, detail });
    };
    let route = &instance.vehicles[k].stops;
    let e = &instance.energy;
    let steps = &plan.steps;
    if steps.is_empty() {
        push(None, ViolationKind::Structure, "empty plan".into());
        return out;
    }
    if steps[0].vertex != route[0].vertex || !steps[0].service {
        push(Some(0), ViolationKind::Structure, "plan must start with the depot departure".into());
    }
    if !close(steps[0].soc, e.q_init) || steps[0].recharge != 0.0 {
        push(Some(0), ViolationKind::SocPropagation, format!("initial charge {} differs from {}", steps[0].soc, e.q_init));
    }
    let last = steps.len() - 1;
    if steps[last].vertex != route[route.len() - 1].vertex || !steps[last].service {
        push(Some(last), ViolationKind::Structure, "plan must end at the depot".into());
    }

    let services: Vec<usize> = (0..steps.len()).filter(|&i| steps[i].service).collect();
    let order_ok = services.len() == route.len() && services.iter().zip(route).all(|(&i, r)| steps[i].vertex == r.vertex);
    if !order_ok {
        push(None, ViolationKind::StopOrder, "serviced stops do not match the route sequence".into());
    } else {
        for (&i, r) in services.iter().zip(route) {
            let t = steps[i].departure;
            if t < r.earliest - TOL || t > r.latest + TOL {
                push(Some(i), ViolationKind::TimeWindow, format!("departure {t} outside [{}, {}]", r.earliest, r.latest));
            }
        }
    }

    for (i, s) in steps.iter().enumerate() {
        if s.soc < e.q_min - TOL {
            push(Some(i), ViolationKind::SocLower, format!("charge {} below {}", s.soc, e.q_min));
        }
        if s.soc > e.q_max + TOL {
            push(Some(i), ViolationKind::SocUpper, format!("charge {} above {}", s.soc, e.q_max));
        }
        if !s.departure.is_finite() || s.departure < -TOL {
            push(Some(i), ViolationKind::TimePropagation, format!("invalid departure {}", s.departure));
        }
    }

    for j in 1..steps.len() {
        let (prev, cur) = (&steps[j - 1], &steps[j]);
        let Some((t, q)) = instance.network.leg(prev.vertex, cur.vertex) else {
            push(Some(j), ViolationKind::MissingArc, format!("no arc {} -> {}", prev.vertex, cur.vertex));
            continue;
        };
        let arrival = prev.departure + t;
        if !close(cur.soc, prev.soc - q + cur.recharge) {
            push(Some(j), ViolationKind::SocPropagation, format!("charge {} != {} - {q} + {}", cur.soc, prev.soc, cur.recharge));
        }
        match cur.charge {
            StepCharge::None => {
                if cur.recharge.abs() > TOL {
                    push(Some(j), ViolationKind::ChargeAmount, "recharge without a charging station".into());
                }
                if cur.departure < arrival - TOL {
                    push(Some(j), ViolationKind::TimePropagation, format!("departure {} before arrival {arrival}", cur.departure));
                }
            }
            StepCharge::Stationary { station, periods, start } => {
                let Some(st) = instance.stationary.get(station) else {
                    push(Some(j), ViolationKind::Structure, format!("unknown stationary station {station}"));
                    continue;
                };
                if st.vertex != cur.vertex {
                    push(Some(j), ViolationKind::Structure, format!("station {station} is not located at vertex {}", cur.vertex));
                }
                if !config.stationary[station] {
                    push(Some(j), ViolationKind::UnbuiltStation, format!("stationary station {station} is not built"));
                }
                let duration = e.period * periods as f64;
                if periods == 0 || !close(cur.recharge, duration * st.rate) {
                    push(Some(j), ViolationKind::ChargeAmount, format!("recharge {} for {periods} periods", cur.recharge));
                }
                if start < arrival - TOL || start + duration > cur.departure + TOL {
                    push(
                        Some(j),
                        ViolationKind::ChargeTiming,
                        format!("charging [{start}, {}] outside stay [{arrival}, {}]", start + duration, cur.departure),
                    );
                }
                if prev.soc - q < e.q_min - TOL {
                    push(Some(j), ViolationKind::SocLower, format!("arrives with {} before charging", prev.soc - q));
                }
            }
            StepCharge::Segment { station, segment } => {
                let Some(seg) = instance.dynamic.get(station).and_then(|d| d.segments.get(segment)) else {
                    push(Some(j), ViolationKind::Structure, format!("unknown segment {segment} of station {station}"));
                    continue;
                };
                if seg.from != prev.vertex || seg.to != cur.vertex {
                    push(Some(j), ViolationKind::Structure, format!("step does not traverse segment {segment} of station {station}"));
                }
                if cur.recharge > TOL && !(config.inverters[station] && config.segments[station][segment]) {
                    push(Some(j), ViolationKind::UnbuiltStation, format!("segment {segment} of station {station} is not built"));
                }
                let cap = instance.dynamic[station].rate * t;
                if cur.recharge < -TOL || cur.recharge > cap + TOL * f64::max(1.0, cap) {
                    push(Some(j), ViolationKind::ChargeAmount, format!("segment recharge {} exceeds {cap}", cur.recharge));
                }
                if cur.departure < arrival - TOL {
                    push(Some(j), ViolationKind::TimePropagation, format!("departure {} before arrival {arrival}", cur.departure));
                }
            }
        }
    }

    let derived = charge_events(steps);
    if derived.len() != plan.charges.len() {
        push(None, ViolationKind::ChargeTiming, format!("{} charging events recorded, {} implied", plan.charges.len(), derived.len()));
    } else {
        for (i, (d, c)) in derived.iter().zip(&plan.charges).enumerate() {
            if d.station != c.station || !close(d.start, c.start) || !close(d.amount, c.amount) {
                push(None, ViolationKind::ChargeTiming, format!("charging event {i} disagrees with the steps"));
            }
            match instance.recharge_price.price_at(c.start) {
                Ok(p) if p == c.price => {}
                _ => push(None, ViolationKind::ChargePrice, format!("charging event {i} priced at {} ", c.price)),
            }
        }
    }

    match operational_cost(instance, steps) {
        Ok(c) => {
            if !close(c.consumption, plan.consumption_cost) || !close(c.recharge, plan.recharge_cost) {
                push(
                    None,
                    ViolationKind::Cost,
                    format!(
                        "reported cost ({}, {}) differs from recomputed ({}, {})",
                        plan.consumption_cost, plan.recharge_cost, c.consumption, c.recharge
                    ),
                );
            }
        }
        Err(err) => push(None, ViolationKind::Cost, err.to_string()),
    }
    out
}
