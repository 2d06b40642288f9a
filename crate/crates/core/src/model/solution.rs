use serde::{Deserialize, Serialize};

use super::{Configuration, Instance, StationRef, VertexId};
use crate::TOL;

/// How the energy recharged on arrival at a step was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StepCharge {
    None,
    /// Charged for `periods` discrete periods starting at `start`, before
    /// departing the step.
    Stationary { station: usize, periods: u32, start: f64 },
    /// Reached the step by driving along segment `segment` of a dynamic
    /// station. `recharge` on the step is what that segment delivered.
    Segment { station: usize, segment: usize },
}

/// One visited network vertex. `departure` and `soc` are taken when leaving
/// the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteStep {
    pub vertex: VertexId,
    pub departure: f64,
    pub soc: f64,
    /// The step is the timetabled service of a route stop.
    pub service: bool,
    pub recharge: f64,
    pub charge: StepCharge,
}

/// A priced recharge. Dynamic events cover a whole traversal and are priced at
/// the start of the first charging segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeEvent {
    pub station: StationRef,
    pub start: f64,
    pub amount: f64,
    pub price: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehiclePlan {
    pub vehicle: usize,
    pub steps: Vec<RouteStep>,
    pub charges: Vec<ChargeEvent>,
    pub consumption_cost: f64,
    pub recharge_cost: f64,
}

impl VehiclePlan {
    pub fn cost(&self) -> f64 {
        self.consumption_cost + self.recharge_cost
    }

    /// Stations whose arcs the plan relies on.
    pub fn used_stations(&self) -> Vec<StationRef> {
        let mut used: Vec<StationRef> = self
            .steps
            .iter()
            .filter_map(|s| match s.charge {
                StepCharge::None => None,
                StepCharge::Stationary { station, .. } => Some(StationRef::Stationary(station)),
                StepCharge::Segment { station, .. } => Some(StationRef::Dynamic(station)),
            })
            .collect();
        used.sort();
        used.dedup();
        used
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub configuration: Configuration,
    pub infrastructure_cost: f64,
    pub operational_cost: f64,
    pub total_cost: f64,
    pub plans: Vec<VehiclePlan>,
}

impl Solution {
    pub fn new(instance: &Instance, configuration: Configuration, plans: Vec<VehiclePlan>) -> Self {
        let infrastructure_cost = configuration.infrastructure_cost(instance);
        let operational_cost: f64 = plans.iter().map(VehiclePlan::cost).sum();
        Self {
            configuration,
            infrastructure_cost,
            operational_cost,
            total_cost: infrastructure_cost + operational_cost,
            plans,
        }
    }
}

/// Unpriced recharge as implied by a step sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCharge {
    pub station: StationRef,
    pub start: f64,
    pub amount: f64,
}

/// Groups step recharges into charging events. A dynamic traversal is a run
/// of consecutive segment steps of one station with increasing segment index.
pub fn charge_events(steps: &[RouteStep]) -> Vec<RawCharge> {
    let mut events = Vec::new();
    let mut i = 0;
    while i < steps.len() {
        match steps[i].charge {
            StepCharge::None => i += 1,
            StepCharge::Stationary { station, start, .. } => {
                if steps[i].recharge.abs() > TOL {
                    events.push(RawCharge { station: StationRef::Stationary(station), start, amount: steps[i].recharge });
                }
                i += 1;
            }
            StepCharge::Segment { station, segment } => {
                let mut j = i + 1;
                let mut last = segment;
                while j < steps.len() {
                    match steps[j].charge {
                        StepCharge::Segment { station: s, segment: t } if s == station && t == last + 1 => {
                            last = t;
                            j += 1;
                        }
                        _ => break,
                    }
                }
                let amount: f64 = steps[i..j].iter().map(|s| s.recharge).sum();
                if let Some(first) = (i..j).find(|&p| steps[p].recharge.abs() > TOL) {
                    let start = if first > 0 { steps[first - 1].departure } else { 0.0 };
                    events.push(RawCharge { station: StationRef::Dynamic(station), start, amount });
                }
                i = j;
            }
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(vertex: usize, departure: f64, recharge: f64, charge: StepCharge) -> RouteStep {
        RouteStep { vertex, departure, soc: 10.0, service: false, recharge, charge }
    }

    #[test]
    fn dynamic_run_is_one_event_priced_at_first_active_segment() {
        let steps = vec![
            step(0, 0.0, 0.0, StepCharge::None),
            step(1, 1.0, 0.0, StepCharge::None),
            step(2, 2.0, 0.0, StepCharge::Segment { station: 0, segment: 0 }),
            step(3, 3.0, 1.5, StepCharge::Segment { station: 0, segment: 1 }),
            step(4, 4.0, 1.5, StepCharge::Segment { station: 0, segment: 2 }),
            step(5, 5.0, 0.0, StepCharge::None),
        ];
        let ev = charge_events(&steps);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].station, StationRef::Dynamic(0));
        assert_eq!(ev[0].start, 2.0);
        assert_eq!(ev[0].amount, 3.0);
    }

    #[test]
    fn stationary_steps_are_separate_events() {
        let steps = vec![
            step(0, 0.0, 0.0, StepCharge::None),
            step(7, 4.0, 2.0, StepCharge::Stationary { station: 1, periods: 2, start: 2.0 }),
            step(1, 5.0, 0.0, StepCharge::None),
        ];
        let ev = charge_events(&steps);
        assert_eq!(ev, vec![RawCharge { station: StationRef::Stationary(1), start: 2.0, amount: 2.0 }]);
    }
}
