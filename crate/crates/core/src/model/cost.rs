use super::{charge_events, ChargeEvent, Configuration, Instance, ModelError, RouteStep, VehiclePlan};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub consumption: f64,
    pub recharge: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.consumption + self.recharge
    }
}

/// Installation cost of a configuration.
pub fn infrastructure_cost(instance: &Instance, config: &Configuration) -> f64 {
    config.infrastructure_cost(instance)
}

/// Consumption priced at the flat consumption price plus every charging event
/// priced at the tariff in force when it starts.
pub fn operational_cost(instance: &Instance, steps: &[RouteStep]) -> Result<CostBreakdown, ModelError> {
    let mut consumed = 0.0;
    for w in steps.windows(2) {
        let (_, q) = instance.network.leg(w[0].vertex, w[1].vertex).ok_or_else(|| {
            ModelError::InvalidSolution(format!("no arc between vertices {} and {}", w[0].vertex, w[1].vertex))
        })?;
        consumed += q;
    }
    let mut recharge = 0.0;
    for ev in charge_events(steps) {
        if ev.amount < 0.0 {
            return Err(ModelError::NegativeRecharge(ev.amount));
        }
        recharge += instance.recharge_price.price_at(ev.start)? * ev.amount;
    }
    for s in steps {
        if s.recharge < 0.0 {
            return Err(ModelError::NegativeRecharge(s.recharge));
        }
    }
    Ok(CostBreakdown { consumption: consumed * instance.energy.consumption_price, recharge })
}

/// Builds a priced plan from a step sequence, deriving the charging events.
pub fn price_plan(instance: &Instance, vehicle: usize, steps: Vec<RouteStep>) -> Result<VehiclePlan, ModelError> {
    let cost = operational_cost(instance, &steps)?;
    let mut charges = Vec::new();
    for ev in charge_events(&steps) {
        let price = instance.recharge_price.price_at(ev.start)?;
        charges.push(ChargeEvent { station: ev.station, start: ev.start, amount: ev.amount, price });
    }
    Ok(VehiclePlan { vehicle, steps, charges, consumption_cost: cost.consumption, recharge_cost: cost.recharge })
}
