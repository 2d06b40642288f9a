//! Hand-built catalog of tiny instances small enough for exhaustive search.

use super::builder::{InstanceBuilder, Metric};
use crate::model::{
    price_plan, Configuration, EnergyParams, Instance, ModelError, PriceCurve, RouteStep, RouteStop, Solution,
    StationRef, StepCharge, VertexKind,
};

pub const TINY_NAMES: [&str; 12] = [
    "fig4-triangle",
    "fig3-toy",
    "infeasible-window",
    "no-charge-needed",
    "single-station",
    "stat-vs-dyn",
    "shared-station",
    "three-vehicles",
    "variable-price",
    "prefix-tightening",
    "stop-station",
    "tight-timetable",
];

pub fn tiny_family(name: &str) -> Result<Instance, ModelError> {
    match name {
        "fig4-triangle" => fig4_triangle(4.0),
        "fig3-toy" => fig3_toy(),
        "infeasible-window" => infeasible_window(),
        "no-charge-needed" => no_charge_needed(),
        "single-station" => single_station(),
        "stat-vs-dyn" => stat_vs_dyn(),
        "shared-station" => shared_station(),
        "three-vehicles" => three_vehicles(),
        "variable-price" => variable_price(0.3, Some(&[(0.0, 0.3), (8.0, 0.04), (13.0, 0.2067)])),
        "prefix-tightening" => prefix_tightening(),
        "stop-station" => stop_station(),
        "tight-timetable" => tight_timetable(),
        _ => Err(ModelError::InvalidInstance(format!("unknown tiny instance '{name}'"))),
    }
}

fn rs(vertex: usize, earliest: f64, latest: f64) -> RouteStop {
    RouteStop { vertex, earliest, latest }
}

fn energy(q_init: f64, q_min: f64, q_max: f64) -> EnergyParams {
    EnergyParams { q_init, q_min, q_max, consumption_price: 0.05, period: 1.0 }
}

/// Unit equilateral triangle: depot and two stops on the corners, a
/// stationary charger at the centre and a two-segment dynamic station along
/// the side between the stops. Windows leave room for three charging periods
/// in every gap.
pub fn fig4_triangle(consumption_rate: f64) -> Result<Instance, ModelError> {
    let h = 3f64.sqrt() / 2.0;
    let mut b = InstanceBuilder::new("fig4-triangle").consumption_rate(consumption_rate).energy(energy(10.0, 0.0, 12.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 1.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 0.5, h);
    let c = b.vertex("centre", VertexKind::Station, 0.5, h / 3.0);
    b.stationary(c, 1.0, 20.0);
    b.dynamic(&[(1.0, 0.0), (0.75, h / 2.0), (0.5, h)], 1.0, 2.0, 0.001);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 1.0, 4.5), rs(s2, 2.0, 5.5), rs(de, 3.0, 6.5)]);
    b.build()
}

fn fig3_toy() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("fig3-toy").metric(Metric::Manhattan).energy(energy(15.0, 5.0, 40.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let f = b.vertex("charger", VertexKind::Station, 1.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 2.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 2.0, 4.0);
    b.stationary(f, 5.0, 20.0);
    b.dynamic(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)], 6.0, 2.0, 0.001);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 4.0, 10.0), rs(s2, 9.0, 14.0), rs(de, 0.0, 20.0)]);
    b.build()
}

/// Hand-assembled plan for the toy instance: two periods at the stationary
/// charger, then both dynamic segments, back at the depot at time 15.
pub fn fig3_reference_solution(instance: &Instance) -> Result<Solution, ModelError> {
    let v = |name: &str| instance.network.vertices().iter().position(|x| x.name == name).unwrap();
    let step = |vertex, departure, soc, service, recharge, charge| RouteStep { vertex, departure, soc, service, recharge, charge };
    let steps = vec![
        step(v("depot"), 0.0, 15.0, true, 0.0, StepCharge::None),
        step(v("charger"), 3.0, 24.0, false, 10.0, StepCharge::Stationary { station: 0, periods: 2, start: 1.0 }),
        step(v("s1"), 4.0, 23.0, true, 0.0, StepCharge::None),
        step(v("dyn0.0"), 5.0, 22.0, false, 0.0, StepCharge::None),
        step(v("dyn0.1"), 6.0, 27.0, false, 6.0, StepCharge::Segment { station: 0, segment: 0 }),
        step(v("dyn0.2"), 7.0, 32.0, false, 6.0, StepCharge::Segment { station: 0, segment: 1 }),
        step(v("s2"), 9.0, 31.0, true, 0.0, StepCharge::None),
        step(v("depot-end"), 15.0, 25.0, true, 0.0, StepCharge::None),
    ];
    let plan = price_plan(instance, 0, steps)?;
    let mut config = Configuration::empty(instance);
    config.add(StationRef::Stationary(0));
    config.add(StationRef::Dynamic(0));
    Ok(Solution::new(instance, config, vec![plan]))
}

fn infeasible_window() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("infeasible-window").energy(energy(10.0, 0.0, 10.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 5.0, 0.0);
    let f = b.vertex("charger", VertexKind::Station, 2.0, 1.0);
    b.stationary(f, 2.0, 20.0);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 0.0, 2.0), rs(de, 0.0, 20.0)]);
    b.build()
}

fn no_charge_needed() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("no-charge-needed").energy(energy(15.0, 0.0, 15.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 3.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 3.0, 3.0);
    let f = b.vertex("charger", VertexKind::Station, 1.5, 1.5);
    b.stationary(f, 2.0, 20.0);
    b.dynamic(&[(3.0, 0.5), (3.0, 1.5), (3.0, 2.5)], 2.0, 2.0, 0.001);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 3.0, 9.0), rs(s2, 6.0, 15.0), rs(de, 10.0, 25.0)]);
    b.build()
}

fn single_station() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("single-station").energy(energy(12.0, 0.0, 12.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 4.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 4.0, 4.0);
    let near = b.vertex("near", VertexKind::Station, 2.0, -1.0);
    let far = b.vertex("far", VertexKind::Station, 12.0, 12.0);
    b.stationary(near, 2.0, 18.0);
    b.stationary(far, 4.0, 15.0);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 4.0, 9.0), rs(s2, 8.0, 14.0), rs(de, 13.0, 22.0)]);
    b.build()
}

fn stat_vs_dyn() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("stat-vs-dyn").energy(energy(14.0, 0.0, 14.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 4.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 8.0, 0.0);
    let f = b.vertex("charger", VertexKind::Station, 4.0, 2.0);
    b.stationary(f, 2.0, 20.0);
    b.dynamic(&[(4.5, 0.0), (6.0, 0.0), (7.5, 0.0)], 2.0, 2.0, 0.001);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 4.0, 12.0), rs(s2, 8.0, 16.0), rs(de, 16.0, 28.0)]);
    b.build()
}

fn shared_station() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("shared-station").energy(energy(13.0, 0.0, 13.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let a1 = b.vertex("a1", VertexKind::Stop, 3.0, 3.0);
    let b1 = b.vertex("b1", VertexKind::Stop, 3.0, -3.0);
    let hub = b.vertex("hub", VertexKind::Stop, 6.0, 0.0);
    let pa = b.vertex("charger-a", VertexKind::Station, 3.0, 4.0);
    let pb = b.vertex("charger-b", VertexKind::Station, 3.0, -4.0);
    b.stationary(hub, 2.0, 15.0);
    b.stationary(pa, 2.0, 12.0);
    b.stationary(pb, 2.0, 12.0);
    b.vehicle("a", vec![rs(ds, 0.0, 0.0), rs(a1, 4.0, 12.0), rs(hub, 8.0, 16.0), rs(de, 14.0, 26.0)]);
    b.vehicle("b", vec![rs(ds, 0.0, 0.0), rs(b1, 4.0, 12.0), rs(hub, 8.0, 16.0), rs(de, 14.0, 26.0)]);
    b.build()
}

fn three_vehicles() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("three-vehicles").energy(energy(13.0, 0.0, 13.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let a1 = b.vertex("a1", VertexKind::Stop, 4.0, 0.0);
    let a2 = b.vertex("a2", VertexKind::Stop, 4.0, 4.0);
    let b1 = b.vertex("b1", VertexKind::Stop, -4.0, 0.0);
    let b2 = b.vertex("b2", VertexKind::Stop, -4.0, 4.0);
    let c1 = b.vertex("c1", VertexKind::Stop, 0.0, -4.0);
    let c2 = b.vertex("c2", VertexKind::Stop, 4.0, -4.0);
    let north = b.vertex("north", VertexKind::Station, 0.0, 2.0);
    let south = b.vertex("south", VertexKind::Station, 2.0, -2.0);
    let west = b.vertex("west", VertexKind::Station, -2.0, 2.0);
    b.stationary(north, 2.0, 20.0);
    b.stationary(south, 2.0, 16.0);
    b.stationary(west, 2.0, 14.0);
    b.dynamic(&[(4.0, 1.0), (4.0, 2.0), (4.0, 3.0)], 3.0, 2.0, 0.001);
    let win = |e: f64| (e, 3.0 * e + 2.0);
    for (name, x, y) in [("a", a1, a2), ("b", b1, b2), ("c", c1, c2)] {
        let (e1, l1) = win(4.0);
        let (e2, l2) = win(8.0);
        let (e3, l3) = win(13.7);
        b.vehicle(name, vec![rs(ds, 0.0, 0.0), rs(x, e1, l1), rs(y, e2, l2), rs(de, e3, l3)]);
    }
    b.build()
}

/// Square loop with a single central charger and a timetable that pins every
/// stop time. `curve` overrides the constant tariff `flat`.
pub fn variable_price(flat: f64, curve: Option<&[(f64, f64)]>) -> Result<Instance, ModelError> {
    let price = match curve {
        Some(points) => PriceCurve::from_pairs(points)?,
        None => PriceCurve::constant(flat),
    };
    let mut b = InstanceBuilder::new("variable-price").energy(energy(2.5, 0.5, 5.0)).price(price);
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 1.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 1.0, 1.0);
    let s3 = b.vertex("s3", VertexKind::Stop, 0.0, 1.0);
    let c = b.vertex("centre", VertexKind::Station, 0.5, 0.5);
    b.stationary(c, 3.0, 20.0);
    b.vehicle(
        "bus",
        vec![rs(ds, 5.0, 5.0), rs(s1, 8.0, 8.0), rs(s2, 11.0, 11.0), rs(s3, 14.0, 14.0), rs(de, 17.0, 17.0)],
    );
    b.build()
}

fn prefix_tightening() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("prefix-tightening").energy(energy(13.0, 0.0, 13.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 2.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 8.0, 0.0);
    let f = b.vertex("charger", VertexKind::Station, 5.0, 1.0);
    b.stationary(f, 2.0, 25.0);
    b.dynamic(&[(2.5, 0.0), (4.0, 0.0), (5.5, 0.0), (7.0, 0.0)], 1.5, 2.0, 0.001);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 2.0, 8.0), rs(s2, 8.0, 16.0), rs(de, 16.0, 28.0)]);
    b.build()
}

fn stop_station() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("stop-station").energy(energy(10.0, 0.0, 10.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, 0.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 3.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 3.0, 3.0);
    let s3 = b.vertex("s3", VertexKind::Stop, 0.0, 3.0);
    let f = b.vertex("charger", VertexKind::Station, 1.5, -1.0);
    b.stationary(s2, 2.0, 10.0);
    b.stationary(f, 2.0, 14.0);
    b.vehicle(
        "bus",
        vec![rs(ds, 0.0, 0.0), rs(s1, 3.0, 8.0), rs(s2, 6.0, 12.0), rs(s3, 9.0, 16.0), rs(de, 12.0, 22.0)],
    );
    b.build()
}

fn tight_timetable() -> Result<Instance, ModelError> {
    let mut b = InstanceBuilder::new("tight-timetable").energy(energy(14.0, 0.0, 14.0));
    let ds = b.vertex("depot", VertexKind::DepotStart, 0.0, 0.0);
    let de = b.vertex("terminal", VertexKind::DepotEnd, 15.0, 0.0);
    let s1 = b.vertex("s1", VertexKind::Stop, 5.0, 0.0);
    let s2 = b.vertex("s2", VertexKind::Stop, 10.0, 0.0);
    let f = b.vertex("charger", VertexKind::Station, 7.5, 1.0);
    b.stationary(f, 2.0, 12.0);
    b.dynamic(&[(6.0, 0.0), (7.5, 0.0), (9.0, 0.0)], 1.0, 2.0, 0.001);
    b.vehicle("bus", vec![rs(ds, 0.0, 0.0), rs(s1, 5.0, 5.5), rs(s2, 10.0, 10.5), rs(de, 15.0, 15.5)]);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_solution;

    #[test]
    fn catalog_builds_and_respects_size_limits() {
        assert!(TINY_NAMES.len() >= 10);
        for name in TINY_NAMES {
            let inst = tiny_family(name).unwrap();
            assert_eq!(inst.name, name);
            assert!(inst.vehicles.len() <= 3, "{name}");
            assert!(inst.station_count() <= 4, "{name}");
            for v in &inst.vehicles {
                assert!(v.stops.len() <= 7, "{name}");
            }
        }
        assert!(tiny_family("nope").is_err());
    }

    #[test]
    fn toy_reference_solution_validates() {
        let inst = tiny_family("fig3-toy").unwrap();
        let sol = fig3_reference_solution(&inst).unwrap();
        validate_solution(&inst, &sol).unwrap();
        let last = sol.plans[0].steps.last().unwrap();
        assert_eq!(last.departure, 15.0);
        assert_eq!(last.soc, 25.0);
    }
}
