use crate::model::Instance;

/// Lower bounds on the energy a vehicle still has to consume to reach the
/// depot from each vertex of its expanded graph.
///
/// Stop bounds follow the direct route. Charger bounds are stored for every
/// candidate stationary station and gap, whether built or not, so toggling a
/// station never invalidates them.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteBounds {
    pub vehicle: usize,
    /// `stops[p]` for route position `p`.
    pub stops: Vec<f64>,
    /// `chargers[gap][station]`, where gap `i` joins positions `i - 1` and `i`.
    /// `None` when the station cannot reach the stop closing the gap.
    pub chargers: Vec<Vec<Option<f64>>>,
}

impl RouteBounds {
    pub fn stop(&self, position: usize) -> f64 {
        self.stops[position]
    }

    pub fn charger(&self, gap: usize, station: usize) -> Option<f64> {
        self.chargers[gap][station]
    }

    /// Recomputes the entries of one stationary station.
    pub fn update_station(&mut self, instance: &Instance, station: usize) {
        let route = &instance.vehicles[self.vehicle].stops;
        let s = instance.stationary[station].vertex;
        for gap in 1..route.len() {
            self.chargers[gap][station] =
                instance.network.leg(s, route[gap].vertex).map(|(_, q)| q + self.stops[gap]);
        }
    }
}

/// Computes the energy bounds of one vehicle.
pub fn local_energy_bounds(instance: &Instance, vehicle: usize) -> RouteBounds {
    let route = &instance.vehicles[vehicle].stops;
    let n = route.len();
    let mut stops = vec![0.0; n];
    for p in (0..n - 1).rev() {
        let (_, q) = instance.network.leg(route[p].vertex, route[p + 1].vertex).expect("validated route arc");
        stops[p] = q + stops[p + 1];
    }
    let mut bounds = RouteBounds {
        vehicle,
        stops,
        chargers: vec![vec![None; instance.stationary.len()]; n],
    };
    for f in 0..instance.stationary.len() {
        bounds.update_station(instance, f);
    }
    bounds
}

/// Lower bound on the operational cost of one vehicle under any
/// configuration: the direct-route consumption plus the cheapest possible
/// price for the energy that must be recharged.
pub fn routing_lower_bound(instance: &Instance, bounds: &RouteBounds) -> f64 {
    let e = &instance.energy;
    let need = bounds.stop(0);
    need * e.consumption_price + f64::max(need - e.q_init + e.q_min, 0.0) * instance.recharge_price.min_price()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::tiny;

    #[test]
    fn triangle_bounds_at_unit_consumption() {
        let inst = tiny::fig4_triangle(1.0).unwrap();
        let b = local_energy_bounds(&inst, 0);
        let expected = [3.0, 2.0, 1.0, 0.0];
        for (got, want) in b.stops.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn charger_bounds_add_the_leg_to_the_next_stop() {
        let inst = tiny::fig4_triangle(1.0).unwrap();
        let b = local_energy_bounds(&inst, 0);
        let to_corner = 1.0 / 3f64.sqrt();
        for gap in 1..4 {
            let got = b.charger(gap, 0).unwrap();
            assert!((got - (to_corner + b.stop(gap))).abs() < 1e-12);
        }
    }

    #[test]
    fn station_update_matches_recomputation() {
        let inst = tiny::tiny_family("three-vehicles").unwrap();
        for k in 0..inst.vehicles.len() {
            let fresh = local_energy_bounds(&inst, k);
            let mut updated = fresh.clone();
            for f in 0..inst.stationary.len() {
                for gap in 0..updated.chargers.len() {
                    updated.chargers[gap][f] = Some(-1.0);
                }
                updated.update_station(&inst, f);
            }
            for gap in 1..updated.chargers.len() {
                assert_eq!(updated.chargers[gap], fresh.chargers[gap]);
            }
        }
    }

    #[test]
    fn lower_bound_with_deficit() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let b = local_energy_bounds(&inst, 0);
        let need = b.stop(0);
        let lb = routing_lower_bound(&inst, &b);
        let want = need * 0.05 + (need - inst.energy.q_init + inst.energy.q_min) * 0.05;
        assert!((lb - want).abs() < 1e-12);
    }
}
