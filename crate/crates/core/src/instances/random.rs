//! Seeded random instances small enough for the exhaustive oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builder::InstanceBuilder;
use crate::model::{EnergyParams, Instance, ModelError, PriceCurve, RouteStop, VertexKind};

fn point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let mut c = || (rng.gen_range(0.0..10.0f64) * 2.0).round() / 2.0;
    (c(), c())
}

/// A random instance with one or two vehicles, two to four stops each, up to
/// three stationary and up to two dynamic candidates, under a constant tariff.
pub fn random_tiny(seed: u64) -> Result<Instance, ModelError> {
    random_tiny_with(seed, false)
}

/// Like [`random_tiny`], optionally under a time-of-use tariff that is
/// expensive early, cheap at midday and moderate later.
pub fn random_tiny_with(seed: u64, variable_price: bool) -> Result<Instance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = InstanceBuilder::new(&format!("random-{seed}"));
    let depot_xy = point(&mut rng);
    let ds = b.vertex("depot", VertexKind::DepotStart, depot_xy.0, depot_xy.1);
    let de = b.vertex("depot-end", VertexKind::DepotEnd, depot_xy.0, depot_xy.1);

    let vehicles = rng.gen_range(1..=2);
    let mut routes: Vec<Vec<usize>> = Vec::new();
    let mut stop_pool: Vec<usize> = Vec::new();
    for k in 0..vehicles {
        let n = rng.gen_range(2..=4);
        let mut route = vec![ds];
        for i in 0..n {
            let shared = !stop_pool.is_empty() && rng.gen_bool(0.2);
            let v = if shared {
                let v = stop_pool[rng.gen_range(0..stop_pool.len())];
                if route.contains(&v) {
                    continue;
                }
                v
            } else {
                let (x, y) = point(&mut rng);
                let v = b.vertex(&format!("s{k}.{i}"), VertexKind::Stop, x, y);
                stop_pool.push(v);
                v
            };
            route.push(v);
        }
        route.push(de);
        routes.push(route);
    }

    let stationary = rng.gen_range(1..=3);
    let mut used = Vec::new();
    for i in 0..stationary {
        let v = if rng.gen_bool(0.25) {
            stop_pool[rng.gen_range(0..stop_pool.len())]
        } else {
            let (x, y) = point(&mut rng);
            b.vertex(&format!("f{i}"), VertexKind::Station, x, y)
        };
        if used.contains(&v) {
            continue;
        }
        used.push(v);
        let rate = [1.0, 2.0, 3.0][rng.gen_range(0..3)];
        let cost = (rng.gen_range(15.0..25.0f64) * 100.0).round() / 100.0;
        b.stationary(v, rate, cost);
    }

    let dynamic = rng.gen_range(0..=2);
    for _ in 0..dynamic {
        let route = &routes[rng.gen_range(0..routes.len())];
        let gap = rng.gen_range(1..route.len());
        let (a, c) = (b.vertex_xy(route[gap - 1]), b.vertex_xy(route[gap]));
        let segments = rng.gen_range(2..=3);
        let lo = rng.gen_range(0.05..0.3);
        let hi = rng.gen_range(0.7..0.95);
        let off = rng.gen_range(-0.5..0.5);
        let points: Vec<(f64, f64)> = (0..=segments)
            .map(|i| {
                let s = lo + (hi - lo) * i as f64 / segments as f64;
                (a.0 + s * (c.0 - a.0) + off, a.1 + s * (c.1 - a.1) - off)
            })
            .collect();
        let rate = [1.0, 2.0, 4.0][rng.gen_range(0..3)];
        let cost = (rng.gen_range(1.5..2.5f64) * 100.0).round() / 100.0;
        b.dynamic(&points, rate, cost, 0.001);
    }

    let mut longest: f64 = 0.0;
    let mut timed = Vec::new();
    for route in &routes {
        let mut t = 0.0;
        let mut stops = Vec::new();
        for (p, &v) in route.iter().enumerate() {
            if p > 0 {
                t += b.leg(route[p - 1], v).0;
            }
            let slack = rng.gen_range(1.0..6.0f64).round();
            let earliest = if p == 0 { 0.0 } else { t.floor() };
            let latest = if p == 0 { 0.0 } else { t + slack + 2.0 * p as f64 };
            stops.push(RouteStop { vertex: v, earliest, latest });
        }
        longest = longest.max(t);
        timed.push(stops);
    }
    for (k, stops) in timed.into_iter().enumerate() {
        b.vehicle(&format!("bus{k}"), stops);
    }

    let q_max = (longest * rng.gen_range(0.5..1.1f64)).round().max(2.0);
    let q_min = if rng.gen_bool(0.5) { 0.0 } else { 1.0f64.min(q_max / 4.0) };
    let q_init = if rng.gen_bool(0.7) { q_max } else { ((q_min + q_max) / 2.0).round().max(q_min) };
    b = b.energy(EnergyParams { q_init, q_min, q_max, consumption_price: 0.05, period: 1.0 });
    if variable_price {
        b = b.price(PriceCurve::from_pairs(&[(0.0, 0.3), (8.0, 0.04), (13.0, 0.2067)])?);
    }
    b.build()
}
