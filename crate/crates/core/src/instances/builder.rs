use std::collections::BTreeMap;

use crate::model::{
    DynamicStation, EnergyParams, Instance, ModelError, Network, NetworkArc, PriceCurve, RouteStop, Segment,
    StationaryStation, Vehicle, Vertex, VertexId, VertexKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    Manhattan,
}

impl Metric {
    pub fn distance(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        match self {
            Metric::Euclidean => ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt(),
            Metric::Manhattan => (a.0 - b.0).abs() + (a.1 - b.1).abs(),
        }
    }
}

/// Assembles an instance from coordinates. Arcs are derived from a metric for
/// the arc classes the model uses: between route vertices, between route
/// vertices and stationary stations, into the first and out of the last
/// point of each dynamic station, and along every segment.
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    name: String,
    vertices: Vec<Vertex>,
    stationary: Vec<StationaryStation>,
    dynamic: Vec<DynamicStation>,
    vehicles: Vec<Vehicle>,
    energy: EnergyParams,
    price: PriceCurve,
    metric: Metric,
    speed: f64,
    consumption_rate: f64,
}

impl InstanceBuilder {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            vertices: Vec::new(),
            stationary: Vec::new(),
            dynamic: Vec::new(),
            vehicles: Vec::new(),
            energy: EnergyParams { q_init: 10.0, q_min: 0.0, q_max: 10.0, consumption_price: 0.05, period: 1.0 },
            price: PriceCurve::constant(0.05),
            metric: Metric::Euclidean,
            speed: 1.0,
            consumption_rate: 1.0,
        }
    }

    pub fn metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn speed(mut self, speed: f64) -> Self {
        self.speed = speed;
        self
    }

    pub fn consumption_rate(mut self, rate: f64) -> Self {
        self.consumption_rate = rate;
        self
    }

    pub fn energy(mut self, energy: EnergyParams) -> Self {
        self.energy = energy;
        self
    }

    pub fn price(mut self, price: PriceCurve) -> Self {
        self.price = price;
        self
    }

    pub fn vertex(&mut self, name: &str, kind: VertexKind, x: f64, y: f64) -> VertexId {
        self.vertices.push(Vertex { name: name.to_string(), kind, x, y });
        self.vertices.len() - 1
    }

    pub fn vertex_xy(&self, v: VertexId) -> (f64, f64) {
        (self.vertices[v].x, self.vertices[v].y)
    }

    pub fn stationary(&mut self, vertex: VertexId, rate: f64, cost: f64) -> usize {
        self.stationary.push(StationaryStation { vertex, rate, cost });
        self.stationary.len() - 1
    }

    /// Adds a dynamic station whose chain passes through `points`, creating
    /// one segment point vertex per coordinate.
    pub fn dynamic(&mut self, points: &[(f64, f64)], rate: f64, inverter_cost: f64, segment_cost: f64) -> usize {
        assert!(points.len() >= 2, "a dynamic station needs at least one segment");
        let id = self.dynamic.len();
        let ids: Vec<VertexId> = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| self.vertex(&format!("dyn{id}.{i}"), VertexKind::SegmentPoint, x, y))
            .collect();
        let segments = ids.windows(2).map(|w| Segment { from: w[0], to: w[1], cost: segment_cost }).collect();
        self.dynamic.push(DynamicStation { rate, cost: inverter_cost, segments });
        id
    }

    pub fn vehicle(&mut self, name: &str, stops: Vec<RouteStop>) -> usize {
        self.vehicles.push(Vehicle { name: name.to_string(), stops });
        self.vehicles.len() - 1
    }

    pub fn leg(&self, a: VertexId, b: VertexId) -> (f64, f64) {
        let d = self.metric.distance(self.vertex_xy(a), self.vertex_xy(b));
        (d / self.speed, d * self.consumption_rate)
    }

    pub fn build(self) -> Result<Instance, ModelError> {
        let mut pairs: BTreeMap<(VertexId, VertexId), ()> = BTreeMap::new();
        let kind = |v: VertexId| self.vertices[v].kind;
        let mut route_vertices: Vec<VertexId> = self.vehicles.iter().flat_map(|v| v.stops.iter().map(|s| s.vertex)).collect();
        route_vertices.sort_unstable();
        route_vertices.dedup();
        let sources: Vec<VertexId> = route_vertices.iter().copied().filter(|&v| kind(v) != VertexKind::DepotEnd).collect();
        let sinks: Vec<VertexId> = route_vertices.iter().copied().filter(|&v| kind(v) != VertexKind::DepotStart).collect();
        for &a in &sources {
            for &b in &sinks {
                pairs.insert((a, b), ());
            }
            for s in &self.stationary {
                pairs.insert((a, s.vertex), ());
            }
            for d in &self.dynamic {
                pairs.insert((a, d.start()), ());
            }
        }
        for &b in &sinks {
            for s in &self.stationary {
                pairs.insert((s.vertex, b), ());
            }
            for d in &self.dynamic {
                pairs.insert((d.end(), b), ());
            }
        }
        for d in &self.dynamic {
            for s in &d.segments {
                pairs.insert((s.from, s.to), ());
            }
        }
        let arcs = pairs
            .keys()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| {
                let (time, consumption) = self.leg(a, b);
                NetworkArc { from: a, to: b, time, consumption }
            })
            .collect();
        let instance = Instance {
            name: self.name,
            network: Network::new(self.vertices, arcs)?,
            stationary: self.stationary,
            dynamic: self.dynamic,
            vehicles: self.vehicles,
            energy: self.energy,
            recharge_price: self.price,
        };
        instance.validate()?;
        Ok(instance)
    }
}
