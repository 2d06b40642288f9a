use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ModelError, PriceCurve};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexKind {
    DepotStart,
    DepotEnd,
    Stop,
    Station,
    SegmentPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    pub kind: VertexKind,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkArc {
    pub from: VertexId,
    pub to: VertexId,
    pub time: f64,
    pub consumption: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct NetworkData {
    vertices: Vec<Vertex>,
    arcs: Vec<NetworkArc>,
}

/// Directed road network with travel time and energy consumption per arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkData", into = "NetworkData")]
pub struct Network {
    vertices: Vec<Vertex>,
    arcs: Vec<NetworkArc>,
    index: HashMap<(VertexId, VertexId), usize>,
}

impl Network {
    pub fn new(vertices: Vec<Vertex>, arcs: Vec<NetworkArc>) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(arcs.len());
        for (i, a) in arcs.iter().enumerate() {
            if a.from >= vertices.len() || a.to >= vertices.len() {
                return Err(ModelError::InvalidInstance(format!("arc {i} references an unknown vertex")));
            }
            if a.from == a.to {
                return Err(ModelError::InvalidInstance(format!("arc {i} is a self loop")));
            }
            if !(a.time >= 0.0 && a.consumption >= 0.0 && a.time.is_finite() && a.consumption.is_finite()) {
                return Err(ModelError::InvalidInstance(format!("arc {i} has a negative or non-finite attribute")));
            }
            if index.insert((a.from, a.to), i).is_some() {
                return Err(ModelError::InvalidInstance(format!("duplicate arc {} -> {}", a.from, a.to)));
            }
        }
        Ok(Self { vertices, arcs, index })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn arcs(&self) -> &[NetworkArc] {
        &self.arcs
    }

    /// Travel time and consumption from `from` to `to`. Staying at the same
    /// vertex is free.
    pub fn leg(&self, from: VertexId, to: VertexId) -> Option<(f64, f64)> {
        if from == to {
            return Some((0.0, 0.0));
        }
        self.index.get(&(from, to)).map(|&i| (self.arcs[i].time, self.arcs[i].consumption))
    }

    pub fn has_arc(&self, from: VertexId, to: VertexId) -> bool {
        self.index.contains_key(&(from, to))
    }

    pub fn distance(&self, a: VertexId, b: VertexId) -> f64 {
        let (p, q) = (&self.vertices[a], &self.vertices[b]);
        ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt()
    }
}

impl TryFrom<NetworkData> for Network {
    type Error = ModelError;

    fn try_from(data: NetworkData) -> Result<Self, Self::Error> {
        Network::new(data.vertices, data.arcs)
    }
}

impl From<Network> for NetworkData {
    fn from(n: Network) -> Self {
        NetworkData { vertices: n.vertices, arcs: n.arcs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryStation {
    pub vertex: VertexId,
    /// Energy recharged per unit of time.
    pub rate: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: VertexId,
    pub to: VertexId,
    pub cost: f64,
}

/// An inductive charging station made of a chain of road segments that share
/// one inverter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicStation {
    pub rate: f64,
    /// Inverter cost, paid once if any segment is built.
    pub cost: f64,
    pub segments: Vec<Segment>,
}

impl DynamicStation {
    pub fn start(&self) -> VertexId {
        self.segments[0].from
    }

    pub fn end(&self) -> VertexId {
        self.segments[self.segments.len() - 1].to
    }

    /// Cheapest way to keep the station with at least one segment built.
    pub fn min_build_cost(&self) -> f64 {
        self.cost + self.segments.iter().map(|s| s.cost).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum StationRef {
    Stationary(usize),
    Dynamic(usize),
}

mod latest_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// A timetabled visit. `latest` may be infinite (serialized as `null`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteStop {
    pub vertex: VertexId,
    pub earliest: f64,
    #[serde(with = "latest_serde")]
    pub latest: f64,
}

/// A vehicle and its fixed stop sequence, depots included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vehicle {
    pub name: String,
    pub stops: Vec<RouteStop>,
}

impl Vehicle {
    pub fn depot_start(&self) -> &RouteStop {
        &self.stops[0]
    }

    pub fn depot_end(&self) -> &RouteStop {
        &self.stops[self.stops.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub q_init: f64,
    pub q_min: f64,
    pub q_max: f64,
    /// Price per unit of consumed energy.
    pub consumption_price: f64,
    /// Length of one discrete stationary charging period.
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub network: Network,
    pub stationary: Vec<StationaryStation>,
    pub dynamic: Vec<DynamicStation>,
    pub vehicles: Vec<Vehicle>,
    pub energy: EnergyParams,
    pub recharge_price: PriceCurve,
}

impl Instance {
    pub fn station_count(&self) -> usize {
        self.stationary.len() + self.dynamic.len()
    }

    pub fn stations(&self) -> impl Iterator<Item = StationRef> + '_ {
        (0..self.stationary.len())
            .map(StationRef::Stationary)
            .chain((0..self.dynamic.len()).map(StationRef::Dynamic))
    }

    /// Vertex used as the location of a station in geometric comparisons.
    pub fn station_anchor(&self, s: StationRef) -> VertexId {
        match s {
            StationRef::Stationary(f) => self.stationary[f].vertex,
            StationRef::Dynamic(f) => self.dynamic[f].start(),
        }
    }

    /// Checks structural consistency. Every loader and builder calls this.
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::InvalidInstance(m));
        let n = self.network.vertices().len();
        let e = &self.energy;
        if !(e.q_min >= 0.0 && e.q_min <= e.q_init && e.q_init <= e.q_max && e.q_max.is_finite()) {
            return bad("state of charge limits must satisfy 0 <= q_min <= q_init <= q_max".into());
        }
        if !(e.period > 0.0 && e.period.is_finite()) {
            return bad("charging period must be positive".into());
        }
        if !(e.consumption_price >= 0.0 && e.consumption_price.is_finite()) {
            return bad("consumption price must be non-negative".into());
        }
        let mut station_vertices = HashSet::new();
        for (i, s) in self.stationary.iter().enumerate() {
            if s.vertex >= n {
                return bad(format!("stationary station {i} references an unknown vertex"));
            }
            if !matches!(self.network.vertex(s.vertex).kind, VertexKind::Stop | VertexKind::Station) {
                return bad(format!("stationary station {i} must sit on a stop or station vertex"));
            }
            if !station_vertices.insert(s.vertex) {
                return bad(format!("two stationary stations share vertex {}", s.vertex));
            }
            if !(s.rate > 0.0 && s.rate.is_finite() && s.cost >= 0.0) {
                return bad(format!("stationary station {i} has an invalid rate or cost"));
            }
        }
        let mut segment_vertices = HashSet::new();
        for (i, d) in self.dynamic.iter().enumerate() {
            if d.segments.is_empty() {
                return bad(format!("dynamic station {i} has no segments"));
            }
            if !(d.rate > 0.0 && d.rate.is_finite() && d.cost >= 0.0) {
                return bad(format!("dynamic station {i} has an invalid rate or cost"));
            }
            let mut points = vec![d.segments[0].from];
            for (t, s) in d.segments.iter().enumerate() {
                if t > 0 && d.segments[t - 1].to != s.from {
                    return bad(format!("dynamic station {i} segments are not chained"));
                }
                if !self.network.has_arc(s.from, s.to) {
                    return bad(format!("dynamic station {i} segment {t} has no network arc"));
                }
                if s.cost < 0.0 {
                    return bad(format!("dynamic station {i} segment {t} has a negative cost"));
                }
                points.push(s.to);
            }
            for p in points {
                if self.network.vertex(p).kind != VertexKind::SegmentPoint {
                    return bad(format!("dynamic station {i} uses vertex {p} which is not a segment point"));
                }
                if !segment_vertices.insert(p) {
                    return bad(format!("segment point {p} is shared or repeated"));
                }
            }
        }
        if self.vehicles.is_empty() {
            return bad("no vehicles".into());
        }
        for (k, v) in self.vehicles.iter().enumerate() {
            if v.stops.len() < 2 {
                return bad(format!("vehicle {k} route needs both depots"));
            }
            let first = self.network.vertex(v.stops[0].vertex).kind;
            let last = self.network.vertex(v.depot_end().vertex).kind;
            if first != VertexKind::DepotStart || last != VertexKind::DepotEnd {
                return bad(format!("vehicle {k} route must start and end at the depots"));
            }
            let mut seen = HashSet::new();
            for (p, s) in v.stops.iter().enumerate() {
                if s.vertex >= n {
                    return bad(format!("vehicle {k} stop {p} references an unknown vertex"));
                }
                if !seen.insert(s.vertex) {
                    return bad(format!("vehicle {k} visits vertex {} twice", s.vertex));
                }
                if 0 < p && p + 1 < v.stops.len() && self.network.vertex(s.vertex).kind != VertexKind::Stop {
                    return bad(format!("vehicle {k} stop {p} is not a stop vertex"));
                }
                if !(s.earliest >= 0.0 && s.earliest.is_finite() && s.earliest <= s.latest) {
                    return bad(format!("vehicle {k} stop {p} has an invalid window"));
                }
                if p > 0 && !self.network.has_arc(v.stops[p - 1].vertex, s.vertex) {
                    return bad(format!("vehicle {k} has no arc between stops {} and {p}", p - 1));
                }
            }
            if !v.depot_end().latest.is_finite() {
                return bad(format!("vehicle {k} needs a finite latest return time"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::tiny;

    #[test]
    fn leg_lookup_and_self_loops() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let route = &inst.vehicles[0].stops;
        let (t, q) = inst.network.leg(route[0].vertex, route[1].vertex).unwrap();
        assert!((t - 1.0).abs() < 1e-12 && q > 0.0);
        assert_eq!(inst.network.leg(route[1].vertex, route[1].vertex), Some((0.0, 0.0)));
    }

    #[test]
    fn validation_rejects_broken_routes() {
        let mut inst = tiny::tiny_family("fig4-triangle").unwrap();
        inst.vehicles[0].stops.swap(0, 1);
        assert!(inst.validate().is_err());
        let mut inst = tiny::tiny_family("fig4-triangle").unwrap();
        inst.energy.q_init = inst.energy.q_max + 1.0;
        assert!(inst.validate().is_err());
        let mut inst = tiny::tiny_family("fig4-triangle").unwrap();
        let last = inst.vehicles[0].stops.len() - 1;
        inst.vehicles[0].stops[last].latest = f64::INFINITY;
        assert!(inst.validate().is_err());
    }

    #[test]
    fn infinite_latest_serializes_as_null() {
        let s = RouteStop { vertex: 3, earliest: 1.0, latest: f64::INFINITY };
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("null"));
        let back: RouteStop = serde_json::from_str(&text).unwrap();
        assert_eq!(back.latest, f64::INFINITY);
    }
}
