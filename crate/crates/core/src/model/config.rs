use serde::{Deserialize, Serialize};

use super::{Instance, StationRef};

/// Built state of every candidate station. Segment bits are grouped by their
/// owning dynamic station. Equality and hashing cover all three vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub stationary: Vec<bool>,
    pub inverters: Vec<bool>,
    pub segments: Vec<Vec<bool>>,
}

impl Configuration {
    pub fn empty(instance: &Instance) -> Self {
        Self {
            stationary: vec![false; instance.stationary.len()],
            inverters: vec![false; instance.dynamic.len()],
            segments: instance.dynamic.iter().map(|d| vec![false; d.segments.len()]).collect(),
        }
    }

    pub fn full(instance: &Instance) -> Self {
        Self {
            stationary: vec![true; instance.stationary.len()],
            inverters: vec![true; instance.dynamic.len()],
            segments: instance.dynamic.iter().map(|d| vec![true; d.segments.len()]).collect(),
        }
    }

    pub fn is_built(&self, s: StationRef) -> bool {
        match s {
            StationRef::Stationary(f) => self.stationary[f],
            StationRef::Dynamic(f) => self.inverters[f],
        }
    }

    pub fn built(&self) -> Vec<StationRef> {
        let stat = (0..self.stationary.len()).filter(|&f| self.stationary[f]).map(StationRef::Stationary);
        let dynamic = (0..self.inverters.len()).filter(|&f| self.inverters[f]).map(StationRef::Dynamic);
        stat.chain(dynamic).collect()
    }

    pub fn unbuilt(&self) -> Vec<StationRef> {
        let stat = (0..self.stationary.len()).filter(|&f| !self.stationary[f]).map(StationRef::Stationary);
        let dynamic = (0..self.inverters.len()).filter(|&f| !self.inverters[f]).map(StationRef::Dynamic);
        stat.chain(dynamic).collect()
    }

    /// Adds a station. Dynamic stations are added with every segment.
    pub fn add(&mut self, s: StationRef) {
        match s {
            StationRef::Stationary(f) => self.stationary[f] = true,
            StationRef::Dynamic(f) => {
                self.inverters[f] = true;
                self.segments[f].iter_mut().for_each(|z| *z = true);
            }
        }
    }

    pub fn remove(&mut self, s: StationRef) {
        match s {
            StationRef::Stationary(f) => self.stationary[f] = false,
            StationRef::Dynamic(f) => {
                self.inverters[f] = false;
                self.segments[f].iter_mut().for_each(|z| *z = false);
            }
        }
    }

    /// Keeps the first `r` segments of dynamic station `f`. With `r = 0` the
    /// inverter is cleared as well.
    pub fn set_prefix(&mut self, f: usize, r: usize) {
        for (t, z) in self.segments[f].iter_mut().enumerate() {
            *z = t < r;
        }
        self.inverters[f] = r > 0;
    }

    /// Number of built stationary stations plus built segments.
    pub fn size(&self) -> usize {
        self.stationary.iter().filter(|&&b| b).count()
            + self.segments.iter().flatten().filter(|&&b| b).count()
    }

    /// Every built item of `self` is also built in `other`.
    pub fn is_subset_of(&self, other: &Configuration) -> bool {
        let sub = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
        sub(&self.stationary, &other.stationary)
            && sub(&self.inverters, &other.inverters)
            && self.segments.iter().zip(&other.segments).all(|(a, b)| sub(a, b))
    }

    /// Segment bits require the inverter of their station.
    pub fn is_consistent(&self) -> bool {
        self.segments.iter().zip(&self.inverters).all(|(zs, &w)| w || zs.iter().all(|&z| !z))
    }

    pub fn infrastructure_cost(&self, instance: &Instance) -> f64 {
        let mut cost = 0.0;
        for (f, s) in instance.stationary.iter().enumerate() {
            if self.stationary[f] {
                cost += s.cost;
            }
        }
        for (f, d) in instance.dynamic.iter().enumerate() {
            if self.inverters[f] {
                cost += d.cost;
            }
            for (t, seg) in d.segments.iter().enumerate() {
                if self.segments[f][t] {
                    cost += seg.cost;
                }
            }
        }
        cost
    }

    /// Compact text form, e.g. `y=10 w=1 z=[110]`.
    pub fn to_bits(&self) -> String {
        let b = |v: &[bool]| v.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
        let z: Vec<String> = self.segments.iter().map(|s| b(s)).collect();
        format!("y={} w={} z=[{}]", b(&self.stationary), b(&self.inverters), z.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::tiny;

    #[test]
    fn infrastructure_cost_sums_built_items() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let mut c = Configuration::empty(&inst);
        assert_eq!(c.infrastructure_cost(&inst), 0.0);
        c.add(StationRef::Stationary(0));
        assert_eq!(c.infrastructure_cost(&inst), inst.stationary[0].cost);
        c.add(StationRef::Dynamic(0));
        let d = &inst.dynamic[0];
        let expected = inst.stationary[0].cost + d.cost + d.segments.iter().map(|s| s.cost).sum::<f64>();
        assert!((c.infrastructure_cost(&inst) - expected).abs() < 1e-12);
    }

    #[test]
    fn prefix_and_subset() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let full = Configuration::full(&inst);
        let mut c = full.clone();
        c.set_prefix(0, 1);
        assert!(c.is_subset_of(&full));
        assert!(!full.is_subset_of(&c));
        assert!(c.is_consistent());
        c.set_prefix(0, 0);
        assert!(!c.inverters[0]);
        let mut broken = Configuration::empty(&inst);
        broken.segments[0][0] = true;
        assert!(!broken.is_consistent());
    }
}
