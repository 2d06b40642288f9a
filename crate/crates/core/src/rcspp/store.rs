use crate::TOL;

/// Explored labels of one vertex and direction, sorted by cost, with running
/// bounds over every cost prefix.
///
/// Entries are stored as `(cost, a, b)` with the convention that `x`
/// dominates `y` iff `x.cost <= y.cost && x.a >= y.a && x.b <= y.b`. Forward
/// labels map to `(cost, soc, time)`, backward labels to `(cost, -soc, -time)`.
#[derive(Debug, Clone, Default)]
pub struct DominanceStore {
    cost: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    ids: Vec<usize>,
    max_a: Vec<f64>,
    min_b: Vec<f64>,
}

impl DominanceStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost.is_empty()
    }

    pub fn insert(&mut self, cost: f64, a: f64, b: f64, id: usize) {
        let at = self.cost.partition_point(|&c| c <= cost);
        self.cost.insert(at, cost);
        self.a.insert(at, a);
        self.b.insert(at, b);
        self.ids.insert(at, id);
        self.max_a.insert(at, 0.0);
        self.min_b.insert(at, 0.0);
        for i in at..self.cost.len() {
            let (pa, pb) = if i == 0 { (f64::NEG_INFINITY, f64::INFINITY) } else { (self.max_a[i - 1], self.min_b[i - 1]) };
            self.max_a[i] = pa.max(self.a[i]);
            self.min_b[i] = pb.min(self.b[i]);
        }
    }

    /// Whether a stored entry dominates `(cost, a, b)`.
    pub fn is_dominated(&self, cost: f64, a: f64, b: f64) -> bool {
        let j = self.cost.partition_point(|&c| c <= cost);
        if j == 0 || self.max_a[j - 1] < a || self.min_b[j - 1] > b {
            return false;
        }
        (0..j).rev().any(|i| self.a[i] >= a && self.b[i] <= b)
    }

    /// Like [`Self::is_dominated`], but the dominating entry must match `a`.
    pub fn is_dominated_same_a(&self, cost: f64, a: f64, b: f64) -> bool {
        let j = self.cost.partition_point(|&c| c <= cost);
        if j == 0 || self.max_a[j - 1] < a || self.min_b[j - 1] > b {
            return false;
        }
        (0..j).rev().any(|i| (self.a[i] - a).abs() <= TOL && self.b[i] <= b)
    }

    /// Pairwise reference check without the prefix bounds.
    pub fn is_dominated_scan(&self, cost: f64, a: f64, b: f64) -> bool {
        (0..self.len()).any(|i| self.cost[i] <= cost && self.a[i] >= a && self.b[i] <= b)
    }

    /// Stored label ids in ascending cost.
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn prefix_bounds(&self) -> (&[f64], &[f64]) {
        (&self.max_a, &self.min_b)
    }
}
