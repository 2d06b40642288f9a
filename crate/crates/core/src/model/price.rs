use serde::{Deserialize, Serialize};

use super::ModelError;

/// One breakpoint of a piecewise-constant tariff. The price holds on
/// `[start, next start)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricePoint {
    pub start: f64,
    pub price: f64,
}

/// Piecewise-constant recharge price over time with right-open intervals.
/// The last interval extends to infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PricePoint>", into = "Vec<PricePoint>")]
pub struct PriceCurve {
    points: Vec<PricePoint>,
    prefix_min: Vec<f64>,
    suffix_min: Vec<f64>,
}

impl PriceCurve {
    pub fn new(points: Vec<PricePoint>) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::PriceCurve("no breakpoints".into()));
        }
        if points[0].start != 0.0 {
            return Err(ModelError::PriceCurve("first breakpoint must start at 0".into()));
        }
        for w in points.windows(2) {
            if !(w[1].start > w[0].start) {
                return Err(ModelError::PriceCurve(format!(
                    "breakpoints not strictly increasing at {}",
                    w[1].start
                )));
            }
        }
        for p in &points {
            if !p.start.is_finite() || !p.price.is_finite() || p.price < 0.0 {
                return Err(ModelError::PriceCurve(format!(
                    "invalid breakpoint ({}, {})",
                    p.start, p.price
                )));
            }
        }
        let mut prefix_min = Vec::with_capacity(points.len());
        let mut acc = f64::INFINITY;
        for p in &points {
            acc = acc.min(p.price);
            prefix_min.push(acc);
        }
        let mut suffix_min = vec![0.0; points.len()];
        acc = f64::INFINITY;
        for (i, p) in points.iter().enumerate().rev() {
            acc = acc.min(p.price);
            suffix_min[i] = acc;
        }
        Ok(Self { points, prefix_min, suffix_min })
    }

    pub fn constant(price: f64) -> Self {
        Self::new(vec![PricePoint { start: 0.0, price }]).expect("constant price must be finite and non-negative")
    }

    /// Builds a curve from `(start, price)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, ModelError> {
        Self::new(pairs.iter().map(|&(start, price)| PricePoint { start, price }).collect())
    }

    pub fn points(&self) -> &[PricePoint] {
        &self.points
    }

    pub fn is_constant(&self) -> bool {
        self.points.iter().all(|p| p.price == self.points[0].price)
    }

    /// Index of the interval containing `t`, assuming `t >= 0`.
    fn interval(&self, t: f64) -> usize {
        self.points.partition_point(|p| p.start <= t) - 1
    }

    /// Price of energy recharged at time `t`.
    pub fn price_at(&self, t: f64) -> Result<f64, ModelError> {
        if t.is_nan() || t < 0.0 {
            return Err(ModelError::TimeOutOfRange(t));
        }
        Ok(self.points[self.interval(t)].price)
    }

    pub fn min_price(&self) -> f64 {
        self.suffix_min[0]
    }

    /// Cheapest price available at any time `>= t`.
    pub fn min_from(&self, t: f64) -> f64 {
        if t.is_nan() || t <= 0.0 {
            return self.suffix_min[0];
        }
        self.suffix_min[self.interval(t)]
    }

    /// Cheapest price available at any time in `[0, t]`.
    pub fn min_until(&self, t: f64) -> f64 {
        if t.is_nan() || t < 0.0 {
            return self.points[0].price;
        }
        self.prefix_min[self.interval(t)]
    }
}

impl TryFrom<Vec<PricePoint>> for PriceCurve {
    type Error = ModelError;

    fn try_from(points: Vec<PricePoint>) -> Result<Self, Self::Error> {
        Self::new(points)
    }
}

impl From<PriceCurve> for Vec<PricePoint> {
    fn from(curve: PriceCurve) -> Self {
        curve.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tariff() -> PriceCurve {
        PriceCurve::from_pairs(&[(0.0, 0.3), (8.0, 0.04), (13.0, 0.2067)]).unwrap()
    }

    #[test]
    fn breakpoints_are_right_open() {
        let c = tariff();
        assert_eq!(c.price_at(7.999).unwrap(), 0.3);
        assert_eq!(c.price_at(8.0).unwrap(), 0.04);
        assert_eq!(c.price_at(12.5).unwrap(), 0.04);
        assert_eq!(c.price_at(13.0).unwrap(), 0.2067);
        assert_eq!(c.price_at(1e6).unwrap(), 0.2067);
    }

    #[test]
    fn constant_curve_is_flat() {
        let c = PriceCurve::constant(0.05);
        for t in [0.0, 3.5, 100.0] {
            assert_eq!(c.price_at(t).unwrap(), 0.05);
        }
        assert!(c.is_constant());
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(matches!(tariff().price_at(-1.0), Err(ModelError::TimeOutOfRange(_))));
    }

    #[test]
    fn malformed_curves_are_rejected() {
        assert!(PriceCurve::from_pairs(&[]).is_err());
        assert!(PriceCurve::from_pairs(&[(1.0, 0.1)]).is_err());
        assert!(PriceCurve::from_pairs(&[(0.0, 0.1), (0.0, 0.2)]).is_err());
        assert!(PriceCurve::from_pairs(&[(0.0, -0.1)]).is_err());
    }

    #[test]
    fn range_minima() {
        let c = tariff();
        assert_eq!(c.min_price(), 0.04);
        assert_eq!(c.min_until(5.0), 0.3);
        assert_eq!(c.min_until(9.0), 0.04);
        assert_eq!(c.min_from(14.0), 0.2067);
        assert_eq!(c.min_from(2.0), 0.04);
    }

    #[test]
    fn serde_roundtrip() {
        let c = tariff();
        let text = serde_json::to_string(&c).unwrap();
        let back: PriceCurve = serde_json::from_str(&text).unwrap();
        assert_eq!(c, back);
        assert!(serde_json::from_str::<PriceCurve>("[]").is_err());
    }
}
