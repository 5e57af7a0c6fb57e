//! Planar points, point sets and interval families.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean distance.
    ///
    /// Every counting path in the crate goes through this function, so two
    /// routes that look at the same pair always see the same bits.
    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        (dx * dx + dy * dy).sqrt()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        Ok(Point { x, y })
    }
}

/// A non-empty, ordered list of finite planar points. Ids are 0-based
/// positions in the list.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("point set must contain at least one point"));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!(
                "point {i} has a non-finite coordinate"
            )));
        }
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn get(&self, id: usize) -> Point {
        self.points[id]
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Axis-aligned bounding box as `(min, max)` corners.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for p in &self.points[1..] {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    /// Applies `p -> R(theta) p + (tx, ty)` to every point.
    pub fn rigid_motion(&self, theta: f64, tx: f64, ty: f64) -> PointSet {
        let (s, c) = theta.sin_cos();
        let points = self
            .points
            .iter()
            .map(|p| Point::new(c * p.x - s * p.y + tx, s * p.x + c * p.y + ty))
            .collect();
        PointSet { points }
    }
}

/// Serialized form: `{"dim": 2, "points": [[x, y], ...]}`.
#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetRepr {
            dim: 2,
            points: self.points.iter().map(|p| vec![p.x, p.y]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PointSetRepr::deserialize(d)?;
        PointSet::try_from_repr(repr).map_err(serde::de::Error::custom)
    }
}

impl PointSet {
    fn try_from_repr(repr: PointSetRepr) -> Result<Self> {
        if repr.dim != 2 {
            return Err(Error::UnsupportedDimension(repr.dim));
        }
        let mut points = Vec::with_capacity(repr.points.len());
        for row in &repr.points {
            match row.as_slice() {
                [x, y] => points.push(Point::new(*x, *y)),
                other => return Err(Error::UnsupportedDimension(other.len())),
            }
        }
        PointSet::new(points)
    }

    /// Parses the JSON point-set format, keeping the error kind so callers
    /// can tell malformed input from an unsupported dimension.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let repr: PointSetRepr = serde_json::from_str(text)?;
        Self::try_from_repr(repr)
    }
}

/// Sorted distance values `t[0] < t[1] < ... < t[k-1]`, `t[0] >= 1`, sharing
/// a common width `alpha`. Interval `l` (1-based) is `[t[l-1], t[l-1] + alpha]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalFamily {
    alpha: f64,
    t: Vec<f64>,
}

impl IntervalFamily {
    pub fn new(t: Vec<f64>, alpha: f64) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::invalid("interval family needs at least one value"));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!(
                "alpha must be finite and > 0, got {alpha}"
            )));
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("interval values must be finite"));
        }
        if t[0] < 1.0 {
            return Err(Error::invalid(format!("t[0] must be >= 1, got {}", t[0])));
        }
        if let Some(w) = t.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "interval values must be strictly increasing ({} >= {})",
                w[0], w[1]
            )));
        }
        Ok(IntervalFamily { alpha, t })
    }

    pub fn single(t: f64, alpha: f64) -> Result<Self> {
        Self::new(vec![t], alpha)
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.t.len()
    }

    /// Smallest lower endpoint.
    pub fn lowest(&self) -> f64 {
        self.t[0]
    }

    /// Largest upper endpoint.
    pub fn highest(&self) -> f64 {
        self.t[self.t.len() - 1] + self.alpha
    }

    /// 1-based index of the smallest interval containing `d` (closed
    /// endpoints), or `None`.
    #[inline]
    pub fn label(&self, d: f64) -> Option<usize> {
        // Upper endpoints are increasing, so the first interval whose upper
        // end reaches `d` is the only candidate for the smallest label.
        let alpha = self.alpha;
        let idx = self.t.partition_point(|&t| t + alpha < d);
        (idx < self.t.len() && self.t[idx] <= d).then_some(idx + 1)
    }

    /// Whether interval `l` (1-based) contains `d`.
    pub fn contains(&self, l: usize, d: f64) -> bool {
        let t = self.t[l - 1];
        t <= d && d <= t + self.alpha
    }
}

#[derive(Deserialize)]
struct IntervalFamilyRepr {
    alpha: f64,
    t: Vec<f64>,
}

impl<'de> Deserialize<'de> for IntervalFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = IntervalFamilyRepr::deserialize(d)?;
        IntervalFamily::new(repr.t, repr.alpha).map_err(serde::de::Error::custom)
    }
}

/// Minimum pairwise distance and whether it is at least 1.
///
/// A single point has no pairs: `(inf, true)`.
pub fn min_pairwise_distance(ps: &PointSet) -> (f64, bool) {
    let pts = ps.points();
    let mut best = f64::INFINITY;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.min(p.dist(q));
        }
    }
    (best, best >= 1.0)
}

/// Maximum pairwise distance, 0 for a single point.
pub fn diameter(ps: &PointSet) -> f64 {
    let pts = ps.points();
    let mut best = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(p.dist(q));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> PointSet {
        let mut v = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                v.push((x as f64, y as f64));
            }
        }
        PointSet::from_coords(&v).unwrap()
    }

    #[test]
    fn single_point_is_separated() {
        let ps = PointSet::from_coords(&[(0.0, 0.0)]).unwrap();
        assert_eq!(min_pairwise_distance(&ps), (f64::INFINITY, true));
        assert_eq!(diameter(&ps), 0.0);
    }

    #[test]
    fn close_pair_not_separated() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (0.5, 0.0)]).unwrap();
        assert_eq!(min_pairwise_distance(&ps), (0.5, false));
    }

    #[test]
    fn unit_grid() {
        let ps = grid3();
        assert_eq!(min_pairwise_distance(&ps), (1.0, true));
        assert_eq!(diameter(&ps), 8f64.sqrt());
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(PointSet::new(vec![]).is_err());
        assert!(PointSet::from_coords(&[(f64::NAN, 0.0)]).is_err());
        assert!(PointSet::from_coords(&[(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn interval_family_validation() {
        assert!(IntervalFamily::new(vec![], 1.0).is_err());
        assert!(IntervalFamily::new(vec![0.5], 1.0).is_err());
        assert!(IntervalFamily::new(vec![1.0, 1.0], 1.0).is_err());
        assert!(IntervalFamily::new(vec![2.0, 1.5], 1.0).is_err());
        assert!(IntervalFamily::new(vec![1.0], 0.0).is_err());
        assert!(IntervalFamily::new(vec![1.0, 3.0], 0.1).is_ok());
    }

    #[test]
    fn label_prefers_smallest_and_uses_closed_ends() {
        let iv = IntervalFamily::new(vec![1.0, 1.5], 1.0).unwrap();
        assert_eq!(iv.label(1.6), Some(1));
        assert_eq!(iv.label(1.0), Some(1));
        assert_eq!(iv.label(2.0), Some(1));
        assert_eq!(iv.label(2.25), Some(2));
        assert_eq!(iv.label(2.5), Some(2));
        assert_eq!(iv.label(2.51), None);
        assert_eq!(iv.label(0.99), None);

        let gap = IntervalFamily::new(vec![1.0, 5.0], 1.0).unwrap();
        assert_eq!(gap.label(3.0), None);
    }

    #[test]
    fn json_shape() {
        let ps = PointSet::from_coords(&[(0.1, 2.0), (3.0, -4.5)]).unwrap();
        let text = serde_json::to_string(&ps).unwrap();
        assert_eq!(text, r#"{"dim":2,"points":[[0.1,2.0],[3.0,-4.5]]}"#);
        assert_eq!(PointSet::from_json_str(&text).unwrap(), ps);

        let iv = IntervalFamily::new(vec![1.0, 3.0], 0.5).unwrap();
        let text = serde_json::to_string(&iv).unwrap();
        assert_eq!(text, r#"{"alpha":0.5,"t":[1.0,3.0]}"#);
        let back: IntervalFamily = serde_json::from_str(&text).unwrap();
        assert_eq!(back, iv);
    }

    #[test]
    fn json_dimension_errors() {
        let err = PointSet::from_json_str(r#"{"dim":3,"points":[[0,0,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDimension(3)));
        let err = PointSet::from_json_str(r#"{"dim":2,"points":[[0,0,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDimension(3)));
        let err = PointSet::from_json_str(r#"{"dim":2,"points":[]}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(serde_json::from_str::<IntervalFamily>(r#"{"alpha":1,"t":[]}"#).is_err());
    }
}
