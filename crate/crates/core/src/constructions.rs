//! Column constructions with exact predicted counts, and a seeded generator
//! of random separated sets.
//!
//! Every column construction stacks points at unit vertical spacing,
//! `(x, 1), (x, 2), ..., (x, h)`, above a few anchor abscissae. Whenever two
//! columns sit at horizontal offset `d` and the tallest column has height
//! `h`, a cross pair has distance `sqrt(d^2 + dv^2)` with `dv <= h - 1`, and
//! `sqrt(d^2 + dv^2) <= d + w` follows from `dv^2 <= 2 d w`. Each generator
//! enforces the corresponding threshold on its spacing parameter, so every
//! predicted count is exact rather than asymptotic.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::count::{count_pairs, CountMethod};
use crate::error::{Error, Result};
use crate::geometry::{min_pairwise_distance, IntervalFamily, Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionName {
    TwoColumn,
    Remark2,
    Emp1,
    Problem3,
}

impl fmt::Display for ConstructionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstructionName::TwoColumn => "two-column",
            ConstructionName::Remark2 => "remark2",
            ConstructionName::Emp1 => "emp1",
            ConstructionName::Problem3 => "problem3",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionOutput {
    pub ps: PointSet,
    pub iv: IntervalFamily,
    pub predicted_count: u64,
    pub name: ConstructionName,
    /// Generator parameters, including the column heights.
    pub params: Value,
}

impl ConstructionOutput {
    /// The `{name, params, predicted_count}` record written next to the
    /// point and interval files.
    pub fn sidecar(&self) -> Value {
        json!({
            "name": self.name,
            "params": self.params,
            "predicted_count": self.predicted_count,
        })
    }

    fn checked(self) -> Result<Self> {
        let (_, separated) = min_pairwise_distance(&self.ps);
        if !separated {
            return Err(Error::precondition(format!(
                "{} output is not separated",
                self.name
            )));
        }
        let counted = count_pairs(&self.ps, &self.iv, CountMethod::Pruned).total;
        if counted != self.predicted_count {
            return Err(Error::SelfCheck {
                name: self.name.to_string(),
                predicted: self.predicted_count,
                counted,
            });
        }
        Ok(self)
    }
}

/// Splits `n` into `parts` sizes differing by at most one, larger first.
pub fn balanced_split(n: usize, parts: usize) -> Vec<usize> {
    let base = n / parts;
    let extra = n % parts;
    (0..parts).map(|i| base + usize::from(i < extra)).collect()
}

fn columns(anchors: &[f64], heights: &[usize]) -> Result<PointSet> {
    let mut pts = Vec::with_capacity(heights.iter().sum());
    for (&x, &h) in anchors.iter().zip(heights) {
        pts.extend((1..=h).map(|v| Point::new(x, v as f64)));
    }
    PointSet::new(pts)
}

fn cross_pairs(heights: &[usize]) -> u64 {
    let mut total = 0u64;
    for (i, &a) in heights.iter().enumerate() {
        for &b in &heights[i + 1..] {
            total += (a * b) as u64;
        }
    }
    total
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::precondition(format!("{name} must be finite")))
    }
}

/// Two columns `{(0, v) : v <= ceil(n/2)}` and `{(t, v) : v <= floor(n/2)}`
/// with `t_l = 3^(l-1)` for `l < k`, `t_k = t` and width `eps`.
///
/// Every cross pair lands in the last interval, and within a column the
/// distances `3^(l-1)` land in the smaller ones, which gives
/// `ceil(n/2) floor(n/2) + sum_l [ (ceil(n/2) - 3^(l-1))^+ + (floor(n/2) - 3^(l-1))^+ ]`.
pub fn two_column(n: usize, k: usize, t: f64, eps: f64) -> Result<ConstructionOutput> {
    if n < 2 {
        return Err(Error::precondition(format!(
            "two-column needs n >= 2, got {n}"
        )));
    }
    if k < 1 {
        return Err(Error::precondition("two-column needs k >= 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::precondition(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    require_finite("t", t)?;
    let heights = balanced_split(n, 2);
    let h = (heights[0] - 1) as f64;
    let power = 3f64.powi(k as i32 - 1);
    let threshold = power.max(h * h / (2.0 * eps));
    if t < threshold {
        return Err(Error::precondition(format!(
            "t = {t} is below the two-column threshold max(3^(k-1), (ceil(n/2)-1)^2/(2 eps)) = {threshold}"
        )));
    }
    if t <= h {
        return Err(Error::precondition(format!(
            "t = {t} must exceed the column height span {h}"
        )));
    }

    let mut values: Vec<f64> = (0..k - 1).map(|l| 3f64.powi(l as i32)).collect();
    values.push(t);
    let iv = IntervalFamily::new(values, eps)?;

    let mut predicted = cross_pairs(&heights);
    for l in 0..k.saturating_sub(1) {
        let step = 3usize.pow(l as u32);
        predicted += heights
            .iter()
            .map(|&c| c.saturating_sub(step) as u64)
            .sum::<u64>();
    }

    ConstructionOutput {
        ps: columns(&[0.0, t], &heights)?,
        iv,
        predicted_count: predicted,
        name: ConstructionName::TwoColumn,
        params: json!({ "n": n, "k": k, "t": t, "eps": eps, "column_heights": heights }),
    }
    .checked()
}

/// Three columns at `x = 0, t1, t1 + t2` with intervals at `t1`, `t2` and
/// `t1 + t2`, width 1. The distance values violate the additivity condition
/// on purpose; all `n1 n2 + n2 n3 + n1 n3` cross pairs qualify.
///
/// When `t1 == t2` the family has the two distinct values `t1 < 2 t1`.
pub fn remark2_three_column(n: usize, t1: f64, t2: f64) -> Result<ConstructionOutput> {
    if n < 3 {
        return Err(Error::precondition(format!(
            "remark2 needs n >= 3, got {n}"
        )));
    }
    require_finite("t1", t1)?;
    require_finite("t2", t2)?;
    let heights = balanced_split(n, 3);
    let h = (heights[0] - 1) as f64;
    let threshold = h * h / 2.0 + 1.0;
    if t1 < threshold || t2 < threshold {
        return Err(Error::precondition(format!(
            "t1 = {t1}, t2 = {t2} must both be >= (ceil(n/3)-1)^2/2 + 1 = {threshold}"
        )));
    }
    let mut values = vec![t1, t2, t1 + t2];
    values.sort_by(f64::total_cmp);
    values.dedup();
    let iv = IntervalFamily::new(values, 1.0)?;

    ConstructionOutput {
        ps: columns(&[0.0, t1, t1 + t2], &heights)?,
        iv,
        predicted_count: cross_pairs(&heights),
        name: ConstructionName::Remark2,
        params: json!({ "n": n, "t1": t1, "t2": t2, "column_heights": heights }),
    }
    .checked()
}

/// `k + 1` columns at `x = 0, t, ..., k t` with intervals `[l t, l t + 1]`,
/// `l = 1..k`. Every cross pair qualifies.
pub fn emp1_chain(n: usize, k: usize, t: f64) -> Result<ConstructionOutput> {
    if k < 1 || n < k + 1 {
        return Err(Error::precondition(format!(
            "emp1 needs k >= 1 and n >= k + 1, got n = {n}, k = {k}"
        )));
    }
    require_finite("t", t)?;
    let heights = balanced_split(n, k + 1);
    let h = (heights[0] - 1) as f64;
    let threshold = h * h / 2.0 + 1.0;
    if t < threshold {
        return Err(Error::precondition(format!(
            "t = {t} is below (ceil(n/(k+1))-1)^2/2 + 1 = {threshold}"
        )));
    }
    let anchors: Vec<f64> = (0..=k).map(|m| m as f64 * t).collect();
    let iv = IntervalFamily::new((1..=k).map(|l| l as f64 * t).collect(), 1.0)?;

    ConstructionOutput {
        ps: columns(&anchors, &heights)?,
        iv,
        predicted_count: cross_pairs(&heights),
        name: ConstructionName::Emp1,
        params: json!({ "n": n, "k": k, "t": t, "column_heights": heights }),
    }
    .checked()
}

/// `k` columns at `x = t, 2t, ..., k t` with intervals `[1, 2]` and
/// `[l t, l t + 1]` for `l = 1..k-1`. Cross pairs all qualify, and inside a
/// column the distances 1 and 2 both fall in `[1, 2]`.
pub fn problem3_chain(n: usize, k: usize, t: f64) -> Result<ConstructionOutput> {
    if k < 2 || n < k {
        return Err(Error::precondition(format!(
            "problem3 needs n >= k >= 2, got n = {n}, k = {k}"
        )));
    }
    require_finite("t", t)?;
    let heights = balanced_split(n, k);
    let h = (heights[0] - 1) as f64;
    let threshold = h * h / 2.0 + 1.0;
    if t < threshold {
        return Err(Error::precondition(format!(
            "t = {t} is below (ceil(n/k)-1)^2/2 + 1 = {threshold}"
        )));
    }
    let anchors: Vec<f64> = (1..=k).map(|m| m as f64 * t).collect();
    let mut values = vec![1.0];
    values.extend((1..k).map(|l| l as f64 * t));
    let iv = IntervalFamily::new(values, 1.0).map_err(|e| {
        Error::precondition(format!("t = {t} gives an invalid interval family: {e}"))
    })?;

    let inside: u64 = heights
        .iter()
        .map(|&c| (c.saturating_sub(1) + c.saturating_sub(2)) as u64)
        .sum();

    ConstructionOutput {
        ps: columns(&anchors, &heights)?,
        iv,
        predicted_count: cross_pairs(&heights) + inside,
        name: ConstructionName::Problem3,
        params: json!({ "n": n, "k": k, "t": t, "column_heights": heights }),
    }
    .checked()
}

/// `n` points on a jittered `ceil(sqrt n)` grid of pitch
/// `max(2, box_side / ceil(sqrt n))`; each point moves uniformly inside a
/// disc of radius `(pitch - 1) / 2` around its cell centre, which keeps
/// neighbours at least 1 apart.
pub fn random_separated(n: usize, box_side: f64, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::precondition("random_separated needs n >= 1"));
    }
    let need = 2.0 * (n as f64).sqrt();
    if !(box_side.is_finite() && box_side >= need) {
        return Err(Error::precondition(format!(
            "box side {box_side} is below the feasibility bound 2 sqrt(n) = {need}"
        )));
    }
    let g = (n as f64).sqrt().ceil() as usize;
    let g = if g * g < n { g + 1 } else { g };
    let pitch = (box_side / g as f64).max(2.0);
    let radius = (pitch - 1.0) / 2.0;
    let mut rng = StdRng::seed_from_u64(seed);
    let pts = (0..n)
        .map(|i| {
            let (row, col) = (i / g, i % g);
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Point::new(
                (col as f64 + 0.5) * pitch + r * theta.cos(),
                (row as f64 + 0.5) * pitch + r * theta.sin(),
            )
        })
        .collect();
    PointSet::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent recount: all pairs, distance via `hypot`.
    fn oracle(out: &ConstructionOutput) -> u64 {
        let pts = out.ps.points();
        let mut c = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = (pts[i].x - pts[j].x).hypot(pts[i].y - pts[j].y);
                if out
                    .iv
                    .t()
                    .iter()
                    .any(|&t| t <= d && d <= t + out.iv.alpha())
                {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn two_column_small() {
        let out = two_column(4, 1, 100.0, 0.5).unwrap();
        assert_eq!(out.ps.n(), 4);
        assert_eq!(out.predicted_count, 4);
        assert_eq!(oracle(&out), 4);
    }

    #[test]
    fn two_column_predictions() {
        for (n, k, t, eps, want) in [
            (20, 2, 500.0, 0.1, 118),
            (20, 3, 500.0, 0.1, 132),
            (12, 2, 200.0, 0.4, 46),
            (8, 1, 50.0, 0.9, 16),
            (100, 2, 12500.0, 0.1, 2598),
        ] {
            let out = two_column(n, k, t, eps).unwrap();
            assert_eq!(out.predicted_count, want, "n={n} k={k}");
            assert_eq!(oracle(&out), want, "n={n} k={k}");
        }
    }

    #[test]
    fn two_column_threshold() {
        let err = two_column(20, 2, 10.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err}");
        // Smallest admissible t for n = 20, eps = 0.1 is 81 / 0.2.
        assert!(two_column(20, 2, 405.0, 0.1).is_ok());
        assert!(two_column(20, 2, 404.9, 0.1).is_err());
        // k = 1 with a two-point column: t = 1 would catch the in-column pair.
        assert!(two_column(4, 1, 1.0, 0.9).is_err());
        assert!(two_column(1, 1, 100.0, 0.5).is_err());
        assert!(two_column(4, 1, 100.0, 1.0).is_err());
    }

    #[test]
    fn remark2_predictions() {
        let out = remark2_three_column(30, 2000.0, 2000.0).unwrap();
        assert_eq!(out.predicted_count, 300);
        assert_eq!(oracle(&out), 300);
        assert_eq!(out.iv.t(), &[2000.0, 4000.0]);

        let out = remark2_three_column(3, 2000.0, 2000.0).unwrap();
        assert_eq!(out.predicted_count, 3);

        let out = remark2_three_column(30, 2000.0, 3000.0).unwrap();
        assert_eq!(out.predicted_count, 300);
        assert_eq!(out.iv.t(), &[2000.0, 3000.0, 5000.0]);
        assert_eq!(oracle(&out), 300);

        assert!(remark2_three_column(30, 40.0, 2000.0).is_err());
        assert!(remark2_three_column(2, 2000.0, 2000.0).is_err());
    }

    #[test]
    fn emp1_predictions() {
        for (n, k, want) in [(30, 2, 300), (3, 2, 3), (31, 2, 320)] {
            let out = emp1_chain(n, k, 2000.0).unwrap();
            assert_eq!(out.predicted_count, want);
            assert_eq!(oracle(&out), want);
        }
        let out = emp1_chain(31, 2, 2000.0).unwrap();
        assert_eq!(out.params["column_heights"], json!([11, 10, 10]));
        assert!(emp1_chain(30, 2, 10.0).is_err());
        assert!(emp1_chain(2, 2, 2000.0).is_err());
    }

    #[test]
    fn problem3_predictions() {
        for (n, k, want) in [(30, 3, 351), (2, 2, 1), (40, 2, 474)] {
            let out = problem3_chain(n, k, 2000.0).unwrap();
            assert_eq!(out.predicted_count, want, "n={n} k={k}");
            assert_eq!(oracle(&out), want, "n={n} k={k}");
        }
        assert!(problem3_chain(30, 3, 30.0).is_err());
        assert!(problem3_chain(30, 1, 2000.0).is_err());
        assert!(problem3_chain(2, 2, 1.0).is_err());
    }

    #[test]
    fn splits_are_balanced() {
        for n in 1..60 {
            for parts in 1..7 {
                let s = balanced_split(n, parts);
                assert_eq!(s.iter().sum::<usize>(), n);
                assert!(s.windows(2).all(|w| w[0] >= w[1] && w[0] - w[1] <= 1));
            }
        }
    }

    #[test]
    fn random_sets() {
        let ps = random_separated(1, 2.0, 3).unwrap();
        assert_eq!(ps.n(), 1);

        let a = random_separated(100, 40.0, 7).unwrap();
        assert_eq!(a.n(), 100);
        assert!(min_pairwise_distance(&a).0 >= 1.0);
        let b = random_separated(100, 40.0, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_separated(100, 40.0, 8).unwrap());

        assert!(random_separated(100, 19.0, 7).is_err());
        assert!(random_separated(0, 19.0, 7).is_err());
    }

    #[test]
    fn sidecar_shape() {
        let out = two_column(20, 2, 500.0, 0.1).unwrap();
        let s = out.sidecar();
        assert_eq!(s["name"], "two-column");
        assert_eq!(s["predicted_count"], 118);
        assert_eq!(s["params"]["column_heights"], json!([10, 10]));
    }
}
