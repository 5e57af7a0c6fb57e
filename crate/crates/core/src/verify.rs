//! One-shot report combining separation, the distance-value condition, the
//! pair count and the `n^2/4 + C n` bound.

use serde::{Deserialize, Serialize};

use crate::count::{count_pairs, CountMethod, PairCountReport};
use crate::error::{Error, Result};
use crate::geometry::{diameter, min_pairwise_distance, IntervalFamily, PointSet};
use crate::hypothesis::{check_hypothesis, HypothesisReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierReport {
    pub separated: bool,
    /// `null` in JSON when the set has a single point.
    pub min_distance: Option<f64>,
    pub hypothesis: HypothesisReport,
    pub count: PairCountReport,
    pub bound_constant: f64,
    pub bound_value: f64,
    pub within_bound: bool,
    pub diameter: f64,
}

/// Assembles a [`VerifierReport`]. The constant `c` is supplied by the
/// caller; nothing here asserts the bound, it is only evaluated.
pub fn verify_theorem(
    ps: &PointSet,
    iv: &IntervalFamily,
    delta: f64,
    c: f64,
) -> Result<VerifierReport> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::precondition(format!(
            "C must be finite and >= 0, got {c}"
        )));
    }
    let hypothesis = check_hypothesis(iv, delta)?;
    let (min_dist, separated) = min_pairwise_distance(ps);
    let count = count_pairs(ps, iv, CountMethod::Pruned);
    let n = ps.n() as f64;
    let bound_value = n * n / 4.0 + c * n;
    Ok(VerifierReport {
        separated,
        min_distance: min_dist.is_finite().then_some(min_dist),
        within_bound: count.total as f64 <= bound_value,
        hypothesis,
        count,
        bound_constant: c,
        bound_value,
        diameter: diameter(ps),
    })
}
