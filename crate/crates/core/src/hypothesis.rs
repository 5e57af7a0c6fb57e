//! The distance-value condition under which the `n^2/4 + C n` bound holds:
//! for every `l1 <= l2 < l3`, `t[l3]` must avoid
//! `[(1 - delta)(t[l1] + t[l2]), t[l1] + t[l2] + 2 alpha]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::IntervalFamily;

/// One triple `(l1, l2, l3)` (1-based) whose `t[l3]` lands in the forbidden
/// interval built from `t[l1] + t[l2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
    pub forbidden_low: f64,
    pub forbidden_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub delta: f64,
    pub alpha: f64,
    pub holds: bool,
    pub violations: Vec<Violation>,
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "delta must lie in (0, 1), got {delta}"
        )))
    }
}

pub fn check_hypothesis(iv: &IntervalFamily, delta: f64) -> Result<HypothesisReport> {
    check_delta(delta)?;
    let t = iv.t();
    let alpha = iv.alpha();
    let k = t.len();
    let mut violations = Vec::new();
    for l1 in 0..k {
        for l2 in l1..k {
            let sum = t[l1] + t[l2];
            let forbidden_low = (1.0 - delta) * sum;
            let forbidden_high = sum + 2.0 * alpha;
            for l3 in l2 + 1..k {
                if forbidden_low <= t[l3] && t[l3] <= forbidden_high {
                    violations.push(Violation {
                        l1: l1 + 1,
                        l2: l2 + 1,
                        l3: l3 + 1,
                        forbidden_low,
                        forbidden_high,
                    });
                }
            }
        }
    }
    Ok(HypothesisReport {
        delta,
        alpha,
        holds: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_holds_vacuously() {
        let iv = IntervalFamily::single(7.0, 1.0).unwrap();
        let r = check_hypothesis(&iv, 0.5).unwrap();
        assert!(r.holds);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn powers_of_three_hold() {
        let iv = IntervalFamily::new(vec![1.0, 3.0, 9.0], 0.1).unwrap();
        let r = check_hypothesis(&iv, 0.1).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn arithmetic_progression_violates() {
        let iv = IntervalFamily::new(vec![10.0, 20.0, 30.0], 1.0).unwrap();
        let r = check_hypothesis(&iv, 0.1).unwrap();
        assert!(!r.holds);
        let triples: Vec<_> = r.violations.iter().map(|v| (v.l1, v.l2, v.l3)).collect();
        assert_eq!(triples, vec![(1, 1, 2), (1, 2, 3)]);
        let v = &r.violations[1];
        assert!((v.forbidden_low - 27.0).abs() < 1e-12);
        assert_eq!(v.forbidden_high, 32.0);
        let v = &r.violations[0];
        assert_eq!((v.forbidden_low, v.forbidden_high), (18.0, 22.0));
    }

    #[test]
    fn endpoints_are_closed() {
        // t3 = t1 + t2 + 2 alpha exactly.
        let iv = IntervalFamily::new(vec![1.0, 2.0, 5.0], 1.0).unwrap();
        let r = check_hypothesis(&iv, 0.5).unwrap();
        assert!(r.violations.iter().any(|v| (v.l1, v.l2, v.l3) == (1, 2, 3)));
    }

    #[test]
    fn delta_out_of_range() {
        let iv = IntervalFamily::single(1.0, 1.0).unwrap();
        for d in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(check_hypothesis(&iv, d).is_err());
        }
    }
}
