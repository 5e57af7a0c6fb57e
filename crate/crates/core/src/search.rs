//! Simulated annealing over point positions, maximising the qualifying pair
//! count subject to separation.
//!
//! Moves relocate a single point: either a Gaussian jitter or, with
//! probability `teleport_probability`, a jump onto a qualifying annulus
//! around another point, next to another point, or anywhere in the bounding
//! box inflated by `2 t_k`. Moves that break separation are
//! rejected outright, so the objective is the plain pair count. Because a
//! move touches only the `n - 1` pairs incident to the moved point, the
//! count is updated incrementally and re-derived from scratch every
//! [`RECOUNT_PERIOD`] iterations.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::random_separated;
use crate::count::{count_pairs, incident_count, CountMethod};
use crate::error::{Error, Result};
use crate::geometry::{min_pairwise_distance, IntervalFamily, Point, PointSet};

/// Iterations between full recounts.
pub const RECOUNT_PERIOD: u64 = 1 << 14;

/// Number of trajectory samples kept per restart (plus the final state).
const TRAJECTORY_SAMPLES: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub iv: IntervalFamily,
    pub iterations: u64,
    pub seed: u64,
    pub initial_temperature: f64,
    pub cooling_factor: f64,
    pub jitter_sigma: f64,
    pub teleport_probability: f64,
    pub restarts: usize,
}

impl SearchConfig {
    /// Config with the default schedule: temperature `n / 4`, cooling
    /// `1 - 10 / iterations`, jitter 0.5, teleport 0.1, one restart.
    pub fn with_defaults(n: usize, iv: IntervalFamily, iterations: u64, seed: u64) -> Self {
        SearchConfig {
            n,
            iv,
            iterations,
            seed,
            initial_temperature: (n as f64 / 4.0).max(f64::MIN_POSITIVE),
            cooling_factor: default_cooling(iterations),
            jitter_sigma: 0.5,
            teleport_probability: 0.1,
            restarts: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::precondition(msg));
        if self.n == 0 {
            return bad("search needs n >= 1".into());
        }
        if !(self.initial_temperature.is_finite() && self.initial_temperature > 0.0) {
            return bad(format!(
                "initial_temperature must be > 0, got {}",
                self.initial_temperature
            ));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return bad(format!(
                "cooling_factor must lie in (0, 1), got {}",
                self.cooling_factor
            ));
        }
        if !(self.jitter_sigma.is_finite() && self.jitter_sigma > 0.0) {
            return bad(format!(
                "jitter_sigma must be > 0, got {}",
                self.jitter_sigma
            ));
        }
        if !(0.0..=1.0).contains(&self.teleport_probability) {
            return bad(format!(
                "teleport_probability must lie in [0, 1], got {}",
                self.teleport_probability
            ));
        }
        if self.restarts == 0 {
            return bad("restarts must be >= 1".into());
        }
        Ok(())
    }
}

/// `1 - 10 / iterations`, clamped to stay inside `(0, 1)` for short runs.
pub fn default_cooling(iterations: u64) -> f64 {
    if iterations <= 20 {
        0.5
    } else {
        1.0 - 10.0 / iterations as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub iteration: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_ps: PointSet,
    pub best_count: u64,
    pub trajectory: Vec<TrajectorySample>,
    pub accepted_moves: u64,
    pub rejected_moves: u64,
}

/// Side of the box used for random starting sets.
fn start_box(n: usize, iv: &IntervalFamily) -> f64 {
    (2.0 * (n as f64).sqrt()).max(2.0).max(iv.t()[iv.k() - 1])
}

pub fn anneal(config: &SearchConfig, initial: Option<&PointSet>) -> Result<SearchResult> {
    config.validate()?;
    if let Some(ps) = initial {
        if ps.n() != config.n {
            return Err(Error::precondition(format!(
                "initial set has {} points, config says {}",
                ps.n(),
                config.n
            )));
        }
        if !min_pairwise_distance(ps).1 {
            return Err(Error::precondition("initial set is not separated"));
        }
    }

    let runs: Vec<Result<RunOutcome>> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let seed = config.seed.wrapping_add(r as u64);
            let start = match initial {
                Some(ps) => ps.clone(),
                None => random_separated(config.n, start_box(config.n, &config.iv), seed)?,
            };
            Ok(run_once(config, start, seed, r as u64 * config.iterations))
        })
        .collect();

    let mut best: Option<RunOutcome> = None;
    let mut trajectory = Vec::new();
    let (mut accepted, mut rejected) = (0, 0);
    for run in runs {
        let mut run = run?;
        trajectory.append(&mut run.trajectory);
        accepted += run.accepted;
        rejected += run.rejected;
        // Strictly greater keeps the lowest restart index on ties.
        if best.as_ref().is_none_or(|b| run.best_count > b.best_count) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts >= 1");
    Ok(SearchResult {
        best_ps: PointSet::new(best.best_points)?,
        best_count: best.best_count,
        trajectory,
        accepted_moves: accepted,
        rejected_moves: rejected,
    })
}

struct RunOutcome {
    best_points: Vec<Point>,
    best_count: u64,
    trajectory: Vec<TrajectorySample>,
    accepted: u64,
    rejected: u64,
}

fn is_clear(points: &[Point], id: usize, at: Point) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(j, q)| j == id || at.dist(q) >= 1.0)
}

fn run_once(config: &SearchConfig, start: PointSet, seed: u64, offset: u64) -> RunOutcome {
    let iv = &config.iv;
    let mut rng = StdRng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, config.jitter_sigma).expect("validated sigma");
    let reach = 2.0 * iv.t()[iv.k() - 1];
    let n = config.n;

    let mut current = start.into_points();
    let mut count = full_count(&current, iv);
    let mut best_points = current.clone();
    let mut best_count = count;
    let mut temperature = config.initial_temperature;
    let (mut accepted, mut rejected) = (0u64, 0u64);
    let every = (config.iterations / TRAJECTORY_SAMPLES).max(1);
    let mut trajectory = vec![TrajectorySample {
        iteration: offset,
        count,
    }];

    for it in 1..=config.iterations {
        let id = rng.gen_range(0..n);
        let old = current[id];
        let proposal = if rng.gen::<f64>() < config.teleport_probability {
            teleport(&mut rng, &current, id, iv, reach)
        } else {
            Point::new(
                old.x + jitter.sample(&mut rng),
                old.y + jitter.sample(&mut rng),
            )
        };

        let mut take = false;
        let mut delta = 0i64;
        if is_clear(&current, id, proposal) {
            delta =
                incident_count(&current, id, proposal, iv) - incident_count(&current, id, old, iv);
            take = delta >= 0 || rng.gen::<f64>() < (delta as f64 / temperature).exp();
        }
        if take {
            current[id] = proposal;
            count = (count as i64 + delta) as u64;
            accepted += 1;
            debug_assert!(min_pairwise_distance(&PointSet::new(current.clone()).unwrap()).1);
            if count > best_count {
                best_count = count;
                best_points.clone_from(&current);
            }
        } else {
            rejected += 1;
        }
        temperature *= config.cooling_factor;

        if it % RECOUNT_PERIOD == 0 {
            let exact = full_count(&current, iv);
            debug_assert_eq!(exact, count, "incremental count drifted");
            count = exact;
        }
        if it % every == 0 || it == config.iterations {
            trajectory.push(TrajectorySample {
                iteration: offset + it,
                count,
            });
        }
    }

    RunOutcome {
        best_points,
        best_count,
        trajectory,
        accepted,
        rejected,
    }
}

/// Teleport target: on a random qualifying annulus around another point,
/// next to another point, or uniform in the inflated bounding box, with
/// equal odds.
fn teleport(
    rng: &mut StdRng,
    points: &[Point],
    id: usize,
    iv: &IntervalFamily,
    reach: f64,
) -> Point {
    let n = points.len();
    let choice = if n > 1 { rng.gen_range(0..3) } else { 2 };
    if choice < 2 {
        let mut anchor = rng.gen_range(0..n - 1);
        if anchor >= id {
            anchor += 1;
        }
        let r = if choice == 0 {
            let t = iv.t()[rng.gen_range(0..iv.k())];
            rng.gen_range(t..=t + iv.alpha())
        } else {
            rng.gen_range(1.0..=2.0)
        };
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let a = points[anchor];
        return Point::new(a.x + r * theta.cos(), a.y + r * theta.sin());
    }
    let (lo, hi) = bounds(points);
    Point::new(
        rng.gen_range(lo.x - reach..=hi.x + reach),
        rng.gen_range(lo.y - reach..=hi.y + reach),
    )
}

fn full_count(points: &[Point], iv: &IntervalFamily) -> u64 {
    let ps = PointSet::new(points.to_vec()).expect("search keeps points finite");
    count_pairs(&ps, iv, CountMethod::Pruned).total
}

fn bounds(points: &[Point]) -> (Point, Point) {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in &points[1..] {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// A single-point displacement that keeps separation and raises the count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImprovingMove {
    pub point: usize,
    pub dx: f64,
    pub dy: f64,
    pub old_count: u64,
    pub new_count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalOptReport {
    pub probes: u64,
    pub improving: Vec<ImprovingMove>,
}

impl LocalOptReport {
    pub fn is_locally_maximal(&self) -> bool {
        self.improving.is_empty()
    }
}

/// Samples `probes_per_point` displacements uniformly in the disc of radius
/// `probe_radius` around every point and reports those that keep the set
/// separated and strictly increase the count.
pub fn local_opt_check(
    ps: &PointSet,
    iv: &IntervalFamily,
    probe_radius: f64,
    probes_per_point: usize,
    seed: u64,
) -> Result<LocalOptReport> {
    if !min_pairwise_distance(ps).1 {
        return Err(Error::precondition("local_opt_check needs a separated set"));
    }
    if !(probe_radius.is_finite() && probe_radius > 0.0) {
        return Err(Error::precondition(format!(
            "probe radius must be > 0, got {probe_radius}"
        )));
    }
    let base = count_pairs(ps, iv, CountMethod::Pruned).total;
    let pts = ps.points();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut improving = Vec::new();
    for (id, &p) in pts.iter().enumerate() {
        let here = incident_count(pts, id, p, iv);
        for _ in 0..probes_per_point {
            let r = probe_radius * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let (dx, dy) = (r * theta.cos(), r * theta.sin());
            let at = Point::new(p.x + dx, p.y + dy);
            if !is_clear(pts, id, at) {
                continue;
            }
            let gain = incident_count(pts, id, at, iv) - here;
            if gain > 0 {
                improving.push(ImprovingMove {
                    point: id,
                    dx,
                    dy,
                    old_count: base,
                    new_count: (base as i64 + gain) as u64,
                });
            }
        }
    }
    Ok(LocalOptReport {
        probes: (pts.len() * probes_per_point) as u64,
        improving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::two_column;

    fn cfg(n: usize, iv: IntervalFamily, iterations: u64, seed: u64) -> SearchConfig {
        SearchConfig::with_defaults(n, iv, iterations, seed)
    }

    #[test]
    fn zero_iterations_returns_initial() {
        let out = two_column(12, 2, 200.0, 0.4).unwrap();
        let c = cfg(12, out.iv.clone(), 0, 5);
        let r = anneal(&c, Some(&out.ps)).unwrap();
        assert_eq!(r.best_ps, out.ps);
        assert_eq!(r.best_count, out.predicted_count);
        assert_eq!(r.accepted_moves + r.rejected_moves, 0);
    }

    #[test]
    fn never_loses_the_initial_best() {
        let out = two_column(12, 2, 200.0, 0.4).unwrap();
        let c = cfg(12, out.iv.clone(), 3000, 11);
        let r = anneal(&c, Some(&out.ps)).unwrap();
        assert!(r.best_count >= 46);
        let recount = count_pairs(&r.best_ps, &out.iv, CountMethod::Brute).total;
        assert_eq!(recount, r.best_count);
        assert!(min_pairwise_distance(&r.best_ps).1);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let iv = IntervalFamily::single(5.0, 1.0).unwrap();
        let mut c = cfg(10, iv, 2000, 3);
        c.restarts = 3;
        let a = anneal(&c, None).unwrap();
        let b = anneal(&c, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.accepted_moves + a.rejected_moves, 6000);
    }

    #[test]
    fn recount_period_is_exercised() {
        let iv = IntervalFamily::single(3.0, 1.0).unwrap();
        let c = cfg(6, iv.clone(), RECOUNT_PERIOD + 10, 9);
        let r = anneal(&c, None).unwrap();
        assert_eq!(
            count_pairs(&r.best_ps, &iv, CountMethod::Brute).total,
            r.best_count
        );
        let last = r.trajectory.last().unwrap();
        assert_eq!(last.iteration, RECOUNT_PERIOD + 10);
    }

    #[test]
    fn rejects_bad_config() {
        let iv = IntervalFamily::single(3.0, 1.0).unwrap();
        let mut c = cfg(4, iv.clone(), 10, 0);
        c.cooling_factor = 1.0;
        assert!(anneal(&c, None).is_err());
        let mut c = cfg(4, iv.clone(), 10, 0);
        c.teleport_probability = 1.5;
        assert!(anneal(&c, None).is_err());
        let c = cfg(2, iv.clone(), 10, 0);
        let close = PointSet::from_coords(&[(0.0, 0.0), (0.5, 0.0)]).unwrap();
        assert!(anneal(&c, Some(&close)).is_err());
        let one = PointSet::from_coords(&[(0.0, 0.0)]).unwrap();
        assert!(anneal(&c, Some(&one)).is_err());
    }

    #[test]
    fn local_opt_single_point() {
        let iv = IntervalFamily::single(3.0, 1.0).unwrap();
        let ps = PointSet::from_coords(&[(0.0, 0.0)]).unwrap();
        assert!(local_opt_check(&ps, &iv, 1.0, 50, 1)
            .unwrap()
            .is_locally_maximal());
    }

    #[test]
    fn local_opt_pair_inside() {
        let iv = IntervalFamily::single(10.0, 1.0).unwrap();
        let ps = PointSet::from_coords(&[(0.0, 0.0), (10.5, 0.0)]).unwrap();
        let r = local_opt_check(&ps, &iv, 0.2, 100, 1).unwrap();
        assert!(r.is_locally_maximal());
        assert_eq!(r.probes, 200);
    }

    #[test]
    fn local_opt_pair_short_of_interval() {
        let iv = IntervalFamily::single(10.0, 1.0).unwrap();
        let ps = PointSet::from_coords(&[(0.0, 0.0), (9.6, 0.0)]).unwrap();
        let r = local_opt_check(&ps, &iv, 1.0, 100, 1).unwrap();
        assert!(!r.is_locally_maximal());
        for m in &r.improving {
            let mut pts = ps.points().to_vec();
            pts[m.point].x += m.dx;
            pts[m.point].y += m.dy;
            let moved = PointSet::new(pts).unwrap();
            assert_eq!(
                count_pairs(&moved, &iv, CountMethod::Brute).total,
                m.new_count
            );
            assert_eq!(m.new_count, 1);
        }
    }
}
