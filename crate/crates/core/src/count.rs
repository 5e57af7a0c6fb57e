//! Exact counting of pairs whose distance falls in a family of intervals.
//!
//! Two routes are provided. [`CountMethod::Brute`] tests all `n(n-1)/2`
//! pairs. [`CountMethod::Pruned`] buckets points into square cells of side
//! at least `max(1, alpha)` (coarser for sparse sets) and classifies whole
//! cell pairs by the range of distances they can realise: pairs of cells
//! whose range misses every interval are
//! skipped, pairs whose range sits inside a single interval (and meets no
//! smaller-index interval) are added as a block, and the rest are tested
//! point by point. Both routes evaluate pair distances through
//! [`Point::dist`], so they agree bit for bit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{IntervalFamily, Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Brute,
    Pruned,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Brute => "brute",
            CountMethod::Pruned => "pruned",
        })
    }
}

impl std::str::FromStr for CountMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(CountMethod::Brute),
            "pruned" => Ok(CountMethod::Pruned),
            other => Err(format!(
                "unknown counting method `{other}` (expected brute|pruned)"
            )),
        }
    }
}

/// Number of qualifying unordered pairs, with a breakdown by smallest label.
/// `per_interval[l - 1]` counts the pairs labelled `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCountReport {
    pub total: u64,
    pub per_interval: Vec<u64>,
    pub method: CountMethod,
}

/// A qualifying pair `i < j` and its smallest interval label (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabeledPair {
    pub i: usize,
    pub j: usize,
    pub label: usize,
}

pub fn count_pairs(ps: &PointSet, iv: &IntervalFamily, method: CountMethod) -> PairCountReport {
    let mut per_interval = vec![0u64; iv.k()];
    match method {
        CountMethod::Brute => brute_scan(ps, iv, |_, _, l| per_interval[l - 1] += 1),
        CountMethod::Pruned => {
            let mut blocks = vec![0u64; iv.k()];
            CellGrid::new(ps, iv.alpha()).scan(
                ps,
                iv,
                |_, _, l| per_interval[l - 1] += 1,
                |a, b, l| blocks[l - 1] += (a.len() * b.len()) as u64,
            );
            for (c, b) in per_interval.iter_mut().zip(blocks) {
                *c += b;
            }
        }
    }
    PairCountReport {
        total: per_interval.iter().sum(),
        per_interval,
        method,
    }
}

/// Every qualifying pair with its smallest label, sorted by `(i, j)`.
pub fn label_pairs(ps: &PointSet, iv: &IntervalFamily) -> Vec<LabeledPair> {
    let mut out = Vec::new();
    let mut push = |i: usize, j: usize, label: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        out.push(LabeledPair { i, j, label });
    };
    let mut full = Vec::new();
    CellGrid::new(ps, iv.alpha()).scan(ps, iv, &mut push, |a, b, l| {
        full.push((a.to_vec(), b.to_vec(), l))
    });
    for (a, b, l) in full {
        for &i in &a {
            for &j in &b {
                push(i, j, l);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of qualifying pairs incident to `id`, with `id` placed at `at`.
/// Used by the search for incremental updates.
pub(crate) fn incident_count(points: &[Point], id: usize, at: Point, iv: &IntervalFamily) -> i64 {
    points
        .iter()
        .enumerate()
        .filter(|&(j, q)| j != id && iv.label(at.dist(q)).is_some())
        .count() as i64
}

fn brute_scan(ps: &PointSet, iv: &IntervalFamily, mut on_pair: impl FnMut(usize, usize, usize)) {
    let pts = ps.points();
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate().skip(i + 1) {
            if let Some(l) = iv.label(p.dist(q)) {
                on_pair(i, j, l);
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    cx: i64,
    cy: i64,
    start: usize,
    end: usize,
    lo: Point,
    hi: Point,
}

#[derive(Clone, Copy, Debug)]
struct Row {
    cy: i64,
    start: usize,
    end: usize,
}

/// Squared thresholds for one interval `[t, t + alpha]`, widened (for
/// skipping) or narrowed (for block acceptance) by the grid slack.
struct Band {
    below_sq: f64,
    above_sq: f64,
    full_lo_sq: f64,
    full_hi_sq: f64,
}

enum Block {
    Skip,
    Full(usize),
    Test,
}

/// Points bucketed into a uniform grid, stored row by row.
struct CellGrid {
    side: f64,
    /// Point ids grouped by cell.
    order: Vec<usize>,
    /// Cells sorted by `(cy, cx)`.
    cells: Vec<Cell>,
    rows: Vec<Row>,
    /// Absolute tolerance covering rounding in cell assignment and in the
    /// cell-pair distance bounds.
    slack: f64,
}

impl CellGrid {
    fn new(ps: &PointSet, alpha: f64) -> Self {
        let (origin, top) = ps.bounding_box();
        // Never finer than max(1, alpha); coarser when the set is sparse so
        // that cells hold about one point each.
        let area = (top.x - origin.x) * (top.y - origin.y);
        let side = alpha.max(1.0).max((area / ps.n() as f64).sqrt());
        let key = |p: &Point| {
            (
                ((p.y - origin.y) / side).floor() as i64,
                ((p.x - origin.x) / side).floor() as i64,
            )
        };
        let mut keyed: Vec<((i64, i64), usize)> = ps
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| (key(p), i))
            .collect();
        keyed.sort_unstable();

        let pts = ps.points();
        let mut order = Vec::with_capacity(keyed.len());
        let mut cells: Vec<Cell> = Vec::new();
        for &((cy, cx), id) in &keyed {
            let p = pts[id];
            match cells.last_mut() {
                Some(c) if c.cx == cx && c.cy == cy => {
                    c.end += 1;
                    c.lo.x = c.lo.x.min(p.x);
                    c.lo.y = c.lo.y.min(p.y);
                    c.hi.x = c.hi.x.max(p.x);
                    c.hi.y = c.hi.y.max(p.y);
                }
                _ => cells.push(Cell {
                    cx,
                    cy,
                    start: order.len(),
                    end: order.len() + 1,
                    lo: p,
                    hi: p,
                }),
            }
            order.push(id);
        }

        let mut rows: Vec<Row> = Vec::new();
        for (ci, c) in cells.iter().enumerate() {
            match rows.last_mut() {
                Some(r) if r.cy == c.cy => r.end = ci + 1,
                _ => rows.push(Row {
                    cy: c.cy,
                    start: ci,
                    end: ci + 1,
                }),
            }
        }

        let scale = origin
            .x
            .abs()
            .max(origin.y.abs())
            .max(top.x.abs())
            .max(top.y.abs());
        CellGrid {
            side,
            order,
            cells,
            rows,
            slack: 1e-9 * (1.0 + scale),
        }
    }

    fn members(&self, c: &Cell) -> &[usize] {
        &self.order[c.start..c.end]
    }

    /// Classifies a pair of cells by the distance range of their occupied
    /// bounding boxes, compared in squared form against widened thresholds.
    fn classify(a: &Cell, b: &Cell, bands: &[Band]) -> Block {
        let gap_x = (b.lo.x - a.hi.x).max(a.lo.x - b.hi.x).max(0.0);
        let gap_y = (b.lo.y - a.hi.y).max(a.lo.y - b.hi.y).max(0.0);
        let span_x = (b.hi.x - a.lo.x).max(a.hi.x - b.lo.x);
        let span_y = (b.hi.y - a.lo.y).max(a.hi.y - b.lo.y);
        let min_sq = gap_x * gap_x + gap_y * gap_y;
        let max_sq = span_x * span_x + span_y * span_y;
        for (idx, band) in bands.iter().enumerate() {
            if min_sq > band.above_sq {
                continue;
            }
            if max_sq < band.below_sq {
                return Block::Skip;
            }
            return if band.full_lo_sq <= min_sq && max_sq <= band.full_hi_sq {
                Block::Full(idx + 1)
            } else {
                Block::Test
            };
        }
        Block::Skip
    }

    /// Visits every qualifying pair exactly once, either individually via
    /// `on_pair(i, j, label)` or as a block via `on_full(ids_a, ids_b, label)`.
    fn scan(
        &self,
        ps: &PointSet,
        iv: &IntervalFamily,
        mut on_pair: impl FnMut(usize, usize, usize),
        mut on_full: impl FnMut(&[usize], &[usize], usize),
    ) {
        let pts = ps.points();
        let side = self.side;
        let slack = self.slack + 1e-12 * iv.highest();
        let lo = (iv.lowest() - slack).max(0.0);
        let hi = iv.highest() + slack;
        let bands: Vec<Band> = iv
            .t()
            .iter()
            .map(|&t| {
                let top = t + iv.alpha();
                let sq = |v: f64| v.max(0.0) * v.max(0.0);
                Band {
                    below_sq: sq(t - slack),
                    above_sq: sq(top + slack),
                    full_lo_sq: sq(t + slack),
                    full_hi_sq: sq(top - slack),
                }
            })
            .collect();

        let mut test = |ia: &[usize], ib: &[usize], same: bool| {
            for (x, &i) in ia.iter().enumerate() {
                let rest = if same { &ib[x + 1..] } else { ib };
                for &j in rest {
                    if let Some(l) = iv.label(pts[i].dist(&pts[j])) {
                        on_pair(i, j, l);
                    }
                }
            }
        };

        for row in &self.rows {
            for ca in &self.cells[row.start..row.end] {
                let ids = self.members(ca);
                if ids.len() > 1 {
                    test(ids, ids, true);
                }
            }
        }

        // Row pairs at vertical cell offset dy >= 0. For a fixed dy the window
        // of admissible column offsets is fixed, so it slides monotonically
        // along row A and two cursors into row B suffice.
        for (ri, row_a) in self.rows.iter().enumerate() {
            let cells_a = &self.cells[row_a.start..row_a.end];
            for row_b in &self.rows[ri..] {
                let dy = row_b.cy - row_a.cy;
                let gy_min = (dy - 1).max(0) as f64 * side;
                if gy_min > hi {
                    break;
                }
                let gy_max = (dy + 1) as f64 * side;
                // Widest column offset whose closest approach stays within `hi`.
                let d_out = ((hi * hi - gy_min * gy_min).max(0.0).sqrt() / side).floor() as i64 + 1;
                // Narrowest column offset whose farthest reach gets to `lo`.
                let d_in = if gy_max >= lo {
                    0
                } else {
                    (((lo * lo - gy_max * gy_max).sqrt() / side).ceil() as i64 - 1).max(0)
                };
                let cells_b = &self.cells[row_b.start..row_b.end];
                let mut sweep = |from: i64, to: i64| {
                    if from > to {
                        return;
                    }
                    let (mut s, mut e) = (0, 0);
                    for ca in cells_a {
                        while s < cells_b.len() && cells_b[s].cx < ca.cx + from {
                            s += 1;
                        }
                        e = e.max(s);
                        while e < cells_b.len() && cells_b[e].cx <= ca.cx + to {
                            e += 1;
                        }
                        let ids_a = self.members(ca);
                        for cb in &cells_b[s..e] {
                            let ids_b = self.members(cb);
                            // A block test costs about as much as one distance.
                            if ids_a.len() * ids_b.len() == 1 {
                                test(ids_a, ids_b, false);
                                continue;
                            }
                            match Self::classify(ca, cb, &bands) {
                                Block::Skip => {}
                                Block::Full(l) => on_full(ids_a, self.members(cb), l),
                                Block::Test => test(ids_a, self.members(cb), false),
                            }
                        }
                    }
                };
                if dy == 0 {
                    sweep(d_in.max(1), d_out);
                } else if d_in == 0 {
                    sweep(-d_out, d_out);
                } else {
                    sweep(-d_out, -d_in);
                    sweep(d_in, d_out);
                }
            }
        }
    }
}
