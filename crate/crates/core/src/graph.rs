//! The nearly-equal distance graph and the structures extracted from it:
//! `K(1, s, s)` witnesses, their label-homogeneous refinements, the case
//! split on sorted triangle labels, and the angle constants used for
//! case-I triangles.
//!
//! Witnesses are found by explicit bounded search, which is exponential in
//! `s` and meant for `s <= 4`, `n <= 500`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::count::label_pairs;
use crate::error::{Error, Result};
use crate::geometry::{IntervalFamily, PointSet};
use crate::hypothesis::check_delta;

/// Vertices are point ids; an edge joins every qualifying pair and carries
/// its smallest interval label (1-based).
#[derive(Clone, Debug)]
pub struct NearEqualGraph {
    n: usize,
    labels: BTreeMap<(usize, usize), usize>,
    adj: Vec<FixedBitSet>,
}

impl NearEqualGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    /// Edges as `(i, j, label)` with `i < j`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.labels.iter().map(|(&(i, j), &l)| (i, j, l))
    }

    pub fn label(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.labels.get(&key).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }
}

pub fn build_graph(ps: &PointSet, iv: &IntervalFamily) -> NearEqualGraph {
    let n = ps.n();
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    let mut labels = BTreeMap::new();
    for p in label_pairs(ps, iv) {
        adj[p.i].insert(p.j);
        adj[p.j].insert(p.i);
        labels.insert((p.i, p.j), p.label);
    }
    NearEqualGraph { n, labels, adj }
}

/// A `K(1, s, s)`: `x` is joined to all of `b` and `d`, and every vertex of
/// `b` is joined to every vertex of `d`. Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripartiteWitness {
    pub x: usize,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "D")]
    pub d: Vec<usize>,
    pub s: usize,
}

impl TripartiteWitness {
    /// Re-checks disjointness and all `s^2 + 2s` required edges.
    pub fn is_valid_in(&self, g: &NearEqualGraph) -> bool {
        let mut seen = FixedBitSet::with_capacity(g.n());
        for &v in std::iter::once(&self.x).chain(&self.b).chain(&self.d) {
            if v >= g.n() || seen.put(v) {
                return false;
            }
        }
        self.b.len() == self.s
            && self.d.len() == self.s
            && self.b.iter().chain(&self.d).all(|&v| g.has_edge(self.x, v))
            && self
                .b
                .iter()
                .all(|&y| self.d.iter().all(|&z| g.has_edge(y, z)))
    }
}

/// Lexicographically least `K(1, s, s)` by `(x, B, D)`, or `None`.
///
/// For each `x` in increasing order, `B` runs over `s`-subsets of the
/// neighbourhood of `x` in lexicographic order, pruned as soon as the common
/// neighbourhood of the partial `B` inside `N(x)` has fewer than `s`
/// vertices; the first `B` whose common neighbourhood (minus `B`) still has
/// `s` vertices yields `D` as its `s` smallest members.
pub fn find_tripartite(g: &NearEqualGraph, s: usize) -> Option<TripartiteWitness> {
    if s == 0 {
        return None;
    }
    for x in 0..g.n() {
        let nbhd = &g.adj[x];
        if nbhd.count_ones(..) < 2 * s {
            continue;
        }
        let cands: Vec<usize> = nbhd.ones().collect();
        let mut chosen = Vec::with_capacity(s);
        if let Some(d) = extend(g, &cands, 0, nbhd.clone(), &mut chosen, s) {
            return Some(TripartiteWitness { x, b: chosen, d, s });
        }
    }
    None
}

fn extend(
    g: &NearEqualGraph,
    cands: &[usize],
    from: usize,
    common: FixedBitSet,
    chosen: &mut Vec<usize>,
    s: usize,
) -> Option<Vec<usize>> {
    if chosen.len() == s {
        let d: Vec<usize> = common
            .ones()
            .filter(|v| !chosen.contains(v))
            .take(s)
            .collect();
        return (d.len() == s).then_some(d);
    }
    let need = s - chosen.len();
    for idx in from..cands.len() {
        if cands.len() - idx < need {
            break;
        }
        let y = cands[idx];
        let mut next = common.clone();
        next.intersect_with(&g.adj[y]);
        if next.count_ones(..) < s {
            continue;
        }
        chosen.push(y);
        if let Some(d) = extend(g, cands, idx + 1, next, chosen, s) {
            return Some(d);
        }
        chosen.pop();
    }
    None
}

/// A `K(1, m, m)` inside a witness on which each of the three edge classes
/// carries a single label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousWitness {
    pub base: TripartiteWitness,
    #[serde(rename = "B2")]
    pub b2: Vec<usize>,
    #[serde(rename = "D2")]
    pub d2: Vec<usize>,
    pub m: usize,
    pub l_xy: usize,
    pub l_xz: usize,
    pub l_yz: usize,
}

impl HomogeneousWitness {
    pub fn case(&self) -> Case {
        classify_case(self.l_xy, self.l_yz, self.l_xz)
    }
}

/// Largest class of `vs` by label towards `x`; ties go to the smaller label.
fn largest_class(g: &NearEqualGraph, x: usize, vs: &[usize]) -> Option<(usize, Vec<usize>)> {
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in vs {
        classes.entry(g.label(x, v)?).or_default().push(v);
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (l, members) in classes {
        if best.as_ref().is_none_or(|(_, b)| members.len() > b.len()) {
            best = Some((l, members));
        }
    }
    best
}

/// Pigeonholes `B` and `D` by their label towards `x`, keeps the largest
/// class of each, then returns the lexicographically least `(B2, D2)` of
/// size `m` on which the `B2 x D2` labels are constant.
pub fn homogenize(
    g: &NearEqualGraph,
    w: &TripartiteWitness,
    m: usize,
) -> Option<HomogeneousWitness> {
    if m == 0 || m > w.s {
        return None;
    }
    let (l_xy, b1) = largest_class(g, w.x, &w.b)?;
    let (l_xz, d1) = largest_class(g, w.x, &w.d)?;
    if b1.len() < m || d1.len() < m {
        return None;
    }

    let mut combo: Vec<usize> = (0..m).collect();
    loop {
        let b2: Vec<usize> = combo.iter().map(|&i| b1[i]).collect();
        // For each candidate label, the members of D1 that see all of B2 with it.
        let mut best: Option<(Vec<usize>, usize)> = None;
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &z in &d1 {
            let first = g.label(b2[0], z)?;
            if b2.iter().all(|&y| g.label(y, z) == Some(first)) {
                by_label.entry(first).or_default().push(z);
            }
        }
        for (l, zs) in by_label {
            if zs.len() >= m {
                let d2 = zs[..m].to_vec();
                if best.as_ref().is_none_or(|(bd, _)| d2 < *bd) {
                    best = Some((d2, l));
                }
            }
        }
        if let Some((d2, l_yz)) = best {
            return Some(HomogeneousWitness {
                base: w.clone(),
                b2,
                d2,
                m,
                l_xy,
                l_xz,
                l_yz,
            });
        }
        if !next_combination(&mut combo, b1.len()) {
            return None;
        }
    }
}

/// Advances `c` to the next `c.len()`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let m = c.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if c[i] < n - m + i {
            c[i] += 1;
            for j in i + 1..m {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sorted triangle labels `l(1) <= l(2) <= l(3)`: case I when the largest
/// label is strictly largest, case II when it is tied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "I")]
    CaseI,
    #[serde(rename = "II")]
    CaseII,
}

pub fn classify_case(l_xy: usize, l_yz: usize, l_zx: usize) -> Case {
    let mut l = [l_xy, l_yz, l_zx];
    l.sort_unstable();
    if l[1] < l[2] {
        Case::CaseI
    } else {
        Case::CaseII
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofConstants {
    pub delta: f64,
    /// `2 arcsin(delta / (4 - 2 delta))`, the lower bound on the two smaller
    /// angles of a case-I triangle.
    pub delta1: f64,
    /// `2 delta1`; the largest angle is at most `pi - delta2`.
    pub delta2: f64,
    /// `delta1 - delta / 2`, which vanishes to second order as `delta -> 0`.
    pub small_delta_residual: f64,
}

pub fn proof_constants(delta: f64) -> Result<ProofConstants> {
    check_delta(delta)?;
    let delta1 = 2.0 * (delta / (4.0 - 2.0 * delta)).asin();
    Ok(ProofConstants {
        delta,
        delta1,
        delta2: 2.0 * delta1,
        small_delta_residual: delta1 - delta / 2.0,
    })
}

/// Angles of a case-I triangle against the `delta1` / `pi - delta2` bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleDiagnostic {
    pub triangle: [usize; 3],
    /// Labels of the sides `(t0 t1, t1 t2, t2 t0)`.
    pub labels: [usize; 3],
    pub case: Case,
    pub degenerate: bool,
    /// Interior angle at each vertex, in `triangle` order (radians).
    pub angles: [f64; 3],
    pub min_angle: f64,
    pub max_angle: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub min_angle_ok: bool,
    pub max_angle_ok: bool,
}

/// Reports whether a case-I triangle has all angles `>= delta1` and its
/// largest angle `<= pi - delta2`. The guarantee only holds once `t_1` is
/// large, so this reports rather than asserts.
pub fn case1_angle_diagnostic(
    ps: &PointSet,
    triangle: [usize; 3],
    iv: &IntervalFamily,
    delta: f64,
) -> Result<AngleDiagnostic> {
    let consts = proof_constants(delta)?;
    let [u, v, w] = triangle;
    if triangle.iter().any(|&i| i >= ps.n()) || u == v || v == w || u == w {
        return Err(Error::precondition(format!(
            "invalid triangle {triangle:?}"
        )));
    }
    let (pu, pv, pw) = (ps.get(u), ps.get(v), ps.get(w));
    let sides = [pu.dist(&pv), pv.dist(&pw), pw.dist(&pu)];
    let mut labels = [0; 3];
    for (slot, &d) in labels.iter_mut().zip(&sides) {
        *slot = iv.label(d).ok_or_else(|| {
            Error::precondition(format!(
                "triangle {triangle:?} has a side that is not an edge"
            ))
        })?;
    }
    let case = classify_case(labels[0], labels[1], labels[2]);
    if case != Case::CaseI {
        return Err(Error::precondition(format!(
            "triangle {triangle:?} with labels {labels:?} is case II"
        )));
    }

    let [a_uv, a_vw, a_wu] = sides;
    let longest = a_uv.max(a_vw).max(a_wu);
    let cross = (pv.x - pu.x) * (pw.y - pu.y) - (pv.y - pu.y) * (pw.x - pu.x);
    let area = cross.abs() / 2.0;
    let degenerate = area < 1e-9 * longest * longest;

    // Angle at a vertex from its two adjacent sides and the opposite one.
    let angle = |adj1: f64, adj2: f64, opp: f64| {
        ((adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2))
            .clamp(-1.0, 1.0)
            .acos()
    };
    let angles = [
        angle(a_uv, a_wu, a_vw),
        angle(a_uv, a_vw, a_wu),
        angle(a_vw, a_wu, a_uv),
    ];
    let min_angle = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let max_angle = angles.iter().copied().fold(0.0, f64::max);
    Ok(AngleDiagnostic {
        triangle,
        labels,
        case,
        degenerate,
        angles,
        min_angle,
        max_angle,
        delta1: consts.delta1,
        delta2: consts.delta2,
        min_angle_ok: !degenerate && min_angle >= consts.delta1,
        max_angle_ok: !degenerate && max_angle <= PI - consts.delta2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{problem3_chain, two_column};
    use crate::count::{count_pairs, CountMethod};

    #[test]
    fn graph_edges_match_count() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (5.0, 0.0)]).unwrap();
        let iv = IntervalFamily::single(5.0, 1.0).unwrap();
        assert_eq!(build_graph(&ps, &iv).edge_count(), 1);

        let out = problem3_chain(30, 3, 2000.0).unwrap();
        let g = build_graph(&out.ps, &out.iv);
        assert_eq!(g.edge_count(), 351);
        assert_eq!(
            g.edge_count() as u64,
            count_pairs(&out.ps, &out.iv, CountMethod::Brute).total
        );

        let ps = PointSet::from_coords(&[(0.0, 0.0), (3.0, 0.0), (0.0, 3.0)]).unwrap();
        let iv = IntervalFamily::single(10.0, 1.0).unwrap();
        assert_eq!(build_graph(&ps, &iv).edge_count(), 0);
    }

    #[test]
    fn empty_graph_has_no_witness() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (3.0, 0.0), (0.0, 3.0)]).unwrap();
        let iv = IntervalFamily::single(10.0, 1.0).unwrap();
        assert_eq!(find_tripartite(&build_graph(&ps, &iv), 1), None);
    }

    #[test]
    fn triangle_in_two_columns() {
        let out = two_column(6, 2, 200.0, 0.4).unwrap();
        let g = build_graph(&out.ps, &out.iv);
        let w = find_tripartite(&g, 1).unwrap();
        assert!(w.is_valid_in(&g));
        // x = (0, 1); y = (0, 2) is its column neighbour at distance 1 and
        // z = (200, 1) is across.
        assert_eq!(
            w,
            TripartiteWitness {
                x: 0,
                b: vec![1],
                d: vec![3],
                s: 1
            }
        );
    }

    #[test]
    fn problem3_witness_and_homogenization() {
        let out = problem3_chain(30, 3, 2000.0).unwrap();
        let g = build_graph(&out.ps, &out.iv);
        let w = find_tripartite(&g, 2).unwrap();
        assert!(w.is_valid_in(&g));
        assert_eq!(
            w,
            TripartiteWitness {
                x: 0,
                b: vec![1, 2],
                d: vec![10, 11],
                s: 2
            }
        );

        // x in column 1, B and D interleaved in column 2 at heights
        // {1, 4} x {2, 3}: all four B-D distances are 1 or 2.
        let hand = TripartiteWitness {
            x: 0,
            b: vec![10, 13],
            d: vec![11, 12],
            s: 2,
        };
        assert!(hand.is_valid_in(&g));
        let h = homogenize(&g, &hand, 2).unwrap();
        assert_eq!((h.l_xy, h.l_xz, h.l_yz), (2, 2, 1));
        assert_eq!(h.b2, vec![10, 13]);
        assert_eq!(h.d2, vec![11, 12]);
        assert_eq!(h.case(), Case::CaseII);
    }

    #[test]
    fn homogenize_single_element_always_works() {
        let out = problem3_chain(30, 3, 2000.0).unwrap();
        let g = build_graph(&out.ps, &out.iv);
        let w = find_tripartite(&g, 3).unwrap();
        let h = homogenize(&g, &w, 1).unwrap();
        assert_eq!(h.b2.len(), 1);
        assert_eq!(h.d2.len(), 1);
        assert!(homogenize(&g, &w, 4).is_none());
        assert!(homogenize(&g, &w, 0).is_none());
    }

    #[test]
    fn homogenize_single_label_takes_prefix() {
        let out = two_column(12, 1, 100.0, 0.5).unwrap();
        let g = build_graph(&out.ps, &out.iv);
        // Two columns and one interval give a triangle-free bipartite graph.
        assert_eq!(find_tripartite(&g, 1), None);

        let mut v = Vec::new();
        for y in 0..4 {
            v.push((0.0, y as f64 * 1.0));
            v.push((1.0, y as f64 * 1.0));
        }
        let ps = PointSet::from_coords(&v).unwrap();
        let iv = IntervalFamily::single(1.0, 10.0).unwrap();
        let g = build_graph(&ps, &iv);
        let w = find_tripartite(&g, 3).unwrap();
        assert!(w.is_valid_in(&g));
        let h = homogenize(&g, &w, 2).unwrap();
        assert_eq!(h.b2, w.b[..2].to_vec());
        assert_eq!(h.d2, w.d[..2].to_vec());
        assert_eq!((h.l_xy, h.l_xz, h.l_yz), (1, 1, 1));
    }

    #[test]
    fn case_split() {
        assert_eq!(classify_case(1, 2, 3), Case::CaseI);
        assert_eq!(classify_case(2, 2, 2), Case::CaseII);
        assert_eq!(classify_case(3, 1, 3), Case::CaseII);
        assert_eq!(classify_case(1, 1, 2), Case::CaseI);
    }

    #[test]
    fn constants() {
        let c = proof_constants(0.5).unwrap();
        assert!((c.delta1 - 0.334_896_158_439_378_6).abs() < 1e-15);
        assert_eq!(c.delta2, 2.0 * c.delta1);
        let c = proof_constants(2.0 / 3.0).unwrap();
        assert!((c.delta1 - 2.0 * 0.25f64.asin()).abs() < 1e-15);
        assert!(proof_constants(0.0).is_err());
        assert!(proof_constants(1.0).is_err());
    }

    fn triangle_with_sides(a: f64, b: f64, c: f64) -> PointSet {
        // u at origin, v on the x-axis at distance a, w at distance c from u
        // and b from v.
        let x = (a * a + c * c - b * b) / (2.0 * a);
        let y = (c * c - x * x).sqrt();
        PointSet::from_coords(&[(0.0, 0.0), (a, 0.0), (x, y)]).unwrap()
    }

    #[test]
    fn angle_diagnostic_case_one() {
        let ps = triangle_with_sides(100.0, 100.5, 180.4);
        let iv = IntervalFamily::new(vec![100.0, 180.0], 1.0).unwrap();
        let r = case1_angle_diagnostic(&ps, [0, 1, 2], &iv, 0.1).unwrap();
        assert_eq!(r.labels, [1, 1, 2]);
        assert_eq!(r.case, Case::CaseI);
        assert!(!r.degenerate);
        assert!((r.angles.iter().sum::<f64>() - PI).abs() < 1e-9);
        // Law of cosines with sides opposite each vertex.
        let (a, b, c) = (100.0f64, 100.5f64, 180.4f64);
        let at_u = ((a * a + c * c - b * b) / (2.0 * a * c)).acos();
        let at_w = ((b * b + c * c - a * a) / (2.0 * b * c)).acos();
        let at_v = PI - at_u - at_w;
        assert!((r.angles[0] - at_u).abs() < 1e-9);
        assert!((r.angles[1] - at_v).abs() < 1e-9);
        assert!((r.angles[2] - at_w).abs() < 1e-9);
        assert!(r.min_angle_ok);
        assert!(r.max_angle_ok);
    }

    #[test]
    fn angle_diagnostic_gates() {
        let ps = triangle_with_sides(100.0, 100.2, 100.4);
        let iv = IntervalFamily::single(100.0, 1.0).unwrap();
        assert!(case1_angle_diagnostic(&ps, [0, 1, 2], &iv, 0.1).is_err());

        let ps = PointSet::from_coords(&[(0.0, 0.0), (100.0, 0.0), (200.0, 0.0)]).unwrap();
        let iv = IntervalFamily::new(vec![100.0, 200.0], 1.0).unwrap();
        let r = case1_angle_diagnostic(&ps, [0, 1, 2], &iv, 0.1).unwrap();
        assert!(r.degenerate);
        assert!(!r.min_angle_ok);
    }
}
