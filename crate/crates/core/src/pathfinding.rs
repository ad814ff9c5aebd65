//! The graph reading of stacked tropical attention.
//!
//! **Edge direction:** `weights[(i, j)]` is the score of the edge `j → i`
//! (information flows from `j` into `i`). An edge `0 → 1` of weight 4 is
//! stored at `(1, 0)`. Absent edges are bottom.
//!
//! One relaxation `dist'_i = max_j (w_ij + dist_j)` is exactly
//! [`trop_matvec`]; `L` relaxations find the best path with exactly `L` edges.
//! [`add_self_loops`] lets shorter paths compete by idling at a node.

use std::fmt::Write;

use crate::linalg::{trop_matvec, PathWitness, TropicalMatrix, ValueVector};
use crate::{format_real, trop_mul, Error, Real, Result, Tropical};

pub use crate::linalg::reconstruct_path;

/// Refuse exhaustive enumeration above this many index sequences.
pub const MAX_ENUMERATED_PATHS: u64 = 1_000_000;

/// A complete weighted digraph on `n` tokens.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenGraph<T> {
    weights: TropicalMatrix<T>,
    labels: Option<Vec<String>>,
}

impl<T: Real> TokenGraph<T> {
    pub fn new(weights: TropicalMatrix<T>, labels: Option<Vec<String>>) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::NotSquare {
                rows: weights.rows(),
                cols: weights.cols(),
            });
        }
        if let Some(l) = &labels {
            if l.len() != weights.rows() {
                return Err(Error::DimensionMismatch {
                    op: "graph labels",
                    expected: weights.rows(),
                    found: l.len(),
                });
            }
        }
        Ok(Self { weights, labels })
    }

    /// Builds from `(from, to, weight)` triples; unlisted edges are absent.
    pub fn from_edges(n: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        let mut w = TropicalMatrix::bottom(n, n)?;
        for &(from, to, x) in edges {
            for idx in [from, to] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, len: n });
                }
            }
            w.set(to, from, Tropical::new(x)?);
        }
        Self::new(w, None)
    }

    pub fn n(&self) -> usize {
        self.weights.rows()
    }

    pub fn weights(&self) -> &TropicalMatrix<T> {
        &self.weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Weight of the edge `from → to`.
    pub fn edge(&self, from: usize, to: usize) -> Tropical<T> {
        self.weights.get(to, from)
    }
}

/// The four-token toy graph: `0→1` (4), `1→3` (4), `0→3` (5), `0→2` (6), `2→3` (1).
///
/// The best two-hop route into node 3 is `0 → 1 → 3` with weight 8, beating
/// `0 → 2 → 3` (7) and the direct edge (5).
pub fn fig2<T: Real>() -> TokenGraph<T> {
    let e = |from, to, w: f64| (from, to, T::lit(w));
    TokenGraph::from_edges(
        4,
        &[
            e(0, 1, 4.0),
            e(1, 3, 4.0),
            e(0, 3, 5.0),
            e(0, 2, 6.0),
            e(2, 3, 1.0),
        ],
    )
    .expect("fixture is valid")
}

/// The start vector `(0, ⊥, …, ⊥)`: every path begins at node 0.
pub fn source_vector<T: Real>(n: usize, source: usize) -> Result<ValueVector<T>> {
    if source >= n {
        return Err(Error::IndexOutOfRange {
            index: source,
            len: n,
        });
    }
    let mut v = vec![Tropical::bottom(); n];
    v[source] = Tropical::unit();
    ValueVector::from_scalars(v)
}

/// One Bellman–Ford relaxation; identical to `trop_matvec(G.weights, dist)`.
pub fn bellman_ford_step<T: Real>(
    dist: &ValueVector<T>,
    g: &TokenGraph<T>,
) -> Result<ValueVector<T>> {
    trop_matvec(&g.weights, dist)
}

/// `layers` chained relaxations starting from `dist`.
pub fn bellman_ford<T: Real>(
    dist: &ValueVector<T>,
    g: &TokenGraph<T>,
    layers: usize,
) -> Result<ValueVector<T>> {
    if layers == 0 {
        return Err(Error::ZeroPower);
    }
    (0..layers).try_fold(dist.clone(), |d, _| bellman_ford_step(&d, g))
}

/// Every length-`layers` path into `target` with a finite weight, in
/// lexicographic order of `(j_0, …, j_{L−1})`.
///
/// Weights are summed independently of the matrix routines, in path order
/// starting from `v0[j_0]`.
pub fn enumerate_paths<T: Real>(
    g: &TokenGraph<T>,
    v0: &ValueVector<T>,
    layers: usize,
    target: usize,
) -> Result<Vec<PathWitness<T>>> {
    let n = g.n();
    v0.require_scalar()?;
    if layers == 0 {
        return Err(Error::ZeroPower);
    }
    if v0.len() != n {
        return Err(Error::DimensionMismatch {
            op: "enumerate_paths",
            expected: n,
            found: v0.len(),
        });
    }
    if target >= n {
        return Err(Error::IndexOutOfRange {
            index: target,
            len: n,
        });
    }
    let total = u32::try_from(layers)
        .ok()
        .and_then(|l| (n as u128).checked_pow(l))
        .unwrap_or(u128::MAX);
    if total > MAX_ENUMERATED_PATHS as u128 {
        return Err(Error::GuardExceeded {
            paths: total,
            limit: MAX_ENUMERATED_PATHS,
        });
    }

    let mut out = Vec::new();
    let mut prefix = vec![0usize; layers];
    loop {
        let mut nodes = prefix.clone();
        nodes.push(target);
        let weight = nodes
            .windows(2)
            .fold(v0.get(nodes[0], 0), |w, e| trop_mul(w, g.edge(e[0], e[1])));
        if weight.is_finite() {
            out.push(PathWitness {
                nodes,
                total_weight: weight,
            });
        }
        // odometer, last position fastest
        let mut k = layers;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            prefix[k] += 1;
            if prefix[k] < n {
                break;
            }
            prefix[k] = 0;
        }
    }
}

/// Sets every diagonal weight to `max(w_ii, 0)`.
pub fn add_self_loops<T: Real>(g: &TokenGraph<T>) -> TokenGraph<T> {
    let mut w = g.weights.clone();
    for i in 0..g.n() {
        w.set(i, i, w.get(i, i) + Tropical::unit());
    }
    TokenGraph {
        weights: w,
        labels: g.labels.clone(),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic DOT rendering. Edges are listed by source then target; the
/// edges of `highlight` are drawn orange.
pub fn export_dot<T: Real>(
    g: &TokenGraph<T>,
    highlight: Option<&PathWitness<T>>,
) -> Result<String> {
    let n = g.n();
    let mut marked = vec![false; n * n];
    if let Some(p) = highlight {
        if let Some(&bad) = p.nodes.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        for e in p.nodes.windows(2) {
            marked[e[0] * n + e[1]] = true;
        }
    }

    let mut s = String::from("digraph tropical {\n    rankdir=LR;\n");
    for i in 0..n {
        match g.labels() {
            Some(l) => writeln!(s, "    {i} [label=\"{}\"];", dot_escape(&l[i])),
            None => writeln!(s, "    {i};"),
        }
        .expect("write to String");
    }
    for from in 0..n {
        for to in 0..n {
            let Some(w) = g.edge(from, to).finite() else {
                continue;
            };
            let color = if marked[from * n + to] {
                ", color=\"orange\", penwidth=2"
            } else {
                ""
            };
            writeln!(
                s,
                "    {from} -> {to} [label=\"{}\"{color}];",
                format_real(w)
            )
            .expect("write to String");
        }
    }
    s.push_str("}\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trop_power;

    const NEG: f64 = f64::NEG_INFINITY;

    fn g() -> TokenGraph<f64> {
        fig2()
    }

    fn start() -> ValueVector<f64> {
        source_vector(4, 0).unwrap()
    }

    fn ext(v: &ValueVector<f64>) -> Vec<f64> {
        v.entries().iter().map(|e| e.to_extended()).collect()
    }

    fn listed(paths: &[PathWitness<f64>]) -> Vec<(Vec<usize>, f64)> {
        paths
            .iter()
            .map(|p| (p.nodes.clone(), p.total_weight.finite().unwrap()))
            .collect()
    }

    #[test]
    fn fixture_edge_storage() {
        assert_eq!(g().weights().get(1, 0).finite(), Some(4.0));
        assert_eq!(g().edge(0, 1).finite(), Some(4.0));
        assert!(g().edge(1, 0).is_bottom());
    }

    #[test]
    fn relaxation_steps() {
        let d1 = bellman_ford_step(&start(), &g()).unwrap();
        assert_eq!(ext(&d1), vec![NEG, 4.0, 6.0, 5.0]);
        let d2 = bellman_ford_step(&d1, &g()).unwrap();
        assert_eq!(d2.get(3, 0).finite(), Some(8.0));
        assert_eq!(bellman_ford(&start(), &g(), 2).unwrap(), d2);
    }

    #[test]
    fn enumeration_on_fixture() {
        let two = enumerate_paths(&g(), &start(), 2, 3).unwrap();
        assert_eq!(
            listed(&two),
            vec![(vec![0, 1, 3], 8.0), (vec![0, 2, 3], 7.0)]
        );
        let one = enumerate_paths(&g(), &start(), 1, 3).unwrap();
        assert_eq!(listed(&one), vec![(vec![0, 3], 5.0)]);
    }

    #[test]
    fn enumeration_counts_complete_graph() {
        let complete = TokenGraph::new(
            TropicalMatrix::from_extended(&[[0.0, 1.0], [2.0, 3.0]]).unwrap(),
            None,
        )
        .unwrap();
        let zeros = ValueVector::constant(2, Tropical::unit()).unwrap();
        let all = enumerate_paths(&complete, &zeros, 3, 1).unwrap();
        assert_eq!(all.len(), 8);
        let seqs: Vec<Vec<usize>> = all.iter().map(|p| p.nodes.clone()).collect();
        let mut sorted = seqs.clone();
        sorted.sort();
        assert_eq!(seqs, sorted);
    }

    #[test]
    fn enumeration_guard() {
        let big = TokenGraph::new(TropicalMatrix::<f64>::identity(10).unwrap(), None).unwrap();
        let v = ValueVector::constant(10, Tropical::unit()).unwrap();
        assert!(enumerate_paths(&big, &v, 6, 0).is_ok());
        assert!(matches!(
            enumerate_paths(&big, &v, 7, 0),
            Err(Error::GuardExceeded {
                paths: 10_000_000,
                ..
            })
        ));
        assert!(matches!(
            enumerate_paths(&big, &v, usize::MAX, 0),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn self_loops_on_fixture() {
        let looped = add_self_loops(&g());
        let p = reconstruct_path(looped.weights(), &start(), 2, 3).unwrap();
        assert_eq!(p.nodes, vec![0, 1, 3]);
        assert_eq!(p.total_weight.finite(), Some(8.0));
        let paths = enumerate_paths(&looped, &start(), 2, 3).unwrap();
        let stay = paths.iter().find(|p| p.nodes == [0, 3, 3]).unwrap();
        assert_eq!(stay.total_weight.finite(), Some(5.0));
        let best = paths.iter().map(|p| p.total_weight).max().unwrap();
        assert_eq!(best.finite(), Some(8.0));
    }

    #[test]
    fn self_loops_keep_larger_diagonal() {
        let w = TropicalMatrix::from_extended(&[[2.0, NEG], [1.0, -3.0]]).unwrap();
        let looped = add_self_loops(&TokenGraph::new(w, None).unwrap());
        assert_eq!(looped.weights().get(0, 0).finite(), Some(2.0));
        assert_eq!(looped.weights().get(1, 1).finite(), Some(0.0));
        let id = TokenGraph::new(TropicalMatrix::<f64>::identity(3).unwrap(), None).unwrap();
        assert_eq!(add_self_loops(&id), id);
    }

    #[test]
    fn looped_power_dominates_shorter_powers() {
        let looped = add_self_loops(&g());
        let a4 = trop_power(looped.weights(), 4).unwrap();
        for l in 1..=4 {
            let al = trop_power(g().weights(), l).unwrap();
            for (x, y) in al.entries().iter().zip(a4.entries()) {
                assert!(x <= y);
            }
        }
    }

    #[test]
    fn dot_for_fixture() {
        let p = reconstruct_path(add_self_loops(&g()).weights(), &start(), 2, 3).unwrap();
        let dot = export_dot(&g(), Some(&p)).unwrap();
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert_eq!(dot.matches("orange").count(), 2);
        assert!(dot.contains("0 -> 1 [label=\"4\", color=\"orange\", penwidth=2];"));
        assert!(dot.contains("0 -> 3 [label=\"5\"];"));
        assert_eq!(dot, export_dot(&g(), Some(&p)).unwrap());
    }

    #[test]
    fn dot_for_empty_graph_and_bad_highlight() {
        let empty = TokenGraph::new(
            TropicalMatrix::<f64>::bottom(2, 2).unwrap(),
            Some(vec!["a".into(), "b\"".into()]),
        )
        .unwrap();
        let dot = export_dot(&empty, None).unwrap();
        assert_eq!(dot, "digraph tropical {\n    rankdir=LR;\n    0 [label=\"a\"];\n    1 [label=\"b\\\"\"];\n}\n");
        let bad = PathWitness {
            nodes: vec![0, 7],
            total_weight: Tropical::unit(),
        };
        assert!(export_dot(&empty, Some(&bad)).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(TokenGraph::new(TropicalMatrix::<f64>::bottom(2, 3).unwrap(), None).is_err());
        assert!(TokenGraph::new(
            TropicalMatrix::<f64>::bottom(2, 2).unwrap(),
            Some(vec!["x".into()])
        )
        .is_err());
        assert!(TokenGraph::<f64>::from_edges(2, &[(0, 2, 1.0)]).is_err());
    }
}
