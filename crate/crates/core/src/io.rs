//! JSON and CSV file formats.
//!
//! Bottom is encoded as JSON `null`; readers also accept the string `"-inf"`
//! and numbers given as strings. Numbers are written with the shortest
//! representation that round-trips.
//!
//! | document   | shape |
//! |------------|-------|
//! | matrix     | `{"rows": R, "cols": C, "entries": [[..], ..]}` |
//! | vector     | `{"len": N, "entries": [..]}`, entries nested `[..]` when `d > 1` |
//! | embeddings | `{"n": N, "d": D, "Q": [[..]], "K": [[..]], "values": [..]}` |
//! | graph      | `{"n": N, "weights": [[..]], "labels": [..]?}`, `weights[i][j]` is edge `j → i` |
//! | path       | `{"nodes": [..], "total_weight": w}` |

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::error::Category;

use crate::attention::{Beta, EmbeddingSet};
use crate::convergence::{ConvergenceRecord, GapRecord, MarginReport, SWEEP_CSV_HEADER};
use crate::linalg::{PathWitness, TropicalMatrix, ValueVector};
use crate::pathfinding::TokenGraph;
use crate::{Error, Real, Result, Tropical};

#[derive(Deserialize)]
#[serde(untagged)]
enum Cell {
    Num(f64),
    Text(String),
}

impl<T: Real> Serialize for Tropical<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.finite() {
            Some(x) => s.serialize_f64(x.to_f64().expect("real converts to f64")),
            None => s.serialize_none(),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for Tropical<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Option::<Cell>::deserialize(d)? {
            None => Ok(Tropical::bottom()),
            Some(Cell::Num(x)) => {
                let x = T::from_f64(x).ok_or_else(|| D::Error::custom("number out of range"))?;
                Tropical::new(x).map_err(D::Error::custom)
            }
            Some(Cell::Text(s)) => s.parse().map_err(D::Error::custom),
        }
    }
}

fn from_json<'a, D: Deserialize<'a>>(text: &'a str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Data => Error::Schema(e.to_string()),
        _ => Error::Parse(e.to_string()),
    })
}

fn to_json<S: Serialize>(doc: &S) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable document");
    s.push('\n');
    s
}

fn schema<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Error + '_ {
    move |e| Error::Schema(format!("{what}: {e}"))
}

fn check_len(what: &str, declared: usize, actual: usize) -> Result<()> {
    if declared == actual {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "{what}: declared {declared}, found {actual}"
        )))
    }
}

// ---- matrix ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Tropical<f64>>>,
}

fn nested(m: &TropicalMatrix<f64>) -> Vec<Vec<Tropical<f64>>> {
    m.row_iter().map(<[_]>::to_vec).collect()
}

pub fn parse_matrix(text: &str) -> Result<TropicalMatrix<f64>> {
    let doc: MatrixDoc = from_json(text)?;
    check_len("matrix rows", doc.rows, doc.entries.len())?;
    for row in &doc.entries {
        check_len("matrix cols", doc.cols, row.len())?;
    }
    TropicalMatrix::from_rows(doc.entries).map_err(schema("matrix"))
}

pub fn matrix_to_json(m: &TropicalMatrix<f64>) -> String {
    to_json(&MatrixDoc {
        rows: m.rows(),
        cols: m.cols(),
        entries: nested(m),
    })
}

// ---- vector ----

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Nested(Vec<Tropical<f64>>),
    Scalar(Tropical<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDoc {
    len: usize,
    entries: Vec<Entry>,
}

fn values_from_entries(entries: Vec<Entry>) -> Result<ValueVector<f64>> {
    if entries.iter().all(|e| matches!(e, Entry::Scalar(_))) {
        let xs = entries
            .into_iter()
            .map(|e| match e {
                Entry::Scalar(x) => x,
                Entry::Nested(_) => unreachable!(),
            })
            .collect();
        ValueVector::from_scalars(xs).map_err(schema("values"))
    } else {
        let rows = entries
            .into_iter()
            .map(|e| match e {
                Entry::Nested(r) => Ok(r),
                Entry::Scalar(_) => Err(Error::Schema(
                    "values: mixed scalar and nested entries".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        ValueVector::from_rows(rows).map_err(schema("values"))
    }
}

fn entries_of(v: &ValueVector<f64>) -> Vec<Entry> {
    (0..v.len())
        .map(|i| {
            if v.dim() == 1 {
                Entry::Scalar(v.get(i, 0))
            } else {
                Entry::Nested(v.row(i).to_vec())
            }
        })
        .collect()
}

pub fn parse_values(text: &str) -> Result<ValueVector<f64>> {
    let doc: VectorDoc = from_json(text)?;
    check_len("vector len", doc.len, doc.entries.len())?;
    values_from_entries(doc.entries)
}

pub fn values_to_json(v: &ValueVector<f64>) -> String {
    to_json(&VectorDoc {
        len: v.len(),
        entries: entries_of(v),
    })
}

// ---- embeddings ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingDoc {
    n: usize,
    d: usize,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
    values: Vec<Entry>,
}

pub fn parse_embeddings(text: &str) -> Result<EmbeddingSet<f64>> {
    let doc: EmbeddingDoc = from_json(text)?;
    for (what, m) in [("Q", &doc.q), ("K", &doc.k)] {
        check_len(what, doc.n, m.len())?;
        for row in m {
            check_len(what, doc.d, row.len())?;
        }
    }
    check_len("values", doc.n, doc.values.len())?;
    let values = values_from_entries(doc.values)?;
    EmbeddingSet::new(doc.q, doc.k, values).map_err(schema("embeddings"))
}

pub fn embeddings_to_json(e: &EmbeddingSet<f64>) -> String {
    to_json(&EmbeddingDoc {
        n: e.n(),
        d: e.d(),
        q: (0..e.n()).map(|i| e.query(i).to_vec()).collect(),
        k: (0..e.n()).map(|j| e.key(j).to_vec()).collect(),
        values: entries_of(e.values()),
    })
}

// ---- graph ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    weights: Vec<Vec<Tropical<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

pub fn parse_graph(text: &str) -> Result<TokenGraph<f64>> {
    let doc: GraphDoc = from_json(text)?;
    check_len("graph rows", doc.n, doc.weights.len())?;
    for row in &doc.weights {
        check_len("graph cols", doc.n, row.len())?;
    }
    let w = TropicalMatrix::from_rows(doc.weights).map_err(schema("graph"))?;
    TokenGraph::new(w, doc.labels).map_err(schema("graph"))
}

pub fn graph_to_json(g: &TokenGraph<f64>) -> String {
    to_json(&GraphDoc {
        n: g.n(),
        weights: nested(g.weights()),
        labels: g.labels().map(<[_]>::to_vec),
    })
}

// ---- path ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathDoc {
    nodes: Vec<usize>,
    total_weight: Tropical<f64>,
}

pub fn parse_path(text: &str) -> Result<PathWitness<f64>> {
    let doc: PathDoc = from_json(text)?;
    if doc.nodes.is_empty() {
        return Err(Error::Schema("path: no nodes".into()));
    }
    Ok(PathWitness {
        nodes: doc.nodes,
        total_weight: doc.total_weight,
    })
}

pub fn path_to_json(p: &PathWitness<f64>) -> String {
    to_json(&PathDoc {
        nodes: p.nodes.clone(),
        total_weight: p.total_weight,
    })
}

// ---- margins ----

/// `+inf` is written as the string `"inf"`; JSON has no infinity.
mod extended_real {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if *x == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Cell::deserialize(d)? {
            Cell::Num(x) => Ok(x),
            Cell::Text(s) if s == "inf" => Ok(f64::INFINITY),
            Cell::Text(s) => Err(D::Error::custom(format!(
                "expected number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// One row of the `margins` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginRecord {
    pub row: usize,
    pub winner: usize,
    pub row_max: Tropical<f64>,
    pub second_max: Tropical<f64>,
    #[serde(with = "extended_real")]
    pub margin: f64,
    pub on_boundary: bool,
}

impl MarginRecord {
    pub fn new(r: &MarginReport<f64>, epsilon_tie: f64) -> Self {
        Self {
            row: r.row,
            winner: r.winner,
            row_max: r.row_max,
            second_max: r.second_max,
            margin: r.margin,
            on_boundary: r.margin <= epsilon_tie,
        }
    }
}

pub fn margins_to_json(records: &[MarginRecord]) -> String {
    to_json(&records)
}

pub fn parse_margins(text: &str) -> Result<Vec<MarginRecord>> {
    from_json(text)
}

// ---- gap report ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GapDoc {
    row: usize,
    component: usize,
    score_winner: usize,
    tropical_winner: usize,
    agree: bool,
    difference: f64,
}

pub fn gap_report_to_json(records: &[GapRecord<f64>]) -> String {
    let docs: Vec<GapDoc> = records
        .iter()
        .map(|r| GapDoc {
            row: r.row,
            component: r.component,
            score_winner: r.score_winner,
            tropical_winner: r.tropical_winner,
            agree: r.agree,
            difference: r.difference,
        })
        .collect();
    to_json(&docs)
}

pub fn parse_gap_report(text: &str) -> Result<Vec<GapRecord<f64>>> {
    let docs: Vec<GapDoc> = from_json(text)?;
    Ok(docs
        .into_iter()
        .map(|d| GapRecord {
            row: d.row,
            component: d.component,
            score_winner: d.score_winner,
            tropical_winner: d.tropical_winner,
            agree: d.agree,
            difference: d.difference,
        })
        .collect())
}

// ---- sweep ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepDoc {
    beta: f64,
    dist_hard: f64,
    dist_trop: f64,
    #[serde(with = "extended_real")]
    min_margin: f64,
}

pub fn sweep_to_json(records: &[ConvergenceRecord<f64>]) -> String {
    let docs: Vec<SweepDoc> = records
        .iter()
        .map(|r| SweepDoc {
            beta: r.beta.value(),
            dist_hard: r.dist_hard,
            dist_trop: r.dist_trop,
            min_margin: r.min_margin,
        })
        .collect();
    to_json(&docs)
}

/// Reads the CSV written by [`crate::convergence::sweep_csv`].
pub fn parse_sweep_csv(text: &str) -> Result<Vec<ConvergenceRecord<f64>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SWEEP_CSV_HEADER => {}
        other => return Err(Error::Schema(format!("sweep csv: bad header {other:?}"))),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{line:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            let [beta, dist_hard, dist_trop, min_margin] = fields[..] else {
                return Err(Error::Schema(format!(
                    "sweep csv: expected 4 fields in {line:?}"
                )));
            };
            Ok(ConvergenceRecord {
                beta: Beta::new(beta).map_err(schema("sweep csv"))?,
                dist_hard,
                dist_trop,
                min_margin,
            })
        })
        .collect()
}
