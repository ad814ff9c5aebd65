//! Diagnostics for the β → ∞ limit: row margins, tie-boundary classification,
//! β-sweeps, and the per-row comparison of the two candidate limits.
//!
//! Distances are sup norms over rows and value components. Rows whose scores
//! are all bottom carry no attention and are skipped by [`sweep`].

use crate::attention::{attend_row, hard_row, log_space_row, Beta};
use crate::linalg::{row_argmax, TropicalMatrix, ValueVector};
use crate::{format_real, trop_mul, Error, Real, Result, Tropical};

/// Default tie tolerance for [`classify_region`], absolute in score units.
pub const DEFAULT_EPSILON_TIE: f64 = 1e-9;

/// Largest and second-largest score of a row.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginReport<T> {
    pub row: usize,
    /// Lowest index attaining `row_max`.
    pub winner: usize,
    pub row_max: Tropical<T>,
    /// Bottom when the row has a single finite entry.
    pub second_max: Tropical<T>,
    /// `row_max − second_max`; `+inf` without a competitor, `0` on a tie.
    pub margin: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionClassification<T> {
    pub winner: usize,
    pub margin: T,
    pub on_boundary: bool,
}

/// One β sample of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord<T> {
    pub beta: Beta<T>,
    /// `max |attention_forward − hard_attention|`
    pub dist_hard: T,
    /// `max |log_space_attention − trop_matvec|`
    pub dist_trop: T,
    /// Smallest finite row margin, `+inf` if no row has two finite scores.
    pub min_margin: T,
}

/// Per (row, component) comparison of the proof's limit with the tropical product.
#[derive(Clone, Debug, PartialEq)]
pub struct GapRecord<T> {
    pub row: usize,
    pub component: usize,
    /// `argmax_j A_ij`, lowest index on ties.
    pub score_winner: usize,
    /// `argmax_j (A_ij + v_j)`, lowest index on ties.
    pub tropical_winner: usize,
    pub agree: bool,
    /// `|hard_i − (A ⊗ V)_i|`
    pub difference: T,
}

fn margin_of<T: Real>(row: &[Tropical<T>]) -> Option<(usize, Tropical<T>, Tropical<T>, T)> {
    let (winner, row_max) = row_argmax(row, |_| Tropical::unit())?;
    let second = row
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != winner)
        .map(|(_, &x)| x)
        .max()
        .unwrap_or_else(Tropical::bottom);
    let margin = match (row_max.finite(), second.finite()) {
        (Some(m), Some(s)) => m - s,
        _ => T::infinity(),
    };
    Some((winner, row_max, second, margin))
}

/// Row maximum, runner-up and their gap Δ for row `i`.
pub fn row_margin<T: Real>(a: &TropicalMatrix<T>, i: usize) -> Result<MarginReport<T>> {
    if i >= a.rows() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: a.rows(),
        });
    }
    let (winner, row_max, second_max, margin) =
        margin_of(a.row(i)).ok_or(Error::AllBottomRow { row: i })?;
    Ok(MarginReport {
        row: i,
        winner,
        row_max,
        second_max,
        margin,
    })
}

/// [`row_margin`] for every row.
pub fn all_margins<T: Real>(a: &TropicalMatrix<T>) -> Result<Vec<MarginReport<T>>> {
    (0..a.rows()).map(|i| row_margin(a, i)).collect()
}

/// Which simplex vertex a softmax over `scores` flows to as β grows, and
/// whether the scores sit within `epsilon_tie` of a tie boundary.
pub fn classify_region<T: Real>(scores: &[T], epsilon_tie: T) -> Result<RegionClassification<T>> {
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    let row = scores
        .iter()
        .map(|&x| Tropical::new(x))
        .collect::<Result<Vec<_>>>()?;
    let (winner, _, _, margin) = margin_of(&row).expect("nonempty finite scores");
    Ok(RegionClassification {
        winner,
        margin,
        on_boundary: margin <= epsilon_tie,
    })
}

/// Distances to both limits at each β of an ascending schedule.
pub fn sweep<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
    betas: &[Beta<T>],
) -> Result<Vec<ConvergenceRecord<T>>> {
    if betas.is_empty()
        || betas[0].value() <= T::zero()
        || betas.windows(2).any(|w| w[1].value() <= w[0].value())
    {
        return Err(Error::BetaSchedule);
    }
    if a.cols() != v.len() {
        return Err(Error::DimensionMismatch {
            op: "sweep",
            expected: a.cols(),
            found: v.len(),
        });
    }
    let values = v.finite_entries()?;
    let dim = v.dim();

    struct Active<'a, T> {
        row: &'a [Tropical<T>],
        hard: Vec<T>,
        trop: Vec<T>,
    }
    let mut active = Vec::new();
    let mut min_margin = T::infinity();
    for row in a.row_iter() {
        let Some(hard) = hard_row(row, &values, dim) else {
            continue;
        };
        let trop = (0..dim)
            .map(|c| {
                row.iter()
                    .enumerate()
                    .filter_map(|(j, &s)| trop_mul(s, v.get(j, c)).finite())
                    .fold(T::neg_infinity(), T::max)
            })
            .collect();
        if let Some((_, _, _, m)) = margin_of(row) {
            min_margin = min_margin.min(m);
        }
        active.push(Active { row, hard, trop });
    }
    if active.is_empty() {
        return Err(Error::AllBottomRow { row: 0 });
    }

    Ok(betas
        .iter()
        .map(|&beta| {
            let b = beta.value();
            let mut dist_hard = T::zero();
            let mut dist_trop = T::zero();
            for r in &active {
                let y = attend_row(r.row, &values, dim, b).expect("active row");
                for (c, (&yc, &hc)) in y.iter().zip(&r.hard).enumerate() {
                    dist_hard = dist_hard.max((yc - hc).abs());
                    let ls = log_space_row(r.row, v, c, b).expect("finite term exists");
                    dist_trop = dist_trop.max((ls - r.trop[c]).abs());
                }
            }
            ConvergenceRecord {
                beta,
                dist_hard,
                dist_trop,
                min_margin,
            }
        })
        .collect())
}

/// Header of the sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "beta,dist_hard,dist_trop,min_margin";

/// Renders sweep records as CSV with shortest round-trip numbers.
pub fn sweep_csv<T: Real>(records: &[ConvergenceRecord<T>]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_real(r.beta.value()),
            format_real(r.dist_hard),
            format_real(r.dist_trop),
            format_real(r.min_margin)
        ));
    }
    out
}

/// Compares, per row, the score winner (whose value hard attention returns)
/// with the winner of `A_ij + v_j` (whose sum the tropical product returns).
pub fn theorem_gap_report<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
) -> Result<Vec<GapRecord<T>>> {
    if a.cols() != v.len() {
        return Err(Error::DimensionMismatch {
            op: "theorem_gap_report",
            expected: a.cols(),
            found: v.len(),
        });
    }
    let values = v.finite_entries()?;
    let dim = v.dim();
    let mut out = Vec::with_capacity(a.rows() * dim);
    for (i, row) in a.row_iter().enumerate() {
        let (score_winner, _) =
            row_argmax(row, |_| Tropical::unit()).ok_or(Error::AllBottomRow { row: i })?;
        let hard = hard_row(row, &values, dim).expect("row has a finite score");
        for (c, &h) in hard.iter().enumerate() {
            let (tropical_winner, trop) =
                row_argmax(row, |j| v.get(j, c)).expect("finite values and a finite score");
            let trop = trop.finite().expect("row_argmax skips bottom");
            out.push(GapRecord {
                row: i,
                component: c,
                score_winner,
                tropical_winner,
                agree: score_winner == tropical_winner,
                difference: (h - trop).abs(),
            });
        }
    }
    Ok(out)
}
