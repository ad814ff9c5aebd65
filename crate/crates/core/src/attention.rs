//! Softmax attention at inverse temperature β and its two β → ∞ limits.
//!
//! Scores are unscaled inner products `A_ij = ⟨q_i, k_j⟩` (divide by `√d`
//! beforehand if wanted). Bottom score entries are masked: they get softmax
//! weight exactly 0. A row with no finite score is an error, never NaN.
//!
//! - [`attention_forward`]: `y_i(β) = Σ_j α_ij(β) v_j`.
//! - [`hard_attention`]: the pointwise limit of `y_i(β)`, i.e. the value of the
//!   row's winning key, or the mean over tied winners.
//! - [`log_space_attention`]: `(1/β) log Σ_j e^{β(A_ij + v_j)}`, which tends to
//!   the tropical product `max_j (A_ij + v_j)`.
//!
//! The last two disagree in general; see `convergence::theorem_gap_report`.

use crate::linalg::{TropicalMatrix, ValueVector};
use crate::{trop_mul, Error, Real, Result, Tropical};

/// Inverse temperature: finite and `>= 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Beta<T>(T);

impl<T: Real> Beta<T> {
    pub fn new(beta: T) -> Result<Self> {
        if beta.is_finite() && beta >= T::zero() {
            Ok(Self(beta))
        } else {
            Err(Error::InvalidBeta(beta.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    fn positive(self) -> Result<T> {
        if self.0 > T::zero() {
            Ok(self.0)
        } else {
            Err(Error::ZeroBeta)
        }
    }
}

/// Queries and keys (`n × d`, row-major) plus the `n` values they route.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSet<T> {
    n: usize,
    d: usize,
    queries: Vec<T>,
    keys: Vec<T>,
    values: ValueVector<T>,
}

impl<T: Real> EmbeddingSet<T> {
    pub fn new(queries: Vec<Vec<T>>, keys: Vec<Vec<T>>, values: ValueVector<T>) -> Result<Self> {
        let n = queries.len();
        let d = queries.first().map_or(0, Vec::len);
        if n == 0 || d == 0 {
            return Err(Error::EmptyInput);
        }
        for (what, m) in [("keys", &keys), ("queries", &queries)] {
            if m.len() != n {
                return Err(Error::Schema(format!(
                    "{what}: expected {n} rows, got {}",
                    m.len()
                )));
            }
            if let Some(r) = m.iter().find(|r| r.len() != d) {
                return Err(Error::Schema(format!(
                    "{what}: expected dimension {d}, got {}",
                    r.len()
                )));
            }
        }
        if values.len() != n {
            return Err(Error::Schema(format!(
                "values: expected {n} entries, got {}",
                values.len()
            )));
        }
        values.finite_entries()?;
        let queries: Vec<T> = queries.into_iter().flatten().collect();
        let keys: Vec<T> = keys.into_iter().flatten().collect();
        if let Some(x) = queries.iter().chain(&keys).find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(x.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            n,
            d,
            queries,
            keys,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn query(&self, i: usize) -> &[T] {
        &self.queries[i * self.d..(i + 1) * self.d]
    }

    pub fn key(&self, j: usize) -> &[T] {
        &self.keys[j * self.d..(j + 1) * self.d]
    }

    pub fn values(&self) -> &ValueVector<T> {
        &self.values
    }
}

/// Row-stochastic `rows × cols` weights `α_ij(β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftmaxWeights<T> {
    rows: usize,
    cols: usize,
    weights: Vec<T>,
}

impl<T: Real> SoftmaxWeights<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.weights[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.weights[i * self.cols..(i + 1) * self.cols]
    }
}

/// Attention output: one finite value per query.
pub type AttentionOutput<T> = ValueVector<T>;

/// `A_ij = ⟨q_i, k_j⟩`, summed left to right over the embedding dimension.
pub fn score_matrix<T: Real>(e: &EmbeddingSet<T>) -> TropicalMatrix<T> {
    let mut entries = Vec::with_capacity(e.n * e.n);
    for i in 0..e.n {
        let q = e.query(i);
        for j in 0..e.n {
            let dot = q
                .iter()
                .zip(e.key(j))
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            entries.push(Tropical::new(dot).expect("finite embeddings give finite scores"));
        }
    }
    TropicalMatrix::new(e.n, e.n, entries).expect("n >= 1")
}

/// `M + log1p(Σ_{j ≠ j*} e^{β(x_j − M)}) / β` with `M = max_j x_j`.
pub(crate) fn lse_unchecked<T: Real>(xs: &[T], beta: T) -> T {
    let (jmax, m) =
        xs.iter().copied().enumerate().fold(
            (0, xs[0]),
            |(bj, bm), (j, x)| if x > bm { (j, x) } else { (bj, bm) },
        );
    let rest = xs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != jmax)
        .fold(T::zero(), |acc, (_, &x)| acc + (beta * (x - m)).exp());
    m + rest.ln_1p() / beta
}

/// `(1/β) log Σ_j e^{β x_j}`, stabilized by factoring out the maximum.
///
/// The result satisfies `0 <= lse - max(x) <= ln(n)/β` and does not overflow
/// for any finite input.
pub fn log_sum_exp<T: Real>(xs: &[T], beta: Beta<T>) -> Result<T> {
    let beta = beta.positive()?;
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite(x.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(lse_unchecked(xs, beta))
}

/// Softmax of one score row; `None` if every entry is bottom.
pub(crate) fn softmax_row<T: Real>(row: &[Tropical<T>], beta: T) -> Option<Vec<T>> {
    let m = row.iter().filter_map(|e| e.finite()).reduce(T::max)?;
    let w: Vec<T> = row
        .iter()
        .map(|e| e.finite().map_or(T::zero(), |x| (beta * (x - m)).exp()))
        .collect();
    let s = w.iter().fold(T::zero(), |acc, &x| acc + x);
    Some(w.into_iter().map(|x| x / s).collect())
}

/// `α_ij = e^{βA_ij} / Σ_k e^{βA_ik}`; bottom entries get weight 0.
pub fn softmax_weights<T: Real>(a: &TropicalMatrix<T>, beta: Beta<T>) -> Result<SoftmaxWeights<T>> {
    let mut weights = Vec::with_capacity(a.rows() * a.cols());
    for (i, row) in a.row_iter().enumerate() {
        weights.extend(softmax_row(row, beta.value()).ok_or(Error::AllBottomRow { row: i })?);
    }
    Ok(SoftmaxWeights {
        rows: a.rows(),
        cols: a.cols(),
        weights,
    })
}

fn check_values<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
    op: &'static str,
) -> Result<Vec<T>> {
    if a.cols() != v.len() {
        return Err(Error::DimensionMismatch {
            op,
            expected: a.cols(),
            found: v.len(),
        });
    }
    v.finite_entries()
}

/// `y_i(β) = Σ_j α_ij v_j` for one row, per component.
pub(crate) fn attend_row<T: Real>(
    row: &[Tropical<T>],
    values: &[T],
    dim: usize,
    beta: T,
) -> Option<Vec<T>> {
    let alpha = softmax_row(row, beta)?;
    Some(
        (0..dim)
            .map(|c| {
                alpha
                    .iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (j, &w)| acc + w * values[j * dim + c])
            })
            .collect(),
    )
}

/// Mean of the values whose score equals the row maximum.
pub(crate) fn hard_row<T: Real>(row: &[Tropical<T>], values: &[T], dim: usize) -> Option<Vec<T>> {
    let m = row.iter().copied().filter(Tropical::is_finite).max()?;
    let tied: Vec<usize> = (0..row.len()).filter(|&j| row[j] == m).collect();
    let count = T::from_count(tied.len());
    Some(
        (0..dim)
            .map(|c| {
                tied.iter()
                    .fold(T::zero(), |acc, &j| acc + values[j * dim + c])
                    / count
            })
            .collect(),
    )
}

/// Finite-β softmax attention. β = 0 gives the plain mean over unmasked keys.
pub fn attention_forward<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
    beta: Beta<T>,
) -> Result<AttentionOutput<T>> {
    let values = check_values(a, v, "attention_forward")?;
    let mut out = Vec::with_capacity(a.rows() * v.dim());
    for (i, row) in a.row_iter().enumerate() {
        let y = attend_row(row, &values, v.dim(), beta.value())
            .ok_or(Error::AllBottomRow { row: i })?;
        out.extend(
            y.into_iter()
                .map(|x| Tropical::new(x).expect("convex combination is finite")),
        );
    }
    ValueVector::new(a.rows(), v.dim(), out)
}

/// The β → ∞ limit of [`attention_forward`]: `v_{j*}` with `j* = argmax_j A_ij`,
/// averaged over `j*` when the maximum is tied.
pub fn hard_attention<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
) -> Result<AttentionOutput<T>> {
    let values = check_values(a, v, "hard_attention")?;
    let mut out = Vec::with_capacity(a.rows() * v.dim());
    for (i, row) in a.row_iter().enumerate() {
        let y = hard_row(row, &values, v.dim()).ok_or(Error::AllBottomRow { row: i })?;
        out.extend(
            y.into_iter()
                .map(|x| Tropical::new(x).expect("mean of finite values")),
        );
    }
    ValueVector::new(a.rows(), v.dim(), out)
}

/// `(1/β) log Σ_j e^{β(A_ij + v_j)}` for one row and component, over finite terms.
pub(crate) fn log_space_row<T: Real>(
    row: &[Tropical<T>],
    v: &ValueVector<T>,
    c: usize,
    beta: T,
) -> Option<T> {
    let terms: Vec<T> = row
        .iter()
        .enumerate()
        .filter_map(|(j, &a)| trop_mul(a, v.get(j, c)).finite())
        .collect();
    if terms.is_empty() {
        None
    } else {
        Some(lse_unchecked(&terms, beta))
    }
}

/// Log-space attention; within `ln(n)/β` above `trop_matvec(A, V)` on every row.
pub fn log_space_attention<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
    beta: Beta<T>,
) -> Result<ValueVector<T>> {
    let beta = beta.positive()?;
    if a.cols() != v.len() {
        return Err(Error::DimensionMismatch {
            op: "log_space_attention",
            expected: a.cols(),
            found: v.len(),
        });
    }
    let mut out = Vec::with_capacity(a.rows() * v.dim());
    for (i, row) in a.row_iter().enumerate() {
        for c in 0..v.dim() {
            let y = log_space_row(row, v, c, beta).ok_or(Error::AllBottomRow { row: i })?;
            out.push(Tropical::new(y)?);
        }
    }
    ValueVector::new(a.rows(), v.dim(), out)
}
