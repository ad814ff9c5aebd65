//! Dense matrices and value vectors over the max-plus semiring.
//!
//! Convention: entry `(i, j)` of a score matrix is the weight for information
//! flowing from `j` to `i`, so `(A ⊗ V)_i = max_j (A_ij + v_j)` and
//! `(A^{⊗L} ⊗ V)_i` is the best length-`L` path ending at `i`.

use std::ops::Index;

use crate::{trop_add, trop_mul, Error, Real, Result, Tropical};

/// Row-major dense matrix of tropical scalars, at least 1×1.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Tropical<T>>,
}

impl<T: Real> TropicalMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Tropical<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from nested rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<Tropical<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::Shape {
                rows: r,
                cols: c,
                len: bad.len(),
            });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds from extended reals, `-inf` meaning bottom.
    pub fn from_extended<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|&x| Tropical::from_extended(x))
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::from_rows(rows)
    }

    /// All-bottom matrix.
    pub fn bottom(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![Tropical::bottom(); rows * cols])
    }

    /// Tropical identity: 0 on the diagonal, bottom elsewhere.
    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::bottom(n, n)?;
        for i in 0..n {
            m.set(i, i, Tropical::unit());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Tropical<T> {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Tropical<T>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Tropical<T>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Tropical<T>]> {
        self.entries.chunks(self.cols)
    }

    pub fn entries(&self) -> &[Tropical<T>] {
        &self.entries
    }

    /// Applies `f` to every finite entry; bottom entries are kept.
    pub fn map_finite(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.map_finite(&f))
            .collect::<Result<_>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<T: Real> Index<(usize, usize)> for TropicalMatrix<T> {
    type Output = Tropical<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Tropical<T> {
        &self.entries[i * self.cols + j]
    }
}

/// `len` values of dimension `dim`, stored row-major; scalar values have `dim = 1`.
///
/// Products act componentwise on `dim > 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueVector<T> {
    len: usize,
    dim: usize,
    entries: Vec<Tropical<T>>,
}

impl<T: Real> ValueVector<T> {
    pub fn new(len: usize, dim: usize, entries: Vec<Tropical<T>>) -> Result<Self> {
        if len == 0 || dim == 0 || entries.len() != len * dim {
            return Err(Error::Shape {
                rows: len,
                cols: dim,
                len: entries.len(),
            });
        }
        Ok(Self { len, dim, entries })
    }

    pub fn from_scalars(entries: Vec<Tropical<T>>) -> Result<Self> {
        Self::new(entries.len(), 1, entries)
    }

    /// Scalar values from extended reals, `-inf` meaning bottom.
    pub fn from_extended(xs: &[T]) -> Result<Self> {
        let entries = xs
            .iter()
            .map(|&x| Tropical::from_extended(x))
            .collect::<Result<_>>()?;
        Self::from_scalars(entries)
    }

    /// `dim`-dimensional values, one inner vector per token.
    pub fn from_rows(rows: Vec<Vec<Tropical<T>>>) -> Result<Self> {
        let len = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Shape {
                rows: len,
                cols: dim,
                len: bad.len(),
            });
        }
        Self::new(len, dim, rows.into_iter().flatten().collect())
    }

    pub fn constant(len: usize, value: Tropical<T>) -> Result<Self> {
        Self::new(len, 1, vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, c: usize) -> Tropical<T> {
        self.entries[i * self.dim + c]
    }

    /// The `dim` components of token `i`.
    pub fn row(&self, i: usize) -> &[Tropical<T>] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Component `c` across all tokens.
    pub fn component(&self, c: usize) -> Vec<Tropical<T>> {
        (0..self.len).map(|i| self.get(i, c)).collect()
    }

    pub fn entries(&self) -> &[Tropical<T>] {
        &self.entries
    }

    /// Finite payload of every entry, failing on the first bottom.
    pub fn finite_entries(&self) -> Result<Vec<T>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(index, e)| e.finite().ok_or(Error::NonFiniteValues { index }))
            .collect()
    }

    pub fn require_scalar(&self) -> Result<()> {
        if self.dim == 1 {
            Ok(())
        } else {
            Err(Error::ScalarValuesRequired { dim: self.dim })
        }
    }
}

/// Per-row column index attaining the row maximum of `A_ij + v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessVector {
    pub indices: Vec<usize>,
}

/// A node sequence `j_0 → … → j_{L−1} → i` with its cumulative weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PathWitness<T> {
    pub nodes: Vec<usize>,
    pub total_weight: Tropical<T>,
}

impl<T: Real> PathWitness<T> {
    /// Number of edges.
    pub fn layers(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// Start value plus edge weights, summed in path order.
    pub fn recompute_weight(&self, a: &TropicalMatrix<T>, v0: &ValueVector<T>) -> Tropical<T> {
        let Some(&start) = self.nodes.first() else {
            return Tropical::bottom();
        };
        self.nodes
            .windows(2)
            .fold(v0.get(start, 0), |w, e| trop_mul(w, a.get(e[1], e[0])))
    }
}

/// Lowest index attaining the maximum of `row_j ⊗ v_j`, or `None` if every term is bottom.
pub(crate) fn row_argmax<T: Real>(
    row: &[Tropical<T>],
    v: impl Fn(usize) -> Tropical<T>,
) -> Option<(usize, Tropical<T>)> {
    let mut best: Option<(usize, Tropical<T>)> = None;
    for (j, &a) in row.iter().enumerate() {
        let term = trop_mul(a, v(j));
        if term.is_bottom() {
            continue;
        }
        match best {
            Some((_, b)) if term <= b => {}
            _ => best = Some((j, term)),
        }
    }
    best
}

fn row_dot<T: Real>(row: &[Tropical<T>], v: impl Fn(usize) -> Tropical<T>) -> Tropical<T> {
    row.iter()
        .enumerate()
        .fold(Tropical::bottom(), |acc, (j, &a)| {
            trop_add(acc, trop_mul(a, v(j)))
        })
}

/// `(A ⊗ V)_i = max_j (A_ij + v_j)`, per component.
pub fn trop_matvec<T: Real>(a: &TropicalMatrix<T>, v: &ValueVector<T>) -> Result<ValueVector<T>> {
    if a.cols != v.len {
        return Err(Error::DimensionMismatch {
            op: "trop_matvec",
            expected: a.cols,
            found: v.len,
        });
    }
    let mut out = Vec::with_capacity(a.rows * v.dim);
    for row in a.row_iter() {
        for c in 0..v.dim {
            out.push(row_dot(row, |j| v.get(j, c)));
        }
    }
    ValueVector::new(a.rows, v.dim, out)
}

/// `(A ⊗ B)_ik = max_j (A_ij + B_jk)`.
pub fn trop_matmul<T: Real>(
    a: &TropicalMatrix<T>,
    b: &TropicalMatrix<T>,
) -> Result<TropicalMatrix<T>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "trop_matmul",
            expected: a.cols,
            found: b.rows,
        });
    }
    let mut out = Vec::with_capacity(a.rows * b.cols);
    for row in a.row_iter() {
        for k in 0..b.cols {
            out.push(row_dot(row, |j| b.get(j, k)));
        }
    }
    TropicalMatrix::new(a.rows, b.cols, out)
}

/// `A^{⊗L}` by repeated squaring. `L = 0` is rejected.
pub fn trop_power<T: Real>(a: &TropicalMatrix<T>, layers: usize) -> Result<TropicalMatrix<T>> {
    a.require_square()?;
    if layers == 0 {
        return Err(Error::ZeroPower);
    }
    let mut base = a.clone();
    let mut acc: Option<TropicalMatrix<T>> = None;
    let mut e = layers;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(m) => trop_matmul(&m, &base)?,
                None => base.clone(),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = trop_matmul(&base, &base)?;
    }
    Ok(acc.expect("layers >= 1"))
}

/// Applies a stack of per-layer score matrices in order: `A_L ⊗ (… ⊗ (A_1 ⊗ V))`.
pub fn matvec_layers<T: Real>(
    layers: &[TropicalMatrix<T>],
    v0: &ValueVector<T>,
) -> Result<ValueVector<T>> {
    if layers.is_empty() {
        return Err(Error::ZeroPower);
    }
    layers
        .iter()
        .try_fold(v0.clone(), |v, a| trop_matvec(a, &v))
}

/// Per row, the smallest `j` attaining `max_j (A_ij + v_j)`. Needs scalar values.
pub fn argmax_row_witness<T: Real>(
    a: &TropicalMatrix<T>,
    v: &ValueVector<T>,
) -> Result<WitnessVector> {
    v.require_scalar()?;
    if a.cols != v.len {
        return Err(Error::DimensionMismatch {
            op: "argmax_row_witness",
            expected: a.cols,
            found: v.len,
        });
    }
    let indices = a
        .row_iter()
        .enumerate()
        .map(|(i, row)| {
            row_argmax(row, |j| v.get(j, 0))
                .map(|(j, _)| j)
                .ok_or(Error::AllBottomRow { row: i })
        })
        .collect::<Result<_>>()?;
    Ok(WitnessVector { indices })
}

/// Best length-`L` path ending at `target`, recovered by storing each
/// relaxation's argmax and backtracking.
///
/// The weight is accumulated as `v0[j_0] + A[j_1, j_0] + …`, i.e. in path
/// order, so [`PathWitness::recompute_weight`] reproduces it bit-for-bit.
pub fn reconstruct_path<T: Real>(
    a: &TropicalMatrix<T>,
    v0: &ValueVector<T>,
    layers: usize,
    target: usize,
) -> Result<PathWitness<T>> {
    let n = a.require_square()?;
    v0.require_scalar()?;
    if layers == 0 {
        return Err(Error::ZeroPower);
    }
    if v0.len != n {
        return Err(Error::DimensionMismatch {
            op: "reconstruct_path",
            expected: n,
            found: v0.len,
        });
    }
    if target >= n {
        return Err(Error::IndexOutOfRange {
            index: target,
            len: n,
        });
    }

    let mut dist: Vec<Tropical<T>> = v0.entries.clone();
    let mut witnesses: Vec<Vec<Option<usize>>> = Vec::with_capacity(layers);
    for _ in 0..layers {
        let mut next = Vec::with_capacity(n);
        let mut wit = Vec::with_capacity(n);
        for row in a.row_iter() {
            // A_ij ⊗ dist_j is formed as dist_j + A_ij to keep path-order summation.
            match row_argmax(row, |j| dist[j]) {
                Some((j, _)) => {
                    next.push(trop_mul(dist[j], row[j]));
                    wit.push(Some(j));
                }
                None => {
                    next.push(Tropical::bottom());
                    wit.push(None);
                }
            }
        }
        dist = next;
        witnesses.push(wit);
    }

    let total_weight = dist[target];
    if total_weight.is_bottom() {
        return Err(Error::NoFinitePath { target });
    }
    let mut nodes = vec![target];
    let mut at = target;
    for wit in witnesses.iter().rev() {
        at = wit[at].expect("finite optimum has finite predecessors");
        nodes.push(at);
    }
    nodes.reverse();
    Ok(PathWitness {
        nodes,
        total_weight,
    })
}
