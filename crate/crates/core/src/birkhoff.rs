//! Doubly stochastic matrices and their Birkhoff–von Neumann decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;
use crate::vectors::ProbVector;

/// Square nonnegative matrix with unit row and column sums, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<T>>", into = "Vec<Vec<T>>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct DoublyStochasticMatrix<T> {
    d: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DoublyStochasticMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::with_tol(rows, T::TOL)
    }

    /// Validates against `tol`; entries in `[-tol, 0)` are clamped to zero.
    pub fn with_tol(rows: Vec<Vec<T>>, tol: T) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(d * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::Dimension {
                    expected: d,
                    found: row.len(),
                });
            }
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_finite() || x < -tol {
                    return Err(Error::NotDoublyStochastic(format!("entry ({i},{j}) = {x}")));
                }
                entries.push(x.max(T::zero()));
            }
        }
        let m = Self { d, entries };
        for i in 0..d {
            let r = m.row_sum(i);
            let c = m.col_sum(i);
            if (r - T::one()).abs() > tol.max(T::from_count(d) * T::epsilon()) {
                return Err(Error::NotDoublyStochastic(format!("row {i} sums to {r}")));
            }
            if (c - T::one()).abs() > tol.max(T::from_count(d) * T::epsilon()) {
                return Err(Error::NotDoublyStochastic(format!(
                    "column {i} sums to {c}"
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::from_permutation_mixture(&[T::one()], &[(0..d).collect()])
    }

    /// Every entry `1/d`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        let w = T::one() / T::from_count(d);
        Ok(Self {
            d,
            entries: vec![w; d * d],
        })
    }

    /// `Σ weights[n] · Π(perms[n])`, where `Π(σ)` has a one at `(i, σ[i])`.
    pub fn from_permutation_mixture(weights: &[T], perms: &[Vec<usize>]) -> Result<Self> {
        let d = perms.first().map(Vec::len).ok_or(Error::Empty)?;
        if weights.len() != perms.len() {
            return Err(Error::Dimension {
                expected: perms.len(),
                found: weights.len(),
            });
        }
        let mut rows = vec![vec![T::zero(); d]; d];
        for (&w, perm) in weights.iter().zip(perms) {
            check_permutation(perm, d)?;
            for (i, &j) in perm.iter().enumerate() {
                rows[i][j] = rows[i][j] + w;
            }
        }
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.d).map(<[T]>::to_vec).collect()
    }

    fn row_sum(&self, i: usize) -> T {
        self.entries[i * self.d..(i + 1) * self.d]
            .iter()
            .copied()
            .sum()
    }

    fn col_sum(&self, j: usize) -> T {
        (0..self.d).map(|i| self.get(i, j)).sum()
    }

    /// Largest deviation of any row or column sum from one.
    pub fn stochasticity_defect(&self) -> T {
        (0..self.d)
            .flat_map(|i| [self.row_sum(i), self.col_sum(i)])
            .map(|s| (s - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T: Scalar> TryFrom<Vec<Vec<T>>> for DoublyStochasticMatrix<T> {
    type Error = Error;

    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl<T: Scalar> From<DoublyStochasticMatrix<T>> for Vec<Vec<T>> {
    fn from(m: DoublyStochasticMatrix<T>) -> Self {
        m.rows()
    }
}

fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    if perm.len() != d {
        return Err(Error::Dimension {
            expected: d,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; d];
    for &j in perm {
        if j >= d || std::mem::replace(&mut seen[j], true) {
            return Err(domain(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// The witness taking the `k`-photon spectrum (zero-padded) to the
/// `(k+1)`-photon spectrum: `sin²θ` on the diagonal, `cos²θ` on the
/// subdiagonal and in the top-right corner. Size `(k+2)×(k+2)`.
pub fn bs_witness_matrix<T: Scalar>(k: usize, theta: T) -> Result<DoublyStochasticMatrix<T>> {
    if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
        return Err(domain(format!("theta = {theta} outside [0, pi/2]")));
    }
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let d = k + 2;
    let mut entries = vec![T::zero(); d * d];
    for i in 0..d {
        entries[i * d + i] = s2;
        if i + 1 < d {
            entries[(i + 1) * d + i] = c2;
        }
    }
    entries[d - 1] = c2;
    Ok(DoublyStochasticMatrix { d, entries })
}

/// Matrix–vector product `D · q`.
pub fn apply<T: Scalar>(m: &DoublyStochasticMatrix<T>, q: &ProbVector<T>) -> Result<ProbVector<T>> {
    if m.d != q.dim() {
        return Err(Error::Dimension {
            expected: m.d,
            found: q.dim(),
        });
    }
    let out = m
        .entries
        .chunks(m.d)
        .map(|row| row.iter().zip(q.iter()).map(|(a, b)| *a * *b).sum())
        .collect();
    ProbVector::new(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffDecomposition<T> {
    pub weights: Vec<T>,
    /// `perms[n][i]` is the column holding the one in row `i` of `Π_n`.
    pub perms: Vec<Vec<usize>>,
}

impl<T: Scalar> BirkhoffDecomposition<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reconstruct(&self) -> Vec<Vec<T>> {
        let d = self.perms.first().map_or(0, Vec::len);
        let mut rows = vec![vec![T::zero(); d]; d];
        for (&w, perm) in self.weights.iter().zip(&self.perms) {
            for (i, &j) in perm.iter().enumerate() {
                rows[i][j] = rows[i][j] + w;
            }
        }
        rows
    }

    pub fn reconstruction_error(&self, m: &DoublyStochasticMatrix<T>) -> T {
        let rows = self.reconstruct();
        let mut err = T::zero();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let r = rows
                    .get(i)
                    .and_then(|r| r.get(j))
                    .copied()
                    .unwrap_or(T::zero());
                err = err.max((r - m.get(i, j)).abs());
            }
        }
        err
    }
}

/// Greedy peeling: find a perfect matching on the entries above `tol`,
/// subtract the smallest matched entry times that permutation, repeat.
///
/// Each step zeroes at least one support entry, so the residual moves to a
/// strictly lower-dimensional face of the polytope and the term count stays
/// within `(d−1)² + 1`.
pub fn birkhoff_decompose<T: Scalar>(
    m: &DoublyStochasticMatrix<T>,
) -> Result<BirkhoffDecomposition<T>> {
    birkhoff_decompose_with_tol(m, T::TOL)
}

pub fn birkhoff_decompose_with_tol<T: Scalar>(
    m: &DoublyStochasticMatrix<T>,
    tol: T,
) -> Result<BirkhoffDecomposition<T>> {
    let d = m.d;
    let mut residual = m.entries.clone();
    let mut weights = Vec::new();
    let mut perms = Vec::new();
    // Rows whose entries all sit below `tol` can hold up to d·tol of
    // roundoff; that much is treated as exhausted rather than as a failure.
    let floor = T::from_count(d) * tol;

    loop {
        let row_mass = (0..d)
            .map(|i| residual[i * d..(i + 1) * d].iter().copied().sum::<T>())
            .fold(T::zero(), T::max);
        if residual.iter().all(|&x| x <= tol) {
            break;
        }
        let support: Vec<Vec<usize>> = (0..d)
            .map(|i| (0..d).filter(|&j| residual[i * d + j] > tol).collect())
            .collect();
        let Some(perm) = perfect_matching(&support, d) else {
            if row_mass <= floor {
                break;
            }
            return Err(Error::NoPerfectMatching {
                residual: row_mass.to_f64().unwrap_or(f64::NAN),
            });
        };
        let w = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| residual[i * d + j])
            .fold(T::infinity(), T::min);
        for (i, &j) in perm.iter().enumerate() {
            let cell = &mut residual[i * d + j];
            *cell = if *cell - w <= tol {
                T::zero()
            } else {
                *cell - w
            };
        }
        weights.push(w);
        perms.push(perm);
    }
    Ok(BirkhoffDecomposition { weights, perms })
}

/// Kuhn's augmenting-path matching on a bipartite graph with `d` vertices per
/// side. `adj[i]` lists the columns row `i` may use. Returns the column for
/// each row when a perfect matching exists.
pub fn perfect_matching(adj: &[Vec<usize>], d: usize) -> Option<Vec<usize>> {
    let mut row_of_col = vec![usize::MAX; d];
    for row in 0..adj.len() {
        let mut visited = vec![false; d];
        if !augment(row, adj, &mut visited, &mut row_of_col) {
            return None;
        }
    }
    let mut col_of_row = vec![usize::MAX; adj.len()];
    for (col, &row) in row_of_col.iter().enumerate() {
        if row != usize::MAX {
            col_of_row[row] = col;
        }
    }
    Some(col_of_row)
}

fn augment(row: usize, adj: &[Vec<usize>], visited: &mut [bool], row_of_col: &mut [usize]) -> bool {
    for &col in &adj[row] {
        if visited[col] {
            continue;
        }
        visited[col] = true;
        if row_of_col[col] == usize::MAX || augment(row_of_col[col], adj, visited, row_of_col) {
            row_of_col[col] = row;
            return true;
        }
    }
    false
}
