//! Sparse matrices with exact rational entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{ratio_string, to_f64};

/// Row-major sparse matrix. Rows hold `(column, value)` pairs sorted by
/// column, with no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigRational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| BigRational::one()))
    }

    pub fn diagonal(values: impl IntoIterator<Item = BigRational>) -> Self {
        let data: Vec<Vec<(usize, BigRational)>> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if v.is_zero() {
                    Vec::new()
                } else {
                    vec![(i, v)]
                }
            })
            .collect();
        let n = data.len();
        SparseMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigRational)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            assert!(
                i < rows && j < cols,
                "triplet ({i}, {j}) outside {rows}x{cols}"
            );
            *acc[i].entry(j).or_insert_with(BigRational::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// All non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            data[j].push((i, v.clone()));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, v * q)).collect())
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row: BTreeMap<usize, BigRational> = a.iter().cloned().collect();
                for (j, v) in b {
                    let slot = row.entry(*j).or_insert_with(BigRational::zero);
                    if negate {
                        *slot -= v;
                    } else {
                        *slot += v;
                    }
                }
                row.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(BigRational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Kronecker product `self ⊗ other`, index `(i, k) ↦ i·other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let triplets = self.entries().flat_map(|(i, j, a)| {
            other
                .entries()
                .map(move |(k, l, b)| (i * other.rows + k, j * other.cols + l, a * b))
        });
        Self::from_triplets(self.rows * other.rows, self.cols * other.cols, triplets)
    }

    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().map(|(j, v)| v * &x[*j]).sum())
            .collect()
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .iter()
            .map(|row| row.iter().map(|(j, v)| to_f64(v) * x[*j]).sum())
            .collect()
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        let data = rows
            .iter()
            .map(|&i| {
                let mut row: Vec<(usize, BigRational)> = self.data[i]
                    .iter()
                    .filter(|(j, _)| col_pos[*j] != usize::MAX)
                    .map(|(j, v)| (col_pos[*j], v.clone()))
                    .collect();
                row.sort_by_key(|(j, _)| *j);
                row
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn max_abs_entry(&self) -> BigRational {
        self.entries()
            .map(|(_, _, v)| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Exact rank by sparse Gaussian elimination over ℚ.
    pub fn rank(&self) -> usize {
        let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for row in &self.data {
            let mut r: BTreeMap<usize, BigRational> = row.iter().cloned().collect();
            while let Some((&c, lead)) = r.iter().next() {
                let Some(p) = pivots.get(&c) else {
                    pivots.insert(c, r);
                    break;
                };
                let factor = lead / &p[&c];
                for (j, v) in p {
                    let slot = r.entry(*j).or_insert_with(BigRational::zero);
                    *slot -= &factor * v;
                    if slot.is_zero() {
                        r.remove(j);
                    }
                }
            }
        }
        pivots.len()
    }

    pub fn to_dense_f64(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for (i, j, v) in self.entries() {
            out[i * self.cols + j] = to_f64(v);
        }
        out
    }

    /// Coordinate-list dump: header `dim n` (or `dim r c` when not square)
    /// followed by `row col num/den` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if self.rows == self.cols {
            writeln!(out, "dim {}", self.rows).unwrap();
        } else {
            writeln!(out, "dim {} {}", self.rows, self.cols).unwrap();
        }
        for (i, j, v) in self.entries() {
            writeln!(out, "{i} {j} {}", ratio_string(v)).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: usize, cols: usize, vals: &[i64]) -> SparseMatrix {
        SparseMatrix::from_triplets(
            rows,
            cols,
            vals.iter()
                .enumerate()
                .map(|(k, &v)| (k / cols, k % cols, int(v))),
        )
    }

    #[test]
    fn multiply_and_transpose() {
        let a = m(2, 3, &[1, 2, 0, 0, 1, -1]);
        let b = m(3, 2, &[1, 0, 0, 1, 1, 1]);
        assert_eq!(a.mul(&b), m(2, 2, &[1, 2, -1, 0]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.nnz(), 4);
    }

    #[test]
    fn rank_of_singular_matrices() {
        assert_eq!(m(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]).rank(), 2);
        assert_eq!(SparseMatrix::identity(5).rank(), 5);
        assert_eq!(SparseMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(m(2, 2, &[0, 1, 1, 0]).rank(), 2);
    }

    #[test]
    fn kron_with_identity_is_block_diagonal() {
        let a = m(2, 2, &[0, 1, 1, 0]);
        let k = SparseMatrix::identity(2).kron(&a);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(2, 3), int(1));
        assert_eq!(k.get(0, 2), int(0));
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = m(2, 2, &[1, -2, 3, 4]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&a), a.scale(&int(2)));
    }

    #[test]
    fn dump_format() {
        let a = m(2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.dump(), "dim 2\n0 1 1/1\n1 0 1/1\n");
    }
}
