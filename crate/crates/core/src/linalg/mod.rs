//! Exact linear algebra used by the invariant computations.
//!
//! * [`modular`]: Howell forms over ℤ/N (ℤ₂ included), for kernels, solving
//!   and canonical coset representatives.
//! * [`lattice`]: integer row echelon forms with transforms, for deciding
//!   membership in the image of an integer matrix over the torus ℚ/ℤ.

pub mod lattice;
pub mod modular;

/// Row-sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    /// Builds a matrix from rows of `(column, value)` pairs. Duplicate
    /// columns in a row are summed and zeros dropped.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, i64)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.sort_unstable_by_key(|&(c, _)| c);
                let mut merged: Vec<(usize, i64)> = Vec::with_capacity(r.len());
                for (c, v) in r {
                    assert!(c < ncols, "column {c} out of range");
                    match merged.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|&(_, v)| v != 0);
                merged
            })
            .collect::<Vec<_>>();
        SparseMatrix { nrows: rows.len(), ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(usize, i64)]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                out[j].push((i, v));
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, rows: out }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; self.ncols];
                for &(j, v) in r {
                    d[j] = v;
                }
                d
            })
            .collect()
    }

    /// Columns of the matrix as dense rows with entries reduced mod `n`,
    /// i.e. `Mᵀ` ready for left solves over ℤ/n.
    pub fn transpose_dense_mod(&self, n: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.nrows]; self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                out[j][i] = v.rem_euclid(n as i64) as u64;
            }
        }
        out
    }

    /// `M·x` with `x` in any ℤ-module given by `scale` and `add`.
    pub fn apply<T: Copy>(
        &self,
        x: &[T],
        zero: T,
        scale: impl Fn(T, i64) -> T,
        add: impl Fn(T, T) -> T,
    ) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "vector length does not match matrix columns");
        self.rows
            .iter()
            .map(|r| r.iter().fold(zero, |acc, &(j, v)| add(acc, scale(x[j], v))))
            .collect()
    }

    /// The matrix with each row replaced by `row(i) - row(j)`.
    pub fn combine_rows(&self, pairs: &[(usize, Option<usize>)]) -> SparseMatrix {
        let rows = pairs
            .iter()
            .map(|&(i, j)| {
                let mut r = self.rows[i].clone();
                if let Some(j) = j {
                    r.extend(self.rows[j].iter().map(|&(c, v)| (c, -v)));
                }
                r
            })
            .collect();
        SparseMatrix::from_rows(self.ncols, rows)
    }
}
