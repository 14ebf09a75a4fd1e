//! Integer row reduction and linear systems over the torus ℚ/ℤ.
//!
//! For an integer matrix `D`, a vector `r ∈ (ℚ/ℤ)ᵐ` lies in `D·(ℚ/ℤ)ⁿ` iff
//! `u·r = 0` for every integer `u` with `u·D = 0`. Both the test and a
//! witness solution come out of one echelon pass over `[D | r]`.

use crate::coeff::Phase;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

fn checked_axpy(dst: &mut [i64], q: i64, src: &[i64]) -> Result<()> {
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = d.checked_sub(q.checked_mul(s).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
        }
    }
    Ok(())
}

/// Integer echelon pass over the first `ncols` columns. Row operations are
/// reported through `on_sub(dst, q, src)` (`dst −= q·src`), `on_neg` and
/// `on_swap`. Returns the pivot columns; rows `0..pivots.len()` are the
/// echelon rows and the remaining rows vanish on the first `ncols` columns.
fn echelon<F, G, S>(rows: &mut [Vec<i64>], ncols: usize, mut on_sub: F, mut on_neg: G, mut on_swap: S) -> Result<Vec<usize>>
where
    F: FnMut(usize, i64, usize) -> Result<()>,
    G: FnMut(usize),
    S: FnMut(usize, usize),
{
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| rows[i][j] != 0)
                .min_by_key(|&i| (rows[i][j].unsigned_abs(), i));
            let Some(p) = best else { break };
            if p != r {
                rows.swap(p, r);
                on_swap(p, r);
            }
            let mut done = true;
            for i in r + 1..m {
                if rows[i][j] == 0 {
                    continue;
                }
                let q = rows[i][j].div_euclid(rows[r][j]);
                let (top, rest) = rows.split_at_mut(i);
                checked_axpy(&mut rest[0], q, &top[r])?;
                on_sub(i, q, r)?;
                if rows[i][j] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && rows[r][j] != 0 {
            if rows[r][j] < 0 {
                for x in rows[r].iter_mut() {
                    *x = -*x;
                }
                on_neg(r);
            }
            pivots.push(j);
            r += 1;
        }
    }
    Ok(pivots)
}

/// Integer basis of `{u ∈ ℤᵐ : u·D = 0}`, from the transform rows of an
/// echelon pass over `[D | I]`.
pub fn integer_left_kernel(d: &SparseMatrix) -> Result<Vec<Vec<i64>>> {
    let (m, n) = (d.nrows(), d.ncols());
    let mut rows = d.to_dense();
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend((0..m).map(|k| i64::from(i == k)));
    }
    let rank = echelon(&mut rows, n, |_, _, _| Ok(()), |_| {}, |_, _| {})?.len();
    Ok(rows.split_off(rank).into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Outcome of a torus solve `D·x = r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusSolution {
    /// A solution `x`.
    Solved(Vec<Phase>),
    /// Index of an echelon row whose `D`-part vanished while the right-hand
    /// side did not, with the offending value.
    Obstructed { row: usize, value: Phase },
}

/// Solves `D·x = r` over ℚ/ℤ by integer elimination on `[D | r]` and back
/// substitution. Free unknowns are set to zero.
pub fn torus_solve(d: &SparseMatrix, r: &[Phase]) -> Result<TorusSolution> {
    assert_eq!(r.len(), d.nrows(), "right-hand side length mismatch");
    let mut rows = d.to_dense();
    let rhs = std::cell::RefCell::new(r.to_vec());
    let pivots = echelon(
        &mut rows,
        d.ncols(),
        |dst, q, src| {
            let mut v = rhs.borrow_mut();
            v[dst] = v[dst] - v[src].scale(q);
            Ok(())
        },
        |i| {
            let mut v = rhs.borrow_mut();
            v[i] = -v[i];
        },
        |i, k| rhs.borrow_mut().swap(i, k),
    )?;
    let rhs = rhs.into_inner();
    let rank = pivots.len();
    if let Some(row) = (rank..rows.len()).find(|&i| rhs[i] != Phase::ZERO) {
        return Ok(TorusSolution::Obstructed { row, value: rhs[row] });
    }
    let mut x = vec![Phase::ZERO; d.ncols()];
    for i in (0..rank).rev() {
        let j = pivots[i];
        let mut acc = rhs[i];
        for (k, &v) in rows[i].iter().enumerate().skip(j + 1) {
            if v != 0 {
                acc = acc - x[k].scale(v);
            }
        }
        x[j] = acc.div_int(rows[i][j]);
    }
    Ok(TorusSolution::Solved(x))
}

/// `u·r` in ℚ/ℤ.
pub fn pair(u: &[i64], r: &[Phase]) -> Phase {
    u.iter()
        .zip(r)
        .filter(|(&c, _)| c != 0)
        .fold(Phase::ZERO, |acc, (&c, &p)| acc + p.scale(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(d: &SparseMatrix, x: &[Phase]) -> Vec<Phase> {
        d.apply(x, Phase::ZERO, |p, v| p.scale(v), |p, q| p + q)
    }

    #[test]
    fn doubling_map() {
        // D = [2]: every phase is twice something
        let d = SparseMatrix::from_rows(1, vec![vec![(0, 2)]]);
        let r = vec![Phase::new(1, 3)];
        match torus_solve(&d, &r).unwrap() {
            TorusSolution::Solved(x) => assert_eq!(apply(&d, &x), r),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn obstruction_from_kernel() {
        // D = [1; 1]: image is the diagonal
        let d = SparseMatrix::from_rows(1, vec![vec![(0, 1)], vec![(0, 1)]]);
        let k = integer_left_kernel(&d).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(pair(&k[0], &[Phase::HALF, Phase::HALF]), Phase::ZERO);
        assert_ne!(pair(&k[0], &[Phase::HALF, Phase::ZERO]), Phase::ZERO);
        let r = vec![Phase::new(1, 4), Phase::ZERO];
        assert!(matches!(torus_solve(&d, &r).unwrap(), TorusSolution::Obstructed { .. }));
    }

    #[test]
    fn random_images_are_solved() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (m, n) = (rng.gen_range(1..7), rng.gen_range(1..6));
            let rows = (0..m)
                .map(|_| (0..n).filter_map(|j| {
                    let v = rng.gen_range(-3i64..4);
                    (v != 0).then_some((j, v))
                }).collect())
                .collect();
            let d = SparseMatrix::from_rows(n, rows);
            let x0: Vec<Phase> = (0..n).map(|_| Phase::new(rng.gen_range(0..24), 24)).collect();
            let r = apply(&d, &x0);
            match torus_solve(&d, &r).unwrap() {
                TorusSolution::Solved(x) => assert_eq!(apply(&d, &x), r),
                other => panic!("{other:?}"),
            }
            for u in integer_left_kernel(&d).unwrap() {
                let ud: Vec<i64> = (0..n)
                    .map(|j| d.to_dense().iter().zip(&u).map(|(row, &c)| row[j] * c).sum())
                    .collect();
                assert!(ud.iter().all(|&v| v == 0));
                assert_eq!(pair(&u, &r), Phase::ZERO);
            }
        }
    }
}
