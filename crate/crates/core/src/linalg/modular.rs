//! Howell normal forms over ℤ/N.
//!
//! A Howell form of a row span `S ⊆ (ℤ/N)ⁿ` is a row echelon basis whose
//! pivots divide `N`, whose entries above each pivot are reduced modulo that
//! pivot, and such that for every column `j` the rows with leading column
//! `≥ j` span all of `S ∩ {v : v₀ = … = v_{j−1} = 0}`. With that property,
//! greedy reduction by the rows yields the lexicographically least element
//! of each coset of `S`, and membership is a single reduction.

use num_integer::Integer;

/// `(g, s, t)` with `g = s·a + t·b`, `g ≥ 0`.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[inline]
fn modn(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// A unit `u` of ℤ/N with `u·a ≡ gcd(a, N)`.
fn normalizing_unit(a: u64, n: u64) -> u64 {
    let g = a.gcd(&n);
    let m = n / g;
    if m == 1 {
        return 1;
    }
    let (_, s, _) = xgcd((a / g) as i128, m as i128);
    let mut u = modn(s, m);
    while u.gcd(&n) != 1 {
        u += m;
    }
    u
}

/// Row span over ℤ/N in Howell form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    modulus: u64,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl HowellForm {
    /// Howell form of the span of `rows` (entries are reduced mod `modulus`).
    pub fn new(modulus: u64, ncols: usize, rows: Vec<Vec<u64>>) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let n = modulus;
        let mut a: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "row length mismatch");
                r.into_iter().map(|x| x % n).collect()
            })
            .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..ncols {
            if r == a.len() {
                break;
            }
            for i in r + 1..a.len() {
                if a[i][j] == 0 {
                    continue;
                }
                let (x, y) = (a[r][j] as i128, a[i][j] as i128);
                let (g, s, t) = xgcd(x, y);
                let (p, q) = (y / g, x / g);
                let (top, rest) = a.split_at_mut(i);
                let (ra, ri) = (&mut top[r], &mut rest[0]);
                for k in j..ncols {
                    let (u, v) = (ra[k] as i128, ri[k] as i128);
                    ra[k] = modn(s * u + t * v, n);
                    ri[k] = modn(p * u - q * v, n);
                }
            }
            if a[r][j] == 0 {
                continue;
            }
            let u = normalizing_unit(a[r][j], n) as u128;
            for x in a[r][j..].iter_mut() {
                *x = ((*x as u128 * u) % n as u128) as u64;
            }
            let p = a[r][j];
            let (above, below) = a.split_at_mut(r);
            let pivot_row = &below[0];
            for row in above.iter_mut() {
                let q = row[j] / p;
                if q != 0 {
                    for k in j..ncols {
                        row[k] = modn(row[k] as i128 - q as i128 * pivot_row[k] as i128, n);
                    }
                }
            }
            if p != 1 {
                let f = (n / p) as u128;
                let extra: Vec<u64> = a[r].iter().map(|&x| ((x as u128 * f) % n as u128) as u64).collect();
                if extra.iter().any(|&x| x != 0) {
                    a.push(extra);
                }
            }
            pivots.push(j);
            r += 1;
        }
        a.truncate(r);
        HowellForm { modulus, ncols, rows: a, pivots }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of elements of the span, if it fits in `u128`.
    pub fn span_size(&self) -> Option<u128> {
        self.rows.iter().zip(&self.pivots).try_fold(1u128, |acc, (r, &j)| {
            acc.checked_mul((self.modulus / r[j]) as u128)
        })
    }

    /// Lexicographically least element of `v + span`, together with the
    /// coefficients `q` such that `v − Σ qᵢ·rowᵢ` is that element.
    pub fn reduce_with_coeffs(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert_eq!(v.len(), self.ncols);
        let n = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % n).collect();
        let mut q = Vec::with_capacity(self.rows.len());
        for (row, &j) in self.rows.iter().zip(&self.pivots) {
            let c = w[j] / row[j];
            q.push(c);
            if c != 0 {
                for k in j..self.ncols {
                    w[k] = modn(w[k] as i128 - c as i128 * row[k] as i128, n);
                }
            }
        }
        (w, q)
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.reduce_with_coeffs(v).0
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Howell form of `[B | I]`, used for left kernels and left solves of `B`.
#[derive(Clone, Debug)]
pub struct AugmentedHowell {
    split: usize,
    height: usize,
    form: HowellForm,
}

impl AugmentedHowell {
    /// `b` has one row per unknown; the system is `x·B = y`.
    pub fn new(modulus: u64, b: &[Vec<u64>], ncols: usize) -> Self {
        let height = b.len();
        let rows = b
            .iter()
            .enumerate()
            .map(|(i, r)| {
                assert_eq!(r.len(), ncols);
                let mut row = Vec::with_capacity(ncols + height);
                row.extend(r.iter().map(|&x| x % modulus));
                row.extend((0..height).map(|k| u64::from(k == i)));
                row
            })
            .collect();
        AugmentedHowell { split: ncols, height, form: HowellForm::new(modulus, ncols + height, rows) }
    }

    /// Generators of `{x : x·B = 0}`, in Howell form.
    pub fn left_kernel(&self) -> Vec<Vec<u64>> {
        self.form
            .rows
            .iter()
            .zip(&self.form.pivots)
            .filter(|(_, &j)| j >= self.split)
            .map(|(r, _)| r[self.split..].to_vec())
            .collect()
    }

    /// Howell form of the row span of `B`.
    pub fn image(&self) -> HowellForm {
        let rows = self
            .form
            .rows
            .iter()
            .zip(&self.form.pivots)
            .filter(|(_, &j)| j < self.split)
            .map(|(r, _)| r[..self.split].to_vec())
            .collect();
        HowellForm::new(self.form.modulus, self.split, rows)
    }

    /// Some `x` with `x·B = y`.
    pub fn solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(y.len(), self.split);
        let n = self.form.modulus;
        let mut v = y.to_vec();
        v.extend(std::iter::repeat_n(0, self.height));
        let (w, _) = self.form.reduce_with_coeffs(&v);
        if w[..self.split].iter().any(|&x| x != 0) {
            return None;
        }
        Some(w[self.split..].iter().map(|&x| (n - x) % n).collect())
    }
}

/// `x·B` over ℤ/N.
pub fn left_mul(modulus: u64, x: &[u64], b: &[Vec<u64>], ncols: usize) -> Vec<u64> {
    let mut out = vec![0u128; ncols];
    let n = modulus as u128;
    for (&c, row) in x.iter().zip(b) {
        if c == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(row) {
            *o = (*o + c as u128 * v as u128) % n;
        }
    }
    out.into_iter().map(|v| v as u64).collect()
}

/// Left kernel of `B` over ℤ/N.
pub fn left_kernel(modulus: u64, b: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    AugmentedHowell::new(modulus, b, ncols).left_kernel()
}

/// Some `x` with `x·B = y` over ℤ/N.
pub fn solve_left(modulus: u64, b: &[Vec<u64>], ncols: usize, y: &[u64]) -> Option<Vec<u64>> {
    AugmentedHowell::new(modulus, b, ncols).solve(y)
}
