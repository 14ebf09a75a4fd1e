//! Dense cochains `Gⁿ → A ⊕ A` and the twisted differentials
//!
//! ```text
//! d¹x(g,h)     = x^{a(g)}(h) + x(g) − x(gh)
//! d²y(g,h,k)   = y^{a(g)}(h,k) + y(g,hk) − y(gh,k) − y(g,h)
//! d³z(g,h,k,f) = z^{a(g)}(h,k,f) + z(g,hk,f) + z(g,h,k) − z(gh,k,f) − z(g,h,kf)
//! ```
//!
//! written additively. Entries are indexed by tuples of element indices in
//! row-major order; the linearized form of a cochain puts the `plus` and
//! `minus` components of tuple `t` in slots `2t` and `2t + 1`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{bit_dot, sign_of_bits, Bit, CoeffKind, Coefficient, Doubled, Eps, Phase};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Z2Hom};
use crate::linalg::SparseMatrix;

pub const MAX_DEGREE: usize = 4;

/// A cochain of degree `1..=4` with doubled coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain<A> {
    group: Arc<FiniteGroup>,
    degree: usize,
    entries: Vec<Doubled<A>>,
}

pub type BitCochain = Cochain<Bit>;
pub type PhaseCochain = Cochain<Phase>;

#[inline]
pub(crate) fn tuple_count(order: usize, degree: usize) -> usize {
    order.pow(degree as u32)
}

/// Row-major index of a tuple of element indices.
#[inline]
pub fn tuple_index(order: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

/// Inverse of [`tuple_index`]; only the first `degree` entries are used.
#[inline]
pub fn tuple_of(order: usize, degree: usize, mut index: usize) -> [usize; MAX_DEGREE + 1] {
    let mut t = [0; MAX_DEGREE + 1];
    for i in (0..degree).rev() {
        t[i] = index % order;
        index /= order;
    }
    t
}

fn check_degree(degree: usize) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&degree) {
        Ok(())
    } else {
        Err(Error::invalid(format!("cochain degree must be in 1..=4, got {degree}")))
    }
}

impl<A: Coefficient> Cochain<A> {
    /// The constant identity cochain.
    pub fn identity(group: &Arc<FiniteGroup>, degree: usize) -> Self {
        check_degree(degree).expect("valid degree");
        Cochain {
            group: group.clone(),
            degree,
            entries: vec![Doubled::zero(); tuple_count(group.order(), degree)],
        }
    }

    pub fn from_fn(
        group: &Arc<FiniteGroup>,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Doubled<A>,
    ) -> Self {
        check_degree(degree).expect("valid degree");
        let n = group.order();
        let entries = (0..tuple_count(n, degree))
            .map(|i| f(&tuple_of(n, degree, i)[..degree]))
            .collect();
        Cochain { group: group.clone(), degree, entries }
    }

    pub fn from_entries(group: &Arc<FiniteGroup>, degree: usize, entries: Vec<Doubled<A>>) -> Result<Self> {
        check_degree(degree)?;
        let expected = tuple_count(group.order(), degree);
        if entries.len() != expected {
            return Err(Error::invalid(format!(
                "degree {degree} cochain on a group of order {} needs {expected} entries, got {}",
                group.order(),
                entries.len()
            )));
        }
        Ok(Cochain { group: group.clone(), degree, entries })
    }

    /// Cochain whose plus and minus components are both `f(t)`.
    pub fn diagonal_from_fn(group: &Arc<FiniteGroup>, degree: usize, mut f: impl FnMut(&[usize]) -> A) -> Self {
        Self::from_fn(group, degree, |t| Doubled::diagonal(f(t)))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> CoeffKind {
        A::KIND
    }

    pub fn entries(&self) -> &[Doubled<A>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, tuple: &[usize]) -> Doubled<A> {
        debug_assert_eq!(tuple.len(), self.degree);
        self.entries[tuple_index(self.group.order(), tuple)]
    }

    #[inline]
    pub fn at(&self, index: usize) -> Doubled<A> {
        self.entries[index]
    }

    pub fn set(&mut self, tuple: &[usize], value: Doubled<A>) {
        let i = tuple_index(self.group.order(), tuple);
        self.entries[i] = value;
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        tuple_of(self.group.order(), self.degree, index)[..self.degree].to_vec()
    }

    pub fn map<B: Coefficient>(&self, mut f: impl FnMut(Doubled<A>) -> Doubled<B>) -> Cochain<B> {
        Cochain {
            group: self.group.clone(),
            degree: self.degree,
            entries: self.entries.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|e| e.is_diagonal())
    }

    /// True when every entry with an identity argument is the identity.
    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        self.entries.iter().enumerate().all(|(i, e)| {
            e.is_zero() || tuple_of(n, self.degree, i)[..self.degree].iter().all(|&g| g != 0)
        })
    }

    /// Zeroes every entry with an identity argument.
    pub fn normalized_part(&self) -> Self {
        let n = self.group.order();
        let mut out = self.clone();
        for (i, e) in out.entries.iter_mut().enumerate() {
            if tuple_of(n, self.degree, i)[..self.degree].contains(&0) {
                *e = Doubled::zero();
            }
        }
        out
    }

    pub fn component(&self, eps: Eps) -> Vec<A> {
        self.entries.iter().map(|e| e.get(eps)).collect()
    }

    /// First tuple index where the two cochains differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.entries.iter().zip(&other.entries).position(|(x, y)| x != y)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree || self.group != other.group {
            return Err(Error::invalid(format!(
                "cochain shapes differ: degree {} on order {} vs degree {} on order {}",
                self.degree,
                self.group.order(),
                other.degree,
                other.group.order()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        cochain_combine(CombineOp::Mul, self, other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        cochain_combine(CombineOp::Div, self, other)
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }
}

impl Cochain<Phase> {
    /// lcm of the entry denominators.
    pub fn denominator_bound(&self) -> u64 {
        use num_integer::Integer;
        self.entries
            .iter()
            .flat_map(|e| [e.plus.denominator(), e.minus.denominator()])
            .fold(1u64, |acc, d| acc.lcm(&d))
    }
}

impl<A: Coefficient> std::ops::Add for &Cochain<A> {
    type Output = Cochain<A>;
    fn add(self, rhs: &Cochain<A>) -> Cochain<A> {
        self.try_add(rhs).expect("cochain shapes must agree")
    }
}

impl<A: Coefficient> std::ops::Sub for &Cochain<A> {
    type Output = Cochain<A>;
    fn sub(self, rhs: &Cochain<A>) -> Cochain<A> {
        self.try_sub(rhs).expect("cochain shapes must agree")
    }
}

/// Pointwise product (`Mul`) or quotient (`Div`) of cochains, i.e. sum or
/// difference in additive notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Mul,
    Div,
}

pub fn cochain_combine<A: Coefficient>(op: CombineOp, x: &Cochain<A>, y: &Cochain<A>) -> Result<Cochain<A>> {
    x.same_shape(y)?;
    let entries = x
        .entries
        .iter()
        .zip(&y.entries)
        .map(|(&a, &b)| match op {
            CombineOp::Mul => a + b,
            CombineOp::Div => a - b,
        })
        .collect();
    Ok(Cochain { group: x.group.clone(), degree: x.degree, entries })
}

/// Calls `f(sign, twisted, source_index)` for each term of `dⁿ` at the
/// output tuple `t = (g₀, …, gₙ)`. `twisted` marks the term that carries
/// the swap `a(g₀)`.
#[inline]
fn for_each_term(group: &FiniteGroup, t: &[usize], mut f: impl FnMut(i64, bool, usize)) {
    let n = t.len() - 1;
    let order = group.order();
    f(1, true, tuple_index(order, &t[1..]));
    let mut buf = [0usize; MAX_DEGREE];
    for i in 1..=n {
        let mut len = 0;
        for (j, &g) in t.iter().enumerate() {
            if j == i {
                continue;
            }
            buf[len] = if j == i - 1 { group.mul(g, t[i]) } else { g };
            len += 1;
        }
        let sign = if i % 2 == 1 { -1 } else { 1 };
        f(sign, false, tuple_index(order, &buf[..len]));
    }
    let sign = if (n + 1) % 2 == 1 { -1 } else { 1 };
    f(sign, false, tuple_index(order, &t[..n]));
}

/// The twisted differential `dⁿ_a x` for `n = x.degree()`.
pub fn coboundary<A: Coefficient>(degree: usize, a: &Z2Hom, x: &Cochain<A>) -> Result<Cochain<A>> {
    if x.degree != degree || !(1..=3).contains(&degree) {
        return Err(Error::invalid(format!(
            "coboundary of degree {degree} applied to a degree {} cochain",
            x.degree
        )));
    }
    if a.values().len() != x.group.order() {
        return Err(Error::invalid("homomorphism and cochain live on different groups"));
    }
    let group = &*x.group;
    let order = group.order();
    let out_degree = degree + 1;
    let entries = (0..tuple_count(order, out_degree))
        .map(|idx| {
            let t = tuple_of(order, out_degree, idx);
            let t = &t[..out_degree];
            let twist = a.at(t[0]);
            let mut acc = Doubled::<A>::zero();
            for_each_term(group, t, |sign, twisted, src| {
                let v = if twisted { x.entries[src].swap_pow(twist) } else { x.entries[src] };
                acc = if sign > 0 { acc + v } else { acc - v };
            });
            acc
        })
        .collect();
    Ok(Cochain { group: x.group.clone(), degree: out_degree, entries })
}

/// Right-hand side of the cocycle condition on `c`:
/// `(g,h,k,f) ↦ (−1)^{κ(g,h)·κ^{a(gh)}(k,f)}`.
pub fn obstruction_rhs(kappa: &Cochain<Bit>, a: &Z2Hom) -> Result<Cochain<Phase>> {
    if kappa.degree != 2 {
        return Err(Error::invalid("obstruction needs a degree 2 cochain"));
    }
    let group = kappa.group.clone();
    Ok(Cochain::from_fn(&group, 4, |t| {
        let (g, h, k, f) = (t[0], t[1], t[2], t[3]);
        let twist = a.at(group.mul(g, h));
        sign_of_bits(bit_dot(kappa.get(&[g, h]), kappa.get(&[k, f]).swap_pow(twist)))
    }))
}

/// Integer matrix of `dⁿ_a` acting on linearized cochains.
#[derive(Clone, Debug)]
pub struct TwistMatrix {
    pub degree: usize,
    pub kind: CoeffKind,
    pub matrix: SparseMatrix,
}

impl TwistMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply_bits(&self, x: &[Bit]) -> Vec<Bit> {
        self.matrix.apply(x, Bit::ZERO, |b, v| if v % 2 == 0 { Bit::ZERO } else { b }, |p, q| p + q)
    }

    pub fn apply_phases(&self, x: &[Phase]) -> Vec<Phase> {
        self.matrix.apply(x, Phase::ZERO, |p, v| p.scale(v), |p, q| p + q)
    }
}

/// Full linearization of `dⁿ_a`: rows are the `2·|G|^{n+1}` output slots,
/// columns the `2·|G|ⁿ` input slots.
pub fn linearize(degree: usize, a: &Z2Hom, group: &FiniteGroup, kind: CoeffKind) -> Result<TwistMatrix> {
    if !(1..=3).contains(&degree) {
        return Err(Error::invalid(format!("no differential of degree {degree}")));
    }
    let order = group.order();
    let out_degree = degree + 1;
    let mut rows = Vec::with_capacity(2 * tuple_count(order, out_degree));
    for idx in 0..tuple_count(order, out_degree) {
        let t = tuple_of(order, out_degree, idx);
        let t = &t[..out_degree];
        let twist = a.at(t[0]).is_one();
        for comp in 0..2 {
            let mut row = Vec::with_capacity(degree + 2);
            for_each_term(group, t, |sign, twisted, src| {
                let c = if twisted && twist { 1 - comp } else { comp };
                row.push((2 * src + c, sign));
            });
            rows.push(row);
        }
    }
    let cols = 2 * tuple_count(order, degree);
    Ok(TwistMatrix { degree, kind, matrix: SparseMatrix::from_rows(cols, rows) })
}

/// Flattens a cochain into `[x(t₀)₊, x(t₀)₋, x(t₁)₊, …]`.
pub fn discretize<A: Coefficient>(x: &Cochain<A>) -> Vec<A> {
    x.entries.iter().flat_map(|e| [e.plus, e.minus]).collect()
}

pub fn undiscretize<A: Coefficient>(group: &Arc<FiniteGroup>, degree: usize, slots: &[A]) -> Result<Cochain<A>> {
    if !slots.len().is_multiple_of(2) {
        return Err(Error::invalid("slot vector has odd length"));
    }
    let entries = slots.chunks(2).map(|c| Doubled::new(c[0], c[1])).collect();
    Cochain::from_entries(group, degree, entries)
}

/// A coordinate system on a subgroup of cochains: optionally only tuples
/// without identity arguments, optionally only diagonal entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotSpace {
    order: usize,
    degree: usize,
    normalized: bool,
    diagonal: bool,
    tuples: Vec<usize>,
}

impl SlotSpace {
    pub fn new(group: &FiniteGroup, degree: usize, normalized: bool, diagonal: bool) -> Self {
        let order = group.order();
        let tuples = (0..tuple_count(order, degree))
            .filter(|&i| !normalized || !tuple_of(order, degree, i)[..degree].contains(&0))
            .collect();
        SlotSpace { order, degree, normalized, diagonal, tuples }
    }

    pub fn full(group: &FiniteGroup, degree: usize) -> Self {
        Self::new(group, degree, false, false)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn dim(&self) -> usize {
        self.tuples.len() * if self.diagonal { 1 } else { 2 }
    }

    /// Tuple index and component of coordinate `c` (component 0 for
    /// diagonal spaces).
    #[inline]
    pub fn coord_slot(&self, c: usize) -> (usize, usize) {
        if self.diagonal {
            (self.tuples[c], 0)
        } else {
            (self.tuples[c / 2], c % 2)
        }
    }

    /// Coordinates of the full slot `2t + comp`, if it lies in this space.
    fn coord_of_slot(&self) -> Vec<Option<usize>> {
        let mut map = vec![None; 2 * tuple_count(self.order, self.degree)];
        for (i, &t) in self.tuples.iter().enumerate() {
            if self.diagonal {
                map[2 * t] = Some(i);
                map[2 * t + 1] = Some(i);
            } else {
                map[2 * t] = Some(2 * i);
                map[2 * t + 1] = Some(2 * i + 1);
            }
        }
        map
    }

    /// Coordinates of a cochain. Entries outside the space are ignored; for
    /// diagonal spaces the plus component is read.
    pub fn coords<A: Coefficient>(&self, x: &Cochain<A>) -> Vec<A> {
        assert_eq!(x.degree, self.degree);
        if self.diagonal {
            self.tuples.iter().map(|&t| x.entries[t].plus).collect()
        } else {
            self.tuples.iter().flat_map(|&t| [x.entries[t].plus, x.entries[t].minus]).collect()
        }
    }

    pub fn cochain<A: Coefficient>(&self, group: &Arc<FiniteGroup>, coords: &[A]) -> Cochain<A> {
        assert_eq!(coords.len(), self.dim());
        let mut x = Cochain::identity(group, self.degree);
        for (c, &v) in coords.iter().enumerate() {
            let (t, comp) = self.coord_slot(c);
            if self.diagonal {
                x.entries[t] = Doubled::diagonal(v);
            } else if comp == 0 {
                x.entries[t].plus = v;
            } else {
                x.entries[t].minus = v;
            }
        }
        x
    }

    /// True when the cochain lies in this subgroup.
    pub fn contains<A: Coefficient>(&self, x: &Cochain<A>) -> bool {
        x.degree == self.degree
            && (!self.normalized || x.is_normalized())
            && (!self.diagonal || x.is_diagonal())
    }
}

/// `dⁿ_a` restricted to `src → dst`. The caller must make sure `dⁿ_a`
/// maps `src` into `dst` (normalized to normalized, diagonal to diagonal).
pub fn restricted_differential(group: &FiniteGroup, a: &Z2Hom, src: &SlotSpace, dst: &SlotSpace) -> SparseMatrix {
    assert_eq!(src.degree + 1, dst.degree);
    let full = linearize(src.degree, a, group, CoeffKind::Phase).expect("degree checked");
    let col_map = src.coord_of_slot();
    let rows = (0..dst.dim())
        .map(|r| {
            let (t, comp) = dst.coord_slot(r);
            full.matrix
                .row(2 * t + comp)
                .iter()
                .filter_map(|&(c, v)| col_map[c].map(|cc| (cc, v)))
                .collect()
        })
        .collect();
    SparseMatrix::from_rows(src.dim(), rows)
}

/// Coefficients that can be drawn at random with a denominator bound.
pub trait RandomCoefficient: Coefficient {
    fn sample<R: Rng>(rng: &mut R, denominator: u64) -> Self;
}

impl RandomCoefficient for Bit {
    fn sample<R: Rng>(rng: &mut R, _denominator: u64) -> Self {
        Bit::from(rng.gen::<bool>())
    }
}

impl RandomCoefficient for Phase {
    fn sample<R: Rng>(rng: &mut R, denominator: u64) -> Self {
        Phase::from_units(rng.gen_range(0..denominator), denominator)
    }
}

/// Deterministic pseudorandom cochain; phase entries have denominators
/// dividing `denominator`.
pub fn random_cochain<A: RandomCoefficient>(
    group: &Arc<FiniteGroup>,
    degree: usize,
    denominator: u64,
    seed: u64,
) -> Result<Cochain<A>> {
    check_degree(degree)?;
    if denominator == 0 {
        return Err(Error::invalid("denominator must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_cochain_with(group, degree, denominator, &mut rng))
}

pub fn random_cochain_with<A: RandomCoefficient, R: Rng>(
    group: &Arc<FiniteGroup>,
    degree: usize,
    denominator: u64,
    rng: &mut R,
) -> Cochain<A> {
    Cochain::from_fn(group, degree, |_| Doubled::new(A::sample(rng, denominator), A::sample(rng, denominator)))
}

/// `d¹b(g,h) = b_g + b_h + b_{gh}` for an undoubled bit function `b`.
pub fn untwisted_d1(group: &FiniteGroup, b: &[Bit]) -> Vec<Bit> {
    let n = group.order();
    (0..n * n).map(|i| b[i / n] + b[i % n] + b[group.mul(i / n, i % n)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::all_z2_homs;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2).unwrap())
    }

    fn ph(s: &str) -> Phase {
        s.parse().unwrap()
    }

    #[test]
    fn tuple_indexing_round_trips() {
        for idx in 0..64 {
            let t = tuple_of(4, 3, idx);
            assert_eq!(tuple_index(4, &t[..3]), idx);
        }
        assert_eq!(tuple_index(3, &[1, 2]), 5);
    }

    #[test]
    fn d1_on_z2_twisted() {
        let g = z2();
        let a = all_z2_homs(&g)[1].clone();
        let x = Cochain::from_entries(
            &g,
            1,
            vec![Doubled::new(Bit::ZERO, Bit::ZERO), Doubled::new(Bit::ZERO, Bit::ONE)],
        )
        .unwrap();
        let dx = coboundary(1, &a, &x).unwrap();
        // swap((0,1)) + (0,1) + x(e) = (1,1)
        assert_eq!(dx.get(&[1, 1]), Doubled::new(Bit::ONE, Bit::ONE));
    }

    #[test]
    fn identity_maps_to_identity() {
        let g = Arc::new(FiniteGroup::dihedral(3).unwrap());
        for a in all_z2_homs(&g) {
            for n in 1..=3 {
                let x = Cochain::<Phase>::identity(&g, n);
                assert!(coboundary(n, &a, &x).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn untwisted_on_diagonal() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let a = Z2Hom::zero(3);
        let x: Cochain<Phase> = random_cochain(&g, 2, 6, 7).unwrap();
        let diag = Cochain::diagonal_from_fn(&g, 2, |t| x.get(t).plus);
        let d = coboundary(2, &a, &diag).unwrap();
        // plain untwisted formula on the plus component
        for idx in 0..d.len() {
            let t = d.tuple(idx);
            let (p, q, r) = (t[0], t[1], t[2]);
            let y = |u: usize, v: usize| x.get(&[u, v]).plus;
            let want = y(q, r) + y(p, g.mul(q, r)) - y(g.mul(p, q), r) - y(p, q);
            assert_eq!(d.at(idx), Doubled::diagonal(want));
        }
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let g = z2();
        let x = Cochain::<Bit>::identity(&g, 2);
        assert!(coboundary(1, &Z2Hom::zero(2), &x).is_err());
        let y = Cochain::<Bit>::identity(&g, 1);
        assert!(cochain_combine(CombineOp::Mul, &x, &y).is_err());
    }

    #[test]
    fn combine_examples() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let x: Cochain<Phase> = random_cochain(&g, 2, 8, 1).unwrap();
        let id = Cochain::identity(&g, 2);
        assert_eq!(cochain_combine(CombineOp::Mul, &x, &id).unwrap(), x);
        assert!(cochain_combine(CombineOp::Div, &x, &x).unwrap().is_identity());
        let p: Cochain<Bit> = random_cochain(&g, 2, 2, 2).unwrap();
        let q: Cochain<Bit> = random_cochain(&g, 2, 2, 3).unwrap();
        let s = cochain_combine(CombineOp::Mul, &p, &q).unwrap();
        let t = [2, 1];
        assert_eq!(s.get(&t).plus, Bit::from(p.get(&t).plus.is_one() ^ q.get(&t).plus.is_one()));
    }

    #[test]
    fn obstruction_examples() {
        let g = z2();
        let a0 = Z2Hom::zero(2);
        let a1 = all_z2_homs(&g)[1].clone();
        let zero = Cochain::<Bit>::identity(&g, 2);
        assert!(obstruction_rhs(&zero, &a1).unwrap().is_identity());
        let ones = Cochain::diagonal_from_fn(&g, 2, |_| Bit::ONE);
        let o = obstruction_rhs(&ones, &a0).unwrap();
        assert!(o.entries().iter().all(|e| *e == Doubled::diagonal(Phase::HALF)));
        let mut kappa = Cochain::<Bit>::identity(&g, 2);
        kappa.set(&[1, 1], Doubled::new(Bit::ONE, Bit::ZERO));
        let o = obstruction_rhs(&kappa, &a1).unwrap();
        // a(g·g) = a(e) = 0, so no swap: (1,0)·(1,0) = (1,0)
        assert_eq!(o.get(&[1, 1, 1, 1]), Doubled::new(Phase::HALF, Phase::ZERO));
    }

    #[test]
    fn obstruction_twist_uses_product() {
        // on ℤ₄ with a nontrivial, a(1·2) = a(3) = 1 while a(1) = 1
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let a = all_z2_homs(&g)[1].clone();
        let mut kappa = Cochain::<Bit>::identity(&g, 2);
        kappa.set(&[1, 2], Doubled::new(Bit::ONE, Bit::ZERO));
        kappa.set(&[3, 3], Doubled::new(Bit::ONE, Bit::ZERO));
        let o = obstruction_rhs(&kappa, &a).unwrap();
        // κ(1,2)·swap(κ(3,3)) = (1,0)·(0,1) = 0
        assert_eq!(o.get(&[1, 2, 3, 3]), Doubled::zero());
        let a0 = Z2Hom::zero(4);
        let o = obstruction_rhs(&kappa, &a0).unwrap();
        assert_eq!(o.get(&[1, 2, 3, 3]), Doubled::new(Phase::HALF, Phase::ZERO));
    }

    #[test]
    fn linearize_exhaustive_z2_degree1() {
        let g = z2();
        for a in all_z2_homs(&g) {
            let d = linearize(1, &a, &g, CoeffKind::Bit).unwrap();
            assert_eq!((d.rows(), d.cols()), (8, 4));
            for mask in 0u32..16 {
                let slots: Vec<Bit> = (0..4).map(|i| Bit::from(mask >> i & 1 == 1)).collect();
                let x = undiscretize(&g, 1, &slots).unwrap();
                let direct = discretize(&coboundary(1, &a, &x).unwrap());
                assert_eq!(d.apply_bits(&slots), direct);
            }
            assert!(d.apply_bits(&[Bit::ZERO; 4]).iter().all(|b| b.is_zero()));
        }
    }

    #[test]
    fn linearize_random_phases() {
        let g = z2();
        let a = all_z2_homs(&g)[1].clone();
        let d = linearize(2, &a, &g, CoeffKind::Phase).unwrap();
        for seed in 0..100 {
            let x: Cochain<Phase> = random_cochain(&g, 2, 24, seed).unwrap();
            let direct = discretize(&coboundary(2, &a, &x).unwrap());
            assert_eq!(d.apply_phases(&discretize(&x)), direct);
        }
    }

    #[test]
    fn random_cochains_are_deterministic() {
        let g = z2();
        let x: Cochain<Phase> = random_cochain(&g, 3, 8, 42).unwrap();
        let y: Cochain<Phase> = random_cochain(&g, 3, 8, 42).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 8);
        assert!(x.entries().iter().all(|e| 8 % e.plus.denominator() == 0 && 8 % e.minus.denominator() == 0));
        let one: Cochain<Phase> = random_cochain(&g, 2, 1, 5).unwrap();
        assert!(one.is_identity());
        assert!(random_cochain::<Phase>(&g, 2, 0, 5).is_err());
    }

    #[test]
    fn slot_space_restriction_matches_full() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let a = Z2Hom::zero(3);
        let src = SlotSpace::new(&g, 2, true, false);
        let dst = SlotSpace::new(&g, 3, true, false);
        let m = restricted_differential(&g, &a, &src, &dst);
        assert_eq!((m.nrows(), m.ncols()), (16, 8));
        let coords: Vec<Phase> = (0..8).map(|i| Phase::new(i, 9)).collect();
        let x = src.cochain(&g, &coords);
        assert!(x.is_normalized());
        let dx = coboundary(2, &a, &x).unwrap();
        assert!(dx.is_normalized());
        let via = m.apply(&coords, Phase::ZERO, |p, v| p.scale(v), |p, q| p + q);
        assert_eq!(via, dst.coords(&dx));
        let diag = SlotSpace::new(&g, 2, true, true);
        assert_eq!(diag.dim(), 4);
        assert_eq!(ph("0/1"), Phase::ZERO);
    }
}
