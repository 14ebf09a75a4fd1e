//! Invariant triples `(c, κ, a)` and their equivalence.
//!
//! A triple is valid when `d²ₐκ = 0` and `d³ₐc = (−1)^{κ(g,h)·κ^{a(gh)}(k,f)}`.
//! A move `(m, σ)` sends `(c, κ, a)` to `(c′, κ′, a)` with
//!
//! ```text
//! κ′ = κ + d¹ₐm
//! c′(g,h,k) = (−1)^{κ(g,h)·m^{a(gh)}(k)} (−1)^{m(g)·κ′^{a(g)}(h,k)} d²ₐσ(g,h,k) c(g,h,k)
//! ```
//!
//! Equivalence is decided by solving the κ-equation over ℤ₂, walking the
//! resulting coset of `m`, and testing the remaining `c`-ratio for membership
//! in the image of `d²ₐ` over the full torus.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::{
    coboundary, discretize, linearize, obstruction_rhs, restricted_differential, undiscretize, Cochain, SlotSpace,
};
use crate::coeff::{bit_dot, sign_of_bits, Bit, CoeffKind, Doubled, Phase};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Z2Hom};
use crate::linalg::lattice::{integer_left_kernel, pair, torus_solve, TorusSolution};
use crate::linalg::modular::AugmentedHowell;
use crate::linalg::SparseMatrix;

pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pd0Triple {
    pub a: Z2Hom,
    pub kappa: Cochain<Bit>,
    pub c: Cochain<Phase>,
}

impl Pd0Triple {
    pub fn new(a: Z2Hom, kappa: Cochain<Bit>, c: Cochain<Phase>) -> Result<Self> {
        if kappa.degree() != 2 || c.degree() != 3 {
            return Err(Error::invalid(format!(
                "κ must have degree 2 and c degree 3, got {} and {}",
                kappa.degree(),
                c.degree()
            )));
        }
        if kappa.group() != c.group() {
            return Err(Error::invalid("κ and c live on different groups"));
        }
        if a.values().len() != kappa.group().order() {
            return Err(Error::invalid("a has the wrong length for the group"));
        }
        Ok(Pd0Triple { a, kappa, c })
    }

    pub fn trivial(group: &Arc<FiniteGroup>, a: Z2Hom) -> Self {
        Pd0Triple { a, kappa: Cochain::identity(group, 2), c: Cochain::identity(group, 3) }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.kappa.group()
    }

    pub fn is_diagonal(&self) -> bool {
        is_diagonal(self)
    }
}

/// First failure found by [`validate_triple`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum TripleViolation {
    /// `d²ₐκ ≠ 0` at `tuple`.
    KappaCocycle { tuple: Vec<usize>, value: Doubled<Bit> },
    /// `d³ₐc ≠ (−1)^{κ·κ}` at `tuple`.
    CCocycle { tuple: Vec<usize>, lhs: Doubled<Phase>, rhs: Doubled<Phase> },
}

impl fmt::Display for TripleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleViolation::KappaCocycle { tuple, value } => {
                write!(f, "d²κ{tuple:?} = ({}, {}), expected (0, 0)", value.plus, value.minus)
            }
            TripleViolation::CCocycle { tuple, lhs, rhs } => write!(
                f,
                "d³c{tuple:?} = ({}, {}) but the obstruction is ({}, {})",
                lhs.plus, lhs.minus, rhs.plus, rhs.minus
            ),
        }
    }
}

pub fn validate_triple(t: &Pd0Triple) -> std::result::Result<(), TripleViolation> {
    let dk = coboundary(2, &t.a, &t.kappa).expect("shapes checked at construction");
    if let Some(i) = dk.entries().iter().position(|e| !e.is_zero()) {
        return Err(TripleViolation::KappaCocycle { tuple: dk.tuple(i), value: dk.at(i) });
    }
    let dc = coboundary(3, &t.a, &t.c).expect("shapes checked at construction");
    let rhs = obstruction_rhs(&t.kappa, &t.a).expect("degree checked");
    if let Some(i) = dc.first_difference(&rhs) {
        return Err(TripleViolation::CCocycle { tuple: dc.tuple(i), lhs: dc.at(i), rhs: rhs.at(i) });
    }
    Ok(())
}

pub fn is_diagonal(t: &Pd0Triple) -> bool {
    t.kappa.is_diagonal() && t.c.is_diagonal()
}

/// The sign factor of a move from `κ₁` to `κ₂` along `m`:
/// `(g,h,k) ↦ (−1)^{κ₁(g,h)·m^{a(gh)}(k)} (−1)^{m(g)·κ₂^{a(g)}(h,k)}`.
pub fn sign_move(kappa1: &Cochain<Bit>, m: &Cochain<Bit>, kappa2: &Cochain<Bit>, a: &Z2Hom) -> Cochain<Phase> {
    let group = kappa1.group().clone();
    Cochain::from_fn(&group, 3, |t| {
        let (g, h, k) = (t[0], t[1], t[2]);
        let first = bit_dot(kappa1.get(&[g, h]), m.get(&[k]).swap_pow(a.at(group.mul(g, h))));
        let second = bit_dot(m.get(&[g]), kappa2.get(&[h, k]).swap_pow(a.at(g)));
        sign_of_bits(first) + sign_of_bits(second)
    })
}

/// Applies the move `(m, σ)` to `t`.
pub fn apply_move(t: &Pd0Triple, m: &Cochain<Bit>, sigma: &Cochain<Phase>) -> Result<Pd0Triple> {
    if m.degree() != 1 || sigma.degree() != 2 || m.group() != t.group() || sigma.group() != t.group() {
        return Err(Error::invalid("a move needs a degree 1 bit cochain and a degree 2 phase cochain on the triple's group"));
    }
    let kappa2 = &t.kappa + &coboundary(1, &t.a, m)?;
    let s = sign_move(&t.kappa, m, &kappa2, &t.a);
    let c2 = &(&s + &coboundary(2, &t.a, sigma)?) + &t.c;
    Pd0Triple::new(t.a.clone(), kappa2, c2)
}

/// Solutions of `d¹ₐm = target`: a particular solution plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveCoset {
    pub particular: Cochain<Bit>,
    pub kernel: Vec<Cochain<Bit>>,
}

impl MoveCoset {
    /// Number of coset elements, saturating.
    pub fn size(&self) -> u64 {
        1u64.checked_shl(self.kernel.len() as u32).unwrap_or(u64::MAX)
    }

    /// The element `particular + Σ_{bit i of index} kernelᵢ`.
    pub fn element(&self, index: u64) -> Cochain<Bit> {
        let mut m = self.particular.clone();
        for (i, k) in self.kernel.iter().enumerate() {
            if i < 64 && index >> i & 1 == 1 {
                m = &m + k;
            }
        }
        m
    }
}

fn bits_to_units(x: &[Bit]) -> Vec<u64> {
    x.iter().map(|b| b.as_u8() as u64).collect()
}

fn units_to_bits(x: &[u64]) -> Vec<Bit> {
    x.iter().map(|&v| Bit::from(v % 2 == 1)).collect()
}

/// Solves `M·x = y` over ℤ₂ for `x` in `space`, where `matrix` acts on the
/// coordinates of `space`.
fn solve_gf2(
    group: &Arc<FiniteGroup>,
    matrix: &SparseMatrix,
    space: &SlotSpace,
    y: &[Bit],
) -> Option<MoveCoset> {
    let b = matrix.transpose_dense_mod(2);
    let ah = AugmentedHowell::new(2, &b, matrix.nrows());
    let x = ah.solve(&bits_to_units(y))?;
    let particular = space.cochain(group, &units_to_bits(&x));
    let kernel = ah.left_kernel().iter().map(|k| space.cochain(group, &units_to_bits(k))).collect();
    Some(MoveCoset { particular, kernel })
}

/// All `m` with `d¹ₐm = κ₂ − κ₁`.
pub fn solve_kappa_move(t1: &Pd0Triple, t2: &Pd0Triple) -> Result<Option<MoveCoset>> {
    solve_kappa_move_in(t1, t2, false)
}

fn solve_kappa_move_in(t1: &Pd0Triple, t2: &Pd0Triple, normalized: bool) -> Result<Option<MoveCoset>> {
    if t1.a != t2.a || t1.group() != t2.group() {
        return Err(Error::invalid("κ-moves need triples with the same group and the same a"));
    }
    let group = t1.group();
    let target = &t2.kappa - &t1.kappa;
    let src = SlotSpace::new(group, 1, normalized, false);
    let dst = SlotSpace::full(group, 2);
    let d1 = restricted_differential(group, &t1.a, &src, &dst);
    Ok(solve_gf2(group, &d1, &src, &dst.coords(&target)))
}

/// Outcome of a coboundary membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `r = d²ₐσ`.
    Member(Cochain<Phase>),
    /// An integer vector `u` (sparse, over linearized slots) with `u·D = 0`
    /// and `u·r = pairing ≠ 0`.
    NonMember { witness: Vec<(usize, i64)>, pairing: Phase },
}

/// Membership in the image of `d²ₐ` over ℚ/ℤ, with σ restricted to a
/// subspace of `C²` (all of it, or the normalized cochains).
#[derive(Clone, Debug)]
pub struct CoboundarySolver {
    group: Arc<FiniteGroup>,
    a: Z2Hom,
    space: SlotSpace,
    matrix: SparseMatrix,
}

impl CoboundarySolver {
    pub fn new(group: &Arc<FiniteGroup>, a: &Z2Hom, normalized_sigma: bool) -> Self {
        let space = SlotSpace::new(group, 2, normalized_sigma, false);
        let matrix = if normalized_sigma {
            restricted_differential(group, a, &space, &SlotSpace::full(group, 3))
        } else {
            linearize(2, a, group, CoeffKind::Phase).expect("degree 2").matrix
        };
        CoboundarySolver { group: group.clone(), a: a.clone(), space, matrix }
    }

    pub fn membership(&self, r: &Cochain<Phase>) -> Result<Membership> {
        if r.degree() != 3 || r.group() != &self.group {
            return Err(Error::invalid("membership needs a degree 3 cochain on the solver's group"));
        }
        if r.is_identity() {
            return Ok(Membership::Member(Cochain::identity(&self.group, 2)));
        }
        let rv = discretize(r);
        match torus_solve(&self.matrix, &rv)? {
            TorusSolution::Solved(x) => {
                let sigma = self.space.cochain(&self.group, &x);
                debug_assert_eq!(coboundary(2, &self.a, &sigma)?, *r);
                Ok(Membership::Member(sigma))
            }
            TorusSolution::Obstructed { .. } => {
                let kernel = integer_left_kernel(&self.matrix)?;
                let (u, p) = kernel
                    .into_iter()
                    .map(|u| {
                        let p = pair(&u, &rv);
                        (u, p)
                    })
                    .find(|(_, p)| *p != Phase::ZERO)
                    .ok_or_else(|| Error::InternalInconsistency {
                        identity: "left-kernel annihilator".into(),
                        witness: "echelon obstruction without a violated kernel vector".into(),
                    })?;
                let witness = u.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect();
                Ok(Membership::NonMember { witness, pairing: p })
            }
        }
    }
}

/// Decides `r ∈ d²ₐ C²(G, U(1) ⊕ U(1))`.
pub fn coboundary_membership(r: &Cochain<Phase>, a: &Z2Hom) -> Result<Membership> {
    CoboundarySolver::new(r.group(), a, false).membership(r)
}

/// A move `(m, σ)` carrying one triple to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivCertificate {
    pub m: Cochain<Bit>,
    pub sigma: Cochain<Phase>,
}

impl EquivCertificate {
    /// True when applying the move to `from` reproduces `to` exactly.
    pub fn replays(&self, from: &Pd0Triple, to: &Pd0Triple) -> bool {
        apply_move(from, &self.m, &self.sigma).map(|t| t == *to).unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inequivalence {
    DifferentA,
    /// `κ₂ − κ₁` is not a coboundary.
    KappaClasses,
    /// Every `m` in the coset left a `c`-ratio outside the image of `d²ₐ`.
    /// The witness belongs to the first candidate tried.
    CRatio { candidates: u64, witness: Vec<(usize, i64)>, pairing: Phase },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivOutcome {
    Equivalent(EquivCertificate),
    Inequivalent(Inequivalence),
    BudgetExceeded { budget: u64, coset_size: u64 },
}

impl EquivOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivOutcome::Equivalent(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivOptions {
    /// Maximum number of `m` candidates tried.
    pub budget: u64,
    /// Restrict `m` and `σ` to normalized cochains.
    pub normalized_moves: bool,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions { budget: DEFAULT_BUDGET, normalized_moves: false }
    }
}

pub fn equiv(t1: &Pd0Triple, t2: &Pd0Triple, budget: u64) -> Result<EquivOutcome> {
    equiv_with(t1, t2, EquivOptions { budget, ..EquivOptions::default() })
}

pub fn equiv_with(t1: &Pd0Triple, t2: &Pd0Triple, opts: EquivOptions) -> Result<EquivOutcome> {
    if t1.group() != t2.group() {
        return Err(Error::invalid("triples live on different groups"));
    }
    if t1.a != t2.a {
        return Ok(EquivOutcome::Inequivalent(Inequivalence::DifferentA));
    }
    let Some(coset) = solve_kappa_move_in(t1, t2, opts.normalized_moves)? else {
        return Ok(EquivOutcome::Inequivalent(Inequivalence::KappaClasses));
    };
    let size = coset.size();
    let tried = size.min(opts.budget);
    let solver = CoboundarySolver::new(t1.group(), &t1.a, opts.normalized_moves);
    let target = &t2.c - &t1.c;
    let attempt = |i: u64| -> Result<std::result::Result<EquivCertificate, Membership>> {
        let m = coset.element(i);
        let s = sign_move(&t1.kappa, &m, &t2.kappa, &t1.a);
        let r = &target - &s;
        Ok(match solver.membership(&r)? {
            Membership::Member(sigma) => Ok(EquivCertificate { m, sigma }),
            other => Err(other),
        })
    };
    let found = (0..tried)
        .into_par_iter()
        .map(&attempt)
        .find_map_first(|res| match res {
            Ok(Ok(cert)) => Some(Ok(cert)),
            Ok(Err(_)) => None,
            Err(e) => Some(Err(e)),
        });
    match found {
        Some(Ok(cert)) => {
            let replayed = apply_move(t1, &cert.m, &cert.sigma)?;
            if replayed != *t2 {
                let at = replayed.c.first_difference(&t2.c).map(|i| replayed.c.tuple(i));
                return Err(Error::InternalInconsistency {
                    identity: "certificate replay".into(),
                    witness: format!("c differs at {at:?}"),
                });
            }
            Ok(EquivOutcome::Equivalent(cert))
        }
        Some(Err(e)) => Err(e),
        None if tried < size => Ok(EquivOutcome::BudgetExceeded { budget: opts.budget, coset_size: size }),
        None => {
            let Err(Membership::NonMember { witness, pairing }) = attempt(0)? else {
                unreachable!("the first candidate failed above")
            };
            Ok(EquivOutcome::Inequivalent(Inequivalence::CRatio { candidates: size, witness, pairing }))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagonalOutcome {
    /// The class contains `representative`, reached from the input by
    /// `certificate`.
    Diagonal { representative: Pd0Triple, certificate: EquivCertificate },
    NotDiagonal { kappa_diagonalizable: bool, candidates: u64 },
    BudgetExceeded { budget: u64, coset_size: u64 },
}

/// Rows `plus − minus` for each tuple of a linearized differential.
fn antidiagonal_rows(m: &SparseMatrix) -> SparseMatrix {
    let pairs: Vec<(usize, Option<usize>)> = (0..m.nrows() / 2).map(|t| (2 * t, Some(2 * t + 1))).collect();
    m.combine_rows(&pairs)
}

fn antidiagonal<A: crate::coeff::Coefficient>(x: &Cochain<A>) -> Vec<A> {
    x.entries().iter().map(|e| e.plus - e.minus).collect()
}

/// Searches for a diagonal triple in the class of `t`: first an `m` making
/// `κ + d¹ₐm` diagonal, then a `σ` making the moved `c` diagonal.
pub fn is_in_diagonal_class(t: &Pd0Triple, budget: u64) -> Result<DiagonalOutcome> {
    let group = t.group();
    if is_diagonal(t) {
        return Ok(DiagonalOutcome::Diagonal {
            representative: t.clone(),
            certificate: EquivCertificate { m: Cochain::identity(group, 1), sigma: Cochain::identity(group, 2) },
        });
    }
    let d1 = antidiagonal_rows(&linearize(1, &t.a, group, CoeffKind::Bit)?.matrix);
    let space1 = SlotSpace::full(group, 1);
    let Some(coset) = solve_gf2(group, &d1, &space1, &antidiagonal(&t.kappa)) else {
        return Ok(DiagonalOutcome::NotDiagonal { kappa_diagonalizable: false, candidates: 0 });
    };
    let d2 = antidiagonal_rows(&linearize(2, &t.a, group, CoeffKind::Phase)?.matrix);
    let size = coset.size();
    let tried = size.min(budget);
    let found = (0..tried)
        .into_par_iter()
        .map(|i| -> Result<Option<(EquivCertificate, Pd0Triple)>> {
            let m = coset.element(i);
            let kappa2 = &t.kappa + &coboundary(1, &t.a, &m)?;
            debug_assert!(kappa2.is_diagonal());
            let shifted = &sign_move(&t.kappa, &m, &kappa2, &t.a) + &t.c;
            let rhs: Vec<Phase> = antidiagonal(&shifted).into_iter().map(|p| -p).collect();
            match torus_solve(&d2, &rhs)? {
                TorusSolution::Solved(x) => {
                    let sigma = undiscretize(group, 2, &x)?;
                    let c2 = &shifted + &coboundary(2, &t.a, &sigma)?;
                    let rep = Pd0Triple::new(t.a.clone(), kappa2, c2)?;
                    Ok(Some((EquivCertificate { m, sigma }, rep)))
                }
                TorusSolution::Obstructed { .. } => Ok(None),
            }
        })
        .find_map_first(|r| r.transpose());
    match found {
        Some(r) => {
            let (certificate, representative) = r?;
            debug_assert!(is_diagonal(&representative));
            Ok(DiagonalOutcome::Diagonal { representative, certificate })
        }
        None if tried < size => Ok(DiagonalOutcome::BudgetExceeded { budget, coset_size: size }),
        None => Ok(DiagonalOutcome::NotDiagonal { kappa_diagonalizable: true, candidates: size }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::random_cochain;
    use crate::group::all_z2_homs;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2).unwrap())
    }

    fn z2_cocycle(value: Phase) -> Pd0Triple {
        let g = z2();
        let mut t = Pd0Triple::trivial(&g, Z2Hom::zero(2));
        t.c.set(&[1, 1, 1], Doubled::diagonal(value));
        t
    }

    #[test]
    fn validation_examples() {
        let g = z2();
        assert!(validate_triple(&Pd0Triple::trivial(&g, Z2Hom::zero(2))).is_ok());
        assert!(validate_triple(&z2_cocycle(Phase::HALF)).is_ok());
        let bad = z2_cocycle(Phase::new(1, 4));
        assert!(matches!(validate_triple(&bad), Err(TripleViolation::CCocycle { .. })));
    }

    #[test]
    fn kappa_violation_reported() {
        let g = z2();
        let mut t = Pd0Triple::trivial(&g, Z2Hom::zero(2));
        t.kappa.set(&[0, 1], Doubled::new(Bit::ONE, Bit::ZERO));
        assert!(matches!(validate_triple(&t), Err(TripleViolation::KappaCocycle { .. })));
    }

    #[test]
    fn diagonality() {
        let g = z2();
        let mut t = Pd0Triple::trivial(&g, Z2Hom::zero(2));
        assert!(is_diagonal(&t));
        t.kappa.set(&[1, 1], Doubled::new(Bit::ONE, Bit::ZERO));
        assert!(!is_diagonal(&t));
    }

    #[test]
    fn kappa_move_examples() {
        let g = z2();
        let a = Z2Hom::zero(2);
        let t = Pd0Triple::trivial(&g, a.clone());
        let coset = solve_kappa_move(&t, &t).unwrap().unwrap();
        assert!(coset.particular.is_identity());
        // ker d¹ for a = 0 on ℤ₂: m(e) = 0, m(g) arbitrary
        assert_eq!(coset.size(), 4);
        let mut m0 = Cochain::<Bit>::identity(&g, 1);
        m0.set(&[1], Doubled::new(Bit::ZERO, Bit::ONE));
        let mut t2 = t.clone();
        t2.kappa = coboundary(1, &a, &m0).unwrap();
        let coset = solve_kappa_move(&t, &t2).unwrap().unwrap();
        assert!((0..coset.size()).any(|i| coset.element(i) == m0));
        let mut t3 = t.clone();
        t3.kappa.set(&[0, 0], Doubled::new(Bit::ONE, Bit::ZERO));
        assert!(solve_kappa_move(&t, &t3).unwrap().is_none());
    }

    #[test]
    fn membership_examples() {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        for a in all_z2_homs(&g) {
            let id = Cochain::<Phase>::identity(&g, 3);
            assert!(matches!(coboundary_membership(&id, &a).unwrap(), Membership::Member(_)));
            let s0: Cochain<Phase> = random_cochain(&g, 2, 8, 11).unwrap();
            let r = coboundary(2, &a, &s0).unwrap();
            match coboundary_membership(&r, &a).unwrap() {
                Membership::Member(s) => assert_eq!(coboundary(2, &a, &s).unwrap(), r),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn identity_argument_obstruction() {
        // d²σ(e,g,h) = σ(g,h)^{a(e)} + σ(e,gh) − σ(g,h) − σ(e,g) = σ(e,gh) − σ(e,g);
        // with g = h = e it vanishes, so a nonzero r(e,e,e) is never a coboundary.
        let g = z2();
        let a = Z2Hom::zero(2);
        let mut r = Cochain::<Phase>::identity(&g, 3);
        r.set(&[0, 0, 0], Doubled::new(Phase::new(1, 4), Phase::ZERO));
        match coboundary_membership(&r, &a).unwrap() {
            Membership::NonMember { witness, pairing } => {
                assert_ne!(pairing, Phase::ZERO);
                let u: Vec<i64> = {
                    let mut u = vec![0; 16];
                    for (i, v) in &witness {
                        u[*i] = *v;
                    }
                    u
                };
                assert_eq!(pair(&u, &discretize(&r)), pairing);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equiv_examples() {
        let t = z2_cocycle(Phase::HALF);
        match equiv(&t, &t, DEFAULT_BUDGET).unwrap() {
            EquivOutcome::Equivalent(c) => {
                assert!(c.m.is_identity());
                assert!(c.replays(&t, &t));
            }
            other => panic!("{other:?}"),
        }
        let trivial = z2_cocycle(Phase::ZERO);
        assert!(matches!(
            equiv(&trivial, &t, DEFAULT_BUDGET).unwrap(),
            EquivOutcome::Inequivalent(Inequivalence::CRatio { .. })
        ));
        let g = z2();
        let s0: Cochain<Phase> = random_cochain(&g, 2, 8, 5).unwrap();
        let moved = apply_move(&t, &Cochain::identity(&g, 1), &s0).unwrap();
        match equiv(&t, &moved, DEFAULT_BUDGET).unwrap() {
            EquivOutcome::Equivalent(c) => assert!(c.replays(&t, &moved)),
            other => panic!("{other:?}"),
        }
        let other_a = Pd0Triple::trivial(&g, all_z2_homs(&g)[1].clone());
        assert_eq!(
            equiv(&trivial, &other_a, DEFAULT_BUDGET).unwrap(),
            EquivOutcome::Inequivalent(Inequivalence::DifferentA)
        );
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let t = z2_cocycle(Phase::HALF);
        let trivial = z2_cocycle(Phase::ZERO);
        assert!(matches!(equiv(&trivial, &t, 1).unwrap(), EquivOutcome::BudgetExceeded { .. }));
    }

    #[test]
    fn non_diagonalizable_kappa() {
        // κ = (ω, 0) with ω(g,g) = 1: the plus component is the nontrivial
        // class of H²(ℤ₂, ℤ₂), so no m makes κ + d¹m diagonal.
        let g = z2();
        let a = Z2Hom::zero(2);
        let mut t = Pd0Triple::trivial(&g, a.clone());
        t.kappa.set(&[1, 1], Doubled::new(Bit::ONE, Bit::ZERO));
        let o = obstruction_rhs(&t.kappa, &a).unwrap();
        // the obstruction (ω∪ω, 0)/2 is a coboundary d³c
        let d3 = linearize(3, &a, &g, CoeffKind::Phase).unwrap();
        let TorusSolution::Solved(x) = torus_solve(&d3.matrix, &discretize(&o)).unwrap() else {
            panic!("obstruction should be solvable")
        };
        t.c = undiscretize(&g, 3, &x).unwrap();
        assert!(validate_triple(&t).is_ok());
        assert_eq!(
            is_in_diagonal_class(&t, DEFAULT_BUDGET).unwrap(),
            DiagonalOutcome::NotDiagonal { kappa_diagonalizable: false, candidates: 0 }
        );
    }

    #[test]
    fn diagonal_class_found_after_move() {
        let t = z2_cocycle(Phase::HALF);
        let g = t.group().clone();
        let mut m = Cochain::<Bit>::identity(&g, 1);
        m.set(&[1], Doubled::new(Bit::ONE, Bit::ZERO));
        m.set(&[0], Doubled::new(Bit::ZERO, Bit::ONE));
        let s: Cochain<Phase> = random_cochain(&g, 2, 8, 3).unwrap();
        let moved = apply_move(&t, &m, &s).unwrap();
        assert!(validate_triple(&moved).is_ok());
        assert!(!is_diagonal(&moved));
        match is_in_diagonal_class(&moved, DEFAULT_BUDGET).unwrap() {
            DiagonalOutcome::Diagonal { representative, certificate } => {
                assert!(is_diagonal(&representative));
                assert!(certificate.replays(&moved, &representative));
                assert!(equiv(&representative, &t, DEFAULT_BUDGET).unwrap().is_equivalent());
            }
            other => panic!("{other:?}"),
        }
    }
}
