//! Reduction of pentuples `(c_R, κ_R, κ_L, b, a)` to diagonal triples.
//!
//! With `m = (0, b)` the reduction builds
//!
//! ```text
//! κ   = κ_R + d¹ₐm                      (diagonal)
//! κ′  = κ_L − d¹ₐm = κ + (d¹b, d¹b)
//! c   = (−1)^{κ_L(g,h)·m^{a(gh)}(k)} (−1)^{m(g)·κ^{a(g)}(h,k)} c_R
//! c̃   = (−1)^{b_g·κ(h,k)} c
//! σ   = (0, ¼·κ_R⁺(g,h) + ½·κ(g,h)(b_g + b_h))
//! η   = (0, −⅛·(b_g + b_h − b_{gh}))
//! ĉ   = d²ₐ(−σ − η) + c̃                  (diagonal)
//! ```
//!
//! and returns `(ĉ, κ, a)`. Every intermediate identity is re-checked on
//! each run. [`synthesize_pentuple`] runs the chain backwards from a
//! diagonal triple.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cochain::{coboundary, untwisted_d1, Cochain};
use crate::coeff::{bit_dot, lift_eighth, lift_quarter, sign_of_bits, Bit, Doubled, Eps, LiftConvention, Phase};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Z2Hom};
use crate::invariant::{sign_move, validate_triple, Pd0Triple};
use crate::io::cochain_to_value;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CrtPentuple {
    pub a: Z2Hom,
    /// One bit per group element; the same for both components.
    pub b: Vec<Bit>,
    pub kappa_r: Cochain<Bit>,
    pub kappa_l: Cochain<Bit>,
    pub c_r: Cochain<Phase>,
}

impl CrtPentuple {
    pub fn new(a: Z2Hom, b: Vec<Bit>, kappa_r: Cochain<Bit>, kappa_l: Cochain<Bit>, c_r: Cochain<Phase>) -> Result<Self> {
        let group = kappa_r.group();
        if kappa_r.degree() != 2 || kappa_l.degree() != 2 || c_r.degree() != 3 {
            return Err(Error::invalid("κ_R and κ_L must have degree 2 and c_R degree 3"));
        }
        if kappa_l.group() != group || c_r.group() != group {
            return Err(Error::invalid("pentuple cochains live on different groups"));
        }
        if a.values().len() != group.order() || b.len() != group.order() {
            return Err(Error::invalid("a and b need one value per group element"));
        }
        Ok(CrtPentuple { a, b, kappa_r, kappa_l, c_r })
    }

    pub fn trivial(group: &Arc<FiniteGroup>, a: Z2Hom) -> Self {
        CrtPentuple {
            a,
            b: vec![Bit::ZERO; group.order()],
            kappa_r: Cochain::identity(group, 2),
            kappa_l: Cochain::identity(group, 2),
            c_r: Cochain::identity(group, 3),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.kappa_r.group()
    }
}

/// First constraint found violated by [`validate_crt`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum CrtViolation {
    /// `κ_L^{−ε}(g,h) ≠ κ_R^{ε}(g,h)`.
    Mirror { tuple: Vec<usize>, kappa_l: Doubled<Bit>, kappa_r: Doubled<Bit> },
    /// `b_g + b_h + b_{gh} ≠ κ_L^ε(g,h) + κ_R^ε(g,h)`.
    SumRule { tuple: Vec<usize>, component: &'static str, d1b: Bit, kappa_sum: Bit },
    /// `c_R⁺ − c_R⁻` differs from the phase fixed by `κ_L`, `κ_R`, `b`, `a`.
    Compatibility { tuple: Vec<usize>, difference: Phase, expected: Phase },
}

impl CrtViolation {
    pub fn constraint(&self) -> &'static str {
        match self {
            CrtViolation::Mirror { .. } => "mirror",
            CrtViolation::SumRule { .. } => "sum_rule",
            CrtViolation::Compatibility { .. } => "compatibility",
        }
    }
}

impl fmt::Display for CrtViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrtViolation::Mirror { tuple, kappa_l, kappa_r } => write!(
                f,
                "mirror relation fails at {tuple:?}: κ_L = ({}, {}), κ_R = ({}, {})",
                kappa_l.plus, kappa_l.minus, kappa_r.plus, kappa_r.minus
            ),
            CrtViolation::SumRule { tuple, component, d1b, kappa_sum } => write!(
                f,
                "sum rule fails at {tuple:?} ({component}): d¹b = {d1b}, κ_L + κ_R = {kappa_sum}"
            ),
            CrtViolation::Compatibility { tuple, difference, expected } => write!(
                f,
                "compatibility fails at {tuple:?}: c_R⁺ − c_R⁻ = {difference}, expected {expected}"
            ),
        }
    }
}

/// The phase `c_R⁺(g,h,k) − c_R⁻(g,h,k)` must equal, with `{0,1}` lifts.
pub fn compatibility_phase(p: &CrtPentuple, g: usize, h: usize, k: usize) -> Phase {
    let group = p.group();
    let (gh, hk) = (group.mul(g, h), group.mul(h, k));
    let kr = |x: usize, y: usize| p.kappa_r.get(&[x, y]);
    let d1b = |x: usize, y: usize| p.b[x] + p.b[y] + p.b[group.mul(x, y)];
    let lift = |b: Bit| LiftConvention::ZeroOne.lift(b);
    let ag = p.a.at(g);
    let mut v = (p.kappa_l.get(&[h, k]).minus * kr(h, k).minus * ag).sign();
    let quarter =
        -lift(kr(h, k).get(Eps::Plus.twist(ag))) - lift(kr(g, hk).plus) + lift(kr(g, h).plus) + lift(kr(gh, k).plus);
    v = v + lift_quarter(quarter);
    v = v + (d1b(h, k) * kr(g, hk).plus).sign();
    v + (d1b(g, h) * kr(gh, k).plus).sign()
}

pub fn validate_crt(p: &CrtPentuple) -> std::result::Result<(), CrtViolation> {
    let group = p.group();
    let n = group.order();
    for i in 0..n * n {
        let tuple = p.kappa_r.tuple(i);
        let (l, r) = (p.kappa_l.at(i), p.kappa_r.at(i));
        if l.minus != r.plus || l.plus != r.minus {
            return Err(CrtViolation::Mirror { tuple, kappa_l: l, kappa_r: r });
        }
    }
    let d1b = untwisted_d1(group, &p.b);
    for i in 0..n * n {
        let (l, r) = (p.kappa_l.at(i), p.kappa_r.at(i));
        for (eps, name) in [(Eps::Plus, "plus"), (Eps::Minus, "minus")] {
            let sum = l.get(eps) + r.get(eps);
            if sum != d1b[i] {
                return Err(CrtViolation::SumRule {
                    tuple: p.kappa_r.tuple(i),
                    component: name,
                    d1b: d1b[i],
                    kappa_sum: sum,
                });
            }
        }
    }
    for i in 0..p.c_r.len() {
        let t = p.c_r.tuple(i);
        let e = p.c_r.at(i);
        let expected = compatibility_phase(p, t[0], t[1], t[2]);
        if e.plus - e.minus != expected {
            return Err(CrtViolation::Compatibility { tuple: t, difference: e.plus - e.minus, expected });
        }
    }
    Ok(())
}

/// `m = (0, b)`.
pub fn build_m(group: &Arc<FiniteGroup>, b: &[Bit]) -> Cochain<Bit> {
    Cochain::from_fn(group, 1, |t| Doubled::new(Bit::ZERO, b[t[0]]))
}

/// The value `d¹ₐm(g,h) = (a(g)b_h, d¹b(g,h) + a(g)b_h)` for `m = (0, b)`.
pub fn build_m_coboundary(group: &Arc<FiniteGroup>, a: &Z2Hom, b: &[Bit]) -> Cochain<Bit> {
    let d1b = untwisted_d1(group, b);
    let n = group.order();
    Cochain::from_fn(group, 2, |t| {
        let x = a.at(t[0]) * b[t[1]];
        Doubled::new(x, d1b[t[0] * n + t[1]] + x)
    })
}

/// `σ = (0, ¼·L(κ_R⁺) + ½·κ(b_g + b_h))` and `η = (0, −⅛·(b_g + b_h − b_{gh}))`.
fn sigma_eta(
    group: &Arc<FiniteGroup>,
    kappa_r: &Cochain<Bit>,
    kappa: &Cochain<Bit>,
    b: &[Bit],
    lift: LiftConvention,
) -> (Cochain<Phase>, Cochain<Phase>) {
    let sigma = Cochain::from_fn(group, 2, |t| {
        let (g, h) = (t[0], t[1]);
        let quarter = lift_quarter(lift.lift(kappa_r.get(t).plus));
        let half = (kappa.get(t).plus * (b[g] + b[h])).sign();
        Doubled::new(Phase::ZERO, quarter + half)
    });
    let eta = Cochain::from_fn(group, 2, |t| {
        let (g, h) = (t[0], t[1]);
        let k = b[g].as_i64() + b[h].as_i64() - b[group.mul(g, h)].as_i64();
        Doubled::new(Phase::ZERO, lift_eighth(-k))
    });
    (sigma, eta)
}

/// `(g,h,k) ↦ (−1)^{(b_g, b_g)·κ(h,k)}`.
fn b_kappa_sign(b: &[Bit], kappa: &Cochain<Bit>) -> Cochain<Phase> {
    Cochain::from_fn(kappa.group(), 3, |t| sign_of_bits(bit_dot(Doubled::diagonal(b[t[0]]), kappa.get(&t[1..]))))
}

/// Outcome of one named identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    fn new(name: &str, witness: Option<String>) -> Self {
        Verdict { name: name.into(), passed: witness.is_none(), witness }
    }
}

/// Every intermediate of one reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub lift: LiftConvention,
    pub m: Cochain<Bit>,
    pub kappa: Cochain<Bit>,
    pub kappa_prime: Cochain<Bit>,
    pub c_intermediate: Cochain<Phase>,
    pub c_tilde: Cochain<Phase>,
    pub c_hat: Cochain<Phase>,
    pub sigma: Cochain<Phase>,
    pub eta: Cochain<Phase>,
    pub checks: Vec<Verdict>,
}

impl ReductionCertificate {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lift": self.lift,
            "m": cochain_to_value(&self.m),
            "kappa": cochain_to_value(&self.kappa),
            "kappaPrime": cochain_to_value(&self.kappa_prime),
            "cIntermediate": cochain_to_value(&self.c_intermediate),
            "cTilde": cochain_to_value(&self.c_tilde),
            "cHat": cochain_to_value(&self.c_hat),
            "sigma": cochain_to_value(&self.sigma),
            "eta": cochain_to_value(&self.eta),
            "checks": self.checks,
        })
    }
}

/// Runs the reduction chain without checking anything.
pub fn build_certificate(p: &CrtPentuple, lift: LiftConvention) -> Result<ReductionCertificate> {
    let group = p.group();
    let m = build_m(group, &p.b);
    let dm = coboundary(1, &p.a, &m)?;
    let kappa = &p.kappa_r + &dm;
    let kappa_prime = &p.kappa_l - &dm;
    let c_intermediate = &p.c_r + &sign_move(&p.kappa_l, &m, &kappa, &p.a);
    let c_tilde = &c_intermediate + &b_kappa_sign(&p.b, &kappa);
    let (sigma, eta) = sigma_eta(group, &p.kappa_r, &kappa, &p.b, lift);
    let c_hat = &c_tilde - &coboundary(2, &p.a, &(&sigma + &eta))?;
    Ok(ReductionCertificate {
        lift,
        m,
        kappa,
        kappa_prime,
        c_intermediate,
        c_tilde,
        c_hat,
        sigma,
        eta,
        checks: Vec::new(),
    })
}

fn first_mismatch<A: crate::coeff::Coefficient>(x: &Cochain<A>, y: &Cochain<A>) -> Option<String> {
    x.first_difference(y).map(|i| {
        let (p, q) = (x.at(i), y.at(i));
        format!("{:?}: ({}, {}) vs ({}, {})", x.tuple(i), p.plus, p.minus, q.plus, q.minus)
    })
}

fn first_off_diagonal<A: crate::coeff::Coefficient>(x: &Cochain<A>) -> Option<String> {
    x.entries().iter().position(|e| !e.is_diagonal()).map(|i| {
        let e = x.at(i);
        format!("{:?}: ({}, {})", x.tuple(i), e.plus, e.minus)
    })
}

/// Re-checks every identity the reduction relies on.
pub fn check_claim_identities(p: &CrtPentuple, cert: &ReductionCertificate) -> Vec<Verdict> {
    let group = p.group();
    let mut out = Vec::new();

    let dm = coboundary(1, &p.a, &cert.m).expect("degree 1");
    out.push(Verdict::new("m_coboundary", first_mismatch(&dm, &build_m_coboundary(group, &p.a, &p.b))));

    out.push(Verdict::new("kappa_diagonal", first_off_diagonal(&cert.kappa)));

    let d1b = untwisted_d1(group, &p.b);
    let expected_prime = Cochain::from_fn(group, 2, |t| {
        cert.kappa.get(t) + Doubled::diagonal(d1b[t[0] * group.order() + t[1]])
    });
    let prime = first_mismatch(&cert.kappa_prime, &expected_prime).or_else(|| first_off_diagonal(&cert.kappa_prime));
    out.push(Verdict::new("kappa_prime", prime));

    let d_se = coboundary(2, &p.a, &(&cert.sigma + &cert.eta)).expect("degree 2");
    let ratio = (0..cert.c_tilde.len()).find_map(|i| {
        let (ct, d) = (cert.c_tilde.at(i), d_se.at(i));
        let (lhs, rhs) = (ct.plus - ct.minus, d.plus - d.minus);
        (lhs != rhs).then(|| format!("{:?}: c̃ ratio {lhs}, coboundary ratio {rhs}", cert.c_tilde.tuple(i)))
    });
    out.push(Verdict::new("ratio", ratio));

    let lift = |b: Bit| cert.lift.lift(b);
    let n = group.order();
    let lemma = (0..n * n).find_map(|i| {
        let (h, k) = (i / n, i % n);
        let kr = p.kappa_r.get(&[h, k]);
        let lhs = (kr.plus * kr.minus).sign();
        let x = lift(p.b[h]) - lift(p.b[k]) + lift(p.b[group.mul(h, k)]);
        let rhs = lift_quarter(-(x * x)) + lift_quarter(lift(kr.plus) + lift(kr.minus));
        (lhs != rhs).then(|| format!("[{h}, {k}]: {lhs} vs {rhs}"))
    });
    out.push(Verdict::new("lift", lemma));

    out.push(Verdict::new("c_hat_diagonal", first_off_diagonal(&cert.c_hat)));

    let cocycle = Pd0Triple::new(p.a.clone(), cert.kappa.clone(), cert.c_hat.clone())
        .map_err(|e| e.to_string())
        .and_then(|t| validate_triple(&t).map_err(|v| v.to_string()))
        .err();
    out.push(Verdict::new("cocycle", cocycle));
    out
}

/// Validates `p`, reduces it, and checks every identity along the way.
pub fn reduce(p: &CrtPentuple) -> Result<(Pd0Triple, ReductionCertificate)> {
    validate_crt(p).map_err(|v| Error::Rejected(v.to_string()))?;
    let mut cert = build_certificate(p, LiftConvention::ZeroOne)?;
    cert.checks = check_claim_identities(p, &cert);
    if let Some(v) = cert.checks.iter().find(|v| !v.passed) {
        return Err(Error::InternalInconsistency {
            identity: v.name.clone(),
            witness: v.witness.clone().unwrap_or_default(),
        });
    }
    let triple = Pd0Triple::new(p.a.clone(), cert.kappa.clone(), cert.c_hat.clone())?;
    Ok((triple, cert))
}

/// Runs the reduction backwards: the returned pentuple reduces to `t`.
pub fn synthesize_pentuple(t: &Pd0Triple, b: &[Bit]) -> Result<CrtPentuple> {
    let group = t.group();
    if !t.is_diagonal() {
        return Err(Error::invalid("synthesis needs a diagonal triple"));
    }
    if b.len() != group.order() {
        return Err(Error::invalid("b needs one bit per group element"));
    }
    let m = build_m(group, b);
    let dm = coboundary(1, &t.a, &m)?;
    let kappa = &t.kappa;
    let kappa_r = kappa - &dm;
    let d1b = untwisted_d1(group, b);
    let n = group.order();
    let kappa_l = Cochain::from_fn(group, 2, |x| {
        kappa.get(x) + Doubled::diagonal(d1b[x[0] * n + x[1]]) + dm.get(x)
    });
    let (sigma, eta) = sigma_eta(group, &kappa_r, kappa, b, LiftConvention::ZeroOne);
    let c_tilde = &t.c + &coboundary(2, &t.a, &(&sigma + &eta))?;
    let c = &c_tilde - &b_kappa_sign(b, kappa);
    let c_r = &c - &sign_move(&kappa_l, &m, kappa, &t.a);
    let p = CrtPentuple::new(t.a.clone(), b.to_vec(), kappa_r, kappa_l, c_r)?;
    validate_crt(&p).map_err(|v| Error::ConventionDiscrepancy(v.to_string()))?;
    Ok(p)
}

/// Uniformly random `b`, deterministic in `seed`.
pub fn random_b(group: &FiniteGroup, seed: u64) -> Vec<Bit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..group.order()).map(|_| Bit::from(rng.gen::<bool>())).collect()
}
