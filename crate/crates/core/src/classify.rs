//! Classification of triples on a small group, one κ-sector at a time.
//!
//! Everything runs on normalized cochains with phases in `(1/N)ℤ/ℤ`, stored
//! as residues mod `N`. For a κ-class representative the valid `c` form a
//! coset `c₀ + Z` of the `N`-torsion cocycles. Two of them are equivalent
//! iff their difference lies in `B + S_κ`, where `B` is the image of `d²ₐ`
//! over the full torus and `S_κ` the sign factors of moves with `d¹ₐm = 0`.
//! Membership in `B` is detected by an integer left-kernel map `Φ` (so
//! `ker Φ = B`), and classes are keyed by the Howell-reduced `Φ(c)` modulo
//! `Φ(S_κ)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cochain::{obstruction_rhs, restricted_differential, Cochain, SlotSpace};
use crate::coeff::{Bit, Phase};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Z2Hom};
use crate::invariant::{sign_move, Pd0Triple};
use crate::io::{serialize_triple, triple_to_value};
use crate::linalg::lattice::integer_left_kernel;
use crate::linalg::modular::{AugmentedHowell, HowellForm};
use crate::linalg::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassifyMode {
    /// All classes.
    Full,
    /// Only classes containing a diagonal triple.
    DiagonalOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Phase denominator `N`; must be a multiple of 8. Defaults to
    /// `lcm(|G|, 8)`.
    pub denominator: Option<u64>,
    pub mode: ClassifyMode,
    /// Cap on the number of classes enumerated per sector.
    pub max_classes: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { denominator: None, mode: ClassifyMode::Full, max_classes: 1 << 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorReport {
    pub kappa: Cochain<Bit>,
    /// Whether some `c` (diagonal, in diagonal mode) solves the cocycle
    /// condition for this κ-class.
    pub solvable: bool,
    pub class_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub sector: usize,
    pub representative: Pd0Triple,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub order: usize,
    pub a: Z2Hom,
    pub denominator: u64,
    pub mode: ClassifyMode,
    pub sectors: Vec<SectorReport>,
    pub classes: Vec<ClassEntry>,
}

impl ClassificationReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Stable JSON summary: counts per sector and one digest per class.
    pub fn summary_json(&self) -> Value {
        json!({
            "order": self.order,
            "a": serde_json::to_value(self.a.values()).expect("bits serialize"),
            "denominator": self.denominator,
            "diagonalOnly": self.mode == ClassifyMode::DiagonalOnly,
            "classCount": self.class_count(),
            "sectors": self.sectors.iter().enumerate().map(|(i, s)| json!({
                "index": i,
                "kappa": serde_json::to_value(s.kappa.entries()).expect("entries serialize"),
                "solvable": s.solvable,
                "classCount": s.class_count,
            })).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| json!({
                "sector": c.sector,
                "digest": c.digest,
            })).collect::<Vec<_>>(),
        })
    }

    /// Summary plus the full representative triples.
    pub fn to_json(&self) -> Value {
        let mut v = self.summary_json();
        v["representatives"] = Value::Array(self.classes.iter().map(|c| triple_to_value(&c.representative)).collect());
        v
    }
}

/// First 16 hex digits of the SHA-256 of the canonical triple file.
pub fn triple_digest(t: &Pd0Triple) -> String {
    let hash = Sha256::digest(serialize_triple(t).as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn add_mod(x: &[u64], y: &[u64], n: u64) -> Vec<u64> {
    x.iter().zip(y).map(|(&a, &b)| (a + b) % n).collect()
}

fn bits_of(v: &[u64]) -> Vec<Bit> {
    v.iter().map(|&x| Bit::from(x % 2 == 1)).collect()
}

fn units_of(p: &[Phase], n: u64) -> Vec<u64> {
    p.iter().map(|x| x.to_units(n).expect("denominator divides N")).collect()
}

fn phases_of(v: &[u64], n: u64) -> Vec<Phase> {
    v.iter().map(|&x| Phase::from_units(x, n)).collect()
}

/// Breadth-first enumeration of `start + ⟨gens⟩` modulo a Howell form,
/// tracking one preimage per key.
fn orbit(
    start_key: Vec<u64>,
    start: Vec<u64>,
    gens: &[(Vec<u64>, Vec<u64>)],
    h: &HowellForm,
    n: u64,
    cap: usize,
) -> Result<BTreeMap<Vec<u64>, Vec<u64>>> {
    let mut seen = BTreeMap::new();
    let start_key = h.reduce(&start_key);
    seen.insert(start_key.clone(), start.clone());
    let mut queue = VecDeque::from([(start_key, start)]);
    while let Some((key, c)) = queue.pop_front() {
        for (dkey, dc) in gens {
            let k = h.reduce(&add_mod(&key, dkey, n));
            if !seen.contains_key(&k) {
                if seen.len() >= cap {
                    return Err(Error::BudgetExceeded(cap as u64));
                }
                let c2 = add_mod(&c, dc, n);
                seen.insert(k.clone(), c2.clone());
                queue.push_back((k, c2));
            }
        }
    }
    Ok(seen)
}

/// Representatives of `Z / B` over ℤ₂, sorted.
fn kappa_classes(z: &[Vec<u64>], b: &HowellForm, dim: usize, cap: usize) -> Result<Vec<Vec<u64>>> {
    let gens: Vec<_> = z.iter().map(|g| (g.clone(), g.clone())).collect();
    let reps = orbit(vec![0; dim], vec![0; dim], &gens, b, 2, cap)?;
    Ok(reps.into_keys().collect())
}

struct Level {
    space: SlotSpace,
    /// Differential from this level to the next.
    d: Option<SparseMatrix>,
}

struct Complex {
    group: Arc<FiniteGroup>,
    a: Z2Hom,
    n: u64,
    s1: SlotSpace,
    s2: SlotSpace,
    s3: SlotSpace,
    s4: SlotSpace,
    d1_solver: AugmentedHowell,
    b2: HowellForm,
    z2: Vec<Vec<u64>>,
    d3_solver: AugmentedHowell,
    z3: Vec<Vec<u64>>,
    ker_d1: Vec<Cochain<Bit>>,
}

fn build_complex(group: &Arc<FiniteGroup>, a: &Z2Hom, n: u64, diagonal: bool) -> Complex {
    let levels: Vec<Level> = (1..=4)
        .map(|k| Level { space: SlotSpace::new(group, k, true, diagonal), d: None })
        .collect();
    let mut levels = levels;
    for k in 0..3 {
        let d = restricted_differential(group, a, &levels[k].space, &levels[k + 1].space);
        levels[k].d = Some(d);
    }
    let d1 = levels[0].d.as_ref().expect("set above");
    let d2 = levels[1].d.as_ref().expect("set above");
    let d3 = levels[2].d.as_ref().expect("set above");
    let d1t = d1.transpose_dense_mod(2);
    let d1_solver = AugmentedHowell::new(2, &d1t, d1.nrows());
    let ker_d1 = d1_solver.left_kernel().iter().map(|k| levels[0].space.cochain(group, &bits_of(k))).collect();
    let b2 = HowellForm::new(2, d1.nrows(), d1t);
    let z2 = AugmentedHowell::new(2, &d2.transpose_dense_mod(2), d2.nrows()).left_kernel();
    let d3_solver = AugmentedHowell::new(n, &d3.transpose_dense_mod(n), d3.nrows());
    let z3 = d3_solver.left_kernel();
    let mut it = levels.into_iter().map(|l| l.space);
    let (s1, s2, s3, s4) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    Complex { group: group.clone(), a: a.clone(), n, s1, s2, s3, s4, d1_solver, b2, z2, d3_solver, z3, ker_d1 }
}

impl Complex {
    fn particular(&self, kappa: &Cochain<Bit>) -> Option<Vec<u64>> {
        let o = obstruction_rhs(kappa, &self.a).expect("degree 2");
        self.d3_solver.solve(&units_of(&self.s4.coords(&o), self.n))
    }
}

/// `Φ(c) = L·c mod N` and the sign-move subgroup of one sector.
struct Sector {
    kappa: Cochain<Bit>,
    phi_s: Vec<Vec<u64>>,
    h_s: HowellForm,
}

struct Phi {
    rows: Vec<Vec<i64>>,
    n: u64,
}

impl Phi {
    fn apply(&self, c: &[u64]) -> Vec<u64> {
        let n = self.n as i128;
        self.rows
            .iter()
            .map(|u| {
                let s: i128 = u.iter().zip(c).filter(|(&x, _)| x != 0).map(|(&x, &y)| x as i128 * y as i128).sum();
                s.rem_euclid(n) as u64
            })
            .collect()
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn sector(full: &Complex, phi: &Phi, kappa: Cochain<Bit>) -> Sector {
    let phi_s: Vec<Vec<u64>> = full
        .ker_d1
        .iter()
        .map(|m| {
            let s = sign_move(&kappa, m, &kappa, &full.a);
            phi.apply(&units_of(&full.s3.coords(&s), full.n))
        })
        .collect();
    let h_s = HowellForm::new(full.n, phi.dim(), phi_s.clone());
    Sector { kappa, phi_s, h_s }
}

/// Howell form of `{Σ αⱼ zⱼ : Σ αⱼ Φ(zⱼ) ∈ ⟨Φ(S)⟩}`.
fn equivalence_kernel(z: &[Vec<u64>], phi_z: &[Vec<u64>], phi_s: &[Vec<u64>], n: u64, dim: usize, phi_dim: usize) -> HowellForm {
    let stacked: Vec<Vec<u64>> = phi_z.iter().chain(phi_s).cloned().collect();
    let kernel = AugmentedHowell::new(n, &stacked, phi_dim).left_kernel();
    let gens = kernel
        .iter()
        .map(|alpha| {
            let mut v = vec![0u64; dim];
            for (&c, zj) in alpha.iter().zip(z) {
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(zj) {
                        *x = ((*x as u128 + c as u128 * y as u128) % n as u128) as u64;
                    }
                }
            }
            v
        })
        .collect();
    HowellForm::new(n, dim, gens)
}

fn embed_diagonal(v: &[u64]) -> Vec<u64> {
    v.iter().flat_map(|&x| [x, x]).collect()
}

/// Classifies the triples with the given `a` on `group`.
pub fn classify_sector(group: &Arc<FiniteGroup>, a: &Z2Hom, opts: ClassifyOptions) -> Result<ClassificationReport> {
    let order = group.order() as u64;
    let n = opts.denominator.unwrap_or_else(|| order.lcm(&8));
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::invalid(format!("the denominator must be a positive multiple of 8, got {n}")));
    }
    if a.values().len() != group.order() {
        return Err(Error::invalid("a has the wrong length for the group"));
    }
    let full = build_complex(group, a, n, false);
    let d2 = restricted_differential(group, a, &full.s2, &full.s3);
    let phi = Phi { rows: integer_left_kernel(&d2)?, n };
    let kappa_reps = kappa_classes(&full.z2, &full.b2, full.s2.dim(), opts.max_classes)?;
    let sectors: Vec<Sector> = kappa_reps
        .par_iter()
        .map(|k| sector(&full, &phi, full.s2.cochain(group, &bits_of(k))))
        .collect();
    let phi_z: Vec<Vec<u64>> = full.z3.iter().map(|z| phi.apply(z)).collect();
    let z_gens: Vec<(Vec<u64>, Vec<u64>)> = phi_z.iter().cloned().zip(full.z3.iter().cloned()).collect();

    let (reports, mut classes) = match opts.mode {
        ClassifyMode::Full => {
            let per_sector: Vec<Result<(SectorReport, Vec<ClassEntry>)>> = sectors
                .par_iter()
                .enumerate()
                .map(|(idx, sec)| {
                    let Some(c0) = full.particular(&sec.kappa) else {
                        return Ok((SectorReport { kappa: sec.kappa.clone(), solvable: false, class_count: 0 }, vec![]));
                    };
                    let found = orbit(phi.apply(&c0), c0, &z_gens, &sec.h_s, n, opts.max_classes)?;
                    let hk = equivalence_kernel(&full.z3, &phi_z, &sec.phi_s, n, full.s3.dim(), phi.dim());
                    let mut reps: Vec<Vec<u64>> = found.values().map(|c| hk.reduce(c)).collect();
                    reps.sort();
                    let entries = reps
                        .iter()
                        .map(|c| {
                            let t = Pd0Triple::new(a.clone(), sec.kappa.clone(), full.s3.cochain(group, &phases_of(c, n)))
                                .expect("shapes agree");
                            ClassEntry { sector: idx, digest: triple_digest(&t), representative: t }
                        })
                        .collect::<Vec<_>>();
                    Ok((
                        SectorReport { kappa: sec.kappa.clone(), solvable: true, class_count: entries.len() },
                        entries,
                    ))
                })
                .collect();
            let mut reports = Vec::new();
            let mut classes = Vec::new();
            for r in per_sector {
                let (rep, entries) = r?;
                reports.push(rep);
                classes.extend(entries);
            }
            (reports, classes)
        }
        ClassifyMode::DiagonalOnly => classify_diagonal(&full, &phi, &sectors, &kappa_reps, opts.max_classes)?,
    };
    classes.sort_by_key(|x| x.sector);
    Ok(ClassificationReport { order: group.order(), a: a.clone(), denominator: n, mode: opts.mode, sectors: reports, classes })
}

type DiagonalCandidate = (Vec<u64>, Vec<u64>);

fn classify_diagonal(
    full: &Complex,
    phi: &Phi,
    sectors: &[Sector],
    kappa_reps: &[Vec<u64>],
    cap: usize,
) -> Result<(Vec<SectorReport>, Vec<ClassEntry>)> {
    let group = &full.group;
    let n = full.n;
    let diag = build_complex(group, &full.a, n, true);
    let sector_of: HashMap<&Vec<u64>, usize> = kappa_reps.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let diag_reps = kappa_classes(&diag.z2, &diag.b2, diag.s2.dim(), cap)?;
    let phi_zd: Vec<Vec<u64>> = diag.z3.iter().map(|z| phi.apply(&embed_diagonal(z))).collect();

    let found: Vec<Result<Vec<(usize, Vec<u64>, DiagonalCandidate)>>> = diag_reps
        .par_iter()
        .map(|kd| {
            let kappa_d = diag.s2.cochain(group, &bits_of(kd));
            let Some(c0) = diag.particular(&kappa_d) else { return Ok(vec![]) };
            let full_coords: Vec<u64> = full.s2.coords(&kappa_d).iter().map(|b| b.as_u8() as u64).collect();
            let rep_key = full.b2.reduce(&full_coords);
            let idx = sector_of[&rep_key];
            let sec = &sectors[idx];
            let target: Vec<u64> = add_mod(&rep_key, &full_coords, 2);
            let m_coords = full.d1_solver.solve(&target).expect("same κ-class");
            let m = full.s1.cochain(group, &bits_of(&m_coords));
            let shift = units_of(&full.s3.coords(&sign_move(&kappa_d, &m, &sec.kappa, &full.a)), n);
            let start_key = add_mod(&phi.apply(&embed_diagonal(&c0)), &phi.apply(&shift), n);
            let gens: Vec<_> = phi_zd.iter().cloned().zip(diag.z3.iter().cloned()).collect();
            let keys = orbit(start_key, c0, &gens, &sec.h_s, n, cap)?;
            let own = sector(full, phi, kappa_d.clone());
            let hk = equivalence_kernel(&diag.z3, &phi_zd, &own.phi_s, n, diag.s3.dim(), phi.dim());
            Ok(keys.into_iter().map(|(key, c)| (idx, key, (kd.clone(), hk.reduce(&c)))).collect())
        })
        .collect();

    let mut best: BTreeMap<(usize, Vec<u64>), DiagonalCandidate> = BTreeMap::new();
    for batch in found {
        for (idx, key, cand) in batch? {
            best.entry((idx, key))
                .and_modify(|cur| {
                    if cand < *cur {
                        *cur = cand.clone();
                    }
                })
                .or_insert(cand);
        }
    }
    let mut counts = vec![0usize; sectors.len()];
    let mut classes: Vec<ClassEntry> = best
        .into_iter()
        .map(|((idx, _), (kd, c))| {
            counts[idx] += 1;
            let kappa = diag.s2.cochain(group, &bits_of(&kd));
            let t = Pd0Triple::new(full.a.clone(), kappa, diag.s3.cochain(group, &phases_of(&c, n))).expect("shapes agree");
            ClassEntry { sector: idx, digest: triple_digest(&t), representative: t }
        })
        .collect();
    classes.sort_by(|x, y| {
        (x.sector, x.representative.kappa.entries(), x.representative.c.entries())
            .cmp(&(y.sector, y.representative.kappa.entries(), y.representative.c.entries()))
    });
    let reports = sectors
        .iter()
        .zip(&counts)
        .map(|(s, &count)| SectorReport { kappa: s.kappa.clone(), solvable: count > 0, class_count: count })
        .collect();
    Ok((reports, classes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::all_z2_homs;

    fn run(group: FiniteGroup, a_index: usize, mode: ClassifyMode) -> ClassificationReport {
        let g = Arc::new(group);
        let a = all_z2_homs(&g)[a_index].clone();
        classify_sector(&g, &a, ClassifyOptions { denominator: Some(8), mode, ..Default::default() }).unwrap()
    }

    #[test]
    fn trivial_group_has_one_class() {
        let r = run(FiniteGroup::trivial(), 0, ClassifyMode::Full);
        assert_eq!(r.class_count(), 1);
        let r = run(FiniteGroup::trivial(), 0, ClassifyMode::DiagonalOnly);
        assert_eq!(r.class_count(), 1);
    }

    #[test]
    fn z2_zero_kappa_diagonal_sector() {
        let r = run(FiniteGroup::cyclic(2).unwrap(), 0, ClassifyMode::DiagonalOnly);
        assert!(r.sectors[0].kappa.is_identity());
        assert_eq!(r.sectors[0].class_count, 2);
    }

    #[test]
    fn classification_is_deterministic() {
        let a = run(FiniteGroup::cyclic(2).unwrap(), 0, ClassifyMode::Full);
        let b = run(FiniteGroup::cyclic(2).unwrap(), 0, ClassifyMode::Full);
        assert_eq!(a, b);
    }

    #[test]
    fn representatives_are_valid_and_pairwise_inequivalent() {
        use crate::invariant::{equiv, validate_triple, DEFAULT_BUDGET};
        let r = run(FiniteGroup::cyclic(2).unwrap(), 0, ClassifyMode::Full);
        for c in &r.classes {
            assert!(validate_triple(&c.representative).is_ok());
        }
        for (i, x) in r.classes.iter().enumerate() {
            for y in &r.classes[i + 1..] {
                assert!(!equiv(&x.representative, &y.representative, DEFAULT_BUDGET).unwrap().is_equivalent());
            }
        }
    }

    #[test]
    fn denominator_must_be_multiple_of_eight() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let opts = ClassifyOptions { denominator: Some(4), ..Default::default() };
        assert!(classify_sector(&g, &Z2Hom::zero(2), opts).is_err());
    }
}
