//! Random valid triples.
//!
//! κ is drawn uniformly from the normalized 2-cocycles (diagonal or not) and
//! `c` from the solutions of `d³ₐc = (−1)^{κ·κ}` with denominators dividing
//! `N`. Draws whose obstruction has no solution at that denominator are
//! redrawn.

use std::sync::Arc;

use rand::Rng;

use crate::cochain::{obstruction_rhs, restricted_differential, SlotSpace};
use crate::coeff::{Bit, Phase};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Z2Hom};
use crate::invariant::Pd0Triple;
use crate::linalg::modular::AugmentedHowell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Diagonal,
    Full,
}

/// Precomputed solver state for drawing triples on one `(G, a, N)`.
pub struct TripleSampler {
    group: Arc<FiniteGroup>,
    a: Z2Hom,
    denominator: u64,
    spaces: [SlotSpace; 3],
    kappa_cocycles: Vec<Vec<u64>>,
    d3: AugmentedHowell,
    c_cocycles: Vec<Vec<u64>>,
}

const MAX_REDRAWS: usize = 64;

impl TripleSampler {
    pub fn new(group: &Arc<FiniteGroup>, a: &Z2Hom, denominator: u64, mode: SampleMode) -> Result<Self> {
        if denominator < 2 || !denominator.is_multiple_of(2) {
            return Err(Error::invalid("the sampling denominator must be even"));
        }
        let diag = mode == SampleMode::Diagonal;
        let s2 = SlotSpace::new(group, 2, true, diag);
        let s3 = SlotSpace::new(group, 3, true, diag);
        let s4 = SlotSpace::new(group, 4, true, diag);
        let d2 = restricted_differential(group, a, &s2, &s3);
        let kappa_cocycles = AugmentedHowell::new(2, &d2.transpose_dense_mod(2), d2.nrows()).left_kernel();
        let d3m = restricted_differential(group, a, &s3, &s4);
        let d3 = AugmentedHowell::new(denominator, &d3m.transpose_dense_mod(denominator), d3m.nrows());
        let c_cocycles = d3.left_kernel();
        Ok(TripleSampler {
            group: group.clone(),
            a: a.clone(),
            denominator,
            spaces: [s2, s3, s4],
            kappa_cocycles,
            d3,
            c_cocycles,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn random_combination<R: Rng>(rng: &mut R, basis: &[Vec<u64>], modulus: u64, len: usize) -> Vec<u64> {
        let mut v = vec![0u64; len];
        for row in basis {
            let c = rng.gen_range(0..modulus);
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = ((*x as u128 + c as u128 * r as u128) % modulus as u128) as u64;
                }
            }
        }
        v
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Pd0Triple {
        let [s2, s3, s4] = &self.spaces;
        let n = self.denominator;
        for attempt in 0..=MAX_REDRAWS {
            let kcoords = if attempt == MAX_REDRAWS {
                vec![0; s2.dim()]
            } else {
                Self::random_combination(rng, &self.kappa_cocycles, 2, s2.dim())
            };
            let bits: Vec<Bit> = kcoords.iter().map(|&v| Bit::from(v == 1)).collect();
            let kappa = s2.cochain(&self.group, &bits);
            let obstruction = obstruction_rhs(&kappa, &self.a).expect("degree 2");
            let y: Vec<u64> = s4
                .coords(&obstruction)
                .iter()
                .map(|p| p.to_units(n).expect("obstruction values are halves"))
                .collect();
            let Some(particular) = self.d3.solve(&y) else { continue };
            let shift = Self::random_combination(rng, &self.c_cocycles, n, s3.dim());
            let units: Vec<Phase> =
                particular.iter().zip(&shift).map(|(&p, &q)| Phase::from_units((p + q) % n, n)).collect();
            let c = s3.cochain(&self.group, &units);
            return Pd0Triple::new(self.a.clone(), kappa, c).expect("shapes agree");
        }
        unreachable!("κ = 0 always admits c = 0")
    }
}
