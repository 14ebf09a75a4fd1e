//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sptinv_core::crt::random_b;
use sptinv_core::{all_z2_homs, synthesize_pentuple, CrtPentuple, FiniteGroup, Pd0Triple, SampleMode, TripleSampler, Z2Hom};

pub fn z2xz2() -> Arc<FiniteGroup> {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    Arc::new(FiniteGroup::direct_product(&z2, &z2))
}

pub fn d4() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::dihedral(4).unwrap())
}

/// The `index`-th homomorphism to ℤ₂.
pub fn hom(group: &FiniteGroup, index: usize) -> Z2Hom {
    all_z2_homs(group).swap_remove(index)
}

pub fn triple(group: &Arc<FiniteGroup>, a: &Z2Hom, mode: SampleMode, seed: u64) -> Pd0Triple {
    TripleSampler::new(group, a, 8, mode).unwrap().sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn pentuple(group: &Arc<FiniteGroup>, a: &Z2Hom, seed: u64) -> CrtPentuple {
    let t = triple(group, a, SampleMode::Diagonal, seed);
    synthesize_pentuple(&t, &random_b(group, seed)).unwrap()
}
