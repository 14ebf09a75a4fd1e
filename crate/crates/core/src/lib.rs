//! Doubled-coefficient twisted group cohomology for finite groups.
//!
//! The crate covers:
//!
//! * finite groups as multiplication tables and their ℤ₂-valued
//!   homomorphisms ([`group`]);
//! * exact coefficients: bits, phases in ℚ/ℤ and doubled pairs with the
//!   swap action ([`coeff`]);
//! * cochains, the twisted differentials and their integer matrices
//!   ([`cochain`]);
//! * invariant triples `(c, κ, a)`, their validation and equivalence
//!   ([`invariant`]), with sector classification ([`classify`]);
//! * reduction of pentuples `(c_R, κ_R, κ_L, b, a)` to diagonal triples
//!   ([`crt`]);
//! * JSON file formats ([`io`]).

pub mod classify;
pub mod cochain;
pub mod coeff;
pub mod crt;
pub mod error;
pub mod group;
pub mod invariant;
pub mod io;
pub mod linalg;
pub mod sample;

pub use classify::{classify_sector, ClassifyMode, ClassifyOptions, ClassificationReport};
pub use cochain::{coboundary, cochain_combine, linearize, obstruction_rhs, random_cochain, CombineOp, Cochain, TwistMatrix};
pub use coeff::{lift_eighth, lift_quarter, Bit, CoeffKind, Doubled, Eps, LiftConvention, Phase};
pub use crt::{
    build_certificate, build_m, check_claim_identities, reduce, synthesize_pentuple, validate_crt, CrtPentuple,
    CrtViolation, ReductionCertificate, Verdict,
};
pub use error::{Error, Result};
pub use group::{all_z2_homs, check_axioms, FiniteGroup, Z2Hom};
pub use invariant::{
    apply_move, coboundary_membership, equiv, equiv_with, is_diagonal, is_in_diagonal_class, solve_kappa_move,
    validate_triple, DiagonalOutcome, EquivCertificate, EquivOptions, EquivOutcome, Membership, Pd0Triple,
    TripleViolation, DEFAULT_BUDGET,
};
pub use sample::{SampleMode, TripleSampler};
