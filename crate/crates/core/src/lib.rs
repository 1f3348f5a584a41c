//! Bounds for positive integer solutions of systems of successor and
//! product equations, the reduction of polynomial equations to such systems,
//! and exhaustive verification of the bound for small heights.

#![allow(clippy::needless_range_loop)]

pub mod bound;
pub mod error;
pub mod par;
pub mod poly;
pub mod reducer;
pub mod solver;
pub mod system;
pub mod verifier;
pub mod witnesses;

pub use bound::{bound_f, max_relevant_arity, HeightBound};
pub use error::{Error, Result};
pub use par::Exec;
pub use poly::{parse_polynomial, Polynomial};
pub use reducer::{
    bounded_membership, conjectural_bound, domain_transform, eliminate_additions,
    eliminate_units, skolem_reduce, to_conjecture_form, Domain, Membership, ReductionTrace,
};
pub use solver::{
    enumerate_from, enumerate_solutions, find_first, propagate, verify_identity_theorem2,
    Enumeration, PartialAssignment, Propagated,
};
pub use system::{derive_signature, is_subsystem, satisfies, EquationSystem, PosTuple, RelationAtom, Stage};
pub use witnesses::{
    counterexample_witness, theorem1_witness, theorem2_witness, theorem6_padding,
    CounterexampleKind, WitnessPackage,
};
