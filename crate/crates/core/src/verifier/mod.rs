//! Finite checks of the height conjecture: extensions and `Φ(c)`, prime
//! indexing of tuples, the classification of triple signatures and the
//! canonical quadruples with their parametric families.

pub mod encode;
pub mod extension;
pub mod families;
pub mod phi;
pub mod quadruples;
pub mod sigmask;
pub mod triples;

pub use encode::{decode_index, encode_tuple, first_primes};
pub use extension::{default_cap, find_extension, search_extension, ExtensionSearch, Route};
pub use families::{family_catalog, ParametricFamily};
pub use phi::{for_each_tuple, verify_phi, ArityRecord, Mode, PhiOptions, PhiStatus, VerificationReport};
pub use quadruples::{
    canonical_quadruples, check_families, verify_coverage, CanonicalQuadruple, CoverageReport,
};
pub use triples::{classify_triples, leading_one_without_extension, Cell, CellClass};
