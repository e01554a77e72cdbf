//! Affine semigroups of rectangular simplices.
//!
//! Builds `Q(λ)` for `Δ(λ)`, decides membership, enumerates holes by their
//! height above the skew facet, and produces certificates for 3-simplices
//! whose holes all sit deep inside the cone.

pub mod certificate;
pub mod error;
pub mod good_triples;
pub mod lattice;
pub mod lifting;
pub mod oracle;
pub mod simplex;

pub use certificate::{emit, parse, verify, verify_certificate, Certificate, Verdict};
pub use error::{Error, Result};
pub use good_triples::{
    certify, family, is_good_triple, search_good_triples, witness_hole, GoodTriple,
};
pub use lattice::{delta, dot, lcm_all, LatticePoint, LinearForm};
pub use lifting::{deep_hole_construction, lift_lambda, LiftStep, LiftTrace};
pub use oracle::{
    boundary_hole_scan, enumerate_holes, enumerate_holes_parallel, in_saturation, naive_member,
    reduce, unique_reduced_element, HoleEnumeration, HoleRecord, MembershipWitness, NaiveLimits,
    SemigroupOracle,
};
pub use simplex::{FacetId, RectSimplex};
