//! Polynomials in the Plücker variables `P_I`, `Q_J` and the relations among them.

mod certificate;
mod identities;
mod poly;
mod relations;

pub use certificate::{saturation_certificate, CombinationTerm, IndexPair, SaturationCertificate};
pub use identities::{in2pl_phi, in2pl_psi, in2pl_tuples, move_b_tuples, verify_in2pl, verify_move_b, IdentityCheck};
#[doc(hidden)]
pub use identities::{verify_in2pl_with, verify_move_b_with, Fault};
pub use poly::{Monomial, PQVar, SparsePoly, VarKind};
pub use relations::{
    evaluate, evaluate_laurent, evaluate_rrel, incidence_relation, plucker_relation, rrel, LaurentRel,
};
