//! Polynomials attached to a single matroid and the identities they satisfy.

mod matroidal;
mod msp;
mod search;
mod singleton;
mod tutte;

pub use matroidal::{
    check_handle_pre, dc_split, degree_law_check, handle_split, is_matroidal, min_part_is_msp_check,
    normalize_coordinates, singular_identity, singular_identity_check, verify_handle_formula, HandleSplit,
    SingularIdentity,
};
pub use msp::{basis_poly, configuration_poly, maximal_rank_poly, msp_build, ones, BasisCoeffs};
pub use search::{matroidal_space, MatroidalSpace, SEARCH_LIMIT};
pub use singleton::{DPart, Singleton, SingletonData};
pub use tutte::{edge_kind, tutte_identities, tutte_poly, EdgeKind, TutteReport};
