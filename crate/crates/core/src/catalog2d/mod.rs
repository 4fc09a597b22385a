//! Planar catalogue: parametric families, boundary classification and
//! symmetry reduction.

mod analysis;
mod enumerate;
mod families;

pub use analysis::{
    are_isomorphic, classify_boundary, classify_membership, dihedral, BoundaryAnalysis, FlatRun,
};
pub use enumerate::{
    classify_window_set, enumerate_candidates, local_boundary_forms, Enumeration, LocalForm,
    MAX_ENUMERATION_RADIUS,
};
pub use families::{
    generate, generate_forced, lookup, registry_ids, registry_members, Confidence, Family,
    FamilyRef, Member, Params, Step, Tab, FAMILIES,
};
