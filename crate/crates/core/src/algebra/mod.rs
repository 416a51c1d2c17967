//! Finite and matrix groups, crossed modules and the categorical group they define.

pub mod crossed;
pub mod group;
pub mod laws;
pub mod morphism;
pub mod perm;

pub use crossed::{catalog_ids, lookup, Action, Boundary, CatalogEntry, CrossedModule, CrossedModuleSpec, CATALOG};
pub use group::{
    exp_skew, format_element, format_float, hat, vee, Element, ElementSpec, Group, GroupKind, Rotation, GROUP_TOL,
};
pub use laws::{verify_crossed_module, verify_exchange_law, verify_group_laws, verify_two_group};
pub use morphism::TwoGroupMorphism;
pub use perm::Perm;
