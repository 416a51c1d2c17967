//! Covers, overlap categories, nonabelian cocycle data, the `theta` functors
//! and transition functors between local trivializations.

pub mod data;
pub mod overlap;
pub mod theta;
pub mod transition;

pub use data::{verify_cocycle_condition, CocycleData};
pub use overlap::{format_tag, Cover, OMor, OObj, OverlapCategory, Side};
pub use theta::{
    build_theta, replay, restrict_theta, theta_with, triple_transformation, verify_prop51, verify_theta_functors,
    TripleOverlap,
};
pub use transition::{
    transition_from_maps, transition_from_trivializations, verify_transition_cocycle, Trivializations,
};
