//! The product bundle `U x G -> U`, the categorical group of functors
//! `U -> G`, and sections and trivializations of the product bundle.

pub mod bundle;
pub mod functor;
pub mod gu;
pub mod props;
pub mod section;

pub use bundle::{ProductBundle, ProductMorphism};
pub use functor::{all_maps, FunctorSpace, FunctorUG, NatTransf};
pub use gu::{index_fits, verify_gu_categorical_group};
pub use props::{verify_product_bundle, verify_prop31, verify_prop32, verify_prop33};
pub use section::{
    automorphism_to_functor, section_to_iso, verify_composition_correspondence, verify_section_iso, BundleMap,
    SectionIso,
};
