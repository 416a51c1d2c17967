//! Decorated bundles over `R^n x SO(k)` with a connection, parallel
//! transport, and the isomorphism onto the twisted product.

pub mod bundle;
pub mod transport;

pub use bundle::{
    decorated, decorated_pairs, path_config, verify_prop62, DecoratedBundle, DecoratedMorphism, DecoratedPair,
};
pub use transport::{
    constant_closed_form, convergence, parallel_transport, so2_generator, transport_from, verify_transport, Connection,
    Convergence, TransportEta, MIN_ORDER, ROUNDOFF_FLOOR,
};
