pub mod algebra;
pub mod base;
pub mod bundle;
pub mod cocycle;
pub mod decorated;
pub mod error;
pub mod exec;
pub mod product;
pub mod report;
pub mod scenario;
pub mod suites;
pub mod twisted;

pub use algebra::{CrossedModule, Element, Group, TwoGroupMorphism};
pub use error::{Error, Result};
pub use exec::{Checker, Exec};
pub use report::{LawRecord, LawReport, Mode, Status};
