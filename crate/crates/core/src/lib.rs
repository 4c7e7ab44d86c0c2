//! Polyhedral spheres with faces glued in pairs: identification classes,
//! flag actions and edge orders, the quotient 2-complex with its
//! deformations, and fundamental-group presentations with their
//! abelianizations.

pub mod actions;
pub mod analysis;
pub mod complex;
pub mod fuzz;
pub mod gallery;
pub mod group;
pub mod quotient;
pub mod unionfind;

pub use actions::{degree_of_scheme, edge_order, is_collapsible, is_flat, PairingActions};
pub use analysis::{analyze, contract, AnalysisError, AnalysisReport, ContractStrategy};
pub use complex::{validate, FacePairingScheme, SchemeError};
pub use quotient::{build_quotient, QuotientComplex};
