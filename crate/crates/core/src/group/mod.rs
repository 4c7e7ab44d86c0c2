//! Presentations of fundamental groups, Tietze moves, and abelianization.

mod abelian;
mod presentation;
mod smith;

pub use abelian::{abelianization, triviality_status, AbelianGroup, Triviality};
pub use presentation::{
    canonical, cyclic_reduce, free_reduce, fundamental_presentation, induced_presentation, inverse, tietze_simplify,
    word_from_signed, Letter, Lineage, Presentation, Word,
};
pub use smith::{smith_normal_form, IntegerMatrix, SmithForm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("complex is disconnected; its fundamental group depends on the basepoint")]
    Disconnected,
    #[error("presentation carries no link to a complex")]
    MissingLineage,
    #[error("deformation does not start from the complex this presentation was built on")]
    LineageMismatch,
    #[error("deformation target does not match the supplied complex")]
    TargetMismatch,
}
