//! Finite fields, classical forms, the domains Ω acted on by classical groups,
//! and the conversion of matrix generators into permutation groups.

pub mod actions;
pub mod domains;
pub mod field;
pub mod forms;
pub mod io;
pub mod linalg;

use thiserror::Error;

pub use actions::{
    induced_on_ksets, isometry_generators, k_set_action, perm_image, product_action,
    semisimple_decomposition, sl_generators, Decomposition, SemilinearMap,
};
pub use domains::{Domain, Elem};
pub use field::Fq;
pub use forms::{Eps, FormKind, FormSpace};
pub use linalg::{Mat, Subspace};

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("generator {generator} does not preserve the domain (element {element} maps outside)")]
    DomainNotPreserved { generator: usize, element: usize },
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
}
