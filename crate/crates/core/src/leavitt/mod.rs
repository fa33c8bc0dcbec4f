//! The Leavitt path algebra `L_Q`: monomials `s_α t_β`, exact and floating
//! coefficients, normal forms, the gauge action and the symbolic
//! constructions built on top of them.

mod acyclic;
mod element;
mod family;
mod gauge;
mod json;
mod monomial;
mod normal;
pub mod sample;
mod scalar;
mod witness;


use thiserror::Error;

use crate::graphs::GraphError;

pub use acyclic::{acyclic_decomposition, AcyclicDecomposition, BlockMatrix, SourceBlock};
pub use element::Element;
pub use family::{embedded_ck_family, symbolic_ck_check, GeneratorFamily, RelationCheck, SymbolicReport};
pub use gauge::{expand_to_level, gauge_apply, in_level, level_unit, phi_n};
pub use json::{ElementJson, PolicyJson, TermJson};
pub use monomial::{mul_monomials, Monomial};
pub use normal::{equal_in_algebra, is_normal, normalize, reduced_monomials, rewrite_once, BasisPolicy, Rewriter};
pub use scalar::{rational_complex, rational_from_f64, RationalComplex, Scalar, ScalarDisplay};
pub use witness::{spectral_shift_gadget, v_operator, SpectralShift, VOperator};

/// Exact-coefficient element.
pub type ExactElement = Element<RationalComplex>;
/// Floating-coefficient element.
pub type NumericElement = Element<num_complex::Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LeavittError {
    #[error("operands live over different graphs")]
    GraphMismatch,
    #[error("basis policy has no special edge at regular vertex `{0}`")]
    PolicyIncomplete(String),
    #[error("invalid special edge: {0}")]
    PolicyInvalid(String),
    #[error("CK2 expansion blocked at source `{0}`")]
    SourceBlocked(String),
    #[error("no path of the required length leaves `{0}`")]
    SinkBlocked(String),
    #[error("gauge parameter is not unimodular")]
    NotUnimodular,
    #[error("graph has a cycle")]
    CyclicGraph,
    #[error("paths do not share a source")]
    InvalidMonomial,
    #[error("family input was not produced by ck_completion: {0}")]
    NotFromCompletion(String),
    #[error("element is not homogeneous of degree {expected} (found a term of degree {found})")]
    NotHomogeneous { expected: i64, found: i64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed element json: {0}")]
    Json(String),
}
