//! Exact symbolic verification of Lie bialgebras, their two-parameter
//! deformation families and parameter-dependent Hopf presentations.

pub mod dataset;
pub mod document;
pub mod error;
pub mod expansion;
pub mod hopf;
pub mod lie;
pub mod nc;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use poly::{Monomial, ParamPoly, ParamSpace};
pub use scalar::Scalar;
pub use tensor::{Basis, BracketTensor, CobracketTensor, SparseTensor, StructureTensor, TensorKind};
