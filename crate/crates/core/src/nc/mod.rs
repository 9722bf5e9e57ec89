//! Noncommutative engine: truncated free-algebra elements, normal ordering,
//! series, coproduct extension and the expression parser.

pub mod coproduct;
pub mod ncpoly;
pub mod parse;
pub mod rewrite;
pub mod series;

pub use coproduct::{apply_coproduct, CoproductMap};
pub use ncpoly::{NCPoly, TensorPoly, Trunc, Word};
pub use parse::{identifiers, parse_coeff, parse_expr, parse_fraction, parse_tensor, ParseContext};
pub use rewrite::{normalize_randomized, presentation_jacobi_defect, Normalizer, RelationTable};
pub use series::{series_apply, SeriesFn};
