pub mod algebra;
pub mod element;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod parse;
pub mod presentation;
pub mod scalar;
pub mod words;

pub use algebra::{Evaluator, GenPolynomial, Generator, Monomial};
pub use element::SkeinElement;
pub use error::SkeinError;
pub use scalar::LaurentScalar;
pub use words::{CurveWord, Letter, Multicurve};
pub use parse::{parse_expression, ParseError};
