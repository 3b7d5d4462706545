//! The free algebra on weighted generators, presentations of graded algebras
//! and right modules, and the text format.

mod parse;
mod poly;
mod presentation;
mod word;

pub use parse::{parse_presentation, Document};
pub use poly::{multiply, ModElement, NcPolynomial};
pub use presentation::{eliminate_linear_relations, Elimination, ModulePresentation, Presentation};
pub use word::{graded_component_dim_free, words_of_degree, GeneratorSet, Word, MAX_GENERATORS};
