//! Truncated two-sided Gröbner bases over the deglex order, normal words and
//! the graded pieces of quotient algebras and modules.

mod automaton;
mod buchberger;
mod growth;
mod module;
mod quotient;

pub use automaton::Automaton;
pub use buchberger::{groebner_truncated, minimize_relations, normal_form, GroebnerResult};
pub use growth::{growth_estimate, GrowthEstimate, GrowthKind};
pub use module::{module_dims, FreeModule, GradedModule, ModuleBasis};
pub use quotient::{algebra_dims, QuotientAlgebra};
