//! smlab is a laboratory for S-machines viewed as rewriting systems over
//! free groups. It simulates machine computations, keeps exact cell counts
//! for the associated trapezium diagrams, computes the dispersion invariant
//! of bipartite chord diagrams, and drives the exponential-trace
//! experiments behind the n^2 log n isoperimetric growth of the composed
//! counter machine.

pub mod adding;
pub mod bcd;
pub mod cli;
pub mod compose;
pub mod diagrams;
pub mod experiment;
pub mod machine;
pub mod machine_fmt;
pub mod presentation;
pub mod words;

pub use machine::{Computation, Rule, RuleId, RulePart, SMachine, SignedRule};
pub use words::{Letter, LetterClass, LengthProfile, Sign, Symbol, Word};
