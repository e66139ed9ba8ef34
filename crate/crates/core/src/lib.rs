//! MiniLang: a small declarative proof language over many-sorted
//! first-order logic, with an LCF-style kernel and an automatic prover.

pub mod kernel;
pub mod syntax;
pub mod theory;
