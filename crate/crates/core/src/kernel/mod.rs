//! The trusted core: sorts, terms, propositions, theorems and the primitive
//! rules, plus derived rules and rewriting built on top of them.

pub mod drule;
pub mod matching;
pub mod print;
pub mod prop;
pub mod rewrite;
pub mod rules;
pub mod signature;
pub mod term;
pub mod thm;

pub use matching::Subst;
pub use prop::{Binder, Prop, PropNode};
pub use signature::{ConstSig, Ctor, Signature};
pub use term::{name, Name, Sort, Term};
pub use thm::{replay, Kernel, Logic, Rule, Thm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("sort error: {0}")]
    Sort(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("{rule}: {msg}")]
    Rule { rule: String, msg: String },
    #[error("replay failed: {0}")]
    Replay(String),
}
