//! Concrete syntax of MiniLang scripts and propositions.

pub mod elab;
pub mod expr;
pub mod script;

pub use elab::{sort_of_expr, ElabError, Elaborated, Elaborator, FreeMode};
pub use expr::{parse_expr, render_expr, BinOp, Expr, ExprError, Notation, Quant, SortExpr};
pub use script::{
    is_keyword, parse_prop_text, parse_script, parse_statements, render_script, render_statement, Consider,
    ConfigValue, Hints, ParseError, Script, Statement, Tactic, KEYWORDS,
};

use std::collections::BTreeMap;

use crate::kernel::{Name, Prop, Signature, Sort};

/// Failure of [`parse_prop`]: either the text does not parse or it does
/// not elaborate.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PropError {
    #[error("syntax error: {0}")]
    Syntax(ParseError),
    #[error("{0}")]
    Term(ElabError),
}

/// Parse and elaborate a proposition under the current notations and
/// abbreviations; `vars` are the variables in scope.
pub fn parse_prop(
    text: &str,
    sig: &Signature,
    notations: &[Notation],
    abbrevs: &BTreeMap<String, Expr>,
    vars: &[(Name, Sort)],
) -> Result<Prop, PropError> {
    let e = parse_prop_text(text, notations).map_err(PropError::Syntax)?;
    let el = Elaborator { sig, notations, abbrevs, vars, free: FreeMode::Reject };
    el.prop(&e).map_err(PropError::Term)
}
