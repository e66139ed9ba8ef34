//! Rule schemas used for backward reasoning.

use std::collections::BTreeSet;
use std::fmt;

use super::matching::{match_prop, Subst};
use super::prop::Prop;
use super::term::Name;
use super::thm::{Kernel, Thm};
use super::KernelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Intro,
    Elim,
    Dest,
    Rewrite,
}

impl RuleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleKind::Intro => "intro",
            RuleKind::Elim => "elim",
            RuleKind::Dest => "dest",
            RuleKind::Rewrite => "rewrite",
        }
    }

    pub fn parse(s: &str) -> Option<RuleKind> {
        Some(match s {
            "intro" => RuleKind::Intro,
            "elim" => RuleKind::Elim,
            "dest" => RuleKind::Dest,
            "rewrite" => RuleKind::Rewrite,
            _ => return None,
        })
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `p1 ⟹ … ⟹ pn ⟹ concl` with schematic variables, backed by a theorem
/// `⊢ p1 ⟶ … ⟶ pn ⟶ concl`.
#[derive(Clone, Debug)]
pub struct RuleSpec {
    pub name: Name,
    pub kind: RuleKind,
    pub premises: Vec<Prop>,
    pub conclusion: Prop,
    pub thm: Thm,
}

fn schematics(p: &Prop) -> (BTreeSet<Name>, BTreeSet<Name>) {
    let t = p.term_schematics().into_iter().map(|(n, _)| n).collect();
    let mut ps = BTreeSet::new();
    p.prop_schematics(&mut ps);
    (t, ps)
}

impl RuleSpec {
    /// Build from a theorem of shape `p1 ⟶ … ⟶ pn ⟶ concl`, where the first
    /// `n` antecedents are the premises.
    pub fn new(name: &str, kind: RuleKind, n: usize, thm: Thm) -> Result<RuleSpec, KernelError> {
        let (hs, c) = thm.concl().strip_implies();
        if hs.len() < n {
            return Err(KernelError::Signature(format!("rule {name}: expected {n} premises")));
        }
        let premises = hs[..n].to_vec();
        let conclusion = Prop::implies_chain(&hs[n..], &c);
        let (ct, cp) = schematics(&conclusion);
        for p in &premises {
            let (pt, pp) = schematics(p);
            if let Some(x) = pt.difference(&ct).next().or_else(|| pp.difference(&cp).next()) {
                return Err(KernelError::Signature(format!(
                    "rule {name}: schematic ?{x} occurs in a premise but not in the conclusion"
                )));
            }
        }
        if !thm.hyps().is_empty() {
            return Err(KernelError::Signature(format!("rule {name}: theorem has hypotheses")));
        }
        Ok(RuleSpec { name: Name::from(name), kind, premises, conclusion, thm })
    }

    /// Backward application: the premise instances and `⊢ p1σ ⟶ … ⟶ goal`.
    pub fn apply(&self, k: Kernel, goal: &Prop) -> Option<(Vec<Prop>, Thm)> {
        let s = match_rule(goal, self)?;
        let th = k.instantiate(&self.thm, &s).ok()?;
        let prems = self.premises.iter().map(|p| s.apply_prop(p)).collect();
        Some((prems, th))
    }
}

/// First-order matching of the rule's conclusion against `goal`.
pub fn match_rule(goal: &Prop, rule: &RuleSpec) -> Option<Subst> {
    let mut s = Subst::new();
    if match_prop(&rule.conclusion, goal, &mut s) {
        Some(s)
    } else {
        None
    }
}
