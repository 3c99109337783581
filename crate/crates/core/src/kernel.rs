//! The trusted checker for sequent derivations.
//!
//! Sequents are multisets, stored as sorted vectors so multiset equality is
//! plain equality. A derivation is a tree of rule applications; `check`
//! verifies every leaf against the axiom catalogue and every inner node
//! against its rule schema, including side conditions. Nothing is inferred:
//! cut formulas and principal formulas are explicit parameters, and each
//! rule's conclusion is recomputed from the premises and compared.

use crate::codec::{encode_formula, encode_term};
use crate::eval::eval_term;
use crate::ordinals::Ordinal;
use crate::syntax::{FnSym, Formula, Lang, LangSpec, PredSym, Term};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sequent {
    ante: Vec<Formula>,
    succ: Vec<Formula>,
    pub lang: Lang,
}

impl Sequent {
    pub fn new(mut ante: Vec<Formula>, mut succ: Vec<Formula>, lang: Lang) -> Self {
        ante.sort();
        succ.sort();
        Sequent { ante, succ, lang }
    }

    pub fn ante(&self) -> &[Formula] {
        &self.ante
    }

    pub fn succ(&self) -> &[Formula] {
        &self.succ
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for f in self.ante.iter().chain(self.succ.iter()) {
            out.extend(f.free_vars());
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.ante.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        if !self.ante.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "=>")?;
        for (i, x) in self.succ.iter().enumerate() {
            write!(f, "{}{x}", if i > 0 { ", " } else { " " })?;
        }
        Ok(())
    }
}

/// Removes one occurrence of `f` from a sorted multiset.
fn remove_one(v: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let idx = v.iter().position(|x| x == f)?;
    let mut out = v.to_vec();
    out.remove(idx);
    Some(out)
}

fn insert_sorted(v: &[Formula], f: Formula) -> Vec<Formula> {
    let mut out = v.to_vec();
    out.push(f);
    out.sort();
    out
}

fn all_negated(v: &[Formula]) -> Option<Vec<Formula>> {
    v.iter()
        .map(|f| match f {
            Formula::Neg(a) => Some((**a).clone()),
            _ => None,
        })
        .collect()
}

fn negate_all(v: &[Formula]) -> Vec<Formula> {
    let mut out: Vec<Formula> = v.iter().cloned().map(Formula::neg).collect();
    out.sort();
    out
}

/// Whitelisted facts about the ordinal notation functions, usable as leaves
/// in systems containing arithmetic. Each schema is semantically true under
/// the absorbing-garbage semantics of the notation functions; the test suite
/// audits them by evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrdLemmaId {
    /// `s < 0^ =>`
    NoBelowZero,
    /// `s < 1^ => s = 0^`
    BelowOneIsZero,
    /// `s < oplus(t, ophi(0^, u)) => u = 0^ | 0^ < u`
    ExpPosSplit,
    /// `u = 0^, s < oplus(t, ophi(0^, u)) => s < t | s = t`
    SplitAtZeroExp,
    /// `0^ < u, s < oplus(t, ophi(0^, u)) => ex n ex z (z < u & s < oplus(t, otimes(ophi(0^, z), n)))`
    CnfBound,
    /// `s < oplus(t, otimes(u, 0)) => s < t`
    PrecMulZero,
    /// `s < oplus(t, otimes(u, S(v))) => s < oplus(oplus(t, otimes(u, v)), u)`
    PrecMulSucc,
    /// `=> D, !D` for an atomic decidable predicate D
    ClassicalAtom,
}

impl OrdLemmaId {
    pub fn name(self) -> &'static str {
        match self {
            OrdLemmaId::NoBelowZero => "no-below-zero",
            OrdLemmaId::BelowOneIsZero => "below-one-is-zero",
            OrdLemmaId::ExpPosSplit => "exp-pos-split",
            OrdLemmaId::SplitAtZeroExp => "split-at-zero-exp",
            OrdLemmaId::CnfBound => "cnf-bound",
            OrdLemmaId::PrecMulZero => "prec-mul-zero",
            OrdLemmaId::PrecMulSucc => "prec-mul-succ",
            OrdLemmaId::ClassicalAtom => "classical-atom",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            OrdLemmaId::NoBelowZero,
            OrdLemmaId::BelowOneIsZero,
            OrdLemmaId::ExpPosSplit,
            OrdLemmaId::SplitAtZeroExp,
            OrdLemmaId::CnfBound,
            OrdLemmaId::PrecMulZero,
            OrdLemmaId::PrecMulSucc,
            OrdLemmaId::ClassicalAtom,
        ]
        .into_iter()
        .find(|id| id.name() == s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AxiomId {
    /// `A => A`
    Id,
    /// `bot =>`
    LBot,
    /// `=> t = t`
    Ref,
    /// `s = t, A(s) => A(t)`
    Rep,
    Q1,
    Q2,
    Q4,
    Q5,
    Q6,
    Q7,
    /// `=> s = t` for closed terms of equal value
    Comp,
    /// induction as a sequent-stated conditional
    IndArrow,
    /// transfinite induction as a sequent
    TiSeq,
    Kfl1,
    Kfl2,
    Kfl3,
    Kfl4,
    Kfl5,
    Kfl6,
    /// `=> Tr(sub(q(P(v0)), q(v0), num(x))) <-> P(x)`
    KflP,
    /// `=> all x (P(x) | !P(x))`
    PClassical,
    OrdLemma(OrdLemmaId),
    /// defining equation of `num` on codes
    NumDef,
    /// `=> val(num(t)) = t`
    ValNum,
    /// `=> otimes(s, 0) = 0^`
    OTimesZero,
    /// `=> otimes(s, S(t)) = oplus(otimes(s, t), s)`
    OTimesSucc,
    /// doubled defining equation of the pairing function
    PairDef,
}

impl AxiomId {
    pub fn name(self) -> String {
        match self {
            AxiomId::Id => "id".into(),
            AxiomId::LBot => "l-bot".into(),
            AxiomId::Ref => "ref".into(),
            AxiomId::Rep => "rep".into(),
            AxiomId::Q1 => "q1".into(),
            AxiomId::Q2 => "q2".into(),
            AxiomId::Q4 => "q4".into(),
            AxiomId::Q5 => "q5".into(),
            AxiomId::Q6 => "q6".into(),
            AxiomId::Q7 => "q7".into(),
            AxiomId::Comp => "comp".into(),
            AxiomId::IndArrow => "ind-arrow".into(),
            AxiomId::TiSeq => "ti-seq".into(),
            AxiomId::Kfl1 => "kfl1".into(),
            AxiomId::Kfl2 => "kfl2".into(),
            AxiomId::Kfl3 => "kfl3".into(),
            AxiomId::Kfl4 => "kfl4".into(),
            AxiomId::Kfl5 => "kfl5".into(),
            AxiomId::Kfl6 => "kfl6".into(),
            AxiomId::KflP => "kfl-p".into(),
            AxiomId::PClassical => "p-classical".into(),
            AxiomId::OrdLemma(id) => format!("ord-lemma:{}", id.name()),
            AxiomId::NumDef => "num-def".into(),
            AxiomId::ValNum => "val-num".into(),
            AxiomId::OTimesZero => "otimes-zero".into(),
            AxiomId::OTimesSucc => "otimes-succ".into(),
            AxiomId::PairDef => "pair-def".into(),
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        if let Some(rest) = s.strip_prefix("ord-lemma:") {
            return OrdLemmaId::from_name(rest).map(AxiomId::OrdLemma);
        }
        match s {
            "id" => Some(AxiomId::Id),
            "l-bot" => Some(AxiomId::LBot),
            "ref" => Some(AxiomId::Ref),
            "rep" => Some(AxiomId::Rep),
            "q1" => Some(AxiomId::Q1),
            "q2" => Some(AxiomId::Q2),
            "q4" => Some(AxiomId::Q4),
            "q5" => Some(AxiomId::Q5),
            "q6" => Some(AxiomId::Q6),
            "q7" => Some(AxiomId::Q7),
            "comp" => Some(AxiomId::Comp),
            "ind-arrow" => Some(AxiomId::IndArrow),
            "ti-seq" => Some(AxiomId::TiSeq),
            "kfl1" => Some(AxiomId::Kfl1),
            "kfl2" => Some(AxiomId::Kfl2),
            "kfl3" => Some(AxiomId::Kfl3),
            "kfl4" => Some(AxiomId::Kfl4),
            "kfl5" => Some(AxiomId::Kfl5),
            "kfl6" => Some(AxiomId::Kfl6),
            "kfl-p" => Some(AxiomId::KflP),
            "p-classical" => Some(AxiomId::PClassical),
            "num-def" => Some(AxiomId::NumDef),
            "val-num" => Some(AxiomId::ValNum),
            "otimes-zero" => Some(AxiomId::OTimesZero),
            "otimes-succ" => Some(AxiomId::OTimesSucc),
            "pair-def" => Some(AxiomId::PairDef),
            _ => None,
        }
    }
}

/// Systems ordered by inclusion; each admits the axioms of the ones below it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum System {
    G1h,
    G1hEq,
    Hya,
    Kfl,
    KflStar,
}

impl System {
    pub fn from_name(s: &str) -> Option<System> {
        match s {
            "g1h" => Some(System::G1h),
            "g1h-eq" => Some(System::G1hEq),
            "hya" => Some(System::Hya),
            "kfl" => Some(System::Kfl),
            "kfl-star" => Some(System::KflStar),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            System::G1h => "g1h",
            System::G1hEq => "g1h-eq",
            System::Hya => "hya",
            System::Kfl => "kfl",
            System::KflStar => "kfl-star",
        }
    }

    fn admits(self, axiom: AxiomId) -> bool {
        let needed = match axiom {
            AxiomId::Id | AxiomId::LBot => System::G1h,
            AxiomId::Ref | AxiomId::Rep => System::G1hEq,
            AxiomId::Q1
            | AxiomId::Q2
            | AxiomId::Q4
            | AxiomId::Q5
            | AxiomId::Q6
            | AxiomId::Q7
            | AxiomId::Comp
            | AxiomId::IndArrow
            | AxiomId::TiSeq
            | AxiomId::OrdLemma(_)
            | AxiomId::NumDef
            | AxiomId::ValNum
            | AxiomId::OTimesZero
            | AxiomId::OTimesSucc
            | AxiomId::PairDef => System::Hya,
            AxiomId::Kfl1
            | AxiomId::Kfl2
            | AxiomId::Kfl3
            | AxiomId::Kfl4
            | AxiomId::Kfl5
            | AxiomId::Kfl6 => System::Kfl,
            AxiomId::KflP | AxiomId::PClassical => System::KflStar,
        };
        self >= needed
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rule {
    Axiom(AxiomId),
    Cut {
        cut: Formula,
    },
    LW {
        formula: Formula,
    },
    RW {
        formula: Formula,
    },
    LC {
        formula: Formula,
    },
    RC {
        formula: Formula,
    },
    LOr {
        principal: Formula,
    },
    ROr {
        principal: Formula,
    },
    LImp {
        principal: Formula,
    },
    RImp {
        principal: Formula,
        delta: Vec<Formula>,
    },
    ConCp,
    ClCp,
    LAll {
        principal: Formula,
        witness: Term,
    },
    RAll {
        principal: Formula,
        eigen: u32,
    },
    /// induction rule: from `G, A(x) => A(S(x)), D` infer `G, A(0) => A(t), D`
    IndR {
        body: Formula,
        var: u32,
        target: Term,
    },
    /// transfinite induction rule up to `alpha`
    TiR {
        body: Formula,
        var: u32,
        alpha: Ordinal,
        eta: u32,
        zeta: u32,
        xi: u32,
        delta: Vec<Formula>,
    },
    /// schematic substitution rule
    Subst {
        body: Formula,
        var: u32,
    },
}

impl Rule {
    pub fn name(&self) -> String {
        match self {
            Rule::Axiom(a) => format!("axiom:{}", a.name()),
            Rule::Cut { .. } => "cut".into(),
            Rule::LW { .. } => "lw".into(),
            Rule::RW { .. } => "rw".into(),
            Rule::LC { .. } => "lc".into(),
            Rule::RC { .. } => "rc".into(),
            Rule::LOr { .. } => "l-or".into(),
            Rule::ROr { .. } => "r-or".into(),
            Rule::LImp { .. } => "l-imp".into(),
            Rule::RImp { .. } => "r-imp".into(),
            Rule::ConCp => "con-cp".into(),
            Rule::ClCp => "cl-cp".into(),
            Rule::LAll { .. } => "l-all".into(),
            Rule::RAll { .. } => "r-all".into(),
            Rule::IndR { .. } => "ind-r".into(),
            Rule::TiR { .. } => "ti-r".into(),
            Rule::Subst { .. } => "subst".into(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom(_) => 0,
            Rule::Cut { .. } | Rule::LOr { .. } | Rule::LImp { .. } | Rule::Subst { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule {rule} expects {expected} premises, got {got}")]
    Arity {
        rule: String,
        expected: usize,
        got: usize,
    },
    #[error("rule {rule}: {msg}")]
    Shape { rule: String, msg: String },
    #[error("eigenvariable v{var} occurs free in the context")]
    Eigenvariable { var: u32 },
    #[error("premises use different language tags")]
    LangMismatch,
    #[error("not an instance of axiom {0}")]
    NotAxiom(String),
}

/// Forward application: computes the unique conclusion of a rule from its
/// premises, verifying every side condition.
pub fn apply_rule(rule: &Rule, premises: &[&Sequent]) -> Result<Sequent, RuleError> {
    let shape = |msg: &str| RuleError::Shape {
        rule: rule.name(),
        msg: msg.to_string(),
    };
    if premises.len() != rule.arity() {
        return Err(RuleError::Arity {
            rule: rule.name(),
            expected: rule.arity(),
            got: premises.len(),
        });
    }
    if premises.len() == 2 && premises[0].lang != premises[1].lang {
        return Err(RuleError::LangMismatch);
    }
    let lang = premises.first().map(|s| s.lang).unwrap_or(Lang::LTArrowP);
    match rule {
        Rule::Axiom(_) => Err(shape("axioms have no premises to apply")),
        Rule::Cut { cut } => {
            let p1 = premises[0];
            let p2 = premises[1];
            let delta = remove_one(&p1.succ, cut).ok_or_else(|| shape("cut formula missing in first premise succedent"))?;
            let gamma = remove_one(&p2.ante, cut).ok_or_else(|| shape("cut formula missing in second premise antecedent"))?;
            if gamma != p1.ante {
                return Err(shape("antecedents differ"));
            }
            if delta != p2.succ {
                return Err(shape("succedents differ"));
            }
            Ok(Sequent::new(gamma, delta, lang))
        }
        Rule::LW { formula } => {
            let p = premises[0];
            Ok(Sequent::new(
                insert_sorted(&p.ante, formula.clone()),
                p.succ.clone(),
                lang,
            ))
        }
        Rule::RW { formula } => {
            let p = premises[0];
            Ok(Sequent::new(
                p.ante.clone(),
                insert_sorted(&p.succ, formula.clone()),
                lang,
            ))
        }
        Rule::LC { formula } => {
            let p = premises[0];
            let once = remove_one(&p.ante, formula).ok_or_else(|| shape("contracted formula missing"))?;
            remove_one(&once, formula).ok_or_else(|| shape("contraction needs two occurrences"))?;
            Ok(Sequent::new(once, p.succ.clone(), lang))
        }
        Rule::RC { formula } => {
            let p = premises[0];
            let once = remove_one(&p.succ, formula).ok_or_else(|| shape("contracted formula missing"))?;
            remove_one(&once, formula).ok_or_else(|| shape("contraction needs two occurrences"))?;
            Ok(Sequent::new(p.ante.clone(), once, lang))
        }
        Rule::LOr { principal } => {
            let (a, b) = match principal {
                Formula::Or(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err(shape("principal formula is not a disjunction")),
            };
            let p1 = premises[0];
            let p2 = premises[1];
            let g1 = remove_one(&p1.ante, &a).ok_or_else(|| shape("left disjunct missing in first premise"))?;
            let g2 = remove_one(&p2.ante, &b).ok_or_else(|| shape("right disjunct missing in second premise"))?;
            if g1 != g2 || p1.succ != p2.succ {
                return Err(shape("contexts differ"));
            }
            Ok(Sequent::new(
                insert_sorted(&g1, principal.clone()),
                p1.succ.clone(),
                lang,
            ))
        }
        Rule::ROr { principal } => {
            let (a, b) = match principal {
                Formula::Or(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err(shape("principal formula is not a disjunction")),
            };
            let p = premises[0];
            let s1 = remove_one(&p.succ, &a).ok_or_else(|| shape("left disjunct missing"))?;
            let s2 = remove_one(&s1, &b).ok_or_else(|| shape("right disjunct missing"))?;
            Ok(Sequent::new(
                p.ante.clone(),
                insert_sorted(&s2, principal.clone()),
                lang,
            ))
        }
        Rule::LImp { principal } => {
            let (a, b) = match principal {
                Formula::Cond(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err(shape("principal formula is not a conditional")),
            };
            let p1 = premises[0];
            let p2 = premises[1];
            let d1 = remove_one(&p1.succ, &a).ok_or_else(|| shape("antecedent part missing in first premise succedent"))?;
            let g2 = remove_one(&p2.ante, &b).ok_or_else(|| shape("consequent part missing in second premise antecedent"))?;
            if p1.ante != g2 || d1 != p2.succ {
                return Err(shape("contexts differ"));
            }
            Ok(Sequent::new(
                insert_sorted(&p1.ante, principal.clone()),
                d1,
                lang,
            ))
        }
        Rule::RImp { principal, delta } => {
            let (a, b) = match principal {
                Formula::Cond(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err(shape("principal formula is not a conditional")),
            };
            let p = premises[0];
            if p.succ.len() != 1 || p.succ[0] != b {
                return Err(shape("premise must have exactly the consequent as succedent"));
            }
            let gamma = remove_one(&p.ante, &a).ok_or_else(|| shape("antecedent part missing in premise"))?;
            let mut succ = delta.clone();
            succ.push(principal.clone());
            Ok(Sequent::new(gamma, succ, lang))
        }
        Rule::ConCp => {
            let p = premises[0];
            let delta = all_negated(&p.succ).ok_or_else(|| shape("premise succedent must be fully negated"))?;
            Ok(Sequent::new(delta, negate_all(&p.ante), lang))
        }
        Rule::ClCp => {
            let p = premises[0];
            let gamma = all_negated(&p.ante).ok_or_else(|| shape("premise antecedent must be fully negated"))?;
            Ok(Sequent::new(negate_all(&p.succ), gamma, lang))
        }
        Rule::LAll { principal, witness } => {
            let (v, body) = match principal {
                Formula::All(v, a) => (*v, (**a).clone()),
                _ => return Err(shape("principal formula is not universal")),
            };
            let instance = body.substitute(v, witness);
            let p = premises[0];
            let gamma = remove_one(&p.ante, &instance).ok_or_else(|| shape("instance missing in premise antecedent"))?;
            Ok(Sequent::new(
                insert_sorted(&gamma, principal.clone()),
                p.succ.clone(),
                lang,
            ))
        }
        Rule::RAll { principal, eigen } => {
            let (v, body) = match principal {
                Formula::All(v, a) => (*v, (**a).clone()),
                _ => return Err(shape("principal formula is not universal")),
            };
            let instance = body.substitute(v, &Term::Var(*eigen));
            let p = premises[0];
            let delta = remove_one(&p.succ, &instance).ok_or_else(|| shape("instance missing in premise succedent"))?;
            let mut context_vars: BTreeSet<u32> = BTreeSet::new();
            for f in p.ante.iter().chain(delta.iter()) {
                context_vars.extend(f.free_vars());
            }
            context_vars.extend(principal.free_vars());
            if context_vars.contains(eigen) {
                return Err(RuleError::Eigenvariable { var: *eigen });
            }
            Ok(Sequent::new(
                p.ante.clone(),
                insert_sorted(&delta, principal.clone()),
                lang,
            ))
        }
        Rule::IndR { body, var, target } => {
            let p = premises[0];
            let step_from = body.clone();
            let step_to = body.substitute(*var, &Term::Succ(Box::new(Term::Var(*var))));
            let gamma = remove_one(&p.ante, &step_from).ok_or_else(|| shape("induction hypothesis missing"))?;
            let delta = remove_one(&p.succ, &step_to).ok_or_else(|| shape("induction step missing"))?;
            let mut context_vars: BTreeSet<u32> = BTreeSet::new();
            for f in gamma.iter().chain(delta.iter()) {
                context_vars.extend(f.free_vars());
            }
            if context_vars.contains(var) {
                return Err(RuleError::Eigenvariable { var: *var });
            }
            Ok(Sequent::new(
                insert_sorted(&gamma, body.substitute(*var, &Term::Zero)),
                insert_sorted(&delta, body.substitute(*var, target)),
                lang,
            ))
        }
        Rule::TiR {
            body,
            var,
            alpha,
            eta,
            zeta,
            xi,
            delta,
        } => {
            let p = premises[0];
            // premise: G, all z (z < eta -> A(z)) => A(eta)
            let hyp = Formula::all(
                *zeta,
                Formula::cond(
                    Formula::prec(Term::Var(*zeta), Term::Var(*eta)),
                    body.substitute(*var, &Term::Var(*zeta)),
                ),
            );
            let goal = body.substitute(*var, &Term::Var(*eta));
            if p.succ.len() != 1 || p.succ[0] != goal {
                return Err(shape("premise succedent must be exactly the induction goal"));
            }
            let gamma = remove_one(&p.ante, &hyp).ok_or_else(|| shape("progressiveness hypothesis missing"))?;
            let conclusion_formula = Formula::all(
                *xi,
                Formula::cond(
                    Formula::prec(Term::Var(*xi), Term::Num(alpha.code())),
                    body.substitute(*var, &Term::Var(*xi)),
                ),
            );
            let mut context_vars: BTreeSet<u32> = BTreeSet::new();
            for f in gamma.iter().chain(delta.iter()) {
                context_vars.extend(f.free_vars());
            }
            context_vars.extend(conclusion_formula.free_vars());
            if context_vars.contains(eta) {
                return Err(RuleError::Eigenvariable { var: *eta });
            }
            let mut succ = delta.clone();
            succ.push(conclusion_formula);
            Ok(Sequent::new(gamma, succ, lang))
        }
        Rule::Subst { body, var } => {
            let p1 = premises[0];
            let p2 = premises[1];
            // first premise: => all x (B(x) | !B(x))
            let expected = Formula::all(
                *var,
                Formula::or(
                    body.clone(),
                    Formula::neg(body.clone()),
                ),
            );
            if !p1.ante.is_empty() || p1.succ.len() != 1 || p1.succ[0] != expected {
                return Err(shape("first premise must state classicality of the substituted formula"));
            }
            let schematic = LangSpec {
                arrow: true,
                tr: false,
                fals: false,
                p: true,
            };
            for f in p2.ante.iter().chain(p2.succ.iter()) {
                if !f.in_lang_spec(&schematic) {
                    return Err(shape("second premise must lie in the schematic arithmetical language"));
                }
            }
            if !body.in_lang(Lang::LTArrowP) {
                return Err(shape("substituted formula outside the schematic truth language"));
            }
            let mut extra = body.free_vars();
            extra.remove(var);
            if !extra.is_empty() {
                return Err(shape("substituted formula may only have the substitution variable free"));
            }
            let sub = |f: &Formula| subst_p(f, body, *var);
            Ok(Sequent::new(
                p2.ante.iter().map(&sub).collect(),
                p2.succ.iter().map(&sub).collect(),
                lang,
            ))
        }
    }
}

/// Replaces every atom `P(t)` by `B(t)`.
pub fn subst_p(f: &Formula, body: &Formula, var: u32) -> Formula {
    match f {
        Formula::P(t) => body.substitute(var, t),
        Formula::Bot | Formula::Eq(..) | Formula::Tr(_) | Formula::Fals(_) | Formula::Prim(..) => {
            f.clone()
        }
        Formula::Neg(a) => Formula::neg(subst_p(a, body, var)),
        Formula::Or(a, b) => Formula::or(subst_p(a, body, var), subst_p(b, body, var)),
        Formula::Cond(a, b) => Formula::cond(subst_p(a, body, var), subst_p(b, body, var)),
        Formula::All(v, a) => Formula::all(*v, subst_p(a, body, var)),
    }
}

// ------------------------------------------------------------------
// Axiom recognizers

/// Decides whether `s` is an instance of the named axiom schema.
pub fn is_axiom(s: &Sequent, which: AxiomId) -> bool {
    match which {
        AxiomId::Id => s.ante.len() == 1 && s.succ.len() == 1 && s.ante[0] == s.succ[0],
        AxiomId::LBot => s.ante == [Formula::Bot] && s.succ.is_empty(),
        AxiomId::Ref => {
            s.ante.is_empty()
                && matches!(s.succ.as_slice(), [Formula::Eq(a, b)] if a == b)
        }
        AxiomId::Rep => {
            if s.ante.len() != 2 || s.succ.len() != 1 {
                return false;
            }
            // either antecedent member may be the equation
            for i in 0..2 {
                if let Formula::Eq(a, b) = &s.ante[i] {
                    let phi = &s.ante[1 - i];
                    if replaces(a, b, phi, &s.succ[0]) {
                        return true;
                    }
                }
            }
            false
        }
        AxiomId::Q1 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Eq(l, r)], [Formula::Eq(a, b)]) => {
                l == &Term::Succ(Box::new(a.clone())) && r == &Term::Succ(Box::new(b.clone()))
            }
            _ => false,
        },
        AxiomId::Q2 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Eq(l, r)], []) => {
                matches!(l, Term::Succ(_)) && r == &Term::Zero
            }
            _ => false,
        },
        AxiomId::Q4 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => {
                l == &Term::Plus(Box::new(r.clone()), Box::new(Term::Zero))
            }
            _ => false,
        },
        AxiomId::Q5 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match (l, r) {
                (Term::Plus(a, sb), Term::Succ(inner)) => match (&**sb, &**inner) {
                    (Term::Succ(b), Term::Plus(a2, b2)) => a == a2 && b == b2,
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
        AxiomId::Q6 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => {
                matches!(l, Term::Times(_, z) if **z == Term::Zero) && r == &Term::Zero
            }
            _ => false,
        },
        AxiomId::Q7 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match (l, r) {
                (Term::Times(a, sb), Term::Plus(m, a3)) => match (&**sb, &**m) {
                    (Term::Succ(b), Term::Times(a2, b2)) => {
                        a == a2 && b == b2 && a3 == a
                    }
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
        AxiomId::Comp => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(a, b)]) => match (eval_term(a), eval_term(b)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            },
            _ => false,
        },
        AxiomId::IndArrow => {
            if !s.ante.is_empty() || s.succ.len() != 1 {
                return false;
            }
            let (lhs, rhs) = match &s.succ[0] {
                Formula::Cond(l, r) => (&**l, &**r),
                _ => return false,
            };
            let (v, body) = match rhs {
                Formula::All(v, b) => (*v, (**b).clone()),
                _ => return false,
            };
            let expected = Formula::and(
                body.substitute(v, &Term::Zero),
                Formula::all(
                    v,
                    Formula::cond(
                        body.clone(),
                        body.substitute(v, &Term::Succ(Box::new(Term::Var(v)))),
                    ),
                ),
            );
            *lhs == expected
        }
        AxiomId::TiSeq => {
            if s.ante.len() != 1 || s.succ.len() != 1 {
                return false;
            }
            let (xi, bound, body_xi) = match &s.succ[0] {
                Formula::All(xi, inner) => match &**inner {
                    Formula::Cond(guard, body) => match &**guard {
                        Formula::Prim(PredSym::Prec, args)
                            if args[0] == Term::Var(*xi) =>
                        {
                            match &args[1] {
                                Term::Num(c) => match Ordinal::decode(c) {
                                    Some(o) => (*xi, o, (**body).clone()),
                                    None => return false,
                                },
                                _ => return false,
                            }
                        }
                        _ => return false,
                    },
                    _ => return false,
                },
                _ => return false,
            };
            let _ = bound;
            // antecedent must be progressiveness of the same body
            match &s.ante[0] {
                Formula::All(eta, inner) => match &**inner {
                    Formula::Cond(hyp, goal) => {
                        if **goal != body_xi.substitute(xi, &Term::Var(*eta)) {
                            return false;
                        }
                        match &**hyp {
                            Formula::All(zeta, hi) => match &**hi {
                                Formula::Cond(g2, b2) => {
                                    **g2 == Formula::prec(Term::Var(*zeta), Term::Var(*eta))
                                        && **b2 == body_xi.substitute(xi, &Term::Var(*zeta))
                                }
                                _ => false,
                            },
                            _ => false,
                        }
                    }
                    _ => false,
                },
                _ => false,
            }
        }
        AxiomId::Kfl1 => {
            if s.ante.len() != 1 || s.succ.len() != 1 {
                return false;
            }
            let (x, y) = match extract_iff(&s.succ[0]) {
                Some((Formula::Tr(t), _)) => match t {
                    Term::Fn(FnSym::EqD, args) => (args[0].clone(), args[1].clone()),
                    _ => return false,
                },
                _ => return false,
            };
            let expect_succ = Formula::iff(
                Formula::Tr(Term::fun(FnSym::EqD, vec![x.clone(), y.clone()])),
                Formula::Eq(
                    Term::fun(FnSym::Val, vec![x.clone()]),
                    Term::fun(FnSym::Val, vec![y.clone()]),
                ),
            );
            let expect_ante = Formula::and(
                Formula::Prim(PredSym::CTerm, vec![x]),
                Formula::Prim(PredSym::CTerm, vec![y]),
            );
            s.succ[0] == expect_succ && s.ante[0] == expect_ante
        }
        AxiomId::Kfl2 => {
            if !s.ante.is_empty() || s.succ.len() != 1 {
                return false;
            }
            let x = match extract_iff(&s.succ[0]) {
                Some((_, Formula::Tr(x))) => x.clone(),
                _ => return false,
            };
            s.succ[0] == kfl2_instance(&x)
        }
        AxiomId::Kfl3 => {
            if s.ante.len() != 1 || s.succ.len() != 1 {
                return false;
            }
            let x = match extract_iff(&s.succ[0]) {
                Some((Formula::Tr(t), _)) => match t {
                    Term::Fn(FnSym::NegD, args) => args[0].clone(),
                    _ => return false,
                },
                _ => return false,
            };
            let expect = Formula::iff(
                Formula::Tr(Term::fun(FnSym::NegD, vec![x.clone()])),
                Formula::neg(Formula::Tr(x.clone())),
            );
            s.succ[0] == expect && s.ante[0] == Formula::Prim(PredSym::SentLT, vec![x])
        }
        AxiomId::Kfl4 => {
            if s.ante.len() != 1 || s.succ.len() != 1 {
                return false;
            }
            let (x, y) = match extract_iff(&s.succ[0]) {
                Some((Formula::Tr(t), _)) => match t {
                    Term::Fn(FnSym::VorD, args) => (args[0].clone(), args[1].clone()),
                    _ => return false,
                },
                _ => return false,
            };
            let expect = Formula::iff(
                Formula::Tr(Term::fun(FnSym::VorD, vec![x.clone(), y.clone()])),
                Formula::or(Formula::Tr(x.clone()), Formula::Tr(y.clone())),
            );
            let guard = Formula::and(
                Formula::Prim(PredSym::SentLT, vec![x]),
                Formula::Prim(PredSym::SentLT, vec![y]),
            );
            s.succ[0] == expect && s.ante[0] == guard
        }
        AxiomId::Kfl5 => {
            if s.ante.len() != 1 || s.succ.len() != 1 {
                return false;
            }
            let (v, x, y) = match extract_iff(&s.succ[0]) {
                Some((Formula::Tr(t), rhs)) => {
                    let (v, x) = match t {
                        Term::Fn(FnSym::AllD, args) => (args[0].clone(), args[1].clone()),
                        _ => return false,
                    };
                    let y = match rhs {
                        Formula::All(y, _) => *y,
                        _ => return false,
                    };
                    (v, x, y)
                }
                _ => return false,
            };
            if x.vars().contains(&y) || v.vars().contains(&y) {
                return false;
            }
            let expect = Formula::iff(
                Formula::Tr(Term::fun(FnSym::AllD, vec![v.clone(), x.clone()])),
                Formula::all(
                    y,
                    Formula::cond(
                        Formula::Prim(PredSym::CTerm, vec![Term::Var(y)]),
                        Formula::Tr(Term::fun(
                            FnSym::Sub,
                            vec![x.clone(), v.clone(), Term::Var(y)],
                        )),
                    ),
                ),
            );
            let guard = Formula::and(
                Formula::Prim(
                    PredSym::SentLT,
                    vec![Term::fun(FnSym::AllD, vec![v.clone(), x])],
                ),
                Formula::Prim(PredSym::IsVar, vec![v]),
            );
            s.succ[0] == expect && s.ante[0] == guard
        }
        AxiomId::Kfl6 => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Tr(x)], [Formula::Prim(PredSym::SentLT, args)]) => args[0] == *x,
            _ => false,
        },
        AxiomId::KflP => {
            if !s.ante.is_empty() || s.succ.len() != 1 {
                return false;
            }
            let x = match extract_iff(&s.succ[0]) {
                Some((_, Formula::P(x))) => x.clone(),
                _ => return false,
            };
            s.succ[0] == kflp_instance(&x)
        }
        AxiomId::PClassical => {
            if !s.ante.is_empty() || s.succ.len() != 1 {
                return false;
            }
            match &s.succ[0] {
                Formula::All(v, inner) => {
                    **inner
                        == Formula::or(
                            Formula::P(Term::Var(*v)),
                            Formula::neg(Formula::P(Term::Var(*v))),
                        )
                }
                _ => false,
            }
        }
        AxiomId::OrdLemma(id) => is_ord_lemma(s, id),
        AxiomId::NumDef => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match l {
                Term::Fn(FnSym::NumF, args) => *r == num_def_rhs(&args[0]),
                _ => false,
            },
            _ => false,
        },
        AxiomId::ValNum => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match l {
                Term::Fn(FnSym::Val, a) => match &a[0] {
                    Term::Fn(FnSym::NumF, b) => b[0] == *r,
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
        AxiomId::OTimesZero => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match l {
                Term::Fn(FnSym::OTimes, args) => {
                    args[1] == Term::Zero && *r == Term::Num(Ordinal::zero().code())
                }
                _ => false,
            },
            _ => false,
        },
        AxiomId::OTimesSucc => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match (l, r) {
                (Term::Fn(FnSym::OTimes, la), Term::Fn(FnSym::OPlus, ra)) => {
                    match (&la[1], &ra[0]) {
                        (Term::Succ(t), Term::Fn(FnSym::OTimes, ia)) => {
                            ia[0] == la[0] && ia[1] == **t && ra[1] == la[0]
                        }
                        _ => false,
                    }
                }
                _ => false,
            },
            _ => false,
        },
        AxiomId::PairDef => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([], [Formula::Eq(l, r)]) => match l {
                Term::Plus(p1, p2) => match &**p1 {
                    Term::Fn(FnSym::Pair, args) if p1 == p2 => {
                        *r == pair_def_rhs(&args[0], &args[1])
                    }
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
    }
}

/// `Tr(sub(q(Tr(v0)), q(v0), num(x))) <-> Tr(x)`.
pub fn kfl2_instance(x: &Term) -> Formula {
    let tr_v0 = encode_formula(&Formula::Tr(Term::Var(0)));
    let v0 = encode_term(&Term::Var(0));
    Formula::iff(
        Formula::Tr(Term::fun(
            FnSym::Sub,
            vec![
                Term::Num(tr_v0),
                Term::Num(v0),
                Term::fun(FnSym::NumF, vec![x.clone()]),
            ],
        )),
        Formula::Tr(x.clone()),
    )
}

/// `Tr(sub(q(P(v0)), q(v0), num(x))) <-> P(x)`.
pub fn kflp_instance(x: &Term) -> Formula {
    let p_v0 = encode_formula(&Formula::P(Term::Var(0)));
    let v0 = encode_term(&Term::Var(0));
    Formula::iff(
        Formula::Tr(Term::fun(
            FnSym::Sub,
            vec![
                Term::Num(p_v0),
                Term::Num(v0),
                Term::fun(FnSym::NumF, vec![x.clone()]),
            ],
        )),
        Formula::P(x.clone()),
    )
}

fn extract_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    // A <-> B is !( !(A->B) | !(B->A) )
    if let Formula::Neg(or) = f {
        if let Formula::Or(l, r) = &**or {
            if let (Formula::Neg(ab), Formula::Neg(ba)) = (&**l, &**r) {
                if let (Formula::Cond(a, b), Formula::Cond(b2, a2)) = (&**ab, &**ba) {
                    if a == a2 && b == b2 {
                        return Some((a, b));
                    }
                }
            }
        }
    }
    None
}

/// Does `to` arise from `from` by replacing some occurrences of `s` by `t`?
fn replaces(s: &Term, t: &Term, from: &Formula, to: &Formula) -> bool {
    fn terms(s: &Term, t: &Term, u: &Term, v: &Term) -> bool {
        if u == v || (u == s && v == t) {
            return true;
        }
        match (u, v) {
            (Term::Succ(a), Term::Succ(b)) => terms(s, t, a, b),
            (Term::Plus(a1, a2), Term::Plus(b1, b2))
            | (Term::Times(a1, a2), Term::Times(b1, b2)) => {
                terms(s, t, a1, b1) && terms(s, t, a2, b2)
            }
            (Term::Fn(f, xs), Term::Fn(g, ys)) => {
                f == g && xs.iter().zip(ys).all(|(x, y)| terms(s, t, x, y))
            }
            _ => false,
        }
    }
    fn go(s: &Term, t: &Term, a: &Formula, b: &Formula) -> bool {
        match (a, b) {
            (Formula::Bot, Formula::Bot) => true,
            (Formula::Eq(x1, x2), Formula::Eq(y1, y2)) => {
                terms(s, t, x1, y1) && terms(s, t, x2, y2)
            }
            (Formula::Tr(x), Formula::Tr(y))
            | (Formula::Fals(x), Formula::Fals(y))
            | (Formula::P(x), Formula::P(y)) => terms(s, t, x, y),
            (Formula::Prim(p, xs), Formula::Prim(q, ys)) => {
                p == q && xs.iter().zip(ys).all(|(x, y)| terms(s, t, x, y))
            }
            (Formula::Neg(x), Formula::Neg(y)) => go(s, t, x, y),
            (Formula::Or(x1, x2), Formula::Or(y1, y2))
            | (Formula::Cond(x1, x2), Formula::Cond(y1, y2)) => {
                go(s, t, x1, y1) && go(s, t, x2, y2)
            }
            (Formula::All(v, x), Formula::All(w, y)) => v == w && go(s, t, x, y),
            _ => false,
        }
    }
    go(s, t, from, to)
}

fn zero_num() -> Term {
    Term::Num(Ordinal::zero().code())
}

fn one_num() -> Term {
    Term::Num(Ordinal::one().code())
}

/// `oplus(t, ophi(0^, u))` — the bound `t + w^u`.
pub fn plus_omega_pow(t: &Term, u: &Term) -> Term {
    Term::fun(
        FnSym::OPlus,
        vec![
            t.clone(),
            Term::fun(FnSym::OPhi, vec![zero_num(), u.clone()]),
        ],
    )
}

fn is_ord_lemma(s: &Sequent, id: OrdLemmaId) -> bool {
    match id {
        OrdLemmaId::NoBelowZero => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Prim(PredSym::Prec, args)], []) => args[1] == zero_num(),
            _ => false,
        },
        OrdLemmaId::BelowOneIsZero => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Prim(PredSym::Prec, args)], [Formula::Eq(l, r)]) => {
                args[1] == one_num() && *l == args[0] && *r == zero_num()
            }
            _ => false,
        },
        OrdLemmaId::ExpPosSplit => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Prim(PredSym::Prec, args)], [succ]) => {
                let u = match &args[1] {
                    Term::Fn(FnSym::OPlus, oa) => match &oa[1] {
                        Term::Fn(FnSym::OPhi, pa) if pa[0] == zero_num() => pa[1].clone(),
                        _ => return false,
                    },
                    _ => return false,
                };
                *succ
                    == Formula::or(
                        Formula::Eq(u.clone(), zero_num()),
                        Formula::prec(zero_num(), u),
                    )
            }
            _ => false,
        },
        OrdLemmaId::SplitAtZeroExp => {
            if s.ante.len() != 2 || s.succ.len() != 1 {
                return false;
            }
            // antecedent: { u = 0^, s < oplus(t, ophi(0^, u)) } in either order
            let mut eq = None;
            let mut prec = None;
            for f in &s.ante {
                match f {
                    Formula::Eq(l, r) if *r == zero_num() => eq = Some(l.clone()),
                    Formula::Prim(PredSym::Prec, args) => {
                        prec = Some((args[0].clone(), args[1].clone()))
                    }
                    _ => return false,
                }
            }
            let (u, (sa, bound)) = match (eq, prec) {
                (Some(u), Some(p)) => (u, p),
                _ => return false,
            };
            let t = match &bound {
                Term::Fn(FnSym::OPlus, oa) => match &oa[1] {
                    Term::Fn(FnSym::OPhi, pa) if pa[0] == zero_num() && pa[1] == u => {
                        oa[0].clone()
                    }
                    _ => return false,
                },
                _ => return false,
            };
            s.succ[0]
                == Formula::or(
                    Formula::prec(sa.clone(), t.clone()),
                    Formula::Eq(sa, t),
                )
        }
        OrdLemmaId::CnfBound => {
            if s.ante.len() != 2 || s.succ.len() != 1 {
                return false;
            }
            let mut pos = None;
            let mut prec = None;
            for f in &s.ante {
                match f {
                    Formula::Prim(PredSym::Prec, args) if args[0] == zero_num() => {
                        pos = Some(args[1].clone())
                    }
                    Formula::Prim(PredSym::Prec, args) => {
                        prec = Some((args[0].clone(), args[1].clone()))
                    }
                    _ => return false,
                }
            }
            let (u, (sa, bound)) = match (pos, prec) {
                (Some(u), Some(p)) => (u, p),
                _ => return false,
            };
            let t = match &bound {
                Term::Fn(FnSym::OPlus, oa) => match &oa[1] {
                    Term::Fn(FnSym::OPhi, pa) if pa[0] == zero_num() && pa[1] == u => {
                        oa[0].clone()
                    }
                    _ => return false,
                },
                _ => return false,
            };
            // succedent: ex n ex z (z < u & s < oplus(t, otimes(ophi(0^, z), n)))
            // extract the two bound variables, then rebuild and compare
            let (n, inner) = match &s.succ[0] {
                Formula::Neg(a) => match &**a {
                    Formula::All(n, b) => match &**b {
                        Formula::Neg(c) => (*n, (**c).clone()),
                        _ => return false,
                    },
                    _ => return false,
                },
                _ => return false,
            };
            let z = match &inner {
                Formula::Neg(a) => match &**a {
                    Formula::All(z, _) => *z,
                    _ => return false,
                },
                _ => return false,
            };
            let mut used: BTreeSet<u32> = sa.vars();
            used.extend(t.vars());
            used.extend(u.vars());
            if used.contains(&n) || used.contains(&z) || n == z {
                return false;
            }
            s.succ[0] == cnf_bound_existential(&sa, &t, &u, n, z)
        }
        OrdLemmaId::PrecMulZero => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Prim(PredSym::Prec, args)], [Formula::Prim(PredSym::Prec, sargs)]) => {
                match &args[1] {
                    Term::Fn(FnSym::OPlus, oa) => match &oa[1] {
                        Term::Fn(FnSym::OTimes, ta) => {
                            ta[1] == Term::Zero
                                && sargs[0] == args[0]
                                && sargs[1] == oa[0]
                        }
                        _ => false,
                    },
                    _ => false,
                }
            }
            _ => false,
        },
        OrdLemmaId::PrecMulSucc => match (s.ante.as_slice(), s.succ.as_slice()) {
            ([Formula::Prim(PredSym::Prec, args)], [Formula::Prim(PredSym::Prec, sargs)]) => {
                let (t, u, v) = match &args[1] {
                    Term::Fn(FnSym::OPlus, oa) => match &oa[1] {
                        Term::Fn(FnSym::OTimes, ta) => match &ta[1] {
                            Term::Succ(v) => (oa[0].clone(), ta[0].clone(), (**v).clone()),
                            _ => return false,
                        },
                        _ => return false,
                    },
                    _ => return false,
                };
                let expect = Term::fun(
                    FnSym::OPlus,
                    vec![
                        Term::fun(
                            FnSym::OPlus,
                            vec![t, Term::fun(FnSym::OTimes, vec![u.clone(), v])],
                        ),
                        u,
                    ],
                );
                sargs[0] == args[0] && sargs[1] == expect
            }
            _ => false,
        },
        OrdLemmaId::ClassicalAtom => {
            if !s.ante.is_empty() || s.succ.len() != 2 {
                return false;
            }
            let (a, b) = (&s.succ[0], &s.succ[1]);
            let matches = |atom: &Formula, neg: &Formula| {
                matches!(atom, Formula::Prim(..)) && *neg == Formula::neg(atom.clone())
            };
            matches(a, b) || matches(b, a)
        }
    }
}

/// `ex n ex z (z < u & s < oplus(t, otimes(ophi(0^, z), n)))`.
pub fn cnf_bound_existential(s: &Term, t: &Term, u: &Term, n: u32, z: u32) -> Formula {
    let body = Formula::and(
        Formula::prec(Term::Var(z), u.clone()),
        Formula::prec(
            s.clone(),
            Term::fun(
                FnSym::OPlus,
                vec![
                    t.clone(),
                    Term::fun(
                        FnSym::OTimes,
                        vec![
                            Term::fun(FnSym::OPhi, vec![zero_num(), Term::Var(z)]),
                            Term::Var(n),
                        ],
                    ),
                ],
            ),
        ),
    );
    Formula::ex(n, Formula::ex(z, body))
}

fn num_def_rhs(t: &Term) -> Term {
    // code(Num n) = 1 + pair(0, pair(5, n)); tags as successor numerals
    let five = (0..5).fold(Term::Zero, |acc, _| Term::Succ(Box::new(acc)));
    Term::Succ(Box::new(Term::fun(
        FnSym::Pair,
        vec![
            Term::Zero,
            Term::fun(FnSym::Pair, vec![five, t.clone()]),
        ],
    )))
}

fn pair_def_rhs(a: &Term, b: &Term) -> Term {
    // 2*pair(a,b) = (a+b)*(a+b) + ((a+b) + (b+b))
    let s = Term::Plus(Box::new(a.clone()), Box::new(b.clone()));
    Term::Plus(
        Box::new(Term::Times(Box::new(s.clone()), Box::new(s.clone()))),
        Box::new(Term::Plus(
            Box::new(s),
            Box::new(Term::Plus(Box::new(b.clone()), Box::new(b.clone()))),
        )),
    )
}

// ------------------------------------------------------------------
// Derivations and checking

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
    /// source line when loaded from a proof script
    pub label: Option<u32>,
}

impl Derivation {
    /// Builds a node by forward rule application, so the result is correct by
    /// construction.
    pub fn infer(rule: Rule, premises: Vec<Derivation>) -> Result<Derivation, RuleError> {
        let refs: Vec<&Sequent> = premises.iter().map(|d| &d.conclusion).collect();
        let conclusion = apply_rule(&rule, &refs)?;
        Ok(Derivation {
            conclusion,
            rule,
            premises,
            label: None,
        })
    }

    pub fn axiom(id: AxiomId, sequent: Sequent) -> Result<Derivation, RuleError> {
        if !is_axiom(&sequent, id) {
            return Err(RuleError::NotAxiom(id.name()));
        }
        Ok(Derivation {
            conclusion: sequent,
            rule: Rule::Axiom(id),
            premises: Vec::new(),
            label: None,
        })
    }

    pub fn height(&self) -> u32 {
        self.premises
            .iter()
            .map(|d| d.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|d| d.node_count()).sum::<usize>()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NodeFailure {
    /// preorder index of the failing node
    pub index: usize,
    pub label: Option<u32>,
    pub rule: String,
    pub message: String,
    pub expected: Option<String>,
    pub found: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub ok: bool,
    pub height: u32,
    pub nodes: usize,
    pub failure: Option<NodeFailure>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            write!(f, "accepted: {} nodes, height {}", self.nodes, self.height)
        } else {
            let fail = self.failure.as_ref().unwrap();
            write!(f, "rejected at node {}", fail.index)?;
            if let Some(l) = fail.label {
                write!(f, " (line {l})")?;
            }
            write!(f, ", rule {}: {}", fail.rule, fail.message)?;
            if let Some(e) = &fail.expected {
                write!(f, "; expected `{e}`")?;
            }
            write!(f, "; found `{}`", fail.found)
        }
    }
}

/// Verifies a derivation bottom-up against the axiom catalogue and rule
/// schemata of `system`. Pure: the report depends only on the input.
pub fn check(d: &Derivation, system: System) -> CheckReport {
    let mut index = 0usize;
    let failure = check_node(d, system, &mut index);
    CheckReport {
        ok: failure.is_none(),
        height: d.height(),
        nodes: d.node_count(),
        failure,
    }
}

fn check_node(d: &Derivation, system: System, index: &mut usize) -> Option<NodeFailure> {
    let my_index = *index;
    *index += 1;
    for p in &d.premises {
        if let Some(f) = check_node(p, system, index) {
            return Some(f);
        }
    }
    match &d.rule {
        Rule::Axiom(id) => {
            if !system.admits(*id) {
                return Some(NodeFailure {
                    index: my_index,
                    label: d.label,
                    rule: d.rule.name(),
                    message: format!("axiom not admitted in system {}", system.name()),
                    expected: None,
                    found: d.conclusion.to_string(),
                });
            }
            if !is_axiom(&d.conclusion, *id) {
                return Some(NodeFailure {
                    index: my_index,
                    label: d.label,
                    rule: d.rule.name(),
                    message: "not an instance of the axiom schema".into(),
                    expected: None,
                    found: d.conclusion.to_string(),
                });
            }
            None
        }
        rule => {
            if matches!(rule, Rule::Subst { .. }) && system < System::KflStar {
                return Some(NodeFailure {
                    index: my_index,
                    label: d.label,
                    rule: d.rule.name(),
                    message: format!("substitution rule not admitted in system {}", system.name()),
                    expected: None,
                    found: d.conclusion.to_string(),
                });
            }
            if matches!(rule, Rule::IndR { .. } | Rule::TiR { .. }) && system < System::Hya {
                return Some(NodeFailure {
                    index: my_index,
                    label: d.label,
                    rule: d.rule.name(),
                    message: format!("induction rule not admitted in system {}", system.name()),
                    expected: None,
                    found: d.conclusion.to_string(),
                });
            }
            let refs: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
            match apply_rule(rule, &refs) {
                Err(e) => Some(NodeFailure {
                    index: my_index,
                    label: d.label,
                    rule: d.rule.name(),
                    message: e.to_string(),
                    expected: None,
                    found: d.conclusion.to_string(),
                }),
                Ok(expected) => {
                    if expected != d.conclusion {
                        Some(NodeFailure {
                            index: my_index,
                            label: d.label,
                            rule: d.rule.name(),
                            message: "conclusion does not match the rule".into(),
                            expected: Some(expected.to_string()),
                            found: d.conclusion.to_string(),
                        })
                    } else {
                        None
                    }
                }
            }
        }
    }
}
