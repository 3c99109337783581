//! Abstract syntax, substitution and parsing for the arithmetical truth
//! languages.
//!
//! Terms are built from `0`, `S`, `+`, `*`, compact numerals and a fixed
//! signature of function symbols for syntax and ordinal operations. Formulas
//! use the primitive connectives `!`, `|`, `->`, `all` and `bot`, the
//! predicates `=`, `Tr`, `F`, `P`, and a fixed family of decidable arithmetic
//! predicates (`Sent`, `CT`, `<`, ...). The defined connectives `&`, `ex`,
//! `<->`, `~` and `top` are expanded at construction and never stored.

use num_bigint::BigUint;
use std::collections::BTreeSet;
use std::fmt;

/// Function symbols of the fixed signature.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FnSym {
    /// numeral constructor on codes: `num(n)` is the code of the numeral of n
    NumF,
    /// substitution on codes: `sub(x, v, y)` substitutes the term coded by y
    /// for the variable coded by v in the formula or term coded by x
    Sub,
    /// negation on formula codes
    NegD,
    /// disjunction on formula codes
    VorD,
    /// universal quantification: `alld(v, x)` with v a variable code
    AllD,
    /// equality on term codes
    EqD,
    /// truth ascription on term codes: `trd(t)` codes `Tr` of the coded term
    TrD,
    /// Cantor pairing
    Pair,
    Proj1,
    Proj2,
    /// value of the closed term coded by the argument
    Val,
    /// ordinal addition on notation codes
    OPlus,
    /// ordinal notation times a natural number
    OTimes,
    /// binary Veblen function on notation codes
    OPhi,
    /// head of the Cantor normal form
    OHead,
    /// last exponent of the Cantor normal form
    OLast,
}

impl FnSym {
    pub fn arity(self) -> usize {
        match self {
            FnSym::NumF | FnSym::NegD | FnSym::TrD | FnSym::Proj1 | FnSym::Proj2 | FnSym::Val
            | FnSym::OHead | FnSym::OLast => 1,
            FnSym::VorD | FnSym::AllD | FnSym::EqD | FnSym::Pair | FnSym::OPlus
            | FnSym::OTimes | FnSym::OPhi => 2,
            FnSym::Sub => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FnSym::NumF => "num",
            FnSym::Sub => "sub",
            FnSym::NegD => "negd",
            FnSym::VorD => "vord",
            FnSym::AllD => "alld",
            FnSym::EqD => "eqd",
            FnSym::TrD => "trd",
            FnSym::Pair => "pair",
            FnSym::Proj1 => "proj1",
            FnSym::Proj2 => "proj2",
            FnSym::Val => "val",
            FnSym::OPlus => "oplus",
            FnSym::OTimes => "otimes",
            FnSym::OPhi => "ophi",
            FnSym::OHead => "oh",
            FnSym::OLast => "oe",
        }
    }

    pub fn all() -> &'static [FnSym] {
        &[
            FnSym::NumF,
            FnSym::Sub,
            FnSym::NegD,
            FnSym::VorD,
            FnSym::AllD,
            FnSym::EqD,
            FnSym::TrD,
            FnSym::Pair,
            FnSym::Proj1,
            FnSym::Proj2,
            FnSym::Val,
            FnSym::OPlus,
            FnSym::OTimes,
            FnSym::OPhi,
            FnSym::OHead,
            FnSym::OLast,
        ]
    }
}

/// Decidable arithmetic predicates with a fixed interpretation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PredSym {
    /// sentence of the truth language
    SentLT,
    /// sentence of the arithmetical language
    SentLN,
    /// closed term code
    CTerm,
    /// variable code
    IsVar,
    /// ordinal notation code
    Ot,
    /// strict order on ordinal notation codes
    Prec,
    /// `SentB(a, x)`: x is a sentence of ramified level strictly below the
    /// notation coded by a
    SentBelow,
}

impl PredSym {
    pub fn arity(self) -> usize {
        match self {
            PredSym::Prec | PredSym::SentBelow => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PredSym::SentLT => "Sent",
            PredSym::SentLN => "SentN",
            PredSym::CTerm => "CT",
            PredSym::IsVar => "Var",
            PredSym::Ot => "OT",
            PredSym::Prec => "<",
            PredSym::SentBelow => "SentB",
        }
    }

    pub fn all() -> &'static [PredSym] {
        &[
            PredSym::SentLT,
            PredSym::SentLN,
            PredSym::CTerm,
            PredSym::IsVar,
            PredSym::Ot,
            PredSym::Prec,
            PredSym::SentBelow,
        ]
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(u32),
    Zero,
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
    /// compact numeral; `Num(n)` denotes n and is the canonical numeral
    Num(BigUint),
    Fn(FnSym, Vec<Term>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Bot,
    Eq(Term, Term),
    Tr(Term),
    /// falsity predicate of the target language
    Fals(Term),
    /// schematic predicate
    P(Term),
    Prim(PredSym, Vec<Term>),
    Neg(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Cond(Box<Formula>, Box<Formula>),
    All(u32, Box<Formula>),
}

/// Language tags. The tag is a property checked against a formula, not a
/// field stored inside it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Lang {
    LN,
    LNArrow,
    LT,
    LTArrow,
    LTArrowP,
    LTF,
}

/// Which vocabulary a language admits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LangSpec {
    pub arrow: bool,
    pub tr: bool,
    pub fals: bool,
    pub p: bool,
}

impl Lang {
    pub fn spec(self) -> LangSpec {
        match self {
            Lang::LN => LangSpec { arrow: false, tr: false, fals: false, p: false },
            Lang::LNArrow => LangSpec { arrow: true, tr: false, fals: false, p: false },
            Lang::LT => LangSpec { arrow: false, tr: true, fals: false, p: false },
            Lang::LTArrow => LangSpec { arrow: true, tr: true, fals: false, p: false },
            Lang::LTArrowP => LangSpec { arrow: true, tr: true, fals: false, p: true },
            Lang::LTF => LangSpec { arrow: false, tr: true, fals: true, p: true },
        }
    }

    pub fn from_name(s: &str) -> Option<Lang> {
        match s {
            "ln" => Some(Lang::LN),
            "ln-arrow" => Some(Lang::LNArrow),
            "lt" => Some(Lang::LT),
            "lt-arrow" => Some(Lang::LTArrow),
            "lt-arrow-p" => Some(Lang::LTArrowP),
            "ltf" => Some(Lang::LTF),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Lang::LN => "ln",
            Lang::LNArrow => "ln-arrow",
            Lang::LT => "lt",
            Lang::LTArrow => "lt-arrow",
            Lang::LTArrowP => "lt-arrow-p",
            Lang::LTF => "ltf",
        }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("language violation at {pos}: {msg}")]
    LangViolation { pos: usize, msg: String },
}

impl Formula {
    /// `A & B` as `!(!A | !B)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::Neg(Box::new(Formula::Or(
            Box::new(Formula::Neg(Box::new(a))),
            Box::new(Formula::Neg(Box::new(b))),
        )))
    }

    /// `ex v. A` as `!all v. !A`.
    pub fn ex(v: u32, a: Formula) -> Formula {
        Formula::Neg(Box::new(Formula::All(v, Box::new(Formula::Neg(Box::new(a))))))
    }

    /// `A <-> B` as `(A -> B) & (B -> A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::Cond(Box::new(a.clone()), Box::new(b.clone())),
            Formula::Cond(Box::new(b), Box::new(a)),
        )
    }

    pub fn top() -> Formula {
        Formula::Neg(Box::new(Formula::Bot))
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Box::new(a))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn cond(a: Formula, b: Formula) -> Formula {
        Formula::Cond(Box::new(a), Box::new(b))
    }

    pub fn all(v: u32, a: Formula) -> Formula {
        Formula::All(v, Box::new(a))
    }

    /// `s < t` on ordinal notation codes.
    pub fn prec(s: Term, t: Term) -> Formula {
        Formula::Prim(PredSym::Prec, vec![s, t])
    }

    /// Number of nodes in the longest branch of the syntax tree.
    pub fn rank(&self) -> u32 {
        match self {
            Formula::Bot
            | Formula::Eq(..)
            | Formula::Tr(_)
            | Formula::Fals(_)
            | Formula::P(_)
            | Formula::Prim(..) => 1,
            Formula::Neg(a) | Formula::All(_, a) => 1 + a.rank(),
            Formula::Or(a, b) | Formula::Cond(a, b) => 1 + a.rank().max(b.rank()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Bot => {}
            Formula::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Formula::Tr(t) | Formula::Fals(t) | Formula::P(t) => t.collect_vars(out),
            Formula::Prim(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Neg(a) => a.collect_free(out),
            Formula::Or(a, b) | Formula::Cond(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::All(v, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    /// All variable indices occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Bot => {}
            Formula::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Formula::Tr(t) | Formula::Fals(t) | Formula::P(t) => t.collect_vars(out),
            Formula::Prim(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Neg(a) => a.collect_all(out),
            Formula::Or(a, b) | Formula::Cond(a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Formula::All(v, a) => {
                out.insert(*v);
                a.collect_all(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Capture-avoiding substitution of `t` for the free variable `v`.
    pub fn substitute(&self, v: u32, t: &Term) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Eq(s1, s2) => Formula::Eq(s1.substitute(v, t), s2.substitute(v, t)),
            Formula::Tr(s) => Formula::Tr(s.substitute(v, t)),
            Formula::Fals(s) => Formula::Fals(s.substitute(v, t)),
            Formula::P(s) => Formula::P(s.substitute(v, t)),
            Formula::Prim(p, args) => {
                Formula::Prim(*p, args.iter().map(|a| a.substitute(v, t)).collect())
            }
            Formula::Neg(a) => Formula::neg(a.substitute(v, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(v, t), b.substitute(v, t)),
            Formula::Cond(a, b) => Formula::cond(a.substitute(v, t), b.substitute(v, t)),
            Formula::All(w, a) => {
                if *w == v {
                    return self.clone();
                }
                if !a.free_vars().contains(&v) {
                    return self.clone();
                }
                let tvars = t.vars();
                if tvars.contains(w) {
                    // rename the binder away from the substituted term
                    let mut used: BTreeSet<u32> = a.all_vars();
                    used.extend(tvars);
                    used.insert(v);
                    let fresh = used.iter().max().map_or(0, |m| m + 1);
                    let renamed = a.substitute(*w, &Term::Var(fresh));
                    Formula::all(fresh, renamed.substitute(v, t))
                } else {
                    Formula::all(*w, a.substitute(v, t))
                }
            }
        }
    }

    /// Checks that the formula lies inside the given language.
    pub fn in_lang_spec(&self, spec: &LangSpec) -> bool {
        match self {
            Formula::Bot | Formula::Eq(..) | Formula::Prim(..) => true,
            Formula::Tr(_) => spec.tr,
            Formula::Fals(_) => spec.fals,
            Formula::P(_) => spec.p,
            Formula::Neg(a) => a.in_lang_spec(spec),
            Formula::Or(a, b) => a.in_lang_spec(spec) && b.in_lang_spec(spec),
            Formula::Cond(a, b) => spec.arrow && a.in_lang_spec(spec) && b.in_lang_spec(spec),
            Formula::All(_, a) => a.in_lang_spec(spec),
        }
    }

    pub fn in_lang(&self, lang: Lang) -> bool {
        self.in_lang_spec(&lang.spec())
    }

    pub fn parse(text: &str, lang: Lang) -> Result<Formula, SyntaxError> {
        let mut p = Parser::new(text, lang);
        let f = p.parse_formula()?;
        p.expect_end()?;
        Ok(f)
    }
}

impl Term {
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Zero | Term::Num(_) => {}
            Term::Succ(t) => t.collect_vars(out),
            Term::Plus(s, t) | Term::Times(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Term::Fn(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.vars().is_empty()
    }

    pub fn substitute(&self, v: u32, t: &Term) -> Term {
        match self {
            Term::Var(w) => {
                if *w == v {
                    t.clone()
                } else {
                    self.clone()
                }
            }
            Term::Zero | Term::Num(_) => self.clone(),
            Term::Succ(s) => Term::Succ(Box::new(s.substitute(v, t))),
            Term::Plus(a, b) => {
                Term::Plus(Box::new(a.substitute(v, t)), Box::new(b.substitute(v, t)))
            }
            Term::Times(a, b) => {
                Term::Times(Box::new(a.substitute(v, t)), Box::new(b.substitute(v, t)))
            }
            Term::Fn(f, args) => {
                Term::Fn(*f, args.iter().map(|a| a.substitute(v, t)).collect())
            }
        }
    }

    pub fn num_u64(n: u64) -> Term {
        Term::Num(BigUint::from(n))
    }

    pub fn fun(f: FnSym, args: Vec<Term>) -> Term {
        debug_assert_eq!(args.len(), f.arity());
        Term::Fn(f, args)
    }

    pub fn parse(text: &str, lang: Lang) -> Result<Term, SyntaxError> {
        let mut p = Parser::new(text, lang);
        let t = p.parse_term()?;
        p.expect_end()?;
        Ok(t)
    }
}

// ------------------------------------------------------------------
// Printing

fn term_fmt(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // precedence: atom > * > +
    fn prod(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match t {
            Term::Times(a, b) => {
                prod(a, f)?;
                write!(f, "*")?;
                atom(b, f)
            }
            _ => atom(t, f),
        }
    }
    fn atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match t {
            Term::Var(v) => write!(f, "v{v}"),
            Term::Zero => write!(f, "0"),
            Term::Num(n) => write!(f, "{n}"),
            Term::Succ(s) => {
                write!(f, "S(")?;
                term_fmt(s, f)?;
                write!(f, ")")
            }
            Term::Fn(sym, args) => {
                write!(f, "{}(", sym.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    term_fmt(a, f)?;
                }
                write!(f, ")")
            }
            Term::Plus(..) | Term::Times(..) => {
                write!(f, "(")?;
                term_fmt(t, f)?;
                write!(f, ")")
            }
        }
    }
    match t {
        Term::Plus(a, b) => {
            term_fmt(a, f)?;
            write!(f, "+")?;
            prod(b, f)
        }
        _ => prod(t, f),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        term_fmt(self, f)
    }
}

// precedence levels: 0 = conditional, 1 = disjunction, 2 = unary/atom
fn formula_fmt(x: &Formula, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
    match x {
        Formula::Cond(a, b) => {
            if level > 0 {
                write!(f, "(")?;
            }
            formula_fmt(a, f, 1)?;
            write!(f, " -> ")?;
            formula_fmt(b, f, 0)?;
            if level > 0 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Or(a, b) => {
            if level > 1 {
                write!(f, "(")?;
            }
            formula_fmt(a, f, 2)?;
            write!(f, " | ")?;
            formula_fmt(b, f, 1)?;
            if level > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Neg(a) => {
            write!(f, "!")?;
            formula_fmt(a, f, 2)
        }
        Formula::All(v, a) => {
            if level > 1 {
                write!(f, "(")?;
            }
            write!(f, "all v{v}. ")?;
            formula_fmt(a, f, if level > 1 { 0 } else { level.min(1) })?;
            if level > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Bot => write!(f, "bot"),
        Formula::Eq(s, t) => write!(f, "{s} = {t}"),
        Formula::Tr(t) => write!(f, "Tr({t})"),
        Formula::Fals(t) => write!(f, "F({t})"),
        Formula::P(t) => write!(f, "P({t})"),
        Formula::Prim(PredSym::Prec, args) => write!(f, "{} < {}", args[0], args[1]),
        Formula::Prim(p, args) => {
            write!(f, "{}(", p.name())?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        formula_fmt(self, f, 0)
    }
}

// ------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    lang: Lang,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, lang: Lang) -> Self {
        Parser {
            text: text.as_bytes(),
            pos: 0,
            lang,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn lang_err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::LangViolation {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(s.as_bytes())
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Consumes `s` only when it is not a prefix of a longer identifier.
    fn eat_word(&mut self, s: &str) -> bool {
        self.skip_ws();
        if !self.text[self.pos..].starts_with(s.as_bytes()) {
            return false;
        }
        let after = self.pos + s.len();
        if let Some(&c) = self.text.get(after) {
            if c.is_ascii_alphanumeric() || c == b'_' {
                return false;
            }
        }
        self.pos = after;
        true
    }

    fn expect(&mut self, c: u8) -> Result<(), SyntaxError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn expect_end(&mut self) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn parse_formula(&mut self) -> Result<Formula, SyntaxError> {
        self.parse_cond()
    }

    fn parse_cond(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_or()?;
        if self.starts_with("<->") {
            self.pos += 3;
            if !self.lang.spec().arrow {
                return self.lang_err("conditional outside an arrow language");
            }
            let rhs = self.parse_cond()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        if self.starts_with("->") {
            self.pos += 2;
            if !self.lang.spec().arrow {
                return self.lang_err("conditional outside an arrow language");
            }
            let rhs = self.parse_cond()?;
            return Ok(Formula::cond(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.parse_and()?;
        loop {
            self.skip_ws();
            // '|' but not '|>' etc; grammar has only '|'
            if self.peek() == Some(b'|') {
                self.pos += 1;
                let rhs = self.parse_and()?;
                acc = Formula::or(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_and(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.parse_unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.parse_unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn parse_var_name(&mut self) -> Result<u32, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        var_index(name).ok_or(SyntaxError::Parse {
            pos: start,
            msg: format!("expected a variable, found '{name}'"),
        })
    }

    fn parse_unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat_str("!") {
            let a = self.parse_unary()?;
            return Ok(Formula::neg(a));
        }
        if self.eat_str("~") {
            if !self.lang.spec().arrow {
                return self.lang_err("intuitionistic negation needs the conditional");
            }
            let a = self.parse_unary()?;
            return Ok(Formula::cond(a, Formula::Bot));
        }
        if self.eat_word("all") {
            let v = self.parse_var_name()?;
            self.expect(b'.')?;
            let body = self.parse_formula()?;
            return Ok(Formula::all(v, body));
        }
        if self.eat_word("ex") {
            let v = self.parse_var_name()?;
            self.expect(b'.')?;
            let body = self.parse_formula()?;
            return Ok(Formula::ex(v, body));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat_word("bot") {
            return Ok(Formula::Bot);
        }
        if self.eat_word("top") {
            return Ok(Formula::top());
        }
        if self.eat_word("Tr") {
            if !self.lang.spec().tr {
                return self.lang_err("truth predicate outside a truth language");
            }
            self.expect(b'(')?;
            let t = self.parse_term()?;
            self.expect(b')')?;
            return Ok(Formula::Tr(t));
        }
        if self.eat_word("F") {
            if !self.lang.spec().fals {
                return self.lang_err("falsity predicate outside the target language");
            }
            self.expect(b'(')?;
            let t = self.parse_term()?;
            self.expect(b')')?;
            return Ok(Formula::Fals(t));
        }
        if self.eat_word("P") {
            if !self.lang.spec().p {
                return self.lang_err("schematic predicate outside a schematic language");
            }
            self.expect(b'(')?;
            let t = self.parse_term()?;
            self.expect(b')')?;
            return Ok(Formula::P(t));
        }
        for pred in PredSym::all() {
            if *pred == PredSym::Prec {
                continue; // infix
            }
            if self.eat_word(pred.name()) {
                self.expect(b'(')?;
                let mut args = vec![self.parse_term()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.parse_term()?);
                }
                self.expect(b')')?;
                if args.len() != pred.arity() {
                    return self.err(format!("{} expects {} arguments", pred.name(), pred.arity()));
                }
                return Ok(Formula::Prim(*pred, args));
            }
        }
        // propositional letters as truth ascriptions to small constants
        for (name, i) in [("p", 0u64), ("q", 1), ("r", 2)] {
            if self.eat_word(name) {
                if !self.lang.spec().tr {
                    return self.lang_err("propositional letters abbreviate truth ascriptions");
                }
                return Ok(Formula::Tr(Term::num_u64(i)));
            }
        }
        if self.peek() == Some(b'(') {
            // could be a parenthesized formula or a parenthesized term
            let save = self.pos;
            self.pos += 1;
            if let Ok(f) = self.parse_formula() {
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    // if an equality sign follows, this was a term after all
                    if self.peek() != Some(b'=') && !self.starts_with("<") {
                        return Ok(f);
                    }
                }
            }
            self.pos = save;
        }
        // fall through: an atomic formula headed by a term
        let s = self.parse_term()?;
        self.skip_ws();
        if self.eat_str("=") {
            let t = self.parse_term()?;
            return Ok(Formula::Eq(s, t));
        }
        if self.starts_with("<") && !self.starts_with("<->") {
            self.pos += 1;
            let t = self.parse_term()?;
            return Ok(Formula::prec(s, t));
        }
        self.err("expected '=' or '<' after term")
    }

    fn parse_term(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.parse_term_prod()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.parse_term_prod()?;
            acc = Term::Plus(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn parse_term_prod(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.parse_term_atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.parse_term_atom()?;
            acc = Term::Times(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn parse_term_atom(&mut self) -> Result<Term, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.parse_term()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
                let n: BigUint = text.parse().unwrap();
                if n == BigUint::ZERO && text == "0" {
                    Ok(Term::Zero)
                } else {
                    Ok(Term::Num(n))
                }
            }
            _ => {
                if self.eat_word("S") {
                    self.expect(b'(')?;
                    let t = self.parse_term()?;
                    self.expect(b')')?;
                    return Ok(Term::Succ(Box::new(t)));
                }
                if self.eat_word("q") {
                    self.expect(b'(')?;
                    let save = self.pos;
                    // quotation: numeral of the code of the enclosed item
                    let code = match self.parse_formula() {
                        Ok(f) if self.peek() == Some(b')') => crate::codec::encode_formula(&f),
                        _ => {
                            self.pos = save;
                            let t = self.parse_term()?;
                            crate::codec::encode_term(&t)
                        }
                    };
                    self.expect(b')')?;
                    return Ok(Term::Num(code));
                }
                for sym in FnSym::all() {
                    if self.eat_word(sym.name()) {
                        self.expect(b'(')?;
                        let mut args = vec![self.parse_term()?];
                        while self.peek() == Some(b',') {
                            self.pos += 1;
                            args.push(self.parse_term()?);
                        }
                        self.expect(b')')?;
                        if args.len() != sym.arity() {
                            return self
                                .err(format!("{} expects {} arguments", sym.name(), sym.arity()));
                        }
                        return Ok(Term::Fn(*sym, args));
                    }
                }
                let start = self.pos;
                while self.pos < self.text.len()
                    && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
                match var_index(name) {
                    Some(i) => Ok(Term::Var(i)),
                    None => Err(SyntaxError::Parse {
                        pos: start,
                        msg: if name.is_empty() {
                            "expected a term".to_string()
                        } else {
                            format!("unknown name '{name}'")
                        },
                    }),
                }
            }
        }
    }
}

/// `v<digits>` canonically; single letters x y z u w as input aliases.
fn var_index(name: &str) -> Option<u32> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "u" => Some(3),
        "w" => Some(4),
        _ => {
            let rest = name.strip_prefix('v')?;
            if rest.is_empty() || !rest.bytes().all(|c| c.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt(s: &str) -> Formula {
        Formula::parse(s, Lang::LT).unwrap()
    }

    #[test]
    fn parse_quotation() {
        let f = lt("Tr(q(0=0))");
        let code = crate::codec::encode_formula(&Formula::Eq(Term::Zero, Term::Zero));
        assert_eq!(f, Formula::Tr(Term::Num(code)));
    }

    #[test]
    fn arrow_rejected_outside_arrow_language() {
        let e = Formula::parse("Tr(v0) -> Tr(v0)", Lang::LT).unwrap_err();
        assert!(matches!(e, SyntaxError::LangViolation { .. }));
        assert!(Formula::parse("Tr(v0) -> Tr(v0)", Lang::LTArrow).is_ok());
    }

    #[test]
    fn parse_mixed_atom() {
        let f = lt("!(x=y) | Tr(v0)");
        let expect = Formula::or(
            Formula::neg(Formula::Eq(Term::Var(0), Term::Var(1))),
            Formula::Tr(Term::Var(0)),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn falsity_only_in_target_language() {
        assert!(Formula::parse("F(v0)", Lang::LT).is_err());
        assert!(Formula::parse("F(v0)", Lang::LTF).is_ok());
    }

    #[test]
    fn substitution_examples() {
        let f = Formula::Tr(Term::Var(0));
        assert_eq!(
            f.substitute(0, &Term::num_u64(5)),
            Formula::Tr(Term::num_u64(5))
        );
        // all v0. v0 = v1, substituting v0 for v1 forces a rename
        let g = Formula::all(0, Formula::Eq(Term::Var(0), Term::Var(1)));
        let h = g.substitute(1, &Term::Var(0));
        match h {
            Formula::All(fresh, body) => {
                assert_ne!(fresh, 0);
                assert_eq!(*body, Formula::Eq(Term::Var(fresh), Term::Var(0)));
            }
            _ => panic!("expected a universal formula"),
        }
        // no free occurrence: unchanged
        let e = Formula::Eq(Term::Zero, Term::Zero);
        assert_eq!(e.substitute(0, &Term::Var(7)), e);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(lt("0=0").rank(), 1);
        assert_eq!(lt("!(0=0)").rank(), 2);
        assert_eq!(lt("0=0 | !(0=0)").rank(), 3);
    }

    #[test]
    fn display_parse_roundtrip() {
        for s in [
            "0=0",
            "all v0. (v0 = v0 | !Tr(v0))",
            "Tr(num(3))",
            "!(!(0 = S(0)))",
            "all v1. v1 < v2",
            "Sent(v0)",
            "0+S(0)*S(S(0)) = v3",
        ] {
            let f = Formula::parse(s, Lang::LTArrowP).unwrap();
            let printed = f.to_string();
            let again = Formula::parse(&printed, Lang::LTArrowP).unwrap();
            assert_eq!(f, again, "roundtrip failed for {s} -> {printed}");
        }
    }

    #[test]
    fn defined_connectives_expand() {
        let f = Formula::parse("p & q", Lang::LT).unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::Tr(Term::num_u64(0)), Formula::Tr(Term::num_u64(1)))
        );
        let g = Formula::parse("ex v0. v0=0", Lang::LN).unwrap();
        assert_eq!(g, Formula::ex(0, Formula::Eq(Term::Var(0), Term::Zero)));
    }
}
