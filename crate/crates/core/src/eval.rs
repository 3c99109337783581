//! Evaluation of closed terms and decision of the fixed arithmetic
//! predicates.
//!
//! Syntactic functions compute on codes exactly as the corresponding
//! constructors: `num(n)` is the code of the numeral of n, `sub` substitutes
//! inside coded syntax, the ordinal functions act through the notation
//! system. On input outside the intended domain every code-valued function
//! returns an absorbing invalid code (0 for syntax, a fixed non-normal code
//! for notations) and `<` is false, so each function is total.

use crate::codec::{self, decode, encode_formula, encode_term, Code, Decoded};
use crate::ordinals::{invalid_ord_sentinel, Ordinal};
use crate::pairing::{pair, unpair};
use crate::syntax::{FnSym, Formula, Lang, PredSym, Term};
use num_bigint::BigUint;
use num_traits::One;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("open term: variable v{0}")]
    OpenTerm(u32),
}

/// Value of a closed term.
pub fn eval_term(t: &Term) -> Result<BigUint, EvalError> {
    match t {
        Term::Var(v) => Err(EvalError::OpenTerm(*v)),
        Term::Zero => Ok(BigUint::ZERO),
        Term::Num(n) => Ok(n.clone()),
        Term::Succ(s) => Ok(eval_term(s)? + BigUint::one()),
        Term::Plus(a, b) => Ok(eval_term(a)? + eval_term(b)?),
        Term::Times(a, b) => Ok(eval_term(a)? * eval_term(b)?),
        Term::Fn(sym, args) => {
            let vals: Result<Vec<BigUint>, _> = args.iter().map(eval_term).collect();
            Ok(apply_fn(*sym, &vals?))
        }
    }
}

fn ord_of(v: &BigUint) -> Option<Ordinal> {
    Ordinal::decode(v)
}

fn ord_result(o: Option<Ordinal>) -> BigUint {
    match o {
        Some(o) => o.code(),
        None => invalid_ord_sentinel().clone(),
    }
}

/// Semantics of the fixed function signature on naturals.
pub fn apply_fn(sym: FnSym, vals: &[BigUint]) -> BigUint {
    match sym {
        FnSym::NumF => encode_term(&Term::Num(vals[0].clone())),
        FnSym::Sub => {
            let var = match codec::decode_term(&vals[1]) {
                Ok(Term::Var(v)) => v,
                _ => return BigUint::ZERO,
            };
            let replacement = match codec::decode_term(&vals[2]) {
                Ok(t) => t,
                Err(_) => return BigUint::ZERO,
            };
            match decode(&vals[0]) {
                Ok(Decoded::Formula(f)) => encode_formula(&f.substitute(var, &replacement)),
                Ok(Decoded::Term(t)) => encode_term(&t.substitute(var, &replacement)),
                Err(_) => BigUint::ZERO,
            }
        }
        FnSym::NegD => codec::neg_code(&vals[0]),
        FnSym::VorD => match (codec::decode_formula(&vals[0]), codec::decode_formula(&vals[1])) {
            (Ok(a), Ok(b)) => encode_formula(&Formula::or(a, b)),
            _ => BigUint::ZERO,
        },
        FnSym::AllD => {
            let v = match codec::decode_term(&vals[0]) {
                Ok(Term::Var(v)) => v,
                _ => return BigUint::ZERO,
            };
            match codec::decode_formula(&vals[1]) {
                Ok(f) => encode_formula(&Formula::all(v, f)),
                Err(_) => BigUint::ZERO,
            }
        }
        FnSym::EqD => match (codec::decode_term(&vals[0]), codec::decode_term(&vals[1])) {
            (Ok(s), Ok(t)) => encode_formula(&Formula::Eq(s, t)),
            _ => BigUint::ZERO,
        },
        FnSym::TrD => match codec::decode_term(&vals[0]) {
            Ok(t) => encode_formula(&Formula::Tr(t)),
            Err(_) => BigUint::ZERO,
        },
        FnSym::Pair => pair(&vals[0], &vals[1]),
        FnSym::Proj1 => unpair(&vals[0]).0,
        FnSym::Proj2 => unpair(&vals[0]).1,
        FnSym::Val => match codec::decode_term(&vals[0]) {
            // subterm codes are strictly smaller, so this recursion grounds out
            Ok(t) if t.is_closed() => eval_term(&t).unwrap_or(BigUint::ZERO),
            _ => BigUint::ZERO,
        },
        FnSym::OPlus => match (ord_of(&vals[0]), ord_of(&vals[1])) {
            (Some(a), Some(b)) => a.add(&b).code(),
            _ => invalid_ord_sentinel().clone(),
        },
        FnSym::OTimes => match (ord_of(&vals[0]), u64::try_from(&vals[1])) {
            (Some(a), Ok(n)) => a.times_nat(n).code(),
            _ => invalid_ord_sentinel().clone(),
        },
        FnSym::OPhi => match (ord_of(&vals[0]), ord_of(&vals[1])) {
            (Some(a), Some(b)) => Ordinal::veblen(&a, &b).code(),
            _ => invalid_ord_sentinel().clone(),
        },
        FnSym::OHead => ord_result(ord_of(&vals[0]).map(|o| o.h_of())),
        FnSym::OLast => ord_result(ord_of(&vals[0]).map(|o| o.e_of())),
    }
}

/// Decides one of the fixed arithmetic predicates on values.
pub fn decide_pred(p: PredSym, vals: &[BigUint]) -> bool {
    match p {
        PredSym::SentLT => match codec::decode_formula(&vals[0]) {
            Ok(f) => f.is_closed() && f.in_lang(Lang::LT),
            Err(_) => false,
        },
        PredSym::SentLN => match codec::decode_formula(&vals[0]) {
            Ok(f) => f.is_closed() && f.in_lang(Lang::LN),
            Err(_) => false,
        },
        PredSym::CTerm => match codec::decode_term(&vals[0]) {
            Ok(t) => t.is_closed(),
            Err(_) => false,
        },
        PredSym::IsVar => matches!(codec::decode_term(&vals[0]), Ok(Term::Var(_))),
        PredSym::Ot => Ordinal::decode(&vals[0]).is_some(),
        PredSym::Prec => match (Ordinal::decode(&vals[0]), Ordinal::decode(&vals[1])) {
            (Some(a), Some(b)) => a.lt(&b),
            _ => false,
        },
        PredSym::SentBelow => match (Ordinal::decode(&vals[0]), codec::decode_formula(&vals[1])) {
            (Some(alpha), Ok(f)) => match need_level(&f) {
                Some(n) => Ordinal::from_nat(n).lt(&alpha),
                None => false,
            },
            _ => false,
        },
    }
}

/// Least ramified level at which a formula is admitted, if any.
///
/// Arithmetical formulas sit at level 0; a truth ascription to the numeral of
/// a level-n formula sits at level n+1; negation, disjunction and
/// quantification do not raise the level. Truth ascriptions to anything but a
/// numeral of a formula code belong to no level.
pub fn need_level(f: &Formula) -> Option<u64> {
    match f {
        Formula::Bot | Formula::Eq(..) | Formula::Prim(..) => Some(0),
        Formula::Fals(_) | Formula::P(_) | Formula::Cond(..) => None,
        Formula::Tr(t) => match t {
            Term::Num(code) => match codec::decode_formula(code) {
                Ok(inner) => need_level(&inner).map(|n| n + 1),
                Err(_) => None,
            },
            _ => None,
        },
        Formula::Neg(a) | Formula::All(_, a) => need_level(a),
        Formula::Or(a, b) => Some(need_level(a)?.max(need_level(b)?)),
    }
}

/// Membership in the ramified sentence class at level `alpha`.
pub fn sent_level(alpha: &Ordinal, code: &Code) -> bool {
    let f = match codec::decode_formula(code) {
        Ok(f) => f,
        Err(_) => return false,
    };
    if !f.is_closed() {
        return false;
    }
    match need_level(&f) {
        Some(n) => !alpha.lt(&Ordinal::from_nat(n)),
        None => false,
    }
}

/// Membership in some level strictly below `alpha`.
pub fn sent_below(alpha: &Ordinal, code: &Code) -> bool {
    let f = match codec::decode_formula(code) {
        Ok(f) => f,
        Err(_) => return false,
    };
    if !f.is_closed() {
        return false;
    }
    match need_level(&f) {
        Some(n) => Ordinal::from_nat(n).lt(alpha),
        None => false,
    }
}

/// The guarded truth predicate at level `alpha`, as a formula:
/// `SentB(code alpha, t) & Tr(t)`.
pub fn tr_alpha(alpha: &Ordinal, t: Term) -> Formula {
    Formula::and(
        Formula::Prim(PredSym::SentBelow, vec![Term::Num(alpha.code()), t.clone()]),
        Formula::Tr(t),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tparse(s: &str) -> Term {
        Term::parse(s, Lang::LT).unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(
            eval_term(&tparse("S(S(0)) + S(0)")).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            eval_term(&tparse("S(S(0)) * S(S(S(0)))")).unwrap(),
            BigUint::from(6u32)
        );
        assert!(matches!(
            eval_term(&Term::Var(3)),
            Err(EvalError::OpenTerm(3))
        ));
    }

    #[test]
    fn num_is_numeral_code() {
        let v = eval_term(&tparse("num(7)")).unwrap();
        assert_eq!(v, encode_term(&Term::num_u64(7)));
    }

    #[test]
    fn sub_computes_substitution() {
        // sub(code of Tr(v0), code of v0, num(4)) = code of Tr(4)
        let t = tparse("sub(q(Tr(v0)), q(v0), num(4))");
        let lhs = eval_term(&t).unwrap();
        let rhs = encode_formula(&Formula::Tr(Term::num_u64(4)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn negdot_matches_constructor() {
        let t = tparse("negd(q(0=0))");
        let lhs = eval_term(&t).unwrap();
        let rhs = encode_formula(&Formula::neg(Formula::Eq(Term::Zero, Term::Zero)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trdot_agrees_with_constructor_path() {
        // code of Tr(numeral of n) via trd(num(n)) and via the constructors
        let n = 23u64;
        let via_fn = eval_term(&Term::fun(
            FnSym::TrD,
            vec![Term::fun(FnSym::NumF, vec![Term::num_u64(n)])],
        ))
        .unwrap();
        let via_ctor = encode_formula(&Formula::Tr(Term::num_u64(n)));
        assert_eq!(via_fn, via_ctor);
    }

    #[test]
    fn val_inverts_num() {
        let t = tparse("val(num(9))");
        assert_eq!(eval_term(&t).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn ordinal_functions() {
        let w = Ordinal::omega();
        let one = Ordinal::one();
        let t = Term::fun(
            FnSym::OPlus,
            vec![Term::Num(one.code()), Term::Num(w.code())],
        );
        assert_eq!(eval_term(&t).unwrap(), w.code());
        // garbage is absorbing
        let bad = Term::fun(
            FnSym::OPlus,
            vec![Term::Num(invalid_ord_sentinel().clone()), Term::Num(w.code())],
        );
        assert_eq!(eval_term(&bad).unwrap(), *invalid_ord_sentinel());
        assert!(!decide_pred(
            PredSym::Prec,
            &[BigUint::ZERO + 1u32, invalid_ord_sentinel().clone()]
        ));
    }

    #[test]
    fn sent_level_examples() {
        let base = encode_formula(&Formula::Eq(Term::Zero, Term::Zero));
        assert!(sent_level(&Ordinal::zero(), &base));
        let tr1 = encode_formula(&Formula::Tr(Term::Num(base.clone())));
        assert!(!sent_level(&Ordinal::zero(), &tr1));
        assert!(sent_level(&Ordinal::one(), &tr1));
        // iterated ascriptions all sit below omega
        let mut c = base;
        for _ in 0..10 {
            c = encode_formula(&Formula::Tr(Term::Num(c)));
            assert!(sent_level(&Ordinal::omega(), &c));
        }
        assert!(!sent_level(&Ordinal::from_nat(5), &c));
    }

    #[test]
    fn sent_level_monotone() {
        let base = encode_formula(&Formula::Tr(Term::Num(encode_formula(&Formula::Eq(
            Term::Zero,
            Term::Zero,
        )))));
        let alphas = [
            Ordinal::one(),
            Ordinal::from_nat(2),
            Ordinal::omega(),
            Ordinal::omega_tower(2),
        ];
        for w in alphas.windows(2) {
            if sent_level(&w[0], &base) {
                assert!(sent_level(&w[1], &base));
            }
        }
    }
}
