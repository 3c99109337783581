//! Gödel coding of terms and formulas.
//!
//! Each constructor is coded as `1 + pair(kind, pair(tag, payload))` where
//! `kind` distinguishes terms from formulas. The shift by one keeps 0 outside
//! the image, so 0 serves as the absorbing result of syntactic functions on
//! garbage input. Decoding is total on the image and inverse to encoding;
//! distinct trees get distinct codes.

use crate::pairing::{pack_list, pair, unpack_list, unpair};
use crate::syntax::{FnSym, Formula, PredSym, Term};
use num_bigint::BigUint;
use num_traits::One;

pub type Code = BigUint;

const KIND_TERM: u32 = 0;
const KIND_FORMULA: u32 = 1;

const T_VAR: u32 = 0;
const T_ZERO: u32 = 1;
const T_SUCC: u32 = 2;
const T_PLUS: u32 = 3;
const T_TIMES: u32 = 4;
const T_NUM: u32 = 5;
const T_FN: u32 = 6;

const F_BOT: u32 = 0;
const F_EQ: u32 = 1;
const F_TR: u32 = 2;
const F_FALS: u32 = 3;
const F_P: u32 = 4;
const F_NEG: u32 = 5;
const F_OR: u32 = 6;
const F_COND: u32 = 7;
const F_ALL: u32 = 8;
const F_PRIM: u32 = 9;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decoded {
    Term(Term),
    Formula(Formula),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("code 0 is not in the image of the coding")]
    Sentinel,
    #[error("unknown {what} tag {tag}")]
    BadTag { what: &'static str, tag: u64 },
    #[error("arity mismatch while decoding")]
    Arity,
    #[error("variable index out of range")]
    VarRange,
}

fn wrap(kind: u32, tag: u32, payload: BigUint) -> Code {
    pair(
        &BigUint::from(kind),
        &pair(&BigUint::from(tag), &payload),
    ) + BigUint::one()
}

pub fn encode_term(t: &Term) -> Code {
    match t {
        Term::Var(v) => wrap(KIND_TERM, T_VAR, BigUint::from(*v)),
        Term::Zero => wrap(KIND_TERM, T_ZERO, BigUint::ZERO),
        Term::Succ(s) => wrap(KIND_TERM, T_SUCC, encode_term(s)),
        Term::Plus(a, b) => wrap(KIND_TERM, T_PLUS, pair(&encode_term(a), &encode_term(b))),
        Term::Times(a, b) => wrap(KIND_TERM, T_TIMES, pair(&encode_term(a), &encode_term(b))),
        Term::Num(n) => wrap(KIND_TERM, T_NUM, n.clone()),
        Term::Fn(sym, args) => {
            let codes: Vec<Code> = args.iter().map(encode_term).collect();
            wrap(
                KIND_TERM,
                T_FN,
                pair(&BigUint::from(fn_index(*sym)), &pack_list(&codes)),
            )
        }
    }
}

pub fn encode_formula(f: &Formula) -> Code {
    match f {
        Formula::Bot => wrap(KIND_FORMULA, F_BOT, BigUint::ZERO),
        Formula::Eq(s, t) => wrap(KIND_FORMULA, F_EQ, pair(&encode_term(s), &encode_term(t))),
        Formula::Tr(t) => wrap(KIND_FORMULA, F_TR, encode_term(t)),
        Formula::Fals(t) => wrap(KIND_FORMULA, F_FALS, encode_term(t)),
        Formula::P(t) => wrap(KIND_FORMULA, F_P, encode_term(t)),
        Formula::Neg(a) => wrap(KIND_FORMULA, F_NEG, encode_formula(a)),
        Formula::Or(a, b) => wrap(
            KIND_FORMULA,
            F_OR,
            pair(&encode_formula(a), &encode_formula(b)),
        ),
        Formula::Cond(a, b) => wrap(
            KIND_FORMULA,
            F_COND,
            pair(&encode_formula(a), &encode_formula(b)),
        ),
        Formula::All(v, a) => wrap(
            KIND_FORMULA,
            F_ALL,
            pair(&BigUint::from(*v), &encode_formula(a)),
        ),
        Formula::Prim(p, args) => {
            let codes: Vec<Code> = args.iter().map(encode_term).collect();
            wrap(
                KIND_FORMULA,
                F_PRIM,
                pair(&BigUint::from(pred_index(*p)), &pack_list(&codes)),
            )
        }
    }
}

pub fn fn_index(sym: FnSym) -> u32 {
    FnSym::all().iter().position(|s| *s == sym).unwrap() as u32
}

pub fn pred_index(p: PredSym) -> u32 {
    PredSym::all().iter().position(|s| *s == p).unwrap() as u32
}

fn to_u64(n: &BigUint) -> Result<u64, CodecError> {
    u64::try_from(n).map_err(|_| CodecError::VarRange)
}

pub fn decode(code: &Code) -> Result<Decoded, CodecError> {
    if code == &BigUint::ZERO {
        return Err(CodecError::Sentinel);
    }
    let (kind, rest) = unpair(&(code - BigUint::one()));
    let (tag, payload) = unpair(&rest);
    let kind = to_u64(&kind)?;
    let tag64 = to_u64(&tag)?;
    match kind {
        0 => Ok(Decoded::Term(decode_term_tagged(tag64, &payload)?)),
        1 => Ok(Decoded::Formula(decode_formula_tagged(tag64, &payload)?)),
        _ => Err(CodecError::BadTag {
            what: "kind",
            tag: kind,
        }),
    }
}

pub fn decode_term(code: &Code) -> Result<Term, CodecError> {
    match decode(code)? {
        Decoded::Term(t) => Ok(t),
        Decoded::Formula(_) => Err(CodecError::BadTag {
            what: "term",
            tag: KIND_FORMULA as u64,
        }),
    }
}

pub fn decode_formula(code: &Code) -> Result<Formula, CodecError> {
    match decode(code)? {
        Decoded::Formula(f) => Ok(f),
        Decoded::Term(_) => Err(CodecError::BadTag {
            what: "formula",
            tag: KIND_TERM as u64,
        }),
    }
}

fn decode_term_tagged(tag: u64, payload: &BigUint) -> Result<Term, CodecError> {
    match tag as u32 {
        T_VAR => {
            let v = to_u64(payload)?;
            let v = u32::try_from(v).map_err(|_| CodecError::VarRange)?;
            Ok(Term::Var(v))
        }
        T_ZERO => Ok(Term::Zero),
        T_SUCC => Ok(Term::Succ(Box::new(decode_term(payload)?))),
        T_PLUS => {
            let (a, b) = unpair(payload);
            Ok(Term::Plus(
                Box::new(decode_term(&a)?),
                Box::new(decode_term(&b)?),
            ))
        }
        T_TIMES => {
            let (a, b) = unpair(payload);
            Ok(Term::Times(
                Box::new(decode_term(&a)?),
                Box::new(decode_term(&b)?),
            ))
        }
        T_NUM => Ok(Term::Num(payload.clone())),
        T_FN => {
            let (idx, list) = unpair(payload);
            let idx = to_u64(&idx)? as usize;
            let sym = *FnSym::all().get(idx).ok_or(CodecError::BadTag {
                what: "function symbol",
                tag: idx as u64,
            })?;
            let args: Result<Vec<Term>, _> =
                unpack_list(&list).iter().map(decode_term).collect();
            let args = args?;
            if args.len() != sym.arity() {
                return Err(CodecError::Arity);
            }
            Ok(Term::Fn(sym, args))
        }
        other => Err(CodecError::BadTag {
            what: "term",
            tag: other as u64,
        }),
    }
}

fn decode_formula_tagged(tag: u64, payload: &BigUint) -> Result<Formula, CodecError> {
    match tag as u32 {
        F_BOT => Ok(Formula::Bot),
        F_EQ => {
            let (a, b) = unpair(payload);
            Ok(Formula::Eq(decode_term(&a)?, decode_term(&b)?))
        }
        F_TR => Ok(Formula::Tr(decode_term(payload)?)),
        F_FALS => Ok(Formula::Fals(decode_term(payload)?)),
        F_P => Ok(Formula::P(decode_term(payload)?)),
        F_NEG => Ok(Formula::neg(decode_formula(payload)?)),
        F_OR => {
            let (a, b) = unpair(payload);
            Ok(Formula::or(decode_formula(&a)?, decode_formula(&b)?))
        }
        F_COND => {
            let (a, b) = unpair(payload);
            Ok(Formula::cond(decode_formula(&a)?, decode_formula(&b)?))
        }
        F_ALL => {
            let (v, a) = unpair(payload);
            let v = u32::try_from(to_u64(&v)?).map_err(|_| CodecError::VarRange)?;
            Ok(Formula::all(v, decode_formula(&a)?))
        }
        F_PRIM => {
            let (idx, list) = unpair(payload);
            let idx = to_u64(&idx)? as usize;
            let p = *PredSym::all().get(idx).ok_or(CodecError::BadTag {
                what: "predicate symbol",
                tag: idx as u64,
            })?;
            let args: Result<Vec<Term>, _> =
                unpack_list(&list).iter().map(decode_term).collect();
            let args = args?;
            if args.len() != p.arity() {
                return Err(CodecError::Arity);
            }
            Ok(Formula::Prim(p, args))
        }
        other => Err(CodecError::BadTag {
            what: "formula",
            tag: other as u64,
        }),
    }
}

/// Code of the negation of the formula coded by `c`; 0 on garbage.
pub fn neg_code(c: &Code) -> Code {
    match decode_formula(c) {
        Ok(f) => encode_formula(&Formula::neg(f)),
        Err(_) => BigUint::ZERO,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Lang;

    #[test]
    fn roundtrip_examples() {
        let samples = [
            "0=0",
            "Tr(q(0=0))",
            "all v0. (Tr(v0) | !Tr(v0))",
            "P(sub(q(Tr(v0)), q(v0), num(4)))",
            "Sent(v0) & v0 < v1",
        ];
        for s in samples {
            let f = Formula::parse(s, Lang::LTArrowP).unwrap();
            assert_eq!(decode_formula(&encode_formula(&f)).unwrap(), f);
        }
        let t = Term::parse("sub(q(Tr(v0)), q(v0), num(4))", Lang::LT).unwrap();
        assert_eq!(decode_term(&encode_term(&t)).unwrap(), t);
    }

    #[test]
    fn sentinel_rejected() {
        assert!(decode(&BigUint::ZERO).is_err());
    }

    #[test]
    fn distinct_trees_distinct_codes() {
        let f1 = Formula::Eq(Term::Zero, Term::Zero);
        let f2 = Formula::Eq(Term::Zero, Term::Num(BigUint::ZERO));
        assert_ne!(encode_formula(&f1), encode_formula(&f2));
    }

    #[test]
    fn subterm_codes_strictly_smaller() {
        // guarantees termination of code-driven recursion in eval
        let t = Term::parse("num(pair(3,4))", Lang::LN).unwrap();
        let whole = encode_term(&t);
        if let Term::Fn(_, args) = &t {
            for a in args {
                assert!(encode_term(a) < whole);
            }
        }
    }
}
