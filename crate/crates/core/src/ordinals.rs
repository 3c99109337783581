//! Ordinal notations below Γ₀ in Veblen normal form.
//!
//! A notation is a weakly decreasing sum of Veblen terms `phi(a, b)`, with the
//! base case `phi(0, b) = w^b`. The empty sum is 0. Constructors normalize, so
//! every reachable `Ordinal` value is in normal form; `from_parts` validates
//! raw input and rejects non-normal shapes.

use crate::pairing::{pair, unpair};
use num_bigint::BigUint;
use num_traits::One;
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VebTerm {
    pub a: Ordinal,
    pub b: Ordinal,
}

/// An ordinal below Γ₀, as a sum of Veblen terms in weakly decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ordinal {
    terms: Vec<VebTerm>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrdClass {
    Zero,
    Successor(Ordinal),
    Limit,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum OrdError {
    #[error("notation is not in normal form")]
    NotNormal,
    #[error("ordinal parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn term_ord(t: &VebTerm) -> Ordinal {
    Ordinal {
        terms: vec![t.clone()],
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn one() -> Self {
        Ordinal {
            terms: vec![VebTerm {
                a: Ordinal::zero(),
                b: Ordinal::zero(),
            }],
        }
    }

    pub fn omega() -> Self {
        Ordinal::veblen(&Ordinal::zero(), &Ordinal::one())
    }

    pub fn from_nat(n: u64) -> Self {
        let unit = VebTerm {
            a: Ordinal::zero(),
            b: Ordinal::zero(),
        };
        Ordinal {
            terms: std::iter::repeat(unit).take(n as usize).collect(),
        }
    }

    /// The natural number this notation denotes, if it is finite.
    pub fn nat_value(&self) -> Option<u64> {
        let unit = VebTerm {
            a: Ordinal::zero(),
            b: Ordinal::zero(),
        };
        if self.terms.iter().all(|t| *t == unit) {
            Some(self.terms.len() as u64)
        } else {
            None
        }
    }

    pub fn terms(&self) -> &[VebTerm] {
        &self.terms
    }

    /// Builds a notation from raw parts, rejecting anything not in normal form.
    pub fn from_parts(terms: Vec<VebTerm>) -> Result<Self, OrdError> {
        let o = Ordinal { terms };
        if o.is_normal() {
            Ok(o)
        } else {
            Err(OrdError::NotNormal)
        }
    }

    fn is_normal(&self) -> bool {
        for t in &self.terms {
            if !t.a.is_normal() || !t.b.is_normal() {
                return false;
            }
            // a fixed-point collapse must have been applied already
            if t.b.terms.len() == 1 && t.b.terms[0].a.compare(&t.a) == Ordering::Greater {
                return false;
            }
        }
        self.terms
            .windows(2)
            .all(|w| term_cmp(&w[0], &w[1]) != Ordering::Less)
    }

    /// Total order on notations, agreeing with the order of the denoted
    /// ordinals.
    pub fn compare(&self, other: &Ordinal) -> Ordering {
        for (s, t) in self.terms.iter().zip(other.terms.iter()) {
            match term_cmp(s, t) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    pub fn lt(&self, other: &Ordinal) -> bool {
        self.compare(other) == Ordering::Less
    }

    /// Normal-form ordinal sum; smaller left summands are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        if other.is_zero() {
            return self.clone();
        }
        let lead = &other.terms[0];
        let mut terms: Vec<VebTerm> = self
            .terms
            .iter()
            .filter(|t| term_cmp(t, lead) != Ordering::Less)
            .cloned()
            .collect();
        terms.extend(other.terms.iter().cloned());
        Ordinal { terms }
    }

    /// Ordinal multiplied by a natural number.
    pub fn times_nat(&self, n: u64) -> Ordinal {
        let mut acc = Ordinal::zero();
        for _ in 0..n {
            acc = acc.add(self);
        }
        acc
    }

    /// `phi(a, b)`, collapsing fixed points: if `b = phi(a', b')` with
    /// `a' > a` then `phi(a, b) = b`.
    pub fn veblen(a: &Ordinal, b: &Ordinal) -> Ordinal {
        if b.terms.len() == 1 && b.terms[0].a.compare(a) == Ordering::Greater {
            return b.clone();
        }
        Ordinal {
            terms: vec![VebTerm {
                a: a.clone(),
                b: b.clone(),
            }],
        }
    }

    /// `w^a = phi(0, a)`.
    pub fn omega_pow(a: &Ordinal) -> Ordinal {
        Ordinal::veblen(&Ordinal::zero(), a)
    }

    /// Last exponent of the Cantor normal form: `e(w^h1 + ... + w^hn) = hn`,
    /// `e(0) = 0`.
    pub fn e_of(&self) -> Ordinal {
        match self.terms.last() {
            None => Ordinal::zero(),
            Some(t) => exponent_of(t),
        }
    }

    /// Head of the Cantor normal form: everything except the last summand.
    pub fn h_of(&self) -> Ordinal {
        if self.terms.is_empty() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: self.terms[..self.terms.len() - 1].to_vec(),
        }
    }

    pub fn classify(&self) -> OrdClass {
        match self.terms.last() {
            None => OrdClass::Zero,
            Some(t) => {
                if t.a.is_zero() && t.b.is_zero() {
                    OrdClass::Successor(Ordinal {
                        terms: self.terms[..self.terms.len() - 1].to_vec(),
                    })
                } else {
                    OrdClass::Limit
                }
            }
        }
    }

    /// `w_0 = 1`, `w_{n+1} = w^(w_n)`.
    pub fn omega_tower(n: u32) -> Ordinal {
        let mut o = Ordinal::one();
        for _ in 0..n {
            o = Ordinal::omega_pow(&o);
        }
        o
    }

    /// `gamma_0 = w`, `gamma_{n+1} = phi(gamma_n, 0)`.
    pub fn gamma_seq(n: u32) -> Ordinal {
        let mut o = Ordinal::omega();
        for _ in 0..n {
            o = Ordinal::veblen(&o, &Ordinal::zero());
        }
        o
    }

    /// Rebuilds the notation through the normalizing constructors.
    pub fn normalize(&self) -> Ordinal {
        let mut acc = Ordinal::zero();
        for t in &self.terms {
            let single = Ordinal::veblen(&t.a.normalize(), &t.b.normalize());
            acc = acc.add(&single);
        }
        acc
    }

    /// Numeric code of the notation: `0` for zero, otherwise
    /// `1 + pair(pair(code a, code b), code rest)`.
    pub fn code(&self) -> BigUint {
        fn go(terms: &[VebTerm]) -> BigUint {
            match terms.split_first() {
                None => BigUint::ZERO,
                Some((t, rest)) => {
                    pair(&pair(&t.a.code(), &t.b.code()), &go(rest)) + BigUint::one()
                }
            }
        }
        go(&self.terms)
    }

    /// Decodes a numeric code, returning `None` on anything that is not the
    /// code of a normal-form notation.
    pub fn decode(code: &BigUint) -> Option<Ordinal> {
        fn go(code: &BigUint, fuel: &mut u32) -> Option<Vec<VebTerm>> {
            if *fuel == 0 {
                return None;
            }
            *fuel -= 1;
            if code == &BigUint::ZERO {
                return Some(Vec::new());
            }
            let (t, rest) = unpair(&(code - BigUint::one()));
            let (ca, cb) = unpair(&t);
            let a = Ordinal {
                terms: go(&ca, fuel)?,
            };
            let b = Ordinal {
                terms: go(&cb, fuel)?,
            };
            let mut terms = vec![VebTerm { a, b }];
            terms.extend(go(&rest, fuel)?);
            Some(terms)
        }
        let mut fuel = 100_000;
        let terms = go(code, &mut fuel)?;
        Ordinal::from_parts(terms).ok()
    }

    pub fn parse(text: &str) -> Result<Ordinal, OrdError> {
        OrdParser {
            chars: text.as_bytes(),
            pos: 0,
        }
        .parse_full()
    }
}

/// A code that is provably not the code of any normal-form notation; used as
/// the absorbing result of ordinal functions on garbage input.
pub fn invalid_ord_sentinel() -> &'static BigUint {
    static CELL: OnceLock<BigUint> = OnceLock::new();
    CELL.get_or_init(|| {
        // raw code of the increasing (hence non-normal) sum 1 + w
        let one = Ordinal::one().code();
        let omega = Ordinal::omega().code();
        let t1 = unpair(&(one.clone() - BigUint::one())).0;
        let t2 = unpair(&(omega - BigUint::one())).0;
        let inner = pair(&t2, &BigUint::ZERO) + BigUint::one();
        let raw = pair(&t1, &inner) + BigUint::one();
        debug_assert!(Ordinal::decode(&raw).is_none());
        raw
    })
}

/// Compares the ordinals denoted by two Veblen terms.
fn term_cmp(s: &VebTerm, t: &VebTerm) -> Ordering {
    match s.a.compare(&t.a) {
        Ordering::Equal => s.b.compare(&t.b),
        Ordering::Less => match s.b.compare(&term_ord(t)) {
            Ordering::Less | Ordering::Equal => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
        },
        Ordering::Greater => match term_ord(s).compare(&t.b) {
            Ordering::Less | Ordering::Equal => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
        },
    }
}

fn exponent_of(t: &VebTerm) -> Ordinal {
    if t.a.is_zero() {
        t.b.clone()
    } else {
        // phi(a, b) with a > 0 is a fixed point of w-exponentiation
        term_ord(t)
    }
}

struct OrdParser<'a> {
    chars: &'a [u8],
    pos: usize,
}

impl<'a> OrdParser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, OrdError> {
        Err(OrdError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_full(&mut self) -> Result<Ordinal, OrdError> {
        let o = self.parse_sum()?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return self.err("trailing input");
        }
        Ok(o)
    }

    fn parse_sum(&mut self) -> Result<Ordinal, OrdError> {
        let mut acc = self.parse_item()?;
        while self.eat(b'+') {
            let next = self.parse_item()?;
            acc = acc.add(&next);
        }
        Ok(acc)
    }

    fn parse_item(&mut self) -> Result<Ordinal, OrdError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.eat(b'^') {
                    let e = self.parse_item()?;
                    Ok(Ordinal::omega_pow(&e))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(b'p') => {
                let rest = &self.chars[self.pos..];
                if rest.starts_with(b"phi") {
                    self.pos += 3;
                    if !self.eat(b'(') {
                        return self.err("expected '(' after phi");
                    }
                    let a = self.parse_sum()?;
                    if !self.eat(b',') {
                        return self.err("expected ',' in phi");
                    }
                    let b = self.parse_sum()?;
                    if !self.eat(b')') {
                        return self.err("expected ')' after phi");
                    }
                    Ok(Ordinal::veblen(&a, &b))
                } else {
                    self.err("unknown name")
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.chars[start..self.pos]).unwrap();
                let n: u64 = text
                    .parse()
                    .map_err(|_| OrdError::Parse {
                        pos: start,
                        msg: "numeral too large".into(),
                    })?;
                Ok(Ordinal::from_nat(n))
            }
            Some(b'(') => {
                self.pos += 1;
                let o = self.parse_sum()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(o)
            }
            _ => self.err("expected ordinal"),
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let unit = VebTerm {
            a: Ordinal::zero(),
            b: Ordinal::zero(),
        };
        let mut i = 0;
        let mut first = true;
        while i < self.terms.len() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let t = &self.terms[i];
            if *t == unit {
                // run of ones prints as a decimal numeral
                let mut k = 0;
                while i < self.terms.len() && self.terms[i] == unit {
                    k += 1;
                    i += 1;
                }
                write!(f, "{k}")?;
                continue;
            }
            if t.a.is_zero() {
                if t.b == Ordinal::one() {
                    write!(f, "w")?;
                } else if t.b.terms.len() == 1 && t.b.terms[0] != unit || t.b.terms.len() > 1 {
                    write!(f, "w^({})", t.b)?;
                } else {
                    write!(f, "w^{}", t.b)?;
                }
            } else {
                write!(f, "phi({},{})", t.a, t.b)?;
            }
            i += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn basic_comparisons() {
        assert_eq!(o("w^0").compare(&o("w")), Ordering::Less);
        assert_eq!(o("w^0"), Ordinal::one());
        // phi(1,0) is the first epsilon number, above every omega tower
        assert_eq!(o("phi(1,0)").compare(&o("w^w")), Ordering::Greater);
        assert_eq!(o("w+1").compare(&o("w")), Ordering::Greater);
        assert_eq!(o("1+w"), o("w"));
    }

    #[test]
    fn addition() {
        assert_eq!(Ordinal::one().add(&Ordinal::omega()), Ordinal::omega());
        assert_eq!(Ordinal::omega().add(&Ordinal::one()), o("w+1"));
        assert_eq!(o("w^2+w").add(&o("w^2")), o("w^2+w^2"));
        assert!(o("w^2+w^2").compare(&o("w^2+w")) == Ordering::Greater);
    }

    #[test]
    fn omega_pow_of_zero_is_one() {
        assert_eq!(Ordinal::omega_pow(&Ordinal::zero()), Ordinal::one());
    }

    #[test]
    fn veblen_collapse() {
        // phi(0, phi(1,0)) = phi(1,0)
        let eps0 = o("phi(1,0)");
        assert_eq!(Ordinal::omega_pow(&eps0), eps0);
        // but phi(1, phi(1,0)) stays
        let v = Ordinal::veblen(&Ordinal::one(), &eps0);
        assert_eq!(v.terms().len(), 1);
        assert_eq!(v.terms()[0].b, eps0);
    }

    #[test]
    fn e_h_examples() {
        assert_eq!(o("w^w").e_of(), Ordinal::omega());
        assert_eq!(o("w^w").h_of(), Ordinal::zero());
        assert_eq!(o("w^2+w").e_of(), Ordinal::one());
        assert_eq!(o("w^2+w").h_of(), o("w^2"));
        assert_eq!(Ordinal::zero().e_of(), Ordinal::zero());
        assert_eq!(Ordinal::zero().h_of(), Ordinal::zero());
    }

    #[test]
    fn towers_and_gammas() {
        assert_eq!(Ordinal::omega_tower(0), Ordinal::one());
        assert_eq!(Ordinal::omega_tower(1), Ordinal::omega());
        assert_eq!(Ordinal::omega_tower(2), o("w^w"));
        assert_eq!(Ordinal::gamma_seq(0), Ordinal::omega());
        assert_eq!(Ordinal::gamma_seq(1), o("phi(w,0)"));
        assert!(Ordinal::gamma_seq(1).lt(&Ordinal::gamma_seq(2)));
    }

    #[test]
    fn classification() {
        assert_eq!(Ordinal::zero().classify(), OrdClass::Zero);
        assert_eq!(o("w+1").classify(), OrdClass::Successor(Ordinal::omega()));
        assert_eq!(o("phi(1,0)").classify(), OrdClass::Limit);
        assert_eq!(o("w").classify(), OrdClass::Limit);
        assert_eq!(o("3").classify(), OrdClass::Successor(o("2")));
    }

    #[test]
    fn code_roundtrip() {
        for s in ["0", "1", "w", "w^w+w+3", "phi(w,0)+phi(1,1)+w^2", "phi(2,phi(1,0))"] {
            let x = o(s);
            assert_eq!(Ordinal::decode(&x.code()), Some(x));
        }
        assert!(Ordinal::decode(invalid_ord_sentinel()).is_none());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "5", "w", "w+2", "w^w", "w^(w+1)+w^2+1", "phi(w,0)", "phi(1,0)+w"] {
            let x = o(s);
            assert_eq!(o(&x.to_string()), x);
        }
    }

    #[test]
    fn from_parts_rejects_non_normal() {
        // increasing sum 1 + w
        let one_t = VebTerm {
            a: Ordinal::zero(),
            b: Ordinal::zero(),
        };
        let omega_t = VebTerm {
            a: Ordinal::zero(),
            b: Ordinal::one(),
        };
        assert_eq!(
            Ordinal::from_parts(vec![one_t, omega_t.clone()]),
            Err(OrdError::NotNormal)
        );
        // uncollapsed fixed point phi(0, phi(1,0))
        let eps = VebTerm {
            a: Ordinal::one(),
            b: Ordinal::zero(),
        };
        let bad = VebTerm {
            a: Ordinal::zero(),
            b: Ordinal { terms: vec![eps] },
        };
        assert_eq!(Ordinal::from_parts(vec![bad]), Err(OrdError::NotNormal));
    }
}
