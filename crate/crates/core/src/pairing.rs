//! Cantor pairing on arbitrary-precision naturals.
//!
//! `pair` is the usual diagonal bijection ℕ×ℕ → ℕ. Codes built from it grow
//! quadratically per level, which stays comfortably within big-integer range
//! at the nesting depths used anywhere in this crate.

use num_bigint::BigUint;
use num_traits::One;

pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + BigUint::one())) / 2u32 + b
}

/// Inverse of [`pair`]; total on ℕ.
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z+1)-1)/2), t = w(w+1)/2, b = z-t, a = w-b
    let r = (z * 8u32 + BigUint::one()).sqrt();
    let w = (r - BigUint::one()) / 2u32;
    let t = (&w * (&w + BigUint::one())) / 2u32;
    let b = z - &t;
    let a = &w - &b;
    (a, b)
}

/// Encodes a list by folding `pair`: `nil = 0`, `cons(x, r) = 1 + pair(x, r)`.
pub fn pack_list(items: &[BigUint]) -> BigUint {
    let mut acc = BigUint::ZERO;
    for item in items.iter().rev() {
        acc = pair(item, &acc) + BigUint::one();
    }
    acc
}

pub fn unpack_list(code: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut rest = code.clone();
    while rest != BigUint::ZERO {
        let (head, tail) = unpair(&(rest - BigUint::one()));
        out.push(head);
        rest = tail;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpair_inverts_pair() {
        for a in 0u32..40 {
            for b in 0u32..40 {
                let (x, y) = unpair(&pair(&BigUint::from(a), &BigUint::from(b)));
                assert_eq!(x, BigUint::from(a));
                assert_eq!(y, BigUint::from(b));
            }
        }
    }

    #[test]
    fn pair_surjective_prefix() {
        // every natural decodes to some pair
        for z in 0u32..200 {
            let z = BigUint::from(z);
            let (a, b) = unpair(&z);
            assert_eq!(pair(&a, &b), z);
        }
    }

    #[test]
    fn list_roundtrip() {
        let xs: Vec<BigUint> = [3u32, 0, 17, 2].iter().map(|&n| BigUint::from(n)).collect();
        assert_eq!(unpack_list(&pack_list(&xs)), xs);
        assert_eq!(unpack_list(&pack_list(&[])), Vec::<BigUint>::new());
    }
}
