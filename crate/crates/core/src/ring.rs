//! Exact arithmetic in the ring A = Z[q^{1/2}, q^{-1/2}].
//!
//! Elements are stored as Laurent polynomials in v = q^{1/2}: exponents are
//! integers counting powers of v (so q itself has exponent 2), coefficients
//! are arbitrary-precision integers.  All operations are pure and return
//! canonical forms (no zero coefficients are ever stored).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// A Laurent polynomial in v = q^{1/2} with integer coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// The monomial v^e.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(e, BigInt::one())
    }

    /// The monomial q^e = v^{2e}.
    pub fn q_pow(e: i64) -> Self {
        Self::v_pow(2 * e)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c: BigInt = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::monomial(0, n)
    }

    /// (-1)^e as a constant.
    pub fn sign(e: usize) -> Self {
        if e % 2 == 0 {
            Self::one()
        } else {
            -&Self::one()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of v^e.
    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(terms: &mut BTreeMap<i64, BigInt>, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c);
        }
        LaurentPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, &(-c));
        }
        LaurentPoly { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                Self::insert_add(&mut terms, e1 + e2, &(c1 * c2));
            }
        }
        LaurentPoly { terms }
    }

    /// Multiply by the monomial v^e.
    pub fn shift(&self, e: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    /// The ring automorphism q^{1/2} -> q^{-1/2}: every exponent is negated.
    pub fn bar(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-*e, c.clone())).collect() }
    }

    /// Evaluation at q^{1/2} = 1 (the sum of all coefficients).
    pub fn specialize_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True if this element lies in Z[q]: all exponents even and non-negative.
    pub fn is_q_polynomial(&self) -> bool {
        self.terms.keys().all(|e| *e >= 0 && e % 2 == 0)
    }

    /// Degree as a polynomial in q, for elements of Z[q].  None for 0.
    pub fn q_degree(&self) -> Option<i64> {
        self.max_exp().map(|e| e / 2)
    }

    /// Substitute q -> q^{-1} (used when expanding the C-basis): v^e -> v^{-e}.
    /// Identical to `bar`; named separately where the intent is substitution.
    pub fn q_inverted(&self) -> Self {
        self.bar()
    }

    /// Exact division, if `other` divides `self` in Z[v, v^{-1}].
    ///
    /// Since v is a unit, both operands are normalized to polynomials in v
    /// and long division is performed with exact integer coefficient checks.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let a_shift = self.min_exp().unwrap();
        let b_shift = other.min_exp().unwrap();
        let mut rem: BTreeMap<i64, BigInt> = self.shift(-a_shift).terms;
        let b = other.shift(-b_shift);
        let b_deg = b.max_exp().unwrap();
        let b_lead = b.coeff(b_deg);
        let mut quot: BTreeMap<i64, BigInt> = BTreeMap::new();
        while let Some((&r_deg, r_lead)) = rem.iter().next_back() {
            if r_deg < b_deg {
                return None;
            }
            let (q, r) = num_integer::div_rem_bigint(r_lead, &b_lead);
            if !r.is_zero() {
                return None;
            }
            let shift = r_deg - b_deg;
            for (e, c) in &b.terms {
                Self::insert_add(&mut rem, e + shift, &(-(c * &q)));
            }
            Self::insert_add(&mut quot, shift, &q);
        }
        Some(LaurentPoly { terms: quot }.shift(a_shift - b_shift))
    }
}

// Small shim: num-bigint's BigInt division truncates; we need quotient and
// remainder together for the exactness check.
mod num_integer {
    use num_bigint::BigInt;
    pub fn div_rem_bigint(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        (a / b, a % b)
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if *e == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "v^{e}")?;
            } else {
                write!(f, "{a}*v^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// JSON form: list of [exponent_in_halves, coefficient-as-decimal-string]
// pairs sorted by exponent.  Coefficients are strings so that values beyond
// the double-precision range survive a round trip.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(*e, c.to_string()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a list of [exponent, coefficient-string] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut terms = BTreeMap::new();
                while let Some((e, c)) = seq.next_element::<(i64, String)>()? {
                    let c: BigInt = c.parse().map_err(de::Error::custom)?;
                    if !c.is_zero() {
                        terms.insert(e, c);
                    }
                }
                Ok(LaurentPoly { terms })
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        pairs.iter().fold(LaurentPoly::zero(), |acc, (e, c)| {
            acc.add(&LaurentPoly::monomial(*e, *c))
        })
    }

    #[test]
    fn add_examples() {
        // q^{1/2} + q^{-1/2}
        let s = LaurentPoly::v_pow(1).add(&LaurentPoly::v_pow(-1));
        assert_eq!(s, lp(&[(1, 1), (-1, 1)]));
        // p + (-p) = 0
        let p = lp(&[(0, 1), (2, 3), (-4, -7)]);
        assert!(p.add(&p.neg()).is_zero());
        // (1+q) + q = 1 + 2q
        assert_eq!(lp(&[(0, 1), (2, 1)]).add(&lp(&[(2, 1)])), lp(&[(0, 1), (2, 2)]));
    }

    #[test]
    fn mul_examples() {
        assert!(LaurentPoly::v_pow(1).mul(&LaurentPoly::v_pow(-1)).is_one());
        // (1+q)(1-q) = 1 - q^2
        let a = lp(&[(0, 1), (2, 1)]);
        let b = lp(&[(0, 1), (2, -1)]);
        assert_eq!(a.mul(&b), lp(&[(0, 1), (4, -1)]));
        assert!(LaurentPoly::zero().mul(&a).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::v_pow(1).bar(), LaurentPoly::v_pow(-1));
        assert_eq!(LaurentPoly::from_int(5).bar(), LaurentPoly::from_int(5));
        let p = lp(&[(2, 1), (-2, 1)]);
        assert_eq!(p.bar(), p);
    }

    #[test]
    fn specialize_examples() {
        assert_eq!(lp(&[(0, 1), (2, 1)]).specialize_one(), BigInt::from(2));
        assert_eq!(lp(&[(1, 1), (-1, -1)]).specialize_one(), BigInt::from(0));
        assert_eq!(lp(&[(3, -1)]).specialize_one(), BigInt::from(-1));
    }

    #[test]
    fn div_exact_roundtrip() {
        let a = lp(&[(-3, 2), (0, 5), (4, -1)]);
        let b = lp(&[(-1, 1), (2, 3)]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        // 1+q is not divisible by 2
        assert!(lp(&[(0, 1), (2, 1)]).div_exact(&lp(&[(0, 2)])).is_none());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i64..6, -9i64..9), 0..6)
            .prop_map(|v| lp(&v.iter().map(|(e, c)| (*e, *c)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn bar_is_ring_homomorphism(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.add(&b).bar(), a.bar().add(&b.bar()));
            prop_assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
            prop_assert_eq!(a.bar().bar(), a);
        }

        #[test]
        fn specialize_is_ring_homomorphism(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.add(&b).specialize_one(), a.specialize_one() + b.specialize_one());
            prop_assert_eq!(a.mul(&b).specialize_one(), a.specialize_one() * b.specialize_one());
        }

        #[test]
        fn serde_roundtrip(a in arb_poly()) {
            let s = serde_json::to_string(&a).unwrap();
            let back: LaurentPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(a, back);
        }
    }
}
