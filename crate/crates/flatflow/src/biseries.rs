//! Bivariate series truncated at a total degree, with polynomial
//! coefficients.
//!
//! A [`TruncatedBiseries`] models an element of
//! `R[[w1, w2]] / (w1, w2)^(cap+1)` where `R` is the polynomial ring in the
//! flat (or stable) variables: a finite map from exponent pairs `(i, j)`
//! with `i + j <= cap` to [`Polynomial`] coefficients. The generating-series
//! identities are checked by computing both sides in this ring and comparing
//! for equality.
//!
//! # Truncation semantics
//!
//! Writing a key with `i + j > cap` silently drops it — that is the point
//! of the quotient ring — but *combining* two series with different caps is
//! a hard error ([`Error::CapMismatch`]): equality at different truncation
//! orders means different things, and mixing them is always a bug.
//!
//! # Edge cases
//!
//! - `exp` requires a zero constant coefficient (the argument must be
//!   nilpotent in the quotient), else [`Error::NonNilpotentArgument`].
//! - `log` requires constant coefficient exactly `1`, else
//!   [`Error::BadConstantTerm`].

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{frac, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBiseries {
    cap: u32,
    coeffs: BTreeMap<(u32, u32), Polynomial>,
}

impl TruncatedBiseries {
    pub fn new(cap: u32) -> Self {
        TruncatedBiseries {
            cap,
            coeffs: BTreeMap::new(),
        }
    }

    /// The series `1`.
    pub fn one(cap: u32) -> Self {
        let mut s = Self::new(cap);
        s.add_term((0, 0), Polynomial::one());
        s
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `w1^i * w2^j` (zero if absent or beyond cap).
    pub fn coeff(&self, key: (u32, u32)) -> Polynomial {
        self.coeffs.get(&key).cloned().unwrap_or_default()
    }

    /// Keys with nonzero coefficient, in lexicographic order.
    pub fn keys(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.coeffs.keys().copied()
    }

    /// Add `p * w1^i * w2^j`; beyond-cap keys are dropped.
    pub fn add_term(&mut self, key: (u32, u32), p: Polynomial) {
        if key.0 + key.1 > self.cap || p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(p);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&p);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    fn check_cap(&self, other: &Self) -> Result<()> {
        if self.cap != other.cap {
            Err(Error::CapMismatch {
                left: self.cap,
                right: other.cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (&k, p) in &other.coeffs {
            out.add_term(k, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (&k, p) in &other.coeffs {
            out.add_term(k, p.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedBiseries {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, p.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = Self::new(self.cap);
        for (&(a1, b1), p1) in &self.coeffs {
            for (&(a2, b2), p2) in &other.coeffs {
                let key = (a1 + a2, b1 + b2);
                if key.0 + key.1 > self.cap {
                    continue;
                }
                out.add_term(key, p1.mul(p2));
            }
        }
        Ok(out)
    }

    /// Multiply by the monomial `c * w1^i * w2^j`.
    pub fn shift(&self, (i, j): (u32, u32), c: &Rat) -> Self {
        let mut out = Self::new(self.cap);
        for (&(a, b), p) in &self.coeffs {
            out.add_term((a + i, b + j), p.scale(c));
        }
        out
    }

    /// Multiply every coefficient by the polynomial `p`.
    pub fn scale_poly(&self, p: &Polynomial) -> Self {
        let mut out = Self::new(self.cap);
        for (&k, q) in &self.coeffs {
            out.add_term(k, q.mul(p));
        }
        out
    }

    /// Restrict to keys allowed by `keep` (used for "first order in w2"
    /// style comparisons).
    pub fn filter_keys(&self, keep: impl Fn((u32, u32)) -> bool) -> Self {
        TruncatedBiseries {
            cap: self.cap,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, p)| (k, p.clone()))
                .collect(),
        }
    }

    /// `exp` in the quotient ring. The constant coefficient must vanish, so
    /// the sum `1 + a + a^2/2! + ...` terminates after `cap` steps.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff((0, 0)).is_zero() {
            return Err(Error::NonNilpotentArgument);
        }
        let mut out = Self::one(self.cap);
        let mut term = Self::one(self.cap);
        for n in 1..=self.cap {
            term = term.mul(self)?;
            if term.is_zero() {
                break;
            }
            term = term.scale_rat(&frac(1, n as i64));
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `log` in the quotient ring; the constant coefficient must be `1`.
    pub fn log(&self) -> Result<Self> {
        if self.coeff((0, 0)) != Polynomial::one() {
            return Err(Error::BadConstantTerm {
                context: "biseries log",
                expected: "1",
            });
        }
        let mut x = self.clone();
        x.add_term((0, 0), Polynomial::constant(-Rat::one()));
        let mut out = Self::new(self.cap);
        let mut pow = Self::one(self.cap);
        for n in 1..=self.cap {
            pow = pow.mul(&x)?;
            if pow.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = out.add(&pow.scale_rat(&frac(sign, n as i64)))?;
        }
        Ok(out)
    }

    fn scale_rat(&self, c: &Rat) -> Self {
        TruncatedBiseries {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, p.scale(c))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use crate::rational::rat;

    fn tpoly(i: u32) -> Polynomial {
        Polynomial::var(i)
    }

    fn series(cap: u32, entries: &[((u32, u32), Polynomial)]) -> TruncatedBiseries {
        let mut s = TruncatedBiseries::new(cap);
        for (k, p) in entries {
            s.add_term(*k, p.clone());
        }
        s
    }

    #[test]
    fn truncation_drops_high_keys() {
        let s = series(2, &[((1, 2), tpoly(1)), ((1, 1), tpoly(2))]);
        assert!(s.coeff((1, 2)).is_zero());
        assert_eq!(s.coeff((1, 1)), tpoly(2));
    }

    #[test]
    fn mul_respects_cap_and_bilinearity() {
        let a = series(3, &[((1, 0), tpoly(1)), ((0, 1), Polynomial::one())]);
        let b = series(3, &[((2, 0), tpoly(2)), ((1, 1), Polynomial::one())]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.coeff((3, 0)), tpoly(1).mul(&tpoly(2)));
        assert_eq!(ab.coeff((2, 1)), tpoly(1).add(&tpoly(2)));
        assert_eq!(ab.coeff((1, 2)), Polynomial::one());
        // (1,0)+(2,0) -> fine; nothing beyond cap survives
        assert!(ab.keys().all(|(i, j)| i + j <= 3));
    }

    #[test]
    fn cap_mismatch_is_an_error() {
        let a = TruncatedBiseries::one(2);
        let b = TruncatedBiseries::one(3);
        assert_eq!(
            a.add(&b),
            Err(Error::CapMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn exp_log_roundtrip() {
        // a = w1*t1 + w2^2*t2, cap 5: log(exp(a)) == a.
        let a = series(5, &[((1, 0), tpoly(1)), ((0, 2), tpoly(2))]);
        let e = a.exp().unwrap();
        assert_eq!(e.coeff((0, 0)), Polynomial::one());
        assert_eq!(e.log().unwrap(), a);

        // exp(a)*exp(-a) == 1.
        let inv = a.neg().exp().unwrap();
        assert_eq!(e.mul(&inv).unwrap(), TruncatedBiseries::one(5));
    }

    #[test]
    fn exp_matches_hand_expansion() {
        let a = series(2, &[((1, 0), tpoly(1))]);
        let e = a.exp().unwrap();
        assert_eq!(e.coeff((1, 0)), tpoly(1));
        let half_sq = Polynomial::monomial(Monomial::var_pow(1, 2), frac(1, 2));
        assert_eq!(e.coeff((2, 0)), half_sq);
    }

    #[test]
    fn exp_rejects_constant_term() {
        let a = TruncatedBiseries::one(3);
        assert_eq!(a.exp(), Err(Error::NonNilpotentArgument));
    }

    #[test]
    fn log_rejects_wrong_constant() {
        let s = series(3, &[((0, 0), Polynomial::constant(rat(2)))]);
        assert!(matches!(s.log(), Err(Error::BadConstantTerm { .. })));
        let z = TruncatedBiseries::new(3);
        assert!(z.log().is_err());
    }

    #[test]
    fn filter_keys_keeps_cap() {
        let s = series(4, &[((1, 1), tpoly(1)), ((1, 3), tpoly(2))]);
        let f = s.filter_keys(|(_, j)| j <= 1);
        assert_eq!(f.coeff((1, 1)), tpoly(1));
        assert!(f.coeff((1, 3)).is_zero());
        assert_eq!(f.cap(), 4);
    }
}
