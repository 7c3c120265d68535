//! Sparse multivariate polynomials over exact rationals.
//!
//! [`Polynomial`] maps [`Monomial`]s to nonzero [`Rat`] coefficients in a
//! `BTreeMap`, so iteration always walks terms in the canonical display
//! order (see [`crate::monomial`]). Rendering and the JSON representation
//! both reuse that order, which is what makes command output byte-stable.
//!
//! # Key operations
//!
//! - ring arithmetic on references (`&f + &g`, `&f * &g`), plus `pow`
//! - partial derivatives ([`Polynomial::derive`]) and iterated partials
//!   evaluated at the origin ([`Polynomial::partial_at_zero`])
//! - substitution of polynomials for variables ([`Polynomial::substitute`]),
//!   with unmapped variables left alone
//! - [`euler_integrate`]: recover `F` from a closed gradient by dividing
//!   each accumulated monomial of `sum_a t_a * g_a` by its total degree
//!
//! # Design notes
//!
//! Coefficients are `BigRational`; nothing here rounds. Zero coefficients
//! are removed eagerly, so `terms.is_empty()` iff the polynomial is zero,
//! and `==` is structural equality of reduced forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rational::{factorial_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    /// The variable `x_idx`.
    pub fn var(idx: u32) -> Self {
        Self::monomial(Monomial::var(idx), Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Coefficient of `m` (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    /// Add `c * m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        // Keep the smaller operand outermost.
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Polynomial::zero();
        for (ma, ca) in small.terms() {
            for (mb, cb) in large.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// Multiply every term by `c * m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                return out;
            }
            base = base.mul(&base);
        }
    }

    /// `d/dx_idx`.
    pub fn derive(&self, idx: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            if let Some((e, rest)) = m.derive(idx) {
                out.add_term(rest, c * Rat::from_integer(e.into()));
            }
        }
        out
    }

    /// Iterated partial derivative, evaluated at the origin.
    ///
    /// `orders` maps a variable index to how many times it is differentiated;
    /// the result is `coeff(x^orders) * prod(orders!)`.
    pub fn partial_at_zero(&self, orders: &BTreeMap<u32, u32>) -> Rat {
        let m = Monomial::from_pairs(orders.iter().map(|(&i, &e)| (i, e)));
        let mut v = self.coeff(&m);
        if v.is_zero() {
            return v;
        }
        for &e in orders.values() {
            v *= factorial_rat(e);
        }
        v
    }

    /// Substitute `map[idx]` for `x_idx`; variables not in the map stay
    /// themselves. Powers of each image are computed once and cached.
    pub fn substitute(&self, map: &BTreeMap<u32, Polynomial>) -> Polynomial {
        let mut pow_cache: BTreeMap<(u32, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            let mut acc = Polynomial::constant(c.clone());
            for &(idx, e) in m.pairs() {
                let factor = match map.get(&idx) {
                    None => Polynomial::monomial(Monomial::var_pow(idx, e), Rat::one()),
                    Some(img) => pow_cache
                        .entry((idx, e))
                        .or_insert_with(|| img.pow(e))
                        .clone(),
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Set `x_idx = 0`: drop every term containing it.
    pub fn set_zero(&self, idx: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.contains(idx))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rename variables through `f` (must be injective on the support;
    /// colliding images are summed).
    pub fn reindex(&self, f: impl Fn(u32) -> u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            out.add_term(m.reindex(&f), c.clone());
        }
        out
    }

    /// Largest variable index occurring, or 0.
    pub fn max_var(&self) -> u32 {
        self.terms.keys().map(|m| m.max_var()).max().unwrap_or(0)
    }

    /// Largest total degree occurring, or 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Render in the canonical text grammar, e.g.
    /// `1/12*p1^3 - 1/2*p1*p2 + p3`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term_body(m, &c.abs(), var));
        }
        out
    }

    pub fn to_repr(&self, vars: &str) -> PolyRepr {
        PolyRepr {
            vars: vars.to_string(),
            terms: self
                .terms()
                .map(|(m, c)| TermRepr {
                    coeff: c.to_string(),
                    exps: m.pairs().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_repr(repr: &PolyRepr) -> std::result::Result<Polynomial, String> {
        let mut out = Polynomial::zero();
        for t in &repr.terms {
            let c: Rat = t
                .coeff
                .parse()
                .map_err(|e| format!("bad coefficient {:?}: {e}", t.coeff))?;
            for &(idx, _) in &t.exps {
                if idx == 0 {
                    return Err("variable indices start at 1".to_string());
                }
            }
            out.add_term(Monomial::from_pairs(t.exps.iter().copied()), c);
        }
        Ok(out)
    }
}

/// `|c| * m` rendered without sign: `p3`, `1/2*p1*p2`, `42`.
pub fn term_body(m: &Monomial, abs_coeff: &Rat, var: &str) -> String {
    if m.is_one() {
        abs_coeff.to_string()
    } else if abs_coeff.is_one() {
        m.render(var)
    } else {
        format!("{}*{}", abs_coeff, m.render(var))
    }
}

/// Serialized polynomial: coefficient strings (`"num/den"` or `"int"`) and
/// `[index, exponent]` pairs, terms in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRepr {
    pub vars: String,
    pub terms: Vec<TermRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub coeff: String,
    pub exps: Vec<(u32, u32)>,
}

/// Reconstruct `F` (with `F(0) = 0`) from its gradient.
///
/// `grad[a]` is `dF/dx_a`. Requires every component to vanish at the origin
/// and the gradient to be closed (`d g_a / dx_b == d g_b / dx_a` for all
/// pairs); then `F` is the sum over monomials `m` of
/// `coeff_m(sum_a x_a * g_a) / deg(m) * m`, and `dF/dx_a == g_a` exactly.
///
/// # Errors
///
/// [`Error::BadConstantTerm`] if some `g_a(0) != 0`;
/// [`Error::ClosednessViolation`] naming the first bad pair.
pub fn euler_integrate(grad: &BTreeMap<u32, Polynomial>) -> Result<Polynomial> {
    for g in grad.values() {
        if !g.constant_term().is_zero() {
            return Err(Error::BadConstantTerm {
                context: "euler_integrate: gradient component at the origin",
                expected: "0",
            });
        }
    }
    let idxs: Vec<u32> = grad.keys().copied().collect();
    for (i, &a) in idxs.iter().enumerate() {
        for &b in &idxs[i + 1..] {
            if grad[&a].derive(b) != grad[&b].derive(a) {
                return Err(Error::ClosednessViolation { alpha: a, beta: b });
            }
        }
    }
    let mut weighted = Polynomial::zero();
    for (&a, g) in grad {
        weighted = weighted.add(&g.mul_monomial(&Monomial::var(a), &Rat::one()));
    }
    let mut f = Polynomial::zero();
    for (m, c) in weighted.terms() {
        let deg = Rat::from_integer(m.degree().into());
        f.add_term(m.clone(), c / deg);
    }
    Ok(f)
}

impl fmt::Display for Polynomial {
    /// Uses the neutral variable name `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inherent:ident) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$inherent(rhs)
            }
        }
        impl std::ops::$trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                Polynomial::$inherent(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn tvar(i: u32) -> Polynomial {
        Polynomial::var(i)
    }

    /// `t1^2*t2` style shorthand.
    fn mono(pairs: &[(u32, u32)], c: Rat) -> Polynomial {
        Polynomial::monomial(Monomial::from_pairs(pairs.iter().copied()), c)
    }

    #[test]
    fn arithmetic_basics() {
        let f = &tvar(1) + &tvar(2);
        let g = &tvar(1) - &tvar(2);
        let prod = &f * &g;
        let expect = &mono(&[(1, 2)], rat(1)) - &mono(&[(2, 2)], rat(1));
        assert_eq!(prod, expect);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn derive_leibniz() {
        let f = mono(&[(1, 2), (2, 1)], frac(1, 2));
        let g = &tvar(1) + &mono(&[(2, 3)], rat(-1));
        let lhs = (&f * &g).derive(1);
        let rhs = &(&f.derive(1) * &g) + &(&f * &g.derive(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_replaces_and_keeps_rest() {
        // f = t1*t3; t1 -> t2^2 leaves t3 alone.
        let f = mono(&[(1, 1), (3, 1)], rat(1));
        let mut map = BTreeMap::new();
        map.insert(1, mono(&[(2, 2)], rat(1)));
        assert_eq!(f.substitute(&map), mono(&[(2, 2), (3, 1)], rat(1)));
    }

    #[test]
    fn substitute_is_ring_hom() {
        let f = &mono(&[(1, 2)], frac(1, 3)) + &tvar(2);
        let g = &tvar(1) - &mono(&[(2, 1)], rat(2));
        let mut map = BTreeMap::new();
        map.insert(1, &tvar(2) + &Polynomial::one());
        map.insert(2, mono(&[(1, 1), (2, 1)], rat(1)));
        let lhs = (&f * &g).substitute(&map);
        let rhs = &f.substitute(&map) * &g.substitute(&map);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_at_zero_counts_multiplicity() {
        // f = 1/2 t1^2 t2: d^3 f / dt1 dt1 dt2 at 0 = 1.
        let f = mono(&[(1, 2), (2, 1)], frac(1, 2));
        let mut orders = BTreeMap::new();
        orders.insert(1, 2);
        orders.insert(2, 1);
        assert_eq!(f.partial_at_zero(&orders), rat(1));
        orders.insert(2, 2);
        assert_eq!(f.partial_at_zero(&orders), rat(0));
    }

    #[test]
    fn euler_integrate_recovers_potential() {
        // F = 1/2 t1^2 t2 - t2^4/24.
        let f = &mono(&[(1, 2), (2, 1)], frac(1, 2)) + &mono(&[(2, 4)], frac(-1, 24));
        let mut grad = BTreeMap::new();
        grad.insert(1, f.derive(1));
        grad.insert(2, f.derive(2));
        assert_eq!(euler_integrate(&grad).unwrap(), f);
    }

    #[test]
    fn euler_integrate_rejects_open_gradient() {
        let mut grad = BTreeMap::new();
        grad.insert(1, tvar(2));
        grad.insert(2, Polynomial::zero());
        assert_eq!(
            euler_integrate(&grad),
            Err(Error::ClosednessViolation { alpha: 1, beta: 2 })
        );
    }

    #[test]
    fn euler_integrate_rejects_constant_component() {
        let mut grad = BTreeMap::new();
        grad.insert(1, Polynomial::one());
        assert!(matches!(
            euler_integrate(&grad),
            Err(Error::BadConstantTerm { .. })
        ));
    }

    #[test]
    fn render_golden_shape() {
        // 1/12*p1^3 - 1/2*p1*p2 + p3
        let p = &(&mono(&[(1, 3)], frac(1, 12)) + &mono(&[(1, 1), (2, 1)], frac(-1, 2)))
            + &tvar(3);
        assert_eq!(p.render("p"), "1/12*p1^3 - 1/2*p1*p2 + p3");
        assert_eq!(Polynomial::zero().render("p"), "0");
        assert_eq!(mono(&[], rat(-3)).render("p"), "-3");
        assert_eq!(
            (&mono(&[(2, 1)], rat(-1)) + &mono(&[(1, 1)], rat(-1))).render("t"),
            "-t1 - t2"
        );
    }

    #[test]
    fn repr_roundtrip() {
        let p = &mono(&[(1, 3)], frac(1, 12)) + &mono(&[(2, 1)], rat(-2));
        let repr = p.to_repr("t");
        assert_eq!(repr.vars, "t");
        assert_eq!(repr.terms[0].coeff, "1/12");
        assert_eq!(repr.terms[0].exps, vec![(1, 3)]);
        let back = Polynomial::from_repr(&repr).unwrap();
        assert_eq!(back, p);

        let json = serde_json::to_string(&repr).unwrap();
        let parsed: PolyRepr = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, repr);
    }
}
