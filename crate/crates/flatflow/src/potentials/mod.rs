//! Construction of the flat-coordinate potentials.
//!
//! Each family builds its potential the same way:
//!
//! 1. a triangular change of coordinates `v = v(t)` ([`CoordinateMap`]),
//!    each `v_k` a weighted-homogeneous polynomial with `v_k = t_k + ...`;
//! 2. closed-form gradient components `dF/dt_alpha` given by degree-2
//!    symbols evaluated on `v(t)` (see [`a::psi2`] and [`d::psi2`]);
//! 3. exact integration of the gradient by degree division
//!    ([`crate::poly::euler_integrate`]), which also *proves* the gradient
//!    closed — a misnormalized symbol cannot slip through.
//!
//! The B potential is the A potential in twice-minus-one variables with the
//! even slots frozen ([`b::b_potential`]), and sits inside the next D
//! potential ([`b_via_d_check`]).
//!
//! Potentials are memoized per `(family, N)` behind an `Arc`, since every
//! downstream scan (associativity, stabilization, hierarchy extraction)
//! keeps asking for the same ones.

pub mod a;
pub mod b;
pub mod d;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::One;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::Family;
use crate::monomial::Monomial;
use crate::poly::{PolyRepr, Polynomial};
use crate::rational::{factorial_rat, Rat};

/// The triangular substitution `v = v(t)` used by a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    pub family: Family,
    pub n: u32,
    images: BTreeMap<u32, Polynomial>,
}

impl CoordinateMap {
    pub(crate) fn new(family: Family, n: u32, images: BTreeMap<u32, Polynomial>) -> Self {
        CoordinateMap { family, n, images }
    }

    /// The polynomial `v_k(t)`.
    pub fn image(&self, k: u32) -> &Polynomial {
        &self.images[&k]
    }

    pub fn images(&self) -> &BTreeMap<u32, Polynomial> {
        &self.images
    }

    /// Compose: substitute every `v_k` into a polynomial in the `v`
    /// variables.
    pub fn compose(&self, p_in_v: &Polynomial) -> Polynomial {
        p_in_v.substitute(&self.images)
    }
}

/// A constructed potential together with its constant pairing and Euler
/// data. `f` is a polynomial in `t_1 ... t_N` with zero constant and no
/// quadratic-or-lower part playing any role downstream; everything the
/// hierarchy needs is derivatives of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPotential {
    pub family: Family,
    pub n: u32,
    pub f: Polynomial,
    pub eta: Vec<Vec<Rat>>,
    pub weights: Vec<Rat>,
    pub delta: Rat,
}

impl FlatPotential {
    fn assemble(family: Family, n: u32, f: Polynomial) -> Self {
        FlatPotential {
            family,
            n,
            f,
            eta: family.eta_matrix(n),
            weights: (1..=n).map(|a| family.weight(n, a)).collect(),
            delta: family.charge(n),
        }
    }

    /// `d2 f / dt_alpha dt_beta`.
    pub fn second_derivative(&self, alpha: u32, beta: u32) -> Polynomial {
        self.f.derive(alpha).derive(beta)
    }

    /// `d3 f / dt_alpha dt_beta dt_gamma`.
    pub fn third_derivative(&self, alpha: u32, beta: u32, gamma: u32) -> Polynomial {
        self.f.derive(alpha).derive(beta).derive(gamma)
    }

    /// Iterated partial derivative of `f` at the origin; `indices` lists
    /// the variables with multiplicity, e.g. `[2, 2, 3]` for
    /// `d^3/dt_2 dt_2 dt_3`.
    pub fn partial_at_zero(&self, indices: &[u32]) -> Rat {
        let mut orders: BTreeMap<u32, u32> = BTreeMap::new();
        for &i in indices {
            *orders.entry(i).or_insert(0) += 1;
        }
        self.f.partial_at_zero(&orders)
    }

    /// Does the Euler field reproduce the potential:
    /// `sum_a d_a t_a dF/dt_a == (3 - delta) F`?
    pub fn euler_check(&self) -> bool {
        let mut lhs = Polynomial::zero();
        for a in 1..=self.n {
            let term = self
                .f
                .derive(a)
                .mul_monomial(&Monomial::var(a), &self.weights[(a - 1) as usize]);
            lhs = lhs.add(&term);
        }
        let rhs = self.f.scale(&(Rat::from_integer(3.into()) - self.delta.clone()));
        lhs == rhs
    }

    /// Does `d2F/dt_1 dt_alpha == t_{alpha_bar}` hold for every `alpha`
    /// (the defining property of flat coordinates)?
    pub fn flatness_check(&self) -> bool {
        (1..=self.n).all(|alpha| {
            let expect = Polynomial::var(self.family.involution(self.n, alpha));
            self.second_derivative(1, alpha) == expect
        })
    }

    pub fn to_repr(&self) -> PotentialRepr {
        PotentialRepr {
            family: self.family,
            n: self.n,
            f: self.f.to_repr("t"),
            eta: self
                .eta
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| if x.is_one() { 1 } else { 0 })
                        .collect()
                })
                .collect(),
            weights: self.weights.iter().map(|w| w.to_string()).collect(),
            delta: self.delta.to_string(),
        }
    }
}

/// Serialized potential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialRepr {
    pub family: Family,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "F")]
    pub f: PolyRepr,
    pub eta: Vec<Vec<u8>>,
    pub weights: Vec<String>,
    pub delta: String,
}

type PotentialCache = BTreeMap<(Family, u32), Arc<FlatPotential>>;

static CACHE: Lazy<Mutex<PotentialCache>> = Lazy::new(|| Mutex::new(BTreeMap::new()));

/// The potential for `(family, N)`, memoized for the process lifetime.
pub fn potential(family: Family, n: u32) -> Result<Arc<FlatPotential>> {
    family.validate_n(n)?;
    if let Some(hit) = CACHE.lock().unwrap().get(&(family, n)) {
        return Ok(hit.clone());
    }
    let f = match family {
        Family::A => a::a_potential(n)?,
        Family::B => b::b_potential(n)?,
        Family::D => d::d_potential(n)?,
    };
    let built = Arc::new(FlatPotential::assemble(family, n, f));
    let mut cache = CACHE.lock().unwrap();
    Ok(cache.entry((family, n)).or_insert(built).clone())
}

/// Does `F_{B_N}` equal `F_{D_{N+1}}` with the last coordinate frozen to
/// zero? Requires `N >= 3` so the D side exists.
pub fn b_via_d_check(n: u32) -> Result<bool> {
    Family::B.validate_n(n)?;
    Family::D.validate_n(n + 1)?;
    let fb = potential(Family::B, n)?;
    let fd = potential(Family::D, n + 1)?;
    Ok(fb.f == fd.f.set_zero(n + 1))
}

/// Enumerate exponent assignments `alpha_k >= 0` with
/// `sum_k weight_k * alpha_k == target`, calling `emit` with
/// `(index, exponent)` pairs (zero exponents omitted).
///
/// `weights` pairs each variable index with its positive weight. This is
/// the inner loop of every construction, so it prunes on the remaining
/// target; the recursion depth is the number of variables.
pub(crate) fn weighted_exponents(
    weights: &[(u32, u32)],
    target: u32,
    emit: &mut impl FnMut(&[(u32, u32)]),
) {
    fn go(
        weights: &[(u32, u32)],
        remaining: u32,
        stack: &mut Vec<(u32, u32)>,
        emit: &mut impl FnMut(&[(u32, u32)]),
    ) {
        if remaining == 0 {
            // Remaining variables all get exponent zero.
            emit(stack);
            return;
        }
        let Some((&(idx, w), rest)) = weights.split_first() else {
            return;
        };
        debug_assert!(w > 0);
        go(rest, remaining, stack, emit);
        for e in 1..=remaining / w {
            stack.push((idx, e));
            go(rest, remaining - e * w, stack, emit);
            stack.pop();
        }
    }
    go(weights, target, &mut Vec::new(), emit);
}

/// Multinomial-style coefficient `prod_k 1 / alpha_k!`.
pub(crate) fn inv_factorials(exps: &[(u32, u32)]) -> Rat {
    let mut c = Rat::one();
    for &(_, e) in exps {
        c /= factorial_rat(e);
    }
    c
}

/// `|alpha| = sum of exponents`.
pub(crate) fn total_exponent(exps: &[(u32, u32)]) -> u32 {
    exps.iter().map(|&(_, e)| e).sum()
}

/// Build a polynomial term `c * prod x^alpha` from an exponent list.
pub(crate) fn term_from_exponents(exps: &[(u32, u32)], c: Rat) -> (Monomial, Rat) {
    (Monomial::from_pairs(exps.iter().copied()), c)
}
