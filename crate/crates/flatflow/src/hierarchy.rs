//! Stabilized coefficient tables and the flows they generate.
//!
//! Second derivatives of the potentials, written in the stable variables
//! `s_g` (`s_g = t_{N+1-g}` for A and B, `s_g = t_{N-g}` for D), become
//! independent of `N` inside an explicit window. Their Taylor coefficients
//! form the R-tables; a table row for a left-hand side `(alpha, beta)`
//! assigns to each multiset `{g_1, ..., g_m}` the coefficient of
//! `prod p_{g_k}` in the flow equation
//!
//! ```text
//! d2 f / dt_alpha dt_beta = sum over multisets  orbit(g) * R * prod_k p_{g_k}
//! ```
//!
//! where `p_g` abbreviates `d2 f / dt_1 dt_g` and `orbit(g)` counts the
//! orderings of the multiset. For the D family there is a second flow
//! family with left-hand side written `(0, alpha)` — the derivative along
//! the distinguished last coordinate — whose right-hand sides carry one
//! factor of `q = d2 f / dt_0 dt_1` ([`HierarchyEquation::q_factor`]).
//!
//! # Conventions
//!
//! A and B coefficients are `(1/m!)` times the iterated derivative of `F`
//! at the origin. The D tables are stored in the *doubled-potential*
//! normalization — the flows as printed solve `f = 2 F_{D_N}` — which
//! multiplies the flow-1 derivative values by `(1/2)^(m-1)` and the flow-2
//! values by `(1/2)^m`. The round-trip check substitutes `p`/`q` images of
//! `2F` accordingly. (For flow 1 the identity holds on the slice `t_N = 0`;
//! the `t_N^2` tail of the D potential is not expressible in the `p`
//! alphabet. Flow 2 round-trips exactly.)
//!
//! Extraction refuses indices outside the guaranteed stabilization window
//! ([`Error::OutOfStabilizationRange`]): `alpha + beta <= N + 1` for A/B,
//! `alpha + beta <= N - 1` for D flow 1, `alpha <= N - 2` for D flow 2.
//! Defaults put each row at the smallest in-window dimension, and
//! [`extract_r`] records the dimension used per row.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{orbit_count, partitions};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::monomial::Monomial;
use crate::poly::{PolyRepr, Polynomial};
use crate::potentials::d::d_coordinate_map;
use crate::potentials::potential;
use crate::rational::{factorial_rat, frac, rat, Rat};

/// One row of coefficients: everything with a fixed left-hand side.
///
/// `gammas` keys are sorted ascending; values are nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RTableRow {
    pub family: Family,
    /// `(alpha, beta)` with `alpha = 0` denoting the D second flow.
    pub lhs: (u32, u32),
    /// Dimension the row was extracted at.
    pub extracted_at: u32,
    pub entries: BTreeMap<Vec<u32>, Rat>,
}

/// Default (smallest in-window) extraction dimension for a left-hand side.
pub fn default_extraction_dim(family: Family, alpha: u32, beta: u32) -> u32 {
    match (family, alpha) {
        (Family::D, 0) => (beta + 2).max(family.min_n()),
        _ => (alpha + beta + 1).max(family.min_n()),
    }
}

fn check_extraction_range(family: Family, alpha: u32, beta: u32, n: u32) -> Result<()> {
    let out = Error::OutOfStabilizationRange {
        family,
        alpha,
        beta,
        n,
    };
    match (family, alpha) {
        (Family::A | Family::B, 0) => Err(out),
        (Family::A | Family::B, _) => {
            if beta >= 1 && alpha <= n && beta <= n && alpha + beta <= n + 1 {
                Ok(())
            } else {
                Err(out)
            }
        }
        (Family::D, 0) => {
            if beta >= 1 && beta <= n - 2 {
                Ok(())
            } else {
                Err(out)
            }
        }
        (Family::D, _) => {
            if beta >= 1 && alpha + beta < n {
                Ok(())
            } else {
                Err(out)
            }
        }
    }
}

/// Extract the coefficient row for `(alpha, beta)`; `n = None` uses the
/// default dimension. See the module docs for windows and normalization.
pub fn extract_r(family: Family, alpha: u32, beta: u32, n: Option<u32>) -> Result<RTableRow> {
    let n = n.unwrap_or_else(|| default_extraction_dim(family, alpha, beta));
    family.validate_n(n)?;
    check_extraction_range(family, alpha, beta, n)?;

    let mut entries = BTreeMap::new();
    if family == Family::D && alpha == 0 {
        // Second flow: coefficients of d v_1 / dt_beta in the stable
        // variables, scaled by (1/2)^m.
        if beta == 1 {
            // d v_1 / dt_1 = 1: the trivial row with the empty multiset.
            entries.insert(Vec::new(), Rat::one());
        } else {
            let v1 = d_coordinate_map(n).image(1).clone();
            let dv1 = v1.derive(beta);
            for gs in partitions(beta - 1, n - 1) {
                let m = gs.len() as u32;
                let mut indices: Vec<u32> = gs.iter().map(|&g| n - g).collect();
                indices.sort_unstable();
                let mut orders: BTreeMap<u32, u32> = BTreeMap::new();
                for &i in &indices {
                    *orders.entry(i).or_insert(0) += 1;
                }
                let value = dv1.partial_at_zero(&orders) / factorial_rat(m)
                    * frac(1, 2).pow(m as i32);
                if !num_traits::Zero::is_zero(&value) {
                    entries.insert(gs, value);
                }
            }
        }
    } else {
        let p = potential(family, n)?;
        // Support: sum(gammas) = alpha + beta - m for A (m parts), and
        // alpha + beta - 1 for B and D flow 1 (any number of parts).
        let max_m = alpha + beta - 1;
        for m in 1..=max_m {
            let (target, max_part) = match family {
                Family::A => (alpha + beta - m, n),
                Family::B => (alpha + beta - 1, n),
                Family::D => (alpha + beta - 1, n - 1),
            };
            for gs in partitions(target, max_part) {
                if gs.len() as u32 != m {
                    continue;
                }
                let mut indices = vec![alpha, beta];
                indices.extend(gs.iter().map(|&g| family.stable_index(n, g)));
                let mut value = p.partial_at_zero(&indices) / factorial_rat(m);
                if family == Family::D {
                    value *= frac(1, 2).pow(m as i32 - 1);
                }
                if !num_traits::Zero::is_zero(&value) {
                    entries.insert(gs, value);
                }
            }
        }
    }
    Ok(RTableRow {
        family,
        lhs: (alpha, beta),
        extracted_at: n,
        entries,
    })
}

impl RTableRow {
    pub fn to_repr(&self) -> RTableRepr {
        RTableRepr {
            family: self.family,
            lhs: self.lhs,
            extracted_at: self.extracted_at,
            entries: self
                .entries
                .iter()
                .map(|(gs, v)| RTableEntryRepr {
                    gammas: gs.clone(),
                    value: v.to_string(),
                })
                .collect(),
        }
    }
}

/// Serialized R-table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RTableRepr {
    pub family: Family,
    pub lhs: (u32, u32),
    pub extracted_at: u32,
    pub entries: Vec<RTableEntryRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RTableEntryRepr {
    pub gammas: Vec<u32>,
    pub value: String,
}

/// Verify that the relabeled second derivatives agree between dimensions
/// `n1` and `n2` for the pair `(alpha, beta)`.
///
/// For A and B this is literal equality of `d2F/dt_alpha dt_beta` after
/// renaming `t_j -> s_{N+1-j}`. For D two statements are checked: equality
/// of the `t_N = 0` restrictions after renaming `t_j -> s_{N-j}`, and
/// equality of `d v_1 / dt_beta` under the same renaming (the quadratic
/// `t_N` tails themselves do not stabilize and are excluded by design).
pub fn stabilization_verify(
    family: Family,
    n1: u32,
    n2: u32,
    alpha: u32,
    beta: u32,
) -> Result<bool> {
    let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
    family.validate_n(lo)?;
    if alpha < 1 || beta < 1 || !family.stable_pair(lo, alpha, beta) {
        return Err(Error::OutOfStabilizationRange {
            family,
            alpha,
            beta,
            n: lo,
        });
    }
    let stable_form = |n: u32| -> Result<Polynomial> {
        let p = potential(family, n)?;
        let d2 = p.second_derivative(alpha, beta);
        let d2 = match family {
            Family::D => d2.set_zero(n),
            _ => d2,
        };
        Ok(d2.reindex(|j| family.stable_index(n, j)))
    };
    let mut ok = stable_form(lo)? == stable_form(hi)?;
    if family == Family::D {
        let dv1 = |n: u32| -> Polynomial {
            d_coordinate_map(n)
                .image(1)
                .derive(beta)
                .reindex(|j| family.stable_index(n, j))
        };
        ok = ok && dv1(lo) == dv1(hi);
    }
    Ok(ok)
}

/// A dispersionless flow equation in the `p` alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyEquation {
    pub family: Family,
    /// `(alpha, beta)`; `alpha = 0` is the D second flow.
    pub lhs: (u32, u32),
    /// Whether the right-hand side carries one overall factor of `q`.
    pub q_factor: bool,
    /// Right-hand side as a polynomial in `p_1, p_2, ...`.
    pub rhs: Polynomial,
}

impl HierarchyEquation {
    /// Render the right-hand side in the canonical grammar, e.g.
    /// `1/12*p1^3 - 1/2*p1*p2 + p3` or `1/8*p1^3*q + 1/2*p1*p2*q + 1/2*p3*q`.
    pub fn rhs_text(&self) -> String {
        if !self.q_factor {
            return self.rhs.render("p");
        }
        if self.rhs.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.rhs.terms().enumerate() {
            let neg = num_traits::Signed::is_negative(c);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = num_traits::Signed::abs(c);
            if m.is_one() {
                if abs.is_one() {
                    out.push('q');
                } else {
                    out.push_str(&format!("{abs}*q"));
                }
            } else {
                out.push_str(&crate::poly::term_body(m, &abs, "p"));
                out.push_str("*q");
            }
        }
        out
    }

    /// `d2f/dt2 dt3 = ...` style one-line rendering.
    pub fn render(&self) -> String {
        format!(
            "d2f/dt{} dt{} = {}",
            self.lhs.0,
            self.lhs.1,
            self.rhs_text()
        )
    }

    pub fn to_repr(&self) -> EquationRepr {
        EquationRepr {
            family: self.family,
            lhs: self.lhs,
            q_factor: self.q_factor,
            rhs: self.rhs.to_repr("p"),
        }
    }
}

/// Serialized flow equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationRepr {
    pub family: Family,
    pub lhs: (u32, u32),
    pub q_factor: bool,
    pub rhs: PolyRepr,
}

/// Assemble the flow equation for `(alpha, beta)` from the coefficient
/// row extracted at its default dimension.
pub fn assemble_equation(family: Family, alpha: u32, beta: u32) -> Result<HierarchyEquation> {
    let row = extract_r(family, alpha, beta, None)?;
    let mut rhs = Polynomial::zero();
    for (gs, value) in &row.entries {
        let monomial = Monomial::from_pairs(gs.iter().map(|&g| (g, 1)));
        rhs.add_term(monomial, value * orbit_count(gs));
    }
    Ok(HierarchyEquation {
        family,
        lhs: (alpha, beta),
        q_factor: family == Family::D && alpha == 0,
        rhs,
    })
}

/// Substitute the `p` images of the potential at dimension `n` into the
/// right-hand side: `p_g -> d2f/dt_1 dt_g`, with `f = F` for A and B and
/// `f = 2 F` for D (including `q -> d2f/dt_N dt_1`).
fn substituted_rhs(eq: &HierarchyEquation, n: u32) -> Result<Polynomial> {
    let p = potential(eq.family, n)?;
    let scale = if eq.family == Family::D { rat(2) } else { Rat::one() };
    let mut map = BTreeMap::new();
    for g in 1..=eq.rhs.max_var() {
        map.insert(g, p.second_derivative(1, g).scale(&scale));
    }
    let mut out = eq.rhs.substitute(&map);
    if eq.q_factor {
        out = out.mul(&p.second_derivative(1, n).scale(&scale));
    }
    Ok(out)
}

/// Substitute actual derivatives of the potential at dimension `n` into
/// the assembled equation for `(alpha, beta)` and compare with the
/// left-hand side.
pub fn roundtrip_check(family: Family, alpha: u32, beta: u32, n: u32) -> Result<bool> {
    family.validate_n(n)?;
    check_extraction_range(family, alpha, beta, n)?;
    let eq = assemble_equation(family, alpha, beta)?;
    let rhs = substituted_rhs(&eq, n)?;
    let p = potential(family, n)?;
    let ok = match (family, alpha) {
        (Family::D, 0) => {
            // exact in all variables including t_N
            let lhs = p.second_derivative(n, beta).scale(&rat(2));
            lhs == rhs
        }
        (Family::D, _) => {
            let lhs = p
                .second_derivative(alpha, beta)
                .set_zero(n)
                .scale(&rat(2));
            lhs == rhs.set_zero(n)
        }
        _ => p.second_derivative(alpha, beta) == rhs,
    };
    Ok(ok)
}

/// Cross-differentiation consistency of two flows sharing `alpha`:
/// `d/dt_gamma` of the substituted `(alpha, beta)` right-hand side must
/// equal `d/dt_beta` of the substituted `(alpha, gamma)` one (both are
/// `d3f/dt_alpha dt_beta dt_gamma`).
pub fn compatibility_check(
    family: Family,
    alpha: u32,
    beta: u32,
    gamma: u32,
    n: u32,
) -> Result<bool> {
    family.validate_n(n)?;
    check_extraction_range(family, alpha, beta, n)?;
    check_extraction_range(family, alpha, gamma, n)?;
    let xb = substituted_rhs(&assemble_equation(family, alpha, beta)?, n)?;
    let xg = substituted_rhs(&assemble_equation(family, alpha, gamma)?, n)?;
    Ok(xb.derive(gamma) == xg.derive(beta))
}
