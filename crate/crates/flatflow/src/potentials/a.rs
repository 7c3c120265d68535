//! The A-family construction.
//!
//! Flat coordinates `t_1 ... t_N` carry integer weights `N + 2 - k`. The
//! auxiliary coordinates are
//!
//! ```text
//! v_g = sum over { a_k >= 0 : sum_k (N+2-k) a_k = N+2-g }
//!         (|a| + g - 2)! / (g - 1)!  *  prod_k t_k^{a_k} / a_k!
//! ```
//!
//! and the gradient of the potential is assembled from the degree-2 symbols
//!
//! ```text
//! psi2_g(v) = sum over { sum_k (N+2-k) a_k = 2(N+1)+1-g }
//!               (-1)^(|a|-2) prod_{k=0}^{|a|-3} (g + k(N+1))
//!               * prod_k v_k^{a_k} / a_k!
//! ```
//!
//! via `dF/dt_alpha = psi2_{N+1-alpha}(v(t))`. The weight bookkeeping
//! guarantees `|a| >= 2` in every `psi2` term, so the product over `k` is
//! always well-formed.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::Result;
use crate::family::Family;
use crate::poly::{euler_integrate, Polynomial};
use crate::rational::{factorial_rat, Rat};

use super::{inv_factorials, term_from_exponents, total_exponent, weighted_exponents, CoordinateMap};

/// `(index, weight)` pairs for the A flat variables at dimension `n`.
fn a_weights(n: u32) -> Vec<(u32, u32)> {
    (1..=n).map(|k| (k, n + 2 - k)).collect()
}

/// The triangular map `v(t)`: `v_g = t_g + (terms in t_j, j > g)`.
pub fn a_coordinate_map(n: u32) -> CoordinateMap {
    let weights = a_weights(n);
    let mut images = BTreeMap::new();
    for g in 1..=n {
        let mut v = Polynomial::zero();
        weighted_exponents(&weights, n + 2 - g, &mut |exps| {
            let na = total_exponent(exps);
            debug_assert!(na >= 1);
            let c = factorial_rat(na + g - 2) / factorial_rat(g - 1) * inv_factorials(exps);
            let (m, c) = term_from_exponents(exps, c);
            v.add_term(m, c);
        });
        images.insert(g, v);
    }
    CoordinateMap::new(Family::A, n, images)
}

/// The symbol `psi2_g` as a polynomial in the `v` variables.
pub fn psi2(n: u32, g: u32) -> Polynomial {
    assert!((1..=n).contains(&g));
    let weights = a_weights(n);
    let mut out = Polynomial::zero();
    weighted_exponents(&weights, 2 * (n + 1) + 1 - g, &mut |exps| {
        let na = total_exponent(exps);
        debug_assert!(na >= 2, "weight bookkeeping must force |a| >= 2");
        let mut c = if na.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        for k in 0..na - 2 {
            c *= Rat::from_integer((g + k * (n + 1)).into());
        }
        c *= inv_factorials(exps);
        let (m, c) = term_from_exponents(exps, c);
        out.add_term(m, c);
    });
    out
}

/// Build `F` for the A family at dimension `n`.
pub fn a_potential(n: u32) -> Result<Polynomial> {
    let vmap = a_coordinate_map(n);
    let mut grad = BTreeMap::new();
    for alpha in 1..=n {
        grad.insert(alpha, vmap.compose(&psi2(n, n + 1 - alpha)));
    }
    euler_integrate(&grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use crate::rational::{frac, rat};

    fn mono(pairs: &[(u32, u32)], c: Rat) -> Polynomial {
        Polynomial::monomial(Monomial::from_pairs(pairs.iter().copied()), c)
    }

    #[test]
    fn coordinate_map_is_triangular_identity_plus_higher() {
        for n in 1..=7 {
            let vmap = a_coordinate_map(n);
            for g in 1..=n {
                let v = vmap.image(g);
                assert_eq!(v.coeff(&Monomial::var(g)), rat(1), "N={n} g={g}");
                // only variables with index >= g occur
                for (m, _) in v.terms() {
                    assert!(m.pairs().iter().all(|&(i, _)| i >= g));
                }
            }
        }
    }

    #[test]
    fn coordinate_map_a3_matches_hand_computation() {
        let vmap = a_coordinate_map(3);
        let v1 = &Polynomial::var(1) + &mono(&[(3, 2)], frac(1, 2));
        assert_eq!(vmap.image(1), &v1);
        assert_eq!(vmap.image(2), &Polynomial::var(2));
        assert_eq!(vmap.image(3), &Polynomial::var(3));
    }

    #[test]
    fn psi2_a2_matches_hand_computation() {
        // psi2_1 = v1^2/2 - v2^3/6, psi2_2 = v1 v2.
        let p1 = &mono(&[(1, 2)], frac(1, 2)) + &mono(&[(2, 3)], frac(-1, 6));
        assert_eq!(psi2(2, 1), p1);
        assert_eq!(psi2(2, 2), mono(&[(1, 1), (2, 1)], rat(1)));
    }

    #[test]
    fn psi2_a3_matches_hand_computation() {
        // psi2_3 = v1 v3 + v2^2/2 - v3^3/2.
        let p3 = &(&mono(&[(1, 1), (3, 1)], rat(1)) + &mono(&[(2, 2)], frac(1, 2)))
            + &mono(&[(3, 3)], frac(-1, 2));
        assert_eq!(psi2(3, 3), p3);
        // psi2_2 = v1 v2 - v2 v3^2.
        let p2 = &mono(&[(1, 1), (2, 1)], rat(1)) + &mono(&[(2, 1), (3, 2)], rat(-1));
        assert_eq!(psi2(3, 2), p2);
        // psi2_1 = v1^2/2 - v1 v3^2/2 - v2^2 v3 / 2 + 5 v3^4 / 24.
        let p1 = &(&(&mono(&[(1, 2)], frac(1, 2)) + &mono(&[(1, 1), (3, 2)], frac(-1, 2)))
            + &mono(&[(2, 2), (3, 1)], frac(-1, 2)))
            + &mono(&[(3, 4)], frac(5, 24));
        assert_eq!(psi2(3, 1), p1);
    }

    #[test]
    fn potential_a1_is_cubic() {
        assert_eq!(a_potential(1).unwrap(), mono(&[(1, 3)], frac(1, 6)));
    }

    #[test]
    fn potential_a2_matches_hand_computation() {
        let f = &mono(&[(1, 2), (2, 1)], frac(1, 2)) + &mono(&[(2, 4)], frac(-1, 24));
        assert_eq!(a_potential(2).unwrap(), f);
    }

    #[test]
    fn potential_a3_matches_hand_computation() {
        let f = &(&(&mono(&[(1, 2), (3, 1)], frac(1, 2)) + &mono(&[(1, 1), (2, 2)], frac(1, 2)))
            + &mono(&[(2, 2), (3, 2)], frac(-1, 4)))
            + &mono(&[(3, 5)], frac(1, 60));
        assert_eq!(a_potential(3).unwrap(), f);
    }
}
