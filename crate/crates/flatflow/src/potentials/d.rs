//! The D-family construction.
//!
//! The first `N - 1` flat coordinates carry integer weights `N - k`; the
//! last coordinate `t_N` is special (half-integer Euler weight, quadratic
//! appearance). The auxiliary coordinates are
//!
//! ```text
//! v_b = sum over { sum_{k<N} (N-k) a_k = N-b }
//!         (|a| + 2b - 3)! / (2b - 2)!  *  prod t_k^{a_k} / a_k! ,   b < N,
//! v_N = t_N ,
//! ```
//!
//! and the gradient components for `alpha < N` are
//! `dF/dt_alpha = psi2_{N-alpha}(v(t))` with
//!
//! ```text
//! psi2_g(v) = sum over { sum (N-k) a_k = 2(N-1)+1-g }
//!               (-1)^(|a|-2) prod_{k=0}^{|a|-3} (2g-1 + 2k(N-1)) prod v^a / a!
//!           + (v_N^2 / 2) * sum over { sum (N-k) a_k = N-1-g }
//!               A2(g, a) prod v^a / a!
//! ```
//!
//! closed by `dF/dt_N = v_1(t) * t_N`. Here `A2(g, a) =
//! (-1)^(|a|-1) prod_{k=0}^{|a|-2} (2g-1 + 2k(N-1))` for `g <= N-2`, and
//! the boundary case `g = N-1` (where the second constraint forces the
//! empty exponent vector) takes `A2 := 1`.
//!
//! # Normalization notes
//!
//! Two conventions for the second sum circulate that differ by a factor of
//! 2; only the one above makes the gradient *closed*, which
//! [`crate::poly::euler_integrate`] verifies on every construction. It is
//! also pinned down by the cross-identity `B_g = (1/2) d v_1 / dt_g`, where
//! `B_g` is the `t_N^2`-coefficient of `dF/dt_g` — forced by symmetry of
//! mixed partials with `dF/dt_N = v_1 t_N` — which the tests check
//! explicitly. (In the product bound `|a| - 3`, the dimension parameter is
//! `N - 1`, not a running index.)

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::Result;
use crate::family::Family;
use crate::monomial::Monomial;
use crate::poly::{euler_integrate, Polynomial};
use crate::rational::{factorial_rat, frac, Rat};

use super::{inv_factorials, term_from_exponents, total_exponent, weighted_exponents, CoordinateMap};

/// `(index, weight)` pairs for the first `n - 1` D flat variables.
fn d_weights(n: u32) -> Vec<(u32, u32)> {
    (1..n).map(|k| (k, n - k)).collect()
}

/// The triangular map `v(t)`; `v_N = t_N`.
pub fn d_coordinate_map(n: u32) -> CoordinateMap {
    let weights = d_weights(n);
    let mut images = BTreeMap::new();
    for b in 1..n {
        let mut v = Polynomial::zero();
        weighted_exponents(&weights, n - b, &mut |exps| {
            let na = total_exponent(exps);
            debug_assert!(na >= 1);
            let c = factorial_rat(na + 2 * b - 3) / factorial_rat(2 * b - 2) * inv_factorials(exps);
            let (m, c) = term_from_exponents(exps, c);
            v.add_term(m, c);
        });
        images.insert(b, v);
    }
    images.insert(n, Polynomial::var(n));
    CoordinateMap::new(Family::D, n, images)
}

/// The symbol `psi2_g` (`1 <= g <= N-1`) as a polynomial in `v_1 ... v_N`.
pub fn psi2(n: u32, g: u32) -> Polynomial {
    assert!((1..n).contains(&g));
    let weights = d_weights(n);
    let mut out = Polynomial::zero();

    // First sum: the t_N-independent part.
    weighted_exponents(&weights, 2 * (n - 1) + 1 - g, &mut |exps| {
        let na = total_exponent(exps);
        debug_assert!(na >= 2, "weight bookkeeping must force |a| >= 2");
        let mut c = if na.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        for k in 0..na - 2 {
            c *= Rat::from_integer((2 * g - 1 + 2 * k * (n - 1)).into());
        }
        c *= inv_factorials(exps);
        let (m, c) = term_from_exponents(exps, c);
        out.add_term(m, c);
    });

    // Second sum, carrying the factor v_N^2 / 2.
    let vn_sq = Monomial::var_pow(n, 2);
    weighted_exponents(&weights, n - 1 - g, &mut |exps| {
        let na = total_exponent(exps);
        let mut c = if g == n - 1 {
            debug_assert_eq!(na, 0);
            Rat::one()
        } else {
            debug_assert!(na >= 1);
            let mut c = if na % 2 == 1 { Rat::one() } else { -Rat::one() };
            for k in 0..na - 1 {
                c *= Rat::from_integer((2 * g - 1 + 2 * k * (n - 1)).into());
            }
            c * inv_factorials(exps)
        };
        c *= frac(1, 2);
        let (m, c) = term_from_exponents(exps, c);
        out.add_term(m.mul(&vn_sq), c);
    });

    out
}

/// Build `F` for the D family at dimension `n` (requires `n >= 4`).
pub fn d_potential(n: u32) -> Result<Polynomial> {
    let vmap = d_coordinate_map(n);
    let mut grad = BTreeMap::new();
    for alpha in 1..n {
        grad.insert(alpha, vmap.compose(&psi2(n, n - alpha)));
    }
    grad.insert(
        n,
        vmap.image(1).mul_monomial(&Monomial::var(n), &Rat::one()),
    );
    euler_integrate(&grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn mono(pairs: &[(u32, u32)], c: Rat) -> Polynomial {
        Polynomial::monomial(Monomial::from_pairs(pairs.iter().copied()), c)
    }

    #[test]
    fn coordinate_map_d4_matches_hand_computation() {
        let vmap = d_coordinate_map(4);
        // v1 = t1 + t2 t3 + t3^3/3
        let v1 = &(&Polynomial::var(1) + &mono(&[(2, 1), (3, 1)], rat(1)))
            + &mono(&[(3, 3)], frac(1, 3));
        assert_eq!(vmap.image(1), &v1);
        // v2 = t2 + 3/2 t3^2
        let v2 = &Polynomial::var(2) + &mono(&[(3, 2)], frac(3, 2));
        assert_eq!(vmap.image(2), &v2);
        assert_eq!(vmap.image(3), &Polynomial::var(3));
        assert_eq!(vmap.image(4), &Polynomial::var(4));
    }

    #[test]
    fn coordinate_map_d6_v1_matches_hand_computation() {
        let v1 = [
            mono(&[(1, 1)], rat(1)),
            mono(&[(2, 1), (5, 1)], rat(1)),
            mono(&[(3, 1), (4, 1)], rat(1)),
            mono(&[(3, 1), (5, 2)], rat(1)),
            mono(&[(4, 2), (5, 1)], rat(1)),
            mono(&[(4, 1), (5, 3)], rat(1)),
            mono(&[(5, 5)], frac(1, 5)),
        ]
        .iter()
        .fold(Polynomial::zero(), |acc, p| acc.add(p));
        assert_eq!(d_coordinate_map(6).image(1), &v1);
    }

    #[test]
    fn gradient_components_d4_match_hand_computation() {
        let f = d_potential(4).unwrap();
        // dF/dt1 = t1 t3 + t2^2/2 + t4^2/2
        let g1 = &(&mono(&[(1, 1), (3, 1)], rat(1)) + &mono(&[(2, 2)], frac(1, 2)))
            + &mono(&[(4, 2)], frac(1, 2));
        assert_eq!(f.derive(1), g1);
        // dF/dt2 = t1 t2 - 1/2 t2^2 t3 + 1/3 t2 t3^3 + 1/2 t3 t4^2
        let g2 = &(&(&mono(&[(1, 1), (2, 1)], rat(1)) + &mono(&[(2, 2), (3, 1)], frac(-1, 2)))
            + &mono(&[(2, 1), (3, 3)], frac(1, 3)))
            + &mono(&[(3, 1), (4, 2)], frac(1, 2));
        assert_eq!(f.derive(2), g2);
        // dF/dt4 = v1 t4
        let v1t4 = d_coordinate_map(4)
            .image(1)
            .mul_monomial(&Monomial::var(4), &rat(1));
        assert_eq!(f.derive(4), v1t4);
    }

    #[test]
    fn second_derivative_d4_matches_hand_computation() {
        let f = d_potential(4).unwrap();
        let d22 = &(&Polynomial::var(1) + &mono(&[(2, 1), (3, 1)], rat(-1)))
            + &mono(&[(3, 3)], frac(1, 3));
        assert_eq!(f.derive(2).derive(2), d22);
    }

    #[test]
    fn tn_square_coefficient_is_half_v1_gradient() {
        // The t_N^2 part of dF/dt_g must equal (1/2) d v_1/dt_g; this pins
        // the normalization of the second psi2 sum.
        for n in 4..=6 {
            let f = d_potential(n).unwrap();
            let v1 = d_coordinate_map(n).image(1).clone();
            for g in 1..n {
                let dg = f.derive(g);
                // extract the t_n^2 coefficient
                let mut b_part = Polynomial::zero();
                let mut rest = Polynomial::zero();
                for (m, c) in dg.terms() {
                    match m.exp(n) {
                        0 => rest.add_term(m.clone(), c.clone()),
                        2 => {
                            let (_, m1) = m.derive(n).unwrap();
                            let (_, m2) = m1.derive(n).unwrap();
                            b_part.add_term(m2, c.clone());
                        }
                        e => panic!("unexpected t_N power {e} in dF/dt_{g} at N={n}"),
                    }
                }
                assert_eq!(b_part, v1.derive(g).scale(&frac(1, 2)), "N={n} g={g}");
                assert!(!rest.is_zero());
            }
        }
    }
}
