//! Randomized algebraic invariants for the exact-arithmetic kernels.
//!
//! These complement the fixed-value unit tests: every law here must hold
//! identically, so any counterexample proptest finds is a real defect.

use std::collections::BTreeMap;

use proptest::prelude::*;

use flatflow::combinatorics::count_p_hat;
use flatflow::poly::euler_integrate;
use flatflow::rational::{frac, Rat};
use flatflow::{Monomial, Polynomial, TruncatedBiseries};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| frac(n, d))
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::btree_map(1u32..=4, 1u32..=3, 0..=3)
        .prop_map(Monomial::from_pairs)
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((arb_monomial(), arb_rat()), 0..=5).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn arb_subst() -> impl Strategy<Value = BTreeMap<u32, Polynomial>> {
    proptest::collection::btree_map(1u32..=4, arb_poly(), 0..=4)
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn additive_inverse_and_unit(a in arb_poly()) {
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(Polynomial::one().mul(&a), a.clone());
        prop_assert!(Polynomial::zero().mul(&a).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn derivation_satisfies_leibniz(a in arb_poly(), b in arb_poly(), idx in 1u32..=4) {
        let lhs = a.mul(&b).derive(idx);
        let rhs = a.derive(idx).mul(&b).add(&a.mul(&b.derive(idx)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_derivatives_commute(a in arb_poly(), i in 1u32..=4, j in 1u32..=4) {
        prop_assert_eq!(a.derive(i).derive(j), a.derive(j).derive(i));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly(), map in arb_subst()) {
        prop_assert_eq!(a.add(&b).substitute(&map), a.substitute(&map).add(&b.substitute(&map)));
        prop_assert_eq!(a.mul(&b).substitute(&map), a.substitute(&map).mul(&b.substitute(&map)));
    }

    #[test]
    fn gradient_integrates_back(a in arb_poly()) {
        // The integrator contract requires gradient components vanishing at
        // the origin, i.e. no constant or linear terms in the integral —
        // true of every potential. Keep only degree >= 2.
        let mut f = Polynomial::zero();
        for (m, c) in a.terms() {
            if m.degree() >= 2 {
                f.add_term(m.clone(), c.clone());
            }
        }
        let top = f.max_var().max(1);
        let grad: BTreeMap<u32, Polynomial> = (1..=top).map(|i| (i, f.derive(i))).collect();
        let g = euler_integrate(&grad).expect("gradient of a polynomial is closed");
        prop_assert_eq!(g, f);
    }

    #[test]
    fn pow_matches_repeated_multiplication(a in arb_poly(), e in 0u32..=4) {
        let mut slow = Polynomial::one();
        for _ in 0..e {
            slow = slow.mul(&a);
        }
        prop_assert_eq!(a.pow(e), slow);
    }

    #[test]
    fn text_rendering_roundtrips_through_repr(a in arb_poly()) {
        let repr = a.to_repr("t");
        let back = Polynomial::from_repr(&repr).unwrap();
        prop_assert_eq!(back, a);
    }
}

fn arb_nilpotent_series() -> impl Strategy<Value = TruncatedBiseries> {
    proptest::collection::vec(((0u32..=3, 0u32..=3), arb_poly()), 0..=4).prop_map(|terms| {
        let mut s = TruncatedBiseries::new(4);
        for ((i, j), p) in terms {
            if i + j >= 1 {
                s.add_term((i, j), p);
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn biseries_log_inverts_exp(a in arb_nilpotent_series()) {
        let e = a.exp().unwrap();
        prop_assert_eq!(e.log().unwrap(), a);
    }

    #[test]
    fn biseries_exp_turns_sums_into_products(a in arb_nilpotent_series(), b in arb_nilpotent_series()) {
        let lhs = a.add(&b).unwrap().exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #[test]
    fn composition_counts_are_symmetric(i in 0u32..=7, j in 0u32..=7, gs in proptest::collection::vec(1u32..=5, 0..=4)) {
        prop_assert_eq!(count_p_hat(i, j, &gs), count_p_hat(j, i, &gs));
        let mut rev = gs.clone();
        rev.reverse();
        prop_assert_eq!(count_p_hat(i, j, &gs), count_p_hat(i, j, &rev));
    }
}
