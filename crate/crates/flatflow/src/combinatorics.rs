//! Composition-pair counts and the enumerative meaning of Taylor
//! coefficients.
//!
//! [`count_p_hat`]`(i, j, gammas)` counts ordered pairs of compositions
//! `(i_1..i_m)`, `(j_1..j_m)` with all parts positive, `sum i_k = i`,
//! `sum j_k = j` and `i_k + j_k = gamma_k + 1`. Eliminating `j_k` this is
//! the number of integer vectors `1 <= i_k <= gamma_k` with `sum i_k = i`,
//! which a small DP computes; the count is zero unless
//! `sum gamma_k = i + j - m`.
//!
//! These counts are an independent oracle for the potentials: iterated
//! partial derivatives of `F` at the origin must reproduce them with a
//! sign and factorial ([`verify_a_enumerative`], [`verify_d_enumerative`]),
//! which ties the analytic construction to pure combinatorics with *no*
//! shared code path.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::potentials::potential;
use crate::rational::{factorial_rat, Rat};

/// Number of composition pairs described in the module docs. Symmetric in
/// `i <-> j` and under permutations of `gammas`.
pub fn count_p_hat(i: u32, j: u32, gammas: &[u32]) -> u64 {
    let m = gammas.len() as u32;
    let gamma_sum: u32 = gammas.iter().sum();
    if i + j < m || gamma_sum != i + j - m {
        return 0;
    }
    if m == 0 {
        return u64::from(i == 0 && j == 0);
    }
    if i < m {
        return 0;
    }
    // ways[r] = number of prefixes with sum r, parts 1..=gamma_k.
    let mut ways = vec![0u64; (i + 1) as usize];
    ways[0] = 1;
    for &g in gammas {
        let mut next = vec![0u64; (i + 1) as usize];
        for r in 0..=i {
            if ways[r as usize] == 0 {
                continue;
            }
            for part in 1..=g.min(i - r) {
                next[(r + part) as usize] += ways[r as usize];
            }
        }
        ways = next;
    }
    ways[i as usize]
}

/// All partitions of `sum` into parts `1..=max_part`, each returned in
/// ascending order. `sum = 0` yields the empty partition.
pub fn partitions(sum: u32, max_part: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(remaining: u32, max_part: u32, stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            let mut p = stack.clone();
            p.reverse();
            out.push(p);
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            stack.push(part);
            go(remaining - part, part, stack, out);
            stack.pop();
        }
    }
    go(sum, max_part, &mut stack, &mut out);
    out
}

/// Number of distinct orderings of a multiset: `m! / prod(multiplicity!)`.
pub fn orbit_count(gammas: &[u32]) -> Rat {
    let mut c = factorial_rat(gammas.len() as u32);
    let mut sorted = gammas.to_vec();
    sorted.sort_unstable();
    let mut run = 1u32;
    for k in 1..=sorted.len() {
        if k < sorted.len() && sorted[k] == sorted[k - 1] {
            run += 1;
        } else {
            c /= factorial_rat(run);
            run = 1;
        }
    }
    c
}

/// `(-1)^(m-1) * (m-1)!` as a rational.
fn sign_factorial(m: u32) -> Rat {
    let f = factorial_rat(m - 1);
    if m % 2 == 1 {
        f
    } else {
        -f
    }
}

/// Check the A-family enumerative identity
///
/// ```text
/// d^{m+2} F_{A_N} / dt_a dt_b dt_{N+1-g_1} ... dt_{N+1-g_m} |_{t=0}
///   == (-1)^(m-1) (m-1)! * P_hat_{a,b}(g_1, ..., g_m)
/// ```
///
/// for `a + b <= N + 1`, `1 <= g_k <= N`, `m >= 1`.
pub fn verify_a_enumerative(n: u32, a: u32, b: u32, gammas: &[u32]) -> Result<bool> {
    Family::A.validate_n(n)?;
    let ok_range = a >= 1
        && b >= 1
        && a <= n
        && b <= n
        && a + b <= n + 1
        && !gammas.is_empty()
        && gammas.iter().all(|&g| (1..=n).contains(&g));
    if !ok_range {
        return Err(Error::OutOfStabilizationRange {
            family: Family::A,
            alpha: a,
            beta: b,
            n,
        });
    }
    let p = potential(Family::A, n)?;
    let mut indices = vec![a, b];
    indices.extend(gammas.iter().map(|&g| n + 1 - g));
    let lhs = p.partial_at_zero(&indices);
    let rhs = sign_factorial(gammas.len() as u32)
        * Rat::from_integer(count_p_hat(a, b, gammas).into());
    Ok(lhs == rhs)
}

/// Check the D-family enumerative identity
///
/// ```text
/// d^{m+2} F_{D_N} / dt_a dt_b dt_{N-g_1} ... dt_{N-g_m} |_{t=0}
///   == (-1)^(m-1) (m-1)! * P_hat_{2a-1,2b-1}(2g_1 - 1, ..., 2g_m - 1)
/// ```
///
/// for `a + b <= N`, indices `a, b, g_k` in `1..=N-1`, `m >= 1`.
pub fn verify_d_enumerative(n: u32, a: u32, b: u32, gammas: &[u32]) -> Result<bool> {
    Family::D.validate_n(n)?;
    let ok_range = a >= 1
        && b >= 1
        && a < n
        && b < n
        && a + b <= n
        && !gammas.is_empty()
        && gammas.iter().all(|&g| (1..n).contains(&g));
    if !ok_range {
        return Err(Error::OutOfStabilizationRange {
            family: Family::D,
            alpha: a,
            beta: b,
            n,
        });
    }
    let p = potential(Family::D, n)?;
    let mut indices = vec![a, b];
    indices.extend(gammas.iter().map(|&g| n - g));
    let lhs = p.partial_at_zero(&indices);
    let doubled: Vec<u32> = gammas.iter().map(|&g| 2 * g - 1).collect();
    let rhs = sign_factorial(gammas.len() as u32)
        * Rat::from_integer(count_p_hat(2 * a - 1, 2 * b - 1, &doubled).into());
    Ok(lhs == rhs)
}
