//! The B-family potential: the A potential at dimension `2N - 1` with the
//! even-indexed flat coordinates frozen to zero and the odd ones renamed,
//!
//! ```text
//! F_{B_N}(t_1, ..., t_N) = F_{A_{2N-1}}(T) ,   T_{2k-1} = t_k, T_{2k} = 0.
//! ```

use crate::error::Result;
use crate::family::Family;
use crate::poly::Polynomial;

use super::potential;

/// Build `F` for the B family at dimension `n` (requires `n >= 2`).
pub fn b_potential(n: u32) -> Result<Polynomial> {
    let fa = potential(Family::A, 2 * n - 1)?;
    Ok(restrict_to_odd(&fa.f))
}

/// Set every even-indexed variable to zero and rename `T_{2k-1} -> t_k`.
fn restrict_to_odd(f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        if m.pairs().iter().any(|&(i, _)| i % 2 == 0) {
            continue;
        }
        out.add_term(m.reindex(|i| i.div_ceil(2)), c.clone());
    }
    out
}
