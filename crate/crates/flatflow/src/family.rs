//! The three simply-laced-to-B flavors of potential this crate builds.
//!
//! Everything dimension-dependent that is mere bookkeeping lives here:
//! minimal dimensions, the index involution, the constant pairing `eta`,
//! Euler weights and charge, and the windows in which second derivatives
//! of the potentials stabilize.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::D];

    /// Smallest dimension for which the construction is defined.
    pub fn min_n(self) -> u32 {
        match self {
            Family::A => 1,
            Family::B => 2,
            Family::D => 4,
        }
    }

    pub fn validate_n(self, n: u32) -> Result<()> {
        if n < self.min_n() {
            Err(Error::InvalidDimension {
                family: self,
                n,
                min: self.min_n(),
            })
        } else {
            Ok(())
        }
    }

    /// The index involution `alpha -> alpha_bar` pairing coordinates through
    /// `eta`: `N+1-alpha` for A and B; for D, `N-alpha` on `1..N-1` with `N`
    /// fixed.
    pub fn involution(self, n: u32, alpha: u32) -> u32 {
        debug_assert!(alpha >= 1 && alpha <= n);
        match self {
            Family::A | Family::B => n + 1 - alpha,
            Family::D => {
                if alpha == n {
                    n
                } else {
                    n - alpha
                }
            }
        }
    }

    /// Entry `eta_{alpha beta}` of the constant pairing (0 or 1 for every
    /// family here).
    pub fn eta_entry(self, n: u32, alpha: u32, beta: u32) -> Rat {
        let hit = match self {
            Family::A | Family::B => alpha + beta == n + 1,
            Family::D => (alpha == n && beta == n) || (alpha < n && beta < n && alpha + beta == n),
        };
        if hit {
            Rat::from_integer(1.into())
        } else {
            Rat::from_integer(0.into())
        }
    }

    /// The full `N x N` pairing matrix.
    pub fn eta_matrix(self, n: u32) -> Vec<Vec<Rat>> {
        (1..=n)
            .map(|a| (1..=n).map(|b| self.eta_entry(n, a, b)).collect())
            .collect()
    }

    /// Euler weight `d_alpha` of the flat coordinate `t_alpha`.
    pub fn weight(self, n: u32, alpha: u32) -> Rat {
        debug_assert!(alpha >= 1 && alpha <= n);
        let (num, den) = match self {
            Family::A => ((n + 2 - alpha) as i64, (n + 1) as i64),
            Family::B => ((n + 1 - alpha) as i64, n as i64),
            Family::D => {
                if alpha == n {
                    (n as i64, 2 * (n as i64 - 1))
                } else {
                    ((n - alpha) as i64, (n - 1) as i64)
                }
            }
        };
        frac(num, den)
    }

    /// The charge `delta`; the potential is quasi-homogeneous of weight
    /// `3 - delta` under the Euler field.
    pub fn charge(self, n: u32) -> Rat {
        match self {
            Family::A => frac(n as i64 - 1, n as i64 + 1),
            Family::B => frac(n as i64 - 1, n as i64),
            Family::D => frac(n as i64 - 2, n as i64 - 1),
        }
    }

    /// Is `(alpha, beta)` inside the window where `d2F/dt_alpha dt_beta`
    /// (restricted to `t_N = 0` for D) has reached its stable form at
    /// dimension `n`?
    ///
    /// A and B stabilize for `alpha, beta <= n`, `alpha + beta <= n + 1`;
    /// D strictly below the dimension: `alpha + beta <= n - 1`.
    pub fn stable_pair(self, n: u32, alpha: u32, beta: u32) -> bool {
        if alpha < 1 || beta < 1 {
            return false;
        }
        match self {
            Family::A | Family::B => alpha <= n && beta <= n && alpha + beta <= n + 1,
            Family::D => alpha + beta < n,
        }
    }

    /// Relabeling that makes stable derivatives dimension-independent:
    /// flat index `j` at dimension `n` corresponds to the stable index
    /// `n + 1 - j` (A, B) or `n - j` (D, `j < n`).
    pub fn stable_index(self, n: u32, j: u32) -> u32 {
        match self {
            Family::A | Family::B => n + 1 - j,
            Family::D => n - j,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(format!("unknown family {other:?}; expected A, B or D")),
        }
    }
}
