//! Metric extraction and associativity verification.
//!
//! For a constructed potential, `eta_{ab} = d3F/dt_1 dt_a dt_b` must be a
//! *constant* nondegenerate matrix ([`metric_from_potential`] refuses
//! anything else), and the induced product must be associative: writing
//! `c_{ab,m} = d3F/dt_a dt_b dt_m`, the quantity
//!
//! ```text
//! Q(a, b, c, s) = sum_{m,v} c_{ab,m} * eta^{mv} * c_{vc,s}
//! ```
//!
//! has to be symmetric in all four indices. `Q` is symmetric in `(a, b)`,
//! in `(c, s)`, and under swapping the pairs by construction, so the whole
//! condition reduces to the vanishing of
//! [`wdvv_residual`]`(a,b,c,s) = Q(a,b,c,s) - Q(a,c,b,s)`; a further sign
//! symmetry lets [`wdvv_scan`] restrict to `b < c`, `a <= s`. The scan is
//! data-parallel over quadruples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::potentials::FlatPotential;
use crate::rational::Rat;

/// The constant pairing read off a potential, with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    pub n: u32,
    entries: Vec<Vec<Rat>>,
    inverse: Vec<Vec<Rat>>,
}

impl Metric {
    /// `eta_{ab}` (1-based indices).
    pub fn entry(&self, a: u32, b: u32) -> &Rat {
        &self.entries[(a - 1) as usize][(b - 1) as usize]
    }

    /// `eta^{ab}` (1-based indices).
    pub fn inv(&self, a: u32, b: u32) -> &Rat {
        &self.inverse[(a - 1) as usize][(b - 1) as usize]
    }

    pub fn entries(&self) -> &Vec<Vec<Rat>> {
        &self.entries
    }
}

/// Read `eta_{ab} = d3F/dt_1 dt_a dt_b` off the potential.
///
/// # Errors
///
/// [`Error::NonConstantMetric`] naming the first non-constant entry;
/// [`Error::SingularMetric`] if the constant matrix is degenerate.
pub fn metric_from_potential(p: &FlatPotential) -> Result<Metric> {
    let n = p.n;
    let mut entries = vec![vec![Rat::zero(); n as usize]; n as usize];
    for a in 1..=n {
        for b in a..=n {
            let e = p.third_derivative(1, a, b);
            if e.degree() > 0 {
                return Err(Error::NonConstantMetric { alpha: a, beta: b });
            }
            let c = e.constant_term();
            entries[(a - 1) as usize][(b - 1) as usize] = c.clone();
            entries[(b - 1) as usize][(a - 1) as usize] = c;
        }
    }
    let inverse = invert(&entries).ok_or(Error::SingularMetric)?;
    Ok(Metric {
        n,
        entries,
        inverse,
    })
}

/// Gauss-Jordan inversion over exact rationals.
fn invert(mat: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = mat.len();
    let mut a: Vec<Vec<Rat>> = mat.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &scale;
            inv[col][j] *= &scale;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let av = &a[col][j] * &factor;
                a[r][j] -= av;
                let iv = &inv[col][j] * &factor;
                inv[r][j] -= iv;
            }
        }
    }
    Some(inv)
}

/// Third-derivative table plus inverse metric, shared by the scan.
struct ThirdDerivatives<'a> {
    n: u32,
    metric: &'a Metric,
    /// `c[a-1][b-1][m-1]`, all of `a, b, m` from 1.
    c: Vec<Vec<Vec<Polynomial>>>,
}

impl<'a> ThirdDerivatives<'a> {
    fn new(p: &FlatPotential, metric: &'a Metric) -> Self {
        let n = p.n as usize;
        let mut c = vec![vec![vec![Polynomial::zero(); n]; n]; n];
        for a in 1..=p.n {
            let da = p.f.derive(a);
            for b in a..=p.n {
                let dab = da.derive(b);
                for m in b..=p.n {
                    let dabm = dab.derive(m);
                    // fill all permutations
                    let (ia, ib, im) = ((a - 1) as usize, (b - 1) as usize, (m - 1) as usize);
                    for (x, y, z) in [
                        (ia, ib, im),
                        (ia, im, ib),
                        (ib, ia, im),
                        (ib, im, ia),
                        (im, ia, ib),
                        (im, ib, ia),
                    ] {
                        c[x][y][z] = dabm.clone();
                    }
                }
            }
        }
        ThirdDerivatives {
            n: p.n,
            metric,
            c,
        }
    }

    fn q(&self, a: u32, b: u32, g: u32, s: u32) -> Polynomial {
        let mut acc = Polynomial::zero();
        for m in 1..=self.n {
            for v in 1..=self.n {
                let w = self.metric.inv(m, v);
                if w.is_zero() {
                    continue;
                }
                let left = &self.c[(a - 1) as usize][(b - 1) as usize][(m - 1) as usize];
                let right = &self.c[(v - 1) as usize][(g - 1) as usize][(s - 1) as usize];
                if left.is_zero() || right.is_zero() {
                    continue;
                }
                acc = acc.add(&left.mul(right).scale(w));
            }
        }
        acc
    }

    fn residual(&self, a: u32, b: u32, g: u32, s: u32) -> Polynomial {
        self.q(a, b, g, s).sub(&self.q(a, g, b, s))
    }
}

/// The associativity defect `Q(a,b,g,s) - Q(a,g,b,s)`; identically zero
/// exactly when the product induced by `p` is associative at that index
/// quadruple.
pub fn wdvv_residual(p: &FlatPotential, a: u32, b: u32, g: u32, s: u32) -> Result<Polynomial> {
    let metric = metric_from_potential(p)?;
    let table = ThirdDerivatives::new(p, &metric);
    Ok(table.residual(a, b, g, s))
}

/// Outcome of a full associativity scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WdvvReport {
    pub quadruples_checked: u64,
    /// Quadruples `(a, b, g, s)` with nonzero residual.
    pub failures: Vec<(u32, u32, u32, u32)>,
}

impl WdvvReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check every independent quadruple (`b < g`, `a <= s`; the rest follow
/// by the symmetries of `Q`), in parallel.
pub fn wdvv_scan(p: &FlatPotential) -> Result<WdvvReport> {
    let metric = metric_from_potential(p)?;
    let table = ThirdDerivatives::new(p, &metric);
    let n = p.n;
    let mut quads = Vec::new();
    for a in 1..=n {
        for s in a..=n {
            for b in 1..=n {
                for g in b + 1..=n {
                    quads.push((a, b, g, s));
                }
            }
        }
    }
    let mut failures: Vec<(u32, u32, u32, u32)> = quads
        .par_iter()
        .filter(|&&(a, b, g, s)| !table.residual(a, b, g, s).is_zero())
        .cloned()
        .collect();
    failures.sort_unstable();
    Ok(WdvvReport {
        quadruples_checked: quads.len() as u64,
        failures,
    })
}

/// Structure constants `c_{ab}^g = sum_m c_{ab,m} eta^{mg}` evaluated at
/// the origin; index as `[a-1][b-1][g-1]`.
pub fn structure_constants_at_zero(p: &FlatPotential) -> Result<Vec<Vec<Vec<Rat>>>> {
    let metric = metric_from_potential(p)?;
    let n = p.n;
    let mut out = vec![vec![vec![Rat::zero(); n as usize]; n as usize]; n as usize];
    for a in 1..=n {
        for b in 1..=n {
            for g in 1..=n {
                let mut acc = Rat::zero();
                for m in 1..=n {
                    let w = metric.inv(m, g);
                    if w.is_zero() {
                        continue;
                    }
                    acc += p.partial_at_zero(&[a, b, m]) * w;
                }
                out[(a - 1) as usize][(b - 1) as usize][(g - 1) as usize] = acc;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;
    use crate::monomial::Monomial;
    use crate::potentials::potential;
    use crate::rational::{frac, rat};

    #[test]
    fn metric_agrees_with_family_table() {
        for (fam, max) in [(Family::A, 6), (Family::B, 4), (Family::D, 6)] {
            for n in fam.min_n()..=max {
                let p = potential(fam, n).unwrap();
                let m = metric_from_potential(&p).unwrap();
                assert_eq!(m.entries(), &fam.eta_matrix(n), "{fam} N={n}");
            }
        }
    }

    #[test]
    fn metric_rejects_non_constant() {
        let mut p = (*potential(Family::A, 3).unwrap()).clone();
        // d3/dt1 dt2 dt2 of t1 t2^2 t3 is 2 t3: not constant.
        p.f
            .add_term(Monomial::from_pairs([(1, 1), (2, 2), (3, 1)]), rat(1));
        assert_eq!(
            metric_from_potential(&p),
            Err(Error::NonConstantMetric { alpha: 2, beta: 2 })
        );
    }

    #[test]
    fn metric_rejects_singular() {
        let mut p = (*potential(Family::A, 2).unwrap()).clone();
        p.f = Polynomial::monomial(Monomial::from_pairs([(1, 3)]), frac(1, 6));
        // eta = [[1,0],[0,0]]
        assert_eq!(metric_from_potential(&p), Err(Error::SingularMetric));
    }

    #[test]
    fn inverse_of_antidiagonal() {
        let p = potential(Family::A, 4).unwrap();
        let m = metric_from_potential(&p).unwrap();
        for a in 1..=4u32 {
            for b in 1..=4u32 {
                let expect = if a + b == 5 { rat(1) } else { rat(0) };
                assert_eq!(*m.inv(a, b), expect);
            }
        }
    }

    #[test]
    fn wdvv_residual_vanishes_on_a4() {
        let p = potential(Family::A, 4).unwrap();
        assert!(wdvv_residual(&p, 2, 2, 3, 4).unwrap().is_zero());
        assert!(wdvv_residual(&p, 2, 3, 4, 2).unwrap().is_zero());
    }

    #[test]
    fn wdvv_scan_passes_small_dimensions() {
        for (fam, ns) in [
            (Family::A, vec![1, 2, 3, 4, 5]),
            (Family::B, vec![2, 3, 4]),
            (Family::D, vec![4, 5]),
        ] {
            for n in ns {
                let p = potential(fam, n).unwrap();
                let report = wdvv_scan(&p).unwrap();
                assert!(
                    report.passed(),
                    "{fam} N={n} failures: {:?}",
                    report.failures
                );
                assert!(report.quadruples_checked > 0 || n == 1);
            }
        }
    }

    #[test]
    fn wdvv_scan_catches_corruption() {
        let mut p = (*potential(Family::A, 4).unwrap()).clone();
        // Perturb with a quartic that keeps the metric intact but breaks
        // associativity.
        p.f
            .add_term(Monomial::from_pairs([(2, 2), (4, 2)]), frac(1, 3));
        let report = wdvv_scan(&p).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn structure_constants_at_zero_follow_fusion_rule() {
        // For A_N at the origin: c_{ab}^{a+b-1} = 1 when a+b <= N+1, and
        // every other entry vanishes.
        let n = 5u32;
        let p = potential(Family::A, n).unwrap();
        let c = structure_constants_at_zero(&p).unwrap();
        for a in 1..=n {
            for b in 1..=n {
                for g in 1..=n {
                    let expect = if a + b <= n + 1 && g == a + b - 1 {
                        rat(1)
                    } else {
                        rat(0)
                    };
                    assert_eq!(
                        c[(a - 1) as usize][(b - 1) as usize][(g - 1) as usize],
                        expect,
                        "a={a} b={b} g={g}"
                    );
                }
            }
        }
    }
}
