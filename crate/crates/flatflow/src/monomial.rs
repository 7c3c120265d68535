//! Monomials in countably many indexed variables.
//!
//! A [`Monomial`] is a finite set of `(variable index, exponent)` pairs with
//! all exponents positive, kept sorted by index. Variable indices start at 1;
//! the same monomial type serves the flat coordinates `t1, t2, ...`, the
//! auxiliary coordinates `v1, v2, ...` and the hierarchy alphabet
//! `p1, p2, ...` — the variable *name* is supplied only when rendering.
//!
//! # Canonical order
//!
//! `Ord` implements the term order used for rendering and serialization:
//! higher total degree first; within a degree, higher exponent on the
//! lowest-indexed variable first. Iterating a `BTreeMap<Monomial, _>` in
//! ascending key order therefore visits terms in display order, e.g.
//! `p1^3, p1*p2, p3`.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// `(index, exponent)` pairs, sorted by index, exponents > 0.
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    /// The empty monomial `1`.
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// The single variable `x_idx`.
    pub fn var(idx: u32) -> Self {
        Self::var_pow(idx, 1)
    }

    /// `x_idx^e`; `e = 0` gives `1`.
    pub fn var_pow(idx: u32, e: u32) -> Self {
        assert!(idx >= 1, "variable indices start at 1");
        if e == 0 {
            Self::one()
        } else {
            Monomial {
                exps: vec![(idx, e)],
            }
        }
    }

    /// Build from arbitrary `(index, exponent)` pairs; merges repeats,
    /// drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut exps: Vec<(u32, u32)> = Vec::new();
        for (idx, e) in pairs {
            assert!(idx >= 1, "variable indices start at 1");
            if e == 0 {
                continue;
            }
            match exps.binary_search_by_key(&idx, |&(i, _)| i) {
                Ok(pos) => exps[pos].1 += e,
                Err(pos) => exps.insert(pos, (idx, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree (sum of exponents).
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent of `x_idx` (0 if absent).
    pub fn exp(&self, idx: u32) -> u32 {
        self.exps
            .binary_search_by_key(&idx, |&(i, _)| i)
            .map(|pos| self.exps[pos].1)
            .unwrap_or(0)
    }

    /// Largest variable index present, or 0 for the empty monomial.
    pub fn max_var(&self) -> u32 {
        self.exps.last().map(|&(i, _)| i).unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    exps.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps }
    }

    /// Divide by `x_idx` once, returning the old exponent; `None` if absent.
    /// This is the monomial part of partial differentiation.
    pub fn derive(&self, idx: u32) -> Option<(u32, Monomial)> {
        let pos = self.exps.binary_search_by_key(&idx, |&(i, _)| i).ok()?;
        let e = self.exps[pos].1;
        let mut exps = self.exps.clone();
        if e == 1 {
            exps.remove(pos);
        } else {
            exps[pos].1 = e - 1;
        }
        Some((e, Monomial { exps }))
    }

    /// Does `x_idx` occur?
    pub fn contains(&self, idx: u32) -> bool {
        self.exp(idx) > 0
    }

    /// Rename variables through `f`; `f` must be injective on the support.
    pub fn reindex(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(i, e)| (f(i), e)))
    }

    /// Render with the given variable name: `t1^2*t3`. The empty monomial
    /// renders as `1`.
    pub fn render(&self, var: &str) -> String {
        if self.exps.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (k, &(idx, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                out.push('*');
            }
            out.push_str(var);
            out.push_str(&idx.to_string());
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Higher degree first.
        match other.degree().cmp(&self.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Same degree: walk indices ascending; a higher exponent on an
        // earlier variable comes first.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                // `self` ran out of low variables: its remaining weight sits
                // on higher indices, so `other` (with something at a lower
                // index) comes first.
                (None, Some(_)) => return Ordering::Greater,
                (Some(_), None) => return Ordering::Less,
                (Some(&(ia, ea)), Some(&(ib, eb))) => match ia.cmp(&ib) {
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => {
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}
