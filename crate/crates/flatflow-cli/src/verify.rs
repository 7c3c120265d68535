//! Implementations behind `flatflow verify ...`.
//!
//! Each function fills a [`RunReport`]; the caller decides rendering and
//! exit code. Check identifiers are stable strings — reports are merged
//! and sorted by identifier, never by completion order.

use serde_json::json;

use flatflow::combinatorics::{partitions, verify_a_enumerative, verify_d_enumerative};
use flatflow::family::Family;
use flatflow::fay::fay_report;
use flatflow::frobenius::wdvv_scan;
use flatflow::hierarchy::{compatibility_check, roundtrip_check, stabilization_verify};
use flatflow::potentials::{b_via_d_check, potential};
use flatflow::rational::frac;
use flatflow::{Monomial, Polynomial, Result};

use crate::report::RunReport;

pub fn verify_wdvv(family: Family, n: u32, report: &mut RunReport) -> Result<()> {
    let p = potential(family, n)?;
    let scan = wdvv_scan(&p)?;
    report.checks_run += scan.quadruples_checked;
    report.extra.insert(
        "quadruples_checked".into(),
        json!(scan.quadruples_checked),
    );
    for (a, b, g, s) in &scan.failures {
        report.fail(
            format!("wdvv:{family}:{n}:({a},{b},{g},{s})"),
            Some("nonzero associativity residual".into()),
        );
    }
    Ok(())
}

pub fn verify_stabilization(
    family: Family,
    n1: u32,
    n2: u32,
    report: &mut RunReport,
) -> Result<()> {
    let lo = n1.min(n2);
    let mut pairs = Vec::new();
    for a in 1..=lo {
        for b in a..=lo {
            if family.stable_pair(lo, a, b) {
                pairs.push((a, b));
            }
        }
    }
    for (a, b) in pairs {
        report.checks_run += 1;
        if !stabilization_verify(family, n1, n2, a, b)? {
            report.fail(
                format!("stabilization:{family}:({a},{b}):{n1}vs{n2}"),
                Some("relabeled second derivatives differ".into()),
            );
        }
    }
    Ok(())
}

/// In-range gate for a compatibility triple: both flows must exist at `n`.
fn compat_in_range(family: Family, a: u32, b: u32, g: u32, n: u32) -> bool {
    match family {
        Family::A | Family::B => a + b <= n + 1 && a + g <= n + 1 && b <= n && g <= n,
        Family::D => a + b < n && a + g < n,
    }
}

pub fn verify_compatibility(
    family: Family,
    triple: Option<(u32, u32, u32)>,
    n: u32,
    report: &mut RunReport,
) -> Result<()> {
    let mut run = |a: u32, b: u32, g: u32| -> Result<()> {
        report.checks_run += 1;
        if !compatibility_check(family, a, b, g, n)? {
            report.fail(
                format!("compatibility:{family}:({a},{b},{g}):{n}"),
                Some("cross-derivatives of the two flows differ".into()),
            );
        }
        Ok(())
    };
    match triple {
        Some((a, b, g)) => run(a, b, g)?,
        None => {
            // bounded scan: all triples with indices <= min(4, n)
            let top = n.min(4);
            for a in 1..=top {
                for b in 1..=top {
                    for g in b..=top {
                        if compat_in_range(family, a, b, g, n) {
                            run(a, b, g)?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn verify_enumerative(family: Family, n: u32, report: &mut RunReport) -> Result<()> {
    match family {
        Family::A => {
            for a in 1..=n {
                for b in a..=n {
                    if a + b > n + 1 {
                        continue;
                    }
                    for m in 1..=(a + b - 1) {
                        for gs in partitions(a + b - m, n) {
                            if gs.len() as u32 != m {
                                continue;
                            }
                            report.checks_run += 1;
                            if !verify_a_enumerative(n, a, b, &gs)? {
                                report.fail(
                                    format!("enumerative:A:{n}:({a},{b};{gs:?})"),
                                    Some("derivative disagrees with composition count".into()),
                                );
                            }
                        }
                    }
                }
            }
        }
        Family::D => {
            for a in 1..n {
                for b in a..n {
                    if a + b > n {
                        continue;
                    }
                    for gs in partitions(a + b - 1, n - 1) {
                        report.checks_run += 1;
                        if !verify_d_enumerative(n, a, b, &gs)? {
                            report.fail(
                                format!("enumerative:D:{n}:({a},{b};{gs:?})"),
                                Some("derivative disagrees with composition count".into()),
                            );
                        }
                    }
                }
            }
        }
        Family::B => unreachable!("rejected during argument validation"),
    }
    Ok(())
}

pub fn verify_fay(family: Family, n: u32, cap: Option<u32>, report: &mut RunReport) -> Result<()> {
    let fr = fay_report(family, n, cap)?;
    report.checks_run += fr.checks.len() as u64;
    report.extra.insert("cap".into(), json!(fr.cap));
    report
        .extra
        .insert("coefficients".into(), json!(fr.checks));
    report
        .extra
        .insert("first_mismatch".into(), json!(fr.failures.first()));
    for id in &fr.failures {
        report.fail(
            format!("fay:{family}:{n}:{id}"),
            Some("series coefficients differ".into()),
        );
    }
    Ok(())
}

/// The full aggregate: every machine-checkable statement the library
/// exposes, over dimensions clipped to `max_n`.
pub fn verify_all(max_n: u32, seed: u64, report: &mut RunReport) -> Result<()> {
    // potential construction sanity: scaling symmetry + metric flatness
    let dims = |fam: Family, hi: u32| -> Vec<u32> {
        (fam.min_n()..=hi.min(max_n)).collect::<Vec<_>>()
    };
    for fam in [Family::A, Family::B, Family::D] {
        let hi = match fam {
            Family::A | Family::D => 8,
            Family::B => 6,
        };
        for n in dims(fam, hi) {
            let p = potential(fam, n)?;
            report.checks_run += 2;
            if !p.euler_check() {
                report.fail(format!("euler:{fam}:{n}"), None);
            }
            if !p.flatness_check() {
                report.fail(format!("flatness:{fam}:{n}"), None);
            }
            verify_wdvv(fam, n, report)?;
        }
    }
    report.extra.remove("quadruples_checked");

    // B potentials sit inside D one dimension up
    for n in 3..=7u32.min(max_n.saturating_sub(1)) {
        report.checks_run += 1;
        if let Err(e) = b_via_d_check(n) {
            report.fail(format!("restriction:B{n}=D{}|0", n + 1), Some(e.to_string()));
        }
    }

    // stabilization windows
    let windows: &[(Family, u32, u32)] = &[
        (Family::A, 4, 6),
        (Family::A, 5, 7),
        (Family::A, 6, 8),
        (Family::B, 3, 5),
        (Family::B, 4, 6),
        (Family::D, 4, 6),
        (Family::D, 5, 7),
        (Family::D, 6, 8),
    ];
    for &(fam, n1, n2) in windows {
        if n2 <= max_n {
            verify_stabilization(fam, n1, n2, report)?;
        }
    }

    // assembled equations round-trip through the potentials
    let top = 8u32.min(max_n);
    for fam in [Family::A, Family::B] {
        let n = top.min(if fam == Family::B { 6 } else { 8 });
        if n < fam.min_n() {
            continue;
        }
        for a in 1..=n {
            for b in a..=n {
                if a + b > n + 1 {
                    continue;
                }
                report.checks_run += 1;
                if !roundtrip_check(fam, a, b, n)? {
                    report.fail(format!("roundtrip:{fam}:({a},{b}):{n}"), None);
                }
            }
        }
    }
    if top >= 4 {
        for a in 1..top {
            for b in a..top {
                if a + b > top - 1 {
                    continue;
                }
                report.checks_run += 1;
                if !roundtrip_check(Family::D, a, b, top)? {
                    report.fail(format!("roundtrip:D:({a},{b}):{top}"), None);
                }
            }
        }
        for b in 1..=(top - 2) {
            report.checks_run += 1;
            if !roundtrip_check(Family::D, 0, b, top)? {
                report.fail(format!("roundtrip:D:(0,{b}):{top}"), None);
            }
        }
    }

    // compatibility of flows
    for fam in [Family::A, Family::B, Family::D] {
        let n = top.min(if fam == Family::B { 6 } else { 8 });
        if n >= fam.min_n() {
            verify_compatibility(fam, None, n, report)?;
        }
    }

    // enumerative oracles
    if max_n >= 1 {
        verify_enumerative(Family::A, 6u32.min(max_n), report)?;
    }
    if max_n >= 4 {
        verify_enumerative(Family::D, 6u32.min(max_n), report)?;
    }

    // generating-series identities
    for n in 1..=5u32.min(max_n) {
        verify_fay(Family::A, n, None, report)?;
    }
    for n in 2..=4u32.min(max_n) {
        verify_fay(Family::B, n, None, report)?;
    }
    for n in 4..=5u32.min(max_n) {
        verify_fay(Family::D, n, None, report)?;
    }
    report.extra.remove("cap");
    report.extra.remove("coefficients");
    report.extra.remove("first_mismatch");

    // seeded randomized spot-checks of the exact-algebra kernel
    random_algebra_pass(seed, report);
    Ok(())
}

/// Deterministic xorshift64* stream.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn poly(&mut self) -> Polynomial {
        let mut p = Polynomial::zero();
        for _ in 0..=self.below(4) {
            let mut pairs = Vec::new();
            for v in 1..=3u32 {
                let e = self.below(3) as u32;
                if e > 0 {
                    pairs.push((v, e));
                }
            }
            let num = self.below(19) as i64 - 9;
            let den = self.below(4) as i64 + 1;
            p.add_term(Monomial::from_pairs(pairs), frac(num, den));
        }
        p
    }
}

/// Ring-axiom and Leibniz spot-checks on pseudo-random polynomials; the
/// seed makes failures reproducible from the report alone.
fn random_algebra_pass(seed: u64, report: &mut RunReport) {
    let mut rng = Rng(seed.wrapping_mul(2862933555777941757).wrapping_add(1));
    for i in 0..24 {
        let a = rng.poly();
        let b = rng.poly();
        let c = rng.poly();
        let idx = rng.below(3) as u32 + 1;
        let ok = a.mul(&b) == b.mul(&a)
            && a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c))
            && a.add(&a.neg()).is_zero()
            && a.mul(&b).derive(idx)
                == a.derive(idx).mul(&b).add(&a.mul(&b.derive(idx)));
        report.checks_run += 1;
        if !ok {
            report.fail(
                format!("algebra:seed={seed}:case={i}"),
                Some("ring/Leibniz law violated".into()),
            );
        }
    }
}
