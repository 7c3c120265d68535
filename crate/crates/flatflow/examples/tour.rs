//! A short tour: build a potential, check its laws, extract a coefficient
//! row, and assemble the flow equation it encodes.
//!
//! Run with: `cargo run --example tour`

use flatflow::family::Family;
use flatflow::fay::kp_fay_check;
use flatflow::frobenius::{metric_from_potential, wdvv_scan};
use flatflow::hierarchy::roundtrip_check;
use flatflow::{assemble_equation, extract_r, potential};

fn main() {
    // 1. A polynomial potential in flat coordinates, exact over the rationals.
    let f = potential(Family::A, 4).unwrap();
    println!("F_A4 = {}", f.f.render("t"));
    println!("quasihomogeneity: {}", f.euler_check());
    println!("flatness:         {}", f.flatness_check());

    // 2. Its metric is antidiagonal, and associativity holds identically.
    let eta = metric_from_potential(&f).unwrap();
    println!("eta(1,4) = {}", eta.entry(1, 4));
    let scan = wdvv_scan(&f).unwrap();
    println!(
        "associativity: {} quadruples, all zero: {}",
        scan.quadruples_checked,
        scan.passed()
    );

    // 3. Derivative coefficients stabilize as the dimension grows; one row
    //    of the stabilized table, extracted at its default dimension:
    let row = extract_r(Family::B, 2, 2, None).unwrap();
    for (gammas, value) in &row.entries {
        println!("R_B(2,2) {gammas:?} -> {value}");
    }

    // 4. The rows assemble into flow equations; this one is exact, and
    //    substituting the potential's derivatives back in reproduces the
    //    mixed second derivative it names.
    let eq = assemble_equation(Family::D, 2, 2).unwrap();
    println!("{}", eq.render());
    println!(
        "round-trip at N=6: {}",
        roundtrip_check(Family::D, 2, 2, 6).unwrap()
    );

    // 5. The whole table is equivalent to one generating identity.
    println!("kernel identity at N=4: {}", kp_fay_check(4, None).unwrap());
}
