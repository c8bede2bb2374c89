//! Growth laws of all eight preset substitution sequences with ideal
//! plates: fitted prefactor and rate of E ~ c e^{r I}, the limiting
//! consecutive ratio, and whether the stack expands or contracts.
//!
//! Run with `cargo run --release --example growth_table`.

use casimir::energy::{energy_ideal_at, growth_fit};
use casimir::lattice::presets;

fn main() {
    println!(
        "{:<16} {:>11} {:>8} {:>10} {:>10}   behaviour",
        "sequence", "prefactor", "rate", "ratio", "E(5)"
    );
    for name in presets::NAMES {
        let sys = presets::by_name(name).unwrap();
        let ladder: Vec<(u32, f64)> = (9..=25)
            .map(|i| (i, energy_ideal_at(&sys, i, 1.0).unwrap().value))
            .collect();
        let fit = growth_fit(&ladder).unwrap();
        let ratio = fit.ratios.last().copied().unwrap();
        let e5 = energy_ideal_at(&sys, 5, 1.0).unwrap().value;
        let behaviour = if e5 > 0.0 { "expands" } else { "contracts" };
        println!(
            "{:<16} {:>11.4} {:>8.4} {:>10.4} {:>10.3}   {}",
            name, fit.prefactor, fit.rate, ratio, e5, behaviour
        );
    }
    println!();
    println!("rates are logarithms of the substitution growth factors:");
    println!("  ln(golden)  = {:.4}", ((1.0 + 5f64.sqrt()) / 2.0f64).ln());
    println!("  ln(2)       = {:.4}", 2f64.ln());
    println!("  ln(silver)  = {:.4}", (1.0 + 2f64.sqrt()).ln());
    println!(
        "  ln(bronze)  = {:.4}",
        ((3.0 + 13f64.sqrt()) / 2.0f64).ln()
    );
    println!("  ln(3)       = {:.4}", 3f64.ln());
}
