//! The repulsive conductor-permeable pair: the ideal value 7/8 and its
//! saturation with growing optical conductivity.
//!
//! Run with `cargo run --release --example boyer`.

use casimir::energy::energy_pair;
use casimir::optics::Plate;

fn main() {
    let ideal = energy_pair(&Plate::IdealConductor, &Plate::IdealPermeable, 1.0).unwrap();
    println!(
        "ideal conductor + permeable pair:  E = {:+.12}  (7/8 = {:+.12})",
        ideal.value,
        7.0 / 8.0
    );
    let attract = energy_pair(&Plate::IdealConductor, &Plate::IdealConductor, 1.0).unwrap();
    println!(
        "ideal conductor pair:              E = {:+.12}",
        attract.value
    );
    println!();
    println!("finite-conductivity pair, scaled energy against sigma:");
    println!(
        "{:>10}  {:>16}  {:>12}",
        "sigma", "E / |E_cc|", "1 - E/(7/8)"
    );
    for exp in 0..=8 {
        let sigma = 10f64.powi(exp - 2);
        let e = energy_pair(
            &Plate::finite_dielectric(sigma).unwrap(),
            &Plate::finite_permeable(sigma).unwrap(),
            1.0,
        )
        .unwrap();
        println!(
            "{:>10.2e}  {:>16.12}  {:>12.3e}",
            sigma,
            e.value,
            1.0 - e.value / 0.875
        );
    }
    println!();
    println!("the energy rises toward 7/8 with a (2/sigma) ln(sigma) tail;");
    println!("a transparent pair (sigma = 0) does not interact at all.");
}
