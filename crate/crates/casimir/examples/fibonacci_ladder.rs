//! Ideal-plate energies of the Fibonacci words and the golden ratio of
//! consecutive iterations.
//!
//! Run with `cargo run --release --example fibonacci_ladder`.

use casimir::energy::{energy_ideal_at, ideal_energy_eighths};
use casimir::lattice::{self, presets};

fn main() {
    let fib = presets::fibonacci();
    println!(
        "{:<4} {:>9} {:>8} {:>8} {:>12} {:>10}",
        "I", "plates", "like", "unlike", "E (eighths)", "E"
    );
    for i in 0..=10u32 {
        let stats = lattice::stats_at(&fib, i).unwrap();
        let e = energy_ideal_at(&fib, i, 1.0).unwrap();
        let word = if stats.n_plates <= 13 {
            lattice::iterate(&fib, i).unwrap().to_string()
        } else {
            String::new()
        };
        println!(
            "{:<4} {:>9} {:>8} {:>8} {:>9}/8 {:>10.4}   {}",
            i,
            stats.n_plates,
            stats.n_like,
            stats.n_unlike,
            ideal_energy_eighths(&stats),
            e.value,
            word
        );
    }
    println!();
    println!("consecutive energy ratios E(I+1)/E(I):");
    let mut prev = energy_ideal_at(&fib, 1, 1.0).unwrap().value;
    for i in 2..=25u32 {
        let e = energy_ideal_at(&fib, i, 1.0).unwrap().value;
        if i % 4 == 0 || i >= 23 {
            println!("  I={i:<3} ratio = {:.9}", e / prev);
        }
        prev = e;
    }
    println!("  golden ratio  = {:.9}", (1.0 + 5f64.sqrt()) / 2.0);
}
