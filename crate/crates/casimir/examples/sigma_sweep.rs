//! Finite-conductivity energies of the first Fibonacci words over a
//! logarithmic sigma grid, as plot-ready CSV on stdout. Words with three or
//! more plates contract at small conductivity and expand past a single
//! crossing; the two-plate word repels everywhere.
//!
//! Run with `cargo run --release --example sigma_sweep > sweep.csv`.

use casimir::energy::{energy_for_stack, stack_from_word, PlateMaterial, QuadraturePolicy};
use casimir::lattice::{self, presets};

fn main() {
    let fib = presets::fibonacci();
    let policy = QuadraturePolicy::default();
    let n_points = 40;
    let (lo, hi) = (1e-2f64, 1e4f64);
    println!("sequence,I,n_plates,sigma,scaled_energy,method");
    for i in 1..=3u32 {
        let word = lattice::iterate(&fib, i).unwrap();
        for k in 0..n_points {
            let sigma = lo * (hi / lo).powf(k as f64 / (n_points - 1) as f64);
            let stack = stack_from_word(&word, PlateMaterial::Finite { sigma }, 1.0).unwrap();
            let e = energy_for_stack(&stack, 1.0, &policy).unwrap();
            println!(
                "fibonacci,{},{},{},{},{}",
                i,
                word.len(),
                sigma,
                e.value,
                e.method
            );
        }
    }
}
