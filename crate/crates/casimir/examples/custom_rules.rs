//! Define a substitution system in the rule DSL, inspect its words, and
//! compute ideal and finite-conductivity energies.
//!
//! Run with `cargo run --release --example custom_rules`.

use casimir::energy::{
    energy_for_stack, energy_ideal_at, stack_from_word, PlateMaterial, QuadraturePolicy,
};
use casimir::lattice::{iterate, parse_rules, stats_at};

fn main() {
    // A three-letter-per-step variant: D -> D N D, N -> D D.
    let text = "axiom D;\nD -> D N D;\nN -> D D;";
    let system = parse_rules(text).unwrap();
    println!("rules:\n{}", system.to_dsl());

    println!(
        "{:<4} {:>8} {:>6} {:>8} {:>10}   word",
        "I", "plates", "like", "unlike", "E(ideal)"
    );
    for i in 0..=6u32 {
        let stats = stats_at(&system, i).unwrap();
        let e = energy_ideal_at(&system, i, 1.0).unwrap();
        let word = if stats.n_plates <= 30 {
            iterate(&system, i).unwrap().to_string()
        } else {
            "...".into()
        };
        println!(
            "{:<4} {:>8} {:>6} {:>8} {:>10.4}   {}",
            i, stats.n_plates, stats.n_like, stats.n_unlike, e.value, word
        );
    }

    println!();
    println!("finite plates at iteration 2, scaled energy against sigma:");
    let word = iterate(&system, 2).unwrap();
    let policy = QuadraturePolicy::default();
    for sigma in [0.1, 1.0, 10.0, 100.0, 1000.0] {
        let stack = stack_from_word(&word, PlateMaterial::Finite { sigma }, 1.0).unwrap();
        let e = energy_for_stack(&stack, 1.0, &policy).unwrap();
        println!("  sigma {sigma:>8.1}:  E = {:+.8}  ({})", e.value, e.method);
    }
}
