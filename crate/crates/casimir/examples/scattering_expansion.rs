//! The composition expansion of the multiple-scattering parameter: term
//! structure for a five-plate stack and agreement with the transfer-matrix
//! route.
//!
//! Run with `cargo run --release --example scattering_expansion`.

use casimir::optics::{Mode, Plate, SpectralPoint};
use casimir::scattering::{delta_far, delta_nn, delta_oracle, delta_total, expansion_terms, Stack};

fn main() {
    let labels = ["i", "j", "k", "l", "m"];
    println!("compositions of N-1 and their factor chains for N = 5 plates:");
    for term in expansion_terms(5).unwrap() {
        let chain: Vec<String> = term
            .factors
            .iter()
            .map(|&(i, k)| format!("D[{}{}]", labels[i], labels[k]))
            .collect();
        println!("  {:?} -> {}", term.composition.parts(), chain.join(" "));
    }

    let stack = Stack::new(
        vec![
            Plate::finite_dielectric(2.0).unwrap(),
            Plate::finite_permeable(0.8).unwrap(),
            Plate::finite_dielectric(4.5).unwrap(),
            Plate::finite_permeable(1.3).unwrap(),
            Plate::finite_dielectric(0.6).unwrap(),
        ],
        vec![0.0, 0.7, 1.5, 2.6, 3.2],
    )
    .unwrap();
    let pt = SpectralPoint::new(0.6, 0.8).unwrap();

    println!();
    println!("factor values at zeta = 0.6, kperp = 0.8 (TM):");
    for i in 0..4 {
        println!(
            "  D[{}{}] = {:+.9}",
            labels[i],
            labels[i + 1],
            delta_nn(&stack, i, &pt, Mode::Tm).unwrap()
        );
    }
    for i in 0..3 {
        for k in i + 2..5 {
            println!(
                "  D[{}{}] = {:+.9}",
                labels[i],
                labels[k],
                delta_far(&stack, i, k, &pt, Mode::Tm).unwrap()
            );
        }
    }

    println!();
    for mode in Mode::BOTH {
        let expansion = delta_total(&stack, &pt, mode).unwrap();
        let oracle = delta_oracle(&stack, &pt, mode).unwrap();
        println!(
            "{mode:?}: expansion = {expansion:.15}, transfer matrix = {oracle:.15}, rel diff = {:.1e}",
            (expansion - oracle).abs() / oracle
        );
    }
}
