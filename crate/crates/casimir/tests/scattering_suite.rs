//! Composition-expansion structure and transfer-matrix equivalence on a
//! large randomized stack population.

mod support;

use std::collections::BTreeSet;

use casimir::optics::{Mode, Plate};
use casimir::scattering::{
    compositions, delta_far, delta_nn, delta_oracle, delta_total, expansion_terms, Stack,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::{random_finite_stack, random_point};

#[test]
fn expansion_term_count_doubles_per_plate() {
    for n_plates in 2..=7usize {
        let comps = compositions(n_plates - 1).unwrap();
        assert_eq!(comps.len(), 1 << (n_plates - 2), "n = {n_plates}");
        for c in &comps {
            assert_eq!(c.parts().iter().sum::<usize>(), n_plates - 1);
            assert!(c.parts().iter().all(|&p| p >= 1));
        }
    }
}

/// Chains over all compositions reference every unordered plate pair (i, k)
/// exactly once: N (N - 1) / 2 distinct scattering factors.
#[test]
fn expansion_references_all_pair_factors() {
    for n_plates in 2..=7usize {
        let terms = expansion_terms(n_plates).unwrap();
        assert_eq!(terms.len(), 1 << (n_plates - 2));
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for term in &terms {
            assert_eq!(term.factors.len(), term.composition.parts().len());
            pairs.extend(term.factors.iter().copied());
        }
        assert_eq!(pairs.len(), n_plates * (n_plates - 1) / 2, "n = {n_plates}");
    }
}

/// The numeric total equals the symbolic expansion evaluated term by term.
#[test]
fn total_equals_symbolic_term_sum() {
    let mut rng = StdRng::seed_from_u64(31);
    for n in 2..=6usize {
        let stack = random_finite_stack(&mut rng, n);
        let pt = random_point(&mut rng);
        for mode in Mode::BOTH {
            let mut sum = 0.0;
            for term in expansion_terms(n).unwrap() {
                let mut product = 1.0;
                for &(i, k) in &term.factors {
                    product *= if k == i + 1 {
                        delta_nn(&stack, i, &pt, mode).unwrap()
                    } else {
                        delta_far(&stack, i, k, &pt, mode).unwrap()
                    };
                }
                sum += product;
            }
            let total = delta_total(&stack, &pt, mode).unwrap();
            assert!(
                (total - sum).abs() <= 1e-13 * sum.abs(),
                "n={n} {mode:?}: {total} vs {sum}"
            );
        }
    }
}

#[test]
fn expansion_agrees_with_transfer_matrix_on_random_stacks() {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=6usize);
        let stack = random_finite_stack(&mut rng, n);
        let pt = random_point(&mut rng);
        for mode in Mode::BOTH {
            let expansion = delta_total(&stack, &pt, mode).unwrap();
            let oracle = delta_oracle(&stack, &pt, mode).unwrap();
            // Positivity of the scattering parameter, needed for ln Delta.
            assert!(
                expansion > 0.0,
                "non-positive delta {expansion} for {stack:?}"
            );
            assert!(oracle > 0.0);
            let rel = (expansion - oracle).abs() / oracle.abs();
            worst = worst.max(rel);
            assert!(
                rel < 1e-12,
                "relative deviation {rel} at n={n} mode={mode:?}"
            );
        }
    }
    println!("worst relative deviation over 1000 stacks: {worst:.3e}");
}

#[test]
fn ideal_stacks_factorize_exactly_at_any_size() {
    let mut rng = StdRng::seed_from_u64(7);
    for &n in &[2usize, 5, 17, 60] {
        let plates: Vec<Plate> = (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    Plate::IdealConductor
                } else {
                    Plate::IdealPermeable
                }
            })
            .collect();
        let mut positions = vec![0.0];
        for _ in 1..n {
            positions.push(positions.last().unwrap() + rng.random_range(0.4..2.0));
        }
        let stack = Stack::new(plates, positions).unwrap();
        let pt = random_point(&mut rng);
        for mode in Mode::BOTH {
            let total = delta_total(&stack, &pt, mode).unwrap();
            let mut product = 1.0;
            for i in 0..n - 1 {
                product *= delta_nn(&stack, i, &pt, mode).unwrap();
            }
            assert_eq!(total, product);
        }
    }
}

/// With an opaque middle plate the beyond-nearest factor dies and the
/// three-plate parameter collapses to the nearest-neighbour product.
#[test]
fn opaque_intermediate_reduces_to_nearest_neighbour_product() {
    let stack = Stack::uniform(
        vec![
            Plate::finite_dielectric(3.0).unwrap(),
            Plate::IdealPermeable,
            Plate::finite_dielectric(1.5).unwrap(),
        ],
        0.9,
    )
    .unwrap();
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..20 {
        let pt = random_point(&mut rng);
        for mode in Mode::BOTH {
            let total = delta_total(&stack, &pt, mode).unwrap();
            let product =
                delta_nn(&stack, 0, &pt, mode).unwrap() * delta_nn(&stack, 1, &pt, mode).unwrap();
            assert!((total - product).abs() <= 1e-14 * product.abs());
        }
    }
}
