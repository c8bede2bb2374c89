//! Every region-matrix entry, the jump relations, and the transition-matrix
//! reconstruction, checked against an independent boundary-value solver.

mod support;

use casimir::greens::{
    greens_value, greens_via_transition, transition_matrix, transition_matrix_general,
};
use casimir::optics::{Mode, Plate};
use casimir::scattering::{delta_total, Stack};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::{greens_boundary_value, off_plate, random_point};

fn finite_test_stacks() -> Vec<Stack> {
    vec![
        Stack::new(vec![Plate::general(1.3, 0.4).unwrap()], vec![0.2]).unwrap(),
        Stack::new(
            vec![
                Plate::general(1.3, 0.4).unwrap(),
                Plate::general(0.7, 2.1).unwrap(),
            ],
            vec![0.0, 0.9],
        )
        .unwrap(),
        Stack::new(
            vec![
                Plate::finite_dielectric(2.0).unwrap(),
                Plate::finite_permeable(1.1).unwrap(),
                Plate::general(0.5, 0.8).unwrap(),
            ],
            vec![-0.4, 0.6, 1.7],
        )
        .unwrap(),
    ]
}

/// One sample strictly inside every slab, off the slab midpoint. Midpoints
/// make the two exponential components of a slab coincide, which would mask
/// transposed matrix entries.
fn slab_samples(stack: &Stack, offset: f64) -> Vec<f64> {
    let n = stack.len();
    let mut samples = vec![stack.position(0) - 0.45 - offset];
    for i in 0..n - 1 {
        let (a, b) = (stack.position(i), stack.position(i + 1));
        samples.push(a + (0.27 + offset) * (b - a));
    }
    samples.push(stack.position(n - 1) + 0.61 + offset);
    samples
}

#[test]
fn every_region_matches_boundary_value_solver() {
    let mut rng = StdRng::seed_from_u64(11);
    for stack in finite_test_stacks() {
        for _ in 0..12 {
            let pt = random_point(&mut rng);
            for mode in Mode::BOTH {
                for &z in &slab_samples(&stack, 0.08) {
                    for &zp in &slab_samples(&stack, 0.16) {
                        let direct = greens_value(&stack, &pt, mode, z, zp).unwrap();
                        let oracle = greens_boundary_value(&stack, &pt, mode, z, zp);
                        let rel = (direct - oracle).abs() / oracle.abs().max(1e-30);
                        assert!(
                            rel < 1e-10,
                            "n={} mode={mode:?} z={z} zp={zp}: {direct} vs {oracle}",
                            stack.len()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn reciprocity_at_random_points() {
    let mut rng = StdRng::seed_from_u64(12);
    for stack in finite_test_stacks() {
        for mode in Mode::BOTH {
            for _ in 0..100 {
                let pt = random_point(&mut rng);
                let z = off_plate(&mut rng, &stack, 1e-4);
                let zp = off_plate(&mut rng, &stack, 1e-4);
                let a = greens_value(&stack, &pt, mode, z, zp).unwrap();
                let b = greens_value(&stack, &pt, mode, zp, z).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()),
                    "n={} mode={mode:?}: {a} vs {b}",
                    stack.len()
                );
            }
        }
    }
}

#[test]
fn te_equals_tm_of_coupling_swapped_stack() {
    let mut rng = StdRng::seed_from_u64(13);
    for stack in finite_test_stacks() {
        let dual = stack.dual();
        for _ in 0..100 {
            let pt = random_point(&mut rng);
            let z = off_plate(&mut rng, &stack, 1e-4);
            let zp = off_plate(&mut rng, &stack, 1e-4);
            let te = greens_value(&stack, &pt, Mode::Te, z, zp).unwrap();
            let tm = greens_value(&dual, &pt, Mode::Tm, z, zp).unwrap();
            assert!((te - tm).abs() <= 1e-12 * te.abs());
        }
    }
}

/// The value jump must equal the coupling times the mean one-sided slope
/// (and the slope jump the dual relation); with one-sided differences of
/// step h both residuals are O(h).
#[test]
fn jump_relations_vanish_linearly_in_step() {
    let mut rng = StdRng::seed_from_u64(14);
    for stack in finite_test_stacks() {
        for mode in Mode::BOTH {
            for plate_idx in 0..stack.len() {
                let pt = random_point(&mut rng);
                let zeta = pt.zeta();
                let a = stack.position(plate_idx);
                let mut zp = off_plate(&mut rng, &stack, 1e-3);
                while (zp - a).abs() < 0.06 {
                    zp = off_plate(&mut rng, &stack, 1e-3);
                }
                let (lambda_e, lambda_g) = match *stack.plate(plate_idx) {
                    Plate::General { lambda_e, lambda_g } => (lambda_e, lambda_g),
                    Plate::FiniteDielectric { sigma } => (sigma / zeta, 0.0),
                    Plate::FinitePermeable { sigma } => (0.0, sigma / zeta),
                    _ => unreachable!("finite stacks only"),
                };
                let (lam_value, lam_slope) = match mode {
                    Mode::Tm => (lambda_e, lambda_g),
                    Mode::Te => (lambda_g, lambda_e),
                };
                let residuals = |h: f64| {
                    let g = |z: f64| greens_value(&stack, &pt, mode, z, zp).unwrap();
                    let (g1p, g2p) = (g(a + h), g(a + 2.0 * h));
                    let (g1m, g2m) = (g(a - h), g(a - 2.0 * h));
                    let d_plus = (g2p - g1p) / h;
                    let d_minus = (g1m - g2m) / h;
                    let value = g1p - g1m - 0.5 * lam_value * (d_plus + d_minus);
                    let slope = d_plus - d_minus - 0.5 * zeta * zeta * lam_slope * (g1p + g1m);
                    (value.abs(), slope.abs())
                };
                let (v0, s0) = residuals(1e-3);
                let (v1, s1) = residuals(5e-4);
                let (v2, s2) = residuals(2.5e-4);
                let floor = 1e-11;
                assert!(
                    v1 <= 0.75 * v0 + floor && v2 <= 0.75 * v1 + floor,
                    "value residuals {v0} {v1} {v2} at plate {plate_idx} mode {mode:?}"
                );
                assert!(
                    s1 <= 0.75 * s0 + floor && s2 <= 0.75 * s1 + floor,
                    "slope residuals {s0} {s1} {s2} at plate {plate_idx} mode {mode:?}"
                );
            }
        }
    }
}

/// The Green's function is continuous across the z = z' diagonal and its
/// z-derivative jumps by exactly -1 there (the source normalization of the
/// 1D Helmholtz operator).
#[test]
fn source_point_kink_is_continuous_with_unit_derivative_jump() {
    let mut rng = StdRng::seed_from_u64(19);
    for stack in finite_test_stacks() {
        for mode in Mode::BOTH {
            for _ in 0..20 {
                let pt = random_point(&mut rng);
                let zp = off_plate(&mut rng, &stack, 2e-2);
                let g = |z: f64| greens_value(&stack, &pt, mode, z, zp).unwrap();
                for h in [1e-5, 5e-6] {
                    // Value continuity at the kink.
                    assert!((g(zp + h) - g(zp - h)).abs() < 3.0 * h * g(zp + h).abs().max(1.0));
                }
                // One-sided slopes straddling z = z'.
                let h = 1e-5;
                let d_plus = (g(zp + 2.0 * h) - g(zp + h)) / h;
                let d_minus = (g(zp - h) - g(zp - 2.0 * h)) / h;
                let jump = d_plus - d_minus;
                assert!(
                    (jump + 1.0).abs() < 1e-3,
                    "derivative jump {jump} at zp={zp} mode={mode:?}"
                );
            }
        }
    }
}

fn mode_pure_stack(n: usize, mode: Mode, gaps: &[f64]) -> Stack {
    let plates: Vec<Plate> = (0..n)
        .map(|i| {
            let sigma = 0.7 + 0.8 * i as f64;
            match mode {
                Mode::Tm => Plate::finite_permeable(sigma).unwrap(),
                Mode::Te => Plate::finite_dielectric(sigma).unwrap(),
            }
        })
        .collect();
    let mut positions = vec![0.0];
    for g in gaps.iter().take(n - 1) {
        positions.push(positions.last().unwrap() + g);
    }
    Stack::new(plates, positions).unwrap()
}

#[test]
fn transition_reconstruction_matches_regions_for_small_stacks() {
    let mut rng = StdRng::seed_from_u64(15);
    for n in 1..=3usize {
        for mode in Mode::BOTH {
            let stack = mode_pure_stack(n, mode, &[0.8, 1.3]);
            for _ in 0..100 {
                let pt = random_point(&mut rng);
                // Pick a slab and two interior points of it.
                let slab = rng.random_range(0..=n);
                let (lo, hi) = if slab == 0 {
                    (stack.position(0) - 1.2, stack.position(0) - 1e-3)
                } else if slab == n {
                    (stack.position(n - 1) + 1e-3, stack.position(n - 1) + 1.2)
                } else {
                    (stack.position(slab - 1) + 1e-3, stack.position(slab) - 1e-3)
                };
                let z = rng.random_range(lo..hi);
                let zp = rng.random_range(lo..hi);
                let direct = greens_value(&stack, &pt, mode, z, zp).unwrap();
                let via = greens_via_transition(&stack, &pt, mode, z, zp).unwrap();
                assert!(
                    (direct - via).abs() <= 1e-12 * direct.abs(),
                    "n={n} mode={mode:?}: {direct} vs {via}"
                );
            }
        }
    }
}

#[test]
fn four_plate_transition_matches_boundary_value_solver() {
    let mut rng = StdRng::seed_from_u64(16);
    for mode in Mode::BOTH {
        let stack = mode_pure_stack(4, mode, &[0.8, 1.3, 0.6]);
        for _ in 0..60 {
            let pt = random_point(&mut rng);
            let slab = rng.random_range(0..=4usize);
            let (lo, hi) = if slab == 0 {
                (stack.position(0) - 1.2, stack.position(0) - 1e-3)
            } else if slab == 4 {
                (stack.position(3) + 1e-3, stack.position(3) + 1.2)
            } else {
                (stack.position(slab - 1) + 1e-3, stack.position(slab) - 1e-3)
            };
            let z = rng.random_range(lo..hi);
            let zp = rng.random_range(lo..hi);
            let via = greens_via_transition(&stack, &pt, mode, z, zp).unwrap();
            let oracle = greens_boundary_value(&stack, &pt, mode, z, zp);
            assert!(
                (via - oracle).abs() <= 1e-10 * oracle.abs(),
                "mode={mode:?} slab={slab}: {via} vs {oracle}"
            );
        }
    }
}

/// The multiple-scattering system behind the general transition matrix has
/// determinant equal to the composition-expansion Delta for mode-pure
/// stacks, for any plate count and spacing.
#[test]
fn transition_system_determinant_equals_delta() {
    let mut rng = StdRng::seed_from_u64(17);
    for n in 2..=6usize {
        for mode in Mode::BOTH {
            let gaps: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.3..1.8)).collect();
            let stack = mode_pure_stack(n, mode, &gaps);
            for _ in 0..20 {
                let pt = random_point(&mut rng);
                let r: Vec<f64> = stack
                    .plates()
                    .iter()
                    .map(|p| casimir::optics::coefficients(p, &pt).r(mode))
                    .collect();
                let dim = n;
                let mut m = vec![0.0; dim * dim];
                for row in 0..dim {
                    for col in 0..dim {
                        m[row * dim + col] = if row == col {
                            1.0
                        } else {
                            let x = (-(pt.kappa())
                                * (stack.position(row) - stack.position(col)).abs())
                            .exp();
                            -r[row] * x
                        };
                    }
                }
                let det = determinant(dim, &mut m);
                let delta = delta_total(&stack, &pt, mode).unwrap();
                assert!(
                    (det - delta).abs() <= 1e-12 * delta.abs(),
                    "n={n} mode={mode:?}: det {det} vs delta {delta}"
                );
            }
        }
    }
}

fn determinant(n: usize, a: &mut [f64]) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&p, &q| a[p * n + c].abs().total_cmp(&a[q * n + c].abs()))
            .unwrap();
        if piv != c {
            for j in 0..n {
                a.swap(c * n + j, piv * n + j);
            }
            det = -det;
        }
        let pivot = a[c * n + c];
        det *= pivot;
        for r in c + 1..n {
            let f = a[r * n + c] / pivot;
            for j in c..n {
                a[r * n + j] -= f * a[c * n + j];
            }
        }
    }
    det
}

#[test]
fn closed_and_general_transition_matrices_agree() {
    let mut rng = StdRng::seed_from_u64(18);
    for n in 1..=3usize {
        for mode in Mode::BOTH {
            let stack = mode_pure_stack(n, mode, &[1.1, 0.7]);
            for _ in 0..25 {
                let pt = random_point(&mut rng);
                let closed = transition_matrix(&stack, &pt, mode).unwrap();
                let general = transition_matrix_general(&stack, &pt, mode).unwrap();
                for row in 0..n {
                    for col in 0..n {
                        let (a, b) = (closed.entry(row, col), general.entry(row, col));
                        assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-30));
                    }
                }
            }
        }
    }
}
