//! Layered-media Green's functions: region values, the reciprocity and
//! jump-relation invariants, and the transition-matrix reconstruction.
//!
//! Run with `cargo run --release --example greens_demo`.

use casimir::greens::{greens_value, greens_via_transition, transition_matrix};
use casimir::optics::{Mode, Plate, SpectralPoint};
use casimir::scattering::Stack;

fn main() {
    let stack = Stack::new(
        vec![
            Plate::general(1.4, 0.3).unwrap(),
            Plate::general(0.6, 1.9).unwrap(),
        ],
        vec![0.0, 1.0],
    )
    .unwrap();
    let pt = SpectralPoint::new(0.8, 0.9).unwrap();

    println!("two general plates at z = 0 and z = 1, zeta = 0.8, kperp = 0.9");
    println!();
    println!("TM Green's function g(z, z') on a coarse grid:");
    let grid = [-0.6, 0.3, 0.7, 1.5];
    print!("{:>8}", "z \\ z'");
    for zp in grid {
        print!("{zp:>12.2}");
    }
    println!();
    for z in grid {
        print!("{z:>8.2}");
        for zp in grid {
            print!(
                "{:>12.6}",
                greens_value(&stack, &pt, Mode::Tm, z, zp).unwrap()
            );
        }
        println!();
    }

    let (z, zp) = (0.31, 0.64);
    let g = greens_value(&stack, &pt, Mode::Tm, z, zp).unwrap();
    let gs = greens_value(&stack, &pt, Mode::Tm, zp, z).unwrap();
    println!();
    println!("reciprocity: g({z}, {zp}) - g({zp}, {z}) = {:+.3e}", g - gs);

    // Value-jump relation at the first plate, residual shrinking with h.
    let a = 0.0;
    let lambda_e = 1.4;
    println!();
    println!("value-jump residual at the z = 0 plate (one-sided stencils):");
    for h in [1e-2, 5e-3, 2.5e-3, 1.25e-3] {
        let g = |z: f64| greens_value(&stack, &pt, Mode::Tm, z, zp).unwrap();
        let dp = (g(a + 2.0 * h) - g(a + h)) / h;
        let dm = (g(a - h) - g(a - 2.0 * h)) / h;
        let res = g(a + h) - g(a - h) - 0.5 * lambda_e * (dp + dm);
        println!("  h = {h:>8.2e}   residual = {res:+.3e}");
    }

    // Transition matrix of a mode-pure stack and the reconstruction identity.
    let pure = Stack::uniform(
        vec![
            Plate::finite_permeable(1.2).unwrap(),
            Plate::finite_permeable(2.5).unwrap(),
        ],
        1.0,
    )
    .unwrap();
    let tm = transition_matrix(&pure, &pt, Mode::Tm).unwrap();
    println!();
    println!("transition matrix of a permeable pair (TM):");
    for row in 0..2 {
        println!("  [{:+.6}, {:+.6}]", tm.entry(row, 0), tm.entry(row, 1));
    }
    let (z, zp) = (0.2, 0.8);
    let direct = greens_value(&pure, &pt, Mode::Tm, z, zp).unwrap();
    let via = greens_via_transition(&pure, &pt, Mode::Tm, z, zp).unwrap();
    println!("reconstruction at ({z}, {zp}): direct {direct:.12}, via transition {via:.12}");
}
