//! Shared oracles for the integration suites. Everything here is an
//! independent route to quantities the library computes another way:
//! nothing below calls into the scattering expansion, the region matrices'
//! entries, or the tetralogarithm reduction.
#![allow(dead_code)]

use casimir::optics::{Mode, Plate, SpectralPoint};
use casimir::scattering::Stack;
use rand::rngs::StdRng;
use rand::Rng;

/// Green's function by direct solution of the piecewise boundary-value
/// problem: exponential homogeneous solutions in every slab, matched with
/// the value/derivative jump relations at each plate and decay at infinity.
pub fn greens_boundary_value(
    stack: &Stack,
    pt: &SpectralPoint,
    mode: Mode,
    z: f64,
    zp: f64,
) -> f64 {
    let n = stack.len();
    let k = pt.kappa();
    let zeta = pt.zeta();
    let pos = stack.positions();
    let g0 = |d: f64| (-k * d.abs()).exp() / (2.0 * k);
    let dg0 = |d: f64| -d.signum() * (-k * d.abs()).exp() / 2.0;

    // Unknown homogeneous coefficients, anchored at the slab boundaries so
    // every basis value stays in (0, 1]:
    //   slab 0:        c0 e^{ k (z - a_1)}
    //   slab m (mid):  A_m e^{ k (z - a_{m+1})} + B_m e^{-k (z - a_m)}
    //   slab n:        cn e^{-k (z - a_n)}
    let dim = 2 * n;
    let terms = |slab: usize| -> Vec<(usize, f64, f64)> {
        if slab == 0 {
            vec![(0, pos[0], 1.0)]
        } else if slab == n {
            vec![(dim - 1, pos[n - 1], -1.0)]
        } else {
            vec![
                (2 * slab - 1, pos[slab], 1.0),
                (2 * slab, pos[slab - 1], -1.0),
            ]
        }
    };

    let mut mat = vec![0.0; dim * dim];
    let mut rhs = vec![0.0; dim];
    for (i, &a) in pos.iter().enumerate() {
        let (lambda_e, lambda_g) = couplings(stack.plate(i), zeta);
        let (lam_value, lam_slope) = match mode {
            Mode::Tm => (lambda_e, lambda_g),
            Mode::Te => (lambda_g, lambda_e),
        };
        let row_value = 2 * i;
        let row_slope = 2 * i + 1;
        // value jump:  [h] - (lam_v / 2)(h'_+ + h'_-) = lam_v g0'
        // slope jump:  [h'] - (zeta^2 lam_s / 2)(h_+ + h_-) = zeta^2 lam_s g0
        for &(col, anchor, sgn) in &terms(i + 1) {
            let e = (sgn * k * (a - anchor)).exp();
            mat[row_value * dim + col] += e - 0.5 * lam_value * sgn * k * e;
            mat[row_slope * dim + col] += sgn * k * e - 0.5 * zeta * zeta * lam_slope * e;
        }
        for &(col, anchor, sgn) in &terms(i) {
            let e = (sgn * k * (a - anchor)).exp();
            mat[row_value * dim + col] += -e - 0.5 * lam_value * sgn * k * e;
            mat[row_slope * dim + col] += -sgn * k * e - 0.5 * zeta * zeta * lam_slope * e;
        }
        rhs[row_value] = lam_value * dg0(a - zp);
        rhs[row_slope] = zeta * zeta * lam_slope * g0(a - zp);
    }
    let coeffs = solve(dim, &mut mat, &mut rhs);

    let slab = pos.iter().filter(|&&p| p < z).count();
    let mut h = 0.0;
    for (col, anchor, sgn) in terms(slab) {
        h += coeffs[col] * (sgn * k * (z - anchor)).exp();
    }
    g0(z - zp) + h
}

fn couplings(plate: &Plate, zeta: f64) -> (f64, f64) {
    match *plate {
        Plate::General { lambda_e, lambda_g } => (lambda_e, lambda_g),
        Plate::FiniteDielectric { sigma } => (sigma / zeta, 0.0),
        Plate::FinitePermeable { sigma } => (0.0, sigma / zeta),
        Plate::IdealConductor | Plate::IdealPermeable => {
            panic!("boundary-value oracle handles finite couplings only")
        }
    }
}

fn solve(n: usize, a: &mut [f64], b: &mut [f64]) -> Vec<f64> {
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&p, &q| a[p * n + c].abs().total_cmp(&a[q * n + c].abs()))
            .unwrap();
        if piv != c {
            for j in 0..n {
                a.swap(c * n + j, piv * n + j);
            }
            b.swap(c, piv);
        }
        for r in c + 1..n {
            let f = a[r * n + c] / a[c * n + c];
            if f == 0.0 {
                continue;
            }
            for j in c..n {
                a[r * n + j] -= f * a[c * n + j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for j in r + 1..n {
            s -= a[r * n + j] * x[j];
        }
        x[r] = s / a[r * n + r];
    }
    x
}

// ---------------------------------------------------------------------------
// Independent scaled-energy oracle: two-dimensional adaptive Simpson over
// the polar (t, s) form, never touching the tetralogarithm shortcut or the
// composition expansion.

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        (fa + 4.0 * fm + fb) * h / 6.0
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), eps, 48)
}

/// Per-mode product of reflection coefficients of two plates at polar
/// cosine t.
fn pair_products(plate_i: &Plate, plate_j: &Plate, t: f64) -> (f64, f64) {
    let pt = SpectralPoint::from_polar(1.0, t).unwrap();
    let ci = casimir::optics::coefficients(plate_i, &pt);
    let cj = casimir::optics::coefficients(plate_j, &pt);
    (ci.r_tm * cj.r_tm, ci.r_te * cj.r_te)
}

/// Scaled two-plate energy by direct 2D quadrature of
/// (45 / 2 pi^4) Int_0^1 dt Int_0^inf s^2 [ln(1 - x_tm e^-s) + ln(1 - x_te e^-s)] ds.
pub fn pair_energy_2d(plate_i: &Plate, plate_j: &Plate) -> f64 {
    let outer = |t: f64| {
        let (x_tm, x_te) = pair_products(plate_i, plate_j, t);
        let inner = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            let e = (-s).exp();
            s * s * ((1.0 - x_tm * e).ln() + (1.0 - x_te * e).ln())
        };
        adaptive_simpson(&inner, 0.0, 60.0, 1e-12)
    };
    45.0 / (2.0 * std::f64::consts::PI.powi(4)) * adaptive_simpson(&outer, 0.0, 1.0, 2e-11)
}

// ---------------------------------------------------------------------------
// Random inputs

/// Random mix of conductivity plates, sigma in (0, 50], gaps in [0.1, 3].
pub fn random_finite_stack(rng: &mut StdRng, n: usize) -> Stack {
    let plates: Vec<Plate> = (0..n)
        .map(|_| {
            let sigma = rng.random_range(1e-3..=50.0);
            if rng.random_bool(0.5) {
                Plate::finite_dielectric(sigma).unwrap()
            } else {
                Plate::finite_permeable(sigma).unwrap()
            }
        })
        .collect();
    let mut positions = Vec::with_capacity(n);
    let mut z = rng.random_range(-1.0..1.0);
    for _ in 0..n {
        positions.push(z);
        z += rng.random_range(0.1..=3.0);
    }
    Stack::new(plates, positions).unwrap()
}

/// Spectral point with t in (0, 1] and a moderate kappa.
pub fn random_point(rng: &mut StdRng) -> SpectralPoint {
    let t = rng.random_range(1e-3..=1.0);
    let kappa = rng.random_range(0.2..=3.0);
    SpectralPoint::from_polar(kappa, t).unwrap()
}

/// A z coordinate off every plate of the stack.
pub fn off_plate(rng: &mut StdRng, stack: &Stack, margin: f64) -> f64 {
    let lo = stack.position(0) - 1.5;
    let hi = stack.position(stack.len() - 1) + 1.5;
    loop {
        let z = rng.random_range(lo..hi);
        if stack.positions().iter().all(|&p| (z - p).abs() > margin) {
            return z;
        }
    }
}
