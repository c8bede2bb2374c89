//! Region-wise Green's functions for one, two and three plates, and the
//! transition-matrix form of the same functions.
//!
//! The (z, z') plane splits into (N+1)^2 open regions bounded by the plate
//! positions. Rows label the slab holding z' counted from the top (row 1 is
//! z' above every plate), columns the slab holding z counted from the bottom
//! (column 1 is z below every plate). The value in region (row, col) is
//!
//! ```text
//!   g = [ A_row . B_{row,col} . C_col ] / (2 kappa)   (+ free term),
//! ```
//!
//! where A and C are short vectors of decaying exponentials anchored at the
//! slab's bounding plates and B is a matrix of path amplitudes. The free
//! propagator e^{-kappa |z - z'|} / (2 kappa) enters exactly when
//! row + col - 2 = N, i.e. when z and z' share a slab. The B entries for
//! N = 2 and N = 3 are transcribed term by term rather than derived; an
//! independent boundary-value solver in the test suite checks every entry.
//!
//! For stacks whose plates scatter with t = 1 + r in a given mode (purely
//! permeable for TM, purely dielectric for TE) the same-slab regions also
//! follow from an N x N transition matrix,
//!
//! ```text
//!   g = g0(z - z') + R(z)^T . [t_matrix / (2 kappa)] . R(z'),
//! ```
//!
//! with R_m(z) = e^{-kappa |z - a_m|}. Closed forms cover N <= 3; for larger
//! stacks the matrix solves the multiple-scattering linear system
//! (experimental, validated against the N <= 3 forms and the boundary-value
//! solver).

use thiserror::Error;

use crate::optics::{coefficients, Coefficients, Mode, SpectralPoint};
use crate::scattering::Stack;

#[derive(Debug, Error, PartialEq)]
pub enum GreensError {
    #[error("explicit region matrices cover at most 3 plates, got {n}")]
    UnsupportedN { n: usize },
    #[error("evaluation point z = {z} lies on a plate; evaluate one-sided limits instead")]
    OnPlate { z: f64 },
    #[error(
        "transition matrix requires every plate purely permeable (TM) or purely dielectric (TE)"
    )]
    MixedStack,
    #[error("transition form covers only same-slab regions (z and z' between the same plates)")]
    OffDiagonalRegion,
}

/// Number of plates strictly below `x`; errors when `x` hits a plate.
fn slab_index(stack: &Stack, x: f64) -> Result<usize, GreensError> {
    let mut below = 0;
    for &p in stack.positions() {
        if x == p {
            return Err(GreensError::OnPlate { z: x });
        }
        if p < x {
            below += 1;
        }
    }
    Ok(below)
}

/// A small dense block of B-matrix entries (at most 2 x 2).
#[derive(Clone, Debug)]
pub struct Block {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Block {
    fn scalar(v: f64) -> Block {
        Block {
            rows: 1,
            cols: 1,
            data: vec![v],
        }
    }

    fn row(v: [f64; 2]) -> Block {
        Block {
            rows: 1,
            cols: 2,
            data: v.to_vec(),
        }
    }

    fn col(v: [f64; 2]) -> Block {
        Block {
            rows: 2,
            cols: 1,
            data: v.to_vec(),
        }
    }

    fn square(v: [[f64; 2]; 2]) -> Block {
        Block {
            rows: 2,
            cols: 2,
            data: vec![v[0][0], v[0][1], v[1][0], v[1][1]],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn scaled(mut self, f: f64) -> Block {
        for v in &mut self.data {
            *v *= f;
        }
        self
    }
}

/// The A/B/C matrices of a stack at one spectral point and mode.
pub struct GreensMatrices<'a> {
    stack: &'a Stack,
    kappa: f64,
    mode: Mode,
    coeffs: Vec<Coefficients>,
}

impl<'a> GreensMatrices<'a> {
    pub fn new(stack: &'a Stack, pt: &SpectralPoint, mode: Mode) -> Result<Self, GreensError> {
        if stack.len() > 3 {
            return Err(GreensError::UnsupportedN { n: stack.len() });
        }
        Ok(GreensMatrices {
            stack,
            kappa: pt.kappa(),
            mode,
            coeffs: stack.plates().iter().map(|p| coefficients(p, pt)).collect(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn r(&self, plate: usize) -> f64 {
        self.coeffs[plate].r(self.mode)
    }

    fn t(&self, plate: usize) -> f64 {
        self.coeffs[plate].t(self.mode)
    }

    /// Row vector of source exponentials for `row` (1-based, from the top).
    pub fn a_row(&self, row: usize, zp: f64) -> Vec<f64> {
        let n = self.stack.len();
        let below = n + 1 - row;
        let k = self.kappa;
        let pos = self.stack.positions();
        if below == n {
            vec![(-k * (zp - pos[n - 1])).exp()]
        } else if below == 0 {
            vec![(-k * (pos[0] - zp)).exp()]
        } else {
            vec![
                (-k * (zp - pos[below - 1])).exp(),
                (-k * (pos[below] - zp)).exp(),
            ]
        }
    }

    /// Column vector of observation exponentials for `col` (1-based, from
    /// the bottom).
    pub fn c_col(&self, col: usize, z: f64) -> Vec<f64> {
        let n = self.stack.len();
        let below = col - 1;
        let k = self.kappa;
        let pos = self.stack.positions();
        if below == 0 {
            vec![(-k * (pos[0] - z)).exp()]
        } else if below == n {
            vec![(-k * (z - pos[n - 1])).exp()]
        } else {
            vec![
                (-k * (pos[below] - z)).exp(),
                (-k * (z - pos[below - 1])).exp(),
            ]
        }
    }

    /// The B block for region (row, col), 1-based.
    pub fn b_block(&self, row: usize, col: usize) -> Block {
        match self.stack.len() {
            1 => self.b1(row, col),
            2 => self.b2(row, col),
            3 => self.b3(row, col),
            n => unreachable!("unsupported plate count {n}"),
        }
    }

    fn b1(&self, row: usize, col: usize) -> Block {
        let (r, t) = (self.r(0), self.t(0));
        match (row, col) {
            (1, 1) | (2, 2) => Block::scalar(t),
            (1, 2) | (2, 1) => Block::scalar(r),
            _ => unreachable!("region ({row}, {col}) out of range for one plate"),
        }
    }

    fn b2(&self, row: usize, col: usize) -> Block {
        let (ri, ti) = (self.r(0), self.t(0));
        let (rj, tj) = (self.r(1), self.t(1));
        let ea = (-self.kappa * self.stack.gap(0)).exp();
        let delta = 1.0 - ri * rj * ea * ea;
        let d = 1.0 / delta;
        match (row, col) {
            (1, 1) => Block::scalar(ti * ea * tj * d),
            (1, 2) => Block::row([tj * d, ri * ea * tj * d]),
            (1, 3) => Block::scalar(rj + tj * ea * ri * ea * tj * d),
            (2, 1) => Block::col([ti * d, ti * ea * rj * d]),
            (2, 2) => Block::square([[ri * ea * rj * d, ri * d], [rj * d, rj * ea * ri * d]]),
            (2, 3) => Block::col([ri * ea * tj * d, tj * d]),
            (3, 1) => Block::scalar(ri + ti * ea * rj * ea * ti * d),
            (3, 2) => Block::row([rj * ea * ti * d, ti * d]),
            (3, 3) => Block::scalar(tj * ea * ti * d),
            _ => unreachable!("region ({row}, {col}) out of range for two plates"),
        }
    }

    fn b3(&self, row: usize, col: usize) -> Block {
        let (ri, ti) = (self.r(0), self.t(0));
        let (rj, tj) = (self.r(1), self.t(1));
        let (rk, tk) = (self.r(2), self.t(2));
        let ea = (-self.kappa * self.stack.gap(0)).exp();
        let eb = (-self.kappa * self.stack.gap(1)).exp();
        let dij = 1.0 - ri * rj * ea * ea;
        let djk = 1.0 - rj * rk * eb * eb;
        let dijk = dij * djk - ri * ea * tj * eb * rk * eb * tj * ea;
        let block = match (row, col) {
            (1, 1) => Block::scalar(ti * ea * tj * eb * tk),
            (1, 2) => Block::row([tj * eb * tk, ri * ea * tj * eb * tk]),
            (1, 3) => Block::row([
                tk * dij,
                rj * eb * tk * dij + tj * ea * ri * ea * tj * eb * tk,
            ]),
            (1, 4) => Block::scalar(
                rk * dijk
                    + tk * eb * rj * eb * tk * dij
                    + tk * eb * tj * ea * ri * ea * tj * eb * tk,
            ),
            (2, 1) => Block::col([ti * ea * tj, ti * ea * tj * eb * rk]),
            (2, 2) => Block::square([[tj, ri * ea * tj], [tj * eb * rk, ri * ea * tj * eb * rk]]),
            (2, 3) => Block::square([
                [
                    rk * eb * rj * dij + rk * eb * tj * ea * ri * ea * tj,
                    rj * dij + tj * ea * ri * ea * tj,
                ],
                [
                    rk * dij,
                    tj * ea * ri * ea * tj * eb * rk + rj * eb * rk * dij,
                ],
            ]),
            (2, 4) => Block::col([
                tk * eb * rj * dij + tk * eb * tj * ea * ri * ea * tj,
                tk * dij,
            ]),
            (3, 1) => Block::col([
                ti * djk,
                ti * ea * rj * djk + ti * ea * tj * eb * rk * eb * tj,
            ]),
            (3, 2) => Block::square([
                [
                    tj * eb * rk * eb * tj * ea * ri + rj * ea * ri * djk,
                    ri * djk,
                ],
                [
                    rj * djk + tj * eb * rk * eb * tj,
                    ri * ea * rj * djk + ri * ea * tj * eb * rk * eb * tj,
                ],
            ]),
            (3, 3) => Block::square([[rk * eb * tj * ea * ri, tj * ea * ri], [rk * eb * tj, tj]]),
            (3, 4) => Block::col([tk * eb * tj * ea * ri, tk * eb * tj]),
            (4, 1) => Block::scalar(
                ri * dijk
                    + ti * ea * rj * ea * ti * djk
                    + ti * ea * tj * eb * rk * eb * tj * ea * ti,
            ),
            // Entry order follows the C-column convention (downward-decaying
            // component first), which also restores reciprocity with (3, 1).
            (4, 2) => Block::row([
                rj * ea * ti * djk + tj * eb * rk * eb * tj * ea * ti,
                ti * djk,
            ]),
            (4, 3) => Block::row([rk * eb * tj * ea * ti, tj * ea * ti]),
            (4, 4) => Block::scalar(tk * eb * tj * ea * ti),
            _ => unreachable!("region ({row}, {col}) out of range for three plates"),
        };
        block.scaled(1.0 / dijk)
    }
}

/// Free-space propagator of the 1D Helmholtz operator.
pub fn free_propagator(kappa: f64, z: f64, zp: f64) -> f64 {
    (-kappa * (z - zp).abs()).exp() / (2.0 * kappa)
}

/// Green's function of an N <= 3 stack at (z, z'), both off-plate.
pub fn greens_value(
    stack: &Stack,
    pt: &SpectralPoint,
    mode: Mode,
    z: f64,
    zp: f64,
) -> Result<f64, GreensError> {
    let n = stack.len();
    let gm = GreensMatrices::new(stack, pt, mode)?;
    let col = slab_index(stack, z)? + 1;
    let row = n + 1 - slab_index(stack, zp)?;
    let a = gm.a_row(row, zp);
    let c = gm.c_col(col, z);
    let b = gm.b_block(row, col);
    debug_assert_eq!(b.rows(), a.len());
    debug_assert_eq!(b.cols(), c.len());
    let mut v = 0.0;
    for (m, am) in a.iter().enumerate() {
        for (q, cq) in c.iter().enumerate() {
            v += am * b.get(m, q) * cq;
        }
    }
    let mut g = v / (2.0 * pt.kappa());
    if row + col - 2 == n {
        g += free_propagator(pt.kappa(), z, zp);
    }
    Ok(g)
}

/// Dimensionless N x N transition matrix of a mode-pure stack.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    mode: Mode,
    entries: Vec<f64>,
}

impl TransitionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Dimensionless entry (row, col), 0-based plate indices.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }
}

fn require_mode_pure(stack: &Stack, mode: Mode) -> Result<(), GreensError> {
    if stack.plates().iter().all(|p| p.is_pure_for(mode)) {
        Ok(())
    } else {
        Err(GreensError::MixedStack)
    }
}

/// Closed-form transition matrix for N <= 3 plates that are purely
/// permeable (TM) or purely dielectric (TE).
pub fn transition_matrix(
    stack: &Stack,
    pt: &SpectralPoint,
    mode: Mode,
) -> Result<TransitionMatrix, GreensError> {
    let n = stack.len();
    if n > 3 {
        return Err(GreensError::UnsupportedN { n });
    }
    require_mode_pure(stack, mode)?;
    let k = pt.kappa();
    let r: Vec<f64> = stack
        .plates()
        .iter()
        .map(|p| coefficients(p, pt).r(mode))
        .collect();
    // Dimensionless free propagator between plates.
    let prop = |m: usize, q: usize| (-k * (stack.position(m) - stack.position(q)).abs()).exp();
    let entries = match n {
        1 => vec![r[0]],
        2 => {
            let x = prop(0, 1);
            let delta = 1.0 - r[0] * r[1] * x * x;
            vec![
                r[0] / delta,
                r[0] * x * r[1] / delta,
                r[1] * x * r[0] / delta,
                r[1] / delta,
            ]
        }
        3 => {
            let (xij, xjk, xik) = (prop(0, 1), prop(1, 2), prop(0, 2));
            let dij = 1.0 - r[0] * r[1] * xij * xij;
            let djk = 1.0 - r[1] * r[2] * xjk * xjk;
            let dik = 1.0 - r[0] * r[2] * xik * xik;
            // Three-plate denominator: the outer pair's round trip is dressed
            // by the middle plate, (x_ik + r_j x_ij x_jk)^2 = t_j^2 x_ik^2
            // for mode-pure plates where t = 1 + r.
            let dressed = xik + r[1] * xij * xjk;
            let dijk = dij * djk - r[0] * r[2] * dressed * dressed;
            // Dressed propagators: direct path plus one bounce off the third plate.
            let dress =
                |m: usize, q: usize, via: usize| prop(m, q) + prop(m, via) * r[via] * prop(via, q);
            vec![
                r[0] * djk / dijk,
                r[0] * dress(0, 1, 2) * r[1] / dijk,
                r[0] * dress(0, 2, 1) * r[2] / dijk,
                r[1] * dress(1, 0, 2) * r[0] / dijk,
                r[1] * dik / dijk,
                r[1] * dress(1, 2, 0) * r[2] / dijk,
                r[2] * dress(2, 0, 1) * r[0] / dijk,
                r[2] * dress(2, 1, 0) * r[1] / dijk,
                r[2] * dij / dijk,
            ]
        }
        _ => unreachable!(),
    };
    Ok(TransitionMatrix { n, mode, entries })
}

/// Transition matrix of any mode-pure stack, from the multiple-scattering
/// linear system (I - V R) T = V with V = diag(r) and R the off-diagonal
/// matrix of inter-plate propagators. Agrees with the closed forms for
/// N <= 3; beyond that it is validated only against the boundary-value
/// solver, so treat it as experimental.
pub fn transition_matrix_general(
    stack: &Stack,
    pt: &SpectralPoint,
    mode: Mode,
) -> Result<TransitionMatrix, GreensError> {
    require_mode_pure(stack, mode)?;
    let n = stack.len();
    let k = pt.kappa();
    let r: Vec<f64> = stack
        .plates()
        .iter()
        .map(|p| coefficients(p, pt).r(mode))
        .collect();
    // System matrix I - V R, right-hand side V (one column per plate).
    let mut a = vec![0.0; n * n];
    let mut rhs = vec![0.0; n * n];
    for m in 0..n {
        for q in 0..n {
            let prop = if m == q {
                0.0
            } else {
                (-k * (stack.position(m) - stack.position(q)).abs()).exp()
            };
            a[m * n + q] = if m == q { 1.0 } else { -r[m] * prop };
        }
        rhs[m * n + m] = r[m];
    }
    let entries = solve_columns(n, &mut a, &mut rhs);
    Ok(TransitionMatrix { n, mode, entries })
}

/// Gaussian elimination with partial pivoting; solves A X = B for all
/// columns of B at once. Small systems only.
fn solve_columns(n: usize, a: &mut [f64], b: &mut [f64]) -> Vec<f64> {
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))
            .expect("nonempty range");
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
                b.swap(col * n + j, pivot_row * n + j);
            }
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
            for j in 0..n {
                b[row * n + j] -= factor * b[col * n + j];
            }
        }
    }
    let mut x = vec![0.0; n * n];
    for rhs_col in 0..n {
        for row in (0..n).rev() {
            let mut sum = b[row * n + rhs_col];
            for j in row + 1..n {
                sum -= a[row * n + j] * x[j * n + rhs_col];
            }
            x[row * n + rhs_col] = sum / a[row * n + row];
        }
    }
    x
}

/// Same-slab Green's function reconstructed through the transition matrix.
pub fn greens_via_transition(
    stack: &Stack,
    pt: &SpectralPoint,
    mode: Mode,
    z: f64,
    zp: f64,
) -> Result<f64, GreensError> {
    if slab_index(stack, z)? != slab_index(stack, zp)? {
        return Err(GreensError::OffDiagonalRegion);
    }
    let tm = if stack.len() <= 3 {
        transition_matrix(stack, pt, mode)?
    } else {
        transition_matrix_general(stack, pt, mode)?
    };
    let k = pt.kappa();
    let rz: Vec<f64> = stack
        .positions()
        .iter()
        .map(|&a| (-k * (z - a).abs()).exp())
        .collect();
    let rzp: Vec<f64> = stack
        .positions()
        .iter()
        .map(|&a| (-k * (zp - a).abs()).exp())
        .collect();
    let mut v = 0.0;
    for (m, rm) in rz.iter().enumerate() {
        for (q, rq) in rzp.iter().enumerate() {
            v += rm * tm.entry(m, q) * rq;
        }
    }
    Ok(free_propagator(k, z, zp) + v / (2.0 * k))
}
