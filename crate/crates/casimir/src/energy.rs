//! Casimir energy of plate stacks, scaled by the magnitude of the ideal
//! conductor-pair energy pi^2 / (720 a^3) per unit area.
//!
//! Three evaluation routes cover the stack families:
//!
//! * ideal plates: the total scattering parameter factorizes over adjacent
//!   pairs, so the scaled energy is an exact rational combination of the
//!   like/unlike pair counts (-1 per like pair, +7/8 per unlike pair at
//!   equal spacing);
//! * two or three conductivity plates: after the polar substitution the
//!   s-integral evaluates to tetralogarithms, leaving a one-dimensional
//!   t-integral. For three plates the quadratic in e^{-s} inside the
//!   logarithm is split over its two inverse roots;
//! * anything else: nested adaptive quadrature of
//!   (45 / 2 pi^4) Int dt Int s^2 [ln Delta_tm + ln Delta_te] ds with
//!   s = 2 kappa a. The inner integral runs over u = e^{-s} in (0, 1), whose
//!   integrand ln^2(u) (ln Delta / u) has only an integrable endpoint
//!   singularity.
//!
//! All quadrature sums reduce panels in a fixed left-to-right order, so
//! results are deterministic regardless of evaluation scheduling.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::lattice::{self, LatticeError, NeighborhoodStats, SubstitutionSystem, Word};
use crate::optics::{coefficients, Mode, OpticsError, Plate, SpectralPoint};
use crate::quad::{self, QuadError};
use crate::scattering::{delta_total, ScatteringError, Stack};

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("polylogarithm argument {x} outside [-1, 1]")]
    PolylogDomain { x: f64 },
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error("quadrature did not reach tolerance: value {value}, error estimate {abs_error}")]
    QuadratureBudget { value: f64, abs_error: f64 },
    #[error(
        "scattering parameter {delta} is not positive at (t={t}, s={s}); log-energy undefined"
    )]
    NonPositiveDelta { t: f64, s: f64, delta: f64 },
    #[error("operation supports ideal and conductivity plates only")]
    UnsupportedPlates,
    #[error("spacing must be positive, got {0}")]
    InvalidSpacing(f64),
    #[error("growth fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("growth fit refused: energies change sign (ratios: {ratios:?})")]
    MixedSignFit { ratios: Vec<f64> },
}

/// Evaluation route that produced an energy value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    IdealClosedForm,
    PolylogPair,
    PolylogTriple,
    Quadrature,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::IdealClosedForm => "ideal-closed-form",
            Method::PolylogPair => "polylog-N2",
            Method::PolylogTriple => "polylog-N3",
            Method::Quadrature => "quadrature",
        };
        write!(f, "{name}")
    }
}

/// Scaled Casimir energy with an error estimate and provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyResult {
    /// Energy per unit area in units of pi^2 / (720 spacing^3).
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
    pub n_plates: u128,
    /// Common conductivity of the finite plates, when they share one.
    pub sigma: Option<f64>,
    pub spacing: f64,
}

impl EnergyResult {
    /// Raw energy per unit area in natural units (hbar = c = 1).
    pub fn per_area(&self) -> f64 {
        self.value * PI * PI / (720.0 * self.spacing.powi(3))
    }
}

/// Quadrature targets for the general path.
#[derive(Clone, Copy, Debug)]
pub struct QuadraturePolicy {
    pub target_abs_error: f64,
    pub max_outer_panels: usize,
    pub max_inner_panels: usize,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        QuadraturePolicy {
            target_abs_error: 1e-9,
            max_outer_panels: 900,
            max_inner_panels: 6000,
        }
    }
}

const MAX_LI4_TERMS: usize = 40_000;

/// Tetralogarithm Li_4(x) = sum_{k >= 1} x^k / k^4 on [-1, 1].
///
/// The series is truncated once the integral tail bound |x|^k / (3 k^3)
/// drops below 1e-13; compensated summation keeps the rounding error at
/// the few-ulp level, so the absolute error stays below 1e-12 over the
/// whole closed interval.
pub fn li4(x: f64) -> Result<f64, EnergyError> {
    if x.abs() > 1.0 || x.is_nan() {
        return Err(EnergyError::PolylogDomain { x });
    }
    Ok(li4_series(x))
}

fn li4_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut compensation = 0.0;
    let mut power = 1.0;
    for k in 1..=MAX_LI4_TERMS {
        power *= x;
        let kf = k as f64;
        let term = power / (kf * kf * kf * kf);
        let y = term - compensation;
        let t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
        if power.abs() / (3.0 * kf * kf * kf) < 1e-13 {
            break;
        }
    }
    sum
}

fn normalize_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Signed pair sum in units of 1/8: +7 per unlike pair, -8 per like pair.
pub fn ideal_energy_eighths(stats: &NeighborhoodStats) -> i128 {
    7 * stats.n_unlike as i128 - 8 * stats.n_like as i128
}

fn ideal_result(stats: &NeighborhoodStats, spacing: f64) -> EnergyResult {
    EnergyResult {
        value: ideal_energy_eighths(stats) as f64 / 8.0,
        abs_error: 0.0,
        method: Method::IdealClosedForm,
        n_plates: stats.n_plates,
        sigma: None,
        spacing,
    }
}

/// Scaled energy of an equally spaced word of ideal plates: every adjacent
/// like pair contributes -1, every unlike pair +7/8, exactly.
pub fn energy_ideal(word: &Word, spacing: f64) -> Result<EnergyResult, EnergyError> {
    check_spacing(spacing)?;
    Ok(ideal_result(&lattice::stats(word), spacing))
}

/// Same as [`energy_ideal`] but through the counts-only recursion, without
/// materializing the word.
pub fn energy_ideal_at(
    system: &SubstitutionSystem,
    iteration: u32,
    spacing: f64,
) -> Result<EnergyResult, EnergyError> {
    check_spacing(spacing)?;
    Ok(ideal_result(
        &lattice::stats_at(system, iteration)?,
        spacing,
    ))
}

fn check_spacing(spacing: f64) -> Result<(), EnergyError> {
    if spacing <= 0.0 || !spacing.is_finite() {
        return Err(EnergyError::InvalidSpacing(spacing));
    }
    Ok(())
}

fn conductivity_like(plate: &Plate) -> bool {
    !matches!(plate, Plate::General { .. })
}

fn common_sigma(plates: &[&Plate]) -> Option<f64> {
    let mut sigma: Option<f64> = None;
    for p in plates {
        let s = match p {
            Plate::FiniteDielectric { sigma } | Plate::FinitePermeable { sigma } => *sigma,
            _ => continue,
        };
        match sigma {
            None => sigma = Some(s),
            Some(prev) if prev == s => {}
            Some(_) => return None,
        }
    }
    sigma
}

fn map_quad(err: QuadError) -> EnergyError {
    match err {
        QuadError::Budget { value, abs_error } => {
            EnergyError::QuadratureBudget { value, abs_error }
        }
        QuadError::NonFinite { at } => EnergyError::NonPositiveDelta {
            t: at,
            s: f64::NAN,
            delta: f64::NAN,
        },
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Scaled interaction energy of two ideal or conductivity plates at
/// separation `spacing`, via the tetralogarithm reduction
/// `-(45 / pi^4) Int_0^1 dt [ Li4(r_tm_i r_tm_j) + Li4(r_te_i r_te_j) ]`.
/// The scaled value depends only on the conductivities.
pub fn energy_pair(
    plate_i: &Plate,
    plate_j: &Plate,
    spacing: f64,
) -> Result<EnergyResult, EnergyError> {
    check_spacing(spacing)?;
    if !conductivity_like(plate_i) || !conductivity_like(plate_j) {
        return Err(EnergyError::UnsupportedPlates);
    }
    let integrand = |t: f64| {
        let pt = SpectralPoint::from_polar(1.0, t).expect("interior node");
        let ci = coefficients(plate_i, &pt);
        let cj = coefficients(plate_j, &pt);
        li4_series(clamp_unit(ci.r_tm * cj.r_tm)) + li4_series(clamp_unit(ci.r_te * cj.r_te))
    };
    let q = quad::integrate(integrand, 0.0, 1.0, 2e-11, 900).map_err(map_quad)?;
    let scale = 45.0 / PI.powi(4);
    Ok(EnergyResult {
        value: normalize_zero(-scale * q.value),
        abs_error: scale * q.abs_error + 1e-12,
        method: Method::PolylogPair,
        n_plates: 2,
        sigma: common_sigma(&[plate_i, plate_j]),
        spacing,
    })
}

/// Inverse roots of 1 + a u + b u^2, i.e. the roots of w^2 + a w + b = 0,
/// computed without cancellation. Callers guarantee a nonnegative
/// discriminant.
fn inverse_roots(a: f64, b: f64, disc: f64) -> (f64, f64) {
    if a == 0.0 {
        let w = (-b).max(0.0).sqrt();
        (w, -w)
    } else {
        let q = -0.5 * (a + a.signum() * disc.sqrt());
        (q, b / q)
    }
}

/// Scaled energy of three equally spaced ideal or conductivity plates.
///
/// Per mode the logarithm's argument is the quadratic
/// 1 + a e^{-s} + b e^{-2s} with a = -r_j (r_i + r_k) and
/// b = r_i r_k (r_j^2 - t_j^2); it factorizes over the two inverse roots,
/// each contributing a tetralogarithm. Complex or out-of-range roots fall
/// back to the general quadrature path.
pub fn energy_triple(
    plate_i: &Plate,
    plate_j: &Plate,
    plate_k: &Plate,
    spacing: f64,
) -> Result<EnergyResult, EnergyError> {
    check_spacing(spacing)?;
    if ![plate_i, plate_j, plate_k]
        .iter()
        .all(|p| conductivity_like(p))
    {
        return Err(EnergyError::UnsupportedPlates);
    }
    let needs_fallback = Cell::new(false);
    let integrand = |t: f64| {
        let pt = SpectralPoint::from_polar(1.0, t).expect("interior node");
        let ci = coefficients(plate_i, &pt);
        let cj = coefficients(plate_j, &pt);
        let ck = coefficients(plate_k, &pt);
        let mut sum = 0.0;
        for mode in Mode::BOTH {
            let (ri, rj, rk) = (ci.r(mode), cj.r(mode), ck.r(mode));
            let tj = cj.t(mode);
            let a = -rj * (ri + rk);
            let b = ri * rk * (rj - tj) * (rj + tj);
            // a^2 - 4b in a form that stays nonnegative under rounding
            // whenever the outer reflections share a sign; the plain
            // difference cancels catastrophically near saturation.
            let disc = rj * rj * (ri - rk) * (ri - rk) + 4.0 * ri * rk * tj * tj;
            if disc < 0.0 {
                needs_fallback.set(true);
                return f64::NAN;
            }
            let (z1, z2) = inverse_roots(a, b, disc);
            if z1.abs() > 1.0 + 1e-9 || z2.abs() > 1.0 + 1e-9 {
                needs_fallback.set(true);
                return f64::NAN;
            }
            sum += li4_series(clamp_unit(z1)) + li4_series(clamp_unit(z2));
        }
        sum
    };
    match quad::integrate(integrand, 0.0, 1.0, 2e-11, 900) {
        Ok(q) => {
            let scale = 45.0 / PI.powi(4);
            Ok(EnergyResult {
                value: normalize_zero(-scale * q.value),
                abs_error: scale * q.abs_error + 1e-12,
                method: Method::PolylogTriple,
                n_plates: 3,
                sigma: common_sigma(&[plate_i, plate_j, plate_k]),
                spacing,
            })
        }
        Err(_) if needs_fallback.get() => {
            let stack = Stack::uniform(vec![*plate_i, *plate_j, *plate_k], spacing)?;
            energy_quadrature(&stack, spacing, &QuadraturePolicy::default())
        }
        Err(e) => Err(map_quad(e)),
    }
}

/// Closed-form scaled energy of an all-ideal stack with arbitrary gaps:
/// each adjacent pair contributes -(a/l)^3 when like, +7/8 (a/l)^3 when
/// unlike, with a the reference spacing and l the pair's own gap.
fn ideal_stack_energy(stack: &Stack, a_ref: f64) -> EnergyResult {
    let mut value = 0.0;
    for i in 0..stack.len() - 1 {
        let scale = (a_ref / stack.gap(i)).powi(3);
        let like = stack.plate(i) == stack.plate(i + 1);
        value += if like { -scale } else { 0.875 * scale };
    }
    EnergyResult {
        value,
        abs_error: 0.0,
        method: Method::IdealClosedForm,
        n_plates: stack.len() as u128,
        sigma: None,
        spacing: a_ref,
    }
}

/// General scaled energy by nested adaptive quadrature; `a_ref` is the
/// reference spacing of the scaling. Stacks made entirely of ideal plates
/// are routed to the closed pair-sum form instead.
pub fn energy_general(
    stack: &Stack,
    a_ref: f64,
    policy: &QuadraturePolicy,
) -> Result<EnergyResult, EnergyError> {
    check_spacing(a_ref)?;
    if stack.len() < 2 {
        return Err(ScatteringError::TooFewPlates {
            n: stack.len(),
            min: 2,
        }
        .into());
    }
    if stack.is_all_ideal() {
        return Ok(ideal_stack_energy(stack, a_ref));
    }
    energy_quadrature(stack, a_ref, policy)
}

/// The quadrature path of [`energy_general`], callable directly (it also
/// accepts all-ideal stacks, which is useful for cross-checking the closed
/// form against the integral).
pub fn energy_quadrature(
    stack: &Stack,
    a_ref: f64,
    policy: &QuadraturePolicy,
) -> Result<EnergyResult, EnergyError> {
    check_spacing(a_ref)?;
    // Surface structural errors (too few plates, expansion cap) up front.
    let probe = SpectralPoint::from_polar(1.0 / a_ref, 0.5).expect("valid probe");
    delta_total(stack, &probe, Mode::Tm)?;

    let bad_point: Cell<Option<(f64, f64, f64)>> = Cell::new(None);
    let max_inner_error = Cell::new(0.0f64);
    let inner_tol = policy.target_abs_error * 0.02;
    let outer_tol = policy.target_abs_error * 0.5;

    let outer = quad::integrate(
        |t| {
            let inner = quad::integrate(
                |u| {
                    if u <= 0.0 || u >= 1.0 {
                        return 0.0;
                    }
                    let s = -u.ln();
                    let kappa = s / (2.0 * a_ref);
                    let pt = match SpectralPoint::from_polar(kappa, t) {
                        Ok(pt) => pt,
                        Err(_) => return 0.0,
                    };
                    let mut log_sum = 0.0;
                    for mode in Mode::BOTH {
                        match delta_total(stack, &pt, mode) {
                            Ok(d) if d > 0.0 => log_sum += d.ln(),
                            Ok(d) => {
                                bad_point.set(Some((t, s, d)));
                                return f64::NAN;
                            }
                            Err(_) => {
                                bad_point.set(Some((t, s, f64::NAN)));
                                return f64::NAN;
                            }
                        }
                    }
                    // s^2 ds = ln^2(u) du / u; divide the small factor first
                    // so the product never transits huge intermediates.
                    let lnu = u.ln();
                    lnu * lnu * (log_sum / u)
                },
                0.0,
                1.0,
                inner_tol,
                policy.max_inner_panels,
            );
            match inner {
                Ok(q) => {
                    max_inner_error.set(max_inner_error.get().max(q.abs_error));
                    q.value
                }
                Err(QuadError::Budget { value, abs_error }) => {
                    max_inner_error.set(max_inner_error.get().max(abs_error));
                    value
                }
                Err(QuadError::NonFinite { .. }) => f64::NAN,
            }
        },
        0.0,
        1.0,
        outer_tol,
        policy.max_outer_panels,
    );

    let scale = 45.0 / (2.0 * PI.powi(4));
    match outer {
        Ok(q) => Ok(EnergyResult {
            value: normalize_zero(scale * q.value),
            abs_error: scale * (q.abs_error + max_inner_error.get()),
            method: Method::Quadrature,
            n_plates: stack.len() as u128,
            sigma: common_sigma(&stack.plates().iter().collect::<Vec<_>>()),
            spacing: a_ref,
        }),
        Err(err) => {
            if let Some((t, s, delta)) = bad_point.get() {
                return Err(EnergyError::NonPositiveDelta { t, s, delta });
            }
            Err(map_quad(err))
        }
    }
}

/// Route a stack to the cheapest applicable path: ideal closed form,
/// two- or three-plate tetralogarithms, or general quadrature. Fast paths
/// apply when the stack is uniformly spaced at the reference spacing.
pub fn energy_for_stack(
    stack: &Stack,
    a_ref: f64,
    policy: &QuadraturePolicy,
) -> Result<EnergyResult, EnergyError> {
    check_spacing(a_ref)?;
    if stack.len() < 2 {
        return Ok(EnergyResult {
            value: 0.0,
            abs_error: 0.0,
            method: Method::IdealClosedForm,
            n_plates: stack.len() as u128,
            sigma: common_sigma(&stack.plates().iter().collect::<Vec<_>>()),
            spacing: a_ref,
        });
    }
    if stack.is_all_ideal() {
        return Ok(ideal_stack_energy(stack, a_ref));
    }
    let conductivity_only = stack.plates().iter().all(conductivity_like);
    let uniform_at_ref = stack.is_equally_spaced() && (stack.gap(0) - a_ref).abs() <= 1e-12 * a_ref;
    if conductivity_only && uniform_at_ref {
        match stack.len() {
            2 => return energy_pair(stack.plate(0), stack.plate(1), a_ref),
            3 => return energy_triple(stack.plate(0), stack.plate(1), stack.plate(2), a_ref),
            _ => {}
        }
    }
    energy_general(stack, a_ref, policy)
}

/// Material choice when mapping a word onto plates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlateMaterial {
    Ideal,
    Finite { sigma: f64 },
}

/// Equally spaced stack for a word: D becomes a conducting plate, N a
/// permeable one, ideal or at conductivity sigma.
pub fn stack_from_word(
    word: &Word,
    material: PlateMaterial,
    spacing: f64,
) -> Result<Stack, EnergyError> {
    check_spacing(spacing)?;
    let plates: Result<Vec<Plate>, OpticsError> = word
        .symbols()
        .iter()
        .map(|s| match (s, material) {
            (lattice::Symbol::D, PlateMaterial::Ideal) => Ok(Plate::IdealConductor),
            (lattice::Symbol::N, PlateMaterial::Ideal) => Ok(Plate::IdealPermeable),
            (lattice::Symbol::D, PlateMaterial::Finite { sigma }) => {
                Plate::finite_dielectric(sigma)
            }
            (lattice::Symbol::N, PlateMaterial::Finite { sigma }) => Plate::finite_permeable(sigma),
        })
        .collect();
    Ok(Stack::uniform(plates?, spacing)?)
}

/// Exponential growth fit of a scaled-energy ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    /// Signed prefactor of prefactor * e^{rate * I}.
    pub prefactor: f64,
    pub rate: f64,
    pub window: (u32, u32),
    /// Root-mean-square residual of the ln|E| fit.
    pub residual: f64,
    /// Ratios E(I_{m+1}) / E(I_m) of consecutive points.
    pub ratios: Vec<f64>,
}

/// Ratios of consecutive values.
pub fn consecutive_ratios(points: &[(u32, f64)]) -> Vec<f64> {
    points.windows(2).map(|w| w[1].1 / w[0].1).collect()
}

/// Least-squares fit of ln|E| against the iteration index. Refused when the
/// energies change sign or vanish; the consecutive ratios still carry
/// information in that case and ride along in the error.
pub fn growth_fit(points: &[(u32, f64)]) -> Result<GrowthFit, EnergyError> {
    if points.len() < 3 {
        return Err(EnergyError::TooFewPoints(points.len()));
    }
    let sign = points[0].1.signum();
    if points.iter().any(|&(_, e)| e == 0.0 || e.signum() != sign) {
        return Err(EnergyError::MixedSignFit {
            ratios: consecutive_ratios(points),
        });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(i, _)| i as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, e)| e.abs().ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let rate = sxy / sxx;
    let intercept = y_mean - rate * x_mean;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (intercept + rate * x);
        ss += r * r;
    }
    Ok(GrowthFit {
        prefactor: sign * intercept.exp(),
        rate,
        window: (points[0].0, points[points.len() - 1].0),
        residual: (ss / n).sqrt(),
        ratios: consecutive_ratios(points),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::presets;
    use approx::assert_relative_eq;

    #[test]
    fn li4_identities() {
        assert!((li4(1.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((li4(-1.0).unwrap() + 7.0 * PI.powi(4) / 720.0).abs() < 1e-12);
        assert_eq!(li4(0.0).unwrap(), 0.0);
        assert!(matches!(
            li4(1.0 + 1e-9),
            Err(EnergyError::PolylogDomain { .. })
        ));
        assert!(li4(f64::NAN).is_err());
    }

    #[test]
    fn li4_small_argument_series() {
        // Li4(x) = x + x^2/16 + x^3/81 + x^4/256 + ...
        let x = 0.25f64;
        let direct: f64 = (1..60).map(|k| x.powi(k) / (k as f64).powi(4)).sum();
        assert_relative_eq!(li4(x).unwrap(), direct, max_relative = 1e-13);
    }

    #[test]
    fn ideal_energies_of_small_words() {
        let fib = presets::fibonacci();
        let cases = [(1u32, 0.875f64), (2, 1.75), (3, 1.625), (4, 4.25)];
        for (i, expected) in cases {
            let w = lattice::iterate(&fib, i).unwrap();
            let e = energy_ideal(&w, 1.0).unwrap();
            assert_eq!(e.value, expected, "iteration {i}");
            assert_eq!(e.value, energy_ideal_at(&fib, i, 1.0).unwrap().value);
        }
        // A like pair alone gives -1.
        let dd = Word::new(vec![lattice::Symbol::D, lattice::Symbol::D], 0).unwrap();
        assert_eq!(energy_ideal(&dd, 1.0).unwrap().value, -1.0);
    }

    #[test]
    fn ideal_pair_energy_is_boyer_value() {
        let e = energy_pair(&Plate::IdealConductor, &Plate::IdealPermeable, 1.0).unwrap();
        assert!((e.value - 0.875).abs() < 1e-11);
        assert_eq!(e.method, Method::PolylogPair);
        let e = energy_pair(&Plate::IdealConductor, &Plate::IdealConductor, 1.0).unwrap();
        assert!((e.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn zero_conductivity_energy_vanishes() {
        let d = Plate::finite_dielectric(0.0).unwrap();
        let n = Plate::finite_permeable(0.0).unwrap();
        let e = energy_pair(&d, &n, 1.0).unwrap();
        assert_eq!(e.value, 0.0);
        let e = energy_triple(&d, &n, &d, 1.0).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn pair_saturates_toward_boyer() {
        // Saturation toward 7/8 is logarithmic in sigma: the deviation decays
        // like (2/sigma)(ln(sigma/2) + 1/2), about 0.17% at sigma = 1e4.
        let mut last = 0.0;
        for (sigma, within) in [(1e2, 0.09), (1e4, 2e-3), (1e6, 3e-5)] {
            let d = Plate::finite_dielectric(sigma).unwrap();
            let n = Plate::finite_permeable(sigma).unwrap();
            let e = energy_pair(&d, &n, 1.0).unwrap();
            assert!(
                e.value > last && e.value < 0.875,
                "sigma {sigma}: {}",
                e.value
            );
            assert!(
                (e.value - 0.875).abs() / 0.875 < within,
                "sigma {sigma}: {} not within {within} of 7/8",
                e.value
            );
            last = e.value;
        }
    }

    #[test]
    fn general_plates_are_rejected_by_fast_paths() {
        let g = Plate::general(1.0, 0.5).unwrap();
        assert!(matches!(
            energy_pair(&g, &Plate::IdealConductor, 1.0),
            Err(EnergyError::UnsupportedPlates)
        ));
    }

    #[test]
    fn growth_fit_on_synthetic_series() {
        // Constant series: rate 0.
        let pts: Vec<(u32, f64)> = (1..=10).map(|i| (i, 2.5)).collect();
        let fit = growth_fit(&pts).unwrap();
        assert!(fit.rate.abs() < 1e-12);
        assert_relative_eq!(fit.prefactor, 2.5, max_relative = 1e-12);
        assert!(fit.residual < 1e-12);

        // Pure exponential is recovered exactly.
        let pts: Vec<(u32, f64)> = (3..=12)
            .map(|i| (i, -0.4 * (0.8 * i as f64).exp()))
            .collect();
        let fit = growth_fit(&pts).unwrap();
        assert_relative_eq!(fit.rate, 0.8, max_relative = 1e-10);
        assert_relative_eq!(fit.prefactor, -0.4, max_relative = 1e-9);

        // Sign changes refuse the fit but report ratios.
        let pts = vec![(1, 1.0), (2, -2.0), (3, 4.0)];
        match growth_fit(&pts) {
            Err(EnergyError::MixedSignFit { ratios }) => assert_eq!(ratios, vec![-2.0, -2.0]),
            other => panic!("expected refusal, got {other:?}"),
        }
        assert!(matches!(
            growth_fit(&[(1, 1.0), (2, 2.0)]),
            Err(EnergyError::TooFewPoints(2))
        ));
    }

    #[test]
    fn stack_router_handles_degenerate_sizes() {
        let policy = QuadraturePolicy::default();
        let single = Stack::uniform(vec![Plate::IdealConductor], 1.0).unwrap();
        assert_eq!(energy_for_stack(&single, 1.0, &policy).unwrap().value, 0.0);

        let word = lattice::iterate(&presets::fibonacci(), 2).unwrap();
        let stack = stack_from_word(&word, PlateMaterial::Ideal, 1.0).unwrap();
        let e = energy_for_stack(&stack, 1.0, &policy).unwrap();
        assert_eq!(e.value, 1.75);
        assert_eq!(e.method, Method::IdealClosedForm);
    }

    #[test]
    fn ideal_stack_with_unequal_gaps_scales_cubically() {
        let stack = Stack::new(
            vec![
                Plate::IdealConductor,
                Plate::IdealPermeable,
                Plate::IdealConductor,
            ],
            vec![0.0, 1.0, 3.0],
        )
        .unwrap();
        let e = energy_general(&stack, 1.0, &QuadraturePolicy::default()).unwrap();
        assert_relative_eq!(e.value, 0.875 + 0.875 / 8.0, max_relative = 1e-14);
    }
}
