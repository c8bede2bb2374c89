//! Plate material models and single-plate TE/TM reflection and transmission
//! coefficients at an imaginary-frequency spectral point.

use thiserror::Error;

/// Field polarization. `Tm` is the magnetic (H) Green's function mode,
/// `Te` the electric (E) one. TE expressions follow from TM by swapping
/// the electric and magnetic couplings of every plate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Tm,
    Te,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Tm, Mode::Te];
}

#[derive(Debug, Error, PartialEq)]
pub enum OpticsError {
    #[error("degenerate spectral point: kappa must be positive (zeta={zeta}, kperp={kperp})")]
    DegeneratePoint { zeta: f64, kperp: f64 },
    #[error("invalid spectral parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid plate coupling: {0}")]
    InvalidCoupling(String),
}

/// A single delta-function plate.
///
/// Ideal plates are represented symbolically so their coefficients are the
/// exact values +-1 and 0 instead of saturated finite ones; this keeps
/// products of scattering factors free of overflow and rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Plate {
    /// Perfect electric conductor: r_tm = 1, r_te = -1, opaque.
    IdealConductor,
    /// Infinitely permeable plate: r_tm = -1, r_te = 1, opaque.
    IdealPermeable,
    /// Purely dielectric plate with constant optical conductivity,
    /// electric coupling sigma/zeta.
    FiniteDielectric { sigma: f64 },
    /// Purely permeable plate with constant optical conductivity,
    /// magnetic coupling sigma/zeta.
    FinitePermeable { sigma: f64 },
    /// Constant couplings lambda_e, lambda_g (no frequency dependence).
    General { lambda_e: f64, lambda_g: f64 },
}

impl Plate {
    pub fn finite_dielectric(sigma: f64) -> Result<Plate, OpticsError> {
        if sigma < 0.0 || !sigma.is_finite() {
            return Err(OpticsError::InvalidCoupling(format!(
                "sigma must be a nonnegative finite real, got {sigma}"
            )));
        }
        Ok(Plate::FiniteDielectric { sigma })
    }

    pub fn finite_permeable(sigma: f64) -> Result<Plate, OpticsError> {
        if sigma < 0.0 || !sigma.is_finite() {
            return Err(OpticsError::InvalidCoupling(format!(
                "sigma must be a nonnegative finite real, got {sigma}"
            )));
        }
        Ok(Plate::FinitePermeable { sigma })
    }

    pub fn general(lambda_e: f64, lambda_g: f64) -> Result<Plate, OpticsError> {
        if lambda_e < 0.0 || !lambda_e.is_finite() || lambda_g < 0.0 || !lambda_g.is_finite() {
            return Err(OpticsError::InvalidCoupling(format!(
                "couplings must be nonnegative finite reals, got ({lambda_e}, {lambda_g})"
            )));
        }
        Ok(Plate::General { lambda_e, lambda_g })
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, Plate::IdealConductor | Plate::IdealPermeable)
    }

    /// The plate with electric and magnetic couplings exchanged.
    /// TE coefficients of a plate equal TM coefficients of its dual.
    pub fn dual(&self) -> Plate {
        match *self {
            Plate::IdealConductor => Plate::IdealPermeable,
            Plate::IdealPermeable => Plate::IdealConductor,
            Plate::FiniteDielectric { sigma } => Plate::FinitePermeable { sigma },
            Plate::FinitePermeable { sigma } => Plate::FiniteDielectric { sigma },
            Plate::General { lambda_e, lambda_g } => Plate::General {
                lambda_e: lambda_g,
                lambda_g: lambda_e,
            },
        }
    }

    /// True when the plate carries no electric coupling in the given mode's
    /// "active" slot, i.e. it scatters with t = 1 + r. TM requires purely
    /// permeable plates, TE purely dielectric ones.
    pub fn is_pure_for(&self, mode: Mode) -> bool {
        match mode {
            Mode::Tm => matches!(
                self,
                Plate::IdealPermeable
                    | Plate::FinitePermeable { .. }
                    | Plate::General { lambda_e: 0.0, .. }
            ),
            Mode::Te => matches!(
                self,
                Plate::IdealConductor
                    | Plate::FiniteDielectric { .. }
                    | Plate::General { lambda_g: 0.0, .. }
            ),
        }
    }
}

/// A point of the Euclidean (imaginary-frequency) spectrum.
///
/// `kappa = sqrt(kperp^2 + zeta^2)` and `t = zeta / kappa` in [0, 1] is the
/// polar cosine. For plates with conductivity coupling sigma/zeta the
/// coefficients depend on (sigma, t) only, so scaled energy integrands
/// can be parametrized by t alone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    zeta: f64,
    kperp: f64,
    kappa: f64,
    t: f64,
}

impl SpectralPoint {
    pub fn new(zeta: f64, kperp: f64) -> Result<SpectralPoint, OpticsError> {
        if zeta < 0.0 || kperp < 0.0 || !zeta.is_finite() || !kperp.is_finite() {
            return Err(OpticsError::InvalidParameter(format!(
                "zeta and kperp must be nonnegative finite reals, got ({zeta}, {kperp})"
            )));
        }
        let kappa = zeta.hypot(kperp);
        if kappa <= 0.0 {
            return Err(OpticsError::DegeneratePoint { zeta, kperp });
        }
        Ok(SpectralPoint {
            zeta,
            kperp,
            kappa,
            t: zeta / kappa,
        })
    }

    /// Construct from the polar parametrization (kappa, t).
    pub fn from_polar(kappa: f64, t: f64) -> Result<SpectralPoint, OpticsError> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(OpticsError::InvalidParameter(format!(
                "kappa must be a positive finite real, got {kappa}"
            )));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(OpticsError::InvalidParameter(format!(
                "t must lie in [0, 1], got {t}"
            )));
        }
        let zeta = t * kappa;
        let kperp = kappa * (1.0 - t * t).max(0.0).sqrt();
        Ok(SpectralPoint {
            zeta,
            kperp,
            kappa,
            t,
        })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn kperp(&self) -> f64 {
        self.kperp
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Polar cosine zeta / kappa.
    pub fn t(&self) -> f64 {
        self.t
    }
}

/// TM and TE reflection/transmission amplitudes of one plate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients {
    pub r_tm: f64,
    pub t_tm: f64,
    pub r_te: f64,
    pub t_te: f64,
}

impl Coefficients {
    pub fn r(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Tm => self.r_tm,
            Mode::Te => self.r_te,
        }
    }

    pub fn t(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Tm => self.t_tm,
            Mode::Te => self.t_te,
        }
    }
}

/// Reflection and transmission amplitudes of `plate` at `pt`.
///
/// Conductivity-coupled plates are evaluated in the (sigma, t)
/// parametrization, where
///
/// ```text
///   dielectric:  r_tm =  sigma / (sigma + 2 t),   t_tm = 1 - r_tm,
///                r_te = -sigma t / (sigma t + 2), t_te = 1 + r_te,
/// ```
///
/// and the permeable plate mirrors these with the modes exchanged. The
/// t = 0 endpoint takes the continuous-limit values (r_tm = 1, r_te = 0 for
/// a dielectric plate with sigma > 0), keeping energy integrands finite.
pub fn coefficients(plate: &Plate, pt: &SpectralPoint) -> Coefficients {
    match *plate {
        Plate::IdealConductor => Coefficients {
            r_tm: 1.0,
            t_tm: 0.0,
            r_te: -1.0,
            t_te: 0.0,
        },
        Plate::IdealPermeable => Coefficients {
            r_tm: -1.0,
            t_tm: 0.0,
            r_te: 1.0,
            t_te: 0.0,
        },
        Plate::FiniteDielectric { sigma } => {
            let (r_tm, r_te) = conductivity_pair(sigma, pt.t);
            Coefficients {
                r_tm,
                t_tm: 1.0 - r_tm,
                r_te,
                t_te: 1.0 + r_te,
            }
        }
        Plate::FinitePermeable { sigma } => {
            let (r_dielectric_tm, r_dielectric_te) = conductivity_pair(sigma, pt.t);
            // Mirror of the dielectric plate: r_tm <-> r_te.
            let r_tm = r_dielectric_te;
            let r_te = r_dielectric_tm;
            Coefficients {
                r_tm,
                t_tm: 1.0 + r_tm,
                r_te,
                t_te: 1.0 - r_te,
            }
        }
        Plate::General { lambda_e, lambda_g } => {
            let (r_tm, t_tm) = general_tm(lambda_e, lambda_g, pt);
            let (r_te, t_te) = general_tm(lambda_g, lambda_e, pt);
            Coefficients {
                r_tm,
                t_tm,
                r_te,
                t_te,
            }
        }
    }
}

/// (r_tm, r_te) of a purely dielectric conductivity plate at polar cosine t.
fn conductivity_pair(sigma: f64, t: f64) -> (f64, f64) {
    if sigma == 0.0 {
        return (0.0, 0.0);
    }
    let r_tm = sigma / (sigma + 2.0 * t);
    let r_te = -sigma * t / (sigma * t + 2.0);
    (r_tm, r_te)
}

/// TM amplitudes of a constant-coupling plate, dimensional form:
/// r = -lg z^2/(lg z^2 + 2k) + le k/(le k + 2), t = 1 - lg z^2/(..) - le k/(..).
fn general_tm(lambda_e: f64, lambda_g: f64, pt: &SpectralPoint) -> (f64, f64) {
    let magnetic = if lambda_g == 0.0 {
        0.0
    } else {
        let z2 = pt.zeta * pt.zeta;
        lambda_g * z2 / (lambda_g * z2 + 2.0 * pt.kappa)
    };
    let electric = if lambda_e == 0.0 {
        0.0
    } else {
        lambda_e * pt.kappa / (lambda_e * pt.kappa + 2.0)
    };
    (electric - magnetic, 1.0 - magnetic - electric)
}
