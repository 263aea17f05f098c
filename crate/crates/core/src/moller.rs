//! High-energy Møller scattering (e- e- -> e- e-) in the helicity basis: the
//! leading-order amplitude matrix, Mandelstam-form helicity amplitudes,
//! center-of-momentum kinematics, final-state construction, and the per-group
//! closed forms for total magic and anti-flatness.
//!
//! The overall coupling factors are dropped throughout; they cancel when the
//! final-state wavefunction is renormalized. The amplitude path is strictly
//! massless, while [`Kinematics`] keeps the electron mass for s, t, u
//! bookkeeping.

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::qlin::{apply, normalize, Operator4, QlinError, TwoQubitState};
use crate::scalar::Real;
use crate::stabilizers::MollerGroup;

/// Default guard band keeping angles away from the forward/backward
/// singularities of the amplitude.
pub const ANGLE_GUARD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MollerError {
    #[error("scattering angle {theta} outside ({guard:e}, pi - {guard:e})")]
    AngleOutOfDomain { theta: f64, guard: f64 },
    #[error("forward/backward singularity: |t| or |u| below 1e-12 * s (t={t:e}, u={u:e})")]
    ForwardBackwardSingularity { t: f64, u: f64 },
    #[error("electron mass {m_e} exceeds E/2 = {half_energy}")]
    UnphysicalMass { m_e: f64, half_energy: f64 },
    #[error("no closed form for group {label}")]
    NoClosedForm { label: MollerGroup },
}

/// Center-of-momentum scattering angle, validated to sit strictly inside
/// (0, pi): the amplitude diverges at the endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAngle<R: Real> {
    theta: R,
}

impl<R: Real> ScatteringAngle<R> {
    pub fn new(theta: R) -> Result<Self, MollerError> {
        Self::with_guard(theta, R::of(ANGLE_GUARD))
    }

    pub fn with_guard(theta: R, guard: R) -> Result<Self, MollerError> {
        if theta >= guard && theta <= R::PI() - guard {
            Ok(Self { theta })
        } else {
            Err(MollerError::AngleOutOfDomain {
                theta: theta.to_f64().unwrap_or(f64::NAN),
                guard: guard.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn theta(&self) -> R {
        self.theta
    }
}

/// The high-energy scattering amplitude matrix in the helicity basis, up to
/// the dropped overall proportionality.
pub fn amplitude_matrix<R: Real>(angle: ScatteringAngle<R>) -> Operator4<R> {
    let theta = angle.theta();
    let half = R::of(0.5);
    let two = R::of(2.0);
    let eight = R::of(8.0);
    let sin = theta.sin();
    let (sh, ch) = ((theta * half).sin(), (theta * half).cos());
    let corner = -eight / (sin * sin);
    let cot2 = (ch / sh) * (ch / sh);
    let tan2 = (sh / ch) * (sh / ch);
    let diag = -two * cot2;
    let off = two * tan2;
    let re = |x: R| Complex::new(x, R::zero());
    let o = Complex::<R>::zero();
    Operator4::from_rows([
        [re(corner), o, o, o],
        [o, re(diag), re(off), o],
        [o, re(off), re(diag), o],
        [o, o, o, re(corner)],
    ])
}

/// The three independent nonzero helicity amplitudes in Mandelstam form:
/// `(A_RR:RR, A_RL:RL, A_RL:LR)`.
pub fn helicity_amplitudes<R: Real>(s: R, t: R, u: R) -> Result<(R, R, R), MollerError> {
    let floor = R::of(1e-12) * s.abs();
    if t.abs() < floor || u.abs() < floor {
        return Err(MollerError::ForwardBackwardSingularity {
            t: t.to_f64().unwrap_or(f64::NAN),
            u: u.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = R::of(2.0);
    let sum = t + u;
    Ok((-two * sum * sum / (t * u), -two * u / t, two * t / u))
}

/// Center-of-momentum 2 -> 2 kinematics. Four-vectors are `(E, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics<R: Real> {
    pub energy: R,
    pub m_e: R,
    pub momentum: R,
    pub p1: [R; 4],
    pub p2: [R; 4],
    pub p3: [R; 4],
    pub p4: [R; 4],
    pub s: R,
    pub t: R,
    pub u: R,
}

impl<R: Real> Kinematics<R> {
    /// On-shell kinematics at total energy `energy` and scattering angle
    /// `angle`; `s + t + u = 4 m_e^2`, reducing to zero in the massless limit.
    pub fn cm(energy: R, m_e: R, angle: ScatteringAngle<R>) -> Result<Self, MollerError> {
        let half = R::of(0.5);
        let half_e = energy * half;
        if m_e > half_e {
            return Err(MollerError::UnphysicalMass {
                m_e: m_e.to_f64().unwrap_or(f64::NAN),
                half_energy: half_e.to_f64().unwrap_or(f64::NAN),
            });
        }
        let p = (half_e * half_e - m_e * m_e).sqrt();
        let theta = angle.theta();
        let (st, ct) = (theta.sin(), theta.cos());
        let zero = R::zero();
        let two = R::of(2.0);
        let p_sqr = p * p;
        Ok(Self {
            energy,
            m_e,
            momentum: p,
            p1: [half_e, zero, zero, p],
            p2: [half_e, zero, zero, -p],
            p3: [half_e, zero, p * st, p * ct],
            p4: [half_e, zero, -(p * st), -(p * ct)],
            s: energy * energy,
            t: -(two * p_sqr * (R::one() - ct)),
            u: -(two * p_sqr * (R::one() + ct)),
        })
    }

    pub fn massless(energy: R, angle: ScatteringAngle<R>) -> Self {
        Self::cm(energy, R::zero(), angle).expect("zero mass is always physical")
    }

    pub fn mandelstam(&self) -> (R, R, R) {
        (self.s, self.t, self.u)
    }
}

/// Normalized post-scattering wavefunction `N * A(theta) |psi>`.
///
/// Errors with [`QlinError::ZeroVector`] if the amplitude annihilates the
/// input. Among the sixty stabilizer states this happens only for the
/// symmetric combination (|01> + |10>)/sqrt(2) (state 37) at theta = pi/2
/// exactly, where its eigenvalue -8 cos(theta)/sin^2(theta) crosses zero.
pub fn final_state<R: Real>(
    angle: ScatteringAngle<R>,
    psi: &TwoQubitState<R>,
) -> Result<TwoQubitState<R>, QlinError> {
    normalize(apply(&amplitude_matrix(angle), psi))
}

/// Closed-form total linear magic of the final state for each group.
///
/// Entangled Group-5 members share the Group-5 expression; state 43 has no
/// published assignment, so `Unassigned` has no closed form.
pub fn group_m_lin<R: Real>(
    angle: ScatteringAngle<R>,
    label: MollerGroup,
) -> Result<R, MollerError> {
    let theta = angle.theta();
    let c2 = (theta + theta).cos();
    let c4 = (R::of(4.0) * theta).cos();
    let c6 = (R::of(6.0) * theta).cos();
    let sin = theta.sin();
    let s2 = sin * sin;
    let s4 = s2 * s2;
    Ok(match label {
        MollerGroup::G1 => R::zero(),
        MollerGroup::G2 => {
            let cos2 = theta.cos() * theta.cos();
            let den = c2 + R::of(3.0);
            R::of(64.0) * s4 * cos2 / den.powi(4)
        }
        MollerGroup::G3 => {
            let num = R::of(20.0) * c2 + c4 + R::of(43.0);
            let den = R::of(12.0) * c2 + c4 + R::of(51.0);
            R::of(1024.0) * s4 * num * num / den.powi(4)
        }
        MollerGroup::G4 => {
            let half = R::of(0.5);
            let cot = (theta * half).cos() / (theta * half).sin();
            let cot8 = cot.powi(8);
            let num = cot8 * (cot8 - R::one()) * (cot8 - R::one());
            R::of(4.0) * num / (cot8 + R::one()).powi(4)
        }
        MollerGroup::G5a | MollerGroup::G5b | MollerGroup::G5Ent => {
            let num = R::of(799.0) * c2 - R::of(10.0) * c4 + c6 + R::of(1258.0);
            let den = c2 + R::of(7.0);
            R::of(32.0) * s4 * num / den.powi(6)
        }
        MollerGroup::Unassigned => {
            return Err(MollerError::NoClosedForm { label });
        }
    })
}

/// Closed-form anti-flatness of the final state for the tensor-product group
/// labels. For Groups 1-4 the non-local magic saturates the total magic and
/// `F_A = M_lin / 4`; Groups 5a and 5b carry their own expressions (printed
/// in the source as `M_NL = 4 F_A`). Entangled Group-5 members are evaluated
/// numerically only.
pub fn group_anti_flatness<R: Real>(
    angle: ScatteringAngle<R>,
    label: MollerGroup,
) -> Result<R, MollerError> {
    let theta = angle.theta();
    let quarter = R::of(0.25);
    let c2 = (theta + theta).cos();
    let c4 = (R::of(4.0) * theta).cos();
    let c6 = (R::of(6.0) * theta).cos();
    let sin = theta.sin();
    let s4 = (sin * sin) * (sin * sin);
    match label {
        MollerGroup::G1 | MollerGroup::G2 | MollerGroup::G3 | MollerGroup::G4 => {
            Ok(group_m_lin(angle, label)? * quarter)
        }
        MollerGroup::G5a => {
            let a = c2 + R::of(15.0);
            let num = R::of(28.0) * c2 + c4 + R::of(35.0);
            let den = c2 + R::of(7.0);
            let m_nl = R::of(256.0) * s4 * a * a * num / den.powi(8);
            Ok(m_nl * quarter)
        }
        MollerGroup::G5b => {
            let num = R::of(175.0) * c2 + R::of(18.0) * c4 + c6 + R::of(318.0);
            let den = c2 + R::of(7.0);
            let m_nl = R::of(128.0) * s4 * s4 * num / den.powi(8);
            Ok(m_nl * quarter)
        }
        MollerGroup::G5Ent | MollerGroup::Unassigned => {
            Err(MollerError::NoClosedForm { label })
        }
    }
}
