//! Low-energy S-wave nucleon-nucleon scattering: the two-channel S-matrix,
//! phase-shift table ingestion, the averaged complexity powers, and their
//! closed forms.
//!
//! The phase-shift difference `dd = delta_1 - delta_0` drives every closed
//! form; tables supply `(p_lab, delta_0, delta_1)` rows from which it is
//! derived.

use std::io;
use std::path::Path;

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::nlopt::OptimizerConfig;
use crate::power::{averaged_m_lin, averaged_measures};
use crate::qlin::Operator4;
use crate::scalar::Real;
use crate::stabilizers::{NnGroup, StabilizerAtlas};

/// One ingested table row; angles are stored in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShiftRecord<R: Real> {
    pub p_lab_mev: R,
    /// Spin-singlet (1S0) phase shift.
    pub delta0: R,
    /// Spin-triplet (3S1) phase shift.
    pub delta1: R,
}

impl<R: Real> PhaseShiftRecord<R> {
    pub fn delta_diff(&self) -> R {
        self.delta1 - self.delta0
    }
}

#[derive(Debug, Error)]
pub enum PhaseShiftError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("column '{column}': unknown angle unit (expected _deg or _rad)")]
    Unit { column: String },
    #[error("line {line}: p_lab must be strictly increasing")]
    NonMonotonic { line: usize },
}

/// The S-wave S-matrix in the fixed two-qubit basis: `exp(2 i delta_1)` on
/// the stretched states and the singlet/triplet mixing block in the middle.
pub fn s_matrix<R: Real>(delta0: R, delta1: R) -> Operator4<R> {
    let e1 = Complex::from_polar(R::one(), delta1 + delta1);
    let e0 = Complex::from_polar(R::one(), delta0 + delta0);
    let half = R::of(0.5);
    let plus = (e1 + e0) * half;
    let minus = (e1 - e0) * half;
    let o = Complex::<R>::zero();
    Operator4::from_rows([
        [e1, o, o, o],
        [o, plus, minus, o],
        [o, minus, plus, o],
        [o, o, o, e1],
    ])
}

/// Averaged powers of the S-matrix at one kinematic point.
///
/// Single-bar quantities average over all 60 stabilizer states; double-bar
/// quantities restrict to the 36 tensor-product states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerReport<R: Real> {
    /// Total linear magic power over all 60 states.
    pub m_lin_bar: R,
    /// Total linear magic power over the 36 tensor products.
    pub m_lin_bbar: R,
    /// Non-local magic power over the 36 tensor products.
    pub m_nl_bbar: R,
    /// Anti-flatness power over the 36 tensor products.
    pub f_a_bbar: R,
    /// Linear entanglement power over the 36 tensor products.
    pub e_bbar: R,
    /// Optimizer runs whose final polish did not stabilize.
    pub not_converged: usize,
}

/// Brute-force state-by-state powers at phase shifts `(delta0, delta1)`.
pub fn powers<R: Real>(delta0: R, delta1: R, cfg: &OptimizerConfig<R>) -> PowerReport<R> {
    let atlas = StabilizerAtlas::<R>::new();
    let s = s_matrix(delta0, delta1);
    let m_lin_bar = averaged_m_lin(&s, atlas.states().iter().map(|st| &st.state))
        .expect("S-matrix is unitary");
    let avg = averaged_measures(&s, atlas.tensor_products().map(|st| &st.state), cfg)
        .expect("S-matrix is unitary");
    PowerReport {
        m_lin_bar,
        m_lin_bbar: avg.m_lin,
        m_nl_bbar: avg.m_nl,
        f_a_bbar: avg.f_a,
        e_bbar: avg.e_lin,
        not_converged: avg.not_converged,
    }
}

/// Closed forms `(non-local magic power, total magic power, entanglement
/// power)` as functions of the phase-shift difference.
pub fn closed_forms<R: Real>(delta_diff: R) -> (R, R, R) {
    let s2 = sin_sqr_2dd(delta_diff);
    let c4 = cos_4dd(delta_diff);
    let m_nl = (R::of(11.0) + R::of(5.0) * c4) * s2 / R::of(48.0);
    let m_lin = R::of(0.15) * (R::of(3.0) + c4) * s2;
    let e = s2 / R::of(6.0);
    (m_nl, m_lin, e)
}

/// Per-group closed forms `(f_a, m_nl, m_lin)` for the final states produced
/// from the group's initial states.
pub fn group_closed_forms<R: Real>(delta_diff: R, group: NnGroup) -> (R, R, R) {
    let quarter = R::of(0.25);
    match group {
        NnGroup::G1 => (R::zero(), R::zero(), R::zero()),
        NnGroup::G2 => {
            let s4 = (R::of(4.0) * delta_diff).sin();
            let m = quarter * s4 * s4;
            (m * quarter, m, m)
        }
        NnGroup::G3 => {
            let m_nl =
                (R::of(7.0) + cos_4dd(delta_diff)) * sin_sqr_2dd(delta_diff) / R::of(32.0);
            (m_nl * quarter, m_nl, R::of(3.0) * m_nl)
        }
    }
}

fn sin_sqr_2dd<R: Real>(dd: R) -> R {
    let s = (dd + dd).sin();
    s * s
}

fn cos_4dd<R: Real>(dd: R) -> R {
    (R::of(4.0) * dd).cos()
}

/// Reads a phase-shift table from CSV.
///
/// The header must be `p_lab_MeV,delta0_<unit>,delta1_<unit>` with unit
/// `deg` or `rad` per column; degrees are converted on load, and `p_lab`
/// must be strictly increasing.
pub fn load_phase_shifts<R: Real>(
    reader: impl io::Read,
) -> Result<Vec<PhaseShiftRecord<R>>, PhaseShiftError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rd
        .headers()
        .map_err(|e| PhaseShiftError::Parse { line: 1, msg: e.to_string() })?
        .clone();
    if headers.len() != 3 {
        return Err(PhaseShiftError::Parse {
            line: 1,
            msg: format!("expected 3 columns, found {}", headers.len()),
        });
    }
    if &headers[0] != "p_lab_MeV" {
        return Err(PhaseShiftError::Parse {
            line: 1,
            msg: format!("first column must be p_lab_MeV, found '{}'", &headers[0]),
        });
    }
    let unit0 = angle_unit("delta0", &headers[1])?;
    let unit1 = angle_unit("delta1", &headers[2])?;

    let mut records = Vec::new();
    let mut prev_p: Option<f64> = None;
    for row in rd.records() {
        let row = row.map_err(|e| PhaseShiftError::Parse {
            line: e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or(records.len() + 2),
            msg: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(records.len() + 2);
        if row.len() != 3 {
            return Err(PhaseShiftError::Parse {
                line,
                msg: format!("expected 3 fields, found {}", row.len()),
            });
        }
        let field = |k: usize| -> Result<f64, PhaseShiftError> {
            row[k].parse::<f64>().map_err(|_| PhaseShiftError::Parse {
                line,
                msg: format!("field '{}' is not a number", &row[k]),
            })
        };
        let p_lab = field(0)?;
        let d0 = unit0.to_radians(field(1)?);
        let d1 = unit1.to_radians(field(2)?);
        if !(p_lab.is_finite() && d0.is_finite() && d1.is_finite()) {
            return Err(PhaseShiftError::Parse { line, msg: "non-finite value".into() });
        }
        if let Some(prev) = prev_p {
            if p_lab <= prev {
                return Err(PhaseShiftError::NonMonotonic { line });
            }
        }
        prev_p = Some(p_lab);
        records.push(PhaseShiftRecord {
            p_lab_mev: R::of(p_lab),
            delta0: R::of(d0),
            delta1: R::of(d1),
        });
    }
    Ok(records)
}

pub fn load_phase_shifts_path<R: Real>(
    path: impl AsRef<Path>,
) -> Result<Vec<PhaseShiftRecord<R>>, PhaseShiftError> {
    let file = std::fs::File::open(path)?;
    load_phase_shifts(io::BufReader::new(file))
}

#[derive(Clone, Copy)]
enum AngleUnit {
    Degrees,
    Radians,
}

impl AngleUnit {
    fn to_radians(self, x: f64) -> f64 {
        match self {
            AngleUnit::Degrees => x.to_radians(),
            AngleUnit::Radians => x,
        }
    }
}

fn angle_unit(prefix: &str, header: &str) -> Result<AngleUnit, PhaseShiftError> {
    match header.strip_prefix(prefix).and_then(|s| s.strip_prefix('_')) {
        Some("deg") => Ok(AngleUnit::Degrees),
        Some("rad") => Ok(AngleUnit::Radians),
        _ => Err(PhaseShiftError::Unit { column: header.to_string() }),
    }
}
