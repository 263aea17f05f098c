//! Sweep engine: evaluates the process maps over kinematic grids and renders
//! the figure datasets.
//!
//! Grid points are mapped in parallel with an order-preserving collection and
//! all per-point work is pure, so outputs are byte-identical for any worker
//! count and a fixed seed.

use rayon::prelude::*;

use qmagic_core::measures::magic_report;
use qmagic_core::moller::{amplitude_matrix, final_state, ScatteringAngle, ANGLE_GUARD};
use qmagic_core::nlopt::nonlocal_magic;
use qmagic_core::nn::{powers, s_matrix};
use qmagic_core::power::averaged_measures;
use qmagic_core::clifford::{clifford_averaged_antiflatness, AverageMode, CliffordGroup};
use qmagic_core::stabilizers::{
    moller_group_of, moller_representatives, nn_group_of, MollerGroup, NnGroup,
};
use qmagic_core::{
    OptimizerConfig64, PhaseShiftRecord64, StabilizerAtlas64, TwoQubitState64,
};

use crate::output::{Table, Value};
use crate::CliError;

/// Which initial states a filtered sweep averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialSet {
    Tensor,
    Entangled,
    All,
}

impl InitialSet {
    fn label(&self) -> &'static str {
        match self {
            InitialSet::Tensor => "tensor",
            InitialSet::Entangled => "entangled",
            InitialSet::All => "all",
        }
    }

    fn admits(&self, entangled: bool) -> bool {
        match self {
            InitialSet::Tensor => !entangled,
            InitialSet::Entangled => entangled,
            InitialSet::All => true,
        }
    }
}

/// NN sweep driver: either a direct range of phase-shift differences or an
/// ingested (p_lab, delta0, delta1) table.
#[derive(Debug, Clone)]
pub enum NnGrid {
    DeltaRange { min: f64, max: f64, steps: usize },
    PhaseShifts(Vec<PhaseShiftRecord64>),
}

#[derive(Debug, Clone)]
pub struct NnSweepSpec {
    pub grid: NnGrid,
    pub initial: InitialSet,
    pub group: Option<NnGroup>,
    pub cfg: OptimizerConfig64,
}

/// Inclusive grid with the endpoints pinned exactly (the naive
/// `lo + span * k / (n-1)` formula can overshoot `hi` by an ulp, which
/// matters when `hi` sits on the angle-domain boundary).
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::Parse("sweep needs at least 2 steps".into()));
    }
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (steps as f64 - 1.0)
            }
        })
        .collect())
}

/// A single NN kinematic point.
struct NnPoint {
    p_lab: Option<f64>,
    delta0: f64,
    delta1: f64,
}

fn nn_points(grid: &NnGrid) -> Result<Vec<NnPoint>, CliError> {
    match grid {
        NnGrid::DeltaRange { min, max, steps } => Ok(linspace(*min, *max, *steps)?
            .into_iter()
            .map(|dd| NnPoint { p_lab: None, delta0: 0.0, delta1: dd })
            .collect()),
        NnGrid::PhaseShifts(records) => Ok(records
            .iter()
            .map(|r| NnPoint { p_lab: Some(r.p_lab_mev), delta0: r.delta0, delta1: r.delta1 })
            .collect()),
    }
}

/// Runs an NN sweep.
///
/// Unfiltered sweeps emit the canonical dataset
/// `p_lab_MeV,delta_diff_rad,m_lin_bar,m_lin_bbar,m_nl_bbar,f_a_bbar,e_bbar`;
/// group- or initial-filtered sweeps emit
/// `p_lab_MeV,delta_diff_rad,group,m_lin,m_nl,f_a_times4,e_lin` with averages
/// over the selected states.
pub fn nn_sweep(spec: &NnSweepSpec) -> Result<Table, CliError> {
    let points = nn_points(&spec.grid)?;
    let unfiltered = spec.group.is_none() && spec.initial == InitialSet::All;
    if unfiltered {
        let mut table = Table::new(&[
            "p_lab_MeV",
            "delta_diff_rad",
            "m_lin_bar",
            "m_lin_bbar",
            "m_nl_bbar",
            "f_a_bbar",
            "e_bbar",
        ]);
        let rows: Vec<Vec<Value>> = points
            .par_iter()
            .map(|pt| {
                let report = powers(pt.delta0, pt.delta1, &spec.cfg);
                vec![
                    pt.p_lab.map_or(Value::Empty, Value::F),
                    Value::F(pt.delta1 - pt.delta0),
                    Value::F(report.m_lin_bar),
                    Value::F(report.m_lin_bbar),
                    Value::F(report.m_nl_bbar),
                    Value::F(report.f_a_bbar),
                    Value::F(report.e_bbar),
                ]
            })
            .collect();
        table.rows = rows;
        return Ok(table);
    }

    let atlas = StabilizerAtlas64::new();
    let selected: Vec<TwoQubitState64> = atlas
        .states()
        .iter()
        .filter(|s| spec.initial.admits(s.entangled))
        .filter(|s| {
            spec.group
                .map(|g| nn_group_of(s.index).unwrap() == g)
                .unwrap_or(true)
        })
        .map(|s| s.state)
        .collect();
    if selected.is_empty() {
        return Err(CliError::Parse("no states match the requested filter".into()));
    }
    let label = spec
        .group
        .map(|g| g.to_string())
        .unwrap_or_else(|| spec.initial.label().to_string());
    let mut table = Table::new(&[
        "p_lab_MeV",
        "delta_diff_rad",
        "group",
        "m_lin",
        "m_nl",
        "f_a_times4",
        "e_lin",
    ]);
    let rows: Vec<Vec<Value>> = points
        .par_iter()
        .map(|pt| {
            let s = s_matrix(pt.delta0, pt.delta1);
            let avg = averaged_measures(&s, selected.iter(), &spec.cfg)
                .expect("S-matrix is unitary");
            vec![
                pt.p_lab.map_or(Value::Empty, Value::F),
                Value::F(pt.delta1 - pt.delta0),
                Value::S(label.clone()),
                Value::F(avg.m_lin),
                Value::F(avg.m_nl),
                Value::F(4.0 * avg.f_a),
                Value::F(avg.e_lin),
            ]
        })
        .collect();
    table.rows = rows;
    Ok(table)
}

/// Møller sweep spec. Without a group filter and with the default tensor
/// initial set, one row per tensor group label is emitted per angle (the
/// per-group figure dataset); otherwise rows carry averages over the
/// selected states.
#[derive(Debug, Clone)]
pub struct MollerSweepSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    pub steps: usize,
    pub initial: InitialSet,
    pub group: Option<MollerGroup>,
    pub cfg: OptimizerConfig64,
}

impl MollerSweepSpec {
    pub fn default_range() -> (f64, f64) {
        (ANGLE_GUARD, std::f64::consts::PI - ANGLE_GUARD)
    }

    fn thetas(&self) -> Result<Vec<f64>, CliError> {
        linspace(self.theta_min, self.theta_max, self.steps)?
            .into_iter()
            .map(|theta| {
                ScatteringAngle::new(theta)
                    .map(|a| a.theta())
                    .map_err(|e| CliError::Parse(e.to_string()))
            })
            .collect()
    }
}

pub fn moller_sweep(spec: &MollerSweepSpec) -> Result<Table, CliError> {
    let thetas = spec.thetas()?;
    let mut table = Table::new(&["theta_rad", "group", "m_lin", "m_nl", "f_a_times4", "e_lin"]);

    // Default dataset: the six per-group curves from the representatives.
    if spec.group.is_none() && spec.initial == InitialSet::Tensor {
        let reps = moller_representatives::<f64>();
        let rows: Vec<Vec<Value>> = thetas
            .par_iter()
            .flat_map_iter(|&theta| {
                let ang = ScatteringAngle::new(theta).expect("validated grid");
                reps.iter().map(move |(label, psi)| {
                    let out = final_state(ang, psi).expect("representatives are never annihilated");
                    let rep = magic_report(&out).expect("normalized final state");
                    let nl = nonlocal_magic(&out, &spec.cfg);
                    vec![
                        Value::F(theta),
                        Value::S(label.to_string()),
                        Value::F(rep.m_lin),
                        Value::F(nl.m_nl),
                        Value::F(4.0 * rep.f_a),
                        Value::F(rep.e_lin),
                    ]
                })
            })
            .collect();
        table.rows = rows;
        return Ok(table);
    }

    let atlas = StabilizerAtlas64::new();
    let selected: Vec<(usize, TwoQubitState64)> = atlas
        .states()
        .iter()
        .filter(|s| spec.initial.admits(s.entangled))
        .filter(|s| {
            spec.group
                .map(|g| moller_group_of(s.index).unwrap() == g)
                .unwrap_or(true)
        })
        .map(|s| (s.index, s.state))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Parse("no states match the requested filter".into()));
    }
    let label = spec
        .group
        .map(|g| g.to_string())
        .unwrap_or_else(|| spec.initial.label().to_string());
    let rows: Vec<Vec<Value>> = thetas
        .par_iter()
        .map(|&theta| {
            let ang = ScatteringAngle::new(theta).expect("validated grid");
            let a = amplitude_matrix(ang);
            averaged_measures(&a, selected.iter().map(|(_, s)| s), &spec.cfg)
                .map(|avg| {
                    vec![
                        Value::F(theta),
                        Value::S(label.clone()),
                        Value::F(avg.m_lin),
                        Value::F(avg.m_nl),
                        Value::F(4.0 * avg.f_a),
                        Value::F(avg.e_lin),
                    ]
                })
                .map_err(|_| {
                    CliError::Failed(format!(
                        "the amplitude annihilates stabilizer state 37 at theta = {theta} \
                         (exactly pi/2); shift the grid, e.g. use an even step count"
                    ))
                })
        })
        .collect::<Result<_, _>>()?;
    table.rows = rows;
    Ok(table)
}

/// Clifford-average sweep (the sampled-versus-identity figure dataset):
/// per angle and group representative, the averaged anti-flatness of the
/// final state next to `c(4,2) * M_lin`.
#[derive(Debug, Clone)]
pub struct CliffordSweepSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    pub steps: usize,
    pub groups: Vec<MollerGroup>,
    pub mode: AverageMode,
    pub samples: usize,
    pub seed: u64,
}

pub fn moller_clifford_sweep(spec: &CliffordSweepSpec) -> Result<Table, CliError> {
    let reps = moller_representatives::<f64>();
    let mut chosen: Vec<(MollerGroup, TwoQubitState64)> = Vec::new();
    for g in &spec.groups {
        match reps.iter().find(|(label, _)| label == g) {
            Some(hit) => chosen.push(*hit),
            None => {
                return Err(CliError::Parse(format!(
                    "group {g} has no tensor-product representative"
                )))
            }
        }
    }
    let thetas = linspace(spec.theta_min, spec.theta_max, spec.steps)?;
    let group = CliffordGroup::shared();
    let c = qmagic_core::clifford::c_factor::<f64>(4, 2).expect("d=4, d_A=2");

    let mut table =
        Table::new(&["theta_rad", "group", "mean_f", "std_err", "c_times_mlin"]);
    let rows: Vec<Vec<Value>> = thetas
        .par_iter()
        .flat_map_iter(|&theta| {
            let ang = ScatteringAngle::new(theta).expect("validated grid");
            let mode = spec.mode;
            let samples = spec.samples;
            let seed = spec.seed;
            chosen.iter().map(move |(label, psi)| {
                let out = final_state(ang, psi).expect("representatives are never annihilated");
                let avg = clifford_averaged_antiflatness(group, &out, mode, samples, seed);
                let m = magic_report(&out).expect("normalized final state").m_lin;
                vec![
                    Value::F(theta),
                    Value::S(label.to_string()),
                    Value::F(avg.mean_f),
                    Value::F(avg.std_err),
                    Value::F(c * m),
                ]
            })
        })
        .collect();
    table.rows = rows;
    Ok(table)
}

/// The atlas listing: normalized amplitudes plus both group labels.
pub fn stabilizers_table() -> Table {
    let atlas = StabilizerAtlas64::new();
    let mut table = Table::new(&[
        "index", "re00", "im00", "re01", "im01", "re10", "im10", "re11", "im11",
        "entangled", "nn_group", "moller_group",
    ]);
    for s in atlas.states() {
        let a = s.state.amps();
        table.push(vec![
            Value::I(s.index as i64),
            Value::F(a[0].re),
            Value::F(a[0].im),
            Value::F(a[1].re),
            Value::F(a[1].im),
            Value::F(a[2].re),
            Value::F(a[2].im),
            Value::F(a[3].re),
            Value::F(a[3].im),
            Value::B(s.entangled),
            Value::S(nn_group_of(s.index).unwrap().to_string()),
            Value::S(moller_group_of(s.index).unwrap().to_string()),
        ]);
    }
    table
}
