//! The atlas of the sixty two-qubit stabilizer states with the group
//! taxonomies used by the two scattering processes.
//!
//! States 1-36 are tensor products of single-qubit stabilizers; 37-60 are the
//! maximally entangled ones. Raw amplitudes are embedded as exact integer /
//! imaginary-unit tuples and normalized at load.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use thiserror::Error;

use crate::measures::linear_entropy;
use crate::qlin::{normalize, partial_trace_b, TwoQubitState};
use crate::scalar::Real;

pub const ATLAS_LEN: usize = 60;
pub const TENSOR_PRODUCT_LEN: usize = 36;

/// Raw amplitudes as (re, im) integer pairs, rows 1..=60.
#[rustfmt::skip]
const TABLE: [[(i8, i8); 4]; ATLAS_LEN] = [
    [(1,0), (1,0), (1,0), (1,0)],     // 1
    [(1,0), (-1,0), (1,0), (-1,0)],   // 2
    [(1,0), (1,0), (-1,0), (-1,0)],   // 3
    [(1,0), (-1,0), (-1,0), (1,0)],   // 4
    [(1,0), (1,0), (0,1), (0,1)],     // 5
    [(1,0), (-1,0), (0,1), (0,-1)],   // 6
    [(1,0), (1,0), (0,-1), (0,-1)],   // 7
    [(1,0), (-1,0), (0,-1), (0,1)],   // 8
    [(1,0), (1,0), (0,0), (0,0)],     // 9
    [(1,0), (-1,0), (0,0), (0,0)],    // 10
    [(0,0), (0,0), (1,0), (1,0)],     // 11
    [(0,0), (0,0), (1,0), (-1,0)],    // 12
    [(1,0), (0,1), (1,0), (0,1)],     // 13
    [(1,0), (0,-1), (1,0), (0,-1)],   // 14
    [(1,0), (0,1), (-1,0), (0,-1)],   // 15
    [(1,0), (0,-1), (-1,0), (0,1)],   // 16
    [(1,0), (0,1), (0,1), (-1,0)],    // 17
    [(1,0), (0,-1), (0,1), (1,0)],    // 18
    [(1,0), (0,1), (0,-1), (1,0)],    // 19
    [(1,0), (0,-1), (0,-1), (-1,0)],  // 20
    [(1,0), (0,1), (0,0), (0,0)],     // 21
    [(1,0), (0,-1), (0,0), (0,0)],    // 22
    [(0,0), (0,0), (1,0), (0,1)],     // 23
    [(0,0), (0,0), (1,0), (0,-1)],    // 24
    [(1,0), (0,0), (1,0), (0,0)],     // 25
    [(0,0), (1,0), (0,0), (1,0)],     // 26
    [(1,0), (0,0), (-1,0), (0,0)],    // 27
    [(0,0), (1,0), (0,0), (-1,0)],    // 28
    [(1,0), (0,0), (0,1), (0,0)],     // 29
    [(0,0), (1,0), (0,0), (0,1)],     // 30
    [(1,0), (0,0), (0,-1), (0,0)],    // 31
    [(0,0), (1,0), (0,0), (0,-1)],    // 32
    [(1,0), (0,0), (0,0), (0,0)],     // 33
    [(0,0), (1,0), (0,0), (0,0)],     // 34
    [(0,0), (0,0), (1,0), (0,0)],     // 35
    [(0,0), (0,0), (0,0), (1,0)],     // 36
    [(0,0), (1,0), (1,0), (0,0)],     // 37
    [(1,0), (0,0), (0,0), (-1,0)],    // 38
    [(1,0), (0,0), (0,0), (1,0)],     // 39
    [(0,0), (1,0), (-1,0), (0,0)],    // 40
    [(1,0), (0,0), (0,0), (0,1)],     // 41
    [(0,0), (1,0), (0,1), (0,0)],     // 42
    [(0,0), (1,0), (0,-1), (0,0)],    // 43
    [(1,0), (0,0), (0,0), (0,-1)],    // 44
    [(1,0), (1,0), (1,0), (-1,0)],    // 45
    [(1,0), (1,0), (-1,0), (1,0)],    // 46
    [(1,0), (-1,0), (1,0), (1,0)],    // 47
    [(1,0), (-1,0), (-1,0), (-1,0)],  // 48
    [(1,0), (0,1), (1,0), (0,-1)],    // 49
    [(1,0), (0,1), (-1,0), (0,1)],    // 50
    [(1,0), (0,-1), (1,0), (0,1)],    // 51
    [(1,0), (0,-1), (-1,0), (0,-1)],  // 52
    [(1,0), (1,0), (0,1), (0,-1)],    // 53
    [(1,0), (1,0), (0,-1), (0,1)],    // 54
    [(1,0), (-1,0), (0,1), (0,1)],    // 55
    [(1,0), (-1,0), (0,-1), (0,-1)],  // 56
    [(1,0), (0,1), (0,1), (1,0)],     // 57
    [(1,0), (0,1), (0,-1), (-1,0)],   // 58
    [(1,0), (0,-1), (0,1), (-1,0)],   // 59
    [(1,0), (0,-1), (0,-1), (1,0)],   // 60
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtlasError {
    #[error("stabilizer index {index} out of range 1..={ATLAS_LEN}")]
    IndexOutOfRange { index: usize },
    #[error("unknown group label '{label}'")]
    UnknownLabel { label: String },
}

/// One atlas entry: exact raw amplitudes plus the normalized state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerState<R: Real> {
    /// 1-based index matching the published table.
    pub index: usize,
    pub raw: [Complex<R>; 4],
    pub state: TwoQubitState<R>,
    pub entangled: bool,
}

/// Immutable atlas of all sixty states; construct once and share freely.
#[derive(Debug, Clone)]
pub struct StabilizerAtlas<R: Real> {
    states: Vec<StabilizerState<R>>,
}

impl<R: Real> StabilizerAtlas<R> {
    pub fn new() -> Self {
        let states = TABLE
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let raw: [Complex<R>; 4] = std::array::from_fn(|j| {
                    Complex::new(R::of(row[j].0 as f64), R::of(row[j].1 as f64))
                });
                let state = normalize(raw).expect("table rows are nonzero");
                // Stabilizer marginals are either pure or maximally mixed.
                let entangled = linear_entropy(&partial_trace_b(&state)) > R::of(0.25);
                StabilizerState { index: k + 1, raw, state, entangled }
            })
            .collect();
        Self { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn stabilizer(&self, index: usize) -> Result<&StabilizerState<R>, AtlasError> {
        if index == 0 || index > ATLAS_LEN {
            return Err(AtlasError::IndexOutOfRange { index });
        }
        Ok(&self.states[index - 1])
    }

    pub fn states(&self) -> &[StabilizerState<R>] {
        &self.states
    }

    /// The 36 tensor-product states (indices 1-36).
    pub fn tensor_products(&self) -> impl Iterator<Item = &StabilizerState<R>> {
        self.states.iter().filter(|s| !s.entangled)
    }

    /// The 24 maximally entangled states (indices 37-60).
    pub fn entangled(&self) -> impl Iterator<Item = &StabilizerState<R>> {
        self.states.iter().filter(|s| s.entangled)
    }
}

impl<R: Real> Default for StabilizerAtlas<R> {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Process {
    Nn,
    Moller,
}

/// Nucleon-nucleon taxonomy: three groups covering all sixty states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NnGroup {
    G1,
    G2,
    G3,
}

impl NnGroup {
    pub const ALL: [NnGroup; 3] = [NnGroup::G1, NnGroup::G2, NnGroup::G3];
}

/// Møller taxonomy. Tensor-product Group-5 splits by anti-flatness into 5a
/// and 5b; the entangled Group-5 members keep their own label since the
/// split does not apply to them. State 43 appears in no published group and
/// stays `Unassigned` (the `groups moller --audit` command reports its
/// empirically computed group).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MollerGroup {
    G1,
    G2,
    G3,
    G4,
    G5a,
    G5b,
    G5Ent,
    Unassigned,
}

impl MollerGroup {
    pub const ALL: [MollerGroup; 8] = [
        MollerGroup::G1,
        MollerGroup::G2,
        MollerGroup::G3,
        MollerGroup::G4,
        MollerGroup::G5a,
        MollerGroup::G5b,
        MollerGroup::G5Ent,
        MollerGroup::Unassigned,
    ];

    /// The six labels whose members are tensor products.
    pub const TENSOR: [MollerGroup; 6] = [
        MollerGroup::G1,
        MollerGroup::G2,
        MollerGroup::G3,
        MollerGroup::G4,
        MollerGroup::G5a,
        MollerGroup::G5b,
    ];
}

pub fn nn_group_of(index: usize) -> Result<NnGroup, AtlasError> {
    if index == 0 || index > ATLAS_LEN {
        return Err(AtlasError::IndexOutOfRange { index });
    }
    Ok(match index {
        1 | 4 | 17 | 20 | 33 | 36 => NnGroup::G1,
        37..=41 | 44 | 45 | 48 | 57 | 60 => NnGroup::G1,
        2 | 3 | 18 | 19 | 34 | 35 => NnGroup::G2,
        42 | 43 | 46 | 47 | 58 | 59 => NnGroup::G2,
        5..=16 | 21..=32 | 49..=56 => NnGroup::G3,
        _ => unreachable!("all indices 1..=60 are covered"),
    })
}

pub fn moller_group_of(index: usize) -> Result<MollerGroup, AtlasError> {
    if index == 0 || index > ATLAS_LEN {
        return Err(AtlasError::IndexOutOfRange { index });
    }
    Ok(match index {
        33 | 36 | 37..=41 | 44 => MollerGroup::G1,
        1 | 4 | 17 | 20 | 45 | 48 | 57 | 60 => MollerGroup::G2,
        2 | 3 | 18 | 19 | 46 | 47 | 58 | 59 => MollerGroup::G3,
        34 | 35 | 42 => MollerGroup::G4,
        5..=8 | 13..=16 => MollerGroup::G5a,
        9..=12 | 21..=32 => MollerGroup::G5b,
        49..=56 => MollerGroup::G5Ent,
        43 => MollerGroup::Unassigned,
        _ => unreachable!("all indices 1..=60 are covered"),
    })
}

/// Representative tensor-product initial states for the NN groups
/// (atlas indices 33, 34, 25).
pub fn nn_representatives<R: Real>() -> [(NnGroup, TwoQubitState<R>); 3] {
    let atlas = StabilizerAtlas::<R>::new();
    [
        (NnGroup::G1, atlas.stabilizer(33).unwrap().state),
        (NnGroup::G2, atlas.stabilizer(34).unwrap().state),
        (NnGroup::G3, atlas.stabilizer(25).unwrap().state),
    ]
}

/// Representative tensor-product initial states for the Møller groups
/// (atlas indices 33, 1, 2, 34, 5, 9).
pub fn moller_representatives<R: Real>() -> [(MollerGroup, TwoQubitState<R>); 6] {
    let atlas = StabilizerAtlas::<R>::new();
    [
        (MollerGroup::G1, atlas.stabilizer(33).unwrap().state),
        (MollerGroup::G2, atlas.stabilizer(1).unwrap().state),
        (MollerGroup::G3, atlas.stabilizer(2).unwrap().state),
        (MollerGroup::G4, atlas.stabilizer(34).unwrap().state),
        (MollerGroup::G5a, atlas.stabilizer(5).unwrap().state),
        (MollerGroup::G5b, atlas.stabilizer(9).unwrap().state),
    ]
}

impl fmt::Display for NnGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NnGroup::G1 => "G1",
            NnGroup::G2 => "G2",
            NnGroup::G3 => "G3",
        };
        f.write_str(s)
    }
}

impl FromStr for NnGroup {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "G1" => Ok(NnGroup::G1),
            "G2" => Ok(NnGroup::G2),
            "G3" => Ok(NnGroup::G3),
            _ => Err(AtlasError::UnknownLabel { label: s.to_string() }),
        }
    }
}

impl fmt::Display for MollerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MollerGroup::G1 => "G1",
            MollerGroup::G2 => "G2",
            MollerGroup::G3 => "G3",
            MollerGroup::G4 => "G4",
            MollerGroup::G5a => "G5a",
            MollerGroup::G5b => "G5b",
            MollerGroup::G5Ent => "G5ent",
            MollerGroup::Unassigned => "unassigned",
        };
        f.write_str(s)
    }
}

impl FromStr for MollerGroup {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g1" => Ok(MollerGroup::G1),
            "g2" => Ok(MollerGroup::G2),
            "g3" => Ok(MollerGroup::G3),
            "g4" => Ok(MollerGroup::G4),
            "g5a" => Ok(MollerGroup::G5a),
            "g5b" => Ok(MollerGroup::G5b),
            "g5ent" => Ok(MollerGroup::G5Ent),
            "unassigned" => Ok(MollerGroup::Unassigned),
            _ => Err(AtlasError::UnknownLabel { label: s.to_string() }),
        }
    }
}
