//! Numerics for quantum complexity in two-particle scattering: stabilizer
//! Rényi entropies, linear magic, non-local magic, anti-flatness of the
//! entanglement spectrum, the two-qubit stabilizer atlas and Clifford group,
//! and the S-wave nucleon-nucleon / high-energy Møller process maps built on
//! top of them.
//!
//! Everything is generic over the real scalar through [`scalar::Real`]
//! (`f32` or `f64`); the aliases below pin the `f64` instantiation that the
//! command-line tools and the closed-form tolerances use.

pub mod clifford;
pub mod measures;
pub mod moller;
pub mod nlopt;
pub mod nn;
pub mod power;
pub mod qlin;
pub mod scalar;
pub mod stabilizers;
pub mod tomo;

pub use scalar::Real;

/// `f64` instantiations of the core types.
pub type C64 = num_complex::Complex<f64>;
pub type TwoQubitState64 = qlin::TwoQubitState<f64>;
pub type Operator2F64 = qlin::Operator2<f64>;
pub type Operator4F64 = qlin::Operator4<f64>;
pub type DensityMatrix2F64 = qlin::DensityMatrix2<f64>;
pub type PauliSpectrum64 = measures::PauliSpectrum<f64>;
pub type MagicReport64 = measures::MagicReport<f64>;
pub type LocalFrame64 = nlopt::LocalFrame<f64>;
pub type OptimizerConfig64 = nlopt::OptimizerConfig<f64>;
pub type NlResult64 = nlopt::NlResult<f64>;
pub type StabilizerAtlas64 = stabilizers::StabilizerAtlas<f64>;
pub type CliffordGroup64 = clifford::CliffordGroup<f64>;
pub type CliffordAverage64 = clifford::CliffordAverage<f64>;
pub type PowerReport64 = nn::PowerReport<f64>;
pub type SetAverages64 = power::SetAverages<f64>;
pub type PhaseShiftRecord64 = nn::PhaseShiftRecord<f64>;
pub type ScatteringAngle64 = moller::ScatteringAngle<f64>;
pub type Kinematics64 = moller::Kinematics<f64>;
pub type TomoEstimate64 = tomo::TomoEstimate<f64>;
