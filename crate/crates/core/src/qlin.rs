//! Exact-size complex linear algebra for one- and two-qubit Hilbert spaces.
//!
//! The two-qubit basis ordering is fixed to {|00>, |01>, |10>, |11>} with
//! |0> = |up>, and every matrix in this crate is transcribed in that ordering.
//! All values are immutable after construction and all operations are pure.

#![allow(clippy::needless_range_loop)] // indexed loops are the natural shape for fixed-size kernels

use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::scalar::Real;

/// Complex amplitude; stored values are always finite.
pub type Amplitude<R> = Complex<R>;

/// Norm threshold below which a vector counts as annihilated.
pub const ZERO_VECTOR_TOL: f64 = 1e-14;

/// Default tolerance for exact linear-algebra checks.
pub const LINALG_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QlinError {
    /// Input vector has norm at or below [`ZERO_VECTOR_TOL`], e.g. because it
    /// sits in the kernel of an amplitude matrix.
    #[error("cannot normalize vector with norm <= {ZERO_VECTOR_TOL:e}")]
    ZeroVector,
    #[error("matrix is not Hermitian (max deviation {dev:e})")]
    NotHermitian { dev: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("negative eigenvalue {lambda:e}")]
    NegativeEigenvalue { lambda: f64 },
}

fn lossy(x: impl ToPrimitive) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// One of the generalized Pauli factors, in the order used for spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliOp {
    X,
    Y,
    Z,
    I,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::X, PauliOp::Y, PauliOp::Z, PauliOp::I];

    pub fn matrix<R: Real>(self) -> Operator2<R> {
        let o = Complex::zero;
        let one = || Complex::new(R::one(), R::zero());
        let neg = || Complex::new(-R::one(), R::zero());
        let i = || Complex::new(R::zero(), R::one());
        let ni = || Complex::new(R::zero(), -R::one());
        let entries = match self {
            PauliOp::X => [[o(), one()], [one(), o()]],
            PauliOp::Y => [[o(), ni()], [i(), o()]],
            PauliOp::Z => [[one(), o()], [o(), neg()]],
            PauliOp::I => [[one(), o()], [o(), one()]],
        };
        Operator2 { entries }
    }
}

/// 2x2 complex operator (single-qubit gates, Pauli factors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2<R: Real> {
    pub entries: [[Complex<R>; 2]; 2],
}

impl<R: Real> Operator2<R> {
    pub fn identity() -> Self {
        let mut entries = [[Complex::zero(); 2]; 2];
        entries[0][0] = Complex::one();
        entries[1][1] = Complex::one();
        Self { entries }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[Complex::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex::zero();
                for k in 0..2 {
                    s = s + self.entries[i][k] * rhs.entries[k][j];
                }
                out[i][j] = s;
            }
        }
        Self { entries: out }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[Complex::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.entries[j][i].conj();
            }
        }
        Self { entries: out }
    }

    /// Max entrywise deviation of `U† U` from the identity.
    pub fn unitarity_defect(&self) -> R {
        let p = self.adjoint().mul(self);
        let mut dev = R::zero();
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { Complex::one() } else { Complex::zero() };
                dev = dev.max((p.entries[i][j] - target).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: R) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// 4x4 complex operator in the fixed two-qubit basis (S-matrices, scattering
/// amplitudes, Clifford elements).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator4<R: Real> {
    pub entries: [[Complex<R>; 4]; 4],
}

impl<R: Real> Operator4<R> {
    pub fn identity() -> Self {
        let mut entries = [[Complex::zero(); 4]; 4];
        for (k, row) in entries.iter_mut().enumerate() {
            row[k] = Complex::one();
        }
        Self { entries }
    }

    pub fn from_rows(rows: [[Complex<R>; 4]; 4]) -> Self {
        Self { entries: rows }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[Complex::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = Complex::zero();
                for k in 0..4 {
                    s = s + self.entries[i][k] * rhs.entries[k][j];
                }
                out[i][j] = s;
            }
        }
        Self { entries: out }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[Complex::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.entries[j][i].conj();
            }
        }
        Self { entries: out }
    }

    /// Max entrywise deviation of `U† U` from the identity.
    pub fn unitarity_defect(&self) -> R {
        let p = self.adjoint().mul(self);
        let mut dev = R::zero();
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { Complex::one() } else { Complex::zero() };
                dev = dev.max((p.entries[i][j] - target).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: R) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// Tensor product consistent with the {|00>, |01>, |10>, |11>} ordering:
/// `kron(a, b)` acts with `a` on the first qubit and `b` on the second.
pub fn kron<R: Real>(a: &Operator2<R>, b: &Operator2<R>) -> Operator4<R> {
    let mut out = [[Complex::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a.entries[i][j] * b.entries[k][l];
                }
            }
        }
    }
    Operator4 { entries: out }
}

/// Normalized two-qubit pure state.
///
/// Invariants: unit norm, finite amplitudes, and the global-phase convention
/// that the first nonzero amplitude is real and non-negative. Construct via
/// [`normalize`], [`TwoQubitState::basis`] or [`haar_random_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState<R: Real> {
    amps: [Complex<R>; 4],
}

impl<R: Real> TwoQubitState<R> {
    /// Computational basis state `|k>` with k indexing the fixed ordering.
    pub fn basis(k: usize) -> Self {
        assert!(k < 4, "basis index out of range");
        let mut amps = [Complex::zero(); 4];
        amps[k] = Complex::one();
        Self { amps }
    }

    pub fn amps(&self) -> &[Complex<R>; 4] {
        &self.amps
    }

    pub fn amp(&self, k: usize) -> Complex<R> {
        self.amps[k]
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<R> {
        let mut s = Complex::zero();
        for k in 0..4 {
            s = s + self.amps[k].conj() * other.amps[k];
        }
        s
    }

    /// Exchanges the two qubits: amplitude (a, b) -> (b, a).
    pub fn swapped(&self) -> Self {
        let a = self.amps;
        Self { amps: [a[0], a[2], a[1], a[3]] }
    }

    /// Max amplitude distance to `other`, ignoring no phase: states carry the
    /// normalization convention, so equal states compare entrywise.
    pub fn distance(&self, other: &Self) -> R {
        let mut d = R::zero();
        for k in 0..4 {
            d = d.max((self.amps[k] - other.amps[k]).norm());
        }
        d
    }

}

/// Normalizes a 4-vector into a [`TwoQubitState`].
///
/// The global phase is fixed by making the first nonzero amplitude real and
/// non-negative; inputs already in canonical form pass through bit-for-bit,
/// which makes this function exactly idempotent.
pub fn normalize<R: Real>(v: [Complex<R>; 4]) -> Result<TwoQubitState<R>, QlinError> {
    let norm_sqr = v.iter().map(|a| a.norm_sqr()).fold(R::zero(), |s, x| s + x);
    let norm = norm_sqr.sqrt();
    if norm <= R::of(ZERO_VECTOR_TOL) {
        return Err(QlinError::ZeroVector);
    }
    let mut amps = v;
    // Unit-norm inputs (within round-off of a previous normalization) are not
    // rescaled again.
    if (norm_sqr - R::one()).abs() > R::epsilon() * R::of(32.0) {
        for a in &mut amps {
            *a = Complex::new(a.re / norm, a.im / norm);
        }
    }
    if let Some(k) = amps.iter().position(|a| !a.is_zero()) {
        let lead = amps[k];
        if !(lead.im.is_zero() && lead.re >= R::zero()) {
            let mag = lead.norm();
            let phase = lead.conj() / mag;
            for a in &mut amps {
                *a = *a * phase;
            }
            // Exact by construction; the multiplication above only almost is.
            amps[k] = Complex::new(mag, R::zero());
        }
    }
    Ok(TwoQubitState { amps })
}

/// Matrix-vector product `op |psi>`; the caller normalizes when needed.
pub fn apply<R: Real>(op: &Operator4<R>, psi: &TwoQubitState<R>) -> [Complex<R>; 4] {
    apply_raw(op, psi.amps())
}

pub(crate) fn apply_raw<R: Real>(op: &Operator4<R>, v: &[Complex<R>; 4]) -> [Complex<R>; 4] {
    let mut out = [Complex::zero(); 4];
    for (i, row) in op.entries.iter().enumerate() {
        let mut s = Complex::zero();
        for k in 0..4 {
            s = s + row[k] * v[k];
        }
        out[i] = s;
    }
    out
}

/// Hermitian, unit-trace, positive-semidefinite 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2<R: Real> {
    entries: [[Complex<R>; 2]; 2],
}

impl<R: Real> DensityMatrix2<R> {
    /// Validates Hermiticity, unit trace and positivity at [`LINALG_TOL`].
    pub fn new(entries: [[Complex<R>; 2]; 2]) -> Result<Self, QlinError> {
        Self::with_tol(entries, R::of(LINALG_TOL))
    }

    pub fn with_tol(entries: [[Complex<R>; 2]; 2], tol: R) -> Result<Self, QlinError> {
        let herm_dev = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if herm_dev > tol {
            return Err(QlinError::NotHermitian { dev: lossy(herm_dev) });
        }
        let trace = entries[0][0].re + entries[1][1].re;
        if (trace - R::one()).abs() > tol {
            return Err(QlinError::TraceNotOne { trace: lossy(trace) });
        }
        let m = Self { entries };
        let lambda_min = m.eigenvalues()[0];
        if lambda_min < -tol {
            return Err(QlinError::NegativeEigenvalue { lambda: lossy(lambda_min) });
        }
        Ok(m)
    }

    pub fn entries(&self) -> &[[Complex<R>; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<R> {
        self.entries[i][j]
    }

    pub fn trace(&self) -> R {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> R {
        let m = &self.entries;
        let sq00 = m[0][0] * m[0][0] + m[0][1] * m[1][0];
        let sq11 = m[1][0] * m[0][1] + m[1][1] * m[1][1];
        (sq00 + sq11).re
    }

    /// `Tr(rho^3)`.
    pub fn trace_cubed(&self) -> R {
        let m = &self.entries;
        let mut sq = [[Complex::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                sq[i][j] = m[i][0] * m[0][j] + m[i][1] * m[1][j];
            }
        }
        let cu00 = sq[0][0] * m[0][0] + sq[0][1] * m[1][0];
        let cu11 = sq[1][0] * m[0][1] + sq[1][1] * m[1][1];
        (cu00 + cu11).re
    }

    /// Eigenvalues in ascending order, from the closed 2x2 form.
    pub fn eigenvalues(&self) -> [R; 2] {
        let tr = self.trace();
        let det = (self.entries[0][0] * self.entries[1][1]
            - self.entries[0][1] * self.entries[1][0])
            .re;
        let disc = (tr * tr - R::of(4.0) * det).max(R::zero());
        let root = disc.sqrt();
        let half = R::of(0.5);
        [(tr - root) * half, (tr + root) * half]
    }

    /// Spin expectation values `(<X>, <Y>, <Z>)`.
    pub fn bloch_vector(&self) -> [R; 3] {
        let two = R::of(2.0);
        [
            two * self.entries[0][1].re,
            -two * self.entries[0][1].im,
            self.entries[0][0].re - self.entries[1][1].re,
        ]
    }
}

/// Reduced density matrix of qubit A, `Tr_B |psi><psi|`.
pub fn partial_trace_b<R: Real>(psi: &TwoQubitState<R>) -> DensityMatrix2<R> {
    partial_trace_b_raw(psi.amps())
}

pub(crate) fn partial_trace_b_raw<R: Real>(a: &[Complex<R>; 4]) -> DensityMatrix2<R> {
    let mut m = [[Complex::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex::zero();
            for b in 0..2 {
                s = s + a[2 * i + b] * a[2 * j + b].conj();
            }
            m[i][j] = s;
        }
    }
    DensityMatrix2 { entries: m }
}

/// Haar-random two-qubit pure state from 8 Gaussian draws.
pub fn haar_random_state<R: Real>(rng: &mut impl Rng) -> TwoQubitState<R> {
    loop {
        let mut v = [Complex::zero(); 4];
        for a in &mut v {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *a = Complex::new(R::of(re), R::of(im));
        }
        if let Ok(psi) = normalize(v) {
            return psi;
        }
    }
}
