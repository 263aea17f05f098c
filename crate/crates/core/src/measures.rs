//! Magic and entanglement measures for a two-qubit state: the Pauli spectrum,
//! the stabilizer Rényi entropy family, linear magic, anti-flatness of the
//! entanglement spectrum, and linear entanglement entropy.

#![allow(clippy::needless_range_loop)] // indexed loops are the natural shape for fixed-size kernels

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::qlin::{apply, kron, DensityMatrix2, PauliOp, TwoQubitState};
use crate::scalar::Real;

/// Two-qubit Hilbert-space dimension d.
pub const HILBERT_DIM: usize = 4;

/// Allowed imaginary part of a Pauli expectation value before the state is
/// considered corrupted.
pub const HERMITIAN_IM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    /// `<psi|P|psi>` came out non-real, which signals an unnormalized or
    /// corrupted state.
    #[error("Pauli expectation has imaginary part {imag:e}")]
    NonHermitianExpectation { imag: f64 },
    /// The Rényi form is undefined at alpha = 1.
    #[error("alpha = 1 is outside the supported SRE family")]
    AlphaOne,
    #[error("alpha must be non-negative, got {alpha}")]
    NegativeAlpha { alpha: f64 },
}

/// The 16 values `Xi_P = <P>^2 / d` over generalized Paulis `P = s_i (x) s_j`
/// with `s in {X, Y, Z, I}`, indexed as `4*i + j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliSpectrum<R: Real> {
    xi: [R; 16],
}

impl<R: Real> PauliSpectrum<R> {
    pub fn values(&self) -> &[R; 16] {
        &self.xi
    }

    pub fn xi(&self, a: PauliOp, b: PauliOp) -> R {
        self.xi[4 * pauli_index(a) + pauli_index(b)]
    }

    pub fn dim(&self) -> usize {
        HILBERT_DIM
    }
}

fn pauli_index(p: PauliOp) -> usize {
    match p {
        PauliOp::X => 0,
        PauliOp::Y => 1,
        PauliOp::Z => 2,
        PauliOp::I => 3,
    }
}

/// Real expectation values `c_ij = <psi| s_i (x) s_j |psi>` in the X, Y, Z, I
/// ordering. Errors if any expectation has an imaginary part at or above
/// [`HERMITIAN_IM_TOL`].
pub fn pauli_expectations<R: Real>(
    psi: &TwoQubitState<R>,
) -> Result<[[R; 4]; 4], MeasureError> {
    let mut c = [[R::zero(); 4]; 4];
    for (ia, pa) in PauliOp::ALL.iter().enumerate() {
        let ma = pa.matrix::<R>();
        for (ib, pb) in PauliOp::ALL.iter().enumerate() {
            let op = kron(&ma, &pb.matrix());
            let image = apply(&op, psi);
            let mut e = Complex::<R>::zero();
            for k in 0..4 {
                e = e + psi.amp(k).conj() * image[k];
            }
            if e.im.abs() >= R::of(HERMITIAN_IM_TOL) {
                return Err(MeasureError::NonHermitianExpectation {
                    imag: e.im.to_f64().unwrap_or(f64::NAN),
                });
            }
            c[ia][ib] = e.re;
        }
    }
    Ok(c)
}

/// The full Pauli spectrum of `psi`.
pub fn pauli_spectrum<R: Real>(psi: &TwoQubitState<R>) -> Result<PauliSpectrum<R>, MeasureError> {
    let c = pauli_expectations(psi)?;
    let d = R::of(HILBERT_DIM as f64);
    let mut xi = [R::zero(); 16];
    for i in 0..4 {
        for j in 0..4 {
            xi[4 * i + j] = c[i][j] * c[i][j] / d;
        }
    }
    Ok(PauliSpectrum { xi })
}

/// Stabilizer Rényi entropy `M_alpha` for `alpha >= 0`, `alpha != 1`.
///
/// Zero entries of the spectrum are excluded from the power sum so that
/// `alpha = 0` counts the support.
pub fn m_alpha<R: Real>(spec: &PauliSpectrum<R>, alpha: R) -> Result<R, MeasureError> {
    if alpha < R::zero() {
        return Err(MeasureError::NegativeAlpha {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    if (alpha - R::one()).abs() < R::of(1e-9) {
        return Err(MeasureError::AlphaOne);
    }
    let sum = spec
        .values()
        .iter()
        .filter(|x| **x > R::zero())
        .fold(R::zero(), |s, &x| s + x.powf(alpha));
    Ok(sum.log2() / (R::one() - alpha) - R::of(2.0))
}

/// `xi = d * sum(Xi_P^2)`: 1 exactly on stabilizer states, below 1 otherwise.
pub fn xi_purity<R: Real>(spec: &PauliSpectrum<R>) -> R {
    let d = R::of(HILBERT_DIM as f64);
    let sum = spec.values().iter().fold(R::zero(), |s, &x| s + x * x);
    d * sum
}

/// Linear magic `M_lin = 1 - xi`; round-off below zero is clamped.
pub fn m_lin<R: Real>(spec: &PauliSpectrum<R>) -> R {
    clamp_roundoff(R::one() - xi_purity(spec))
}

/// Anti-flatness `F_A = Tr(rho^3) - (Tr rho^2)^2` from closed-form traces.
///
/// Vanishes for flat entanglement spectra (pure or maximally mixed `rho`);
/// round-off down to -1e-12 is clamped to zero.
pub fn anti_flatness<R: Real>(rho: &DensityMatrix2<R>) -> R {
    let p2 = rho.purity();
    clamp_roundoff(rho.trace_cubed() - p2 * p2)
}

/// Linear entanglement entropy `E_lin = 1 - Tr(rho^2)`, in [0, 1/2] for a
/// qubit marginal.
pub fn linear_entropy<R: Real>(rho: &DensityMatrix2<R>) -> R {
    let e = clamp_roundoff(R::one() - rho.purity());
    let max = R::of(0.5);
    if e > max && e <= max + R::of(crate::qlin::LINALG_TOL) {
        max
    } else {
        e
    }
}

fn clamp_roundoff<R: Real>(x: R) -> R {
    if x < R::zero() && x >= -R::of(crate::qlin::LINALG_TOL) {
        R::zero()
    } else {
        x
    }
}

/// Bundle of the single-state measures (the non-local magic lives in
/// [`crate::nlopt`] since it needs the optimizer).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagicReport<R: Real> {
    pub m_lin: R,
    pub m2: R,
    pub xi_purity: R,
    pub f_a: R,
    pub e_lin: R,
}

pub fn magic_report<R: Real>(psi: &TwoQubitState<R>) -> Result<MagicReport<R>, MeasureError> {
    let spec = pauli_spectrum(psi)?;
    let m = m_lin(&spec);
    let xi = xi_purity(&spec);
    let rho = crate::qlin::partial_trace_b(psi);
    Ok(MagicReport {
        m_lin: m,
        m2: -(R::one() - m).log2(),
        xi_purity: xi,
        f_a: anti_flatness(&rho),
        e_lin: linear_entropy(&rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::{normalize, partial_trace_b, DensityMatrix2};
    use num_complex::Complex;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn t_state_amp() -> (C, C) {
        // |T> = (|0> + e^{i pi/4} |1>) / sqrt(2)
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let phase = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        (c(r, 0.0), phase * r)
    }

    fn t_tensor_zero() -> TwoQubitState<f64> {
        // |T> on qubit A, |0> on qubit B.
        let (a, b) = t_state_amp();
        normalize([a, c(0.0, 0.0), b, c(0.0, 0.0)]).unwrap()
    }

    fn t_tensor_t() -> TwoQubitState<f64> {
        let (a, b) = t_state_amp();
        normalize([a * a, a * b, b * a, b * b]).unwrap()
    }

    fn diag_rho(lambda: f64) -> DensityMatrix2<f64> {
        DensityMatrix2::new([
            [c(lambda, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0 - lambda, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn spectrum_of_00_sits_on_the_z_strings() {
        let spec = pauli_spectrum(&TwoQubitState::<f64>::basis(0)).unwrap();
        use PauliOp::*;
        for a in PauliOp::ALL {
            for b in PauliOp::ALL {
                let expect = match (a, b) {
                    (I, I) | (I, Z) | (Z, I) | (Z, Z) => 0.25,
                    _ => 0.0,
                };
                assert!((spec.xi(a, b) - expect).abs() < 1e-14, "({a:?},{b:?})");
            }
        }
    }

    #[test]
    fn spectrum_of_bell_state_sits_on_its_stabilizers() {
        let bell = normalize([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let spec = pauli_spectrum(&bell).unwrap();
        use PauliOp::*;
        for a in PauliOp::ALL {
            for b in PauliOp::ALL {
                let expect = match (a, b) {
                    (I, I) | (X, X) | (Y, Y) | (Z, Z) => 0.25,
                    _ => 0.0,
                };
                assert!((spec.xi(a, b) - expect).abs() < 1e-14, "({a:?},{b:?})");
            }
        }
    }

    #[test]
    fn spectrum_of_t_tensor_zero_matches_product_oracle() {
        // Oracle: single-qubit expectations multiply on product states.
        // |T>: <X> = <Y> = 1/sqrt(2), <Z> = 0;  |0>: <Z> = 1.
        let spec = pauli_spectrum(&t_tensor_zero()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ca = [r, r, 0.0, 1.0];
        let cb = [0.0, 0.0, 1.0, 1.0];
        for (ia, a) in PauliOp::ALL.iter().enumerate() {
            for (ib, b) in PauliOp::ALL.iter().enumerate() {
                let expect = (ca[ia] * cb[ib]).powi(2) / 4.0;
                assert!((spec.xi(*a, *b) - expect).abs() < 1e-12, "({a:?},{b:?})");
            }
        }
        use PauliOp::*;
        assert!((spec.xi(I, I) - 0.25).abs() < 1e-12);
        assert!((spec.xi(X, I) - 0.125).abs() < 1e-12);
        assert!((spec.xi(Y, Z) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn spectrum_sums_to_one_and_ii_is_quarter() {
        for psi in [t_tensor_zero(), t_tensor_t()] {
            let spec = pauli_spectrum(&psi).unwrap();
            let sum: f64 = spec.values().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!((spec.xi(PauliOp::I, PauliOp::I) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn m_alpha_vanishes_on_stabilizer_states() {
        let spec = pauli_spectrum(&TwoQubitState::<f64>::basis(0)).unwrap();
        assert!(m_alpha(&spec, 2.0).unwrap().abs() < 1e-10);
        assert!(m_alpha(&spec, 0.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn m_alpha_of_t_states() {
        let spec = pauli_spectrum(&t_tensor_zero()).unwrap();
        let expect = -(0.75f64).log2();
        assert!((m_alpha(&spec, 2.0).unwrap() - expect).abs() < 1e-12);

        let spec = pauli_spectrum(&t_tensor_t()).unwrap();
        let expect = -(9.0f64 / 16.0).log2();
        assert!((m_alpha(&spec, 2.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn m_alpha_rejects_bad_alpha() {
        let spec = pauli_spectrum(&t_tensor_zero()).unwrap();
        assert_eq!(m_alpha(&spec, 1.0 + 1e-10), Err(MeasureError::AlphaOne));
        assert!(matches!(
            m_alpha(&spec, -0.5),
            Err(MeasureError::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn m_lin_values() {
        let spec = pauli_spectrum(&TwoQubitState::<f64>::basis(0)).unwrap();
        assert!(m_lin(&spec).abs() < 1e-14);

        let spec = pauli_spectrum(&t_tensor_zero()).unwrap();
        assert!((m_lin(&spec) - 0.25).abs() < 1e-12);
        assert!((xi_purity(&spec) - 0.75).abs() < 1e-12);

        let spec = pauli_spectrum(&t_tensor_t()).unwrap();
        assert!((m_lin(&spec) - 7.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn anti_flatness_of_flat_spectra_is_zero() {
        assert_eq!(anti_flatness(&diag_rho(1.0)), 0.0);
        assert_eq!(anti_flatness(&diag_rho(0.5)), 0.0);
    }

    #[test]
    fn anti_flatness_matches_eigenvalue_oracle() {
        // lambda^3 + (1-lambda)^3 - (lambda^2 + (1-lambda)^2)^2 at 3/4.
        let l: f64 = 0.75;
        let oracle = l.powi(3) + (1.0 - l).powi(3) - (l * l + (1.0 - l).powi(2)).powi(2);
        assert!((oracle - 3.0 / 64.0).abs() < 1e-15);
        assert!((anti_flatness(&diag_rho(l)) - 3.0 / 64.0).abs() < 1e-14);
    }

    #[test]
    fn linear_entropy_values() {
        assert_eq!(linear_entropy(&diag_rho(1.0)), 0.0);
        assert!((linear_entropy(&diag_rho(0.5)) - 0.5).abs() < 1e-15);
        assert!((linear_entropy(&diag_rho(0.75)) - 0.375).abs() < 1e-14);
    }

    #[test]
    fn report_is_internally_consistent() {
        let rep = magic_report(&t_tensor_t()).unwrap();
        assert!((rep.m2 + (1.0 - rep.m_lin).log2()).abs() < 1e-10);
        assert!((rep.xi_purity - (1.0 - rep.m_lin)).abs() < 1e-12);
        assert_eq!(rep.f_a, 0.0);
        assert_eq!(rep.e_lin, 0.0);
    }

    #[test]
    fn f_a_vanishes_for_product_and_stabilizer_states() {
        let bell = normalize([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(anti_flatness(&partial_trace_b(&bell)).abs() < 1e-14);
        assert!(anti_flatness(&partial_trace_b(&t_tensor_t())).abs() < 1e-14);
    }
}
