//! Property tests for the algebraic invariants of the linear-algebra kernel
//! and the measures.

use num_complex::Complex;
use proptest::prelude::*;
use qmagic_core::measures::{
    anti_flatness, linear_entropy, m_lin, pauli_spectrum, xi_purity,
};
use qmagic_core::nlopt::{local_unitary, LocalFrame};
use qmagic_core::qlin::{
    apply, kron, normalize, partial_trace_b, Operator2, TwoQubitState,
};

type C = Complex<f64>;

fn amp() -> impl Strategy<Value = C> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn op2() -> impl Strategy<Value = Operator2<f64>> {
    [amp(), amp(), amp(), amp()]
        .prop_map(|[a, b, c, d]| Operator2 { entries: [[a, b], [c, d]] })
}

fn state() -> impl Strategy<Value = TwoQubitState<f64>> {
    [amp(), amp(), amp(), amp()]
        .prop_filter_map("norm too small", |v| normalize(v).ok())
}

fn angles() -> impl Strategy<Value = [f64; 6]> {
    [
        0.0..std::f64::consts::TAU,
        0.0..std::f64::consts::PI,
        0.0..std::f64::consts::TAU,
        0.0..std::f64::consts::TAU,
        0.0..std::f64::consts::PI,
        0.0..std::f64::consts::TAU,
    ]
}

fn single_qubit_xi(a: C, b: C) -> f64 {
    // xi with d = 2 from the X, Y, Z, I expectations of (a, b).
    let cx = 2.0 * (a.conj() * b).re;
    let cy = 2.0 * (a.conj() * b).im;
    let cz = a.norm_sqr() - b.norm_sqr();
    (cx.powi(4) + cy.powi(4) + cz.powi(4) + 1.0) / 2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product_property(a in op2(), b in op2(), c in op2(), d in op2()) {
        let lhs = kron(&a, &b).mul(&kron(&c, &d));
        let rhs = kron(&a.mul(&c), &b.mul(&d));
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((lhs.entries[i][j] - rhs.entries[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kron_is_bilinear(a in op2(), b in op2(), c in op2()) {
        let mut sum = a;
        for i in 0..2 {
            for j in 0..2 {
                sum.entries[i][j] = a.entries[i][j] + b.entries[i][j];
            }
        }
        let lhs = kron(&sum, &c);
        let ka = kron(&a, &c);
        let kb = kron(&b, &c);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!(
                    (lhs.entries[i][j] - (ka.entries[i][j] + kb.entries[i][j])).norm() < 1e-12
                );
            }
        }
    }

    #[test]
    fn normalize_is_idempotent(psi in state()) {
        let again = normalize(*psi.amps()).unwrap();
        prop_assert_eq!(*psi.amps(), *again.amps());
    }

    #[test]
    fn reduced_density_matrix_has_unit_trace(psi in state()) {
        let rho = partial_trace_b(&psi);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues()[0] > -1e-12);
    }

    #[test]
    fn spectrum_is_normalized_with_ii_pinned(psi in state()) {
        let spec = pauli_spectrum(&psi).unwrap();
        let sum: f64 = spec.values().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        use qmagic_core::qlin::PauliOp::I;
        prop_assert!((spec.xi(I, I) - 0.25).abs() < 1e-12);
        let xi = xi_purity(&spec);
        prop_assert!(xi > 0.0 && xi <= 1.0 + 1e-12);
    }

    #[test]
    fn f_a_and_e_lin_are_local_basis_invariant(psi in state(), x in angles()) {
        let frame = LocalFrame::from_array(x);
        let rotated = normalize(apply(&frame.operator(), &psi)).unwrap();
        let before = partial_trace_b(&psi);
        let after = partial_trace_b(&rotated);
        prop_assert!((anti_flatness(&before) - anti_flatness(&after)).abs() < 1e-10);
        prop_assert!((linear_entropy(&before) - linear_entropy(&after)).abs() < 1e-10);
    }

    #[test]
    fn m_lin_is_swap_invariant(psi in state()) {
        let spec = pauli_spectrum(&psi).unwrap();
        let swapped = pauli_spectrum(&psi.swapped()).unwrap();
        prop_assert!((m_lin(&spec) - m_lin(&swapped)).abs() < 1e-10);
    }

    #[test]
    fn xi_is_multiplicative_on_product_states(
        a in (amp(), amp()).prop_filter("nonzero", |(a, b)| (a.norm_sqr() + b.norm_sqr()) > 1e-3),
        b in (amp(), amp()).prop_filter("nonzero", |(a, b)| (a.norm_sqr() + b.norm_sqr()) > 1e-3),
    ) {
        let na = (a.0.norm_sqr() + a.1.norm_sqr()).sqrt();
        let nb = (b.0.norm_sqr() + b.1.norm_sqr()).sqrt();
        let (a0, a1) = (a.0 / na, a.1 / na);
        let (b0, b1) = (b.0 / nb, b.1 / nb);
        let psi = normalize([a0 * b0, a0 * b1, a1 * b0, a1 * b1]).unwrap();
        let xi = xi_purity(&pauli_spectrum(&psi).unwrap());
        let expect = single_qubit_xi(a0, a1) * single_qubit_xi(b0, b1);
        prop_assert!((xi - expect).abs() < 1e-10, "xi {} expect {}", xi, expect);
    }

    #[test]
    fn local_unitaries_are_unitary(phi in 0.0..7.0f64, theta in 0.0..7.0f64, lam in 0.0..7.0f64) {
        prop_assert!(local_unitary(phi, theta, lam).unitarity_defect() < 1e-12);
    }
}

#[test]
fn f_a_vanishes_on_products_and_stabilizers() {
    use qmagic_core::stabilizers::StabilizerAtlas;
    let atlas = StabilizerAtlas::<f64>::new();
    for s in atlas.states() {
        assert!(
            anti_flatness(&partial_trace_b(&s.state)).abs() < 1e-13,
            "state {}",
            s.index
        );
    }
}
