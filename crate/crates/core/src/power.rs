//! Averages of the single-state measures over a set of initial states mapped
//! through a fixed operator — the machinery behind the magic, non-local
//! magic, anti-flatness and entanglement powers of both processes.

use crate::measures::{linear_entropy, m_lin, magic_report, pauli_spectrum};
use crate::nlopt::{nonlocal_magic, OptimizerConfig};
use crate::qlin::{apply, normalize, partial_trace_b, Operator4, QlinError, TwoQubitState};
use crate::scalar::{pairwise_mean, Real};

/// Averaged measures of the final states produced from a set of initial
/// states; `not_converged` counts optimizer runs whose polish did not
/// stabilize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetAverages<R: Real> {
    pub m_lin: R,
    pub m_nl: R,
    pub f_a: R,
    pub e_lin: R,
    pub count: usize,
    pub not_converged: usize,
}

/// Maps every state through `op`, renormalizes, and averages the measures.
/// Errors with [`QlinError::ZeroVector`] if `op` annihilates an input.
pub fn averaged_measures<'a, R, I>(
    op: &Operator4<R>,
    states: I,
    cfg: &OptimizerConfig<R>,
) -> Result<SetAverages<R>, QlinError>
where
    R: Real,
    I: IntoIterator<Item = &'a TwoQubitState<R>>,
{
    let mut m_lins = Vec::new();
    let mut m_nls = Vec::new();
    let mut f_as = Vec::new();
    let mut e_lins = Vec::new();
    let mut not_converged = 0usize;
    for psi in states {
        let out = normalize(apply(op, psi))?;
        let report = magic_report(&out).expect("normalized final state");
        let nl = nonlocal_magic(&out, cfg);
        if !nl.converged {
            not_converged += 1;
        }
        m_lins.push(report.m_lin);
        m_nls.push(nl.m_nl);
        f_as.push(report.f_a);
        e_lins.push(report.e_lin);
    }
    Ok(SetAverages {
        m_lin: pairwise_mean(&m_lins),
        m_nl: pairwise_mean(&m_nls),
        f_a: pairwise_mean(&f_as),
        e_lin: pairwise_mean(&e_lins),
        count: m_lins.len(),
        not_converged,
    })
}

/// Average total linear magic of the images alone: cheaper than
/// [`averaged_measures`] since no minimization runs.
pub fn averaged_m_lin<'a, R, I>(op: &Operator4<R>, states: I) -> Result<R, QlinError>
where
    R: Real,
    I: IntoIterator<Item = &'a TwoQubitState<R>>,
{
    let mut values = Vec::new();
    for psi in states {
        let out = normalize(apply(op, psi))?;
        values.push(m_lin(&pauli_spectrum(&out).expect("normalized final state")));
    }
    Ok(pairwise_mean(&values))
}

/// Average linear entanglement entropy of the images.
pub fn averaged_e_lin<'a, R, I>(op: &Operator4<R>, states: I) -> Result<R, QlinError>
where
    R: Real,
    I: IntoIterator<Item = &'a TwoQubitState<R>>,
{
    let mut values = Vec::new();
    for psi in states {
        let out = normalize(apply(op, psi))?;
        values.push(linear_entropy(&partial_trace_b(&out)));
    }
    Ok(pairwise_mean(&values))
}
