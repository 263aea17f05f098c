//! Single-particle tomography: reconstructs the reduced density matrix of
//! qubit A from spin expectation values along three axes and turns it into an
//! anti-flatness estimate, optionally under a finite-shot measurement model.
//!
//! The shot model draws independent per-axis binomial counts with the exact
//! marginal probabilities (three separate experiment batches); unphysical
//! shot-noise Bloch vectors are projected radially back onto the unit sphere
//! so the reconstruction stays positive semidefinite.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::measures::anti_flatness;
use crate::qlin::{partial_trace_b, DensityMatrix2, TwoQubitState};
use crate::scalar::Real;

/// Bootstrap resamples behind the reported standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomoError {
    #[error("Bloch vector norm {norm} exceeds 1 in exact mode")]
    UnphysicalBloch { norm: f64 },
}

/// Measurement budget: exact expectation values or a per-axis shot count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    PerAxis(u64),
}

/// Spin expectation values along the three cartesian axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMeasurement<R: Real> {
    pub sx: R,
    pub sy: R,
    pub sz: R,
    pub shots_per_axis: Shots,
}

/// Reconstruction `rho = (I + s . sigma) / 2`.
///
/// Exact mode rejects vectors outside the unit ball (beyond 1e-12 slack);
/// shot mode projects them radially onto the boundary instead, keeping the
/// output positive semidefinite.
pub fn rho_from_bloch<R: Real>(
    m: &BlochMeasurement<R>,
) -> Result<DensityMatrix2<R>, TomoError> {
    let mut s = [m.sx, m.sy, m.sz];
    let norm_sqr = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
    match m.shots_per_axis {
        Shots::Exact => {
            if norm_sqr > R::one() + R::of(1e-12) {
                return Err(TomoError::UnphysicalBloch {
                    norm: norm_sqr.sqrt().to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Shots::PerAxis(_) => {
            (s, _) = project_to_ball(s);
        }
    }
    Ok(bloch_to_rho(s))
}

/// Radial projection onto the closed unit ball; the flag reports whether the
/// input was outside.
pub fn project_to_ball<R: Real>(s: [R; 3]) -> ([R; 3], bool) {
    let norm_sqr = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
    if norm_sqr <= R::one() {
        return (s, false);
    }
    let inv = norm_sqr.sqrt().recip();
    ([s[0] * inv, s[1] * inv, s[2] * inv], true)
}

fn bloch_to_rho<R: Real>(s: [R; 3]) -> DensityMatrix2<R> {
    let half = R::of(0.5);
    let entries = [
        [
            Complex::new((R::one() + s[2]) * half, R::zero()),
            Complex::new(s[0] * half, -(s[1] * half)),
        ],
        [
            Complex::new(s[0] * half, s[1] * half),
            Complex::new((R::one() - s[2]) * half, R::zero()),
        ],
    ];
    DensityMatrix2::new(entries).expect("ball-projected Bloch vector is physical")
}

/// Anti-flatness estimate together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomoEstimate<R: Real> {
    pub estimate: R,
    /// Bootstrap standard error; zero in exact mode.
    pub std_err: R,
    /// The (possibly projected) Bloch vector used for reconstruction.
    pub bloch: [R; 3],
    /// True when shot noise pushed the raw vector outside the unit ball.
    pub projected: bool,
    pub shots: Shots,
}

/// Estimates the anti-flatness of `psi`'s A-side marginal.
///
/// Shot mode simulates `shots` projective measurements per axis (binomial
/// draws with the exact marginals, independent seeded streams per axis) and
/// reports a bootstrap standard error over [`BOOTSTRAP_RESAMPLES`] parametric
/// resamples. Deterministic for a fixed `(seed, shots)`.
pub fn estimate_antiflatness<R: Real>(
    psi: &TwoQubitState<R>,
    shots: Shots,
    seed: u64,
) -> TomoEstimate<R> {
    let rho = partial_trace_b(psi);
    let truth = rho.bloch_vector();
    match shots {
        Shots::Exact => TomoEstimate {
            estimate: anti_flatness(&rho),
            std_err: R::zero(),
            bloch: truth,
            projected: false,
            shots,
        },
        Shots::PerAxis(n) => {
            let counts: [u64; 3] = std::array::from_fn(|axis| {
                let p = probability_up(truth[axis]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(axis as u64));
                Binomial::new(n, p).expect("probability in [0,1]").sample(&mut rng)
            });
            let (bloch, projected, estimate) = reconstruct::<R>(&counts, n);

            let mut boot_rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
            let mut resamples = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
            for _ in 0..BOOTSTRAP_RESAMPLES {
                let resampled: [u64; 3] = std::array::from_fn(|axis| {
                    let p = counts[axis] as f64 / n as f64;
                    Binomial::new(n, p).expect("empirical rate in [0,1]").sample(&mut boot_rng)
                });
                let (_, _, f) = reconstruct::<R>(&resampled, n);
                resamples.push(f);
            }
            let mean = crate::scalar::pairwise_mean(&resamples);
            let sq: Vec<R> = resamples.iter().map(|&v| (v - mean) * (v - mean)).collect();
            let var = crate::scalar::pairwise_sum(&sq)
                / R::of((BOOTSTRAP_RESAMPLES - 1) as f64);
            TomoEstimate {
                estimate,
                std_err: var.sqrt(),
                bloch,
                projected,
                shots,
            }
        }
    }
}

fn probability_up<R: Real>(expectation: R) -> f64 {
    let p = (1.0 + expectation.to_f64().unwrap_or(0.0)) / 2.0;
    p.clamp(0.0, 1.0)
}

fn reconstruct<R: Real>(counts: &[u64; 3], n: u64) -> ([R; 3], bool, R) {
    let raw: [R; 3] = std::array::from_fn(|axis| {
        R::of(2.0 * counts[axis] as f64 / n as f64 - 1.0)
    });
    let (bloch, projected) = project_to_ball(raw);
    let rho = bloch_to_rho(bloch);
    (bloch, projected, anti_flatness(&rho))
}
