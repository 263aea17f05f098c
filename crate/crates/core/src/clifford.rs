//! Two-qubit Clifford group: breadth-first enumeration from the generator set
//! {H1, H2, S1, S2, CNOT12}, seeded uniform sampling, and Clifford-averaged
//! anti-flatness with the proportionality constant of the averaging identity.
//!
//! Elements are deduplicated by their conjugation action on the Pauli
//! generators (a tableau of images of XI, ZI, IX, IZ with signs), which
//! quotients the global phase exactly; the expected cardinality is 11520.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::measures::anti_flatness;
use crate::qlin::{apply, kron, partial_trace_b_raw, Operator2, Operator4, PauliOp, TwoQubitState};
use crate::scalar::{pairwise_sum, Real};

/// Order of the two-qubit Clifford group modulo global phase.
pub const GROUP_ORDER: usize = 11_520;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("invalid dimensions d={d}, d_A={d_a}: need d, d_A >= 2 and d_A | d")]
    InvalidDims { d: u32, d_a: u32 },
}

/// Generators, applied to the first qubit (1), the second (2), or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGen {
    H1,
    H2,
    S1,
    S2,
    Cnot12,
}

impl CliffordGen {
    pub const ALL: [CliffordGen; 5] = [
        CliffordGen::H1,
        CliffordGen::H2,
        CliffordGen::S1,
        CliffordGen::S2,
        CliffordGen::Cnot12,
    ];

    pub fn matrix<R: Real>(self) -> Operator4<R> {
        let h = hadamard::<R>();
        let s = phase_gate::<R>();
        let id = Operator2::identity();
        match self {
            CliffordGen::H1 => kron(&h, &id),
            CliffordGen::H2 => kron(&id, &h),
            CliffordGen::S1 => kron(&s, &id),
            CliffordGen::S2 => kron(&id, &s),
            CliffordGen::Cnot12 => cnot12(),
        }
    }
}

impl fmt::Display for CliffordGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CliffordGen::H1 => "H1",
            CliffordGen::H2 => "H2",
            CliffordGen::S1 => "S1",
            CliffordGen::S2 => "S2",
            CliffordGen::Cnot12 => "CNOT12",
        };
        f.write_str(s)
    }
}

fn hadamard<R: Real>() -> Operator2<R> {
    let r = Complex::new(R::of(std::f64::consts::FRAC_1_SQRT_2), R::zero());
    Operator2 { entries: [[r, r], [r, -r]] }
}

fn phase_gate<R: Real>() -> Operator2<R> {
    let one = Complex::new(R::one(), R::zero());
    let i = Complex::new(R::zero(), R::one());
    let o = Complex::zero();
    Operator2 { entries: [[one, o], [o, i]] }
}

/// Control on qubit A, target on qubit B: |a b> -> |a, b xor a>.
fn cnot12<R: Real>() -> Operator4<R> {
    let one = Complex::new(R::one(), R::zero());
    let o = Complex::<R>::zero();
    Operator4::from_rows([
        [one, o, o, o],
        [o, one, o, o],
        [o, o, o, one],
        [o, o, one, o],
    ])
}

/// One group element with the generator word that produced it (applied
/// left-to-right as a circuit).
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement<R: Real> {
    pub op: Operator4<R>,
    pub word: Vec<CliffordGen>,
}

/// Tableau key: for each of XI, ZI, IX, IZ the index of the image Pauli
/// string (0..16) and its sign, packed into 5 bits per image.
pub type TableauKey = u32;

/// The full enumerated group.
#[derive(Debug, Clone)]
pub struct CliffordGroup<R: Real> {
    elements: Vec<CliffordElement<R>>,
    by_key: HashMap<TableauKey, usize>,
}

impl<R: Real> CliffordGroup<R> {
    /// Breadth-first closure of the generators, deduplicated by tableau.
    pub fn enumerate() -> Self {
        let gens: Vec<(CliffordGen, Operator4<R>)> = CliffordGen::ALL
            .iter()
            .map(|&g| (g, g.matrix()))
            .collect();
        let paulis = pauli_strings::<R>();
        let probes = probe_paulis::<R>();

        let mut elements = Vec::with_capacity(GROUP_ORDER);
        let mut by_key: HashMap<TableauKey, usize> = HashMap::with_capacity(GROUP_ORDER * 2);
        let identity = CliffordElement { op: Operator4::identity(), word: Vec::new() };
        let key = tableau_key_with(&identity.op, &paulis, &probes).expect("identity is Clifford");
        by_key.insert(key, 0);
        elements.push(identity);

        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        while let Some(at) = queue.pop_front() {
            for (gen, gmat) in &gens {
                let op = gmat.mul(&elements[at].op);
                let key = tableau_key_with(&op, &paulis, &probes)
                    .expect("products of Cliffords stay Clifford");
                if let std::collections::hash_map::Entry::Vacant(e) = by_key.entry(key) {
                    let mut word = elements[at].word.clone();
                    word.push(*gen);
                    e.insert(elements.len());
                    queue.push_back(elements.len());
                    elements.push(CliffordElement { op, word });
                }
            }
        }
        Self { elements, by_key }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CliffordElement<R>] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &CliffordElement<R> {
        &self.elements[k]
    }

    /// Uniform draw over the enumerated group; deterministic per RNG state.
    pub fn sample<'a>(&'a self, rng: &mut impl Rng) -> &'a CliffordElement<R> {
        &self.elements[rng.random_range(0..self.elements.len())]
    }

    /// Membership modulo global phase.
    pub fn contains_op(&self, op: &Operator4<R>) -> bool {
        tableau_key(op).is_some_and(|k| self.by_key.contains_key(&k))
    }
}

static SHARED_F64: OnceLock<CliffordGroup<f64>> = OnceLock::new();

impl CliffordGroup<f64> {
    /// Lazily enumerated process-wide instance.
    pub fn shared() -> &'static CliffordGroup<f64> {
        SHARED_F64.get_or_init(CliffordGroup::enumerate)
    }
}

/// All 16 Hermitian Pauli strings in the spectrum ordering (4*i + j).
fn pauli_strings<R: Real>() -> Vec<Operator4<R>> {
    let mut out = Vec::with_capacity(16);
    for a in PauliOp::ALL {
        for b in PauliOp::ALL {
            out.push(kron(&a.matrix(), &b.matrix()));
        }
    }
    out
}

/// The conjugation probes XI, ZI, IX, IZ.
fn probe_paulis<R: Real>() -> [Operator4<R>; 4] {
    let x = PauliOp::X.matrix::<R>();
    let z = PauliOp::Z.matrix::<R>();
    let id = Operator2::identity();
    [kron(&x, &id), kron(&z, &id), kron(&id, &x), kron(&id, &z)]
}

/// Computes the tableau key of `op`, or `None` if conjugation does not map
/// the probes onto signed Pauli strings (i.e. `op` is not Clifford).
pub fn tableau_key<R: Real>(op: &Operator4<R>) -> Option<TableauKey> {
    tableau_key_with(op, &pauli_strings::<R>(), &probe_paulis::<R>())
}

fn tableau_key_with<R: Real>(
    op: &Operator4<R>,
    paulis: &[Operator4<R>],
    probes: &[Operator4<R>; 4],
) -> Option<TableauKey> {
    let adj = op.adjoint();
    let mut key: u32 = 0;
    for (slot, probe) in probes.iter().enumerate() {
        let image = op.mul(probe).mul(&adj);
        let (idx, negative) = identify_signed_pauli(&image, paulis)?;
        let code = idx as u32 | ((negative as u32) << 4);
        key |= code << (5 * slot as u32);
    }
    Some(key)
}

/// Decomposes a Hermitian image as +-1 times one of the 16 Pauli strings.
fn identify_signed_pauli<R: Real>(
    image: &Operator4<R>,
    paulis: &[Operator4<R>],
) -> Option<(usize, bool)> {
    let quarter = R::of(0.25);
    let threshold = R::of(0.5);
    for (idx, p) in paulis.iter().enumerate() {
        // tr(P * image) / 4: overlaps are exactly +-1 or 0 for Cliffords.
        let mut tr = Complex::<R>::zero();
        for i in 0..4 {
            for k in 0..4 {
                tr = tr + p.entries[i][k] * image.entries[k][i];
            }
        }
        let coeff = tr.re * quarter;
        if coeff.abs() > threshold {
            return Some((idx, coeff < R::zero()));
        }
    }
    None
}

/// Proportionality constant between Clifford-averaged anti-flatness and the
/// total linear magic: `(d^2 - d_A^2)(d_A^2 - 1) / ((d^2 - 1)(d + 2) d_A^2)`.
pub fn c_factor<R: Real>(d: u32, d_a: u32) -> Result<R, CliffordError> {
    if d < 2 || d_a < 2 || !d.is_multiple_of(d_a) {
        return Err(CliffordError::InvalidDims { d, d_a });
    }
    let df = R::of(d as f64);
    let da = R::of(d_a as f64);
    let d2 = df * df;
    let da2 = da * da;
    Ok((d2 - da2) * (da2 - R::one()) / ((d2 - R::one()) * (df + R::of(2.0)) * da2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageMode {
    Exhaustive,
    Sampled,
}

impl fmt::Display for AverageMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AverageMode::Exhaustive => "exhaustive",
            AverageMode::Sampled => "sampled",
        })
    }
}

/// Average of the anti-flatness over Clifford images of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliffordAverage<R: Real> {
    pub mean_f: R,
    /// Standard error of the mean; exactly zero in exhaustive mode.
    pub std_err: R,
    /// Ensemble standard deviation.
    pub std_dev: R,
    pub samples: usize,
    pub mode: AverageMode,
}

/// Mean anti-flatness of `Gamma |psi>` over the whole group (exhaustive) or
/// over `samples` uniform seeded draws.
pub fn clifford_averaged_antiflatness<R: Real>(
    group: &CliffordGroup<R>,
    psi: &TwoQubitState<R>,
    mode: AverageMode,
    samples: usize,
    seed: u64,
) -> CliffordAverage<R> {
    let values: Vec<R> = match mode {
        AverageMode::Exhaustive => group
            .elements()
            .iter()
            .map(|e| antiflatness_after(&e.op, psi))
            .collect(),
        AverageMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| antiflatness_after(&group.sample(&mut rng).op, psi))
                .collect()
        }
    };
    let n = values.len();
    let nf = R::of(n as f64);
    let mean = pairwise_sum(&values) / nf;
    let sq_dev: Vec<R> = values.iter().map(|&v| (v - mean) * (v - mean)).collect();
    match mode {
        AverageMode::Exhaustive => CliffordAverage {
            mean_f: mean,
            std_err: R::zero(),
            std_dev: (pairwise_sum(&sq_dev) / nf).sqrt(),
            samples: n,
            mode,
        },
        AverageMode::Sampled => {
            let var = pairwise_sum(&sq_dev) / R::of((n.max(2) - 1) as f64);
            let std_dev = var.sqrt();
            CliffordAverage {
                mean_f: mean,
                std_err: std_dev / nf.sqrt(),
                std_dev,
                samples: n,
                mode,
            }
        }
    }
}

fn antiflatness_after<R: Real>(op: &Operator4<R>, psi: &TwoQubitState<R>) -> R {
    // Unitary images stay normalized; the global phase is irrelevant to the
    // reduced density matrix.
    let image = apply(op, psi);
    anti_flatness(&partial_trace_b_raw(&image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{m_lin, pauli_spectrum};
    use crate::qlin::{normalize, LINALG_TOL};
    use crate::stabilizers::StabilizerAtlas;
    use num_complex::Complex;

    fn group() -> &'static CliffordGroup<f64> {
        CliffordGroup::shared()
    }

    #[test]
    fn enumeration_contains_identity_and_counts_11520() {
        let g = group();
        assert_eq!(g.len(), GROUP_ORDER);
        assert!(g.element(0).word.is_empty());
        assert_eq!(g.element(0).op, Operator4::identity());
    }

    #[test]
    fn elements_are_unitary_and_permute_paulis() {
        let g = group();
        let paulis = pauli_strings::<f64>();
        for k in (0..g.len()).step_by(997) {
            let e = g.element(k);
            assert!(e.op.is_unitary(LINALG_TOL));
            for p in &paulis {
                let image = e.op.mul(p).mul(&e.op.adjoint());
                assert!(
                    identify_signed_pauli(&image, &paulis).is_some(),
                    "element {k} does not conjugate Paulis to signed Paulis"
                );
            }
        }
    }

    #[test]
    fn orbit_of_state_33_is_the_atlas() {
        let g = group();
        let atlas = StabilizerAtlas::<f64>::new();
        let start = TwoQubitState::<f64>::basis(0);
        for e in g.elements() {
            let image = normalize(apply(&e.op, &start)).unwrap();
            let hit = atlas
                .states()
                .iter()
                .any(|s| s.state.distance(&image) < 1e-9);
            assert!(hit, "image under word {:?} not in atlas", e.word);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_roughly_uniform() {
        let g = group();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a: Vec<usize> = (0..5)
            .map(|_| g.sample(&mut rng) as *const _ as usize)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b: Vec<usize> = (0..5)
            .map(|_| g.sample(&mut rng) as *const _ as usize)
            .collect();
        assert_eq!(a, b);

        // 5000 draws into 16 coarse bins of 720 elements: all within 5 sigma.
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let mut bins = [0usize; 16];
        let n = 5000;
        for _ in 0..n {
            let idx = rng.random_range(0..g.len());
            bins[idx / 720] += 1;
        }
        let p = 1.0 / 16.0;
        let mean = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for (b, count) in bins.iter().enumerate() {
            let dev = (*count as f64 - mean).abs();
            assert!(dev < 5.0 * sigma, "bin {b}: count {count} vs mean {mean}");
        }
    }

    #[test]
    fn sampled_clifford_preserves_stabilizerness() {
        let g = group();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let atlas = StabilizerAtlas::<f64>::new();
        let psi = atlas.stabilizer(25).unwrap().state;
        for _ in 0..50 {
            let e = g.sample(&mut rng);
            let image = normalize(apply(&e.op, &psi)).unwrap();
            assert!(m_lin(&pauli_spectrum(&image).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn group_is_closed_under_composition() {
        let g = group();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let a = g.sample(&mut rng);
            let b = g.sample(&mut rng);
            assert!(g.contains_op(&a.op.mul(&b.op)));
        }
    }

    #[test]
    fn c_factor_values() {
        assert!((c_factor::<f64>(4, 2).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(c_factor::<f64>(4, 4).unwrap(), 0.0);
        assert!((c_factor::<f64>(8, 2).unwrap() - 1.0 / 14.0).abs() < 1e-15);
        assert!(matches!(c_factor::<f64>(4, 3), Err(CliffordError::InvalidDims { .. })));
        assert!(matches!(c_factor::<f64>(1, 1), Err(CliffordError::InvalidDims { .. })));
    }

    #[test]
    fn exhaustive_average_vanishes_on_stabilizer_states() {
        let atlas = StabilizerAtlas::<f64>::new();
        let psi = atlas.stabilizer(39).unwrap().state;
        let avg =
            clifford_averaged_antiflatness(group(), &psi, AverageMode::Exhaustive, 0, 0);
        assert!(avg.mean_f <= 1e-12);
        assert_eq!(avg.std_err, 0.0);
        assert_eq!(avg.samples, GROUP_ORDER);
    }

    #[test]
    fn exhaustive_average_matches_identity_for_t_tensor_t() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let t = Complex::from_polar(r, std::f64::consts::FRAC_PI_4);
        let a = Complex::new(r, 0.0);
        let psi = normalize([a * a, a * t, t * a, t * t]).unwrap();
        let avg =
            clifford_averaged_antiflatness(group(), &psi, AverageMode::Exhaustive, 0, 0);
        let expect = 7.0 / 160.0; // c(4,2) * m_lin = (1/10)(7/16)
        assert!((avg.mean_f - expect).abs() < 1e-12, "mean {}", avg.mean_f);

        let sampled =
            clifford_averaged_antiflatness(group(), &psi, AverageMode::Sampled, 5000, 42);
        assert!(
            (sampled.mean_f - expect).abs() < 3.0 * sampled.std_err,
            "sampled mean {} +- {}",
            sampled.mean_f,
            sampled.std_err
        );
    }

    #[test]
    fn clifford_conjugation_leaves_m_lin_invariant() {
        let g = group();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let psi = crate::qlin::haar_random_state::<f64>(&mut rng);
            let m0 = m_lin(&pauli_spectrum(&psi).unwrap());
            let e = g.sample(&mut rng);
            let image = normalize(apply(&e.op, &psi)).unwrap();
            let m1 = m_lin(&pauli_spectrum(&image).unwrap());
            assert!((m0 - m1).abs() < 1e-10);
        }
    }
}
