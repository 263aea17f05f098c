//! Verification suites: machine-checkable invariants with JSON reports of
//! the worst deviations. Exit status is decided by the caller from `pass`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use qmagic_core::clifford::{
    c_factor, clifford_averaged_antiflatness, AverageMode, CliffordGroup, GROUP_ORDER,
};
use qmagic_core::measures::{m_lin, magic_report, pauli_spectrum};
use qmagic_core::moller::{final_state, group_anti_flatness, group_m_lin, ScatteringAngle};
use qmagic_core::nlopt::{nl_via_antiflatness, nonlocal_magic};
use qmagic_core::nn::{group_closed_forms, s_matrix};
use qmagic_core::qlin::{apply, haar_random_state, normalize};
use qmagic_core::stabilizers::{moller_group_of, nn_group_of, MollerGroup, NnGroup};
use qmagic_core::{OptimizerConfig64, StabilizerAtlas64, TwoQubitState64};

/// Outcome of one suite: the JSON report and the overall verdict.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub pass: bool,
    pub report: serde_json::Value,
}

/// `|M_lin^(NL) - 4 F_A| <= 1e-6` over `n` Haar-random states.
pub fn four_af(n: usize, seed: u64, cfg: &OptimizerConfig64) -> VerifyOutcome {
    let tolerance = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<TwoQubitState64> = (0..n).map(|_| haar_random_state(&mut rng)).collect();
    let devs: Vec<f64> = states
        .par_iter()
        .map(|psi| (nonlocal_magic(psi, cfg).m_nl - nl_via_antiflatness(psi)).abs())
        .collect();
    let (worst_index, max_dev) = devs
        .iter()
        .enumerate()
        .fold((0usize, 0.0f64), |acc, (k, &d)| if d > acc.1 { (k, d) } else { acc });
    let pass = max_dev <= tolerance;
    VerifyOutcome {
        pass,
        report: json!({
            "suite": "four-af",
            "n": n,
            "seed": seed,
            "tolerance": tolerance,
            "max_abs_deviation": max_dev,
            "worst_index": worst_index,
            "pass": pass,
            "first_failure": failure_if(!pass, || format!(
                "state #{worst_index}: |m_nl - 4 f_a| = {max_dev:e} > {tolerance:e}"
            )),
        }),
    }
}

/// Clifford-averaging identity `<F_A> = c(4,2) M_lin`, exhaustive or sampled.
pub fn clifford_id(n: usize, seed: u64, mode: AverageMode, samples: usize) -> VerifyOutcome {
    let group = CliffordGroup::shared();
    let c = c_factor::<f64>(4, 2).expect("d=4, d_A=2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<TwoQubitState64> = (0..n).map(|_| haar_random_state(&mut rng)).collect();
    match mode {
        AverageMode::Exhaustive => {
            let tolerance = 1e-10;
            let devs: Vec<f64> = states
                .par_iter()
                .map(|psi| {
                    let avg =
                        clifford_averaged_antiflatness(group, psi, AverageMode::Exhaustive, 0, 0);
                    let expect = c * m_lin(&pauli_spectrum(psi).expect("normalized"));
                    (avg.mean_f - expect).abs()
                })
                .collect();
            let max_dev = devs.iter().cloned().fold(0.0, f64::max);
            let pass = max_dev <= tolerance;
            VerifyOutcome {
                pass,
                report: json!({
                    "suite": "clifford-id",
                    "mode": "exhaustive",
                    "n": n,
                    "seed": seed,
                    "group_order": GROUP_ORDER,
                    "tolerance": tolerance,
                    "max_abs_deviation": max_dev,
                    "pass": pass,
                    "first_failure": failure_if(!pass, || format!(
                        "max |<F_A> - m_lin/10| = {max_dev:e} > {tolerance:e}"
                    )),
                }),
            }
        }
        AverageMode::Sampled => {
            let z_bound = 3.0;
            let zs: Vec<f64> = states
                .par_iter()
                .enumerate()
                .map(|(k, psi)| {
                    let avg = clifford_averaged_antiflatness(
                        group,
                        psi,
                        AverageMode::Sampled,
                        samples,
                        seed.wrapping_add(k as u64),
                    );
                    let expect = c * m_lin(&pauli_spectrum(psi).expect("normalized"));
                    (avg.mean_f - expect).abs() / avg.std_err.max(f64::MIN_POSITIVE)
                })
                .collect();
            let max_z = zs.iter().cloned().fold(0.0, f64::max);
            let pass = max_z <= z_bound;
            VerifyOutcome {
                pass,
                report: json!({
                    "suite": "clifford-id",
                    "mode": "sampled",
                    "n": n,
                    "samples": samples,
                    "seed": seed,
                    "z_bound": z_bound,
                    "max_z_score": max_z,
                    "pass": pass,
                    "first_failure": failure_if(!pass, || format!(
                        "max z-score {max_z} > {z_bound}"
                    )),
                }),
            }
        }
    }
}

/// NN taxonomy audit: per-group closed forms against state-by-state numerics
/// at 25 sampled phase-shift differences.
pub fn groups_nn(cfg: &OptimizerConfig64) -> VerifyOutcome {
    let atlas = StabilizerAtlas64::new();
    let dds: Vec<f64> = (0..25)
        .map(|k| 0.01 + (std::f64::consts::FRAC_PI_2 - 0.02) * k as f64 / 24.0)
        .collect();
    let per_point: Vec<(f64, f64, f64)> = dds
        .par_iter()
        .map(|&dd| {
            let s = s_matrix(0.0, dd);
            let mut dev_m_lin = 0.0f64;
            let mut dev_f_a = 0.0f64;
            let mut dev_m_nl = 0.0f64;
            for st in atlas.states() {
                let g = nn_group_of(st.index).expect("atlas index");
                let (f_a, m_nl, m_lin_form) = group_closed_forms(dd, g);
                let out = normalize(apply(&s, &st.state)).expect("unitary");
                let rep = magic_report(&out).expect("normalized");
                dev_m_lin = dev_m_lin.max((rep.m_lin - m_lin_form).abs());
                if !st.entangled {
                    dev_f_a = dev_f_a.max((rep.f_a - f_a).abs());
                    let nl = nonlocal_magic(&out, cfg);
                    dev_m_nl = dev_m_nl.max((nl.m_nl - m_nl).abs());
                } else if matches!(g, NnGroup::G1 | NnGroup::G2) {
                    // Entangled members of groups 1 and 2 reproduce the
                    // tensor-product non-local magic; group 3 does not.
                    let nl = nonlocal_magic(&out, cfg);
                    dev_m_nl = dev_m_nl.max((nl.m_nl - m_nl).abs());
                }
            }
            (dev_m_lin, dev_f_a, dev_m_nl)
        })
        .collect();
    let max_m_lin = per_point.iter().map(|p| p.0).fold(0.0, f64::max);
    let max_f_a = per_point.iter().map(|p| p.1).fold(0.0, f64::max);
    let max_m_nl = per_point.iter().map(|p| p.2).fold(0.0, f64::max);
    let pass = max_m_lin <= 1e-10 && max_f_a <= 1e-10 && max_m_nl <= 1e-6;
    VerifyOutcome {
        pass,
        report: json!({
            "suite": "groups-nn",
            "delta_diff_points": dds.len(),
            "max_dev_m_lin": max_m_lin,
            "max_dev_f_a": max_f_a,
            "max_dev_m_nl": max_m_nl,
            "tolerances": {"m_lin": 1e-10, "f_a": 1e-10, "m_nl": 1e-6},
            "pass": pass,
            "first_failure": failure_if(!pass, || format!(
                "m_lin dev {max_m_lin:e} / f_a dev {max_f_a:e} / m_nl dev {max_m_nl:e}"
            )),
        }),
    }
}

/// Møller taxonomy audit over 25 angles (odd-numerator grid, never exactly
/// pi/2); state 43 is reported informationally.
pub fn groups_moller(cfg: &OptimizerConfig64) -> VerifyOutcome {
    let atlas = StabilizerAtlas64::new();
    // Odd numerators over 52: pi/2 would need numerator 26, so the grid can
    // never land on the angle where state 37 is annihilated.
    let thetas: Vec<f64> = (0..25)
        .map(|k| std::f64::consts::PI * (2 * k + 1) as f64 / 52.0)
        .collect();
    let per_point: Vec<(f64, f64, f64, f64)> = thetas
        .par_iter()
        .map(|&theta| {
            let ang = ScatteringAngle::new(theta).expect("interior grid");
            let mut dev_m_lin = 0.0f64;
            let mut dev_f_a = 0.0f64;
            let mut dev_m_nl = 0.0f64;
            let mut dev_ent = 0.0f64;
            for st in atlas.states() {
                let g = moller_group_of(st.index).expect("atlas index");
                if g == MollerGroup::Unassigned {
                    continue;
                }
                let out = final_state(ang, &st.state).expect("never annihilated off pi/2");
                let rep = magic_report(&out).expect("normalized");
                let m_form = group_m_lin(ang, g).expect("closed form");
                dev_m_lin = dev_m_lin.max((rep.m_lin - m_form).abs());
                if !st.entangled {
                    let f_form = group_anti_flatness(ang, g).expect("tensor label");
                    dev_f_a = dev_f_a.max((rep.f_a - f_form).abs());
                    let nl = nonlocal_magic(&out, cfg);
                    dev_m_nl = dev_m_nl.max((nl.m_nl - 4.0 * f_form).abs());
                } else {
                    let nl = nonlocal_magic(&out, cfg);
                    dev_ent = dev_ent.max(nl.m_nl).max((rep.e_lin - 0.5).abs());
                }
            }
            (dev_m_lin, dev_f_a, dev_m_nl, dev_ent)
        })
        .collect();
    let max_m_lin = per_point.iter().map(|p| p.0).fold(0.0, f64::max);
    let max_f_a = per_point.iter().map(|p| p.1).fold(0.0, f64::max);
    let max_m_nl = per_point.iter().map(|p| p.2).fold(0.0, f64::max);
    let max_ent = per_point.iter().map(|p| p.3).fold(0.0, f64::max);
    let pass = max_m_lin <= 1e-10 && max_f_a <= 1e-10 && max_m_nl <= 1e-6 && max_ent <= 1e-6;
    let state43 = classify_moller(43, cfg);
    VerifyOutcome {
        pass,
        report: json!({
            "suite": "groups-moller",
            "theta_points": thetas.len(),
            "max_dev_m_lin": max_m_lin,
            "max_dev_f_a": max_f_a,
            "max_dev_m_nl": max_m_nl,
            "max_entangled_residual": max_ent,
            "tolerances": {"m_lin": 1e-10, "f_a": 1e-10, "m_nl": 1e-6, "entangled": 1e-6},
            "state_43": {
                "declared": MollerGroup::Unassigned.to_string(),
                "empirical": state43.map(|g| g.to_string()),
            },
            "pass": pass,
            "first_failure": failure_if(!pass, || format!(
                "m_lin dev {max_m_lin:e} / f_a dev {max_f_a:e} / m_nl dev {max_m_nl:e} / entangled residual {max_ent:e}"
            )),
        }),
    }
}

/// Empirically classifies a state's NN group by matching its final-state
/// total magic against the three closed forms at probe phase-shift
/// differences.
pub fn classify_nn(index: usize) -> Option<NnGroup> {
    let atlas = StabilizerAtlas64::new();
    let st = atlas.stabilizer(index).ok()?;
    let probes = [0.31, 0.62, 0.94, 1.25];
    'cand: for g in NnGroup::ALL {
        for &dd in &probes {
            let s = s_matrix(0.0, dd);
            let out = normalize(apply(&s, &st.state)).ok()?;
            let m = m_lin(&pauli_spectrum(&out).ok()?);
            let (_, _, m_form) = group_closed_forms(dd, g);
            if (m - m_form).abs() > 1e-8 {
                continue 'cand;
            }
        }
        return Some(g);
    }
    None
}

/// Empirically classifies a state's Møller group by matching its final-state
/// total magic curve against the closed forms at probe angles; tensor states
/// additionally split 5a/5b by anti-flatness.
pub fn classify_moller(index: usize, _cfg: &OptimizerConfig64) -> Option<MollerGroup> {
    let atlas = StabilizerAtlas64::new();
    let st = atlas.stabilizer(index).ok()?;
    let probes = [0.31, 0.97, 1.43, 2.11, 2.77];
    let candidates = [
        MollerGroup::G1,
        MollerGroup::G2,
        MollerGroup::G3,
        MollerGroup::G4,
        MollerGroup::G5a,
    ];
    let mut hits = Vec::new();
    'cand: for g in candidates {
        for &theta in &probes {
            let ang = ScatteringAngle::new(theta).expect("interior probe");
            let out = final_state(ang, &st.state).ok()?;
            let m = m_lin(&pauli_spectrum(&out).expect("normalized"));
            if (m - group_m_lin(ang, g).expect("closed form")).abs() > 1e-8 {
                continue 'cand;
            }
        }
        hits.push(g);
    }
    // The three group-5 labels share a total-magic curve; resolve tensor
    // members by anti-flatness, entangled ones to the entangled label.
    match hits.as_slice() {
        [] => None,
        [g] if *g != MollerGroup::G5a => Some(*g),
        _ => {
            if st.entangled {
                return Some(MollerGroup::G5Ent);
            }
            for g in [MollerGroup::G5a, MollerGroup::G5b] {
                let ok = probes.iter().all(|&theta| {
                    let ang = ScatteringAngle::new(theta).expect("interior probe");
                    let out = final_state(ang, &st.state).expect("tensor state");
                    let rep = magic_report(&out).expect("normalized");
                    (rep.f_a - group_anti_flatness(ang, g).expect("ab label")).abs() < 1e-8
                });
                if ok {
                    return Some(g);
                }
            }
            None
        }
    }
}

fn failure_if(
    failed: bool,
    msg: impl FnOnce() -> String,
) -> serde_json::Value {
    if failed {
        json!(msg())
    } else {
        serde_json::Value::Null
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> OptimizerConfig64 {
        OptimizerConfig64 { starts: 8, max_evals: 600, ..Default::default() }
    }

    #[test]
    fn four_af_passes_on_a_small_batch() {
        let out = four_af(40, 7, &OptimizerConfig64::default());
        assert!(out.pass, "{}", out.report);
        assert!(out.report["max_abs_deviation"].as_f64().unwrap() <= 1e-6);
    }

    #[test]
    fn clifford_id_passes_both_modes() {
        let out = clifford_id(8, 3, AverageMode::Exhaustive, 0);
        assert!(out.pass, "{}", out.report);
        let out = clifford_id(4, 3, AverageMode::Sampled, 4000);
        assert!(out.pass, "{}", out.report);
    }

    #[test]
    fn state_43_classifies_with_group_4() {
        // The published listing leaves 43 out; its computed curve matches
        // group 4 (it pairs with state 42 under the amplitude).
        let got = classify_moller(43, &quick_cfg());
        assert_eq!(got, Some(MollerGroup::G4));
    }

    #[test]
    fn declared_assignments_match_empirical_ones() {
        let cfg = quick_cfg();
        for index in [1usize, 5, 9, 17, 26, 33, 35, 39, 42, 47, 52, 58] {
            let declared = moller_group_of(index).unwrap();
            let got = classify_moller(index, &cfg).unwrap();
            assert_eq!(got, declared, "state {index}");
        }
    }
}
