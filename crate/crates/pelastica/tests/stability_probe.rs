//! Probe-level properties: discretization consistency, projection
//! Lipschitz behavior, reference-energy exactness at zero perturbation,
//! the discrete-to-closed-form energy convergence, and cheap versions
//! of the stable/unstable verdict split (the full-size runs live in the
//! acceptance suite).

mod common;

use pelastica::curves::{self, apply_transform, FlatCoreSpec, LoopSign, PlanarTransform};
use pelastica::hooked;
use pelastica::pelliptic::{self, Modulus, PParam};
use pelastica::stability::*;
use std::f64::consts::PI;

fn p(v: f64) -> PParam {
    PParam::new(v).unwrap()
}

fn rotated_flat_core(spec: &FlatCoreSpec, m_per_piece: usize) -> pelastica::curves::ArcCurve {
    let flat = curves::build_flat_core(spec, m_per_piece).unwrap();
    apply_transform(
        &flat,
        &PlanarTransform {
            rotation: PI,
            ..Default::default()
        },
    )
    .unwrap()
}

#[test]
fn discrete_displacement_matches_continuous_to_first_order() {
    let spec = FlatCoreSpec::uniform(p(4.0), 1, vec![LoopSign::Plus], 0.5).unwrap();
    let curve = rotated_flat_core(&spec, 1200);
    let (cx, cy) = curves::displacement(&curve);
    for m in [100usize, 200, 400] {
        let dc = discretize(&curve, m).unwrap();
        let (dx, dy) = dc.displacement();
        let h = curve.length / m as f64;
        assert!(
            ((dx - cx).powi(2) + (dy - cy).powi(2)).sqrt() <= 3.0 * h,
            "M={m}: discrete gap off by more than O(h)"
        );
    }
}

#[test]
fn discrete_energy_converges_to_closed_form() {
    // alternating flat core: E_h -> C_p (2N)^p / (L - ell)^{p-1} with
    // monotone error decay (three-level study)
    let pp = p(4.0);
    let spec = FlatCoreSpec::uniform(pp, 2, vec![LoopSign::Plus, LoopSign::Minus], 0.5).unwrap();
    let curve = rotated_flat_core(&spec, 2500);
    let k = pelliptic::k1p(pp, Modulus::ONE).unwrap();
    let flat_sum: f64 = spec.flat_lengths.iter().sum();
    let total_len = 4.0 * k + flat_sum;
    let ell = 4.0 / 3.0 * k + flat_sum;
    let closed = hooked::jensen_bound(pp, 4, total_len, ell).unwrap();
    let mut last_err = f64::INFINITY;
    for m in [200usize, 400, 800] {
        let dc = discretize(&curve, m).unwrap();
        let (e, _) = discrete_energy_grad(&dc);
        let err = (e - closed).abs() / closed;
        assert!(err < last_err, "M={m}: error {err} did not decrease");
        last_err = err;
    }
    assert!(last_err <= 1e-3, "final relative error {last_err}");
}

#[test]
fn projection_moves_thetas_proportionally_to_perturbation() {
    let spec = FlatCoreSpec::uniform(p(4.0), 1, vec![LoopSign::Plus], 0.5).unwrap();
    let curve = rotated_flat_core(&spec, 800);
    let dc = discretize(&curve, 150).unwrap();
    let (dx, dy) = dc.displacement();
    let c = PinnedConstraint { dx, dy };
    let mut last_move = f64::INFINITY;
    for halving in 0..4 {
        let eps = 0.04 / 2f64.powi(halving);
        let mut moved = dc.clone();
        for (i, t) in moved.thetas.iter_mut().enumerate() {
            *t += eps * ((i as f64 * 0.37).sin());
        }
        let proj = project_constraints(&moved, &c).unwrap();
        let dist = proj
            .thetas
            .iter()
            .zip(&moved.thetas)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(dist <= 4.0 * eps, "eps={eps}: projection moved {dist}");
        assert!(dist < last_move, "projection move did not shrink");
        last_move = dist;
    }
}

#[test]
fn zero_perturbation_returns_reference_exactly() {
    // small M so the reference relaxation terminates at gtol and the
    // seed descents start at a stationary point
    let spec = FlatCoreSpec::uniform(p(4.0), 1, vec![LoopSign::Plus], 0.5).unwrap();
    let cfg = ProbeConfig {
        eps: 0.0,
        n_seeds: 3,
        m: 120,
        max_iter: 60000,
        gtol: 1e-9,
        base_seed: 7,
        m_per_piece: 600,
    };
    let report = probe_stability_with(&spec, &cfg).unwrap();
    for s in &report.seeds {
        assert!(
            (s.e_final - report.e_ref).abs() <= 1e-10 * report.e_ref,
            "seed {}: E {} vs E_ref {}",
            s.seed,
            s.e_final,
            report.e_ref
        );
    }
}

#[test]
fn descent_is_self_consistent_at_a_relaxed_state() {
    // restarting the descent at a fully relaxed alternating state moves
    // essentially nothing and keeps every iterate feasible
    let spec = FlatCoreSpec::uniform(p(4.0), 1, vec![LoopSign::Plus], 0.5).unwrap();
    let curve = rotated_flat_core(&spec, 600);
    let dc = discretize(&curve, 120).unwrap();
    let (dx, dy) = dc.displacement();
    let c = PinnedConstraint { dx, dy };
    let (relaxed, e_ref, _) = descend(&dc, &c, 60000, 1e-9).unwrap();

    let mut max_residual: f64 = 0.0;
    let out = descend_observed(&relaxed, &c, 5000, 1e-9, |state, _| {
        let (sx, sy) = state.displacement();
        max_residual = max_residual.max((sx - dx).abs().max((sy - dy).abs()));
    })
    .unwrap();
    assert!((out.e_final - e_ref).abs() <= 1e-8 * e_ref.max(1.0));
    let sup_dev = out
        .state
        .thetas
        .iter()
        .zip(&relaxed.thetas)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(sup_dev <= 1e-3, "sup dev {sup_dev}");
    assert!(max_residual <= 1e-9, "feasibility residual {max_residual}");
}

#[test]
fn small_probe_reproduces_the_stable_unstable_split() {
    let pp = p(4.0);
    let stable = FlatCoreSpec::uniform(pp, 1, vec![LoopSign::Plus], 0.5).unwrap();
    let cfg = ProbeConfig {
        eps: 0.02,
        n_seeds: 4,
        m: 200,
        max_iter: 2000,
        gtol: 1e-7,
        base_seed: 1,
        m_per_piece: 500,
    };
    let report = probe_stability_with(&stable, &cfg).unwrap();
    assert_eq!(report.verdict, Verdict::StableConsistent);
    assert!(report.path_descent.is_none());
    // relaxation bound held on every iterate where the partition existed
    for s in &report.seeds {
        assert!(s.bound_checked > 0, "partition never found");
        assert_eq!(s.bound_violations, 0, "Jensen bound violated");
    }

    let total = stable.required_flat_sum().unwrap();
    let endpoint_loop = FlatCoreSpec {
        p: pp,
        n_loops: 1,
        signs: vec![LoopSign::Plus],
        flat_lengths: vec![0.0, total],
        r: 0.5,
    };
    assert!(!endpoint_loop.is_alternating());
    let report = probe_stability_with(&endpoint_loop, &cfg).unwrap();
    assert_eq!(report.verdict, Verdict::InstabilityWitness);
    let path = report.path_descent.expect("descending path expected");
    assert!(path.e_final <= 0.95 * report.e_ref);
}

#[test]
fn probe_report_serializes_with_documented_fields() {
    let spec = FlatCoreSpec::uniform(p(4.0), 1, vec![LoopSign::Plus], 0.5).unwrap();
    let cfg = ProbeConfig {
        eps: 0.01,
        n_seeds: 1,
        m: 120,
        max_iter: 300,
        gtol: 1e-6,
        base_seed: 3,
        m_per_piece: 300,
    };
    let report = probe_stability_with(&spec, &cfg).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert!(json["e_ref"].is_number());
    assert!(json["seeds"][0]["sup_dev"].is_number());
    assert!(json["seeds"][0]["iterations"].is_number());
    assert!(json["verdict"].is_string());
}
