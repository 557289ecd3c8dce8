//! Browser demo bindings: flat-core and hooked curve construction, the
//! p-elliptic special-function profiles, and a small stability probe,
//! each returning JSON for the static page in `www/` to render on a
//! canvas. The functions are plain Rust and usable natively as well.

use pelastica::curves::{self, build_flat_core, FlatCoreSpec, LoopSign};
use pelastica::hooked::{self, HookedProblem};
use pelastica::pelliptic::{self, Modulus, PParam};
use pelastica::stability::{probe_stability_with, ProbeConfig};
use wasm_bindgen::prelude::*;

fn err_str(e: pelastica::Error) -> String {
    e.to_string()
}

fn curve_payload(curve: &curves::ArcCurve, extra: serde_json::Value) -> String {
    let xs: Vec<f64> = curve.samples.iter().map(|s| s.x).collect();
    let ys: Vec<f64> = curve.samples.iter().map(|s| s.y).collect();
    let kappas: Vec<f64> = curve.samples.iter().map(|s| s.kappa).collect();
    let ss: Vec<f64> = curve.samples.iter().map(|s| s.s).collect();
    serde_json::json!({
        "x": xs,
        "y": ys,
        "kappa": kappas,
        "s": ss,
        "pieces": curve.piece_offsets,
        "length": curve.length,
        "energy": curves::bending_energy(curve),
        "extra": extra,
    })
    .to_string()
}

fn uniform_spec(
    p: f64,
    n_loops: usize,
    signs: &str,
    r: f64,
    endpoint_loop: bool,
) -> Result<FlatCoreSpec, String> {
    let p = PParam::new(p).map_err(err_str)?;
    let signs = LoopSign::parse_signs(signs).map_err(err_str)?;
    let mut spec = FlatCoreSpec::uniform(p, n_loops, signs, r).map_err(err_str)?;
    if endpoint_loop {
        // the unstable configuration: first flat length degenerates to 0
        let total: f64 = spec.flat_lengths.iter().sum();
        spec.flat_lengths[0] = 0.0;
        for l in spec.flat_lengths.iter_mut().skip(1) {
            *l = total / n_loops as f64;
        }
    }
    Ok(spec)
}

/// Flat-core pinned p-elastica with uniform flat lengths, or with the
/// first flat length forced to zero (the unstable endpoint-loop
/// configuration) when `endpoint_loop` is set.
#[wasm_bindgen]
pub fn flat_core_curve_json(
    p: f64,
    n_loops: usize,
    signs: &str,
    r: f64,
    endpoint_loop: bool,
    samples_per_piece: usize,
) -> Result<String, String> {
    let spec = uniform_spec(p, n_loops, signs, r, endpoint_loop)?;
    let curve = build_flat_core(&spec, samples_per_piece.clamp(16, 4000)).map_err(err_str)?;
    let k = pelliptic::k1p(spec.p, Modulus::ONE).map_err(err_str)?;
    Ok(curve_payload(
        &curve,
        serde_json::json!({
            "alternating": spec.is_alternating(),
            "flat_lengths": spec.flat_lengths,
            "quarter_period": k,
        }),
    ))
}

/// Canonical mode-n hooked p-elastica at length 1 and displacement
/// `ell`, with the closed-form and quadrature energies.
#[wasm_bindgen]
pub fn hooked_curve_json(
    p: f64,
    ell: f64,
    mode_n: usize,
    samples_per_piece: usize,
) -> Result<String, String> {
    let p = PParam::new(p).map_err(err_str)?;
    let prob = HookedProblem::new(p, ell, 1.0).map_err(err_str)?;
    let branch = hooked::HookedBranch::canonical(&prob, mode_n).map_err(err_str)?;
    let curve =
        hooked::build_hooked(&prob, &branch, samples_per_piece.clamp(16, 4000)).map_err(err_str)?;
    let minimal = hooked::minimal_energy(&prob).map_err(err_str)?;
    let bc = hooked::verify_hooked_bc(&curve);
    Ok(curve_payload(
        &curve,
        serde_json::json!({
            "branch": match hooked::classify_branch(&prob) {
                hooked::BranchKind::Wavelike => "wavelike",
                hooked::BranchKind::Flatcore => "flatcore",
            },
            "minimal_energy": minimal,
            "closed_form": (2.0 * mode_n as f64 - 1.0).powf(p.get()) * minimal,
            "bc_pass": bc.pass,
        }),
    ))
}

/// Sampled profiles of cn_p(., q) plus sech_p and tanh_p (degenerate
/// regime only) over two periods, for plotting.
#[wasm_bindgen]
pub fn special_profile_json(p: f64, q: f64, samples: usize) -> Result<String, String> {
    let p = PParam::new(p).map_err(err_str)?;
    let q = Modulus::new(q).map_err(err_str)?;
    let n = samples.clamp(16, 4000);
    let k = pelliptic::k1p(p, q).map_err(err_str)?;
    let span = 2.0 * k;
    let mut xs = Vec::with_capacity(n);
    let mut cn = Vec::with_capacity(n);
    let mut sech = Vec::new();
    let mut tanh = Vec::new();
    let degenerate = p.is_degenerate();
    for i in 0..n {
        let x = -span + 2.0 * span * i as f64 / (n - 1) as f64;
        xs.push(x);
        cn.push(pelliptic::cnp(p, x, q).map_err(err_str)?);
        if degenerate {
            sech.push(pelliptic::sechp(p, x).map_err(err_str)?);
            tanh.push(pelliptic::tanhp(p, x).map_err(err_str)?);
        }
    }
    Ok(serde_json::json!({
        "x": xs,
        "cn": cn,
        "sech": sech,
        "tanh": tanh,
        "quarter_period": k,
        "degenerate": degenerate,
    })
    .to_string())
}

/// Small stability probe: relax, perturb with the given seeds, descend,
/// and search the monotone shift path; returns the verdict and per-seed
/// energies. Sized for interactive use.
#[wasm_bindgen]
pub fn probe_json(
    p: f64,
    n_loops: usize,
    signs: &str,
    r: f64,
    endpoint_loop: bool,
    eps: f64,
    n_seeds: usize,
    m: usize,
) -> Result<String, String> {
    let spec = uniform_spec(p, n_loops, signs, r, endpoint_loop)?;
    let cfg = ProbeConfig {
        eps,
        n_seeds: n_seeds.clamp(1, 10),
        m: m.clamp(60, 400),
        max_iter: 1200,
        gtol: 1e-7,
        base_seed: 1,
        m_per_piece: 400,
    };
    let report = probe_stability_with(&spec, &cfg).map_err(err_str)?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_core_payload_is_valid_json() {
        let json = flat_core_curve_json(4.0, 2, "+-", 0.5, false, 200).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["pieces"].as_array().unwrap().len(), 5);
        assert!(v["energy"].as_f64().unwrap() > 0.0);
        assert_eq!(v["extra"]["alternating"], true);
    }

    #[test]
    fn endpoint_loop_flag_zeroes_first_flat_length() {
        let json = flat_core_curve_json(4.0, 1, "+", 0.5, true, 100).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["extra"]["alternating"], false);
        assert_eq!(v["extra"]["flat_lengths"][0], 0.0);
    }

    #[test]
    fn hooked_payload_reports_branches() {
        let wave: serde_json::Value =
            serde_json::from_str(&hooked_curve_json(4.0, 0.2, 1, 200).unwrap()).unwrap();
        assert_eq!(wave["extra"]["branch"], "wavelike");
        let flat: serde_json::Value =
            serde_json::from_str(&hooked_curve_json(4.0, 0.6, 1, 200).unwrap()).unwrap();
        assert_eq!(flat["extra"]["branch"], "flatcore");
        assert_eq!(flat["extra"]["bc_pass"], true);
    }

    #[test]
    fn special_profile_handles_both_regimes() {
        let v: serde_json::Value =
            serde_json::from_str(&special_profile_json(4.0, 0.6, 64).unwrap()).unwrap();
        assert_eq!(v["degenerate"], true);
        assert_eq!(v["cn"].as_array().unwrap().len(), 64);
        assert_eq!(v["sech"].as_array().unwrap().len(), 64);
        let v2: serde_json::Value =
            serde_json::from_str(&special_profile_json(1.5, 0.6, 32).unwrap()).unwrap();
        assert_eq!(v2["degenerate"], false);
        assert_eq!(v2["sech"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn small_probe_splits_verdicts() {
        let stable: serde_json::Value =
            serde_json::from_str(&probe_json(4.0, 1, "+", 0.5, false, 0.02, 2, 120).unwrap())
                .unwrap();
        assert_eq!(stable["verdict"], "stable-consistent");
        let unstable: serde_json::Value =
            serde_json::from_str(&probe_json(4.0, 1, "+", 0.5, true, 0.02, 2, 120).unwrap())
                .unwrap();
        assert_eq!(unstable["verdict"], "instability-witness");
    }

    #[test]
    fn invalid_parameters_surface_as_errors() {
        assert!(flat_core_curve_json(1.5, 1, "+", 0.5, false, 100).is_err());
        assert!(hooked_curve_json(4.0, 1.5, 1, 100).is_err());
    }
}
