//! The `verify` subcommand: half-period shift identities, the cn-power
//! integral identity, Q_p monotonicity, and Euler-Lagrange residuals of
//! the constructed curves, with one pass/fail line per check.

use crate::CliResult;
use pelastica::curves::{
    build_flat_core, el_residual, estimate_lambda, FlatCoreSpec, LoopSign,
};
use pelastica::hooked::{build_hooked, HookedBranch, HookedProblem};
use pelastica::numerics::{integrate, QuadSpec};
use pelastica::pelliptic::{self, Modulus, PParam};

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn p(v: f64) -> PParam {
    PParam::new(v).expect("valid p")
}
fn q(v: f64) -> Modulus {
    Modulus::new(v).expect("valid q")
}

fn periodicity_check() -> Check {
    let mut worst: f64 = 0.0;
    for (pv, qv) in [(1.5, 0.4), (2.0, 0.6), (4.0, 0.8)] {
        let pp = p(pv);
        let qq = q(qv);
        let k = pelliptic::k1p(pp, qq).unwrap();
        let e = pelliptic::e1p(pp, qq).unwrap();
        for x in [-0.9, 0.0, 0.7, 1.3] {
            for n in [-2.0f64, -1.0, 1.0, 2.0] {
                let f_err = pelliptic::f1p(pp, x + n * std::f64::consts::PI, qq).unwrap()
                    - pelliptic::f1p(pp, x, qq).unwrap()
                    - 2.0 * n * k;
                let e_err = pelliptic::e1p_inc(pp, x + n * std::f64::consts::PI, qq).unwrap()
                    - pelliptic::e1p_inc(pp, x, qq).unwrap()
                    - 2.0 * n * e;
                worst = worst.max(f_err.abs()).max(e_err.abs());
            }
        }
    }
    Check {
        name: "half-period shifts of F and E",
        pass: worst <= 1e-9,
        detail: format!("max deviation {worst:.2e}"),
    }
}

fn cn_power_identity_check() -> Check {
    let mut worst: f64 = 0.0;
    for pv in [1.5, 2.0, 3.0, 4.0] {
        for qv in [0.2, 0.5, 0.8] {
            let pp = p(pv);
            let qq = q(qv);
            let k = pelliptic::k1p(pp, qq).unwrap();
            let e = pelliptic::e1p(pp, qq).unwrap();
            let lhs = integrate(
                |s| pelliptic::cnp(pp, s, qq).unwrap().abs().powf(pv),
                0.0,
                k,
                &QuadSpec::default(),
            )
            .unwrap();
            let rhs = e / (qv * qv) + (1.0 - 1.0 / (qv * qv)) * k;
            worst = worst.max(((lhs - rhs) / rhs).abs());
        }
    }
    Check {
        name: "cn-power integral identity",
        pass: worst <= 1e-8,
        detail: format!("max relative deviation {worst:.2e}"),
    }
}

fn qp_monotone_check() -> Check {
    let mut ok = true;
    for pv in [1.5, 2.0, 3.0, 4.0, 8.0] {
        let mut last = f64::INFINITY;
        for i in 0..100 {
            let qv = 0.999 * i as f64 / 99.0;
            let val = pelliptic::qp(p(pv), q(qv)).unwrap();
            if val >= last {
                ok = false;
            }
            last = val;
        }
    }
    Check {
        name: "Q_p strictly decreasing (100-point grid)",
        pass: ok,
        detail: "p in {1.5, 2, 3, 4, 8}".to_string(),
    }
}

fn el_residual_check() -> Check {
    let pp = p(4.0);
    let prob = HookedProblem::new(pp, 0.2, 1.0).unwrap();
    let branch = HookedBranch::canonical(&prob, 1).unwrap();
    let wave = build_hooked(&prob, &branch, 1500).unwrap();
    let res_wave = el_residual(&wave, estimate_lambda(&wave).unwrap(), 6);

    let spec = FlatCoreSpec::uniform(pp, 2, vec![LoopSign::Plus, LoopSign::Minus], 0.5).unwrap();
    let flat = build_flat_core(&spec, 1500).unwrap();
    let res_flat = el_residual(&flat, estimate_lambda(&flat).unwrap(), 6);

    Check {
        name: "Euler-Lagrange residuals (wavelike, flat-core)",
        pass: res_wave <= 1e-5 && res_flat <= 1e-5,
        detail: format!("wavelike {res_wave:.2e}, flat-core {res_flat:.2e}"),
    }
}

pub fn run_verify() -> CliResult {
    let checks = [
        periodicity_check(),
        cn_power_identity_check(),
        qp_monotone_check(),
        el_residual_check(),
    ];
    let mut passed = 0;
    for check in &checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!("{status}  {} ({})", check.name, check.detail);
        if check.pass {
            passed += 1;
        }
    }
    println!("{passed}/{} checks passed", checks.len());
    if passed == checks.len() {
        Ok(())
    } else {
        Err(crate::CliError::Usage(format!(
            "{} verification check(s) failed",
            checks.len() - passed
        )))
    }
}
