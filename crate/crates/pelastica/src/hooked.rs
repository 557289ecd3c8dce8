//! Hooked p-elasticae: curves of fixed length with prescribed
//! horizontal displacement and terminal tangent `-e1`.
//!
//! Every hooked p-elastica is either wavelike or flat-core, with the
//! branch decided by the ratio `ell / L` against `1/(p-1)`; both
//! branches come with explicit parametrizations indexed by a mode
//! number `n >= 1`, and the `n = 1` representatives attain the
//! closed-form minimal energies implemented here.

use crate::curves::{
    self, apply_transform, bending_energy, concat, reverse, sample_loop, sample_loop_span,
    sample_segment, sample_wavelike, ArcCurve, LoopSign, PlanarTransform,
};
use crate::error::{Error, Result};
use crate::pelliptic::{self, Modulus, PParam};
use serde::Serialize;
use std::f64::consts::PI;

/// The boundary-value data: length `L` and horizontal displacement
/// `ell` with `0 < ell < L`.
#[derive(Debug, Clone, Copy)]
pub struct HookedProblem {
    pub p: PParam,
    pub ell: f64,
    pub length: f64,
}

impl HookedProblem {
    pub fn new(p: PParam, ell: f64, length: f64) -> Result<Self> {
        if !(0.0 < ell && ell < length) {
            return Err(Error::Domain(format!(
                "hooked problem requires 0 < ell < L, got ell = {ell}, L = {length}"
            )));
        }
        Ok(HookedProblem { p, ell, length })
    }

    #[inline]
    pub fn ratio(&self) -> f64 {
        self.ell / self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Wavelike,
    Flatcore,
}

/// A classified hooked p-elastica: the wavelike family carries the
/// modulus solving `Q_p(q) = -ell/L`; the flat-core family carries loop
/// signs and flat lengths subject to the hooked sum constraint.
#[derive(Debug, Clone)]
pub enum HookedBranch {
    Wavelike {
        n: usize,
        q: Modulus,
    },
    Flatcore {
        n: usize,
        signs: Vec<LoopSign>,
        flat_lengths: Vec<f64>,
    },
}

impl HookedBranch {
    pub fn kind(&self) -> BranchKind {
        match self {
            HookedBranch::Wavelike { .. } => BranchKind::Wavelike,
            HookedBranch::Flatcore { .. } => BranchKind::Flatcore,
        }
    }

    pub fn mode(&self) -> usize {
        match self {
            HookedBranch::Wavelike { n, .. } | HookedBranch::Flatcore { n, .. } => *n,
        }
    }

    /// Canonical branch for the problem: modulus from `solve_modulus`
    /// on the wavelike side, all-plus signs with uniformly distributed
    /// flat lengths on the flat-core side.
    pub fn canonical(prob: &HookedProblem, n: usize) -> Result<HookedBranch> {
        if n == 0 {
            return Err(Error::Domain("mode number n must be at least 1".into()));
        }
        match classify_branch(prob) {
            BranchKind::Wavelike => Ok(HookedBranch::Wavelike {
                n,
                q: pelliptic::solve_modulus(prob.p, prob.ratio())?,
            }),
            BranchKind::Flatcore => {
                let total = flat_sum_hooked(prob, n)?;
                Ok(HookedBranch::Flatcore {
                    n,
                    signs: vec![LoopSign::Plus; n],
                    flat_lengths: vec![total / n as f64; n],
                })
            }
        }
    }
}

/// Required `sum_{j=1}^n L_j` of the unscaled flat lengths:
/// `(2n-1) (ell/L - 1/(p-1)) / (1 - ell/L) K_p(1)`.
fn flat_sum_hooked(prob: &HookedProblem, n: usize) -> Result<f64> {
    let p = prob.p.get();
    let r = prob.ratio();
    let k = pelliptic::k1p(prob.p, Modulus::ONE)?;
    Ok((2.0 * n as f64 - 1.0) * (r - 1.0 / (p - 1.0)) / (1.0 - r) * k)
}

/// Branch selection: wavelike iff `p <= 2` or `ell < L/(p-1)`; the
/// boundary ratio `ell/L = 1/(p-1)` belongs to the flat-core branch.
pub fn classify_branch(prob: &HookedProblem) -> BranchKind {
    if !prob.p.is_degenerate() || prob.ratio() < 1.0 / (prob.p.get() - 1.0) {
        BranchKind::Wavelike
    } else {
        BranchKind::Flatcore
    }
}

/// Builds the hooked p-elastica of the given branch with `m` samples
/// per constituent piece (half period on the wavelike side, loop or
/// segment on the flat-core side).
///
/// Wavelike: `(1/alpha_n) R_pi (gamma_w(alpha_n s + K, q) - gamma_w(K, q))`
/// with `alpha_n = (2n-1) K_{1,p}(q) / L`.
/// Flat-core: `(1/alpha_n) R_pi Gamma_n(alpha_n s)` where `Gamma_n`
/// chains segments and loops and ends with the half loop at its apex,
/// `alpha_n = (2n-1) (p-2)/(p-1) K_p(1) / (L - ell)`.
pub fn build_hooked(prob: &HookedProblem, branch: &HookedBranch, m: usize) -> Result<ArcCurve> {
    if branch.kind() != classify_branch(prob) {
        return Err(Error::Domain(format!(
            "branch {:?} is inconsistent with the problem (ratio {} vs 1/(p-1) = {})",
            branch.kind(),
            prob.ratio(),
            1.0 / (prob.p.get() - 1.0)
        )));
    }
    match branch {
        HookedBranch::Wavelike { n, q } => {
            // The modulus must solve Q_p(q) = -ell/L.
            let residual = pelliptic::qp(prob.p, *q)? + prob.ratio();
            if residual.abs() > 1e-6 {
                return Err(Error::Domain(format!(
                    "wavelike modulus q = {} does not solve Q_p(q) = -ell/L (residual {residual})",
                    q.get()
                )));
            }
            let k = pelliptic::k1p(prob.p, *q)?;
            let alpha = (2.0 * *n as f64 - 1.0) * k / prob.length;
            let base = sample_wavelike(
                prob.p,
                *q,
                k,
                (2.0 * *n as f64) * k,
                m * (2 * n - 1) + 1,
            )?;
            finish_rotated_scaled(base, alpha)
        }
        HookedBranch::Flatcore {
            n,
            signs,
            flat_lengths,
        } => {
            if signs.len() != *n || flat_lengths.len() != *n {
                return Err(Error::Domain(format!(
                    "flat-core branch with n = {n} needs n signs and n flat lengths, got {} and {}",
                    signs.len(),
                    flat_lengths.len()
                )));
            }
            if flat_lengths.iter().any(|&l| l < 0.0) {
                return Err(Error::Domain("flat lengths must be nonnegative".into()));
            }
            let want = flat_sum_hooked(prob, *n)?;
            let got: f64 = flat_lengths.iter().sum();
            if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
                return Err(Error::SumFlatParts { got, want });
            }
            let k = pelliptic::k1p(prob.p, Modulus::ONE)?;
            let p = prob.p.get();
            let alpha =
                (2.0 * *n as f64 - 1.0) / (prob.length - prob.ell) * (p - 2.0) / (p - 1.0) * k;
            let mut pieces = Vec::new();
            for j in 0..*n {
                if flat_lengths[j] > 0.0 {
                    pieces.push(sample_segment(prob.p, flat_lengths[j], m)?);
                }
                if j + 1 < *n {
                    pieces.push(sample_loop(prob.p, signs[j], m)?);
                } else {
                    // terminal half loop, ending at the apex
                    pieces.push(sample_loop_span(prob.p, signs[j], -k, 0.0, m)?);
                }
            }
            finish_rotated_scaled(concat(&pieces)?, alpha)
        }
    }
}

/// Rotate by pi, dilate by `1/alpha`, rebase arclength and start point
/// to the origin.
fn finish_rotated_scaled(base: ArcCurve, alpha: f64) -> Result<ArcCurve> {
    let start = base.samples[0];
    let scale = 1.0 / alpha;
    // translation = -(1/alpha) R_pi start
    let rotated_start = (-start.x, -start.y);
    let mut curve = apply_transform(
        &base,
        &PlanarTransform {
            rotation: PI,
            reflect: false,
            scale,
            translation: (-scale * rotated_start.0, -scale * rotated_start.1),
        },
    )?;
    let s0 = curve.samples[0].s;
    for smp in &mut curve.samples {
        smp.s -= s0;
    }
    curve.length = curve.samples.last().unwrap().s;
    Ok(curve)
}

/// Endpoint data checked by [`verify_hooked_bc`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BcReport {
    pub k0: f64,
    pub k_end: f64,
    pub w_prime_end: f64,
    pub pass: bool,
}

/// Verifies the hooked natural boundary conditions
/// `k(0) = 0, k(L) != 0, w'(L) = 0` on a sampled curve. `w'(L)` is a
/// one-sided second-order finite difference of `w = |k|^{p-2} k`; the
/// thresholds scale with `max|k|`.
pub fn verify_hooked_bc(curve: &ArcCurve) -> BcReport {
    let p = curve.p.get();
    let n = curve.samples.len();
    let kmax = curve
        .samples
        .iter()
        .map(|smp| smp.kappa.abs())
        .fold(0.0, f64::max);
    let k0 = curve.samples[0].kappa;
    let k_end = curve.samples[n - 1].kappa;
    let w = |k: f64| if k == 0.0 { 0.0 } else { k.signum() * k.abs().powf(p - 1.0) };
    let h = curve.samples[n - 1].s - curve.samples[n - 2].s;
    let w_prime_end = (3.0 * w(curve.samples[n - 1].kappa) - 4.0 * w(curve.samples[n - 2].kappa)
        + w(curve.samples[n - 3].kappa))
        / (2.0 * h);
    let tol = 1e-6 * kmax;
    // w' scales like max|k|^{p-1} * max|k|; the factor 100 keeps the
    // finite-difference noise floor at M = 1000 below threshold.
    let w_scale = 100.0 * kmax.powf(p - 1.0);
    let pass = kmax > 0.0
        && k0.abs() <= tol
        && k_end.abs() >= 10.0 * tol
        && w_prime_end.abs() <= tol * w_scale;
    BcReport {
        k0,
        k_end,
        w_prime_end,
        pass,
    }
}

/// Closed-form global minimum of the p-bending energy over the hooked
/// class, branch chosen by [`classify_branch`]:
///
/// wavelike: `(2q)^p K^{p-1} (E/q^2 + (1 - 1/q^2) K) / L^{p-1}`,
/// flat-core: `2^p K_p(1)^{p-1} E_{1,p}(1) ((p-2)/(p-1))^{p-1} / (L-ell)^{p-1}`.
pub fn minimal_energy(prob: &HookedProblem) -> Result<f64> {
    let p = prob.p.get();
    match classify_branch(prob) {
        BranchKind::Wavelike => {
            let q = pelliptic::solve_modulus(prob.p, prob.ratio())?;
            let k = pelliptic::k1p(prob.p, q)?;
            let e = pelliptic::e1p(prob.p, q)?;
            let qv = q.get();
            let cn_int = e / (qv * qv) + (1.0 - 1.0 / (qv * qv)) * k;
            Ok((2.0 * qv).powf(p) * k.powf(p - 1.0) * cn_int / prob.length.powf(p - 1.0))
        }
        BranchKind::Flatcore => {
            Ok(flat_c_constant(prob.p)? / (prob.length - prob.ell).powf(p - 1.0))
        }
    }
}

/// `C_p = 2^p K_{1,p}(1)^{p-1} E_{1,p}(1) ((p-2)/(p-1))^{p-1}`.
pub fn flat_c_constant(p: PParam) -> Result<f64> {
    if !p.is_degenerate() {
        return Err(Error::Domain(format!(
            "C_p is defined for p > 2, got p = {}",
            p.get()
        )));
    }
    let pv = p.get();
    let k = pelliptic::k1p(p, Modulus::ONE)?;
    let e = pelliptic::e1p(p, Modulus::ONE)?;
    Ok(2f64.powf(pv) * k.powf(pv - 1.0) * e * ((pv - 2.0) / (pv - 1.0)).powf(pv - 1.0))
}

/// Jensen lower bound `C_p N^p / (L - ell)^{p-1}` on the summed energy
/// of N hooked pieces with total length L and total displacement ell.
pub fn jensen_bound(p: PParam, n: usize, length: f64, ell: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("piece count N must be at least 1".into()));
    }
    if !(0.0 < ell && ell < length) {
        return Err(Error::Domain(format!(
            "jensen bound requires 0 < ell < L, got ell = {ell}, L = {length}"
        )));
    }
    Ok(flat_c_constant(p)? * (n as f64).powf(p.get()) / (length - ell).powf(p.get() - 1.0))
}

/// The mirrored-class representative (terminal tangent condition moved
/// to s = 0): reverse the parametrization and reflect horizontally.
pub fn mirror_hooked(curve: &ArcCurve) -> Result<ArcCurve> {
    // Horizontal reflection = vertical reflection followed by rotation
    // by pi.
    apply_transform(
        &reverse(curve),
        &PlanarTransform {
            rotation: PI,
            reflect: true,
            ..Default::default()
        },
    )
}

/// Report emitted by the command-line front end for one hooked problem.
#[derive(Debug, Clone, Serialize)]
pub struct HookedReport {
    pub branch: BranchKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub energy_closed_form: f64,
    pub energy_quadrature: f64,
    pub bc_report: BcReport,
}

/// Builds the canonical mode-n hooked curve and assembles the report:
/// closed-form energy `(2n-1)^p` times the minimum, quadrature energy,
/// and the boundary-condition check.
pub fn hooked_report(prob: &HookedProblem, n: usize, m: usize) -> Result<HookedReport> {
    let branch = HookedBranch::canonical(prob, n)?;
    let curve = build_hooked(prob, &branch, m)?;
    let minimal = minimal_energy(prob)?;
    let closed = (2.0 * n as f64 - 1.0).powf(prob.p.get()) * minimal;
    let q = match &branch {
        HookedBranch::Wavelike { q, .. } => Some(q.get()),
        HookedBranch::Flatcore { .. } => None,
    };
    Ok(HookedReport {
        branch: branch.kind(),
        n,
        q,
        energy_closed_form: closed,
        energy_quadrature: bending_energy(&curve),
        bc_report: verify_hooked_bc(&curve),
    })
}

/// Horizontal displacement and end tangent of a curve, for boundary
/// checks in tests and reports.
pub fn hooked_boundary_data(curve: &ArcCurve) -> (f64, f64, f64) {
    let (dx, _) = curves::displacement(curve);
    let end = curve.samples.last().expect("curve has samples");
    (dx, end.theta.cos(), end.theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> PParam {
        PParam::new(v).unwrap()
    }

    #[test]
    fn classification_matches_ratio_rule() {
        let wl = HookedProblem::new(p(2.0), 0.9, 1.0).unwrap();
        assert_eq!(classify_branch(&wl), BranchKind::Wavelike);
        let fc = HookedProblem::new(p(4.0), 0.5, 1.0).unwrap();
        assert_eq!(classify_branch(&fc), BranchKind::Flatcore);
        let wl4 = HookedProblem::new(p(4.0), 0.2, 1.0).unwrap();
        assert_eq!(classify_branch(&wl4), BranchKind::Wavelike);
        // the boundary ratio belongs to the flat-core branch
        let boundary = HookedProblem::new(p(4.0), 1.0 / 3.0, 1.0).unwrap();
        assert_eq!(classify_branch(&boundary), BranchKind::Flatcore);
    }

    #[test]
    fn problem_rejects_bad_data() {
        assert!(HookedProblem::new(p(3.0), 1.0, 1.0).is_err());
        assert!(HookedProblem::new(p(3.0), 0.0, 1.0).is_err());
        assert!(HookedProblem::new(p(3.0), 1.5, 1.0).is_err());
    }

    #[test]
    fn inconsistent_branch_is_rejected() {
        let prob = HookedProblem::new(p(4.0), 0.5, 1.0).unwrap();
        let wrong = HookedBranch::Wavelike {
            n: 1,
            q: Modulus::new(0.5).unwrap(),
        };
        assert!(build_hooked(&prob, &wrong, 100).is_err());
    }

    #[test]
    fn flatcore_branch_rejects_wrong_sum() {
        let prob = HookedProblem::new(p(4.0), 0.5, 1.0).unwrap();
        let bad = HookedBranch::Flatcore {
            n: 1,
            signs: vec![LoopSign::Plus],
            flat_lengths: vec![10.0],
        };
        assert!(matches!(
            build_hooked(&prob, &bad, 100),
            Err(Error::SumFlatParts { .. })
        ));
    }

    #[test]
    fn jensen_bound_reduces_to_minimal_flat_at_one_piece() {
        let pp = p(4.0);
        let prob = HookedProblem::new(pp, 0.6, 1.0).unwrap();
        let min = minimal_energy(&prob).unwrap();
        let bound = jensen_bound(pp, 1, 1.0, 0.6).unwrap();
        assert!((min - bound).abs() < 1e-12 * min);
    }

    #[test]
    fn minimal_flat_depends_only_on_gap() {
        let pp = p(4.0);
        let a = minimal_energy(&HookedProblem::new(pp, 0.5, 1.0).unwrap()).unwrap();
        let b = minimal_energy(&HookedProblem::new(pp, 1.5, 2.0).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-10 * a);
    }
}
