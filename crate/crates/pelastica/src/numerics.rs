//! Shared quadrature and root-finding kernels.
//!
//! Two integration paths are provided: adaptive Gauss-Kronrod (G7/K15)
//! for smooth integrands, and a double-exponential (tanh-sinh) rule for
//! integrands with integrable power-law singularities at an endpoint.
//! The root finder is a bisection bracket with secant acceleration.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target.
    pub rel_tol: f64,
    /// Subdivision (or refinement-level) limit.
    pub max_depth: usize,
    /// Flags integrable power-law singularities at the (left, right) endpoint.
    pub singular_ends: (bool, bool),
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 60,
            singular_ends: (false, false),
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be positive, got abs_tol = {}, rel_tol = {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::Domain("max_depth must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_singular_ends(mut self, left: bool, right: bool) -> Self {
        self.singular_ends = (left, right);
        self
    }
}

/// Bracket width target and iteration limit for [`find_root_monotone`].
#[derive(Debug, Clone, Copy)]
pub struct RootSpec {
    /// Bracket width at which the root is accepted.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootSpec {
    fn default() -> Self {
        RootSpec {
            tol: 1e-13,
            max_iter: 200,
        }
    }
}

impl RootSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!(
                "root tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

// 15-point Kronrod abscissae (positive half) with embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 evaluation over `[a, b]`: returns the Kronrod estimate and
/// the |K15 - G7| error estimate.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            return Err(Error::IntegrandNan { x });
        }
        Ok(v)
    };

    let f_center = eval(center)?;
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = eval(center - x)?;
        let f2 = eval(center + x)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    Ok((value, err))
}

struct Region {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: usize,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    let (v0, e0) = gauss_kronrod_15(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Region {
        a,
        b,
        value: v0,
        err: e0,
        depth: 0,
    });
    let mut total_value = v0;
    let mut total_err = e0;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_err <= tol {
            return Ok(total_value);
        }
        let worst = heap.pop().expect("heap holds at least one region");
        if worst.depth >= spec.max_depth || worst.b - worst.a <= f64::EPSILON * worst.b.abs().max(worst.a.abs()).max(1.0)
        {
            return Err(Error::QuadratureNoConvergence {
                estimate: total_value,
                error_bound: total_err,
                max_depth: spec.max_depth,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (vl, el) = gauss_kronrod_15(f, worst.a, mid)?;
        let (vr, er) = gauss_kronrod_15(f, mid, worst.b)?;
        total_value += vl + vr - worst.value;
        total_err += el + er - worst.err;
        heap.push(Region {
            a: worst.a,
            b: mid,
            value: vl,
            err: el,
            depth: worst.depth + 1,
        });
        heap.push(Region {
            a: mid,
            b: worst.b,
            value: vr,
            err: er,
            depth: worst.depth + 1,
        });
    }
}

/// Double-exponential rule on `[a, b]`. Nodes approach the endpoints
/// double-exponentially fast, so integrable endpoint singularities are
/// absorbed by the decaying weights. Nodes that round onto an endpoint
/// are skipped.
///
/// Accuracy floor: with only `f(x)` available, the mass within one ulp
/// of a singular endpoint is invisible, so a singularity `(b-x)^alpha`
/// limits attainable absolute error to roughly `ulp^(1+alpha)` (about
/// 3e-8 for alpha = -1/2). Callers that know the singularity
/// analytically should substitute it away and use the smooth path, as
/// the p-elliptic module does.
fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    const T_MAX: f64 = 4.3;

    // Accumulates w(t)*f(x(t)) for one node; returns None when the node
    // collapses onto an endpoint in f64.
    let node_term = |t: f64| -> Result<Option<f64>> {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = center + half * u.tanh();
        if x <= a || x >= b {
            return Ok(None);
        }
        let sech = 1.0 / u.cosh();
        let w = half * std::f64::consts::FRAC_PI_2 * t.cosh() * sech * sech;
        let v = f(x);
        if v.is_nan() {
            return Err(Error::IntegrandNan { x });
        }
        Ok(Some(w * v))
    };

    // Level 0: integer nodes with h = 1.
    let mut h = 1.0;
    let mut sum = node_term(0.0)?.unwrap_or(0.0);
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = (k as f64) * h;
        let mut dead = true;
        if let Some(term) = node_term(t)? {
            sum += term;
            dead = false;
        }
        if let Some(term) = node_term(-t)? {
            sum += term;
            dead = false;
        }
        if dead {
            break;
        }
        k += 1;
    }
    let mut integral = h * sum;

    let levels = spec.max_depth.min(14);
    for _ in 1..=levels {
        h *= 0.5;
        // New nodes sit at odd multiples of the refined h.
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = (k as f64) * h;
            let mut dead = true;
            if let Some(term) = node_term(t)? {
                sum += term;
                dead = false;
            }
            if let Some(term) = node_term(-t)? {
                sum += term;
                dead = false;
            }
            if dead && k > 2 {
                break;
            }
            k += 2;
        }
        let refined = h * sum;
        let delta = (refined - integral).abs();
        integral = refined;
        if delta <= spec.abs_tol.max(spec.rel_tol * integral.abs()) {
            return Ok(integral);
        }
    }
    Err(Error::QuadratureNoConvergence {
        estimate: integral,
        error_bound: f64::NAN,
        max_depth: spec.max_depth,
    })
}

/// Integrates `f` over `[a, b]` to within `max(abs_tol, rel_tol*|I|)`.
///
/// Integrable endpoint singularities must be flagged in
/// `spec.singular_ends`; flagged integrals are routed through the
/// double-exponential rule, everything else through adaptive
/// Gauss-Kronrod.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    spec.validate()?;
    if !(a <= b) {
        return Err(Error::Domain(format!(
            "integration bounds must satisfy a <= b, got a = {a}, b = {b}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if spec.singular_ends.0 || spec.singular_ends.1 {
        tanh_sinh(&f, a, b, spec)
    } else {
        adaptive_gk(&f, a, b, spec)
    }
}

/// Finds the root of a continuous, strictly monotone `f` on `[lo, hi]`.
///
/// False position with the Illinois modification: a sign-change bracket
/// is maintained at all times, and the retained endpoint's function
/// value is halved whenever the same side is kept twice, which shrinks
/// the bracket superlinearly from both sides. Steps that leave the
/// bracket fall back to bisection. Returns the bracket midpoint once
/// the bracket width drops below `spec.tol`.
pub fn find_root_monotone<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &RootSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(lo <= hi) {
        return Err(Error::Domain(format!(
            "bracket must satisfy lo <= hi, got lo = {lo}, hi = {hi}"
        )));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi });
    }

    let mut side = 0i8;
    for _ in 0..spec.max_iter {
        if b - a <= spec.tol {
            return Ok(0.5 * (a + b));
        }
        let fp = (fa * b - fb * a) / (fa - fb);
        let x = if fp.is_finite() && fp > a && fp < b {
            fp
        } else {
            0.5 * (a + b)
        };
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::RootIterationLimit {
        lo: a,
        hi: b,
        tol: spec.tol,
        max_iter: spec.max_iter,
    })
}
