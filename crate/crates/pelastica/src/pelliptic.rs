//! p-elliptic integrals and p-elliptic/p-hyperbolic functions.
//!
//! The incomplete integral of the first kind is
//! `F_{1,p}(x,q) = int_0^x |cos t|^{1-2/p} (1 - q^2 sin^2 t)^{-1/2} dt`
//! with `K_{1,p}(q) = F_{1,p}(pi/2, q)`; the second kind carries the
//! square root in the numerator. At `q = 1` the first-kind weight
//! becomes `|cos t|^{-2/p}`, which is integrable over a half period only
//! for `p > 2` (the degenerate regime).
//!
//! All integrands have at worst a power-law singularity `sin^a(psi)` at
//! the half-period endpoint (`psi` the colatitude `pi/2 - phi`). Those
//! tails are computed after the substitution `u = psi^(1+a)`, which maps
//! the singular factor to a smooth one; the same substitution makes the
//! amplitude inversion well conditioned where `d F / d phi` degenerates.

use crate::error::{Error, Result};
use crate::numerics::{find_root_monotone, integrate, QuadSpec, RootSpec};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::{Arc, LazyLock, Mutex};

/// Exponent of the p-bending energy, p in (1, infinity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PParam(f64);

impl PParam {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(PParam(p))
        } else {
            Err(Error::Domain(format!("p must be finite and > 1, got {p}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// True in the degenerate regime p > 2 (flat cores possible).
    #[inline]
    pub fn is_degenerate(self) -> bool {
        self.0 > 2.0
    }
}

/// Elliptic modulus q in [0, 1].
///
/// `q = 1` is admitted by the type; first-kind evaluations at `q = 1`
/// additionally require `p > 2` and are rejected per call otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus(f64);

impl Modulus {
    pub const ZERO: Modulus = Modulus(0.0);
    pub const ONE: Modulus = Modulus(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&q) {
            Ok(Modulus(q))
        } else {
            Err(Error::Domain(format!("modulus must lie in [0, 1], got {q}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_unit(self) -> bool {
        self.0 == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    First,
    Second,
}

/// Weight exponent `a` in the integrand `|cos|^a * g`.
fn weight_exponent(kind: Kind, p: f64, q: f64) -> f64 {
    match kind {
        // At q = 1 the sqrt in the denominator cancels one power of cos.
        Kind::First => {
            if q == 1.0 {
                -2.0 / p
            } else {
                1.0 - 2.0 / p
            }
        }
        // At q = 1 the sqrt in the numerator contributes one power of cos.
        Kind::Second => {
            if q == 1.0 {
                2.0 - 2.0 / p
            } else {
                1.0 - 2.0 / p
            }
        }
    }
}

#[inline]
fn g_factor(kind: Kind, q: f64, phi: f64) -> f64 {
    if q == 1.0 {
        return 1.0; // folded into the weight exponent
    }
    let s = phi.sin();
    let m = 1.0 - q * q * s * s;
    match kind {
        Kind::First => 1.0 / m.sqrt(),
        Kind::Second => m.sqrt(),
    }
}

/// `g` evaluated at colatitude `psi = pi/2 - phi`, with
/// `1 - q^2 cos^2 psi` expanded as `(1-q)(1+q) + q^2 sin^2 psi` to avoid
/// cancellation for moduli near 1.
#[inline]
fn g_factor_colat(kind: Kind, q: f64, psi: f64) -> f64 {
    if q == 1.0 {
        return 1.0;
    }
    let s = psi.sin();
    let m = (1.0 - q) * (1.0 + q) + q * q * s * s;
    match kind {
        Kind::First => 1.0 / m.sqrt(),
        Kind::Second => m.sqrt(),
    }
}

#[inline]
fn sinc_ratio(psi: f64) -> f64 {
    if psi.abs() < 1e-8 {
        1.0 - psi * psi / 6.0
    } else {
        psi.sin() / psi
    }
}

fn quad_spec() -> QuadSpec {
    QuadSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_depth: 60,
        singular_ends: (false, false),
    }
}

/// Integral over the colatitude tail `phi in [pi/2 - psi0, pi/2]`,
/// i.e. `int_0^psi0 sin^a(psi) g(pi/2 - psi) dpsi`, evaluated in the
/// variable `u = psi^(1+a)` where the integrand is smooth.
fn tail_integral(kind: Kind, p: f64, q: f64, psi0: f64) -> Result<f64> {
    if psi0 <= 0.0 {
        return Ok(0.0);
    }
    let a = weight_exponent(kind, p, q);
    let b = 1.0 + a;
    let u_max = psi0.powf(b);
    integrate(
        |u: f64| {
            let psi = u.powf(1.0 / b);
            sinc_ratio(psi).powf(a) * g_factor_colat(kind, q, psi) / b
        },
        0.0,
        u_max,
        &quad_spec(),
    )
}

/// `int_0^w |cos|^a g` for `w in [0, pi/2]`, split at `pi/4` so the
/// endpoint behavior is always handled by [`tail_integral`].
fn incomplete_reduced(kind: Kind, p: f64, q: f64, w: f64) -> Result<f64> {
    debug_assert!((0.0..=FRAC_PI_2 + 1e-9).contains(&w));
    let a = weight_exponent(kind, p, q);
    let direct = |hi: f64| -> Result<f64> {
        integrate(
            |phi: f64| phi.cos().powf(a) * g_factor(kind, q, phi),
            0.0,
            hi,
            &quad_spec(),
        )
    };
    if w <= FRAC_PI_4 {
        direct(w)
    } else {
        let head = direct(FRAC_PI_4)?;
        let tail_all = tail_integral(kind, p, q, FRAC_PI_4)?;
        let tail_missing = tail_integral(kind, p, q, FRAC_PI_2 - w)?;
        Ok(head + tail_all - tail_missing)
    }
}

static COMPLETE_CACHE: LazyLock<Mutex<HashMap<(Kind, u64, u64), f64>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static QUARTER_CACHE: LazyLock<Mutex<HashMap<(Kind, u64, u64), f64>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn complete(kind: Kind, p: f64, q: f64) -> Result<f64> {
    let key = (kind, p.to_bits(), q.to_bits());
    if let Some(&v) = COMPLETE_CACHE.lock().unwrap().get(&key) {
        return Ok(v);
    }
    let v = incomplete_reduced(kind, p, q, FRAC_PI_2)?;
    COMPLETE_CACHE.lock().unwrap().insert(key, v);
    Ok(v)
}

/// Memoized incomplete integral at `w = pi/4`, the split point of the
/// two inversion regimes.
fn quarter_value(kind: Kind, p: f64, q: f64) -> Result<f64> {
    let key = (kind, p.to_bits(), q.to_bits());
    if let Some(&v) = QUARTER_CACHE.lock().unwrap().get(&key) {
        return Ok(v);
    }
    let v = incomplete_reduced(kind, p, q, FRAC_PI_4)?;
    QUARTER_CACHE.lock().unwrap().insert(key, v);
    Ok(v)
}

/// Bracketed Newton for a strictly increasing function with analytic
/// derivative; steps leaving the bracket bisect instead. Converges on
/// the step size rather than the bracket width.
fn newton_bracketed<F: Fn(f64) -> Result<(f64, f64)>>(
    f_df: F,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
    tol: f64,
) -> Result<f64> {
    let mut x = guess.clamp(lo, hi);
    for _ in 0..80 {
        let (fx, dfx) = f_df(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x - fx / dfx;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= tol || hi - lo <= tol {
            return Ok(next);
        }
        x = next;
    }
    Ok(0.5 * (lo + hi))
}

fn check_first_kind_unit(p: PParam) -> Result<()> {
    if !p.is_degenerate() {
        Err(Error::Divergent)
    } else {
        Ok(())
    }
}

/// Complete p-elliptic integral of the first kind `K_{1,p}(q)`.
pub fn k1p(p: PParam, q: Modulus) -> Result<f64> {
    if q.is_unit() {
        check_first_kind_unit(p)?;
    }
    complete(Kind::First, p.get(), q.get())
}

/// Complete p-elliptic integral of the second kind `E_{1,p}(q)`,
/// finite for every q in [0, 1].
pub fn e1p(p: PParam, q: Modulus) -> Result<f64> {
    complete(Kind::Second, p.get(), q.get())
}

fn reduce_angle(x: f64) -> (i64, f64) {
    let n = (x / PI).round();
    (n as i64, x - n * PI)
}

fn incomplete_signed(kind: Kind, p: f64, q: f64, x_r: f64) -> Result<f64> {
    let v = incomplete_reduced(kind, p, q, x_r.abs().min(FRAC_PI_2))?;
    Ok(if x_r < 0.0 { -v } else { v })
}

/// Incomplete p-elliptic integral of the first kind `F_{1,p}(x, q)`.
///
/// For `q < 1` the value at arbitrary `x` is obtained by reduction to
/// `[-pi/2, pi/2]` plus the half-period shift `2n K_{1,p}(q)`.
pub fn f1p(p: PParam, x: f64, q: Modulus) -> Result<f64> {
    if q.is_unit() && !p.is_degenerate() {
        if x.abs() >= FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "F_{{1,p}}(x, 1) with p <= 2 requires |x| < pi/2, got x = {x}"
            )));
        }
        return integrate(
            |phi: f64| phi.cos().abs().powf(-2.0 / p.get()),
            0.0,
            x.abs(),
            &quad_spec(),
        )
        .map(|v| if x < 0.0 { -v } else { v });
    }
    let (n, x_r) = reduce_angle(x);
    let shift = if n == 0 {
        0.0
    } else {
        2.0 * n as f64 * complete(Kind::First, p.get(), q.get())?
    };
    Ok(shift + incomplete_signed(Kind::First, p.get(), q.get(), x_r)?)
}

/// Incomplete p-elliptic integral of the second kind `E_{1,p}(x, q)`.
pub fn e1p_inc(p: PParam, x: f64, q: Modulus) -> Result<f64> {
    let (n, x_r) = reduce_angle(x);
    let shift = if n == 0 {
        0.0
    } else {
        2.0 * n as f64 * complete(Kind::Second, p.get(), q.get())?
    };
    Ok(shift + incomplete_signed(Kind::Second, p.get(), q.get(), x_r)?)
}

/// `Q_p(q) = 2 E_{1,p}(q) / K_{1,p}(q) - 1`, strictly decreasing from
/// `Q_p(0) = 1`; at `q = 1` it equals `-1/(p-1)` for `p > 2` and is
/// divergent otherwise.
pub fn qp(p: PParam, q: Modulus) -> Result<f64> {
    if q.is_unit() {
        check_first_kind_unit(p)?;
    }
    let k = complete(Kind::First, p.get(), q.get())?;
    let e = complete(Kind::Second, p.get(), q.get())?;
    Ok(2.0 * e / k - 1.0)
}

/// Solves `Q_p(q) = -r` for the wavelike modulus `q in (0, 1)`.
///
/// For `p > 2` the range of `-Q_p` is `(-1, 1/(p-1))`, so ratios
/// `r >= 1/(p-1)` have no wavelike modulus and signal the flat-core
/// branch instead.
pub fn solve_modulus(p: PParam, r: f64) -> Result<Modulus> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::Domain(format!("ratio must lie in (0, 1), got {r}")));
    }
    let pv = p.get();
    if p.is_degenerate() && r >= 1.0 / (pv - 1.0) {
        return Err(Error::NoWavelikeModulus { p: pv, r });
    }
    let hi = if p.is_degenerate() { 1.0 } else { 1.0 - 1e-13 };
    let f = |q: f64| qp(p, Modulus(q)).expect("Q_p finite on the bracket") + r;
    if !p.is_degenerate() && f(hi) > 0.0 {
        // K_{1,p} diverges only logarithmically as q -> 1 for p <= 2, so
        // moduli for ratios this close to 1 are not representable in f64.
        return Err(Error::Domain(format!(
            "wavelike modulus for r = {r} at p = {pv} lies beyond f64 resolution of q = 1"
        )));
    }
    let spec = RootSpec {
        tol: 5e-15,
        max_iter: 300,
    };
    let q = find_root_monotone(f, 0.0, hi, &spec)?;
    let q = q.clamp(0.0, 1.0 - f64::EPSILON);
    // Q_p is only Hoelder continuous at q = 1, so ratios close enough to
    // the limit 1/(p-1) put the modulus within a few ulp of 1 where the
    // residual can no longer be driven down; reject those honestly.
    let residual = f(q);
    if residual.abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "modulus solving Q_p(q) = -{r} at p = {pv} lies too close to q = 1 for f64 \
             (best residual {residual:.2e})"
        )));
    }
    Ok(Modulus(q))
}

/// Amplitude reduced to a quarter period: `w = am in [0, pi/2]` together
/// with the colatitude `pi/2 - w` computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReducedAmplitude {
    pub w: f64,
    pub colat: f64,
}

/// Inverts `x = int_0^w |cos|^a g` for `w in [0, pi/2]` given
/// `0 <= x_abs <= K`. Near the quarter period the inversion runs in the
/// substituted variable `u`, where the integrand is smooth and bounded.
fn am_reduced(kind: Kind, p: f64, q: f64, x_abs: f64, k: f64) -> Result<ReducedAmplitude> {
    debug_assert!(kind == Kind::First);
    if x_abs <= 0.0 {
        return Ok(ReducedAmplitude {
            w: 0.0,
            colat: FRAC_PI_2,
        });
    }
    // Inputs differing from K only by accumulated rounding are the
    // quarter period itself.
    if x_abs >= k * (1.0 - 1e-14) {
        return Ok(ReducedAmplitude {
            w: FRAC_PI_2,
            colat: 0.0,
        });
    }
    let f_quarter = quarter_value(kind, p, q)?;
    let a = weight_exponent(kind, p, q);
    if x_abs <= f_quarter {
        // dF/dw is the integrand itself.
        let w = newton_bracketed(
            |w| {
                let f = incomplete_reduced(kind, p, q, w)? - x_abs;
                let df = w.cos().powf(a) * g_factor(kind, q, w);
                Ok((f, df))
            },
            0.0,
            FRAC_PI_4,
            x_abs / f_quarter * FRAC_PI_4,
            1e-14,
        )?;
        Ok(ReducedAmplitude {
            w,
            colat: FRAC_PI_2 - w,
        })
    } else {
        // Invert the tail in u = psi^(1+a), where the derivative is the
        // smooth substituted integrand.
        let b = 1.0 + a;
        let target = k - x_abs;
        let u_max = FRAC_PI_4.powf(b);
        let u = newton_bracketed(
            |u: f64| {
                let psi = u.powf(1.0 / b);
                let f = tail_integral(kind, p, q, psi)? - target;
                let df = sinc_ratio(psi).powf(a) * g_factor_colat(kind, q, psi) / b;
                Ok((f, df))
            },
            0.0,
            u_max,
            target / (k - f_quarter) * u_max,
            1e-15,
        )?;
        let colat = u.powf(1.0 / b);
        Ok(ReducedAmplitude {
            w: FRAC_PI_2 - colat,
            colat,
        })
    }
}

/// Range reduction `x = x_r + 2mK` with `x_r in [-K, K]` plus the
/// reduced amplitude of `|x_r|`.
pub(crate) fn am_parts(p: PParam, x: f64, q: Modulus) -> Result<(i64, f64, ReducedAmplitude)> {
    if q.is_unit() {
        check_first_kind_unit(p)?;
    }
    let k = complete(Kind::First, p.get(), q.get())?;
    if q.is_unit() && x.abs() >= k * (1.0 + 1e-14) {
        return Err(Error::Domain(format!(
            "am_{{1,p}}(x, 1) requires |x| < K_p(1) = {k}, got x = {x}"
        )));
    }
    let m = (x / (2.0 * k)).round();
    let x_r = x - 2.0 * m * k;
    let red = am_reduced(Kind::First, p.get(), q.get(), x_r.abs(), k)?;
    Ok((m as i64, x_r, red))
}

/// Amplitude function `am_{1,p}(x, q)`: the inverse of `F_{1,p}` in its
/// upper limit, extended to the line by `am(x + 2nK) = am(x) + n pi`.
pub fn am1p(p: PParam, x: f64, q: Modulus) -> Result<f64> {
    let (m, x_r, red) = am_parts(p, x, q)?;
    Ok(x_r.signum() * red.w + m as f64 * PI)
}

/// p-elliptic sine `sn_p = sin am_{1,p}`.
pub fn snp(p: PParam, x: f64, q: Modulus) -> Result<f64> {
    am1p(p, x, q).map(f64::sin)
}

/// p-elliptic cosine `cn_p = |cos am|^{2/p - 1} cos am`, evaluated as
/// `sign(cos am) * |cos am|^{2/p}` from the exact colatitude so that the
/// Hoelder-continuous zeros at odd multiples of `K_{1,p}(q)` come out
/// exact.
pub fn cnp(p: PParam, x: f64, q: Modulus) -> Result<f64> {
    let (m, x_r, red) = am_parts(p, x, q)?;
    let _ = x_r;
    let magnitude = red.colat.sin().powf(2.0 / p.get());
    Ok(if m % 2 == 0 { magnitude } else { -magnitude })
}

/// p-hyperbolic secant: `cn_p(x, 1)` inside `(-K_p(1), K_p(1))`, zero
/// outside. Defined for p > 2.
pub fn sechp(p: PParam, x: f64) -> Result<f64> {
    check_first_kind_unit(p)?;
    let k = complete(Kind::First, p.get(), 1.0)?;
    if x.abs() >= k {
        return Ok(0.0);
    }
    let red = am_reduced(Kind::First, p.get(), 1.0, x.abs(), k)?;
    Ok(red.colat.sin().powf(2.0 / p.get()))
}

/// Cumulative table for `tanh_p` on `[0, K_p(1)]`, interpolated with a
/// cubic Hermite that uses the exact derivative `(sech_p)^p = cos^2(am)`
/// at every node.
struct TanhpTable {
    xs: Vec<f64>,
    ts: Vec<f64>,
    ds: Vec<f64>,
    k_total: f64,
    e_total: f64,
}

impl TanhpTable {
    fn build(p: f64, n: usize) -> Result<TanhpTable> {
        let k_total = complete(Kind::First, p, 1.0)?;
        let e_total = complete(Kind::Second, p, 1.0)?;
        let mut xs = Vec::with_capacity(n + 50);
        let mut ts = Vec::with_capacity(n + 50);
        let mut ds = Vec::with_capacity(n + 50);
        let mut push_colat = |psi: f64, x: f64, t: f64| {
            let c = psi.sin(); // cos phi
            xs.push(x);
            ts.push(t);
            ds.push(c * c);
        };
        for j in 0..n {
            let phi = FRAC_PI_2 * j as f64 / n as f64;
            let (x, t) = if j == 0 {
                (0.0, 0.0)
            } else {
                (
                    incomplete_reduced(Kind::First, p, 1.0, phi)?,
                    incomplete_reduced(Kind::Second, p, 1.0, phi)?,
                )
            };
            push_colat(FRAC_PI_2 - phi, x, t);
        }
        // The last uniform step covers a wide x-range because dx/dphi
        // blows up at the quarter period; geometrically shrinking
        // colatitudes keep the interpolation error at the level of the
        // local variation of tanh_p there.
        let mut psi = FRAC_PI_2 / n as f64;
        for _ in 0..40 {
            psi *= 0.5;
            let x = k_total - tail_integral(Kind::First, p, 1.0, psi)?;
            let t = e_total - tail_integral(Kind::Second, p, 1.0, psi)?;
            push_colat(psi, x, t);
            if k_total - x < 1e-13 * k_total {
                break;
            }
        }
        push_colat(0.0, k_total, e_total);

        // Fritsch-Carlson limiting on the exact derivatives keeps the
        // cubic Hermite monotone where the data is nearly flat.
        let last = xs.len() - 1;
        for j in 0..last {
            let slope = (ts[j + 1] - ts[j]) / (xs[j + 1] - xs[j]);
            let cap = 3.0 * slope.max(0.0);
            if ds[j] > cap {
                ds[j] = cap;
            }
            if ds[j + 1] > cap {
                ds[j + 1] = cap;
            }
        }
        Ok(TanhpTable {
            xs,
            ts,
            ds,
            k_total,
            e_total,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        let xa = x.abs();
        if xa >= self.k_total {
            return self.e_total.copysign(x);
        }
        let j = match self
            .xs
            .binary_search_by(|probe| probe.total_cmp(&xa))
        {
            Ok(j) => return self.ts[j].copysign(x),
            Err(j) => j - 1,
        };
        let h = self.xs[j + 1] - self.xs[j];
        let t = (xa - self.xs[j]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * self.ts[j]
            + (t3 - 2.0 * t2 + t) * h * self.ds[j]
            + (-2.0 * t3 + 3.0 * t2) * self.ts[j + 1]
            + (t3 - t2) * h * self.ds[j + 1];
        v.copysign(x)
    }

    /// Cross-check of the cumulative table against directly computed
    /// incomplete integrals at off-node points.
    fn max_probe_error(&self, p: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 1..8 {
            let phi = FRAC_PI_2 * (i as f64 - 0.37) / 7.0;
            let x = incomplete_reduced(Kind::First, p, 1.0, phi)?;
            let t = incomplete_reduced(Kind::Second, p, 1.0, phi)?;
            worst = worst.max((self.eval(x) - t).abs());
        }
        Ok(worst)
    }
}

static TANHP_CACHE: LazyLock<Mutex<HashMap<u64, Arc<TanhpTable>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn tanhp_table(p: f64) -> Result<Arc<TanhpTable>> {
    if let Some(t) = TANHP_CACHE.lock().unwrap().get(&p.to_bits()) {
        return Ok(t.clone());
    }
    let mut n = 2048;
    let table = loop {
        let table = TanhpTable::build(p, n)?;
        if table.max_probe_error(p)? <= 1e-10 || n >= 16384 {
            break table;
        }
        n *= 2;
    };
    let table = Arc::new(table);
    TANHP_CACHE
        .lock()
        .unwrap()
        .insert(p.to_bits(), table.clone());
    Ok(table)
}

/// p-hyperbolic tangent `tanh_p(x) = int_0^x (sech_p t)^p dt`; odd,
/// nondecreasing, constant (`= +-E_{1,p}(1)`) outside `[-K_p(1), K_p(1)]`.
/// Defined for p > 2.
pub fn tanhp(p: PParam, x: f64) -> Result<f64> {
    check_first_kind_unit(p)?;
    Ok(tanhp_table(p.get())?.eval(x))
}

/// `int_0^{K_{1,p}(q)} |cn_p(s, q)|^p ds`, computed in the amplitude
/// variable where the integrand is `|cos|^{3 - 2/p} g`; equals
/// `E_{1,p}(q)/q^2 + (1 - 1/q^2) K_{1,p}(q)` for q in (0, 1].
pub fn cnp_power_integral(p: PParam, q: Modulus) -> Result<f64> {
    if q.is_unit() {
        check_first_kind_unit(p)?;
        // |cn_p(s,1)|^p ds = cos^2(am) * |cos am|^{-2/p} d(am)
        return complete(Kind::Second, p.get(), 1.0);
    }
    let pv = p.get();
    let qv = q.get();
    integrate(
        |phi: f64| phi.cos().powf(3.0 - 2.0 / pv) / (1.0 - qv * qv * phi.sin() * phi.sin()).sqrt(),
        0.0,
        FRAC_PI_2,
        &quad_spec(),
    )
}
