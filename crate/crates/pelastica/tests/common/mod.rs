//! Independent oracles shared by the integration tests.
//!
//! Everything here is implemented from scratch (Lanczos gamma, AGM
//! elliptic integrals, Landen-descent Jacobi amplitude, midpoint
//! quadrature) so the toolkit's own quadrature and inversion paths are
//! never in the loop when expected values are produced.

#![allow(dead_code)]

/// Lanczos approximation (g = 7, 9 coefficients), accurate to about
/// 1e-13 relative on the real axis away from the poles.
pub fn gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEF[0];
        for (i, c) in COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// `int_0^{pi/2} cos^a = (sqrt(pi)/2) Gamma((a+1)/2) / Gamma(a/2 + 1)`.
pub fn cos_power_integral(a: f64) -> f64 {
    std::f64::consts::PI.sqrt() / 2.0 * gamma((a + 1.0) / 2.0) / gamma(a / 2.0 + 1.0)
}

/// Beta closed form for `K_{1,p}(0)`.
pub fn k1p_zero_oracle(p: f64) -> f64 {
    cos_power_integral(1.0 - 2.0 / p)
}

/// Beta closed form for `K_p(1)`, p > 2.
pub fn kp_one_oracle(p: f64) -> f64 {
    cos_power_integral(-2.0 / p)
}

/// Beta closed form for `E_{1,p}(1)`.
pub fn e1p_one_oracle(p: f64) -> f64 {
    cos_power_integral(2.0 - 2.0 / p)
}

/// Arithmetic-geometric mean.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a.abs().max(b.abs()) {
            break;
        }
        let (a1, b1) = (0.5 * (a + b), (a * b).sqrt());
        a = a1;
        b = b1;
    }
    0.5 * (a + b)
}

/// Classical complete elliptic integral K(q), modulus convention
/// `K(q) = int_0^{pi/2} (1 - q^2 sin^2)^{-1/2}`.
pub fn classical_k(q: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 / agm(1.0, (1.0 - q * q).sqrt())
}

/// Classical complete elliptic integral E(q) from the AGM c-sequence:
/// `E = K (1 - sum 2^{n-1} c_n^2)`.
pub fn classical_e(q: f64) -> f64 {
    let mut a = 1.0f64;
    let mut b = (1.0 - q * q).sqrt();
    let mut c = q;
    let mut sum = 0.5 * c * c;
    let mut pow2 = 0.5;
    for _ in 0..64 {
        if c.abs() < 1e-17 {
            break;
        }
        let (a1, b1, c1) = (0.5 * (a + b), (a * b).sqrt(), 0.5 * (a - b));
        a = a1;
        b = b1;
        c = c1;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    classical_k(q) * (1.0 - sum)
}

/// Classical Jacobi amplitude by descending Landen transformation.
pub fn classical_am(u: f64, q: f64) -> f64 {
    if q == 0.0 {
        return u;
    }
    let mut a = vec![1.0f64];
    let mut c = vec![q];
    let mut b = (1.0 - q * q).sqrt();
    // c stagnates at rounding level instead of reaching zero, so the
    // break threshold sits above one ulp.
    for _ in 0..40 {
        let an = a.last().copied().unwrap();
        if c.last().copied().unwrap().abs() < 1e-15 * an {
            break;
        }
        let a1 = 0.5 * (an + b);
        let c1 = 0.5 * (an - b);
        let b1 = (an * b).sqrt();
        a.push(a1);
        c.push(c1);
        b = b1;
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    // phi_{k-1} = (phi_k + asin(c_k/a_k sin phi_k)) / 2
    for k in (1..=n).rev() {
        let s = (c[k] / a[k] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    phi
}

/// Classical Jacobi cn via the amplitude.
pub fn classical_cn(u: f64, q: f64) -> f64 {
    classical_am(u, q).cos()
}

/// Classical Jacobi sn via the amplitude.
pub fn classical_sn(u: f64, q: f64) -> f64 {
    classical_am(u, q).sin()
}

/// Composite midpoint rule, independent of the crate's quadrature.
pub fn midpoint_quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Central finite difference of `f` at `x`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
