//! Bessel functions of the first kind, integer order, real argument.
//!
//! Evaluation regimes (all thresholds in the argument `x`):
//!
//! | regime | rule |
//! |---|---|
//! | `x <= SERIES_MAX_X` | ascending power series, per order |
//! | `x >= ASYMPTOTIC_MIN_X` and `n_max + 1 < x` | Hankel asymptotic expansion for `J_0`, `J_1`, then upward recurrence |
//! | otherwise | Miller downward recurrence normalized by `J_0 + 2 sum J_2k = 1` |

use crate::error::{Error, Result};

const SERIES_MAX_X: f64 = 2.0;
const ASYMPTOTIC_MIN_X: f64 = 25.0;

/// `(J_n(x), J_n'(x))`.
pub fn bessel_j(n: i32, x: f64) -> Result<(f64, f64)> {
    if n < 0 {
        return Err(Error::Domain(format!("Bessel order must be >= 0, got {n}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    let n = n as usize;
    let js = bessel_j_orders(n + 1, x);
    let jn = js[n];
    let djn = if n == 0 { -js[1] } else { 0.5 * (js[n - 1] - js[n + 1]) };
    Ok((jn, djn))
}

/// `[J_0(x), ..., J_{n_max}(x)]` for finite `x >= 0`.
pub fn bessel_j_orders(n_max: usize, x: f64) -> Vec<f64> {
    debug_assert!(x >= 0.0 && x.is_finite());
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    if x <= SERIES_MAX_X {
        return (0..=n_max).map(|n| series(n, x)).collect();
    }
    if x >= ASYMPTOTIC_MIN_X && ((n_max + 1) as f64) < x {
        return asymptotic_upward(n_max, x);
    }
    miller(n_max, x)
}

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for j in 1..=n {
        term *= half / j as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel expansion of `J_nu(x)` for `nu` in {0, 1}.
fn hankel(nu: usize, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..120 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag > prev {
            break;
        }
        prev = mag;
        // k odd feeds Q, k even feeds P, with alternating signs per pair
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-18 {
            break;
        }
    }
    let chi = x - (0.5 * nu as f64 + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn asymptotic_upward(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(hankel(0, x));
    if n_max >= 1 {
        out.push(hankel(1, x));
    }
    for k in 1..n_max {
        let next = (2.0 * k as f64 / x) * out[k] - out[k - 1];
        out.push(next);
    }
    out
}

fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let top = n_max.max(x.ceil() as usize);
    let start = 2 * ((top + 20 + (160.0 * top as f64).sqrt() as usize) / 2);
    let mut out = vec![0.0; n_max + 1];
    let mut jp1 = 0.0;
    let mut j = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let jm1 = (2.0 * k as f64 / x) * j - jp1;
        jp1 = j;
        j = jm1;
        let order = k - 1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
        if order <= n_max {
            out[order] = j;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
