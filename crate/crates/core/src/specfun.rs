//! Cylindrical Bessel functions of the first kind, orders 0 and 1.
//!
//! Three regimes keep the absolute error near machine precision on `[0, 50]`:
//!
//! * `|x| <= 8`: ascending power series (largest term ~ 1e2, so cancellation is
//!   harmless);
//! * `8 < |x| < 25`: Miller backward recurrence normalised by
//!   `J0 + 2 (J2 + J4 + ...) = 1`;
//! * `|x| >= 25`: Hankel amplitude/phase expansion summed up to its smallest
//!   term (which is below `e^-50`).

use crate::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_MAX: f64 = 8.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// `J0(x)`, rejecting non-finite input.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(j0(x))
}

/// `J1(x)`, rejecting non-finite input.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(j1(x))
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Bessel argument must be finite, got {x}"
        )))
    }
}

/// Unchecked `J0`; NaN propagates.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_MAX {
        series(0, ax)
    } else if ax < ASYMPTOTIC_MIN {
        miller(ax)[0]
    } else {
        hankel(0, ax)
    }
}

/// Unchecked `J1`; NaN propagates.
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_MAX {
        series(1, ax)
    } else if ax < ASYMPTOTIC_MIN {
        miller(ax)[1]
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J1(x) / x`, continuous through `x = 0` where it equals `1/2`.
pub fn j1_over_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_MAX {
        // sum_k (-1)^k (x/2)^{2k} / (2 k! (k+1)!)
        let q = 0.25 * ax * ax;
        let mut term = 0.5;
        let mut sum = term;
        for k in 1..60 {
            term *= -q / (k as f64 * (k + 1) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        j1(ax) / ax
    }
}

/// `J2(x)` from the same regime machinery; used to check the three-term
/// recurrence, not by the kernels.
#[cfg(test)]
pub(crate) fn j2(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_MAX {
        series(2, ax)
    } else if ax < ASYMPTOTIC_MIN {
        miller(ax)[2]
    } else {
        hankel(2, ax)
    }
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let mut sum = term;
    for k in 1..80 {
        term *= -q / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> [f64; 3] {
    let mut start = (1.5 * x + 40.0) as usize;
    start += start % 2;
    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-30; // j_k
    let mut out = [0.0; 3];
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds j_{k-1}
        let idx = k - 1;
        if idx < 3 {
            out[idx] = cur;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            for v in &mut out {
                *v *= s;
            }
        }
    }
    norm += cur;
    [out[0] / norm, out[1] / norm, out[2] / norm]
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k(nu) / x^k
    let mut last = f64::INFINITY;
    for k in 1..200u32 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (8.0 * k as f64 * x);
        let mag = a.abs();
        if mag > last {
            break;
        }
        last = mag;
        // k odd feeds Q with sign (-1)^((k-1)/2); k even feeds P with (-1)^(k/2)
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * a;
        } else {
            p += sign * a;
        }
        if mag < 1e-17 {
            break;
        }
    }
    // chi = x - pi/4 - order*pi/2; expand with exact 1/sqrt2 factors
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = match order % 4 {
        0 => (c + s, s - c),
        1 => (s - c, -s - c),
        2 => (-c - s, c - s),
        _ => (c - s, c + s),
    };
    let (cos_chi, sin_chi) = (cos_chi * FRAC_1_SQRT_2, sin_chi * FRAC_1_SQRT_2);
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
