//! Scalar special functions used by the closed forms: the principal branch
//! of the Lambert W function and the gamma function.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// Branch point of W₀, `-1/e`.
pub const BRANCH_POINT: f64 = -1.0 / E;

const MAX_HALLEY_STEPS: usize = 64;

/// Principal branch W₀ of the Lambert W function: the `w ≥ -1` solving `w·e^w = x`.
///
/// Halley iteration from a piecewise initial guess. For `x > e` the iteration
/// runs on `w + ln w = ln x`, which cannot overflow.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() || x < BRANCH_POINT {
        return Err(Error::Domain {
            function: "lambert_w0",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x > E {
        return Ok(w0_from_log(x.ln()));
    }

    let mut w = if x < -0.25 {
        // series about the branch point
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x.abs() < 0.25 {
        x * (1.0 - x * (1.0 - x * (1.5 - 8.0 / 3.0 * x)))
    } else {
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    };

    for _ in 0..MAX_HALLEY_STEPS {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

/// `W₀(e^t)` for any finite `t`, without forming `e^t` when it would overflow.
pub fn lambert_w0_exp(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain {
            function: "lambert_w0_exp",
            value: t,
        });
    }
    if t <= 1.0 {
        lambert_w0(t.exp())
    } else {
        Ok(w0_from_log(t))
    }
}

/// Solves `w + ln w = t` for `t > 1` (so `w > 1`) by Halley steps.
fn w0_from_log(t: f64) -> f64 {
    let mut w = if t < 3.0 {
        // W(e^t) ≈ 1 + (t-1)/2 near t = 1
        0.5 * (1.0 + t)
    } else {
        let lt = t.ln();
        t - lt + lt / t
    };
    for _ in 0..MAX_HALLEY_STEPS {
        let g = w + w.ln() - t;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let step = g / g1 / (1.0 - g * g2 / (2.0 * g1 * g1));
        w -= step;
        if step.abs() <= 2.0 * f64::EPSILON * w {
            break;
        }
    }
    w
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain {
            function: "gamma",
            value: x,
        });
    }
    if x == 1.0 || x == 2.0 {
        return Ok(1.0);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return Ok(PI / ((PI * x).sin() * lanczos(1.0 - x)));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}
