//! Native special-function kernels: erf, Γ and ψ (digamma).

use std::f64::consts::PI;

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Error function, absolute accuracy about 1e-15.
pub fn erf_kernel(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite { x });
    }
    let ax = x.abs();
    let value = if ax < 3.0 {
        erf_series(ax)
    } else if ax < 6.0 {
        1.0 - erfc_continued_fraction(ax)
    } else {
        // erfc(6) < 2.2e-17, below half an ulp of 1
        1.0
    };
    Ok(value.copysign(x))
}

pub fn erf_prime(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite { x });
    }
    Ok(TWO_OVER_SQRT_PI * (-x * x).exp())
}

// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * (-x2).exp() * sum
}

// Modified Lentz evaluation of erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
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

/// Γ(x) for x > 0 via the Lanczos approximation (g = 7, nine coefficients).
pub fn gamma_kernel(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain { x, function: "gamma".into() });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { x });
    }
    let value = if x < 0.5 {
        // reflection, 1 - x lies in (0.5, 1)
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        lanczos(x)
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { x })
    }
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so t^(z+1/2) does not overflow before exp(-t) scales it back
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * a
}

/// Digamma ψ(x) for x > 0: upward recurrence to x ≥ 10, then the asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain { x, function: "digamma".into() });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { x });
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < 10.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let r = 1.0 / (z * z);
    // Bernoulli terms B_2n / (2n z^2n), n = 1..7
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    Ok(shift + z.ln() - 0.5 / z - tail)
}

/// Γ'(x) = Γ(x)·ψ(x).
pub fn gamma_prime(x: f64) -> Result<f64> {
    Ok(gamma_kernel(x)? * digamma(x)?)
}
