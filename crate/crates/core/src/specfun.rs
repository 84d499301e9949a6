//! Scalar special functions used by the correlation kernel and the dipole
//! mutual-impedance closed forms.
//!
//! `Si` and `Ci` use their Maclaurin series below [`SERIES_LIMIT`] and the
//! continued fraction of `E1(ix)` above it (the auxiliary functions `f`, `g`
//! in convergent form).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Switch-over point between the power series and the continued fraction.
pub const SERIES_LIMIT: f64 = 6.0;

const CF_MAX_ITER: usize = 200;
const CF_TINY: f64 = 1e-300;

/// Normalized sinc, `sin(πx)/(πx)`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("sinc argument must be finite, got {x}")));
    }
    Ok(sinc_raw(x))
}

#[inline]
pub(crate) fn sinc_raw(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Sine integral `Si(x) = ∫₀ˣ sin t / t dt`.
pub fn sine_integral(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("Si argument must be finite, got {x}")));
    }
    Ok(si_raw(x))
}

/// Cosine integral `Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1)/t dt` for `x > 0`.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain(format!(
            "Ci requires a finite positive argument, got {x}"
        )));
    }
    Ok(ci_raw(x))
}

/// Rectangle function: 1 on `|x| ≤ 1/2` (boundary included), else 0.
pub fn rect(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("rect argument must be finite, got {x}")));
    }
    Ok(if x.abs() <= 0.5 { 1.0 } else { 0.0 })
}

pub(crate) fn si_raw(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        si_series(ax)
    } else {
        let (_, si) = cisi_continued_fraction(ax);
        si
    };
    v.copysign(x)
}

pub(crate) fn ci_raw(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < SERIES_LIMIT {
        EULER_GAMMA + x.ln() - cin_series(x)
    } else {
        cisi_continued_fraction(x).0
    }
}

/// Entire cosine integral `Cin(x) = ∫₀ˣ (1 − cos t)/t dt = γ + ln x − Ci(x)`.
///
/// Finite at the origin, which lets the echelon-dipole formulas take the
/// collinear limit without a logarithmic singularity.
pub(crate) fn cin_raw(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        cin_series(ax)
    } else {
        EULER_GAMMA + ax.ln() - cisi_continued_fraction(ax).0
    }
}

fn si_series(x: f64) -> f64 {
    // Σ (−1)^k x^(2k+1) / ((2k+1)(2k+1)!)
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..64 {
        let n = (2 * k) as f64;
        term *= -x2 / (n * (n + 1.0));
        let add = term / (n + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn cin_series(x: f64) -> f64 {
    // Σ_{k≥1} (−1)^(k+1) x^(2k) / ((2k)(2k)!)
    let x2 = x * x;
    let mut term = x2 / 2.0;
    let mut sum = term / 2.0;
    for k in 2..64 {
        let n = (2 * k) as f64;
        term *= -x2 / ((n - 1.0) * n);
        let add = term / n;
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Modified Lentz evaluation of `E1(ix)`; returns `(Ci(x), Si(x))` for `x > 0`.
fn cisi_continued_fraction(x: f64) -> (f64, f64) {
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / CF_TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..CF_MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(x.cos(), -x.sin());
    (-h.re, FRAC_PI_2 + h.im)
}
