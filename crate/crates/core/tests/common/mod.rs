//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numerics: the oracles are built
//! from direct quadrature or brute-force summation.

#![allow(dead_code)]

use std::f64::consts::PI;

use holoris::geometry::{make_dipole_array, ArrayGeometry};
use num_complex::Complex64;
use quadrature::double_exponential;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const ETA0: f64 = 120.0 * PI;

/// Double-exponential quadrature over `[a, b]`, split into `pieces` panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            double_exponential::integrate(&f, lo, lo + h, 1e-14).integral
        })
        .sum()
}

fn panels(x: f64) -> usize {
    ((x.abs() / PI).ceil() as usize).max(1)
}

pub fn si_oracle(x: f64) -> f64 {
    integrate(
        |t| if t == 0.0 { 1.0 } else { t.sin() / t },
        0.0,
        x,
        panels(x),
    )
}

pub fn ci_oracle(x: f64) -> f64 {
    let reg = integrate(
        |t| if t == 0.0 { 0.0 } else { (t.cos() - 1.0) / t },
        0.0,
        x,
        panels(x),
    );
    EULER_GAMMA + x.ln() + reg
}

/// Mutual impedance of two parallel half-wave dipoles by the induced-EMF
/// integral: the near-zone field of a sinusoidal filament integrated
/// against the current of the second filament.
pub fn dipole_oracle(dh: f64, dv: f64, wavelength: f64) -> Complex64 {
    let beta = 2.0 * PI / wavelength;
    let half = wavelength / 4.0;
    let ez = |z: f64| {
        let r1 = dh.hypot(z - half);
        let r2 = dh.hypot(z + half);
        let f = Complex64::from_polar(1.0 / r1, -beta * r1)
            + Complex64::from_polar(1.0 / r2, -beta * r2);
        f * Complex64::new(0.0, -ETA0 / (4.0 * PI))
    };
    let integrand = |zp: f64| ez(dv + zp) * (beta * (half - zp.abs())).sin();
    let re = integrate(|t| integrand(t).re, -half, 0.0, 4)
        + integrate(|t| integrand(t).re, 0.0, half, 4);
    let im = integrate(|t| integrand(t).im, -half, 0.0, 4)
        + integrate(|t| integrand(t).im, 0.0, half, 4);
    -Complex64::new(re, im)
}

/// Correlation between two points in the xoz plane by 2-D quadrature of the
/// plane-wave expansion with density `sinθ/2π` over `φ, θ ∈ [0, π]`.
pub fn correlation_oracle(dx: f64, dz: f64, wavelength: f64) -> Complex64 {
    let kappa = 2.0 * PI / wavelength;
    let inner = |theta: f64, part: fn(f64) -> f64| {
        integrate(
            |phi| part(kappa * (theta.sin() * phi.cos() * dx + theta.cos() * dz)),
            0.0,
            PI,
            4,
        ) * theta.sin()
            / (2.0 * PI)
    };
    let re = integrate(|t| inner(t, f64::cos), 0.0, PI, 4);
    let im = integrate(|t| inner(t, f64::sin), 0.0, PI, 4);
    Complex64::new(re, im)
}

/// Brute-force grid samples of the discrete spectrum, indexed `[t][s]`.
pub fn spectrum_oracle(
    nx: usize,
    nz: usize,
    step_x: f64,
    step_z: f64,
    wavelength: f64,
) -> Vec<Vec<Complex64>> {
    let w = |n: usize, t: usize| (2.0 * t as f64 - (n as f64 - 1.0)) * PI / n as f64;
    let n = (nx * nz) as f64;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); nz]; nx];
    for (t, row) in out.iter_mut().enumerate() {
        for (s, cell) in row.iter_mut().enumerate() {
            let (wx, wz) = (w(nx, t), w(nz, s));
            let mut acc = Complex64::new(0.0, 0.0);
            for l in -(nx as i64 - 1)..nx as i64 {
                for m in -(nz as i64 - 1)..nz as i64 {
                    let dist = ((l as f64 * step_x).powi(2) + (m as f64 * step_z).powi(2)).sqrt();
                    let arg = 2.0 * dist / wavelength;
                    let b = if arg == 0.0 {
                        1.0
                    } else {
                        (PI * arg).sin() / (PI * arg)
                    };
                    acc += Complex64::from_polar(b, -(l as f64 * wx + m as f64 * wz));
                }
            }
            *cell = acc / n;
        }
    }
    out
}

/// The 4λ-wide array of eight half-wave-dipole rows separated by λ/50.
pub fn dipole_array(dx: f64) -> ArrayGeometry {
    make_dipole_array(4.0, dx, 8, 0.02, 1.0).unwrap()
}

pub fn zc(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
