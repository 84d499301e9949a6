//! Wavenumber-domain power spectrum of the truncated, sampled sinc kernel.
//!
//! The generator bi-sequence `b[l, m]` is transformed on the odd-offset
//! grid `ω_t = (2t − (n − 1))π/n`, which maps to wavenumbers via `k = ω/s`
//! with `s` the sample step of the sequence.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::ArrayGeometry;
use crate::specfun::{rect, sinc_raw};
use crate::{CMatrix, Complex64};

/// Imaginary residue tolerated before the transform is declared inconsistent.
const IMAG_RESIDUE_TOL: f64 = 1e-6;

/// Distance step used to sample the kernel into the generator sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStep {
    /// `L/n`, with `L` the lattice span along the axis.
    #[default]
    SpanOverCount,
    /// The physical element spacing `L/(n − 1)`.
    ElementSpacing,
}

/// Zero-centered bi-sequence `b[l, m]`, `|l| < nx`, `|m| < nz`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSequence {
    nx: usize,
    nz: usize,
    step_x: f64,
    step_z: f64,
    values: DMatrix<f64>,
}

impl GeneratorSequence {
    pub fn half_extents(&self) -> (usize, usize) {
        (self.nx - 1, self.nz - 1)
    }

    pub fn steps(&self) -> (f64, f64) {
        (self.step_x, self.step_z)
    }

    /// `b[l, m]`; `None` outside the truncation window.
    pub fn get(&self, l: isize, m: isize) -> Option<f64> {
        let hx = self.nx as isize - 1;
        let hz = self.nz as isize - 1;
        if l.abs() > hx || m.abs() > hz {
            return None;
        }
        Some(self.values[((l + hx) as usize, (m + hz) as usize)])
    }

    /// Values as a `(2nx − 1) × (2nz − 1)` array, `l` along rows.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// `Σ |b[l, m]|` over the window.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    fn element_count(&self) -> usize {
        self.nx * self.nz
    }
}

/// Generator sequence sampled at `L/n`.
pub fn generator_sequence(geom: &ArrayGeometry) -> GeneratorSequence {
    generator_sequence_with_step(geom, SampleStep::SpanOverCount)
}

pub fn generator_sequence_with_step(geom: &ArrayGeometry, step: SampleStep) -> GeneratorSequence {
    let (nx, nz) = (geom.nx(), geom.nz());
    let (step_x, step_z) = match step {
        SampleStep::SpanOverCount => (geom.span_x() / nx as f64, geom.span_z() / nz as f64),
        SampleStep::ElementSpacing => (geom.dx(), geom.dz()),
    };
    let lambda = geom.wavelength();
    let values = DMatrix::from_fn(2 * nx - 1, 2 * nz - 1, |r, c| {
        let l = r as f64 - (nx - 1) as f64;
        let m = c as f64 - (nz - 1) as f64;
        sinc_raw(2.0 * (l * step_x).hypot(m * step_z) / lambda)
    });
    GeneratorSequence {
        nx,
        nz,
        step_x,
        step_z,
        values,
    }
}

/// Normalized angular frequencies `(2t − (n − 1))π/n`, `t = 0..n`.
pub fn frequency_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|t| (2.0 * t as f64 - (n as f64 - 1.0)) * PI / n as f64)
        .collect()
}

fn dft_rows(freqs: &[f64], half: usize) -> CMatrix {
    CMatrix::from_fn(freqs.len(), 2 * half + 1, |t, c| {
        let l = c as f64 - half as f64;
        Complex64::from_polar(1.0, -l * freqs[t])
    })
}

/// Transform `(1/N) Σ b[l, m] e^{−j(lωx + mωz)}` at arbitrary frequencies.
pub fn transform_at(seq: &GeneratorSequence, omega_x: f64, omega_z: f64) -> Complex64 {
    let ex = dft_rows(&[omega_x], seq.nx - 1);
    let ez = dft_rows(&[omega_z], seq.nz - 1);
    let b = seq.values.map(|v| Complex64::new(v, 0.0));
    (ex * b * ez.transpose())[(0, 0)] / seq.element_count() as f64
}

/// Real part of the transform on the tensor grid `omegas_x × omegas_z`,
/// indexed `[(x, z)]`.
pub fn transform_grid(seq: &GeneratorSequence, omegas_x: &[f64], omegas_z: &[f64]) -> DMatrix<f64> {
    let ex = dft_rows(omegas_x, seq.nx - 1);
    let ez = dft_rows(omegas_z, seq.nz - 1);
    let b = seq.values.map(|v| Complex64::new(v, 0.0));
    (ex * b * ez.transpose()).map(|z| z.re / seq.element_count() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Propagating,
    Evanescent,
}

/// Wavenumber along y for a transverse sample: `ϰ = √(κ² − kx² − kz²)`,
/// real when propagating and imaginary when evanescent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveClass {
    pub regime: Regime,
    /// `|ϰ|`; the value is imaginary when `regime` is evanescent.
    pub ky_magnitude: f64,
}

pub fn classify_wavenumber(kx: f64, kz: f64, kappa: f64) -> Result<WaveClass> {
    check_kappa(kappa)?;
    let r2 = kx * kx + kz * kz;
    let k2 = kappa * kappa;
    let regime = if r2 <= k2 {
        Regime::Propagating
    } else {
        Regime::Evanescent
    };
    Ok(WaveClass {
        regime,
        ky_magnitude: (k2 - r2).abs().sqrt(),
    })
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("wavenumber must be positive, got {kappa}")))
    }
}

/// Continuous-aperture spectrum `Π(r/2κ) / ((κ/2π)√(κ² − r²))`.
///
/// Returns `+∞` on the circle `r = κ` and `0` outside it.
pub fn asymptotic_spectrum(kx: f64, kz: f64, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let r2 = kx * kx + kz * kz;
    if rect(r2.sqrt() / (2.0 * kappa))? == 0.0 {
        return Ok(0.0);
    }
    let rem = kappa * kappa - r2;
    if rem <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * PI / (kappa * rem.sqrt()))
}

/// Grid samples of the discrete power spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct WavenumberSpectrum {
    kx: Vec<f64>,
    kz: Vec<f64>,
    values: DMatrix<f64>,
    kappa: f64,
    tags: DMatrix<Regime>,
}

impl WavenumberSpectrum {
    pub fn kx_grid(&self) -> &[f64] {
        &self.kx
    }

    pub fn kz_grid(&self) -> &[f64] {
        &self.kz
    }

    /// `G` with `kx` along rows and `kz` along columns.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn wavenumber(&self) -> f64 {
        self.kappa
    }

    pub fn tag(&self, t: usize, s: usize) -> Regime {
        self.tags[(t, s)]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.sum()
    }

    pub fn propagating_count(&self) -> usize {
        self.tags
            .iter()
            .filter(|&&t| t == Regime::Propagating)
            .count()
    }

    /// Grid samples sorted non-increasing.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.values.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// `(kx, kz, G, regime)` in row-major order with `kz` outermost.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64, Regime)> + '_ {
        (0..self.kz.len()).flat_map(move |s| {
            (0..self.kx.len()).map(move |t| {
                (
                    self.kx[t],
                    self.kz[s],
                    self.values[(t, s)],
                    self.tags[(t, s)],
                )
            })
        })
    }
}

/// Evaluates `G` on the `nx × nz` grid and tags each sample.
pub fn power_spectrum(seq: &GeneratorSequence, geom: &ArrayGeometry) -> Result<WavenumberSpectrum> {
    if (seq.nx, seq.nz) != (geom.nx(), geom.nz()) {
        return Err(domain(format!(
            "generator sequence for {}×{} lattice used with {}×{} geometry",
            seq.nx,
            seq.nz,
            geom.nx(),
            geom.nz()
        )));
    }
    let wx = frequency_grid(seq.nx);
    let wz = frequency_grid(seq.nz);
    let ex = dft_rows(&wx, seq.nx - 1);
    let ez = dft_rows(&wz, seq.nz - 1);
    let b = seq.values.map(|v| Complex64::new(v, 0.0));
    let g = (ex * b * ez.transpose()) / Complex64::new(seq.element_count() as f64, 0.0);

    let peak = g.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let residue = g.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > IMAG_RESIDUE_TOL * peak {
        return Err(Error::Numerical(format!(
            "power spectrum imaginary residue {residue:.3e} exceeds tolerance (peak {peak:.3e})"
        )));
    }

    let kappa = geom.wavenumber();
    let to_k = |w: &f64, step: f64| if step > 0.0 { w / step } else { 0.0 };
    let kx: Vec<f64> = wx.iter().map(|w| to_k(w, seq.step_x)).collect();
    let kz: Vec<f64> = wz.iter().map(|w| to_k(w, seq.step_z)).collect();
    let tags = DMatrix::from_fn(kx.len(), kz.len(), |t, s| {
        if kx[t] * kx[t] + kz[s] * kz[s] <= kappa * kappa {
            Regime::Propagating
        } else {
            Regime::Evanescent
        }
    });
    Ok(WavenumberSpectrum {
        kx,
        kz,
        values: g.map(|z| z.re),
        kappa,
        tags,
    })
}
