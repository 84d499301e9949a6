//! Array responses with and without coupling, beamformers and array gain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingMatrix;
use crate::error::{domain, Error, Result};
use crate::geometry::{unit_direction, ArrayGeometry, Direction};
use crate::linalg::Factorized;
use crate::{CMatrix, CVector, Complex64};

/// Relative tolerance on the excitation-power constraint `‖w‖ = |w₀|`.
const POWER_CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamformingScheme {
    /// Matched to the coupled response: `ζ·Cᴴa₀*`.
    ProposedMcAware,
    /// Coupling-unaware conjugate beamformer `a₀*` applied to the coupled array.
    ConjugateMcUnaware,
    /// Coupling pre-compensation `C⁻¹a₀*`.
    DirectivityMax,
    /// Conjugate beamformer on an array without coupling.
    NoMcReference,
}

impl BeamformingScheme {
    pub const ALL: [BeamformingScheme; 4] = [
        BeamformingScheme::ProposedMcAware,
        BeamformingScheme::ConjugateMcUnaware,
        BeamformingScheme::DirectivityMax,
        BeamformingScheme::NoMcReference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BeamformingScheme::ProposedMcAware => "proposed_mc_aware",
            BeamformingScheme::ConjugateMcUnaware => "conjugate_mc_unaware",
            BeamformingScheme::DirectivityMax => "directivity_max",
            BeamformingScheme::NoMcReference => "no_mc_reference",
        }
    }
}

/// Coupling-free response `a₀[n] = exp(jκ·d̂·dₙ)`.
pub fn steering_vector(geom: &ArrayGeometry, dir: Direction) -> CVector {
    let u = unit_direction(dir);
    let kappa = geom.wavenumber();
    CVector::from_iterator(
        geom.len(),
        geom.positions()
            .iter()
            .map(|p| Complex64::from_polar(1.0, kappa * (u[0] * p[0] + u[1] * p[1] + u[2] * p[2]))),
    )
}

fn check_dims(c: &CouplingMatrix, v: &CVector) -> Result<()> {
    if c.dim() != v.len() {
        return Err(domain(format!(
            "coupling matrix is {0}×{0} but vector has length {1}",
            c.dim(),
            v.len()
        )));
    }
    Ok(())
}

/// Effective response `a = Cᵀa₀`.
pub fn effective_response(c: &CouplingMatrix, a0: &CVector) -> Result<CVector> {
    check_dims(c, a0)?;
    Ok(c.entries().tr_mul(a0))
}

fn scaled_to(v: CVector, w0_mag: f64) -> Result<CVector> {
    let norm = v.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Numerical(format!(
            "beamformer direction has norm {norm}"
        )));
    }
    Ok(v * Complex64::new(w0_mag / norm, 0.0))
}

fn check_w0(w0_mag: f64) -> Result<()> {
    if w0_mag.is_finite() && w0_mag > 0.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "excitation magnitude must be positive, got {w0_mag}"
        )))
    }
}

/// Beamformer for `scheme` normalized to `‖w‖₂ = w0_mag`.
pub fn beamforming_vector(
    scheme: BeamformingScheme,
    c: &CouplingMatrix,
    a0: &CVector,
    w0_mag: f64,
) -> Result<CVector> {
    check_dims(c, a0)?;
    check_w0(w0_mag)?;
    let lu = match scheme {
        BeamformingScheme::DirectivityMax => Some(Factorized::new(
            c.entries(),
            "directivity-max beamformer C⁻¹",
        )?),
        _ => None,
    };
    beamformer_with(scheme, c.entries(), lu.as_ref(), a0, w0_mag)
}

fn beamformer_with(
    scheme: BeamformingScheme,
    c: &CMatrix,
    lu: Option<&Factorized>,
    a0: &CVector,
    w0_mag: f64,
) -> Result<CVector> {
    let a0c = a0.conjugate();
    let v = match scheme {
        BeamformingScheme::ProposedMcAware => c.adjoint() * &a0c,
        BeamformingScheme::ConjugateMcUnaware | BeamformingScheme::NoMcReference => a0c,
        BeamformingScheme::DirectivityMax => lu
            .expect("factorization is prepared for directivity-max")
            .solve(&a0c),
    };
    scaled_to(v, w0_mag)
}

/// Array gain `|aᵀw|² / |w₀|²` with `a = Cᵀa₀`; `w` must satisfy `‖w‖ = w0_mag`.
pub fn array_gain(c: &CouplingMatrix, a0: &CVector, w: &CVector, w0_mag: f64) -> Result<f64> {
    check_dims(c, a0)?;
    check_dims(c, w)?;
    check_w0(w0_mag)?;
    gain_unchecked(c.entries(), a0, w, w0_mag)
}

fn gain_unchecked(c: &CMatrix, a0: &CVector, w: &CVector, w0_mag: f64) -> Result<f64> {
    let norm = w.norm();
    if (norm - w0_mag).abs() > POWER_CONSTRAINT_TOL * w0_mag {
        return Err(domain(format!(
            "beamformer norm {norm} violates the power constraint {w0_mag}"
        )));
    }
    let a = c.tr_mul(a0);
    Ok(a.dot(w).norm_sqr() / (w0_mag * w0_mag))
}

/// Gain of `scheme` toward the direction encoded in `a0`.
pub fn scheme_gain(
    scheme: BeamformingScheme,
    c: &CouplingMatrix,
    a0: &CVector,
    w0_mag: f64,
) -> Result<f64> {
    let w = beamforming_vector(scheme, c, a0, w0_mag)?;
    if scheme == BeamformingScheme::NoMcReference {
        let n = c.dim();
        return gain_unchecked(&CMatrix::identity(n, n), a0, &w, w0_mag);
    }
    array_gain(c, a0, &w, w0_mag)
}

/// Closed-form optimum `|a₀ᵀ C Cᴴ a₀*|`.
pub fn max_gain_closed_form(c: &CouplingMatrix, a0: &CVector) -> Result<f64> {
    check_dims(c, a0)?;
    let cc = c.entries() * c.entries().adjoint();
    Ok((a0.transpose() * cc * a0.conjugate())[(0, 0)].norm())
}

/// Gains over an azimuth cut at fixed zenith `theta`, returned as `(phi, gain)`.
pub fn gain_sweep(
    geom: &ArrayGeometry,
    c: &CouplingMatrix,
    scheme: BeamformingScheme,
    theta: f64,
    phi_grid: &[f64],
    w0_mag: f64,
) -> Result<Vec<(f64, f64)>> {
    if phi_grid.is_empty() {
        return Err(domain("azimuth grid is empty"));
    }
    if c.dim() != geom.len() {
        return Err(domain(format!(
            "coupling matrix dimension {} does not match {} elements",
            c.dim(),
            geom.len()
        )));
    }
    check_w0(w0_mag)?;
    let n = geom.len();
    let identity;
    let cm = if scheme == BeamformingScheme::NoMcReference {
        identity = CMatrix::identity(n, n);
        &identity
    } else {
        c.entries()
    };
    let lu = match scheme {
        BeamformingScheme::DirectivityMax => {
            Some(Factorized::new(cm, "directivity-max beamformer C⁻¹")?)
        }
        _ => None,
    };
    phi_grid
        .par_iter()
        .map(|&phi| {
            let a0 = steering_vector(geom, Direction::new(phi, theta)?);
            let w = beamformer_with(scheme, cm, lu.as_ref(), &a0, w0_mag)?;
            Ok((phi, gain_unchecked(cm, &a0, &w, w0_mag)?))
        })
        .collect()
}

/// `count` evenly spaced azimuths covering `[0, π]`.
pub fn azimuth_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|i| std::f64::consts::PI * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::Side;
    use crate::geometry::{make_uniform_grid, ElementKind};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn steering_examples() {
        let g = make_uniform_grid(2.0, 1.0, 0.25, 0.5, 1.0).unwrap();
        let a = steering_vector(&g, Direction::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert!(a.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-14));

        let pair = ArrayGeometry::lattice(2, 1, 0.5, 1.0, 1.0, ElementKind::Isotropic).unwrap();
        let a = steering_vector(&pair, Direction::new(0.0, FRAC_PI_2).unwrap());
        assert!((a[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((a[1] - c(-1.0, 0.0)).norm() < 1e-15);

        let one = ArrayGeometry::lattice(1, 1, 0.5, 0.5, 1.0, ElementKind::Isotropic).unwrap();
        let a = steering_vector(&one, Direction::new(0.7, 0.2).unwrap());
        assert_eq!(a[0], c(1.0, 0.0));
    }

    #[test]
    fn effective_response_probes() {
        let m = CMatrix::from_fn(3, 3, |i, j| c(i as f64 + 1.0, j as f64 - 0.5));
        let cm = CouplingMatrix::from_entries(m.clone(), Side::Tx, c(50.0, 0.0)).unwrap();
        let e1 = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let a = effective_response(&cm, &e1).unwrap();
        for j in 0..3 {
            assert_eq!(a[j], m[(0, j)]);
        }
        let twice = CouplingMatrix::from_entries(
            CMatrix::identity(3, 3) * c(2.0, 0.0),
            Side::Tx,
            c(0.0, 0.0),
        )
        .unwrap();
        assert_eq!(effective_response(&twice, &e1).unwrap(), e1 * c(2.0, 0.0));
        let short = CVector::zeros(2);
        assert!(effective_response(&cm, &short).is_err());
    }

    #[test]
    fn identity_coupling_schemes_coincide() {
        let g = make_uniform_grid(2.0, 1.0, 0.5, 0.5, 1.0).unwrap();
        let id = CouplingMatrix::identity(g.len(), Side::Tx);
        let a0 = steering_vector(&g, Direction::new(0.4, 1.1).unwrap());
        for s in BeamformingScheme::ALL {
            assert_relative_eq!(
                scheme_gain(s, &id, &a0, 1.0).unwrap(),
                g.len() as f64,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn power_constraint_enforced() {
        let g = make_uniform_grid(1.0, 0.5, 0.5, 0.5, 1.0).unwrap();
        let id = CouplingMatrix::identity(g.len(), Side::Tx);
        let a0 = steering_vector(&g, Direction::new(0.4, 1.1).unwrap());
        let w = a0.conjugate();
        assert!(array_gain(&id, &a0, &w, 1.0).is_err());
        let w = &w * c(1.0 / w.norm(), 0.0);
        assert_abs_diff_eq!(array_gain(&id, &a0, &w, 1.0).unwrap(), 6.0, epsilon = 1e-12);
    }

    #[test]
    fn sweep_and_grid() {
        assert_eq!(azimuth_grid(181).len(), 181);
        assert_eq!(*azimuth_grid(181).last().unwrap(), std::f64::consts::PI);
        let g = make_uniform_grid(1.0, 0.5, 0.25, 0.5, 1.0).unwrap();
        let id = CouplingMatrix::identity(g.len(), Side::Tx);
        assert!(gain_sweep(
            &g,
            &id,
            BeamformingScheme::ProposedMcAware,
            FRAC_PI_2,
            &[],
            1.0
        )
        .is_err());
        let s = gain_sweep(
            &g,
            &id,
            BeamformingScheme::NoMcReference,
            FRAC_PI_2,
            &azimuth_grid(7),
            1.0,
        )
        .unwrap();
        assert!(s.iter().all(|&(_, v)| (v - 10.0).abs() < 1e-10));
    }
}
