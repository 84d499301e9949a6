//! Effective correlation under coupling, eigen-spectra and the scalar
//! metrics derived from them.

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::correlation::{CorrelationKind, CorrelationMatrix};
use crate::coupling::{CouplingMatrix, Side};
use crate::error::{domain, Error, Result};
use crate::geometry::ArrayGeometry;
use crate::CMatrix;

/// Eigenvalues below `−PSD_TOL · max` are treated as a definiteness failure.
const PSD_TOL: f64 = 1e-8;
/// Default relative threshold for [`dominant_count`].
pub const DOMINANT_THRESHOLD: f64 = 1e-2;
/// Default relative floor below which eigenvalues are ignored by the knee search.
pub const DEFAULT_KNEE_FLOOR: f64 = 1e-6;
/// First 1-based index considered by the knee search.
pub const KNEE_START: usize = 4;
const MIN_KNEE_VALUES: usize = 8;
const CURVATURE_EPS: f64 = 1e-12;

/// Effective correlation `R = Cᵀ R₀ C*`.
pub fn effective_correlation(
    c: &CouplingMatrix,
    r0: &CorrelationMatrix,
) -> Result<CorrelationMatrix> {
    if r0.kind() != CorrelationKind::McUnaware {
        return Err(domain("effective correlation expects a coupling-free R₀"));
    }
    if c.dim() != r0.dim() {
        return Err(domain(format!(
            "coupling matrix dimension {} does not match correlation dimension {}",
            c.dim(),
            r0.dim()
        )));
    }
    let cm = c.entries();
    let r = cm.transpose() * r0.entries() * cm.conjugate();
    let r = (&r + r.adjoint()).scale(0.5);
    let kind = match c.side() {
        Side::Tx => CorrelationKind::EffectiveTx,
        Side::Rx => CorrelationKind::EffectiveRx,
    };
    CorrelationMatrix::new(r, kind)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    ByN,
}

/// Eigenvalues sorted non-increasing, with derived metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
    normalization: Normalization,
    knee_index: Option<usize>,
    dominant_count: usize,
    asymptotic_dof: Option<usize>,
}

impl EigenSpectrum {
    /// Wraps a list of eigenvalues; sorts it and computes the metrics.
    pub fn from_values(mut values: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(domain("eigenvalue list must be non-empty and finite"));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let max = values[0];
        let min = values[values.len() - 1];
        if min < -PSD_TOL * max.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "spectrum is not positive semidefinite (min {min:.3e}, max {max:.3e})"
            )));
        }
        Ok(Self {
            knee_index: knee_of(&values, DEFAULT_KNEE_FLOOR).ok(),
            dominant_count: dominant_count(&values, DOMINANT_THRESHOLD),
            values,
            normalization,
            asymptotic_dof: None,
        })
    }

    /// Attaches `⌈πLxLz/λ²⌉` for the aperture the spectrum belongs to.
    pub fn with_geometry(mut self, geom: &ArrayGeometry) -> Self {
        self.asymptotic_dof = Some(asymptotic_dof(geom));
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// 1-based knee position; `None` when the knee is undefined.
    pub fn knee_index(&self) -> Option<usize> {
        self.knee_index
    }

    pub fn dominant_count(&self) -> usize {
        self.dominant_count
    }

    pub fn asymptotic_dof(&self) -> Option<usize> {
        self.asymptotic_dof
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }
}

/// Eigenvalues (non-increasing) and matching eigenvectors as columns.
pub fn eigen_decomposition(r: &CorrelationMatrix) -> (Vec<f64>, CMatrix) {
    let (values, vectors) = if r.is_real() {
        let eig = SymmetricEigen::new(r.entries().map(|z| z.re));
        (
            eig.eigenvalues.as_slice().to_vec(),
            eig.eigenvectors.map(|v| v.into()),
        )
    } else {
        let eig = SymmetricEigen::new(r.entries().clone());
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vecs = CMatrix::from_fn(vectors.nrows(), order.len(), |i, j| vectors[(i, order[j])]);
    (sorted, vecs)
}

/// Eigen-spectrum of a correlation matrix, optionally divided by `N`.
pub fn eigen_spectrum(r: &CorrelationMatrix, normalize_by_n: bool) -> Result<EigenSpectrum> {
    let values = if r.is_real() {
        SymmetricEigen::new(r.entries().map(|z| z.re)).eigenvalues
    } else {
        SymmetricEigen::new(r.entries().clone()).eigenvalues
    };
    let n = r.dim() as f64;
    let (values, norm) = if normalize_by_n {
        (values.iter().map(|v| v / n).collect(), Normalization::ByN)
    } else {
        (values.as_slice().to_vec(), Normalization::Raw)
    };
    EigenSpectrum::from_values(values, norm)
}

/// `⌈π·Lx·Lz/λ²⌉`.
pub fn asymptotic_dof(geom: &ArrayGeometry) -> usize {
    asymptotic_dof_for(geom.lx(), geom.lz(), geom.wavelength())
}

pub fn asymptotic_dof_for(lx: f64, lz: f64, wavelength: f64) -> usize {
    (std::f64::consts::PI * lx * lz / (wavelength * wavelength)).ceil() as usize
}

/// Number of eigenvalues at or above `rel · max`.
pub fn dominant_count(values: &[f64], rel: f64) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().filter(|&&v| v >= rel * max).count()
}

/// Knee of a spectrum using [`DEFAULT_KNEE_FLOOR`].
pub fn knee_index(spec: &EigenSpectrum) -> Result<usize> {
    knee_of(spec.values(), DEFAULT_KNEE_FLOOR)
}

/// Knee restricted to eigenvalues above `floor · max`.
pub fn knee_index_with_floor(spec: &EigenSpectrum, floor: f64) -> Result<usize> {
    knee_of(spec.values(), floor)
}

/// 1-based index `i ≥ 4` maximizing `2·log e[i] − log e[i−1] − log e[i+1]`,
/// the point where the sorted eigenvalues bend downward most sharply.
fn knee_of(values: &[f64], floor: f64) -> Result<usize> {
    let max = values.first().copied().unwrap_or(0.0);
    if max.is_nan() || max <= 0.0 {
        return Err(Error::KneeUndefined("no positive eigenvalues".into()));
    }
    let logs: Vec<f64> = values
        .iter()
        .take_while(|&&v| v > floor * max)
        .map(|v| v.log10())
        .collect();
    if logs.len() < MIN_KNEE_VALUES {
        return Err(Error::KneeUndefined(format!(
            "only {} eigenvalues above the floor, need {MIN_KNEE_VALUES}",
            logs.len()
        )));
    }
    let mut best: Option<(usize, f64)> = None;
    for j in (KNEE_START - 1)..logs.len() - 1 {
        let curv = 2.0 * logs[j] - logs[j - 1] - logs[j + 1];
        if best.map_or(true, |(_, b)| curv > b + CURVATURE_EPS) {
            best = Some((j + 1, curv));
        }
    }
    match best {
        Some((i, curv)) if curv > CURVATURE_EPS => Ok(i),
        _ => Err(Error::KneeUndefined("spectrum has no downward bend".into())),
    }
}

/// Mean normalized off-diagonal magnitude `Σ_{m≠n} |Q[n,m]| / |Q[n,n]| / (N(N−1))`.
pub fn icsi(q: &CMatrix) -> Result<f64> {
    if !q.is_square() {
        return Err(domain("ICSI needs a square matrix"));
    }
    let n = q.nrows();
    if n < 2 {
        return Err(domain(format!("ICSI needs at least two elements, got {n}")));
    }
    let mut total = 0.0;
    for r in 0..n {
        let d = q[(r, r)].norm();
        if d == 0.0 {
            return Err(domain(format!("zero diagonal entry at row {r}")));
        }
        let off: f64 = (0..n).filter(|&c| c != r).map(|c| q[(r, c)].norm()).sum();
        total += off / d;
    }
    Ok(total / (n * (n - 1)) as f64)
}

/// Least-squares slope of `log₁₀|e[i]|` against `i` over the top half.
pub fn top_half_log_slope(values: &[f64]) -> Result<f64> {
    let h = values.len() / 2;
    if h < 2 {
        return Err(domain("need at least four eigenvalues for a slope"));
    }
    let ys: Vec<f64> = values[..h].iter().map(|v| v.abs().log10()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::Numerical("zero eigenvalue in the top half".into()));
    }
    let xm = (h - 1) as f64 / 2.0;
    let ym = ys.iter().sum::<f64>() / h as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::correlation_matrix_isotropic;
    use crate::geometry::{make_uniform_grid, ElementKind};
    use crate::Complex64;
    use approx::assert_abs_diff_eq;

    fn spec(v: &[f64]) -> EigenSpectrum {
        EigenSpectrum::from_values(v.to_vec(), Normalization::Raw).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let r =
            CorrelationMatrix::new(CMatrix::identity(5, 5), CorrelationKind::McUnaware).unwrap();
        let s = eigen_spectrum(&r, true).unwrap();
        assert!(s.values().iter().all(|v| (v - 0.2).abs() < 1e-15));
        assert!(matches!(knee_index(&s), Err(Error::KneeUndefined(_))));
        assert!(matches!(
            knee_index(&spec(&[1.0; 12])),
            Err(Error::KneeUndefined(_))
        ));
    }

    #[test]
    fn two_element_closed_form() {
        let g = ArrayGeometry::lattice(2, 1, 0.25, 1.0, 1.0, ElementKind::Isotropic).unwrap();
        let s = eigen_spectrum(&correlation_matrix_isotropic(&g).unwrap(), true).unwrap();
        let off = 0.636_619_772_367_581_3;
        assert_abs_diff_eq!(s.values()[0], (1.0 + off) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.values()[1], (1.0 - off) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn synthetic_knee() {
        let s = spec(&[1.0, 1.0, 1.0, 1.0, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10]);
        assert_eq!(knee_index_with_floor(&s, 1e-12).unwrap(), 4);
        // Too few values above the default floor.
        assert!(knee_index(&s).is_err());
    }

    #[test]
    fn dof_values() {
        let g = make_uniform_grid(12.0, 12.0, 1.0 / 3.0, 1.0 / 3.0, 1.0).unwrap();
        assert_eq!(asymptotic_dof(&g), 453);
        assert_eq!(asymptotic_dof_for(4.0, 4.0, 1.0), 51);
        assert_eq!(asymptotic_dof_for(1.0, 1.0, 1.0), 4);
        let s = spec(&[3.0, 1.0]).with_geometry(&g);
        assert_eq!(s.asymptotic_dof(), Some(453));
    }

    #[test]
    fn icsi_extremes() {
        assert_eq!(icsi(&CMatrix::identity(4, 4)).unwrap(), 0.0);
        let ones = CMatrix::from_element(4, 4, Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(icsi(&ones).unwrap(), 1.0, epsilon = 1e-15);
        let mut z = CMatrix::identity(3, 3);
        z[(1, 1)] = Complex64::new(0.0, 0.0);
        assert!(icsi(&z).is_err());
        assert!(icsi(&CMatrix::identity(1, 1)).is_err());
    }

    #[test]
    fn psd_check_and_ordering() {
        assert!(EigenSpectrum::from_values(vec![1.0, -0.1], Normalization::Raw).is_err());
        let s = spec(&[0.1, 3.0, 1.0]);
        assert_eq!(s.values(), &[3.0, 1.0, 0.1]);
        assert_eq!(s.dominant_count(), 3);
        assert_eq!(dominant_count(&[1.0, 0.01, 0.009], 1e-2), 2);
    }

    #[test]
    fn slope_of_geometric_sequence() {
        let v: Vec<f64> = (0..10).map(|i| 10f64.powi(-i)).collect();
        assert_abs_diff_eq!(top_half_log_slope(&v).unwrap(), -1.0, epsilon = 1e-12);
    }
}
