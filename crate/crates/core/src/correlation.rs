//! Spatial correlation under isotropic scattering and its block-Toeplitz
//! structure.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::geometry::{ArrayGeometry, Direction, Point3};
use crate::linalg::{hermitian_defect, max_abs};
use crate::specfun::sinc_raw;
use crate::{CMatrix, Complex64};

const HERMITIAN_TOL: f64 = 1e-10;
const UNIT_DIAGONAL_TOL: f64 = 1e-12;
pub const DEFAULT_BTTB_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorrelationKind {
    McUnaware,
    EffectiveTx,
    EffectiveRx,
}

/// A Hermitian correlation matrix, either coupling-free or effective.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    entries: CMatrix,
    kind: CorrelationKind,
}

impl CorrelationMatrix {
    /// Validates squareness and Hermitian symmetry; coupling-free matrices
    /// must additionally be real with a unit diagonal.
    pub fn new(entries: CMatrix, kind: CorrelationKind) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(domain(format!(
                "correlation matrix must be square and non-empty, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(domain("correlation matrix has non-finite entries"));
        }
        let scale = max_abs(&entries).max(1.0);
        let defect = hermitian_defect(&entries);
        if defect > HERMITIAN_TOL * scale {
            return Err(domain(format!(
                "correlation matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        if kind == CorrelationKind::McUnaware {
            if entries.iter().any(|z| z.im != 0.0) {
                return Err(domain("coupling-free correlation must be real"));
            }
            if entries
                .diagonal()
                .iter()
                .any(|z| (z.re - 1.0).abs() > UNIT_DIAGONAL_TOL)
            {
                return Err(domain(
                    "coupling-free correlation must have a unit diagonal",
                ));
            }
        }
        Ok(Self { entries, kind })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }
}

/// Isotropic scattering density `sinθ / 2π` over `φ, θ ∈ [0, π]`.
pub fn isotropic_scattering_density(dir: Direction) -> f64 {
    dir.theta().sin() / (2.0 * std::f64::consts::PI)
}

fn distance(a: &Point3, b: &Point3) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Real matrix `sinc(2‖dₘ − dₙ‖/λ)` over the given positions.
pub fn sinc_kernel(positions: &[Point3], wavelength: f64) -> Result<DMatrix<f64>> {
    if positions.is_empty() {
        return Err(domain("sinc kernel needs at least one position"));
    }
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(domain(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let n = positions.len();
    let columns: Vec<Vec<f64>> = positions
        .par_iter()
        .map(|pj| {
            positions
                .iter()
                .map(|pi| sinc_raw(2.0 * distance(pi, pj) / wavelength))
                .collect()
        })
        .collect();
    Ok(DMatrix::from_iterator(n, n, columns.into_iter().flatten()))
}

/// Coupling-free correlation `R₀` of an aperture under isotropic scattering.
pub fn correlation_matrix_isotropic(geom: &ArrayGeometry) -> Result<CorrelationMatrix> {
    let kernel = sinc_kernel(geom.positions(), geom.wavelength())?;
    CorrelationMatrix::new(
        kernel.map(|v| Complex64::new(v, 0.0)),
        CorrelationKind::McUnaware,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BttbReport {
    pub is_bttb: bool,
    pub max_violation: f64,
}

/// Checks symmetric block-Toeplitz-with-Toeplitz-blocks structure with the
/// default tolerance.
pub fn verify_bttb(r: &CorrelationMatrix, geom: &ArrayGeometry) -> Result<BttbReport> {
    verify_bttb_with_tol(r, geom, DEFAULT_BTTB_TOL)
}

/// Every entry must depend only on the lattice offset `(Δi, Δk)` of its
/// pair, and the offsets `±(Δi, Δk)` must carry equal values.
pub fn verify_bttb_with_tol(
    r: &CorrelationMatrix,
    geom: &ArrayGeometry,
    tol: f64,
) -> Result<BttbReport> {
    let n = r.dim();
    if n != geom.len() {
        return Err(domain(format!(
            "matrix dimension {n} does not match geometry with {} elements",
            geom.len()
        )));
    }
    let m = r.entries();
    let offset = |a: usize, b: usize| {
        let (ia, ka) = geom.lattice_index(a);
        let (ib, kb) = geom.lattice_index(b);
        (ia as isize - ib as isize, ka as isize - kb as isize)
    };
    let mut canonical: HashMap<(isize, isize), Complex64> = HashMap::new();
    let mut worst = 0.0f64;
    for b in 0..n {
        for a in 0..n {
            let v = m[(a, b)];
            let c = *canonical.entry(offset(a, b)).or_insert(v);
            worst = worst.max((v - c).norm());
        }
    }
    for (&(di, dk), v) in &canonical {
        if let Some(w) = canonical.get(&(-di, -dk)) {
            worst = worst.max((v - w).norm());
        }
    }
    Ok(BttbReport {
        is_bttb: worst <= tol,
        max_violation: worst,
    })
}
