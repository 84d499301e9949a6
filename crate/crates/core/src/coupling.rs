//! Impedance models and the normalized Tx/Rx coupling matrices derived
//! from them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::sinc_kernel;
use crate::error::{domain, Result};
use crate::geometry::{ArrayGeometry, ElementKind};
use crate::linalg::{max_abs, symmetric_defect, Factorized};
use crate::specfun::{cin_raw, si_raw};
use crate::{CMatrix, Complex64};

/// Self impedance of a thin half-wave dipole, ohms.
pub const DIPOLE_SELF_IMPEDANCE: Complex64 = Complex64::new(73.1, 42.5);
/// Free-space wave impedance `120π` ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 120.0 * PI;
/// Radiation resistance assumed for isotropic elements unless configured.
pub const DEFAULT_R_ISO: f64 = 73.1;

const SYMMETRY_TOL: f64 = 1e-10;

/// Symmetric element impedance matrix with a uniform diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpedanceMatrix {
    entries: CMatrix,
    self_impedance: Complex64,
}

impl ImpedanceMatrix {
    pub fn new(entries: CMatrix, self_impedance: Complex64) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(domain("impedance matrix must be square and non-empty"));
        }
        let defect = symmetric_defect(&entries);
        if defect > SYMMETRY_TOL * max_abs(&entries).max(1.0) {
            return Err(domain(format!(
                "impedance matrix violates reciprocity (defect {defect:.3e})"
            )));
        }
        if entries.diagonal().iter().any(|&z| z != self_impedance) {
            return Err(domain(
                "impedance matrix diagonal must equal the self impedance",
            ));
        }
        Ok(Self {
            entries,
            self_impedance,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn self_impedance(&self) -> Complex64 {
        self.self_impedance
    }

    /// Same self impedance, all mutual terms removed.
    pub fn uncoupled(&self) -> Self {
        let n = self.dim();
        Self {
            entries: CMatrix::from_diagonal_element(n, n, self.self_impedance),
            self_impedance: self.self_impedance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Tx,
    Rx,
}

/// Normalized coupling matrix; the identity when elements do not couple.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    entries: CMatrix,
    side: Side,
    port_impedance: Complex64,
    condition: Option<f64>,
}

impl CouplingMatrix {
    pub fn from_entries(entries: CMatrix, side: Side, port_impedance: Complex64) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(domain("coupling matrix must be square and non-empty"));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(domain("coupling matrix has non-finite entries"));
        }
        Ok(Self {
            entries,
            side,
            port_impedance,
            condition: None,
        })
    }

    pub fn identity(n: usize, side: Side) -> Self {
        Self {
            entries: CMatrix::identity(n, n),
            side,
            port_impedance: Complex64::new(0.0, 0.0),
            condition: Some(1.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Source impedance `zS` (Tx) or load impedance `zL` (Rx).
    pub fn port_impedance(&self) -> Complex64 {
        self.port_impedance
    }

    /// 1-norm condition number of `Z + z·I` when built from an impedance matrix.
    pub fn condition(&self) -> Option<f64> {
        self.condition
    }
}

struct EchelonArgs {
    a: f64,
    a_prime: f64,
}

/// `β(ρ + u)` and `β(ρ − u)` with `ρ = √(d² + u²)`, avoiding cancellation.
fn echelon_args(beta: f64, d: f64, u: f64) -> EchelonArgs {
    let rho = d.hypot(u);
    let (plus, minus) = if u >= 0.0 {
        let p = rho + u;
        (p, if p > 0.0 { d * d / p } else { 0.0 })
    } else {
        let m = rho - u;
        (d * d / m, m)
    };
    EchelonArgs {
        a: beta * plus,
        a_prime: beta * minus,
    }
}

/// Mutual impedance between two parallel half-wave dipoles (axes along z)
/// whose centers are `dh` apart horizontally and `dv` apart along the axis.
///
/// Induced-EMF closed form for the parallel-in-echelon arrangement, written
/// with `Cin` so the side-by-side and collinear limits stay finite.
pub fn dipole_mutual_impedance(dh: f64, dv: f64, wavelength: f64) -> Result<Complex64> {
    if !(dh.is_finite() && dv.is_finite() && dh >= 0.0 && dv >= 0.0) {
        return Err(domain(format!(
            "dipole offsets must be finite and non-negative, got ({dh}, {dv})"
        )));
    }
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(domain(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    if dh == 0.0 && dv == 0.0 {
        return Err(domain("coincident dipoles: use the self impedance"));
    }
    let len = wavelength / 2.0;
    if dh == 0.0 && dv <= len {
        return Err(domain(format!(
            "collinear dipoles of length {len} overlap or touch at offset {dv}"
        )));
    }
    let beta = 2.0 * PI / wavelength;
    let k = FREE_SPACE_IMPEDANCE / (8.0 * PI);

    let e0 = echelon_args(beta, dh, dv);
    let e1 = echelon_args(beta, dh, dv - len);
    let e2 = echelon_args(beta, dh, dv + len);

    let cin = |e: &EchelonArgs| (cin_raw(e.a), cin_raw(e.a_prime));
    let si = |e: &EchelonArgs| (si_raw(e.a), si_raw(e.a_prime));
    let (c0, c0p) = cin(&e0);
    let (c1, c1p) = cin(&e1);
    let (c2, c2p) = cin(&e2);
    let (s0, s0p) = si(&e0);
    let (s1, s1p) = si(&e1);
    let (s2, s2p) = si(&e2);

    let log_part = if dh > 0.0 {
        let ratio = |e: &EchelonArgs| e.a.ln() - e.a_prime.ln();
        2.0 * ratio(&e0) - ratio(&e1) - ratio(&e2)
    } else {
        // Collinear: the ln(βd) contributions cancel exactly.
        4.0 * (2.0 * dv).ln() - 2.0 * (2.0 * (dv - len)).ln() - 2.0 * (2.0 * (dv + len)).ln()
    };

    let (sn, cs) = (beta * dv).sin_cos();
    let r = -k * cs * (2.0 * c0 + 2.0 * c0p - c1 - c1p - c2 - c2p)
        + k * sn * (2.0 * s0 - 2.0 * s0p - s1 + s1p - s2 + s2p);
    let x = -k * cs * (2.0 * s0 + 2.0 * s0p - s1 - s1p - s2 - s2p)
        + k * sn * (log_part - (2.0 * c0 - 2.0 * c0p - c1 + c1p - c2 + c2p));
    Ok(Complex64::new(r, x))
}

/// Impedance matrix of a half-wave-dipole array.
pub fn impedance_matrix_dipoles(geom: &ArrayGeometry) -> Result<ImpedanceMatrix> {
    impedance_matrix_dipoles_with_self(geom, DIPOLE_SELF_IMPEDANCE)
}

/// As [`impedance_matrix_dipoles`] with a caller-supplied self impedance.
pub fn impedance_matrix_dipoles_with_self(
    geom: &ArrayGeometry,
    self_impedance: Complex64,
) -> Result<ImpedanceMatrix> {
    if geom.element_kind() != ElementKind::HalfWaveDipole {
        return Err(domain(
            "dipole impedance model requires a half-wave-dipole geometry",
        ));
    }
    let (nx, nz) = (geom.nx(), geom.nz());
    let (dx, dz, lambda) = (geom.dx(), geom.dz(), geom.wavelength());
    // Mutual terms depend only on the lattice offset (|Δi|, |Δk|).
    let table: Vec<Complex64> = (0..nx * nz)
        .into_par_iter()
        .map(|idx| {
            let (di, dk) = (idx % nx, idx / nx);
            if di == 0 && dk == 0 {
                Ok(self_impedance)
            } else {
                dipole_mutual_impedance(di as f64 * dx, dk as f64 * dz, lambda)
            }
        })
        .collect::<Result<_>>()?;
    let n = geom.len();
    let entries = CMatrix::from_fn(n, n, |a, b| {
        let (ia, ka) = geom.lattice_index(a);
        let (ib, kb) = geom.lattice_index(b);
        table[ia.abs_diff(ib) + nx * ka.abs_diff(kb)]
    });
    ImpedanceMatrix::new(entries, self_impedance)
}

/// Real impedance matrix `r_iso · sinc(2‖dₘ − dₙ‖/λ)` of isotropic elements.
pub fn impedance_matrix_isotropic(geom: &ArrayGeometry, r_iso: f64) -> Result<ImpedanceMatrix> {
    if !(r_iso.is_finite() && r_iso > 0.0) {
        return Err(domain(format!("r_iso must be positive, got {r_iso}")));
    }
    let kernel = sinc_kernel(geom.positions(), geom.wavelength())?;
    ImpedanceMatrix::new(
        kernel.map(|v| Complex64::new(r_iso * v, 0.0)),
        Complex64::new(r_iso, 0.0),
    )
}

fn loaded(z: &ImpedanceMatrix, port: Complex64) -> CMatrix {
    let n = z.dim();
    z.entries() + CMatrix::from_diagonal_element(n, n, port)
}

/// Transmit-side coupling `(1 + zS/zA) · Z · (Z + zS·I)⁻¹`.
pub fn coupling_tx(z: &ImpedanceMatrix, z_s: Complex64) -> Result<CouplingMatrix> {
    let f = Factorized::new(&loaded(z, z_s), "Tx coupling (Z + zS·I)")?;
    let scale = Complex64::new(1.0, 0.0) + z_s / z.self_impedance();
    Ok(CouplingMatrix {
        entries: z.entries() * f.inverse() * scale,
        side: Side::Tx,
        port_impedance: z_s,
        condition: Some(f.condition),
    })
}

/// Receive-side coupling `(zA + zL) · (Z + zL·I)⁻¹`.
pub fn coupling_rx(z: &ImpedanceMatrix, z_l: Complex64) -> Result<CouplingMatrix> {
    let f = Factorized::new(&loaded(z, z_l), "Rx coupling (Z + zL·I)")?;
    let scale = z.self_impedance() + z_l;
    Ok(CouplingMatrix {
        entries: f.inverse() * scale,
        side: Side::Rx,
        port_impedance: z_l,
        condition: Some(f.condition),
    })
}
