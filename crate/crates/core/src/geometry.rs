//! Element layouts for planar RIS apertures in the `xoz` plane.
//!
//! Elements are ordered row-major with the x index fastest:
//! element `i + nx * k` sits at `(i * dx, 0, k * dz)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Relative tolerance on aperture/spacing ratios being integral.
const INTEGRAL_RATIO_TOL: f64 = 1e-9;

pub type Point3 = [f64; 3];

/// A far-field direction: azimuth `phi` from +x toward +y, zenith `theta` from +z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    phi: f64,
    theta: f64,
}

impl Direction {
    /// Both angles in radians, each within `[0, π]`.
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        let ok = |a: f64| a.is_finite() && (0.0..=std::f64::consts::PI).contains(&a);
        if !ok(phi) || !ok(theta) {
            return Err(domain(format!(
                "direction angles must lie in [0, π], got phi={phi}, theta={theta}"
            )));
        }
        Ok(Self { phi, theta })
    }

    pub fn from_degrees(phi_deg: f64, theta_deg: f64) -> Result<Self> {
        Self::new(phi_deg.to_radians(), theta_deg.to_radians())
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Unit vector `(sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn unit_direction(dir: Direction) -> Point3 {
    let (st, ct) = dir.theta.sin_cos();
    let (sp, cp) = dir.phi.sin_cos();
    [st * cp, st * sp, ct]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Isotropic,
    HalfWaveDipole,
}

/// Serializable description from which an [`ArrayGeometry`] is built.
///
/// All lengths share one unit; configs normally use wavelengths with
/// `wavelength = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "snake_case", deny_unknown_fields)]
pub enum Layout {
    UniformGrid {
        aperture_x: f64,
        aperture_z: f64,
        spacing_x: f64,
        spacing_z: f64,
        wavelength: f64,
    },
    DipoleArray {
        aperture_x: f64,
        spacing_x: f64,
        rows: usize,
        gap: f64,
        wavelength: f64,
    },
    Lattice {
        nx: usize,
        nz: usize,
        spacing_x: f64,
        spacing_z: f64,
        wavelength: f64,
        element_kind: ElementKind,
    },
}

impl Layout {
    pub fn build(&self) -> Result<ArrayGeometry> {
        match *self {
            Layout::UniformGrid {
                aperture_x,
                aperture_z,
                spacing_x,
                spacing_z,
                wavelength,
            } => make_uniform_grid(aperture_x, aperture_z, spacing_x, spacing_z, wavelength),
            Layout::DipoleArray {
                aperture_x,
                spacing_x,
                rows,
                gap,
                wavelength,
            } => make_dipole_array(aperture_x, spacing_x, rows, gap, wavelength),
            Layout::Lattice {
                nx,
                nz,
                spacing_x,
                spacing_z,
                wavelength,
                element_kind,
            } => ArrayGeometry::lattice(nx, nz, spacing_x, spacing_z, wavelength, element_kind),
        }
    }
}

/// A discretized planar aperture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Layout", into = "Layout")]
pub struct ArrayGeometry {
    layout: Layout,
    wavelength: f64,
    dx: f64,
    dz: f64,
    lx: f64,
    lz: f64,
    nx: usize,
    nz: usize,
    positions: Vec<Point3>,
    element_kind: ElementKind,
    dipole_length: Option<f64>,
}

impl TryFrom<Layout> for ArrayGeometry {
    type Error = Error;

    fn try_from(layout: Layout) -> Result<Self> {
        layout.build()
    }
}

impl From<ArrayGeometry> for Layout {
    fn from(geom: ArrayGeometry) -> Self {
        geom.layout
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn integral_ratio(name: &str, length: f64, spacing: f64) -> Result<usize> {
    let ratio = length / spacing;
    let n = ratio.round();
    if (ratio - n).abs() > INTEGRAL_RATIO_TOL * ratio.max(1.0) {
        return Err(Error::Config(format!(
            "{name}: aperture/spacing ratio {ratio} is not integral"
        )));
    }
    Ok(n as usize)
}

/// Uniform grid with elements at both aperture ends: `Nx = Lx/dx + 1`.
pub fn make_uniform_grid(
    lx: f64,
    lz: f64,
    dx: f64,
    dz: f64,
    wavelength: f64,
) -> Result<ArrayGeometry> {
    for (name, v) in [
        ("Lx", lx),
        ("Lz", lz),
        ("dx", dx),
        ("dz", dz),
        ("wavelength", wavelength),
    ] {
        require_positive(name, v)?;
    }
    let nx = integral_ratio("x axis", lx, dx)? + 1;
    let nz = integral_ratio("z axis", lz, dz)? + 1;
    let mut geom = ArrayGeometry::lattice(nx, nz, dx, dz, wavelength, ElementKind::Isotropic)?;
    geom.lx = lx;
    geom.lz = lz;
    geom.layout = Layout::UniformGrid {
        aperture_x: lx,
        aperture_z: lz,
        spacing_x: dx,
        spacing_z: dz,
        wavelength,
    };
    Ok(geom)
}

/// Rows of vertical half-wave dipoles stacked along z with `gap` between tips.
///
/// The vertical center spacing is `λ/2 + gap`; the reported `Lz` is the
/// tip-to-tip extent `rows·λ/2 + (rows − 1)·gap`.
pub fn make_dipole_array(
    lx: f64,
    dx: f64,
    rows: usize,
    gap: f64,
    wavelength: f64,
) -> Result<ArrayGeometry> {
    require_positive("Lx", lx)?;
    require_positive("dx", dx)?;
    require_positive("wavelength", wavelength)?;
    if rows == 0 {
        return Err(domain("dipole array needs at least one row"));
    }
    if !gap.is_finite() || gap < 0.0 {
        return Err(domain(format!(
            "dipole gap must be non-negative, got {gap}"
        )));
    }
    let nx = integral_ratio("x axis", lx, dx)? + 1;
    let half = wavelength / 2.0;
    let dz = half + gap;
    let mut geom =
        ArrayGeometry::lattice(nx, rows, dx, dz, wavelength, ElementKind::HalfWaveDipole)?;
    geom.lx = lx;
    geom.lz = rows as f64 * half + (rows - 1) as f64 * gap;
    geom.layout = Layout::DipoleArray {
        aperture_x: lx,
        spacing_x: dx,
        rows,
        gap,
        wavelength,
    };
    Ok(geom)
}

impl ArrayGeometry {
    /// General `nx × nz` lattice; apertures are the lattice spans.
    pub fn lattice(
        nx: usize,
        nz: usize,
        dx: f64,
        dz: f64,
        wavelength: f64,
        element_kind: ElementKind,
    ) -> Result<Self> {
        if nx == 0 || nz == 0 {
            return Err(domain(format!("element counts must be ≥ 1, got {nx}×{nz}")));
        }
        require_positive("dx", dx)?;
        require_positive("dz", dz)?;
        require_positive("wavelength", wavelength)?;
        let positions = (0..nz)
            .flat_map(|k| (0..nx).map(move |i| [i as f64 * dx, 0.0, k as f64 * dz]))
            .collect();
        Ok(Self {
            layout: Layout::Lattice {
                nx,
                nz,
                spacing_x: dx,
                spacing_z: dz,
                wavelength,
                element_kind,
            },
            wavelength,
            dx,
            dz,
            lx: (nx - 1) as f64 * dx,
            lz: (nz - 1) as f64 * dz,
            nx,
            nz,
            positions,
            element_kind,
            dipole_length: match element_kind {
                ElementKind::HalfWaveDipole => Some(wavelength / 2.0),
                ElementKind::Isotropic => None,
            },
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Free-space wavenumber `κ = 2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Center-to-center spacing along z (`λ/2 + gap` for dipole arrays).
    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn lz(&self) -> f64 {
        self.lz
    }

    /// Distance between the first and last element centers along x.
    pub fn span_x(&self) -> f64 {
        (self.nx - 1) as f64 * self.dx
    }

    pub fn span_z(&self) -> f64 {
        (self.nz - 1) as f64 * self.dz
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Point3] {
        &self.positions
    }

    pub fn element_kind(&self) -> ElementKind {
        self.element_kind
    }

    pub fn dipole_length(&self) -> Option<f64> {
        self.dipole_length
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Lattice coordinates `(i, k)` of element `n`.
    pub fn lattice_index(&self, n: usize) -> (usize, usize) {
        (n % self.nx, n / self.nx)
    }
}
