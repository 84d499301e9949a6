//! One module per subcommand. Each returns the paths it wrote.

use std::path::PathBuf;

use holoris::coupling::{
    coupling_rx, coupling_tx, impedance_matrix_dipoles_with_self, impedance_matrix_isotropic,
    CouplingMatrix, ImpedanceMatrix, Side,
};
use holoris::geometry::ArrayGeometry;
use holoris::Complex64;

use crate::config::{ElementModel, ExperimentConfig, PortSpec};
use crate::error::{Context, Result};
use crate::output::Output;

pub mod correlation;
pub mod eigen;
pub mod gain;
pub mod icsi;
pub mod mc_eigen;
pub mod spectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Correlation,
    Eigen,
    Spectrum,
    Gain,
    McEigen,
    Icsi,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Correlation,
        Experiment::Eigen,
        Experiment::Spectrum,
        Experiment::Gain,
        Experiment::McEigen,
        Experiment::Icsi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Correlation => "correlation",
            Experiment::Eigen => "eigen",
            Experiment::Spectrum => "spectrum",
            Experiment::Gain => "gain",
            Experiment::McEigen => "mc-eigen",
            Experiment::Icsi => "icsi",
        }
    }

    pub fn run(self, cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
        log::info!("running {}", self.name());
        match self {
            Experiment::Correlation => correlation::run(cfg, out),
            Experiment::Eigen => eigen::run(cfg, out),
            Experiment::Spectrum => spectrum::run(cfg, out),
            Experiment::Gain => gain::run(cfg, out),
            Experiment::McEigen => mc_eigen::run(cfg, out),
            Experiment::Icsi => icsi::run(cfg, out),
        }
    }
}

/// Element self impedance under `model`.
pub fn self_impedance(cfg: &ExperimentConfig, model: ElementModel) -> Complex64 {
    match model {
        ElementModel::Isotropic => Complex64::new(cfg.impedance.r_iso, 0.0),
        ElementModel::Dipole | ElementModel::None => cfg.impedance.dipole_self_impedance(),
    }
}

fn impedance(
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    model: ElementModel,
) -> Result<Option<ImpedanceMatrix>> {
    let what = || format!("impedance matrix for spacing {}", geom.dx());
    match model {
        ElementModel::Dipole => {
            impedance_matrix_dipoles_with_self(geom, cfg.impedance.dipole_self_impedance())
                .context(what)
                .map(Some)
        }
        ElementModel::Isotropic => impedance_matrix_isotropic(geom, cfg.impedance.r_iso)
            .context(what)
            .map(Some),
        ElementModel::None => Ok(None),
    }
}

/// Coupling matrices for several ports sharing one impedance matrix.
pub fn couplings(
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    model: ElementModel,
    side: Side,
    ports: &[PortSpec],
) -> Result<Vec<CouplingMatrix>> {
    let z = impedance(cfg, geom, model)?;
    let z_a = self_impedance(cfg, model);
    ports
        .iter()
        .map(|port| match &z {
            None => Ok(CouplingMatrix::identity(geom.len(), side)),
            Some(z) => {
                let zp = port.resolve(z_a);
                let c = match side {
                    Side::Tx => coupling_tx(z, zp),
                    Side::Rx => coupling_rx(z, zp),
                };
                c.context(|| {
                    format!(
                        "{side:?} coupling at spacing {} with port {}",
                        geom.dx(),
                        port.label()
                    )
                })
            }
        })
        .collect()
}

pub fn side_prefix(side: Side) -> &'static str {
    match side {
        Side::Tx => "tx",
        Side::Rx => "rx",
    }
}
