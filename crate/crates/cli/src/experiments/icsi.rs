//! Inter-channel spatial interference index per spacing and port impedance.

use std::path::PathBuf;

use holoris::analysis::{effective_correlation, icsi};
use holoris::correlation::correlation_matrix_isotropic;
use holoris::coupling::Side;

use crate::config::ExperimentConfig;
use crate::error::{Context, Result};
use crate::experiments::couplings;
use crate::output::{num, slug, Output, Table};

pub fn run(cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    let model = cfg.impedance.model;
    let mut written = Vec::new();
    for (side, ports, name, title) in [
        (
            Side::Tx,
            &cfg.impedance.source_impedances,
            "icsi_tx",
            "ICSI of the effective transmit correlation per source impedance",
        ),
        (
            Side::Rx,
            &cfg.impedance.load_impedances,
            "icsi_rx",
            "ICSI of the effective receive correlation per load impedance",
        ),
    ] {
        let mut columns = vec![
            "spacing_over_lambda".to_string(),
            "elements".into(),
            "no_mc".into(),
        ];
        columns.extend(ports.iter().map(|p| p.label()));
        let mut table = Table::with_columns(name, title, columns);
        for &dx in &cfg.geometry.spacings {
            let what = || format!("ICSI at spacing {}", slug(dx / cfg.wavelength));
            let geom = cfg.dipole_array(dx).context(what)?;
            let r0 = correlation_matrix_isotropic(&geom).context(what)?;
            let mut row = vec![
                num(dx / cfg.wavelength),
                geom.len().to_string(),
                num(icsi(r0.entries()).context(what)?),
            ];
            for c in couplings(cfg, &geom, model, side, ports)? {
                let r = effective_correlation(&c, &r0).context(what)?;
                row.push(num(icsi(r.entries()).context(what)?));
            }
            table.push(row);
        }
        written.push(out.csv(&table)?);
    }
    Ok(written)
}
