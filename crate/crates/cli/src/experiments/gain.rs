//! Array gain versus azimuth for each beamforming scheme.

use std::path::PathBuf;

use holoris::coupling::Side;
use holoris::response::{azimuth_grid, gain_sweep, BeamformingScheme};

use crate::config::ExperimentConfig;
use crate::error::{Context, Result};
use crate::experiments::couplings;
use crate::output::{db, num, slug, Output, Plot, Series, Table};

pub fn run(cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    let sw = &cfg.sweep;
    let model = cfg.impedance.model;
    let phis = azimuth_grid(sw.phi_points);
    let theta = sw.theta_deg.to_radians();
    let mut written = Vec::new();
    let mut summary = Table::new(
        "gain_summary",
        format!(
            "Peak array gain per spacing and scheme, zenith {}°, source {}",
            num(sw.theta_deg),
            sw.source_impedance.label()
        ),
        &[
            "spacing_over_lambda",
            "elements",
            "scheme",
            "peak_gain",
            "peak_phi_deg",
            "peak_gain_over_n",
        ],
    );

    for &dx in &sw.spacings {
        let geom = cfg
            .dipole_array(dx)
            .context(|| format!("gain array at spacing {dx}"))?;
        let n = geom.len();
        let c = couplings(cfg, &geom, model, Side::Tx, &[sw.source_impedance])?.remove(0);
        let tag = format!("d{}", slug(dx / cfg.wavelength));
        let mut plot = Plot::new(
            format!(
                "Array gain, spacing {}λ, {n} elements",
                slug(dx / cfg.wavelength)
            ),
            "azimuth (deg)",
            "gain (dB)",
        );
        for scheme in BeamformingScheme::ALL {
            let sweep = gain_sweep(&geom, &c, scheme, theta, &phis, sw.w0_mag)
                .context(|| format!("{} sweep at spacing {dx}", scheme.name()))?;
            let mut table = Table::new(
                format!("gain_{tag}_{}", scheme.name()),
                format!(
                    "Array gain of the {} scheme, spacing {}λ",
                    scheme.name(),
                    slug(dx / cfg.wavelength)
                ),
                &["phi_deg", "gain", "gain_db"],
            );
            let mut peak = (f64::NEG_INFINITY, 0.0);
            for &(phi, g) in &sweep {
                if g > peak.0 {
                    peak = (g, phi);
                }
                table.push(vec![num(phi.to_degrees()), num(g), db(g)]);
            }
            summary.push(vec![
                num(dx / cfg.wavelength),
                n.to_string(),
                scheme.name().into(),
                num(peak.0),
                num(peak.1.to_degrees()),
                num(peak.0 / n as f64),
            ]);
            written.push(out.csv(&table)?);
            plot.series
                .push(Series::lines(&table.file_name(), 1, 3, scheme.name()));
        }
        written.extend(out.gnuplot(&format!("gain_{tag}"), &plot)?);
    }
    written.push(out.csv(&summary)?);
    Ok(written)
}
