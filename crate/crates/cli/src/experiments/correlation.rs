//! Spatial correlation surface versus pair offset.

use std::path::PathBuf;

use holoris::specfun::sinc;

use crate::config::ExperimentConfig;
use crate::error::{Context, Result};
use crate::output::{num, Output, Plot, Series, Table};

pub fn run(cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    let c = &cfg.correlation;
    let lambda = cfg.wavelength;
    let count = (c.max_offset / c.step).floor() as usize + 1;
    let offsets: Vec<f64> = (0..count).map(|i| i as f64 * c.step).collect();

    let mut table = Table::new(
        "correlation_surface",
        "Isotropic correlation versus element offset",
        &["dx_over_lambda", "dz_over_lambda", "correlation"],
    );
    for &dz in &offsets {
        for &dx in &offsets {
            let r = sinc(2.0 * dx.hypot(dz) / lambda).context(|| "correlation surface".into())?;
            table.push(vec![num(dx / lambda), num(dz / lambda), num(r)]);
        }
    }
    let mut written = vec![out.csv(&table)?];

    let mut plot = Plot::new("Isotropic correlation", "Δx/λ", "Δz/λ");
    plot.surface = true;
    plot.settings = vec!["set view map".into(), "set palette rgb 33,13,10".into()];
    plot.series.push(Series {
        file: table.file_name(),
        using: "1:2:3".into(),
        title: "correlation".into(),
        style: "points pointtype 5 pointsize 0.6 palette",
    });
    written.extend(out.gnuplot(&table.name, &plot)?);
    Ok(written)
}
