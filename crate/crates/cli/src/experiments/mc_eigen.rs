//! Eigenvalues of the coupling-aware effective correlation matrix.

use std::path::PathBuf;

use holoris::analysis::{
    effective_correlation, eigen_spectrum, icsi, top_half_log_slope, EigenSpectrum,
};
use holoris::correlation::{correlation_matrix_isotropic, CorrelationMatrix};
use holoris::coupling::{CouplingMatrix, Side};
use rayon::prelude::*;

use crate::config::{ElementModel, ExperimentConfig, NamedPort, PortSpec};
use crate::error::{Context, Result};
use crate::experiments::{couplings, side_prefix};
use crate::output::{num, slug, Output, Plot, Series, Table};

struct Curve {
    name: String,
    spectrum: EigenSpectrum,
    icsi: f64,
}

fn curve(name: String, r: &CorrelationMatrix, c: Option<&CouplingMatrix>) -> Result<Curve> {
    let what = || format!("effective correlation `{name}`");
    let eff;
    let r = match c {
        Some(c) => {
            eff = effective_correlation(c, r).context(what)?;
            &eff
        }
        None => r,
    };
    Ok(Curve {
        spectrum: eigen_spectrum(r, false).context(what)?,
        icsi: icsi(r.entries()).context(what)?,
        name,
    })
}

fn wide_table(name: String, title: String, curves: &[&Curve]) -> Table {
    let mut columns = vec!["index".to_string()];
    columns.extend(curves.iter().map(|c| c.name.clone()));
    let mut table = Table::with_columns(name, title, columns);
    let n = curves[0].spectrum.len();
    for i in 0..n {
        let mut row = vec![(i + 1).to_string()];
        row.extend(curves.iter().map(|c| num(c.spectrum.values()[i])));
        table.push(row);
    }
    table
}

fn plot_for(table: &Table, title: String) -> Plot {
    let mut plot = Plot::new(title, "index", "eigenvalue");
    plot.logscale_y = true;
    plot.settings.push("set yrange [1e-6:*]".into());
    for (i, col) in table.columns.iter().enumerate().skip(1) {
        plot.series.push(Series::lines(
            &table.file_name(),
            1,
            i + 1,
            col.replace('_', " "),
        ));
    }
    plot
}

struct SpacingResult {
    tables: Vec<(Table, Plot)>,
    summary: Vec<Vec<String>>,
}

fn run_spacing(cfg: &ExperimentConfig, dx: f64) -> Result<SpacingResult> {
    let lambda = cfg.wavelength;
    let geom = cfg
        .dipole_array(dx)
        .context(|| format!("coupling array at spacing {dx}"))?;
    let r0 =
        correlation_matrix_isotropic(&geom).context(|| format!("correlation at spacing {dx}"))?;
    let model = cfg.impedance.model;
    let tag = format!("d{}", slug(dx / lambda));

    let baseline = curve("no_mc".into(), &r0, None)?;
    let mut coupled = Vec::new();
    for (side, ports) in [
        (Side::Tx, &cfg.impedance.source_impedances),
        (Side::Rx, &cfg.impedance.load_impedances),
    ] {
        let cs = couplings(cfg, &geom, model, side, ports)?;
        for (port, c) in ports.iter().zip(&cs) {
            coupled.push(curve(
                format!("{}_{}", side_prefix(side), port.label()),
                &r0,
                Some(c),
            )?);
        }
    }
    let matched = [PortSpec::Named(NamedPort::ConjugateMatch)];
    let mut models = Vec::new();
    for (name, m) in [
        ("rx_dipole", ElementModel::Dipole),
        ("rx_isotropic", ElementModel::Isotropic),
    ] {
        let c = couplings(cfg, &geom, m, Side::Rx, &matched)?.remove(0);
        models.push(curve(name.into(), &r0, Some(&c))?);
    }

    let heading = format!(
        "spacing {}λ, {} elements, {} coupling model",
        slug(dx / lambda),
        geom.len(),
        model.name()
    );
    let mut all: Vec<&Curve> = vec![&baseline];
    all.extend(coupled.iter());
    let ports_table = wide_table(
        format!("mc_eigen_{tag}"),
        format!("Eigenvalues of the effective correlation matrix per port impedance, {heading}"),
        &all,
    );
    let mut cmp: Vec<&Curve> = vec![&baseline];
    cmp.extend(models.iter());
    let models_table = wide_table(
        format!("mc_eigen_models_{tag}"),
        format!(
            "Eigenvalues with conjugate-matched loads, dipole versus isotropic coupling, spacing {}λ",
            slug(dx / lambda)
        ),
        &cmp,
    );

    let mut summary = Vec::new();
    for c in all.iter().copied().chain(models.iter()) {
        let slope =
            top_half_log_slope(c.spectrum.values()).context(|| format!("slope of `{}`", c.name))?;
        summary.push(vec![
            num(dx / lambda),
            geom.len().to_string(),
            c.name.clone(),
            c.spectrum
                .knee_index()
                .map_or(String::new(), |k| k.to_string()),
            c.spectrum.dominant_count().to_string(),
            num(c.spectrum.mean_magnitude()),
            num(slope),
            num(c.icsi),
        ]);
    }
    let p1 = plot_for(
        &ports_table,
        format!(
            "Effective correlation eigenvalues, spacing {}λ",
            slug(dx / lambda)
        ),
    );
    let p2 = plot_for(
        &models_table,
        format!(
            "Dipole versus isotropic coupling, spacing {}λ",
            slug(dx / lambda)
        ),
    );
    Ok(SpacingResult {
        tables: vec![(ports_table, p1), (models_table, p2)],
        summary,
    })
}

pub fn run(cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    let results: Vec<SpacingResult> = cfg
        .geometry
        .spacings
        .par_iter()
        .map(|&dx| run_spacing(cfg, dx))
        .collect::<Result<_>>()?;
    let mut summary = Table::new(
        "mc_eigen_summary",
        "Per-curve statistics of the effective correlation eigenvalues",
        &[
            "spacing_over_lambda",
            "elements",
            "curve",
            "knee_index",
            "dominant_count",
            "mean_eigenvalue",
            "top_half_log_slope",
            "icsi",
        ],
    );
    let mut written = Vec::new();
    for r in results {
        for (table, plot) in &r.tables {
            written.push(out.csv(table)?);
            written.extend(out.gnuplot(&table.name, plot)?);
        }
        for row in r.summary {
            summary.push(row);
        }
    }
    written.push(out.csv(&summary)?);
    Ok(written)
}
