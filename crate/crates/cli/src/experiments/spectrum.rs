//! Wavenumber power spectrum on the element grid, plus a dense overview.

use std::path::PathBuf;

use holoris::spectrum::{generator_sequence_with_step, power_spectrum, transform_grid, Regime};
use rayon::prelude::*;

use crate::config::{ApertureCase, ExperimentConfig};
use crate::error::{Context, Result};
use crate::output::{num, slug, Output, Plot, Series, Table};

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Propagating => "propagating",
        Regime::Evanescent => "evanescent",
    }
}

struct CaseResult {
    grid: Table,
    overview: Table,
    summary: Vec<String>,
}

fn run_case(cfg: &ExperimentConfig, case: ApertureCase) -> Result<CaseResult> {
    let lambda = cfg.wavelength;
    let sc = &cfg.spectrum;
    let name = format!(
        "L{}_d{}",
        slug(case.aperture / lambda),
        slug(case.spacing / lambda)
    );
    let what = || format!("spectrum case {name}");
    let geom = case.geometry(lambda).context(what)?;
    let seq = generator_sequence_with_step(&geom, sc.sample_step);
    let spec = power_spectrum(&seq, &geom).context(what)?;
    let kappa = spec.wavenumber();

    let mut grid = Table::new(
        format!("spectrum_{name}"),
        format!(
            "Wavenumber power spectrum on the {}×{} element grid, aperture {}λ, spacing {}λ",
            geom.nx(),
            geom.nz(),
            slug(case.aperture / lambda),
            slug(case.spacing / lambda)
        ),
        &["kx_over_kappa", "kz_over_kappa", "power", "regime"],
    );
    for (kx, kz, g, regime) in spec.samples() {
        grid.push(vec![
            num(kx / kappa),
            num(kz / kappa),
            num(g),
            regime_name(regime).into(),
        ]);
    }

    let n = sc.overview_points;
    let ks: Vec<f64> = (0..n)
        .map(|i| sc.overview_range * (2.0 * i as f64 / (n - 1) as f64 - 1.0))
        .collect();
    let (sx, sz) = seq.steps();
    let wx: Vec<f64> = ks.iter().map(|k| k * kappa * sx).collect();
    let wz: Vec<f64> = ks.iter().map(|k| k * kappa * sz).collect();
    let dense = transform_grid(&seq, &wx, &wz);
    let mut overview = Table::new(
        format!("spectrum_overview_{name}"),
        format!(
            "Dense wavenumber spectrum over ±{}κ, aperture {}λ, spacing {}λ",
            num(sc.overview_range),
            slug(case.aperture / lambda),
            slug(case.spacing / lambda)
        ),
        &["kx_over_kappa", "kz_over_kappa", "power"],
    );
    for (s, kz) in ks.iter().enumerate() {
        for (t, kx) in ks.iter().enumerate() {
            overview.push(vec![num(*kx), num(*kz), num(dense[(t, s)])]);
        }
    }

    let summary = vec![
        num(case.aperture / lambda),
        num(case.spacing / lambda),
        geom.len().to_string(),
        spec.propagating_count().to_string(),
        num(spec.sum()),
        num(spec.sorted_values()[0]),
    ];
    Ok(CaseResult {
        grid,
        overview,
        summary,
    })
}

pub fn run(cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    let results: Vec<CaseResult> = cfg
        .spectrum
        .cases
        .par_iter()
        .map(|&case| run_case(cfg, case))
        .collect::<Result<_>>()?;

    let mut written = Vec::new();
    let mut summary = Table::new(
        "spectrum_summary",
        "Per-case spectrum statistics; power_sum equals one when the spectrum is consistent with the eigenvalues",
        &[
            "aperture_over_lambda",
            "spacing_over_lambda",
            "elements",
            "propagating_count",
            "power_sum",
            "peak_power",
        ],
    );
    for r in results {
        for table in [&r.grid, &r.overview] {
            written.push(out.csv(table)?);
            let mut plot = Plot::new(table.name.replace('_', " "), "kx/κ", "kz/κ");
            plot.surface = true;
            plot.settings = vec!["set view map".into(), "set size ratio -1".into()];
            plot.series.push(Series {
                file: table.file_name(),
                using: "1:2:3".into(),
                title: "power".into(),
                style: "points pointtype 5 pointsize 0.5 palette",
            });
            written.extend(out.gnuplot(&table.name, &plot)?);
        }
        summary.push(r.summary);
    }
    written.push(out.csv(&summary)?);
    Ok(written)
}
