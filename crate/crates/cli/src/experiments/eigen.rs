//! Eigenvalue spectra of the isotropic correlation matrix on square grids.

use std::path::PathBuf;

use holoris::analysis::{eigen_spectrum, DOMINANT_THRESHOLD};
use holoris::correlation::correlation_matrix_isotropic;
use holoris::spectrum::{generator_sequence_with_step, power_spectrum};
use rayon::prelude::*;

use crate::config::{ApertureCase, ExperimentConfig};
use crate::error::{Context, Result};
use crate::output::{db, num, slug, Output, Plot, Series, Table};

struct CaseResult {
    case: ApertureCase,
    table: Table,
    summary: Vec<String>,
}

fn case_name(case: &ApertureCase, lambda: f64) -> String {
    format!(
        "L{}_d{}",
        slug(case.aperture / lambda),
        slug(case.spacing / lambda)
    )
}

fn run_case(cfg: &ExperimentConfig, case: ApertureCase) -> Result<CaseResult> {
    let lambda = cfg.wavelength;
    let name = case_name(&case, lambda);
    let what = || format!("eigen case {name}");
    let geom = case.geometry(lambda).context(what)?;
    let r0 = correlation_matrix_isotropic(&geom).context(what)?;
    let spec = eigen_spectrum(&r0, true)
        .context(what)?
        .with_geometry(&geom);
    let seq = generator_sequence_with_step(&geom, cfg.spectrum.sample_step);
    let samples = power_spectrum(&seq, &geom).context(what)?.sorted_values();

    let mut table = Table::new(
        format!("eigen_{name}"),
        format!(
            "Normalized eigenvalues of the isotropic correlation matrix, aperture {}λ, spacing {}λ, {} elements; \
             spectrum_sample is the sorted wavenumber spectrum",
            slug(case.aperture / lambda),
            slug(case.spacing / lambda),
            geom.len()
        ),
        &["index", "eigenvalue", "eigenvalue_db", "cumulative_fraction", "spectrum_sample"],
    );
    let total = spec.sum();
    let mut acc = 0.0;
    for (i, (&v, &g)) in spec.values().iter().zip(&samples).enumerate() {
        acc += v;
        table.push(vec![
            (i + 1).to_string(),
            num(v),
            db(v),
            num(acc / total),
            num(g),
        ]);
    }
    let summary = vec![
        num(case.aperture / lambda),
        num(case.spacing / lambda),
        geom.len().to_string(),
        spec.asymptotic_dof()
            .map_or(String::new(), |d| d.to_string()),
        spec.dominant_count().to_string(),
        spec.knee_index().map_or(String::new(), |k| k.to_string()),
        num(total),
    ];
    Ok(CaseResult {
        case,
        table,
        summary,
    })
}

pub fn run(cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    let results: Vec<CaseResult> = cfg
        .eigen
        .cases
        .par_iter()
        .map(|&case| run_case(cfg, case))
        .collect::<Result<_>>()?;

    let mut written = Vec::new();
    let mut summary = Table::new(
        "eigen_summary",
        format!(
            "Per-case eigenvalue statistics; dominant_count counts eigenvalues at least {DOMINANT_THRESHOLD} of the largest"
        ),
        &[
            "aperture_over_lambda",
            "spacing_over_lambda",
            "elements",
            "asymptotic_dof",
            "dominant_count",
            "knee_index",
            "eigenvalue_sum",
        ],
    );
    let mut plot = Plot::new(
        "Eigenvalues of the isotropic correlation matrix",
        "index",
        "eigenvalue / N",
    );
    plot.logscale_y = true;
    plot.settings.push("set yrange [1e-8:*]".into());
    for r in results {
        written.push(out.csv(&r.table)?);
        let title = format!(
            "{}λ, d = {}λ",
            slug(r.case.aperture / cfg.wavelength),
            slug(r.case.spacing / cfg.wavelength)
        );
        plot.series
            .push(Series::lines(&r.table.file_name(), 1, 2, title));
        let mut single = Plot::new(
            format!("Eigenvalues and sorted spectrum, {}", r.table.name),
            "index",
            "value",
        );
        single.logscale_y = true;
        single.settings.push("set yrange [1e-8:*]".into());
        single
            .series
            .push(Series::lines(&r.table.file_name(), 1, 2, "eigenvalue"));
        let mut s = Series::lines(&r.table.file_name(), 1, 5, "sorted spectrum");
        s.style = "points pointtype 6 pointsize 0.5";
        single.series.push(s);
        written.extend(out.gnuplot(&r.table.name, &single)?);
        summary.push(r.summary);
    }
    written.push(out.csv(&summary)?);
    written.extend(out.gnuplot("eigen_all", &plot)?);
    Ok(written)
}
