//! CSV and gnuplot writers.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// Shortest round-trip representation, so reruns are byte-identical.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn db(v: f64) -> String {
    num(10.0 * v.abs().max(1e-300).log10())
}

/// Slug for a length in wavelengths, e.g. `0.3333` or `12`.
pub fn slug(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub struct Table {
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(
        name: impl Into<String>,
        title: impl Into<String>,
        columns: Vec<String>,
    ) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

/// Writes experiment artifacts under one directory.
pub struct Output {
    dir: PathBuf,
    gnuplot: bool,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Output {
    pub fn new(dir: PathBuf, gnuplot: bool) -> Result<Self> {
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(Self { dir, gnuplot })
    }

    /// Writes `# title`, the header row and the data rows.
    pub fn csv(&self, table: &Table) -> Result<PathBuf> {
        let path = self.dir.join(table.file_name());
        let file = File::create(&path).map_err(io_err(&path))?;
        let mut buf = BufWriter::new(file);
        writeln!(buf, "# {}", table.title).map_err(io_err(&path))?;
        let mut w = csv::Writer::from_writer(buf);
        let to_io = |e: csv::Error| match e.into_kind() {
            csv::ErrorKind::Io(e) => e,
            other => std::io::Error::other(format!("{other:?}")),
        };
        w.write_record(&table.columns)
            .map_err(|e| io_err(&path)(to_io(e)))?;
        for row in &table.rows {
            w.write_record(row).map_err(|e| io_err(&path)(to_io(e)))?;
        }
        w.flush().map_err(io_err(&path))?;
        Ok(path)
    }

    /// Writes `name.gp` if gnuplot output is enabled.
    pub fn gnuplot(&self, name: &str, script: &Plot) -> Result<Option<PathBuf>> {
        if !self.gnuplot {
            return Ok(None);
        }
        let path = self.dir.join(format!("{name}.gp"));
        fs::write(&path, script.render(name)).map_err(io_err(&path))?;
        Ok(Some(path))
    }
}

/// One curve: data file, `using` spec and legend title.
pub struct Series {
    pub file: String,
    pub using: String,
    pub title: String,
    pub style: &'static str,
}

impl Series {
    pub fn lines(file: &str, x: usize, y: usize, title: impl Into<String>) -> Self {
        Self {
            file: file.into(),
            using: format!("{x}:{y}"),
            title: title.into(),
            style: "lines",
        }
    }
}

pub struct Plot {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub logscale_y: bool,
    pub settings: Vec<String>,
    pub series: Vec<Series>,
    /// `splot` a single surface instead of `plot`.
    pub surface: bool,
}

impl Plot {
    pub fn new(title: impl Into<String>, xlabel: &str, ylabel: &str) -> Self {
        Self {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            logscale_y: false,
            settings: Vec::new(),
            series: Vec::new(),
            surface: false,
        }
    }

    fn render(&self, name: &str) -> String {
        let mut s = String::new();
        s.push_str("set terminal pngcairo size 900,600\n");
        s.push_str(&format!("set output '{name}.png'\n"));
        s.push_str("set datafile separator ','\n");
        s.push_str("set key autotitle columnhead\n");
        s.push_str(&format!("set title \"{}\"\n", self.title));
        s.push_str(&format!("set xlabel \"{}\"\n", self.xlabel));
        s.push_str(&format!("set ylabel \"{}\"\n", self.ylabel));
        if self.logscale_y {
            s.push_str("set logscale y\nset format y '10^{%L}'\n");
        }
        for line in &self.settings {
            s.push_str(line);
            s.push('\n');
        }
        let cmd = if self.surface { "splot" } else { "plot" };
        let parts: Vec<String> = self
            .series
            .iter()
            .map(|c| {
                format!(
                    "'{}' using {} with {} title \"{}\"",
                    c.file, c.using, c.style, c.title
                )
            })
            .collect();
        s.push_str(&format!("{cmd} {}\n", parts.join(", \\\n     ")));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1e-300), "1e-300");
        assert_eq!(db(0.0), "-3000.0");
        assert_eq!(db(10.0), "10.0");
        assert_eq!(slug(1.0 / 3.0), "0.3333");
        assert_eq!(slug(12.0), "12");
        assert_eq!(slug(0.125), "0.125");
    }

    #[test]
    fn csv_layout() {
        let dir = std::env::temp_dir().join(format!("holoris-output-{}", std::process::id()));
        let out = Output::new(dir.clone(), true).unwrap();
        let mut t = Table::new("t", "demo", &["a", "b"]);
        t.push(vec![num(1.0), "x".into()]);
        let path = out.csv(&t).unwrap();
        assert_eq!(fs::read_to_string(path).unwrap(), "# demo\na,b\n1.0,x\n");
        let mut p = Plot::new("demo", "a", "b");
        p.series.push(Series::lines("t.csv", 1, 2, "b"));
        let gp = fs::read_to_string(out.gnuplot("t", &p).unwrap().unwrap()).unwrap();
        assert!(gp.contains("plot 't.csv' using 1:2 with lines title \"b\""));
        fs::remove_dir_all(dir).unwrap();
    }
}
