//! JSON experiment configuration.
//!
//! Every field has a default; the defaults reproduce the published
//! experiments, so `{}` is a complete config. Lengths share the unit of
//! `wavelength`.

use std::path::{Path, PathBuf};

use holoris::coupling::DIPOLE_SELF_IMPEDANCE;
use holoris::geometry::{make_dipole_array, make_uniform_grid, ArrayGeometry};
use holoris::spectrum::SampleStep;
use holoris::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub wavelength: f64,
    pub geometry: GeometryConfig,
    pub impedance: ImpedanceConfig,
    pub correlation: CorrelationConfig,
    pub eigen: EigenConfig,
    pub spectrum: SpectrumConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

/// Dipole-row arrays used by the coupling experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub aperture_x: f64,
    pub dipole_rows: usize,
    pub dipole_gap: f64,
    pub spacings: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementModel {
    Dipole,
    Isotropic,
    /// No coupling: every coupling matrix is the identity.
    None,
}

impl ElementModel {
    pub fn name(self) -> &'static str {
        match self {
            ElementModel::Dipole => "dipole",
            ElementModel::Isotropic => "isotropic",
            ElementModel::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedPort {
    /// The complex conjugate of the element self impedance.
    ConjugateMatch,
}

/// A source or load impedance: `[re, im]` ohms or a named choice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PortSpec {
    Ohms([f64; 2]),
    Named(NamedPort),
}

impl PortSpec {
    pub fn resolve(&self, self_impedance: Complex64) -> Complex64 {
        match *self {
            PortSpec::Ohms([re, im]) => Complex64::new(re, im),
            PortSpec::Named(NamedPort::ConjugateMatch) => self_impedance.conj(),
        }
    }

    /// Identifier used in column and file names, e.g. `z50` or `z50+10j`.
    pub fn label(&self) -> String {
        match *self {
            PortSpec::Ohms([re, 0.0]) => format!("z{re}"),
            PortSpec::Ohms([re, im]) => format!("z{re}{im:+}j"),
            PortSpec::Named(NamedPort::ConjugateMatch) => "conjugate_match".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImpedanceConfig {
    pub model: ElementModel,
    /// Dipole self impedance `[re, im]` ohms.
    pub self_impedance: [f64; 2],
    /// Radiation resistance of an isotropic element, ohms.
    pub r_iso: f64,
    pub source_impedances: Vec<PortSpec>,
    pub load_impedances: Vec<PortSpec>,
}

impl ImpedanceConfig {
    pub fn dipole_self_impedance(&self) -> Complex64 {
        Complex64::new(self.self_impedance[0], self.self_impedance[1])
    }
}

/// Correlation surface over pair offsets `0..=max_offset` on both axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrelationConfig {
    pub max_offset: f64,
    pub step: f64,
}

/// A square uniform grid: `aperture × aperture` with spacing `spacing`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApertureCase {
    pub aperture: f64,
    pub spacing: f64,
}

impl ApertureCase {
    pub fn geometry(&self, wavelength: f64) -> holoris::Result<ArrayGeometry> {
        make_uniform_grid(
            self.aperture,
            self.aperture,
            self.spacing,
            self.spacing,
            wavelength,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenConfig {
    pub cases: Vec<ApertureCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub cases: Vec<ApertureCase>,
    pub sample_step: SampleStep,
    /// Half-width of the dense overview grid in units of `κ`.
    pub overview_range: f64,
    pub overview_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub theta_deg: f64,
    pub phi_points: usize,
    pub w0_mag: f64,
    pub spacings: Vec<f64>,
    pub source_impedance: PortSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Gnuplot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: Option<PathBuf>,
    pub formats: Vec<OutputFormat>,
}

fn standard_ports() -> Vec<PortSpec> {
    vec![
        PortSpec::Named(NamedPort::ConjugateMatch),
        PortSpec::Ohms([50.0, 0.0]),
        PortSpec::Ohms([300.0, 0.0]),
    ]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            wavelength: 1.0,
            geometry: GeometryConfig::default(),
            impedance: ImpedanceConfig::default(),
            correlation: CorrelationConfig::default(),
            eigen: EigenConfig::default(),
            spectrum: SpectrumConfig::default(),
            sweep: SweepConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            aperture_x: 4.0,
            dipole_rows: 8,
            dipole_gap: 0.02,
            spacings: vec![0.5, 0.25, 0.125],
        }
    }
}

impl Default for ImpedanceConfig {
    fn default() -> Self {
        Self {
            model: ElementModel::Dipole,
            self_impedance: [DIPOLE_SELF_IMPEDANCE.re, DIPOLE_SELF_IMPEDANCE.im],
            r_iso: holoris::coupling::DEFAULT_R_ISO,
            source_impedances: standard_ports(),
            load_impedances: standard_ports(),
        }
    }
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self {
            max_offset: 3.0,
            step: 0.05,
        }
    }
}

const THIRD: f64 = 1.0 / 3.0;

impl Default for EigenConfig {
    fn default() -> Self {
        let case = |aperture, spacing| ApertureCase { aperture, spacing };
        Self {
            cases: vec![
                case(12.0, 0.5),
                case(12.0, THIRD),
                case(12.0, 0.25),
                case(4.0, 0.5),
                case(4.0, 0.25),
                case(4.0, 0.125),
            ],
        }
    }
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        let case = |aperture, spacing| ApertureCase { aperture, spacing };
        Self {
            cases: vec![
                case(12.0, THIRD),
                case(4.0, 0.5),
                case(4.0, 0.25),
                case(4.0, 0.125),
            ],
            sample_step: SampleStep::SpanOverCount,
            overview_range: 4.0,
            overview_points: 161,
        }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theta_deg: 90.0,
            phi_points: 181,
            w0_mag: 1.0,
            spacings: vec![0.5, 0.125],
            source_impedance: PortSpec::Named(NamedPort::ConjugateMatch),
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            formats: vec![OutputFormat::Csv, OutputFormat::Gnuplot],
        }
    }
}

/// A semantic problem with a config value: dotted field path and message.
#[derive(Debug)]
pub struct Invalid {
    pub field: String,
    pub message: String,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> Invalid {
    Invalid {
        field: field.into(),
        message: message.into(),
    }
}

fn positive(field: &str, v: f64) -> std::result::Result<(), Invalid> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl ExperimentConfig {
    /// Dipole-row array with horizontal spacing `dx`.
    pub fn dipole_array(&self, dx: f64) -> holoris::Result<ArrayGeometry> {
        let g = &self.geometry;
        make_dipole_array(
            g.aperture_x,
            dx,
            g.dipole_rows,
            g.dipole_gap,
            self.wavelength,
        )
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.output.formats.contains(&format)
    }

    pub fn validate(&self) -> std::result::Result<(), Invalid> {
        positive("wavelength", self.wavelength)?;

        let g = &self.geometry;
        positive("geometry.aperture_x", g.aperture_x)?;
        if g.dipole_rows == 0 {
            return Err(invalid("geometry.dipole_rows", "must be at least 1"));
        }
        if !(g.dipole_gap.is_finite() && g.dipole_gap >= 0.0) {
            return Err(invalid("geometry.dipole_gap", "must be non-negative"));
        }
        if g.spacings.is_empty() {
            return Err(invalid(
                "geometry.spacings",
                "must list at least one spacing",
            ));
        }
        for (i, &d) in g.spacings.iter().enumerate() {
            let field = format!("geometry.spacings[{i}]");
            positive(&field, d)?;
            self.dipole_array(d)
                .map_err(|e| invalid(field, e.to_string()))?;
        }

        let z = &self.impedance;
        if !(z.self_impedance.iter().all(|v| v.is_finite()) && z.self_impedance[0] > 0.0) {
            return Err(invalid(
                "impedance.self_impedance",
                "needs a positive finite real part and a finite imaginary part",
            ));
        }
        positive("impedance.r_iso", z.r_iso)?;
        for (name, list) in [
            ("impedance.source_impedances", &z.source_impedances),
            ("impedance.load_impedances", &z.load_impedances),
        ] {
            if list.is_empty() {
                return Err(invalid(name, "must list at least one impedance"));
            }
            for (i, p) in list.iter().enumerate() {
                check_port(&format!("{name}[{i}]"), p)?;
            }
        }

        let c = &self.correlation;
        positive("correlation.max_offset", c.max_offset)?;
        positive("correlation.step", c.step)?;
        if c.max_offset / c.step > 10_000.0 {
            return Err(invalid(
                "correlation.step",
                "grid would exceed 10001 points per axis",
            ));
        }

        for (section, cases) in [
            ("eigen.cases", &self.eigen.cases),
            ("spectrum.cases", &self.spectrum.cases),
        ] {
            for (i, case) in cases.iter().enumerate() {
                let field = format!("{section}[{i}]");
                positive(&format!("{field}.aperture"), case.aperture)?;
                positive(&format!("{field}.spacing"), case.spacing)?;
                case.geometry(self.wavelength)
                    .map_err(|e| invalid(format!("{field}.spacing"), e.to_string()))?;
            }
        }
        positive("spectrum.overview_range", self.spectrum.overview_range)?;
        if self.spectrum.overview_points < 2 {
            return Err(invalid("spectrum.overview_points", "must be at least 2"));
        }

        let s = &self.sweep;
        if !(0.0..=180.0).contains(&s.theta_deg) {
            return Err(invalid("sweep.theta_deg", "must lie in [0, 180]"));
        }
        if s.phi_points == 0 {
            return Err(invalid("sweep.phi_points", "must be at least 1"));
        }
        positive("sweep.w0_mag", s.w0_mag)?;
        if s.spacings.is_empty() {
            return Err(invalid("sweep.spacings", "must list at least one spacing"));
        }
        for (i, &d) in s.spacings.iter().enumerate() {
            let field = format!("sweep.spacings[{i}]");
            positive(&field, d)?;
            self.dipole_array(d)
                .map_err(|e| invalid(field, e.to_string()))?;
        }
        check_port("sweep.source_impedance", &s.source_impedance)?;

        if !self.wants(OutputFormat::Csv) {
            return Err(invalid("output.formats", "must include \"csv\""));
        }
        Ok(())
    }
}

fn check_port(field: &str, p: &PortSpec) -> std::result::Result<(), Invalid> {
    if let PortSpec::Ohms(v) = p {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(invalid(field, "impedance must be finite"));
        }
    }
    Ok(())
}

/// 1-based line of the first occurrence of the last key in a dotted path.
fn locate(text: &str, field: &str) -> Option<usize> {
    let key = field.rsplit('.').next()?.split('[').next()?;
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}

/// Parses and validates a config file.
pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::ConfigSyntax {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    cfg.validate().map_err(|e| {
        let location = match locate(text, &e.field) {
            Some(line) => format!("{}:{line}", path.display()),
            None => path.display().to_string(),
        };
        CliError::ConfigValue {
            location,
            field: e.field,
            message: e.message,
        }
    })?;
    Ok(cfg)
}

/// Validated built-in defaults.
pub fn defaults() -> Result<ExperimentConfig> {
    let cfg = ExperimentConfig::default();
    cfg.validate().map_err(|e| CliError::ConfigValue {
        location: "built-in defaults".into(),
        field: e.field,
        message: e.message,
    })?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        let cfg = parse("{}", Path::new("x.json")).unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
    }

    #[test]
    fn shipped_config_matches_defaults() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
        assert_eq!(load(&path).unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn unknown_key_reports_position() {
        let text = "{\n  \"wavelength\": 1.0,\n  \"geometry\": {\"aperture\": 4}\n}";
        match parse(text, Path::new("c.json")) {
            Err(CliError::ConfigSyntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_value_reports_line() {
        let text = "{\n  \"geometry\": {\n    \"spacings\": [0.5, 0.3]\n  }\n}";
        let err = parse(text, Path::new("c.json")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.starts_with("c.json:3:"), "{msg}");
        assert!(msg.contains("geometry.spacings[1]"), "{msg}");
    }

    #[test]
    fn port_specs() {
        let z = Complex64::new(73.1, 42.5);
        let p: PortSpec = serde_json::from_str("\"conjugate_match\"").unwrap();
        assert_eq!(p.resolve(z), z.conj());
        let p: PortSpec = serde_json::from_str("[50, 0]").unwrap();
        assert_eq!(p.resolve(z), Complex64::new(50.0, 0.0));
        assert_eq!(p.label(), "z50");
        assert_eq!(PortSpec::Ohms([50.0, -7.5]).label(), "z50-7.5j");
        assert!(serde_json::from_str::<PortSpec>("\"matched\"").is_err());
    }
}

#[cfg(test)]
mod schema_tests {
    use super::*;
    use serde_json::Value;

    fn resolve<'a>(schema: &'a Value, node: &'a Value) -> &'a Value {
        match node.get("$ref").and_then(Value::as_str) {
            Some(r) => {
                let name = r.trim_start_matches("#/$defs/");
                &schema["$defs"][name]
            }
            None => node,
        }
    }

    fn check(schema: &Value, node: &Value, value: &Value, path: &str) {
        let node = resolve(schema, node);
        match value {
            Value::Object(map) => {
                let props = node["properties"]
                    .as_object()
                    .unwrap_or_else(|| panic!("{path}: schema has no properties"));
                assert_eq!(node["additionalProperties"], Value::Bool(false), "{path}");
                let mut want: Vec<&String> = map.keys().collect();
                let mut have: Vec<&String> = props.keys().collect();
                want.sort();
                have.sort();
                assert_eq!(want, have, "{path}: schema keys differ from config keys");
                for (k, v) in map {
                    check(schema, &props[k], v, &format!("{path}.{k}"));
                }
            }
            Value::Array(items) if node.get("items").is_some() => {
                for v in items {
                    check(schema, &node["items"], v, &format!("{path}[]"));
                }
            }
            _ => {}
        }
    }

    #[test]
    fn schema_covers_every_config_key() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/config.schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        let value = serde_json::to_value(ExperimentConfig::default()).unwrap();
        check(&schema, &schema, &value, "$");
    }
}
