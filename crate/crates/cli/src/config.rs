//! Flag and config-file settings, merged into a validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use intellistate::{
    AlgebraKind, AmplifierGenerator, FockSpace, OpticalElement, PairSelector, Parity, PhaseMode, RotationKind, Spin,
    SplitterGenerator, TolerancePolicy, C64, DEFAULT_LEAKAGE_THRESHOLD,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::parse::{parse_complex, parse_grid, Grid};
use crate::CliError;

pub const DEFAULT_SINGLE_MODE_CUTOFF: usize = 64;
pub const DEFAULT_TWO_MODE_CUTOFF: usize = 48;
pub const DEFAULT_GRID: &str = "-2:2:21,-2:2:21";
pub const DEFAULT_EXCLUDE_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraName {
    Su2,
    Su11Two,
    Su11Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindName {
    Circular,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityName {
    Even,
    Odd,
}

/// Optical elements for the `bosonic` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementName {
    PhaseA,
    PhaseB,
    PhaseRelative,
    SplitterJ1,
    SplitterJ2,
    AmplifierK1,
    AmplifierK2,
}

/// Complex values in a config file may be JSON numbers or strings.
fn text_field<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    match Option::<Value>::deserialize(d)? {
        None => Ok(None),
        Some(Value::Number(n)) => Ok(Some(n.to_string())),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(serde::de::Error::custom(format!("expected a number or string, got {other}"))),
    }
}

/// Every setting as it arrives from flags or a config file; `None` means
/// "not given here".
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Lie algebra realization
    #[arg(long, value_enum)]
    pub algebra: Option<AlgebraName>,

    /// Spin J for su2 (integer or half-integer)
    #[arg(long)]
    pub j: Option<f64>,

    /// Parity sector for su11-single
    #[arg(long, value_enum)]
    pub parity: Option<ParityName>,

    /// Photon-number difference n_a - n_b for su11-two
    #[arg(long, allow_hyphen_values = true)]
    pub sector_diff: Option<i64>,

    /// Basis dimension of the truncated sector
    #[arg(long)]
    pub cutoff: Option<usize>,

    /// Observable pair, e.g. J1J2 or K1K3
    #[arg(long)]
    pub pair: Option<String>,

    /// Real or complex squeezing parameter, e.g. 0.6 or -0.5+0.3i
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "text_field")]
    pub lambda: Option<String>,

    /// Generalized parameter, e.g. 0.8+0.6i
    #[arg(long = "Lambda", allow_hyphen_values = true)]
    #[serde(default, rename = "Lambda", deserialize_with = "text_field")]
    pub big_lambda: Option<String>,

    /// Lambda grid LxMIN:LxMAX:N,LyMIN:LyMAX:N
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Rotation kind for `map` (defaults to the pair's kind)
    #[arg(long, value_enum)]
    pub kind: Option<KindName>,

    #[arg(long)]
    pub rtol: Option<f64>,

    #[arg(long)]
    pub atol: Option<f64>,

    /// Largest probability allowed near the cutoff
    #[arg(long)]
    pub leakage: Option<f64>,

    /// Hyperbolic grids skip points with |Lambda -+ i| below this radius
    #[arg(long)]
    pub exclude_radius: Option<f64>,

    /// Optical element for `bosonic`
    #[arg(long, value_enum)]
    pub element: Option<ElementName>,

    /// Element angle for `bosonic`
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Fills every field left empty here from `lower`.
    pub fn or(self, lower: Settings) -> Settings {
        Settings {
            algebra: self.algebra.or(lower.algebra),
            j: self.j.or(lower.j),
            parity: self.parity.or(lower.parity),
            sector_diff: self.sector_diff.or(lower.sector_diff),
            cutoff: self.cutoff.or(lower.cutoff),
            pair: self.pair.or(lower.pair),
            lambda: self.lambda.or(lower.lambda),
            big_lambda: self.big_lambda.or(lower.big_lambda),
            grid: self.grid.or(lower.grid),
            kind: self.kind.or(lower.kind),
            rtol: self.rtol.or(lower.rtol),
            atol: self.atol.or(lower.atol),
            leakage: self.leakage.or(lower.leakage),
            exclude_radius: self.exclude_radius.or(lower.exclude_radius),
            element: self.element.or(lower.element),
            phi: self.phi.or(lower.phi),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
        }
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved and validated settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algebra: AlgebraKind,
    pub selector: PairSelector,
    pub lambda: Option<C64>,
    pub big_lambda: Option<C64>,
    pub grid: Grid,
    pub kind: RotationKind,
    pub tol: TolerancePolicy,
    pub leakage: f64,
    pub exclude_radius: f64,
    pub element: Option<ElementName>,
    pub phi: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    echo: Value,
}

impl RunConfig {
    /// Resolves `flags > file > defaults`. `default_format` differs per
    /// subcommand.
    pub fn resolve(flags: Settings, file: Option<&Path>, default_format: Format) -> Result<RunConfig, CliError> {
        let merged = match file {
            Some(path) => flags.or(Settings::from_file(path)?),
            None => flags,
        };
        let usage = CliError::Usage;
        let algebra_name = merged.algebra.unwrap_or(AlgebraName::Su2);
        let algebra = match algebra_name {
            AlgebraName::Su2 => AlgebraKind::Su2Spin(Spin::new(merged.j.unwrap_or(1.0)).map_err(|e| usage(e.to_string()))?),
            AlgebraName::Su11Two => AlgebraKind::Su11TwoMode {
                sector_diff: merged.sector_diff.unwrap_or(0),
                cutoff: merged.cutoff.unwrap_or(DEFAULT_TWO_MODE_CUTOFF),
            },
            AlgebraName::Su11Single => AlgebraKind::Su11SingleMode {
                parity: match merged.parity.unwrap_or(ParityName::Even) {
                    ParityName::Even => Parity::Even,
                    ParityName::Odd => Parity::Odd,
                },
                cutoff: merged.cutoff.unwrap_or(DEFAULT_SINGLE_MODE_CUTOFF),
            },
        };
        if algebra_name == AlgebraName::Su2 && (merged.cutoff.is_some() || merged.parity.is_some()) {
            log::warn!("--cutoff and --parity are ignored for su2");
        }
        if algebra.is_truncated() && merged.j.is_some() {
            log::warn!("--j is ignored for su(1,1) realizations");
        }
        if algebra.is_truncated() {
            let cutoff = algebra.dim();
            if cutoff < intellistate::bosonic::MIN_CUTOFF {
                return Err(usage(format!(
                    "cutoff must be at least {}, got {cutoff}",
                    intellistate::bosonic::MIN_CUTOFF
                )));
            }
        }

        let selector = match &merged.pair {
            Some(text) => text.parse::<PairSelector>().map_err(|e| usage(e.to_string()))?,
            None if algebra.is_truncated() => PairSelector::K1K2,
            None => PairSelector::J1J2,
        };
        if selector.is_su2() == algebra.is_truncated() {
            return Err(usage(format!("pair {selector} does not belong to algebra {}", name(algebra_name))));
        }

        let lambda = merged.lambda.as_deref().map(parse_complex).transpose()?;
        let big_lambda = merged.big_lambda.as_deref().map(parse_complex).transpose()?;
        let grid_text = merged.grid.clone().unwrap_or_else(|| DEFAULT_GRID.to_string());
        let grid = parse_grid(&grid_text)?;
        let kind = match merged.kind {
            Some(KindName::Circular) => RotationKind::Circular,
            Some(KindName::Hyperbolic) => RotationKind::Hyperbolic,
            None => selector.kind(),
        };
        let tol = TolerancePolicy::new(
            merged.rtol.unwrap_or(TolerancePolicy::DEFAULT_RTOL),
            merged.atol.unwrap_or(TolerancePolicy::DEFAULT_ATOL),
        )
        .map_err(|e| usage(e.to_string()))?;
        let leakage = merged.leakage.unwrap_or(DEFAULT_LEAKAGE_THRESHOLD);
        if !(leakage > 0.0 && leakage.is_finite()) {
            return Err(usage(format!("leakage must be positive, got {leakage}")));
        }
        let exclude_radius = merged.exclude_radius.unwrap_or(DEFAULT_EXCLUDE_RADIUS);
        if !(exclude_radius >= 0.0 && exclude_radius.is_finite()) {
            return Err(usage(format!("exclude-radius must be non-negative, got {exclude_radius}")));
        }
        if let Some(phi) = merged.phi {
            if !phi.is_finite() {
                return Err(usage(format!("phi must be finite, got {phi}")));
            }
        }
        let format = merged.format.unwrap_or(default_format);

        let mut echo = json!({
            "algebra": name(algebra_name),
            "pair": selector.to_string(),
            "kind": kind.to_string(),
            "grid": grid.to_string(),
            "rtol": tol.rtol,
            "atol": tol.atol,
            "leakage": leakage,
            "exclude-radius": exclude_radius,
            "format": match format { Format::Json => "json", Format::Csv => "csv" },
        });
        let map = echo.as_object_mut().expect("object literal");
        match algebra {
            AlgebraKind::Su2Spin(j) => {
                map.insert("j".into(), json!(j.value()));
            }
            AlgebraKind::Su11TwoMode { sector_diff, cutoff } => {
                map.insert("sector-diff".into(), json!(sector_diff));
                map.insert("cutoff".into(), json!(cutoff));
            }
            AlgebraKind::Su11SingleMode { parity, cutoff } => {
                map.insert("parity".into(), json!(parity.to_string()));
                map.insert("cutoff".into(), json!(cutoff));
            }
        }
        if let Some(z) = merged.lambda.as_ref() {
            map.insert("lambda".into(), json!(z));
        }
        if let Some(z) = merged.big_lambda.as_ref() {
            map.insert("Lambda".into(), json!(z));
        }
        if let Some(e) = merged.element {
            map.insert("element".into(), serde_json::to_value(e).expect("unit enum"));
        }
        if let Some(phi) = merged.phi {
            map.insert("phi".into(), json!(phi));
        }

        Ok(RunConfig {
            algebra,
            selector,
            lambda,
            big_lambda,
            grid,
            kind,
            tol,
            leakage,
            exclude_radius,
            element: merged.element,
            phi: merged.phi,
            format,
            out: merged.out,
            echo,
        })
    }

    /// The resolved settings, echoed into JSON reports.
    pub fn echo(&self) -> &Value {
        &self.echo
    }

    /// `Λ` values from `--Lambda` if given, else the grid.
    pub fn big_lambdas(&self) -> Vec<C64> {
        match self.big_lambda {
            Some(z) => vec![z],
            None => self.grid.points(),
        }
    }

    /// The Fock space an optical element acts on.
    pub fn fock_space(&self) -> FockSpace {
        match self.algebra {
            AlgebraKind::Su2Spin(j) => FockSpace::TwoModeNumber {
                total: j.twice() as usize,
            },
            other => other.fock_space().expect("su(1,1) realizations are bosonic"),
        }
    }

    pub fn optical_element(&self) -> Result<OpticalElement, CliError> {
        let element = self
            .element
            .ok_or_else(|| CliError::Usage("bosonic needs --element".into()))?;
        let phi = self.phi.ok_or_else(|| CliError::Usage("bosonic needs --phi".into()))?;
        Ok(match element {
            ElementName::PhaseA => OpticalElement::PhaseShift { mode: PhaseMode::A, phi },
            ElementName::PhaseB => OpticalElement::PhaseShift { mode: PhaseMode::B, phi },
            ElementName::PhaseRelative => OpticalElement::PhaseShift {
                mode: PhaseMode::Relative,
                phi,
            },
            ElementName::SplitterJ1 => OpticalElement::BeamSplitter {
                generator: SplitterGenerator::J1,
                phi,
            },
            ElementName::SplitterJ2 => OpticalElement::BeamSplitter {
                generator: SplitterGenerator::J2,
                phi,
            },
            ElementName::AmplifierK1 => OpticalElement::Parametric {
                generator: AmplifierGenerator::K1,
                phi,
            },
            ElementName::AmplifierK2 => OpticalElement::Parametric {
                generator: AmplifierGenerator::K2,
                phi,
            },
        })
    }
}

fn name(a: AlgebraName) -> &'static str {
    match a {
        AlgebraName::Su2 => "su2",
        AlgebraName::Su11Two => "su11-two",
        AlgebraName::Su11Single => "su11-single",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(Settings::default(), None, Format::Json).unwrap();
        assert_eq!(c.selector, PairSelector::J1J2);
        assert_eq!(c.algebra.dim(), 3);
        assert_eq!(c.grid.points().len(), 441);
        assert_eq!(c.kind, RotationKind::Circular);
        assert_eq!(c.tol, TolerancePolicy::default());
    }

    #[test]
    fn su11_defaults() {
        let flags = Settings {
            algebra: Some(AlgebraName::Su11Single),
            ..Default::default()
        };
        let c = RunConfig::resolve(flags, None, Format::Csv).unwrap();
        assert_eq!(c.algebra.dim(), 64);
        assert_eq!(c.selector, PairSelector::K1K2);
        assert_eq!(c.format, Format::Csv);
        let flags = Settings {
            algebra: Some(AlgebraName::Su11Two),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(flags, None, Format::Json).unwrap().algebra.dim(), 48);
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let f = file(r#"{"algebra": "su2", "j": 2.5, "pair": "J2J3", "Lambda": "0.1+0.2i", "rtol": 1e-7}"#);
        let flags = Settings {
            j: Some(1.5),
            ..Default::default()
        };
        let c = RunConfig::resolve(flags, Some(f.path()), Format::Json).unwrap();
        assert_eq!(c.algebra.dim(), 4);
        assert_eq!(c.selector, PairSelector::J2J3);
        assert_eq!(c.big_lambda, Some(C64::new(0.1, 0.2)));
        assert_eq!(c.tol.rtol, 1e-7);
        assert_eq!(c.tol.atol, TolerancePolicy::DEFAULT_ATOL);
    }

    #[test]
    fn file_accepts_numeric_lambda() {
        let f = file(r#"{"lambda": 0.6, "sector-diff": -2}"#);
        let c = RunConfig::resolve(Settings::default(), Some(f.path()), Format::Json).unwrap();
        assert_eq!(c.lambda, Some(C64::new(0.6, 0.0)));
    }

    #[test]
    fn file_rejects_unknown_keys() {
        let f = file(r#"{"lamda": 0.6}"#);
        assert!(matches!(
            RunConfig::resolve(Settings::default(), Some(f.path()), Format::Json),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn rejects_bad_values() {
        let cases = [
            Settings {
                j: Some(0.7),
                ..Default::default()
            },
            Settings {
                pair: Some("K1K2".into()),
                ..Default::default()
            },
            Settings {
                algebra: Some(AlgebraName::Su11Single),
                cutoff: Some(8),
                ..Default::default()
            },
            Settings {
                rtol: Some(0.0),
                ..Default::default()
            },
            Settings {
                grid: Some("0:1:0,0:1:1".into()),
                ..Default::default()
            },
            Settings {
                lambda: Some("1+".into()),
                ..Default::default()
            },
        ];
        for s in cases {
            assert!(matches!(RunConfig::resolve(s.clone(), None, Format::Json), Err(CliError::Usage(_))), "{s:?}");
        }
    }

    #[test]
    fn su2_elements_act_on_the_number_sector() {
        let flags = Settings {
            j: Some(1.5),
            ..Default::default()
        };
        let c = RunConfig::resolve(flags, None, Format::Json).unwrap();
        assert_eq!(c.fock_space(), FockSpace::TwoModeNumber { total: 3 });
    }
}
