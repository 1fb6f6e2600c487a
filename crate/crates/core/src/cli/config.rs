//! Run configuration: `key = value` files overlaid by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::CliError;
use crate::kappa::{PulseSchedule, SpectralParams};

/// Default trace resolution, samples per pulse interval.
pub const DEFAULT_GRID: usize = 2048;
/// Default upper end of the pulse-count sweep.
pub const DEFAULT_N_MAX: usize = 25;

const KEYS: &[&str] = &[
    "gamma0", "lambda", "tau", "n", "n-max", "preset", "out", "grid",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    PopulationTrace,
    QsltSweep,
    PopulationSweep,
    NonmarkovSweep,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PopulationTrace => "population-trace",
            Command::QsltSweep => "qslt-sweep",
            Command::PopulationSweep => "population-sweep",
            Command::NonmarkovSweep => "nonmarkov-sweep",
            Command::Verify => "verify",
        }
    }
}

/// Figure presets: `λ = 1`, `λτ = 10`, `γ₀ ∈ {0.2λ, 5λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5a,
    Fig5b,
}

impl Preset {
    pub const LAMBDA: f64 = 1.0;
    pub const LAMBDA_TAU: f64 = 10.0;
    pub const WEAK_GAMMA0: f64 = 0.2;
    pub const STRONG_GAMMA0: f64 = 5.0;
    pub const TRACE_PULSES: [usize; 4] = [0, 5, 10, 20];

    pub fn command(self) -> Command {
        match self {
            Preset::Fig2 => Command::QsltSweep,
            Preset::Fig3 => Command::PopulationSweep,
            Preset::Fig4 => Command::NonmarkovSweep,
            Preset::Fig5a | Preset::Fig5b => Command::PopulationTrace,
        }
    }

    fn gamma0s(self) -> Vec<f64> {
        let l = Self::LAMBDA;
        match self {
            Preset::Fig5a => vec![Self::WEAK_GAMMA0 * l],
            Preset::Fig5b => vec![Self::STRONG_GAMMA0 * l],
            _ => vec![Self::WEAK_GAMMA0 * l, Self::STRONG_GAMMA0 * l],
        }
    }

    fn n_values(self) -> Vec<usize> {
        match self {
            Preset::Fig5a | Preset::Fig5b => Self::TRACE_PULSES.to_vec(),
            _ => (0..=DEFAULT_N_MAX).collect(),
        }
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Preset as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Validation(format!("unknown preset '{s}'")))
    }
}

/// Optional settings, from a config file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub gamma0: Option<f64>,
    pub lambda: Option<f64>,
    pub tau: Option<f64>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub preset: Option<Preset>,
    pub out: Option<PathBuf>,
    pub grid: Option<usize>,
}

impl Settings {
    /// Values set in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            gamma0: over.gamma0.or(self.gamma0),
            lambda: over.lambda.or(self.lambda),
            tau: over.tau.or(self.tau),
            n: over.n.or(self.n),
            n_max: over.n_max.or(self.n_max),
            preset: over.preset.or(self.preset),
            out: over.out.or(self.out),
            grid: over.grid.or(self.grid),
        }
    }

    pub fn parse(text: &str) -> Result<Settings, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!(
                    "config line {}: expected 'key = value'",
                    lineno + 1
                ))
            })?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Validation(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            map.insert(key, (lineno + 1, value.trim().to_string()));
        }

        fn get<T: FromStr>(
            map: &BTreeMap<String, (usize, String)>,
            key: &str,
        ) -> Result<Option<T>, CliError> {
            map.get(key)
                .map(|(line, v)| {
                    v.parse::<T>().map_err(|_| {
                        CliError::Validation(format!(
                            "config line {line}: bad value for {key}: '{v}'"
                        ))
                    })
                })
                .transpose()
        }

        Ok(Settings {
            gamma0: get(&map, "gamma0")?,
            lambda: get(&map, "lambda")?,
            tau: get(&map, "tau")?,
            n: get(&map, "n")?,
            n_max: get(&map, "n-max")?,
            preset: map.get("preset").map(|(_, v)| v.parse()).transpose()?,
            out: map.get("out").map(|(_, v)| PathBuf::from(v)),
            grid: get(&map, "grid")?,
        })
    }

    pub fn load(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::parse(&text)
    }
}

/// One parameter set `(γ₀, λ, τ)` of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    pub params: SpectralParams,
    pub tau: f64,
}

impl Series {
    pub fn schedule(&self, n: usize) -> Result<PulseSchedule, CliError> {
        PulseSchedule::new(self.tau, n).map_err(CliError::from)
    }

    pub fn lambda_tau(&self) -> f64 {
        self.params.lambda() * self.tau
    }
}

/// Fully resolved, validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub series: Vec<Series>,
    pub n_values: Vec<usize>,
    pub grid: usize,
    pub out: Option<PathBuf>,
    pub preset: Option<Preset>,
}

impl RunConfig {
    pub fn resolve(command: Command, settings: Settings) -> Result<RunConfig, CliError> {
        let grid = settings.grid.unwrap_or(DEFAULT_GRID);
        if grid < 2 {
            return Err(CliError::Validation(format!(
                "--grid must be at least 2, got {grid}"
            )));
        }

        if let Some(preset) = settings.preset {
            if preset.command() != command {
                return Err(CliError::Validation(format!(
                    "preset {preset:?} belongs to '{}', not '{}'",
                    preset.command().name(),
                    command.name()
                )));
            }
            if settings.gamma0.is_some()
                || settings.lambda.is_some()
                || settings.tau.is_some()
                || settings.n.is_some()
                || settings.n_max.is_some()
            {
                return Err(CliError::Validation(
                    "a preset fixes gamma0, lambda, tau and n; drop those settings".into(),
                ));
            }
            let lambda = Preset::LAMBDA;
            let series = preset
                .gamma0s()
                .into_iter()
                .map(|g| {
                    Ok(Series {
                        params: SpectralParams::new(g, lambda)?,
                        tau: Preset::LAMBDA_TAU / lambda,
                    })
                })
                .collect::<Result<Vec<_>, crate::Error>>()?;
            return Ok(RunConfig {
                command,
                series,
                n_values: preset.n_values(),
                grid,
                out: settings.out,
                preset: Some(preset),
            });
        }

        let gamma0 = settings
            .gamma0
            .ok_or_else(|| CliError::Validation("--gamma0 is required without --preset".into()))?;
        let lambda = settings.lambda.unwrap_or(Preset::LAMBDA);
        let tau = settings.tau.unwrap_or(Preset::LAMBDA_TAU / lambda);
        let params = SpectralParams::new(gamma0, lambda)?;
        PulseSchedule::new(tau, 0)?;

        let n_values = match (command, settings.n, settings.n_max) {
            (_, Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "give either --n or --n-max, not both".into(),
                ))
            }
            (_, Some(n), None) => vec![n],
            (Command::PopulationTrace, None, None) => vec![0],
            (Command::PopulationTrace, None, Some(_)) => {
                return Err(CliError::Validation(
                    "population-trace takes a single --n".into(),
                ))
            }
            (_, None, max) => (0..=max.unwrap_or(DEFAULT_N_MAX)).collect(),
        };

        Ok(RunConfig {
            command,
            series: vec![Series { params, tau }],
            n_values,
            grid,
            out: settings.out,
            preset: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values() {
        let s = Settings::parse(
            "# weak coupling\ngamma0 = 0.2\nlambda=1\n\n tau = 10 # window\nn_max = 7\nout = a.csv\n",
        )
        .unwrap();
        assert_eq!(s.gamma0, Some(0.2));
        assert_eq!(s.lambda, Some(1.0));
        assert_eq!(s.tau, Some(10.0));
        assert_eq!(s.n_max, Some(7));
        assert_eq!(s.out, Some(PathBuf::from("a.csv")));
        assert!(Settings::parse("preset = fig4").unwrap().preset == Some(Preset::Fig4));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Settings::parse("gamma0 0.2").is_err());
        assert!(Settings::parse("speed = 3").is_err());
        assert!(Settings::parse("n = -1").is_err());
        assert!(Settings::parse("preset = fig9").is_err());
    }

    #[test]
    fn flags_win() {
        let file = Settings::parse("gamma0 = 0.2\nn = 3").unwrap();
        let flags = Settings {
            gamma0: Some(5.0),
            ..Settings::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.gamma0, Some(5.0));
        assert_eq!(merged.n, Some(3));
    }

    #[test]
    fn presets_embed_caption_parameters() {
        for preset in [
            Preset::Fig2,
            Preset::Fig3,
            Preset::Fig4,
            Preset::Fig5a,
            Preset::Fig5b,
        ] {
            let cfg = RunConfig::resolve(
                preset.command(),
                Settings {
                    preset: Some(preset),
                    ..Settings::default()
                },
            )
            .unwrap();
            for s in &cfg.series {
                assert_eq!(s.params.lambda(), 1.0);
                assert_eq!(s.lambda_tau(), 10.0);
                assert!([0.2, 5.0].contains(&s.params.gamma0()));
            }
            assert!(!cfg.n_values.is_empty());
        }
    }

    #[test]
    fn validation_errors() {
        let none = Settings::default();
        assert!(RunConfig::resolve(Command::QsltSweep, none.clone()).is_err());
        let wrong = Settings {
            preset: Some(Preset::Fig2),
            ..Settings::default()
        };
        assert!(RunConfig::resolve(Command::PopulationSweep, wrong).is_err());
        let mixed = Settings {
            preset: Some(Preset::Fig2),
            gamma0: Some(0.2),
            ..Settings::default()
        };
        assert!(RunConfig::resolve(Command::QsltSweep, mixed).is_err());
        let bad = Settings {
            gamma0: Some(-1.0),
            ..Settings::default()
        };
        assert!(RunConfig::resolve(Command::QsltSweep, bad).is_err());
        let both = Settings {
            gamma0: Some(0.2),
            n: Some(2),
            n_max: Some(4),
            ..Settings::default()
        };
        assert!(RunConfig::resolve(Command::QsltSweep, both).is_err());
    }

    #[test]
    fn sweep_range_defaults() {
        let cfg = RunConfig::resolve(
            Command::PopulationSweep,
            Settings {
                gamma0: Some(0.2),
                n_max: Some(4),
                ..Settings::default()
            },
        )
        .unwrap();
        assert_eq!(cfg.n_values, vec![0, 1, 2, 3, 4]);
        assert_eq!(cfg.series[0].tau, 10.0);
    }
}
