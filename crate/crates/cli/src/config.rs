//! Run configuration documents (TOML).

use std::path::{Path, PathBuf};

use plap_core::nonlinearity::NonlinearityDoc;
use plap_core::NonlinearitySpec;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Audit,
    Classify,
    Profile,
    Ball,
    Strip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    Perturbed,
    Zero,
    Random,
}

/// One run, as written in the config document. Fields a command does not
/// use are ignored; missing fields take the defaults below.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub nonlinearity: NonlinearityDoc,
    /// Level of the profile or of the truncation; defaults to the first
    /// positive zero of `f` where one is needed.
    pub rho: Option<f64>,
    pub t_max: Option<f64>,
    #[serde(rename = "n")]
    pub samples: Option<usize>,
    pub r_list: Option<Vec<f64>>,
    pub eps: Option<f64>,
    #[serde(rename = "J")]
    pub intervals: Option<usize>,
    #[serde(rename = "W")]
    pub width: Option<f64>,
    #[serde(rename = "H")]
    pub height: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub seed: Option<u64>,
    pub init: Option<InitKind>,
    pub output_dir: Option<PathBuf>,
}

pub const DEFAULT_T_MAX: f64 = 8.0;
pub const DEFAULT_SAMPLES: usize = 1025;
pub const DEFAULT_EPS: f64 = 0.05;
pub const DEFAULT_INTERVALS: usize = 1024;

/// A configuration problem; maps to exit status 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn spec(&self) -> Result<NonlinearitySpec, ConfigError> {
        NonlinearitySpec::try_from(self.nonlinearity.clone())
            .map_err(|e| ConfigError(e.to_string()))
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return fail(format!("p must exceed 1, got {}", self.p));
        }
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => {
                fail(format!("{name} must be positive, got {x}"))
            }
            _ => Ok(()),
        };
        positive("rho", self.rho)?;
        positive("t_max", self.t_max)?;
        positive("eps", self.eps)?;
        positive("W", self.width)?;
        positive("H", self.height)?;
        for (name, v) in [
            ("n", self.samples),
            ("J", self.intervals),
            ("nx", self.nx),
            ("ny", self.ny),
        ] {
            if v == Some(0) {
                return fail(format!("{name} must be positive, got 0"));
            }
        }
        if self.n == Some(0) {
            return fail("N must be positive, got 0");
        }
        if let Some(list) = &self.r_list {
            if let Some(r) = list.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
                return fail(format!("r_list entries must be positive, got {r}"));
            }
        }
        match self.command {
            Command::Audit | Command::Ball if self.n.is_none() => {
                fail(format!("command {:?} needs the dimension N", self.command))
            }
            Command::Ball if self.r_list.as_ref().is_none_or(|l| l.is_empty()) => {
                fail("command ball needs a nonempty r_list")
            }
            Command::Strip if self.width.is_none() || self.height.is_none() => {
                fail("command strip needs W and H")
            }
            Command::Strip if self.nx.is_none() || self.ny.is_none() => {
                fail("command strip needs nx and ny")
            }
            _ => Ok(()),
        }
    }

    /// The truncation or profile level: `rho` if given, else the first
    /// positive zero of `f`. It must lie in the analysis window.
    pub fn level(&self, spec: &NonlinearitySpec) -> Result<f64, ConfigError> {
        let rho = match self.rho {
            Some(r) => r,
            None => match spec.isolate_zeros().iter().find(|z| z.z > 0.0) {
                Some(z) => z.z,
                None => return fail("rho not given and f has no positive zero in the window"),
            },
        };
        if rho > spec.cap() {
            return fail(format!(
                "window cap M = {} is below rho = {rho}",
                spec.cap()
            ));
        }
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOGISTIC: &str = r#"
command = "ball"
p = 2.0
N = 2
r_list = [5.0, 10.0]
[nonlinearity]
breakpoints = [0.0, 2.0]
pieces = [[0.0, 1.0, -1.0]]
"#;

    #[test]
    fn parses_a_ball_config() {
        let cfg = RunConfig::parse(LOGISTIC).unwrap();
        assert_eq!(cfg.command, Command::Ball);
        assert_eq!(cfg.n, Some(2));
        assert_eq!(cfg.level(&cfg.spec().unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_values_with_the_witness() {
        let err = RunConfig::parse(&LOGISTIC.replace("p = 2.0", "p = 0.5")).unwrap_err();
        assert!(err.0.contains("p must exceed 1, got 0.5"), "{err}");
        let err = RunConfig::parse(&LOGISTIC.replace("N = 2\n", "")).unwrap_err();
        assert!(err.0.contains("needs the dimension N"), "{err}");
        let err = RunConfig::parse(&LOGISTIC.replace("r_list", "radii")).unwrap_err();
        assert!(err.0.contains("radii"), "{err}");
        let cfg = RunConfig::parse(&LOGISTIC.replace("N = 2", "N = 2\nrho = 3.0")).unwrap();
        let err = cfg.level(&cfg.spec().unwrap()).unwrap_err();
        assert!(err.0.contains("cap M = 2 is below rho = 3"), "{err}");
    }
}
