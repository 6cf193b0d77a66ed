use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DEFAULT_VECTOR_CAP, CONVERGENCE_TOL};
use crate::gaussian::GaussianState;
use crate::pq::PqAmpParams;
use crate::raman::RamanParams;

fn one() -> f64 {
    1.0
}

fn one_sample() -> usize {
    1
}

fn default_steps() -> usize {
    100
}

/// A validated scenario. Build with [`parse_config`].
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub source: Source,
    #[serde(default)]
    pub amplifier: Amplifier,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Vacuum,
    /// Per-mode amplitudes `α = x + ip` as `[re, im]` pairs.
    Coherent { alpha: Vec<[f64; 2]> },
    /// Two-mode squeezed vacuum from an OPO below threshold.
    Opo {
        r: f64,
        #[serde(default = "one")]
        epsilon: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Amplifier {
    #[default]
    None,
    Pq {
        k: f64,
        #[serde(default = "one")]
        epsilon: f64,
        t_max: f64,
        #[serde(default = "one_sample")]
        samples: usize,
    },
    Raman {
        g: f64,
        gamma_perp: f64,
        n0: f64,
        n1: f64,
        #[serde(default = "one")]
        epsilon: f64,
        t_max: f64,
        #[serde(default = "one_sample")]
        samples: usize,
        #[serde(default = "default_steps")]
        steps_per_sample: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub enabled: bool,
    /// Fock levels per mode; the convergence check also runs at `dim + 5`.
    pub dim: usize,
    /// Maximum allowed engine/oracle deviation per column.
    pub tolerance: f64,
    /// Maximum allowed change between truncations `dim` and `dim + 5`.
    pub convergence_tol: f64,
    pub vector_cap: usize,
    pub density_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            dim: 20,
            tolerance: 1e-4,
            convergence_tol: CONVERGENCE_TOL,
            vector_cap: DEFAULT_VECTOR_CAP,
            density_cap: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

fn at(path: &'static str) -> impl Fn(Error) -> Error {
    move |e| config_err(path, e.to_string())
}

/// Parses and validates a JSON scenario. Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<Scenario> {
    parse_value(serde_json::from_str(text).map_err(|e| config_err("", e.to_string()))?)
}

/// Validates an already-parsed JSON document.
pub fn parse_value(value: serde_json::Value) -> Result<Scenario> {
    let scenario: Scenario = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        config_err(&path, e.into_inner().to_string())
    })?;
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    fn validate(&self) -> Result<()> {
        match &self.source {
            Source::Vacuum => {}
            Source::Coherent { alpha } => {
                if alpha.len() != 2 {
                    return Err(config_err(
                        "source.coherent.alpha",
                        format!("expected 2 amplitudes, got {}", alpha.len()),
                    ));
                }
                if alpha.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(config_err("source.coherent.alpha", "amplitudes must be finite"));
                }
            }
            Source::Opo { r, .. } => {
                if !r.is_finite() {
                    return Err(config_err("source.opo.r", format!("r must be finite, got {r}")));
                }
            }
        }
        self.initial_state().map_err(at("source"))?;

        let (prefix, t_max, samples) = match self.amplifier {
            Amplifier::None => ("amplifier", 0.0, 1),
            Amplifier::Pq { t_max, samples, .. } => {
                self.pq_params().map_err(at("amplifier.pq"))?;
                ("amplifier.pq", t_max, samples)
            }
            Amplifier::Raman {
                t_max,
                samples,
                steps_per_sample,
                ..
            } => {
                self.raman_params().map_err(at("amplifier.raman"))?;
                if steps_per_sample == 0 {
                    return Err(config_err("amplifier.raman.steps_per_sample", "steps_per_sample >= 1 required"));
                }
                ("amplifier.raman", t_max, samples)
            }
        };
        if samples == 0 {
            return Err(config_err(&format!("{prefix}.samples"), "samples >= 1 required"));
        }
        if !t_max.is_finite() || t_max < 0.0 || (samples > 1 && t_max == 0.0) {
            return Err(config_err(
                &format!("{prefix}.t_max"),
                format!("t_max must be finite, >= 0, and > 0 when samples > 1; got {t_max}"),
            ));
        }

        let o = &self.oracle;
        if o.dim < 2 {
            return Err(config_err("oracle.dim", format!("dim >= 2 required, got {}", o.dim)));
        }
        for (name, v) in [("oracle.tolerance", o.tolerance), ("oracle.convergence_tol", o.convergence_tol)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(config_err(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<GaussianState> {
        match &self.source {
            Source::Vacuum => GaussianState::vacuum(2),
            Source::Coherent { alpha } => {
                let amps: Vec<(f64, f64)> = alpha.iter().map(|a| (a[0], a[1])).collect();
                GaussianState::coherent(&amps)
            }
            Source::Opo { r, epsilon } => {
                crate::check_unit_epsilon(*epsilon, "opo source")?;
                GaussianState::vacuum(2)?.two_mode_squeeze(*r, *epsilon)
            }
        }
    }

    /// Amplifier parameters at `t = t_max`, if the amplifier is `pq`.
    pub fn pq_params(&self) -> Result<PqAmpParams> {
        match self.amplifier {
            Amplifier::Pq { k, epsilon, t_max, .. } => PqAmpParams::new(k, t_max, epsilon),
            _ => Err(crate::error::invalid("amplifier is not pq")),
        }
    }

    pub fn raman_params(&self) -> Result<RamanParams> {
        match self.amplifier {
            Amplifier::Raman {
                g,
                gamma_perp,
                n0,
                n1,
                epsilon,
                ..
            } => RamanParams::new(g, gamma_perp, n0, n1, epsilon),
            _ => Err(crate::error::invalid("amplifier is not raman")),
        }
    }

    /// `ε` used for the Q, P diagnostics: the amplifier's, else the source's, else 1.
    pub fn diagnostics_epsilon(&self) -> f64 {
        match (&self.amplifier, &self.source) {
            (Amplifier::Pq { epsilon, .. }, _) | (Amplifier::Raman { epsilon, .. }, _) => *epsilon,
            (Amplifier::None, Source::Opo { epsilon, .. }) => *epsilon,
            _ => 1.0,
        }
    }

    /// Uniform sample times over `[0, t_max]`, both ends included.
    pub fn time_grid(&self) -> Vec<f64> {
        let (t_max, samples) = match self.amplifier {
            Amplifier::None => (0.0, 1),
            Amplifier::Pq { t_max, samples, .. } | Amplifier::Raman { t_max, samples, .. } => {
                (t_max, samples)
            }
        };
        if samples == 1 {
            return vec![0.0];
        }
        (0..samples)
            .map(|i| t_max * i as f64 / (samples - 1) as f64)
            .collect()
    }
}

/// Replaces the value at a dotted path (`amplifier.pq.k`) in a JSON document.
/// Every segment but the last must already exist.
pub fn set_param(doc: &mut serde_json::Value, path: &str, value: serde_json::Value) -> Result<()> {
    let mut segments: Vec<&str> = path.split('.').collect();
    let last = segments
        .pop()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| config_err(path, "empty parameter path"))?;
    let mut node = doc;
    for seg in segments {
        node = node
            .get_mut(seg)
            .ok_or_else(|| config_err(path, format!("no `{seg}` in config")))?;
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| config_err(path, "parent is not an object"))?;
    obj.insert(last.to_string(), value);
    Ok(())
}
