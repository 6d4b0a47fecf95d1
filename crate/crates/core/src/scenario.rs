//! TOML scenario files.
//!
//! ```toml
//! p1 = 1.0
//! p2 = 1.0
//! n1 = 1.0
//! n2 = 1.0
//! a12 = 4.0
//! a21 = 4.0
//! q1 = "unbounded"
//! q2 = 1e4
//! format = "csv"          # optional: csv | json
//!
//! [lattice]               # optional
//! family = "integer-cubic"
//! dim = 1
//! scale = 2.0
//!
//! [sim]                   # optional
//! scheme = "thm2-corner-R2"
//! decoder = 1
//! trials = 100000
//! seed = 7
//! state = "gaussian"      # gaussian | voronoi-uniform
//! state_scale = 32.0
//! alpha = [0.5]
//! ```
//!
//! Unknown keys are rejected at every level.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Family;
use crate::model::{build_params, ChannelParams, Decoder, RawParams, StateVariance};
use crate::simulate::{AlphaChoice, Scheme, SchemeSpec, StateMode, DEFAULT_STATE_SCALE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Gaussian,
    VoronoiUniform,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoder: Option<Decoder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub p1: f64,
    pub p2: f64,
    pub n1: f64,
    pub n2: f64,
    pub a12: f64,
    pub a21: f64,
    pub q1: StateVariance,
    pub q2: StateVariance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSection>,
}

impl Scenario {
    pub fn from_raw(raw: RawParams) -> Scenario {
        Scenario {
            p1: raw.p1,
            p2: raw.p2,
            n1: raw.n1,
            n2: raw.n2,
            a12: raw.a12,
            a21: raw.a21,
            q1: raw.q1,
            q2: raw.q2,
            format: None,
            lattice: None,
            sim: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        toml::from_str(text).map_err(|e| Error::Scenario(e.message().to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Scenario::from_toml_str(&text)
    }

    pub fn raw(&self) -> RawParams {
        RawParams::new(self.p1, self.p2, self.n1, self.n2, self.a12, self.a21)
            .with_states(self.q1, self.q2)
    }

    pub fn params(&self) -> Result<ChannelParams> {
        build_params(self.raw())
    }

    /// Simulation settings from the `[lattice]` and `[sim]` sections, with
    /// defaults for everything left out. `scheme` is required somewhere.
    pub fn scheme_spec(&self, params: &ChannelParams) -> Result<SchemeSpec> {
        let sim = self.sim.clone().unwrap_or_default();
        let lat = self.lattice.clone().unwrap_or_default();
        let scheme = sim
            .scheme
            .ok_or_else(|| Error::Scenario("no scheme given".to_string()))?;
        let mut spec = SchemeSpec::new(scheme, params);
        if let Some(family) = lat.family {
            spec.family = family;
            spec.dim = family.fixed_dim().unwrap_or(1);
        }
        if let Some(dim) = lat.dim {
            spec.dim = dim;
        }
        spec.lattice_scale = lat.scale;
        if let Some(d) = sim.decoder {
            spec.decoder = d;
        }
        if let Some(t) = sim.trials {
            spec.trials = t;
        }
        if let Some(s) = sim.seed {
            spec.seed = s;
        }
        spec.state = match sim.state {
            None => StateMode::for_params(params),
            Some(StateKind::VoronoiUniform) => StateMode::VoronoiUniform {
                scale: sim.state_scale.unwrap_or(DEFAULT_STATE_SCALE),
            },
            Some(StateKind::Gaussian) => match (self.q1.finite(), self.q2.finite()) {
                (Some(q1), Some(q2)) => StateMode::Gaussian { q1, q2 },
                _ => return Err(Error::UnboundedState),
            },
        };
        spec.alpha = match sim.alpha.as_deref() {
            None | Some([]) => AlphaChoice::Mmse,
            Some(&[a]) => AlphaChoice::Single(a),
            Some(&[a1, a2]) => AlphaChoice::Pair(a1, a2),
            Some(other) => {
                return Err(Error::Scenario(format!(
                    "alpha takes one or two values, got {}",
                    other.len()
                )))
            }
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
p1 = 1.0
p2 = 1.0
n1 = 1.0
n2 = 1.0
a12 = 4
a21 = 4
q1 = "unbounded"
q2 = 1e4
format = "json"

[lattice]
family = "hexagonal"

[sim]
scheme = "thm3-corner-R2"
decoder = 2
trials = 1000
seed = 9
state = "voronoi-uniform"
alpha = [0.6, 0.7]
"#;

    #[test]
    fn parses_and_roundtrips() {
        let s = Scenario::from_toml_str(FULL).unwrap();
        assert_eq!(s.q2, StateVariance::Finite(1e4));
        let back = Scenario::from_toml_str(&s.to_toml_string().unwrap()).unwrap();
        assert_eq!(back, s);
        let spec = s.scheme_spec(&s.params().unwrap()).unwrap();
        assert_eq!(spec.dim, 2);
        assert_eq!(spec.decoder, Decoder::Two);
        assert_eq!(spec.alpha, AlphaChoice::Pair(0.6, 0.7));
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = "p1=1\np2=1\nn1=1\nn2=1\na12=1\na21=1\nq1=1\nq2=1\nextra=3\n";
        assert!(matches!(Scenario::from_toml_str(bad), Err(Error::Scenario(_))));
        let bad = "p1=1\np2=1\nn1=1\nn2=1\na12=1\na21=1\nq1=1\nq2=1\n[sim]\ntrails=3\n";
        assert!(Scenario::from_toml_str(bad).is_err());
    }

    #[test]
    fn missing_key_is_error() {
        assert!(Scenario::from_toml_str("p1=1\n").is_err());
    }
}
