//! Scenario files: one JSON document describing the network, the delivery
//! choice and the demands.

use std::collections::BTreeMap;

use cc_sched::config::ConfigError;
use cc_sched::{default_demands, DeliveryParams, Demands, NetworkConfig, Strategy, UserId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("give either \"eta\" or \"association\", not both")]
    BothAssociations,
    #[error("scenario needs \"eta\" or \"association\"")]
    NoAssociation,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("user {user} demands file {file}, outside 1..={files}")]
    DemandOutOfRange { user: u32, file: u32, files: usize },
    #[error("demand given for unknown user {0}")]
    DemandForUnknownUser(u32),
}

impl ScenarioError {
    /// Whether the input could not be read as a scenario at all.
    pub fn is_parse(&self) -> bool {
        matches!(self, ScenarioError::Parse(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keyword {
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedDelivery {
    pub eta_hat: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub beta: usize,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeliveryChoice {
    Fixed(FixedDelivery),
    Search(Keyword),
}

impl Default for DeliveryChoice {
    fn default() -> Self {
        DeliveryChoice::Search(Keyword::Sweep)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(rename = "P")]
    pub profiles: usize,
    pub tbar: usize,
    pub alpha: usize,
    #[serde(rename = "L")]
    pub antennas: usize,
    #[serde(rename = "N")]
    pub files: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<usize>>,
    /// User id to profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub association: Option<BTreeMap<u32, usize>>,
    #[serde(default)]
    pub delivery: DeliveryChoice,
    /// User id to demanded file; users left out ask for `mod1(k, N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demands: Option<BTreeMap<u32, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn network(&self) -> Result<NetworkConfig, ScenarioError> {
        match (&self.eta, &self.association) {
            (Some(_), Some(_)) => Err(ScenarioError::BothAssociations),
            (None, None) => Err(ScenarioError::NoAssociation),
            (Some(eta), None) => {
                if eta.len() != self.profiles {
                    return Err(ConfigError::ProfileCount(eta.len()).into());
                }
                Ok(NetworkConfig::from_counts(self.tbar, self.alpha, self.antennas, self.files, eta)?)
            }
            (None, Some(assoc)) => {
                let assoc = assoc.iter().map(|(&u, &p)| (UserId(u), p)).collect();
                Ok(NetworkConfig::new(self.profiles, self.tbar, self.alpha, self.antennas, self.files, assoc)?)
            }
        }
    }

    pub fn demands(&self, cfg: &NetworkConfig) -> Result<Demands, ScenarioError> {
        let mut demands = default_demands(cfg);
        for (&user, &file) in self.demands.iter().flatten() {
            if cfg.profile_of(UserId(user)).is_none() {
                return Err(ScenarioError::DemandForUnknownUser(user));
            }
            if file == 0 || file as usize > cfg.files() {
                return Err(ScenarioError::DemandOutOfRange { user, file, files: cfg.files() });
            }
            demands.insert(UserId(user), file);
        }
        Ok(demands)
    }

    pub fn fixed_delivery(&self) -> Option<DeliveryParams> {
        match self.delivery {
            DeliveryChoice::Fixed(f) => Some(DeliveryParams { eta_hat: f.eta_hat, q: f.q, beta: f.beta, strategy: f.strategy }),
            DeliveryChoice::Search(_) => None,
        }
    }
}
