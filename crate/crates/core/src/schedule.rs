//! Symbolic transmissions and the delivery schedule they form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{NetworkConfig, ProfileSet, Strategy, UserId};
use crate::math::{wrap1, MathError};

/// Which file every user asks for.
pub type Demands = BTreeMap<UserId, u32>;

/// User `k` asks for file `mod1(k, N)`.
pub fn default_demands(cfg: &NetworkConfig) -> Demands {
    cfg.association()
        .keys()
        .map(|&u| (u, wrap1(u.0 as usize, cfg.files()) as u32))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("{what}={value} outside 1..={bound}")]
    IndexRange { what: &'static str, value: usize, bound: usize },
    #[error("profile holds {delta} users, more than eta_hat={eta_hat}")]
    ProfileTooLong { delta: usize, eta_hat: usize },
    #[error("null set of size {size} cannot be zero-forced with alpha={alpha}")]
    NullSetTooLarge { size: usize, alpha: usize },
    #[error("user {0} appears twice in one codeword group")]
    DuplicateRecipient(UserId),
    #[error("user {0} has no demand")]
    MissingDemand(UserId),
    #[error("demand of user {user} names file {file} outside the library")]
    UnknownFile { user: UserId, file: u32 },
    #[error("parameters are for strategy {0}")]
    WrongStrategy(Strategy),
    #[error(transparent)]
    Math(#[from] MathError),
}

pub(crate) fn check_index(what: &'static str, value: usize, bound: usize) -> Result<(), ScheduleError> {
    if value == 0 || value > bound {
        Err(ScheduleError::IndexRange { what, value, bound })
    } else {
        Ok(())
    }
}

/// Index tuple of one broadcast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransmissionId {
    Triple { r: usize, c: usize, l: usize },
    Quintuple { r: usize, c: usize, l: usize, m: usize, s: usize },
}

impl TransmissionId {
    pub fn as_vec(&self) -> Vec<usize> {
        match *self {
            TransmissionId::Triple { r, c, l } => vec![r, c, l],
            TransmissionId::Quintuple { r, c, l, m, s } => vec![r, c, l, m, s],
        }
    }
}

impl fmt::Display for TransmissionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.as_vec().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One precoded stream: `recipient` gets `subpacket`, zero-forced at `nullset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codeword {
    pub recipient: UserId,
    pub subpacket: crate::placement::SubpacketId,
    pub nullset: Vec<UserId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transmission {
    pub id: TransmissionId,
    pub codewords: Vec<Codeword>,
}

impl Transmission {
    /// Distinct recipients, ascending.
    pub fn recipients(&self) -> Vec<UserId> {
        let mut r: Vec<UserId> = self.codewords.iter().map(|c| c.recipient).collect();
        r.sort_unstable();
        r.dedup();
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UcEntry {
    pub recipient: UserId,
    pub subpacket: crate::placement::SubpacketId,
}

/// One unicast round, serving distinct users one subpacket each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UcRound {
    pub entries: Vec<UcEntry>,
    /// `min(alpha, users still missing subpackets)` when the round was formed.
    pub capacity: usize,
}

/// Coded-caching transmissions followed by unicast rounds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub cc: Vec<Transmission>,
    pub uc: Vec<UcRound>,
}

impl Schedule {
    /// Users served across the CC step, counted once per transmission.
    pub fn j_m(&self) -> usize {
        self.cc.iter().map(|t| t.recipients().len()).sum()
    }

    pub fn j_u(&self) -> usize {
        self.uc.iter().map(|r| r.entries.len()).sum()
    }

    pub fn t_m(&self) -> usize {
        self.cc.len()
    }

    pub fn t_u(&self) -> usize {
        self.uc.len()
    }
}

/// Per-(user, mini-file index) subpacket sequence numbers. One counter spans
/// both delivery steps.
#[derive(Debug, Clone, Default)]
pub struct SubpacketCounters {
    next: HashMap<(UserId, ProfileSet), u32>,
}

impl SubpacketCounters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the next unused `q` (starting at 1) for the pair.
    pub fn next(&mut self, user: UserId, set: ProfileSet) -> u32 {
        let slot = self.next.entry((user, set)).or_insert(0);
        *slot += 1;
        *slot
    }

    /// How many subpackets were already handed out for the pair.
    pub fn issued(&self, user: UserId, set: ProfileSet) -> u32 {
        self.next.get(&(user, set)).copied().unwrap_or(0)
    }
}

pub(crate) fn demand_of(demands: &Demands, user: UserId) -> Result<u32, ScheduleError> {
    demands.get(&user).copied().ok_or(ScheduleError::MissingDemand(user))
}

pub(crate) fn check_demands(cfg: &NetworkConfig, demands: &Demands) -> Result<(), ScheduleError> {
    for &user in cfg.association().keys() {
        let file = demand_of(demands, user)?;
        if file == 0 || file as usize > cfg.files() {
            return Err(ScheduleError::UnknownFile { user, file });
        }
    }
    Ok(())
}
