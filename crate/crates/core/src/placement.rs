//! Mini-file splitting, profile cache contents and the split of the user
//! population into coded-caching and unicast groups.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{NetworkConfig, ProfileSet, UserId};
use crate::math::ksubsets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("profile {profile} outside 1..={profiles}")]
    UnknownProfile { profile: usize, profiles: usize },
    #[error("delivery parameter must be positive")]
    ZeroEtaHat,
    #[error("eta_hat={eta_hat} exceeds the longest profile ({max})")]
    EtaHatAboveMax { eta_hat: usize, max: usize },
}

/// `W^n_P`: the fragment of file `n` cached by the profiles in `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MiniFileId {
    pub file: u32,
    pub profiles: ProfileSet,
}

/// `W^n_{P,q}`
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubpacketId {
    pub mini: MiniFileId,
    pub q: u32,
}

impl fmt::Display for SubpacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W^{}_{{{},{}}}", self.mini.file, self.mini.profiles, self.q)
    }
}

/// All `tbar`-subsets of `[P]`, in enumeration order.
pub fn minifile_index_sets(cfg: &NetworkConfig) -> Vec<ProfileSet> {
    let ground: Vec<usize> = (1..=cfg.profiles()).collect();
    ksubsets(&ground, cfg.tbar())
        .expect("tbar < P")
        .into_iter()
        .map(ProfileSet::from_profiles)
        .collect()
}

/// Splits every file of the library into `C(P, tbar)` mini-files.
pub fn split_library(cfg: &NetworkConfig) -> Vec<Vec<MiniFileId>> {
    let sets = minifile_index_sets(cfg);
    (1..=cfg.files() as u32)
        .map(|file| sets.iter().map(|&profiles| MiniFileId { file, profiles }).collect())
        .collect()
}

/// Cache content `Z_p`: every mini-file whose index set contains `p`.
pub fn profile_cache(cfg: &NetworkConfig, p: usize) -> Result<BTreeSet<MiniFileId>, PlacementError> {
    if p == 0 || p > cfg.profiles() {
        return Err(PlacementError::UnknownProfile { profile: p, profiles: cfg.profiles() });
    }
    Ok(split_library(cfg)
        .into_iter()
        .flatten()
        .filter(|m| m.profiles.contains(p))
        .collect())
}

/// One profile after truncation, in descending-length rank order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServedProfile {
    /// Profile index in the original configuration.
    pub original: usize,
    /// `eta_p`
    pub eta: usize,
    /// `V_p`, the users served by coded caching, ascending id.
    pub users: Vec<UserId>,
}

impl ServedProfile {
    /// `delta_p = min(eta_hat, eta_p)`
    pub fn delta(&self) -> usize {
        self.users.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServedPartition {
    pub eta_hat: usize,
    /// Profiles sorted by descending `eta_p`, ties by ascending original id.
    /// Position `i` holds rank `i + 1`.
    pub ranked: Vec<ServedProfile>,
    /// Users left for unicast delivery, ascending id.
    pub excluded: Vec<UserId>,
    pub k_m: usize,
    pub k_u: usize,
}

impl ServedPartition {
    /// `delta` by rank.
    pub fn deltas(&self) -> Vec<usize> {
        self.ranked.iter().map(ServedProfile::delta).collect()
    }

    /// Original profile id of a 1-based rank.
    pub fn original_of(&self, rank: usize) -> usize {
        self.ranked[rank - 1].original
    }

    /// Maps a set of ranks to the corresponding set of original profile ids.
    pub fn to_original<I: IntoIterator<Item = usize>>(&self, ranks: I) -> ProfileSet {
        ProfileSet::from_profiles(ranks.into_iter().map(|r| self.original_of(r)))
    }

    /// `V` of a 1-based rank.
    pub fn users(&self, rank: usize) -> &[UserId] {
        &self.ranked[rank - 1].users
    }
}

/// Keeps the first `min(eta_hat, eta_p)` users (by id) of every profile for
/// coded caching and hands the rest to unicast.
pub fn select_served(cfg: &NetworkConfig, eta_hat: usize) -> Result<ServedPartition, PlacementError> {
    if eta_hat == 0 {
        return Err(PlacementError::ZeroEtaHat);
    }
    let max = cfg.max_eta();
    if eta_hat > max {
        return Err(PlacementError::EtaHatAboveMax { eta_hat, max });
    }

    let mut ranked = Vec::with_capacity(cfg.profiles());
    let mut excluded = Vec::new();
    for p in 1..=cfg.profiles() {
        let mut users = cfg.users_of(p);
        let eta = users.len();
        if eta > eta_hat {
            excluded.extend(users.split_off(eta_hat));
        }
        ranked.push(ServedProfile { original: p, eta, users });
    }
    // stable: equal lengths keep ascending original order
    ranked.sort_by_key(|p| std::cmp::Reverse(p.eta));
    excluded.sort();

    let k_m = ranked.iter().map(ServedProfile::delta).sum();
    let k_u = excluded.len();
    Ok(ServedPartition { eta_hat, ranked, excluded, k_m, k_u })
}
