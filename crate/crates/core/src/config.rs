//! Network configuration and delivery parameters.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{binomial, gcd, Rational};

/// Largest supported profile count; profile sets are stored as `u16` masks.
pub const MAX_PROFILES: usize = 16;
/// Largest supported user population.
pub const MAX_USERS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserId(pub u32);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of (1-based) profile indices, packed into a bitmask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileSet(u16);

impl ProfileSet {
    pub const EMPTY: ProfileSet = ProfileSet(0);

    pub fn from_profiles<I: IntoIterator<Item = usize>>(profiles: I) -> Self {
        let mut mask = 0u16;
        for p in profiles {
            assert!((1..=MAX_PROFILES).contains(&p), "profile {p} out of range");
            mask |= 1 << (p - 1);
        }
        ProfileSet(mask)
    }

    pub fn contains(self, p: usize) -> bool {
        (1..=MAX_PROFILES).contains(&p) && self.0 & (1 << (p - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=MAX_PROFILES).filter(move |&p| self.contains(p))
    }

    pub fn bits(self) -> u16 {
        self.0
    }
}

impl fmt::Display for ProfileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for ProfileSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ProfileSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&p| !(1..=MAX_PROFILES).contains(&p)) {
            return Err(serde::de::Error::custom(format!("profile {bad} out of range")));
        }
        Ok(ProfileSet::from_profiles(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("profile count must be in 1..={MAX_PROFILES}, got {0}")]
    ProfileCount(usize),
    #[error("cache parameter tbar={tbar} must satisfy 0 < tbar < P={profiles}")]
    TbarRange { tbar: usize, profiles: usize },
    #[error("gcd(tbar={tbar}, P={profiles}) must be 1")]
    NotCoprime { tbar: usize, profiles: usize },
    #[error("spatial multiplexing gain must be positive")]
    ZeroAlpha,
    #[error("alpha={alpha} exceeds the antenna count L={antennas}")]
    AlphaAboveAntennas { alpha: usize, antennas: usize },
    #[error("library must hold at least one file")]
    EmptyLibrary,
    #[error("association is empty")]
    NoUsers,
    #[error("at most {MAX_USERS} users are supported, got {0}")]
    TooManyUsers(usize),
    #[error("user ids start at 1")]
    ZeroUserId,
    #[error("user {user} maps to profile {profile}, outside 1..={profiles}")]
    ProfileOutOfRange { user: UserId, profile: usize, profiles: usize },
}

/// Global system parameters and the user-to-profile association.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkConfig {
    profiles: usize,
    tbar: usize,
    alpha: usize,
    antennas: usize,
    files: usize,
    association: BTreeMap<UserId, usize>,
}

impl NetworkConfig {
    pub fn new(
        profiles: usize,
        tbar: usize,
        alpha: usize,
        antennas: usize,
        files: usize,
        association: BTreeMap<UserId, usize>,
    ) -> Result<Self, ConfigError> {
        if profiles == 0 || profiles > MAX_PROFILES {
            return Err(ConfigError::ProfileCount(profiles));
        }
        if tbar == 0 || tbar >= profiles {
            return Err(ConfigError::TbarRange { tbar, profiles });
        }
        if gcd(tbar as u64, profiles as u64) != 1 {
            return Err(ConfigError::NotCoprime { tbar, profiles });
        }
        if alpha == 0 {
            return Err(ConfigError::ZeroAlpha);
        }
        if alpha > antennas {
            return Err(ConfigError::AlphaAboveAntennas { alpha, antennas });
        }
        if files == 0 {
            return Err(ConfigError::EmptyLibrary);
        }
        if association.is_empty() {
            return Err(ConfigError::NoUsers);
        }
        if association.len() > MAX_USERS {
            return Err(ConfigError::TooManyUsers(association.len()));
        }
        for (&user, &profile) in &association {
            if user.0 == 0 {
                return Err(ConfigError::ZeroUserId);
            }
            if profile == 0 || profile > profiles {
                return Err(ConfigError::ProfileOutOfRange { user, profile, profiles });
            }
        }
        Ok(NetworkConfig { profiles, tbar, alpha, antennas, files, association })
    }

    /// Builds a config from per-profile user counts; profile `p` gets the next
    /// `eta[p-1]` consecutive user ids starting at 1.
    pub fn from_counts(
        tbar: usize,
        alpha: usize,
        antennas: usize,
        files: usize,
        eta: &[usize],
    ) -> Result<Self, ConfigError> {
        let mut association = BTreeMap::new();
        let mut next = 1u32;
        for (i, &count) in eta.iter().enumerate() {
            for _ in 0..count {
                association.insert(UserId(next), i + 1);
                next += 1;
            }
        }
        Self::new(eta.len(), tbar, alpha, antennas, files, association)
    }

    /// `P`
    pub fn profiles(&self) -> usize {
        self.profiles
    }

    pub fn tbar(&self) -> usize {
        self.tbar
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn files(&self) -> usize {
        self.files
    }

    pub fn association(&self) -> &BTreeMap<UserId, usize> {
        &self.association
    }

    /// Cache ratio `tbar / P`.
    pub fn gamma(&self) -> Rational {
        Rational::new(self.tbar as i128, self.profiles as i128)
    }

    /// `K`
    pub fn user_count(&self) -> usize {
        self.association.len()
    }

    pub fn profile_of(&self, user: UserId) -> Option<usize> {
        self.association.get(&user).copied()
    }

    /// Users of profile `p` in ascending id order.
    pub fn users_of(&self, p: usize) -> Vec<UserId> {
        self.association
            .iter()
            .filter(|(_, &q)| q == p)
            .map(|(&u, _)| u)
            .collect()
    }

    /// Profile lengths `eta_p`, indexed by `p - 1`.
    pub fn eta(&self) -> Vec<usize> {
        let mut eta = vec![0; self.profiles];
        for &p in self.association.values() {
            eta[p - 1] += 1;
        }
        eta
    }

    pub fn max_eta(&self) -> usize {
        self.eta().into_iter().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    A,
    B,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::A => "A",
            Strategy::B => "B",
        })
    }
}

/// The delivery knobs chosen by the transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeliveryParams {
    pub eta_hat: usize,
    /// Profiles served per transmission (`Q`).
    pub q: usize,
    /// Users per profile per transmission.
    pub beta: usize,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("delivery parameter eta_hat must be positive")]
    ZeroEtaHat,
    #[error("eta_hat={eta_hat} exceeds the longest profile ({max})")]
    EtaHatAboveMax { eta_hat: usize, max: usize },
    #[error("beta must be positive")]
    ZeroBeta,
    #[error("beta={beta} exceeds min(alpha, eta_hat)={bound}")]
    BetaTooLarge { beta: usize, bound: usize },
    #[error("Q={q} below tbar+1={min}")]
    QBelowMin { q: usize, min: usize },
    #[error("Q={q} above tbar+ceil(alpha/beta)={max}")]
    QAboveMax { q: usize, max: usize },
    #[error("Q={q} exceeds the profile count {profiles}")]
    QAboveProfiles { q: usize, profiles: usize },
    #[error("strategy A with Q={q}, beta={beta} needs (Q-tbar)*beta <= alpha={alpha}")]
    ZeroForcingOverload { q: usize, beta: usize, alpha: usize },
    #[error("strategy B needs alpha > eta_hat with non-integer alpha/eta_hat (alpha={alpha}, eta_hat={eta_hat})")]
    StrategyBRegime { alpha: usize, eta_hat: usize },
    #[error("strategy B needs beta=eta_hat={eta_hat} and Q=tbar+ceil(alpha/eta_hat)={q_expected}, got beta={beta}, Q={q}")]
    StrategyBShape { eta_hat: usize, q_expected: usize, beta: usize, q: usize },
}

/// Delivery parameters that passed [`validate`], with their derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidatedParams {
    pub params: DeliveryParams,
    /// `alpha - eta_hat * floor(alpha / eta_hat)`; only meaningful for strategy B.
    pub theta: usize,
    /// `C(Q-2, Q-tbar-2)`
    pub nu1: usize,
    /// `C(Q-1, Q-tbar-1)`
    pub nu2: usize,
    /// Subpackets each mini-file is split into for this delivery.
    pub subpackets_per_minifile: usize,
}

impl ValidatedParams {
    pub fn eta_hat(&self) -> usize {
        self.params.eta_hat
    }
    pub fn q(&self) -> usize {
        self.params.q
    }
    pub fn beta(&self) -> usize {
        self.params.beta
    }
    pub fn strategy(&self) -> Strategy {
        self.params.strategy
    }
}

/// Checks `params` against `cfg` and derives `theta`, `nu1`, `nu2` and the
/// subpacketization.
pub fn validate(cfg: &NetworkConfig, params: DeliveryParams) -> Result<ValidatedParams, ParamError> {
    let DeliveryParams { eta_hat, q, beta, strategy } = params;
    let (tbar, alpha, p) = (cfg.tbar(), cfg.alpha(), cfg.profiles());

    if eta_hat == 0 {
        return Err(ParamError::ZeroEtaHat);
    }
    let max = cfg.max_eta();
    if eta_hat > max {
        return Err(ParamError::EtaHatAboveMax { eta_hat, max });
    }
    if beta == 0 {
        return Err(ParamError::ZeroBeta);
    }
    let bound = alpha.min(eta_hat);
    if beta > bound {
        return Err(ParamError::BetaTooLarge { beta, bound });
    }
    if q < tbar + 1 {
        return Err(ParamError::QBelowMin { q, min: tbar + 1 });
    }
    let q_max = tbar + alpha.div_ceil(beta);
    if q > q_max {
        return Err(ParamError::QAboveMax { q, max: q_max });
    }
    if q > p {
        return Err(ParamError::QAboveProfiles { q, profiles: p });
    }

    let c = |n: usize, k: isize| binomial(n as i64, k as i64) as usize;
    let (qi, ti) = (q as isize, tbar as isize);
    let inner = c(p - tbar - 1, qi - ti - 1);
    let nu1 = if q >= 2 { c(q - 2, qi - ti - 2) } else { 0 };
    let nu2 = c(q - 1, qi - ti - 1);

    let (theta, subpackets_per_minifile) = match strategy {
        Strategy::A => {
            if (q - tbar) * beta > alpha {
                return Err(ParamError::ZeroForcingOverload { q, beta, alpha });
            }
            (0, beta * inner)
        }
        Strategy::B => {
            if alpha <= eta_hat || alpha % eta_hat == 0 {
                return Err(ParamError::StrategyBRegime { alpha, eta_hat });
            }
            let q_expected = tbar + alpha.div_ceil(eta_hat);
            if beta != eta_hat || q != q_expected {
                return Err(ParamError::StrategyBShape { eta_hat, q_expected, beta, q });
            }
            let theta = alpha - eta_hat * (alpha / eta_hat);
            (theta, (eta_hat * tbar + alpha) * inner * nu1)
        }
    };

    Ok(ValidatedParams { params, theta, nu1, nu2, subpackets_per_minifile })
}
