//! Schedule-agnostic decodability checks.
//!
//! Everything here is re-derived from the raw transmission list, the cache
//! placement rule and the demands. Nothing is shared with the schedulers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::config::{NetworkConfig, Strategy, UserId, ValidatedParams};
use crate::math::binomial;
use crate::placement::{MiniFileId, SubpacketId};
use crate::schedule::{Demands, Schedule};

/// A broken zero-forcing or capacity constraint. Transmission and round
/// indices are 0-based positions in the schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NullSetTooLarge { transmission: usize, recipient: UserId, size: usize },
    RecipientInOwnNullSet { transmission: usize, recipient: UserId },
    ProfileOverload { transmission: usize, profile: usize, served: usize, bound: usize },
    TooManyRecipients { transmission: usize, served: usize, bound: usize },
    /// A co-served user neither nulls nor caches another user's stream.
    Uncancelled { transmission: usize, stream_for: UserId, hears: UserId },
    UnknownUser { user: UserId },
    UcRoundOverflow { round: usize, entries: usize, alpha: usize },
    UcRepeatedRecipient { round: usize, recipient: UserId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NullSetTooLarge { transmission, recipient, size } => {
                write!(f, "transmission {transmission}: null set of user {recipient} has {size} users")
            }
            Violation::RecipientInOwnNullSet { transmission, recipient } => {
                write!(f, "transmission {transmission}: user {recipient} nulls itself")
            }
            Violation::ProfileOverload { transmission, profile, served, bound } => {
                write!(f, "transmission {transmission}: profile {profile} serves {served} users (bound {bound})")
            }
            Violation::TooManyRecipients { transmission, served, bound } => {
                write!(f, "transmission {transmission}: {served} recipients (bound {bound})")
            }
            Violation::Uncancelled { transmission, stream_for, hears } => {
                write!(f, "transmission {transmission}: user {hears} cannot cancel the stream for {stream_for}")
            }
            Violation::UnknownUser { user } => write!(f, "user {user} is not associated"),
            Violation::UcRoundOverflow { round, entries, alpha } => {
                write!(f, "unicast round {round}: {entries} entries with alpha={alpha}")
            }
            Violation::UcRepeatedRecipient { round, recipient } => {
                write!(f, "unicast round {round}: user {recipient} served twice")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Subpackets delivered to each user over both steps.
    pub received: BTreeMap<UserId, BTreeSet<SubpacketId>>,
    pub duplicates: Vec<(UserId, SubpacketId)>,
    pub missing: Vec<(UserId, SubpacketId)>,
    /// Deliveries the user did not need: wrong file, cached, or `q` out of range.
    pub misdirected: Vec<(UserId, SubpacketId)>,
    pub max_nullset: usize,
    /// Users served per profile (original id) in each coded transmission.
    pub profile_loads: Vec<BTreeMap<usize, usize>>,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl VerificationReport {
    fn settle(mut self) -> Self {
        self.pass = self.duplicates.is_empty()
            && self.missing.is_empty()
            && self.misdirected.is_empty()
            && self.violations.is_empty();
        self
    }

    /// Combines a coverage report with a feasibility report.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.received.extend(other.received);
        self.duplicates.extend(other.duplicates);
        self.missing.extend(other.missing);
        self.misdirected.extend(other.misdirected);
        self.max_nullset = self.max_nullset.max(other.max_nullset);
        if self.profile_loads.is_empty() {
            self.profile_loads = other.profile_loads;
        }
        self.violations.extend(other.violations);
        self.settle()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let status = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "verification: {status}");
        let _ = writeln!(s, "users checked: {}", self.received.len());
        let _ = writeln!(s, "max null set: {}", self.max_nullset);
        let _ = writeln!(s, "duplicates: {}", self.duplicates.len());
        let _ = writeln!(s, "missing: {}", self.missing.len());
        let _ = writeln!(s, "misdirected: {}", self.misdirected.len());
        let _ = writeln!(s, "violations: {}", self.violations.len());
        for (u, sp) in self.missing.iter().take(20) {
            let _ = writeln!(s, "  missing {sp} at user {u}");
        }
        for (u, sp) in self.duplicates.iter().take(20) {
            let _ = writeln!(s, "  duplicate {sp} at user {u}");
        }
        for (u, sp) in self.misdirected.iter().take(20) {
            let _ = writeln!(s, "  misdirected {sp} at user {u}");
        }
        for v in self.violations.iter().take(20) {
            let _ = writeln!(s, "  {v}");
        }
        s
    }
}

fn subpackets_per_minifile(cfg: &NetworkConfig, params: &ValidatedParams) -> u128 {
    let (p, t, q) = (cfg.profiles() as i64, cfg.tbar() as i64, params.q() as i64);
    let spread = binomial(p - t - 1, q - t - 1);
    match params.strategy() {
        Strategy::A => params.beta() as u128 * spread,
        Strategy::B => {
            let streams = (params.eta_hat() * cfg.tbar() + cfg.alpha()) as u128;
            streams * spread * binomial(q - 2, q - t - 2)
        }
    }
}

/// Every user must end up with each uncached subpacket of its demanded file
/// exactly once across both delivery steps.
pub fn check_coverage(
    schedule: &Schedule,
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    demands: &Demands,
) -> VerificationReport {
    let spm = subpackets_per_minifile(cfg, params) as u32;
    let mut report = VerificationReport::default();
    let deliveries = schedule
        .cc
        .iter()
        .flat_map(|t| t.codewords.iter().map(|c| (c.recipient, c.subpacket)))
        .chain(schedule.uc.iter().flat_map(|r| r.entries.iter().map(|e| (e.recipient, e.subpacket))));

    for (user, sp) in deliveries {
        let Some(own) = cfg.profile_of(user) else {
            report.violations.push(Violation::UnknownUser { user });
            continue;
        };
        let wanted = demands.get(&user) == Some(&sp.mini.file)
            && !sp.mini.profiles.contains(own)
            && sp.mini.profiles.len() == cfg.tbar()
            && sp.mini.profiles.iter().all(|p| p <= cfg.profiles())
            && (1..=spm).contains(&sp.q);
        if !wanted {
            report.misdirected.push((user, sp));
        } else if !report.received.entry(user).or_default().insert(sp) {
            report.duplicates.push((user, sp));
        }
    }

    let ground: Vec<usize> = (1..=cfg.profiles()).collect();
    for (&user, &own) in cfg.association() {
        let file = demands.get(&user).copied().unwrap_or(0);
        let got = report.received.entry(user).or_default();
        for mask in 0u32..(1 << ground.len()) {
            if mask.count_ones() as usize != cfg.tbar() || mask & (1 << (own - 1)) != 0 {
                continue;
            }
            let profiles = crate::config::ProfileSet::from_profiles(
                ground.iter().copied().filter(|p| mask & (1 << (p - 1)) != 0),
            );
            for q in 1..=spm {
                let sp = SubpacketId { mini: MiniFileId { file, profiles }, q };
                if !got.contains(&sp) {
                    report.missing.push((user, sp));
                }
            }
        }
    }
    report.missing.sort_unstable();
    report.settle()
}

/// Null-set sizes, per-profile and total loads, interference cancellation
/// and unicast round capacity.
pub fn check_zf_feasibility(schedule: &Schedule, cfg: &NetworkConfig, params: &ValidatedParams) -> VerificationReport {
    let alpha = cfg.alpha();
    let beta = params.beta();
    let total_bound = match params.strategy() {
        Strategy::A => params.q() * beta,
        Strategy::B => params.eta_hat() * cfg.tbar() + alpha,
    };
    let mut report = VerificationReport::default();

    for (ti, tx) in schedule.cc.iter().enumerate() {
        let mut loads: BTreeMap<usize, usize> = BTreeMap::new();
        let mut recipients: Vec<UserId> = tx.codewords.iter().map(|c| c.recipient).collect();
        recipients.sort_unstable();
        recipients.dedup();
        for &u in &recipients {
            match cfg.profile_of(u) {
                Some(p) => *loads.entry(p).or_default() += 1,
                None => report.violations.push(Violation::UnknownUser { user: u }),
            }
        }
        for (&profile, &served) in &loads {
            if served > beta {
                report.violations.push(Violation::ProfileOverload { transmission: ti, profile, served, bound: beta });
            }
        }
        if recipients.len() > total_bound {
            report.violations.push(Violation::TooManyRecipients {
                transmission: ti,
                served: recipients.len(),
                bound: total_bound,
            });
        }
        report.profile_loads.push(loads);

        for cw in &tx.codewords {
            report.max_nullset = report.max_nullset.max(cw.nullset.len());
            if cw.nullset.len() + 1 > alpha {
                report.violations.push(Violation::NullSetTooLarge {
                    transmission: ti,
                    recipient: cw.recipient,
                    size: cw.nullset.len(),
                });
            }
            if cw.nullset.contains(&cw.recipient) {
                report.violations.push(Violation::RecipientInOwnNullSet { transmission: ti, recipient: cw.recipient });
            }
            for &other in &recipients {
                if other == cw.recipient || cw.nullset.contains(&other) {
                    continue;
                }
                let caches = cfg.profile_of(other).is_some_and(|p| cw.subpacket.mini.profiles.contains(p));
                if !caches {
                    report.violations.push(Violation::Uncancelled {
                        transmission: ti,
                        stream_for: cw.recipient,
                        hears: other,
                    });
                }
            }
        }
    }

    for (ri, round) in schedule.uc.iter().enumerate() {
        if round.entries.len() > alpha {
            report.violations.push(Violation::UcRoundOverflow { round: ri, entries: round.entries.len(), alpha });
        }
        let mut seen: HashMap<UserId, ()> = HashMap::new();
        for e in &round.entries {
            if seen.insert(e.recipient, ()).is_some() {
                report.violations.push(Violation::UcRepeatedRecipient { round: ri, recipient: e.recipient });
            }
        }
    }
    report.settle()
}

/// Coverage and feasibility together.
pub fn verify_schedule(
    schedule: &Schedule,
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    demands: &Demands,
) -> VerificationReport {
    check_coverage(schedule, cfg, params, demands).merge(check_zf_feasibility(schedule, cfg, params))
}
