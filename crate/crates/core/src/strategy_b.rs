//! Strategy B: phantom-padded profiles, sliding head windows and delivery
//! over transmission quintuples `(r, c, l, m, s)`.
//!
//! Used when `alpha > eta_hat` and `alpha / eta_hat` is not an integer. Each
//! quintuple serves a window of `theta` slots from profile `r` next to the
//! `Q - 1` companion profiles `B`; the `nu2` codeword groups are indexed by the
//! `floor(alpha/eta_hat)`-subsets of `B`.

use std::fmt;

use serde::Serialize;

use crate::config::{NetworkConfig, Strategy, UserId, ValidatedParams};
use crate::math::{ksubsets, wrap1};
use crate::placement::{MiniFileId, ServedPartition, SubpacketId};
use crate::schedule::{
    check_demands, check_index, demand_of, Codeword, Demands, ScheduleError, SubpacketCounters,
    Transmission, TransmissionId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Slot {
    Real(UserId),
    Phantom,
}

impl Slot {
    pub fn user(self) -> Option<UserId> {
        match self {
            Slot::Real(u) => Some(u),
            Slot::Phantom => None,
        }
    }

    pub fn is_phantom(self) -> bool {
        matches!(self, Slot::Phantom)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Real(u) => write!(f, "{u}"),
            Slot::Phantom => f.write_str("f*"),
        }
    }
}

/// `Y_r`: the served users of a profile followed by phantoms up to `eta_hat`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaddedProfile {
    pub slots: Vec<Slot>,
}

pub fn pad_profile(users: &[UserId], eta_hat: usize) -> Result<PaddedProfile, ScheduleError> {
    if users.len() > eta_hat {
        return Err(ScheduleError::ProfileTooLong { delta: users.len(), eta_hat });
    }
    let mut slots: Vec<Slot> = users.iter().map(|&u| Slot::Real(u)).collect();
    slots.resize(eta_hat, Slot::Phantom);
    Ok(PaddedProfile { slots })
}

/// `E_r^m`: slots `mod1(m + i, eta_hat)` for `i = 0 .. theta-1`.
pub fn head_window(padded: &PaddedProfile, m: usize, theta: usize) -> Result<Vec<Slot>, ScheduleError> {
    let len = padded.slots.len();
    check_index("m", m, len)?;
    check_index("theta", theta, len)?;
    Ok((0..theta).map(|i| padded.slots[wrap1(i + m, len) - 1]).collect())
}

/// `K_{r,s}^{m,u}`: `nu1` copies of `u` then `nu2 - nu1` phantoms, read
/// circularly starting at position `s`.
pub fn slot_pattern(u: Slot, nu1: usize, nu2: usize, s: usize) -> Result<Vec<Slot>, ScheduleError> {
    check_index("s", s, nu2)?;
    if nu1 > nu2 {
        return Err(ScheduleError::IndexRange { what: "nu1", value: nu1, bound: nu2 });
    }
    let base = |pos: usize| if pos <= nu1 { u } else { Slot::Phantom };
    Ok((0..nu2).map(|i| base(wrap1(i + s, nu2))).collect())
}

/// Companion profiles of start profile `r`: returns `B = {pivot} ∪ I_c^r(l)`
/// (pivot first) together with `I_c^r(l)`.
///
/// `deltas` are indexed by rank; the candidates `[P] \ {r}` are ordered by
/// descending `delta`, ties by rank.
pub fn companion_profiles(
    deltas: &[usize],
    r: usize,
    c: usize,
    l: usize,
    q: usize,
) -> Result<(Vec<usize>, Vec<usize>), ScheduleError> {
    let p = deltas.len();
    check_index("r", r, p)?;
    if q < 2 || q > p {
        return Err(ScheduleError::IndexRange { what: "Q", value: q, bound: p });
    }
    check_index("c", c, p - q + 1)?;
    let mut others: Vec<usize> = (1..=p).filter(|&x| x != r).collect();
    others.sort_by(|a, b| deltas[b - 1].cmp(&deltas[a - 1]));
    let tuples = ksubsets(&others[c..], q - 2)?;
    check_index("l", l, tuples.len())?;
    let tail = tuples[l - 1].clone();
    let mut b = Vec::with_capacity(q - 1);
    b.push(others[c - 1]);
    b.extend_from_slice(&tail);
    Ok((b, tail))
}

/// Everything one quintuple needs, in rank terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuintupleContext {
    pub id: (usize, usize, usize, usize, usize),
    /// `B`, pivot first.
    pub companions: Vec<usize>,
    /// `E_r^m`
    pub window: Vec<Slot>,
    /// `C(n)` for `n = 1..=nu2`.
    pub groups: Vec<Vec<usize>>,
    /// `Theta_n = B \ C(n)`.
    pub theta_sets: Vec<Vec<usize>>,
}

pub fn quintuple_context(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    (r, c, l, m, s): (usize, usize, usize, usize, usize),
) -> Result<QuintupleContext, ScheduleError> {
    let (companions, _) = companion_profiles(&partition.deltas(), r, c, l, params.q())?;
    check_index("s", s, params.nu2)?;
    let padded = pad_profile(partition.users(r), params.eta_hat())?;
    let window = head_window(&padded, m, params.theta)?;
    let (groups, theta_sets) = group_split(&companions, cfg.alpha() / params.eta_hat())?;
    debug_assert_eq!(groups.len(), params.nu2);
    Ok(QuintupleContext { id: (r, c, l, m, s), companions, window, groups, theta_sets })
}

type Groups = Vec<Vec<usize>>;

fn group_split(companions: &[usize], size: usize) -> Result<(Groups, Groups), ScheduleError> {
    let groups = ksubsets(companions, size)?;
    let theta_sets = groups
        .iter()
        .map(|g| companions.iter().copied().filter(|b| !g.contains(b)).collect())
        .collect();
    Ok((groups, theta_sets))
}

/// Builds `x_{r,c,l}^{m,s}`; `None` when the window holds only phantoms and
/// the pivot profile has no served users.
pub fn build_transmission_b(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    quintuple: (usize, usize, usize, usize, usize),
    demands: &Demands,
    counters: &mut SubpacketCounters,
) -> Result<Option<Transmission>, ScheduleError> {
    if params.strategy() != Strategy::B {
        return Err(ScheduleError::WrongStrategy(params.strategy()));
    }
    let ctx = quintuple_context(cfg, params, partition, quintuple)?;
    emit(cfg, params, partition, &ctx, demands, counters)
}

fn emit(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    ctx: &QuintupleContext,
    demands: &Demands,
    counters: &mut SubpacketCounters,
) -> Result<Option<Transmission>, ScheduleError> {
    let (r, c, l, m, s) = ctx.id;
    let pivot = ctx.companions[0];
    if ctx.window.iter().all(|w| w.is_phantom()) && partition.users(pivot).is_empty() {
        return Ok(None);
    }

    let patterns = ctx
        .window
        .iter()
        .map(|&u| slot_pattern(u, params.nu1, params.nu2, s))
        .collect::<Result<Vec<_>, _>>()?;
    let window_users: Vec<UserId> = ctx.window.iter().filter_map(|w| w.user()).collect();

    let mut codewords = Vec::new();
    for (n, (group, theta_set)) in ctx.groups.iter().zip(&ctx.theta_sets).enumerate() {
        let mut recipients: Vec<UserId> = patterns.iter().filter_map(|pat| pat[n].user()).collect();
        let mut interference = window_users.clone();
        for &p in group {
            recipients.extend_from_slice(partition.users(p));
            interference.extend_from_slice(partition.users(p));
        }
        for (i, u) in recipients.iter().enumerate() {
            if recipients[i + 1..].contains(u) {
                return Err(ScheduleError::DuplicateRecipient(*u));
            }
        }
        interference.sort_unstable();
        interference.dedup();
        if interference.len() > cfg.alpha() {
            return Err(ScheduleError::NullSetTooLarge { size: interference.len() - 1, alpha: cfg.alpha() });
        }
        let set = partition.to_original(theta_set.iter().copied());
        for &k in &recipients {
            let file = demand_of(demands, k)?;
            let q = counters.next(k, set);
            codewords.push(Codeword {
                recipient: k,
                subpacket: SubpacketId { mini: MiniFileId { file, profiles: set }, q },
                nullset: interference.iter().copied().filter(|&j| j != k).collect(),
            });
        }
    }
    Ok(Some(Transmission { id: TransmissionId::Quintuple { r, c, l, m, s }, codewords }))
}

/// Every non-skipped quintuple in lexicographic order.
pub fn schedule_b(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    demands: &Demands,
    counters: &mut SubpacketCounters,
) -> Result<Vec<Transmission>, ScheduleError> {
    if params.strategy() != Strategy::B {
        return Err(ScheduleError::WrongStrategy(params.strategy()));
    }
    check_demands(cfg, demands)?;
    let (p, q, eta_hat) = (cfg.profiles(), params.q(), params.eta_hat());
    let deltas = partition.deltas();
    let group_size = cfg.alpha() / eta_hat;

    let mut out = Vec::new();
    for r in 1..=p {
        let padded = pad_profile(partition.users(r), eta_hat)?;
        let windows = (1..=eta_hat)
            .map(|m| head_window(&padded, m, params.theta))
            .collect::<Result<Vec<_>, _>>()?;
        for c in 1..=p - q + 1 {
            for l in 1.. {
                let companions = match companion_profiles(&deltas, r, c, l, q) {
                    Ok((b, _)) => b,
                    Err(ScheduleError::IndexRange { what: "l", .. }) => break,
                    Err(e) => return Err(e),
                };
                let (groups, theta_sets) = group_split(&companions, group_size)?;
                for (m, window) in windows.iter().enumerate() {
                    for s in 1..=params.nu2 {
                        let ctx = QuintupleContext {
                            id: (r, c, l, m + 1, s),
                            companions: companions.clone(),
                            window: window.clone(),
                            groups: groups.clone(),
                            theta_sets: theta_sets.clone(),
                        };
                        if let Some(t) = emit(cfg, params, partition, &ctx, demands, counters)? {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
