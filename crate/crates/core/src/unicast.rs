//! Greedy unicast rounds for the users left out of the coded-caching step.

use std::collections::BTreeMap;

use crate::config::{NetworkConfig, UserId, ValidatedParams};
use crate::placement::{minifile_index_sets, MiniFileId, ServedPartition, SubpacketId};
use crate::schedule::{demand_of, Demands, ScheduleError, SubpacketCounters, UcEntry, UcRound};

/// Subpackets each excluded user still lacks, ascending `(mini-file, q)`.
///
/// Sequence numbers continue from whatever `counters` already issued.
pub fn missing_subpackets(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    demands: &Demands,
    counters: &SubpacketCounters,
) -> Result<BTreeMap<UserId, Vec<SubpacketId>>, ScheduleError> {
    let sets = minifile_index_sets(cfg);
    let spm = params.subpackets_per_minifile as u32;
    let mut out = BTreeMap::new();
    for &user in &partition.excluded {
        let file = demand_of(demands, user)?;
        let own = cfg.profile_of(user).expect("excluded users are associated");
        let mut list: Vec<SubpacketId> = sets
            .iter()
            .filter(|s| !s.contains(own))
            .flat_map(|&profiles| {
                let mini = MiniFileId { file, profiles };
                (counters.issued(user, profiles) + 1..=spm).map(move |q| SubpacketId { mini, q })
            })
            .collect();
        list.sort_unstable();
        out.insert(user, list);
    }
    Ok(out)
}

/// Each round serves one pending subpacket to each of the `alpha` users with
/// the most left (ties by ascending id) until nothing is pending.
pub fn schedule_uc(missing: &BTreeMap<UserId, Vec<SubpacketId>>, alpha: usize) -> Vec<UcRound> {
    let mut queues: Vec<(UserId, &[SubpacketId])> = missing
        .iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(&u, v)| (u, v.as_slice()))
        .collect();
    let mut rounds = Vec::new();
    if alpha == 0 {
        return rounds;
    }
    while !queues.is_empty() {
        queues.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        let capacity = alpha.min(queues.len());
        let entries = queues[..capacity]
            .iter_mut()
            .map(|(user, rest)| {
                let (head, tail) = rest.split_first().expect("non-empty queue");
                *rest = tail;
                UcEntry { recipient: *user, subpacket: *head }
            })
            .collect();
        rounds.push(UcRound { entries, capacity });
        queues.retain(|(_, rest)| !rest.is_empty());
    }
    rounds
}
