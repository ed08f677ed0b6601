//! Strategy A: row elevation of each served profile and delivery over
//! transmission triples `(r, c, l)`.
//!
//! Profiles are addressed by rank (1 = longest), as produced by
//! [`select_served`](crate::placement::select_served). Mini-file index sets in
//! emitted codewords are translated back to original profile ids.

use serde::Serialize;

use crate::config::{NetworkConfig, Strategy, UserId, ValidatedParams};
use crate::math::{binomial, ksubsets, wrap1};
use crate::placement::{MiniFileId, ServedPartition, SubpacketId};
use crate::schedule::{
    check_demands, check_index, demand_of, Codeword, Demands, ScheduleError, SubpacketCounters,
    Transmission, TransmissionId,
};

/// `S_p`: `eta_hat` rows, the first `phi` of which are `R_{p,j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElevatedProfile {
    pub rows: Vec<Vec<UserId>>,
    /// `max(beta, delta_p)`
    pub phi: usize,
    pub delta: usize,
}

pub fn elevate_profile(
    users: &[UserId],
    beta: usize,
    eta_hat: usize,
) -> Result<ElevatedProfile, ScheduleError> {
    let delta = users.len();
    if delta > eta_hat {
        return Err(ScheduleError::ProfileTooLong { delta, eta_hat });
    }
    check_index("beta", beta, eta_hat)?;
    let phi = beta.max(delta);
    let rows = (1..=eta_hat)
        .map(|j| {
            if j > phi {
                Vec::new()
            } else if delta <= beta {
                users.to_vec()
            } else {
                (1..=beta).map(|i| users[wrap1(i + j - 1, delta) - 1]).collect()
            }
        })
        .collect();
    Ok(ElevatedProfile { rows, phi, delta })
}

/// `M_r`: the `(Q-1)`-subsets of `[r+1 .. P]` in enumeration order.
pub fn profile_families(r: usize, profiles: usize, q: usize) -> Result<Vec<Vec<usize>>, ScheduleError> {
    check_index("Q", q, profiles)?;
    check_index("r", r, profiles - q + 1)?;
    let ground: Vec<usize> = (r + 1..=profiles).collect();
    Ok(ksubsets(&ground, q - 1)?)
}

/// `T_{r,c,l}` as a multiset, or `None` when profile `r` has no served users.
pub fn served_set(
    elevated: &[ElevatedProfile],
    r: usize,
    c: usize,
    l: usize,
    q: usize,
) -> Result<Option<Vec<UserId>>, ScheduleError> {
    let families = profile_families(r, elevated.len(), q)?;
    check_index("c", c, elevated[r - 1].phi)?;
    check_index("l", l, families.len())?;
    if elevated[r - 1].delta == 0 {
        return Ok(None);
    }
    let mut out = elevated[r - 1].rows[c - 1].clone();
    for &b in &families[l - 1] {
        out.extend_from_slice(&elevated[b - 1].rows[c - 1]);
    }
    Ok(Some(out))
}

/// Builds `x_{r,c,l}`; `None` when the triple is skipped.
#[allow(clippy::too_many_arguments)]
pub fn build_transmission_a(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    elevated: &[ElevatedProfile],
    (r, c, l): (usize, usize, usize),
    demands: &Demands,
    counters: &mut SubpacketCounters,
) -> Result<Option<Transmission>, ScheduleError> {
    let families = profile_families(r, cfg.profiles(), params.q())?;
    check_index("c", c, elevated[r - 1].phi)?;
    check_index("l", l, families.len())?;
    if elevated[r - 1].delta == 0 {
        return Ok(None);
    }
    emit(cfg, partition, elevated, (r, c, l), &families[l - 1], demands, counters).map(Some)
}

#[allow(clippy::too_many_arguments)]
fn emit(
    cfg: &NetworkConfig,
    partition: &ServedPartition,
    elevated: &[ElevatedProfile],
    (r, c, l): (usize, usize, usize),
    family: &[usize],
    demands: &Demands,
    counters: &mut SubpacketCounters,
) -> Result<Transmission, ScheduleError> {
    let mut active = Vec::with_capacity(family.len() + 1);
    active.push(r);
    active.extend_from_slice(family);

    let mut codewords = Vec::new();
    for lambda in ksubsets(&active, cfg.tbar())? {
        let mut group: Vec<UserId> = Vec::new();
        for p in active.iter().filter(|p| !lambda.contains(p)) {
            for &u in &elevated[p - 1].rows[c - 1] {
                if !group.contains(&u) {
                    group.push(u);
                }
            }
        }
        if group.len() > cfg.alpha() {
            return Err(ScheduleError::NullSetTooLarge { size: group.len() - 1, alpha: cfg.alpha() });
        }
        let set = partition.to_original(lambda.iter().copied());
        for &k in &group {
            let file = demand_of(demands, k)?;
            let q = counters.next(k, set);
            codewords.push(Codeword {
                recipient: k,
                subpacket: SubpacketId { mini: MiniFileId { file, profiles: set }, q },
                nullset: group.iter().copied().filter(|&j| j != k).collect(),
            });
        }
    }
    Ok(Transmission { id: TransmissionId::Triple { r, c, l }, codewords })
}

/// Every non-skipped triple in lexicographic `(r, c, l)` order.
pub fn schedule_a(
    cfg: &NetworkConfig,
    params: &ValidatedParams,
    partition: &ServedPartition,
    demands: &Demands,
    counters: &mut SubpacketCounters,
) -> Result<Vec<Transmission>, ScheduleError> {
    if params.strategy() != Strategy::A {
        return Err(ScheduleError::WrongStrategy(params.strategy()));
    }
    check_demands(cfg, demands)?;
    let elevated = partition
        .ranked
        .iter()
        .map(|p| elevate_profile(&p.users, params.beta(), params.eta_hat()))
        .collect::<Result<Vec<_>, _>>()?;

    let (p, q) = (cfg.profiles(), params.q());
    let mut out = Vec::new();
    for r in 1..=p - q + 1 {
        if elevated[r - 1].delta == 0 {
            continue;
        }
        let families = profile_families(r, p, q)?;
        debug_assert_eq!(families.len() as u128, binomial((p - r) as i64, (q - 1) as i64));
        for c in 1..=elevated[r - 1].phi {
            for (l, family) in families.iter().enumerate() {
                out.push(emit(cfg, partition, &elevated, (r, c, l + 1), family, demands, counters)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{validate, DeliveryParams, ProfileSet};
    use crate::placement::select_served;
    use crate::schedule::default_demands;
    use std::collections::HashMap;

    fn ids(v: &[u32]) -> Vec<UserId> {
        v.iter().copied().map(UserId).collect()
    }

    struct Fixture {
        cfg: NetworkConfig,
        params: ValidatedParams,
        partition: ServedPartition,
        demands: Demands,
    }

    fn fixture(eta: &[usize], tbar: usize, alpha: usize, eta_hat: usize, q: usize, beta: usize) -> Fixture {
        let cfg = NetworkConfig::from_counts(tbar, alpha, alpha, 40, eta).unwrap();
        let params = validate(&cfg, DeliveryParams { eta_hat, q, beta, strategy: Strategy::A }).unwrap();
        let partition = select_served(&cfg, eta_hat).unwrap();
        let demands = default_demands(&cfg);
        Fixture { cfg, params, partition, demands }
    }

    fn worked_example() -> Fixture {
        fixture(&[5, 4, 3], 1, 6, 4, 3, 3)
    }

    #[test]
    fn elevation_rotates_long_profiles() {
        let e = elevate_profile(&ids(&[1, 2, 3, 4]), 3, 4).unwrap();
        assert_eq!(e.phi, 4);
        assert_eq!(e.rows, vec![ids(&[1, 2, 3]), ids(&[2, 3, 4]), ids(&[3, 4, 1]), ids(&[4, 1, 2])]);
    }

    #[test]
    fn elevation_repeats_short_profiles_then_pads() {
        let e = elevate_profile(&ids(&[10, 11, 12]), 3, 4).unwrap();
        assert_eq!(e.phi, 3);
        assert_eq!(e.rows, vec![ids(&[10, 11, 12]), ids(&[10, 11, 12]), ids(&[10, 11, 12]), vec![]]);
    }

    #[test]
    fn elevation_of_empty_profile() {
        let e = elevate_profile(&[], 2, 3).unwrap();
        assert!(e.rows.iter().all(Vec::is_empty));
        assert_eq!(e.rows.len(), 3);
        assert!(elevate_profile(&ids(&[1, 2, 3]), 1, 2).is_err());
    }

    #[test]
    fn families() {
        assert_eq!(profile_families(1, 3, 3).unwrap(), vec![vec![2, 3]]);
        assert_eq!(profile_families(4, 6, 3).unwrap(), vec![vec![5, 6]]);
        assert_eq!(profile_families(1, 6, 3).unwrap().len(), 10);
        assert!(profile_families(2, 3, 3).is_err());
        assert!(profile_families(0, 3, 2).is_err());
    }

    #[test]
    fn served_set_of_first_triple() {
        let f = worked_example();
        let elevated: Vec<_> = f
            .partition
            .ranked
            .iter()
            .map(|p| elevate_profile(&p.users, 3, 4).unwrap())
            .collect();
        assert_eq!(
            served_set(&elevated, 1, 1, 1, 3).unwrap(),
            Some(ids(&[1, 2, 3, 6, 7, 8, 10, 11, 12]))
        );
        assert!(served_set(&elevated, 1, 5, 1, 3).is_err());
        assert!(served_set(&elevated, 1, 1, 2, 3).is_err());

        let empty = vec![elevate_profile(&[], 1, 1).unwrap(), elevate_profile(&[], 1, 1).unwrap()];
        assert_eq!(served_set(&empty, 1, 1, 1, 2).unwrap(), None);
    }

    #[test]
    fn first_transmission_structure() {
        let f = worked_example();
        let elevated: Vec<_> = f
            .partition
            .ranked
            .iter()
            .map(|p| elevate_profile(&p.users, 3, 4).unwrap())
            .collect();
        let mut counters = SubpacketCounters::new();
        let t = build_transmission_a(&f.cfg, &f.params, &f.partition, &elevated, (1, 1, 1), &f.demands, &mut counters)
            .unwrap()
            .unwrap();
        let by_set = |p: usize| -> Vec<UserId> {
            t.codewords
                .iter()
                .filter(|c| c.subpacket.mini.profiles == ProfileSet::from_profiles([p]))
                .map(|c| c.recipient)
                .collect()
        };
        assert_eq!(by_set(1), ids(&[6, 7, 8, 10, 11, 12]));
        assert_eq!(by_set(2), ids(&[1, 2, 3, 10, 11, 12]));
        assert_eq!(by_set(3), ids(&[1, 2, 3, 6, 7, 8]));
        let user1: Vec<_> = t.codewords.iter().filter(|c| c.recipient == UserId(1)).collect();
        assert_eq!(user1.len(), 2);
        for cw in &user1 {
            assert_eq!(cw.subpacket.q, 1);
            assert_eq!(cw.subpacket.mini.file, 1);
        }
        let g = &t.codewords.iter().find(|c| c.recipient == UserId(6)).unwrap().nullset;
        assert_eq!(g, &ids(&[7, 8, 10, 11, 12]));
    }

    #[test]
    fn worked_example_schedule_counts() {
        let f = worked_example();
        let mut counters = SubpacketCounters::new();
        let txs = schedule_a(&f.cfg, &f.params, &f.partition, &f.demands, &mut counters).unwrap();
        assert_eq!(txs.len(), 4);
        let sizes: Vec<usize> = txs.iter().map(|t| t.recipients().len()).collect();
        assert_eq!(sizes, vec![9, 9, 9, 6]);
        // beta * C(P-1, Q-1) = 3 appearances per served user
        let mut appearances: HashMap<UserId, usize> = HashMap::new();
        for t in &txs {
            for u in t.recipients() {
                *appearances.entry(u).or_default() += 1;
            }
        }
        assert_eq!(appearances.len(), 11);
        assert!(appearances.values().all(|&n| n == 3));
    }

    type Case = (&'static [usize], usize, usize, usize, usize, usize);

    /// Walks every Strategy A schedule shape on a grid and checks per-user
    /// and per-transmission counts by enumeration.
    #[test]
    fn enumerated_counts_on_grid() {
        let cases: &[Case] = &[
            (&[5, 4, 3], 1, 6, 4, 3, 3),
            (&[3, 3, 3, 3], 1, 3, 3, 2, 3),
            (&[4, 2, 2, 1, 0], 2, 6, 3, 4, 3),
            (&[6, 1, 1, 1, 1], 1, 8, 2, 5, 2),
            (&[2, 2, 2, 2, 2, 2], 1, 4, 2, 3, 2),
            (&[7, 3, 0], 1, 2, 5, 2, 2),
            (&[3, 3, 1, 1, 1], 2, 5, 1, 5, 1),
        ];
        for &(eta, tbar, alpha, eta_hat, q, beta) in cases {
            let f = fixture(eta, tbar, alpha, eta_hat, q, beta);
            let p = f.cfg.profiles() as i64;
            let (qi, t) = (q as i64, tbar as i64);
            let mut counters = SubpacketCounters::new();
            let txs = schedule_a(&f.cfg, &f.params, &f.partition, &f.demands, &mut counters).unwrap();

            let per_tx = binomial(qi - 1, qi - t - 1) as usize;
            let mut served: HashMap<UserId, usize> = HashMap::new();
            let mut pair: HashMap<(UserId, ProfileSet), usize> = HashMap::new();
            for tx in &txs {
                let recips = tx.recipients();
                assert!(recips.len() <= q * beta);
                for &u in &recips {
                    *served.entry(u).or_default() += 1;
                    let n = tx.codewords.iter().filter(|c| c.recipient == u).count();
                    assert_eq!(n, per_tx, "{eta:?} {:?}", tx.id);
                }
                for cw in &tx.codewords {
                    assert!(cw.nullset.len() < alpha);
                    *pair.entry((cw.recipient, cw.subpacket.mini.profiles)).or_default() += 1;
                }
            }
            let expected_served = beta * binomial(p - 1, qi - 1) as usize;
            assert_eq!(served.len(), f.partition.k_m);
            assert!(served.values().all(|&n| n == expected_served), "{eta:?}");
            let spm = f.params.subpackets_per_minifile;
            assert_eq!(spm, beta * binomial(p - t - 1, qi - t - 1) as usize);
            assert!(pair.values().all(|&n| n == spm), "{eta:?}");
            let missing_sets = binomial(p - 1, t) as usize;
            assert_eq!(pair.len(), f.partition.k_m * missing_sets);
        }
    }

    #[test]
    fn pascal_telescoping() {
        for big_p in 1..=12i64 {
            for q in 1..=big_p {
                for p in 1..=big_p {
                    let lhs = binomial(big_p - p, q - 1)
                        + (1..p).map(|r| binomial(big_p - r - 1, q - 2)).sum::<u128>();
                    assert_eq!(lhs, binomial(big_p - 1, q - 1), "P={big_p} Q={q} p={p}");
                }
            }
        }
    }

    #[test]
    fn degenerate_single_start_profile() {
        // Q = P leaves r = 1 as the only start profile
        let g = fixture(&[2, 1], 1, 2, 2, 2, 2);
        let mut counters = SubpacketCounters::new();
        let txs = schedule_a(&g.cfg, &g.params, &g.partition, &g.demands, &mut counters).unwrap();
        assert!(txs.iter().all(|t| matches!(t.id, TransmissionId::Triple { r: 1, .. })));
        assert_eq!(txs.len(), 2);
    }

    #[test]
    fn rejects_strategy_b_params() {
        let cfg = NetworkConfig::from_counts(1, 6, 6, 12, &[5, 4, 3]).unwrap();
        let params = validate(&cfg, DeliveryParams { eta_hat: 4, q: 3, beta: 4, strategy: Strategy::B }).unwrap();
        let partition = select_served(&cfg, 4).unwrap();
        let err = schedule_a(&cfg, &params, &partition, &default_demands(&cfg), &mut SubpacketCounters::new());
        assert_eq!(err, Err(ScheduleError::WrongStrategy(Strategy::B)));
    }
}
