//! Degrees of freedom: counted from schedules, predicted in closed form, and
//! explored over delivery parameters and random associations.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{validate, ConfigError, DeliveryParams, NetworkConfig, Strategy, ValidatedParams};
use crate::math::{binomial, ceil_nonneg, Rational};
use crate::pipeline::{build_schedule, Delivery, PipelineError};
use crate::schedule::{default_demands, Demands, Schedule};
use crate::verify::{verify_schedule, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DofError {
    #[error("schedule has no transmissions; DoF undefined")]
    EmptySchedule,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("schedule for eta_hat={eta_hat}, Q={q}, strategy {strategy} failed verification:\n{summary}")]
    VerificationFailed { eta_hat: usize, q: usize, strategy: Strategy, summary: String },
    #[error("eta_hat={eta_hat}, Q={q}, strategy {strategy}: schedule gives {empirical}, closed form gives {closed}")]
    Mismatch { eta_hat: usize, q: usize, strategy: Strategy, empirical: Rational, closed: Rational },
    #[error("association is not uniform with {eta_hat} users per profile")]
    NonUniform { eta_hat: usize },
    #[error("alpha={alpha} must be divisible by eta_hat={eta_hat} and eta_avg={eta_avg}")]
    Divisibility { alpha: usize, eta_hat: usize, eta_avg: usize },
}

/// Raw service and transmission counts of one delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DofCounts {
    pub j_m: usize,
    pub j_u: usize,
    pub t_m: usize,
    pub t_u: usize,
}

impl DofCounts {
    pub fn of(schedule: &Schedule) -> Self {
        DofCounts { j_m: schedule.j_m(), j_u: schedule.j_u(), t_m: schedule.t_m(), t_u: schedule.t_u() }
    }

    pub fn ratio(&self) -> Result<Rational, DofError> {
        let den = self.t_m + self.t_u;
        if den == 0 {
            return Err(DofError::EmptySchedule);
        }
        Ok(Rational::new((self.j_m + self.j_u) as i128, den as i128))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DofReport {
    pub j_m: usize,
    pub j_u: usize,
    pub t_m: usize,
    pub t_u: usize,
    pub k_m: usize,
    pub k_u: usize,
    pub empirical: Rational,
    pub closed_form: Rational,
    pub strategy: Strategy,
    pub eta_hat: usize,
    pub q: usize,
    pub beta: usize,
}

/// Users served per transmission, averaged over the whole delivery.
pub fn empirical_dof(schedule: &Schedule) -> Result<Rational, DofError> {
    DofCounts::of(schedule).ratio()
}

/// Closed-form totals predicted for a delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedCounts {
    pub k_m: usize,
    pub k_u: usize,
    pub j_m: u128,
    pub j_u: u128,
    pub t_m: u128,
    pub t_u: u128,
}

impl PredictedCounts {
    pub fn dof(&self) -> Rational {
        Rational::new((self.j_m + self.j_u) as i128, (self.t_m + self.t_u) as i128)
    }
}

/// Truncated profile lengths in descending order.
fn truncated_lengths(cfg: &NetworkConfig, eta_hat: usize) -> Vec<usize> {
    let mut d: Vec<usize> = cfg.eta().into_iter().map(|e| e.min(eta_hat)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

pub fn predicted_counts(cfg: &NetworkConfig, params: &ValidatedParams) -> PredictedCounts {
    let (p, t, q) = (cfg.profiles() as i64, cfg.tbar() as i64, params.q() as i64);
    let (alpha, eta_hat, beta) = (cfg.alpha(), params.eta_hat(), params.beta());
    let deltas = truncated_lengths(cfg, eta_hat);
    let k_m: usize = deltas.iter().sum();
    let k_u = cfg.user_count() - k_m;
    let uncached = (Rational::from_integer(1) - cfg.gamma()) * Rational::from_integer(binomial(p, t) as i128);
    let spread = binomial(p - t - 1, q - t - 1);

    let (j_m, t_m, per_file) = match params.strategy() {
        Strategy::A => {
            let j_m = k_m as u128 * binomial(p - 1, q - 1) * beta as u128;
            let t_m = (1..=(p - q + 1) as usize)
                .map(|r| {
                    let d = deltas[r - 1];
                    let rows = if d == 0 { 0 } else { beta.max(d) };
                    rows as u128 * binomial(p - r as i64, q - 1)
                })
                .sum();
            (j_m, t_m, beta as u128 * spread)
        }
        Strategy::B => {
            let streams = (eta_hat * cfg.tbar() + alpha) as u128;
            let nu1 = binomial(q - 2, q - t - 2);
            let nu2 = binomial(q - 1, q - t - 1);
            let theta = alpha - eta_hat * (alpha / eta_hat);
            let j_m = k_m as u128 * binomial(p - 1, q - 1) * streams * nu2;
            let mut t_m = 0u128;
            for r in 0..deltas.len() {
                let mut others: Vec<usize> =
                    deltas.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, &d)| d).collect();
                others.sort_unstable_by(|a, b| b.cmp(a));
                for c in 1..=(p - q + 1) as usize {
                    let pivot = others[c - 1];
                    let per_l = binomial(p - c as i64 - 1, q - 2);
                    for m in 1..=eta_hat {
                        let ghost = (0..theta).all(|i| (i + m - 1) % eta_hat + 1 > deltas[r]);
                        if !(ghost && pivot == 0) {
                            t_m += per_l * nu2;
                        }
                    }
                }
            }
            (j_m, t_m, streams * nu1 * spread)
        }
    };

    let (j_u, t_u) = if k_u == 0 {
        (0, 0)
    } else {
        let j_u = Rational::from_integer((k_u as u128 * per_file) as i128) * uncached;
        let t_u = ceil_nonneg(j_u / Rational::from_integer(k_u.min(alpha) as i128));
        (j_u.to_integer() as u128, t_u as u128)
    };
    PredictedCounts { k_m, k_u, j_m, j_u, t_m, t_u }
}

/// DoF predicted without building a schedule.
pub fn closed_form_dof(cfg: &NetworkConfig, params: &ValidatedParams) -> Rational {
    predicted_counts(cfg, params).dof()
}

/// A built, verified and counted delivery.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub delivery: Delivery,
    pub verification: VerificationReport,
    pub report: DofReport,
}

pub fn evaluate(cfg: &NetworkConfig, params: DeliveryParams, demands: &Demands) -> Result<Evaluation, DofError> {
    let delivery = build_schedule(cfg, params, demands)?;
    let verification = verify_schedule(&delivery.schedule, cfg, &delivery.params, demands);
    let counts = DofCounts::of(&delivery.schedule);
    let report = DofReport {
        j_m: counts.j_m,
        j_u: counts.j_u,
        t_m: counts.t_m,
        t_u: counts.t_u,
        k_m: delivery.partition.k_m,
        k_u: delivery.partition.k_u,
        empirical: counts.ratio()?,
        closed_form: closed_form_dof(cfg, &delivery.params),
        strategy: params.strategy,
        eta_hat: params.eta_hat,
        q: params.q,
        beta: params.beta,
    };
    Ok(Evaluation { delivery, verification, report })
}

/// Like [`evaluate`] but fails unless the schedule verifies and its DoF
/// matches the closed form.
pub fn evaluate_checked(cfg: &NetworkConfig, params: DeliveryParams, demands: &Demands) -> Result<Evaluation, DofError> {
    let ev = evaluate(cfg, params, demands)?;
    if !ev.verification.pass {
        return Err(DofError::VerificationFailed {
            eta_hat: params.eta_hat,
            q: params.q,
            strategy: params.strategy,
            summary: ev.verification.summary(),
        });
    }
    if ev.report.empirical != ev.report.closed_form {
        return Err(DofError::Mismatch {
            eta_hat: params.eta_hat,
            q: params.q,
            strategy: params.strategy,
            empirical: ev.report.empirical,
            closed: ev.report.closed_form,
        });
    }
    Ok(ev)
}

/// Population standard deviation of the profile lengths.
pub fn sigma(eta: &[usize]) -> f64 {
    if eta.is_empty() {
        return 0.0;
    }
    let n = eta.len() as f64;
    let mean = eta.iter().sum::<usize>() as f64 / n;
    (eta.iter().map(|&e| (e as f64 - mean).powi(2)).sum::<f64>() / n).sqrt()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub eta_hat: usize,
    pub q: usize,
    pub strategy: Strategy,
    pub beta: usize,
    pub k_m: usize,
    pub k_u: usize,
    pub t_m: Option<u128>,
    pub t_u: Option<u128>,
    pub dof: Option<Rational>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Index of the best row: highest DoF, then smaller Q, then smaller eta_hat.
    pub best: Option<usize>,
}

impl Sweep {
    pub fn best_row(&self) -> Option<&SweepRow> {
        self.best.map(|i| &self.rows[i])
    }

    pub fn dof_max(&self) -> Option<Rational> {
        self.best_row().and_then(|r| r.dof)
    }
}

/// How sweep rows obtain their DoF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SweepMode {
    /// Build, verify and count every schedule, and check it against the closed form.
    #[default]
    Pipeline,
    ClosedForm,
}

/// The delivery options considered for each `eta_hat`, whether or not they
/// fit the profile count.
pub fn sweep_candidates(cfg: &NetworkConfig) -> Vec<DeliveryParams> {
    let (tbar, alpha) = (cfg.tbar(), cfg.alpha());
    let mut out = Vec::new();
    for eta_hat in 1..=cfg.max_eta() {
        if alpha <= eta_hat {
            out.push(DeliveryParams { eta_hat, q: tbar + 1, beta: alpha, strategy: Strategy::A });
            continue;
        }
        for q in tbar + 1..=tbar + alpha / eta_hat {
            out.push(DeliveryParams { eta_hat, q, beta: eta_hat, strategy: Strategy::A });
        }
        if alpha % eta_hat != 0 {
            out.push(DeliveryParams { eta_hat, q: tbar + alpha.div_ceil(eta_hat), beta: eta_hat, strategy: Strategy::B });
        }
    }
    out
}

fn sweep_row(cfg: &NetworkConfig, params: DeliveryParams, demands: &Demands, mode: SweepMode) -> Result<SweepRow, DofError> {
    let deltas = truncated_lengths(cfg, params.eta_hat);
    let k_m: usize = deltas.iter().sum();
    let mut row = SweepRow {
        eta_hat: params.eta_hat,
        q: params.q,
        strategy: params.strategy,
        beta: params.beta,
        k_m,
        k_u: cfg.user_count() - k_m,
        t_m: None,
        t_u: None,
        dof: None,
        feasible: false,
    };
    let Ok(validated) = validate(cfg, params) else {
        return Ok(row);
    };
    row.feasible = true;
    match mode {
        SweepMode::Pipeline => {
            let ev = evaluate_checked(cfg, params, demands)?;
            row.t_m = Some(ev.report.t_m as u128);
            row.t_u = Some(ev.report.t_u as u128);
            row.dof = Some(ev.report.empirical);
        }
        SweepMode::ClosedForm => {
            let pc = predicted_counts(cfg, &validated);
            row.t_m = Some(pc.t_m);
            row.t_u = Some(pc.t_u);
            row.dof = Some(pc.dof());
        }
    }
    Ok(row)
}

fn pick_best(rows: &[SweepRow]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        let Some(dof) = row.dof else { continue };
        let better = match best {
            None => true,
            Some(b) => {
                let cur = &rows[b];
                let cur_dof = cur.dof.expect("best rows carry a DoF");
                dof > cur_dof || (dof == cur_dof && (row.q, row.eta_hat) < (cur.q, cur.eta_hat))
            }
        };
        if better {
            best = Some(i);
        }
    }
    best
}

/// Line search over `eta_hat` and `Q`. Rows are evaluated in parallel and
/// returned in candidate order.
pub fn dof_sweep(cfg: &NetworkConfig, demands: &Demands, mode: SweepMode) -> Result<Sweep, DofError> {
    let rows = sweep_candidates(cfg)
        .into_par_iter()
        .map(|p| sweep_row(cfg, p, demands, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let best = pick_best(&rows);
    Ok(Sweep { rows, best })
}

/// Optimal DoF of a uniform association with `eta_hat` users per profile.
pub fn uniform_optimum(cfg: &NetworkConfig, eta_hat: usize) -> Result<Rational, DofError> {
    if cfg.eta().iter().any(|&e| e != eta_hat) {
        return Err(DofError::NonUniform { eta_hat });
    }
    let alpha = Rational::from_integer(cfg.alpha() as i128);
    let gamma = cfg.gamma();
    Ok(if cfg.alpha() <= eta_hat {
        alpha * (Rational::from_integer(cfg.profiles() as i128) * gamma + 1)
    } else {
        Rational::from_integer(cfg.user_count() as i128) * gamma + alpha
    })
}

/// DoF given up relative to a uniform association.
pub fn dof_loss_uniform(alpha: usize, eta_hat: usize, eta_avg: usize) -> Result<Rational, DofError> {
    if eta_hat == 0 || eta_avg == 0 || !alpha.is_multiple_of(eta_hat) || !alpha.is_multiple_of(eta_avg) {
        return Err(DofError::Divisibility { alpha, eta_hat, eta_avg });
    }
    let a = Rational::from_integer(alpha as i128);
    Ok(a * (Rational::from_integer(1) - Rational::new(eta_avg as i128, eta_hat as i128)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    CodedCaching,
    Unicast,
}

/// Coded caching pays off when `eta_avg * (tbar + 1)` reaches `alpha`.
pub fn choose_mode(eta_avg: Rational, tbar: usize, alpha: usize) -> Mode {
    if eta_avg * Rational::from_integer(tbar as i128 + 1) >= Rational::from_integer(alpha as i128) {
        Mode::CodedCaching
    } else {
        Mode::Unicast
    }
}

/// Inputs of the random-association experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaSetup {
    pub users: usize,
    pub profiles: usize,
    pub tbar: usize,
    pub alpha: usize,
    pub files: usize,
    pub samples: usize,
    pub seed: u64,
    /// Enumerate every profile-length vector once instead of sampling users.
    pub exhaustive: bool,
    pub mode: SweepMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaBin {
    /// Bin centre; sigma rounded to the nearest 0.5.
    pub sigma_bin: f64,
    pub n_samples: u64,
    /// Mean of DoF_max over the bin.
    pub dof_m: f64,
    pub unicast_baseline: usize,
    pub uniform_optimum: Option<Rational>,
}

/// Profile lengths from assigning every user to a uniformly random profile.
pub fn sample_association(users: usize, profiles: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut eta = vec![0; profiles];
    for _ in 0..users {
        eta[rng.gen_range(0..profiles)] += 1;
    }
    eta
}

/// Non-increasing length vectors summing to `users`, each with its number of
/// distinct orderings.
pub fn length_vectors(users: usize, profiles: usize) -> Vec<(Vec<usize>, u64)> {
    fn rec(left: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = left.div_ceil(slots);
        for v in (lo..=cap.min(left)).rev() {
            cur.push(v);
            rec(left - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut shapes = Vec::new();
    rec(users, users, profiles, &mut Vec::new(), &mut shapes);
    shapes
        .into_iter()
        .map(|v| {
            let mut orderings: u64 = (1..=profiles as u64).product();
            let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
            for &x in &v {
                *counts.entry(x).or_default() += 1;
            }
            for &c in counts.values() {
                orderings /= (1..=c).product::<u64>();
            }
            (v, orderings)
        })
        .collect()
}

fn best_dof(setup: &SigmaSetup, sorted_eta: &[usize]) -> Result<Rational, DofError> {
    let cfg = NetworkConfig::from_counts(setup.tbar, setup.alpha, setup.alpha, setup.files, sorted_eta)?;
    let sweep = dof_sweep(&cfg, &default_demands(&cfg), setup.mode)?;
    Ok(sweep.dof_max().unwrap_or_else(Rational::zero))
}

/// Mean best DoF per sigma bin, in ascending bin order.
pub fn sigma_experiment(setup: &SigmaSetup) -> Result<Vec<SigmaBin>, DofError> {
    let weighted: Vec<(Vec<usize>, u64)> = if setup.exhaustive {
        length_vectors(setup.users, setup.profiles)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(setup.seed);
        let mut tally: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for _ in 0..setup.samples {
            let mut eta = sample_association(setup.users, setup.profiles, &mut rng);
            eta.sort_unstable_by(|a, b| b.cmp(a));
            *tally.entry(eta).or_default() += 1;
        }
        tally.into_iter().collect()
    };

    let dofs = weighted
        .par_iter()
        .map(|(eta, _)| best_dof(setup, eta))
        .collect::<Result<Vec<_>, _>>()?;

    let mut bins: BTreeMap<u64, (u64, f64)> = BTreeMap::new();
    for ((eta, weight), dof) in weighted.iter().zip(&dofs) {
        let key = (sigma(eta) * 2.0).round() as u64;
        let slot = bins.entry(key).or_default();
        slot.0 += weight;
        slot.1 += *weight as f64 * dof.to_f64().expect("finite DoF");
    }

    let uniform = if setup.users.is_multiple_of(setup.profiles) {
        let eta_hat = setup.users / setup.profiles;
        let cfg = NetworkConfig::from_counts(setup.tbar, setup.alpha, setup.alpha, setup.files, &vec![eta_hat; setup.profiles])?;
        Some(uniform_optimum(&cfg, eta_hat)?)
    } else {
        None
    };
    Ok(bins
        .into_iter()
        .map(|(key, (n, total))| SigmaBin {
            sigma_bin: key as f64 / 2.0,
            n_samples: n,
            dof_m: total / n as f64,
            unicast_baseline: setup.alpha,
            uniform_optimum: uniform,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn cfg(eta: &[usize], tbar: usize, alpha: usize) -> NetworkConfig {
        NetworkConfig::from_counts(tbar, alpha, alpha, 40, eta).unwrap()
    }

    #[test]
    fn worked_example_dof() {
        let c = cfg(&[5, 4, 3], 1, 6);
        let params = DeliveryParams { eta_hat: 4, q: 3, beta: 3, strategy: Strategy::A };
        let ev = evaluate_checked(&c, params, &default_demands(&c)).unwrap();
        let rep = &ev.report;
        assert_eq!((rep.j_m, rep.t_m, rep.j_u, rep.t_u), (33, 4, 6, 6));
        assert_eq!(rep.empirical, r(39, 10));
        assert_eq!(rep.closed_form, r(39, 10));
    }

    #[test]
    fn empty_schedule_is_undefined() {
        assert_eq!(empirical_dof(&Schedule::default()), Err(DofError::EmptySchedule));
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(&[5; 6]), 0.0);
        assert!((sigma(&[10, 10, 10, 0, 0, 0]) - 5.0).abs() < 1e-12);
        assert!((sigma(&[6, 6, 5, 5, 4, 4]).powi(2) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_optimum_branches() {
        assert_eq!(uniform_optimum(&cfg(&[4; 6], 1, 4), 4).unwrap(), r(8, 1));
        assert_eq!(uniform_optimum(&cfg(&[5; 6], 1, 7), 5).unwrap(), r(12, 1));
        assert!(uniform_optimum(&cfg(&[5, 4], 1, 7), 5).is_err());
    }

    #[test]
    fn loss_and_mode() {
        assert_eq!(dof_loss_uniform(4, 2, 2).unwrap(), r(0, 1));
        assert_eq!(dof_loss_uniform(8, 4, 2).unwrap(), r(4, 1));
        assert_eq!(dof_loss_uniform(6, 6, 3).unwrap(), r(3, 1));
        assert!(dof_loss_uniform(7, 4, 2).is_err());
        assert_eq!(choose_mode(r(5, 1), 1, 7), Mode::CodedCaching);
        assert_eq!(choose_mode(r(2, 1), 1, 7), Mode::Unicast);
        assert_eq!(choose_mode(r(7, 2), 1, 7), Mode::CodedCaching);
    }

    #[test]
    fn candidates_per_regime() {
        let c = cfg(&[5; 6], 1, 7);
        let cands = sweep_candidates(&c);
        let at = |e: usize| cands.iter().filter(|p| p.eta_hat == e).map(|p| (p.q, p.strategy)).collect::<Vec<_>>();
        assert_eq!(at(5), vec![(2, Strategy::A), (3, Strategy::B)]);
        assert_eq!(at(2), vec![(2, Strategy::A), (3, Strategy::A), (4, Strategy::A), (5, Strategy::B)]);
        assert_eq!(at(1), (2..=8).map(|q| (q, Strategy::A)).collect::<Vec<_>>());
        let c = cfg(&[7; 3], 1, 4);
        assert!(sweep_candidates(&c).iter().filter(|p| p.eta_hat >= 4).all(|p| p.q == 2 && p.beta == 4));
    }

    #[test]
    fn uniform_thirty_users_peak() {
        let c = cfg(&[5; 6], 1, 7);
        let sweep = dof_sweep(&c, &default_demands(&c), SweepMode::Pipeline).unwrap();
        let best = sweep.best_row().unwrap();
        assert_eq!((best.eta_hat, best.q, best.strategy, best.dof), (5, 3, Strategy::B, Some(r(12, 1))));
        let a_row = sweep.rows.iter().find(|x| x.eta_hat == 5 && x.q == 2).unwrap();
        assert_eq!(a_row.dof, Some(r(10, 1)));
        assert!(sweep.rows.iter().filter(|x| x.q > 6).all(|x| !x.feasible && x.dof.is_none()));
        let closed = dof_sweep(&c, &default_demands(&c), SweepMode::ClosedForm).unwrap();
        assert_eq!(closed, sweep);
    }

    #[test]
    fn length_vectors_cover_all_compositions() {
        for (k, p) in [(5usize, 3usize), (6, 4), (8, 2), (0, 3)] {
            let total: u64 = length_vectors(k, p).iter().map(|(_, w)| w).sum();
            assert_eq!(total as u128, binomial((k + p - 1) as i64, (p - 1) as i64));
            for (v, _) in length_vectors(k, p) {
                assert_eq!(v.iter().sum::<usize>(), k);
                assert!(v.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn sampled_experiment_is_deterministic() {
        let setup = SigmaSetup {
            users: 12,
            profiles: 3,
            tbar: 1,
            alpha: 3,
            files: 12,
            samples: 40,
            seed: 9,
            exhaustive: false,
            mode: SweepMode::ClosedForm,
        };
        let a = sigma_experiment(&setup).unwrap();
        let b = sigma_experiment(&setup).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|b| b.n_samples).sum::<u64>(), 40);
        assert!(a.windows(2).all(|w| w[0].sigma_bin < w[1].sigma_bin));
    }
}
