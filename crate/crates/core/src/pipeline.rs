//! End-to-end construction: validate, split users, run the coded-caching
//! strategy, then unicast the rest.

use thiserror::Error;

use crate::config::{validate, DeliveryParams, NetworkConfig, ParamError, Strategy, ValidatedParams};
use crate::placement::{select_served, PlacementError, ServedPartition};
use crate::schedule::{Demands, Schedule, ScheduleError, SubpacketCounters};
use crate::{strategy_a, strategy_b, unicast};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// A built delivery together with the inputs it was built from.
#[derive(Debug, Clone)]
pub struct Delivery {
    pub params: ValidatedParams,
    pub partition: ServedPartition,
    pub schedule: Schedule,
}

pub fn build_schedule(
    cfg: &NetworkConfig,
    params: DeliveryParams,
    demands: &Demands,
) -> Result<Delivery, PipelineError> {
    let params = validate(cfg, params)?;
    let partition = select_served(cfg, params.eta_hat())?;
    let mut counters = SubpacketCounters::new();
    let cc = match params.strategy() {
        Strategy::A => strategy_a::schedule_a(cfg, &params, &partition, demands, &mut counters)?,
        Strategy::B => strategy_b::schedule_b(cfg, &params, &partition, demands, &mut counters)?,
    };
    let missing = unicast::missing_subpackets(cfg, &params, &partition, demands, &counters)?;
    let uc = unicast::schedule_uc(&missing, cfg.alpha());
    Ok(Delivery { params, partition, schedule: Schedule { cc, uc } })
}
