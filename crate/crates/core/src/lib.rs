//! Delivery schedule synthesis for shared-cache coded caching over a
//! multi-antenna downlink.
//!
//! Users are attached to one of `P` caching profiles. Placement splits each
//! file into mini-files indexed by `tbar`-subsets of profiles; delivery serves
//! up to `eta_hat` users per profile with coded multicast (strategy A or B)
//! and the overflow with greedy unicast rounds. [`verify`] checks any schedule
//! independently and [`analysis`] computes exact degrees of freedom.

pub mod analysis;
pub mod config;
pub mod math;
pub mod pipeline;
pub mod placement;
pub mod schedule;
pub mod strategy_a;
pub mod strategy_b;
pub mod unicast;
pub mod verify;

pub use analysis::{closed_form_dof, dof_sweep, empirical_dof, evaluate, DofError, DofReport, Sweep, SweepMode, SweepRow};
pub use config::{validate, DeliveryParams, NetworkConfig, ProfileSet, Strategy, UserId, ValidatedParams};
pub use math::Rational;
pub use pipeline::{build_schedule, Delivery, PipelineError};
pub use schedule::{default_demands, Demands, Schedule, Transmission};
pub use verify::{verify_schedule, VerificationReport};
