//! Interferometry, uncertainty, Stern-Gerlach and Bell experiments.

pub mod bell;
pub mod interference;
pub mod nominal;
pub mod uncertainty;

pub use bell::{
    bell_run, bellsum_definability, measurement_independence_scan, BellConfig, BellReport,
    BellsumReport, PairStats,
};
pub use interference::{
    delayed_choice, finite_difference_check, identity_split_check, mz_simulate, MzReport,
};
pub use nominal::{sg_counterfactual, snap_to_lattice, NominalSetting, SgVerdict};
pub use uncertainty::{
    aggregate_from_directions, position_momentum_aggregate, uncertainty_check,
    uncertainty_obstruction, AggregateRecord, DirectionCosines, UncertaintyRecord,
};
