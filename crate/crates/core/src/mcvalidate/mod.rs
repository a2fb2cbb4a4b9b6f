//! Monte Carlo oracle: explicit hard-sphere configurations in a slab and
//! estimators of the statistics the averaged theory is built on.

mod born;
mod estimators;
mod geometry;

pub use born::{
    analytic_first_order, analytic_first_order_with, born_first_order_average, born_first_order_study, born_sample,
    AnalyticFirstOrder, BallRule, BornEstimates, BornSample, FAR_ZONE_MIN,
};
pub use estimators::{
    estimate_filling, estimate_pair_overlap, estimate_surface_moment_i2, DyadicEstimate, EstimateWithError,
};
pub use geometry::{
    config_seed, read_snapshot, sample_configuration, write_snapshot, ConfigSource, Ensemble, Sampling, SlabGeometry,
    SphereConfiguration, MAX_ATTEMPTS_PER_SPHERE, MAX_PACKING,
};
