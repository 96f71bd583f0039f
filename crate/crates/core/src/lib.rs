//! Rate regions, outer bounds and allocation search for the half-duplex
//! multiple-access channel with generalized feedback.
//!
//! Two users share one block split into three slots: user 1 transmits while
//! user 2 listens, then the roles swap, then both transmit to the
//! destination together. Rates are in bits per channel use.

pub mod channel;
pub mod dmc;
pub mod error;
pub mod gaussian;
pub mod hull;
pub mod muser;
pub mod optimizer;
pub mod pmf;
mod polish;
pub mod sampling;
pub mod verify;

pub use channel::{
    c_gauss, polygon_from_constraints, power_feasible, Allocation, ChannelGains, DfAllocation,
    LinearRegion, PdfAllocation, PowerBudget, PowerUsage, RatePoint, RatePolygon, TimeSlots,
    POWER_TOL,
};
pub use dmc::{
    dmc_pdf_separate_region, dmc_outer_region, dmc_pdf_joint_region, dmc_df_region, DfInputDistribution,
    OuterInputDistribution, OuterVariant, PdfInputDistribution, SlotChannels,
};
pub use error::{Error, Result};
pub use gaussian::{
    baseline_region, degraded_outer_region, df_region, gaussian_outer_region, pdf_joint_region,
    pdf_partial_user_region, pdf_separate_region, pdf_separate_region_with, BaselineKind,
    NoiseCorrelation, SeparateReading,
};
pub use hull::{region_contains, upper_hull, weighted_best_vertex, Containment};
pub use muser::{
    muser_achievable_constraints, muser_condition_check, muser_outer_constraints,
    ConditionReport, ConstraintKind, MUserAllocation, MUserConstraint, MUserGains,
};
pub use optimizer::{frontier, optimize_scheme, Frontier, OptResult, Scheme, SearchConfig};
pub use pmf::{mutual_information, JointPmf, Table};
pub use verify::{Check, Verdict};
