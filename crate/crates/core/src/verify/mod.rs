//! Statement-level checkers. Inequalities with explicit constants are decided
//! (exactly, or by separating brackets); bounds with an unknown implied
//! constant are reported as ratios against their core.

mod anatomy;
mod bilinear;
pub mod brackets;
mod classify;
mod concentration;
mod main_theorem;
mod overlap;
mod prop54;
mod regularity;

pub use anatomy::{
    anatomy_count, anatomy_divisor_sum, anatomy_improved, anatomy_lower_witness, threshold_shift_containment,
    count_with_mass_at_least, AnatomyCount, AnatomyTarget, Containment, ImprovedOutcome,
    LowerWitness, WitnessMode, DEFAULT_HYPOTHESIS_THRESHOLD,
};
pub use bilinear::{bilinear_bound_violations, BilinearOutcome};
pub use classify::{
    classify_quantities, prop6_bounds, ELabel, FLabel, PairClassifier, PairLabel, Prop6Variant,
    QuantityInput,
};
pub use concentration::{
    concentration_check, random_instance, ConcentrationInstance, ConcentrationOutcome,
};
pub use main_theorem::{
    calibration_instances, main_theorem_ratio, run_main_sweep, MainOutcome, SweepInstance,
};
pub use overlap::{overlap_rhs, second_moment, OverlapMode, OverlapRhs, SecondMoment};
pub use prop54::{
    normalization, prop54_check, prop54_check_with, prop54_sweep, Prop54Sweep,
    PROP54_ANATOMY_LEVEL,
};
pub use regularity::{
    gcd_consequence_check, regularity_check, GcdOutcome, RegularityOutcome,
};

use crate::arith::ArithError;
use crate::intervals::IntervalError;
use crate::measures::MeasureError;

/// A predicate whose truth value is settled only when the bracket around the
/// transcendental side separates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Holds,
    Fails,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("pair ({v}, {w}) is not in the edge set")]
    NotInEdgeSet { v: u64, w: u64 },
    #[error("weight `{name}` is not admissible: (1*f)({n}) > {n}")]
    NotAdmissible { name: String, n: u64 },
    #[error("normalization sum {0} lies outside [1, 2]")]
    Normalization(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("hypothesis violated at cell ({i}, {j}): m = {m} > {bound}")]
    HypothesisViolated { i: i64, j: i64, m: f64, bound: f64 },
    #[error("edge set is empty")]
    EmptyEdgeSet,
    #[error("D({v}, {w}) exceeds 1")]
    DOverOne { v: u64, w: u64 },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("no primes in [{lo}, {hi}]")]
    EmptyPrimeRange { lo: f64, hi: f64 },
    #[error("witness {0} fails the anatomy check")]
    WitnessFailed(String),
    #[error("overlap bounds need n != m")]
    EqualIndices,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}
