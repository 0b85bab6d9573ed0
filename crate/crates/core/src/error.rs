use thiserror::Error;

/// Errors raised while validating model inputs or evaluating closed forms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be strictly positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must lie in [0, 1] (got {value})")]
    NotAProbability { name: &'static str, value: f64 },

    #[error("w must exceed {cost} (w = {w}, {cost} = {value})")]
    AssetNotWorthIt { cost: &'static str, w: f64, value: f64 },

    #[error("b must exceed c_v (b = {b}, c_v = {c_v})")]
    BenefitBelowVoteCost { b: f64, c_v: f64 },

    #[error("alpha must exceed 0.5 (got {0})")]
    DetectionRateTooLow(f64),

    #[error("beta must be below 0.5 (got {0})")]
    FalseAlarmRateTooHigh(f64),

    #[error("invalid stage: {0}")]
    InvalidStage(String),

    #[error("target already identified (n_r = 0); vote impact is undefined")]
    TargetAlreadyIdentified,

    #[error("{0} has a zero denominator")]
    ZeroDenominator(&'static str),

    #[error("benefit bound requires mu < 0.5 (got {0})")]
    BoundUndefined(f64),

    #[error("stage list is empty")]
    NoStages,

    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
