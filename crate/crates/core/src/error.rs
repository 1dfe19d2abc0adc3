use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` is out of range or not finite (got {value})")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("ordering violated: {0}")]
    OrderingViolation(String),
    #[error("unsupported regime: v1 = {v1} is not below c2 = {c2}")]
    UnsupportedRegime { v1: f64, c2: f64 },
    #[error("degenerate speeds: c1 == c2")]
    DegenerateSpeeds,
    #[error("coupling mu = {mu} is not below omega1*omega2 = {limit}")]
    OverstrongCoupling { mu: f64, limit: f64 },
    #[error("root tracking is ill-posed near a branch point at omega = {omega}")]
    BranchPointProximity { omega: num_complex::Complex64 },
    #[error("branch tracking failed: {0}")]
    BranchTrackingFailure(String),
    #[error("no group-velocity extremum found on [{lo}, {hi}]")]
    ExtremumNotFound { lo: f64, hi: f64 },
    #[error("no convergence in {what}: achieved error {achieved:e}")]
    NoConvergence { what: &'static str, achieved: f64 },
    #[error("curvature |alpha| = {alpha:e} too small for a quadratic saddle model")]
    DegenerateCurvature { alpha: f64 },
    #[error("extremum type does not match the requested Airy form (alpha = {alpha})")]
    WrongSignCurvature { alpha: f64 },
    #[error("point (t = {t}, x = {x}) lies outside the exchange wedge x/v1 < t < x/v2")]
    OutsideWedge { t: f64, x: f64 },
    #[error("z = {z} is not in the far zone z > S = {s}")]
    OutsideFarZone { z: f64, s: f64 },
    #[error("unknown zone label `{0}`")]
    UnknownLabel(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
