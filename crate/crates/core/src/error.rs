use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix index {0} out of range 1..=3")]
    IndexOutOfRange(usize),
    #[error("kernel evaluated at its singular point x = 0")]
    SingularPoint,
    #[error("mass must be positive and finite (got m = {0})")]
    InvalidMass(f64),
    #[error("require |a| <= m (got m = {m}, a = {a})")]
    OutsideGap { m: f64, a: f64 },
    #[error("require |a| < m (got m = {m}, a = {a})")]
    NotInterior { m: f64, a: f64 },
    #[error("kappa must be nonnegative (got {0})")]
    NegativeKappa(f64),
    #[error("invalid harmonic index n = {n}, l = {l}")]
    InvalidHarmonic { n: i64, l: i64 },
    #[error("invalid spinor mode 2j = {j2}, 2m_j = {mj2}")]
    InvalidMode { j2: u32, mj2: i32 },
    #[error("point is not on the unit sphere (|x| = {0})")]
    OffSphere(f64),
    #[error("coupling lambda must be {expected} (got {got})")]
    InvalidLambda { expected: &'static str, got: f64 },
    #[error("delta must be positive (got {0})")]
    InvalidDelta(f64),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("eigenvalue condition not satisfied (residual {0:e})")]
    ConditionNotSatisfied(f64),
    #[error("evaluation point lies on the surface")]
    OnSurface,
    #[error("layer reconstruction of the eigenfunction needs a != 0")]
    ZeroSpectralPoint,
    #[error("degenerate surface: {0}")]
    DegenerateSurface(String),
    #[error("resolution n_theta = {0} is below the minimum of 8")]
    Resolution(usize),
    #[error("operation requires the unit sphere")]
    NotSphere,
    #[error("require |lambda_e| != |lambda_s| (got {lambda_e}, {lambda_s})")]
    CriticalCoupling { lambda_e: f64, lambda_s: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("nothing to scan: need 2j_max >= 3 (got {0})")]
    EmptyScan(u32),
    #[error("operator kind mismatch: expected {expected}")]
    WrongKind { expected: &'static str },
}
