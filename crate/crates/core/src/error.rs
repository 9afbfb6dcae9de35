use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("probability {value} outside (0, 1/2]")]
    InvalidProbability { value: String },
    #[error("invalid profile: {0}")]
    InvalidProfile(&'static str),
    #[error("operation requires a periodic profile")]
    NotPeriodic,
    #[error("every p_j equals 1/2; at least one level must have p_j < 1/2")]
    NoSubHalfLevel,
    #[error("K_max = {0} is below the minimum of 100")]
    WindowTooSmall(u64),
    #[error("gamma = {0} must exceed 1")]
    GammaTooSmall(f64),
    #[error("argument out of domain: {0}")]
    Domain(&'static str),
    #[error("observer needs about {needed} bytes, budget is {budget}")]
    MemoryBudget { needed: u64, budget: u64 },
    #[error("site ({k}, {j}) is outside the recorded window of radius {radius}")]
    OutsideWindow { k: i64, j: i64, radius: u32 },
    #[error("walk length {0} too large for packed site keys")]
    WalkTooLong(u64),
    #[error("N = {n} exceeds the exact-evaluation limit {limit}")]
    OracleTooLarge { n: u32, limit: u32 },
    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("negative observed count")]
    NegativeCount,
    #[error("observed an outcome with zero expected probability")]
    ImpossibleOutcome,
    #[error("all chi-square bins merged into one")]
    SingleBin,
    #[error("statistic must be positive for a log-log fit")]
    NonPositiveStatistic,
    #[error("fit grid must be strictly increasing in N")]
    UnorderedGrid,
    #[error("unknown case `{0}`")]
    UnknownCase(String),
}
