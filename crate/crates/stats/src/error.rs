use thiserror::Error;

pub type Result<T, E = StatsError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample {0} is empty")]
    EmptySample(&'static str),
    #[error("need at least {needed} observations in sample {sample}, got {got}")]
    TooFewObservations {
        sample: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("pooled variance is zero; the t statistic is undefined")]
    ZeroVariance,
    #[error("non-finite observation in sample {0}")]
    NonFinite(&'static str),
    #[error("correction count {m} is smaller than the {len} p-values supplied")]
    CorrectionTooSmall { m: usize, len: usize },
    #[error("SUS answer {index} is {value}; answers must be 1 to 5")]
    SusAnswer { index: usize, value: u8 },
    #[error("SUS needs exactly 10 answers, got {0}")]
    SusLength(usize),
    #[error("point x = {x} outside image of width {width}")]
    PointOutside { x: u32, width: u32 },
    #[error("heat map sigma must be positive and finite, got {0}")]
    Sigma(f64),
    #[error(transparent)]
    Core(#[from] passpoints_core::Error),
}
