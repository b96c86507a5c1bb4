use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Invalid input to one of the password or attack operations.
///
/// A well-formed attempt that simply does not match is never an error; it is
/// reported as `false` by [`crate::verify_login`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected {expected} click-points, got {actual}")]
    PointCount { expected: usize, actual: usize },

    #[error("click-point ({x}, {y}) lies outside the {width}x{height} image")]
    OutOfBounds {
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },

    #[error("click-point ({x}, {y}) is not a center of the attack alphabet")]
    NotAlphabetCenter { x: u32, y: u32 },

    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyImage { width: u32, height: u32 },

    #[error("invalid attack specification: {0}")]
    InvalidSpec(String),
}
