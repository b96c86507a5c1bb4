//! PassPoints-style graphical passwords and the click-order attacks against them.
//!
//! A password is an ordered sequence of five pixel click-points on a
//! background image. A login attempt succeeds when every attempted point lies
//! inside the square tolerance region of the corresponding stored point.
//!
//! The [`attack`] module evaluates the LINE, DIAG and LOD click-order
//! dictionaries over an [`Alphabet`] of tile centers, both by counting and
//! enumerating the dictionaries and by testing individual passwords.

pub mod alphabet;
pub mod attack;
pub mod corpus;
mod error;
pub mod point;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use point::{
    verify_login, verify_points, within_tolerance, ClickPoint, GraphicalPassword, ImageSize, LoginAttempt,
    ToleranceConfig, PASSWORD_LEN,
};
