//! Click-points, passwords and the tolerance acceptance rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of click-points in every password and login attempt.
pub const PASSWORD_LEN: usize = 5;

/// A pixel position on a background image: `x` is the column, `y` the row.
///
/// Serializes as a two-element JSON array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct ClickPoint {
    pub x: u32,
    pub y: u32,
}

impl ClickPoint {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    /// Largest per-axis distance to `other`.
    pub fn chebyshev(self, other: ClickPoint) -> u32 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }

    /// Squared Euclidean distance to `other`.
    pub fn euclidean_sq(self, other: ClickPoint) -> u64 {
        let dx = u64::from(self.x.abs_diff(other.x));
        let dy = u64::from(self.y.abs_diff(other.y));
        dx * dx + dy * dy
    }
}

impl From<[u32; 2]> for ClickPoint {
    fn from([x, y]: [u32; 2]) -> Self {
        Self { x, y }
    }
}

impl From<ClickPoint> for [u32; 2] {
    fn from(p: ClickPoint) -> Self {
        [p.x, p.y]
    }
}

impl std::fmt::Display for ClickPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Pixel dimensions of a background image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImageSize {
    pub width: u32,
    pub height: u32,
}

impl ImageSize {
    /// The 640x480 background size used throughout the study.
    pub const STUDY: ImageSize = ImageSize {
        width: 640,
        height: 480,
    };

    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn contains(&self, p: ClickPoint) -> bool {
        p.x < self.width && p.y < self.height
    }

    pub fn check(&self, p: ClickPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x: p.x,
                y: p.y,
                width: self.width,
                height: self.height,
            })
        }
    }
}

/// Error tolerance in pixels. A stored point accepts any click inside the
/// `(2T+1) x (2T+1)` square centered on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub tolerance: u32,
}

impl ToleranceConfig {
    pub const fn new(tolerance: u32) -> Self {
        Self { tolerance }
    }

    /// Side length of the square tolerance region.
    pub const fn region_side(&self) -> u32 {
        2 * self.tolerance + 1
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { tolerance: 10 }
    }
}

/// A user's secret: five ordered click-points on one background image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphicalPassword {
    pub image_id: String,
    pub points: [ClickPoint; PASSWORD_LEN],
}

impl GraphicalPassword {
    /// Builds a password, rejecting anything but exactly five points.
    pub fn new(image_id: impl Into<String>, points: &[ClickPoint]) -> Result<Self> {
        Ok(Self {
            image_id: image_id.into(),
            points: five_points(points)?,
        })
    }

    pub fn check_bounds(&self, size: ImageSize) -> Result<()> {
        self.points.iter().try_for_each(|&p| size.check(p))
    }
}

/// Points submitted in one login attempt, as received from a client.
///
/// The length is not enforced at construction so that malformed submissions
/// can be reported as input errors by [`verify_login`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoginAttempt {
    pub points: Vec<ClickPoint>,
    /// Milliseconds since the Unix epoch.
    pub timestamp: i64,
    pub session_id: String,
}

pub(crate) fn five_points(points: &[ClickPoint]) -> Result<[ClickPoint; PASSWORD_LEN]> {
    points.try_into().map_err(|_| Error::PointCount {
        expected: PASSWORD_LEN,
        actual: points.len(),
    })
}

/// True when `attempt` lies within `tolerance` pixels of `stored` on both axes.
#[inline]
pub fn within_tolerance(stored: ClickPoint, attempt: ClickPoint, tolerance: u32) -> bool {
    stored.x.abs_diff(attempt.x) <= tolerance && stored.y.abs_diff(attempt.y) <= tolerance
}

/// Compares two raw point sequences under the acceptance rule.
///
/// Both sequences must hold exactly five in-bounds points. The comparison is
/// positional, so the same points in a different order do not match.
pub fn verify_points(
    stored: &[ClickPoint],
    attempt: &[ClickPoint],
    cfg: ToleranceConfig,
    size: ImageSize,
) -> Result<bool> {
    let stored = five_points(stored)?;
    let attempt = five_points(attempt)?;
    for p in stored.iter().chain(attempt.iter()) {
        size.check(*p)?;
    }
    Ok(stored
        .iter()
        .zip(attempt.iter())
        .all(|(&s, &a)| within_tolerance(s, a, cfg.tolerance)))
}

/// Decides whether `attempt` logs in as the owner of `stored`.
pub fn verify_login(
    stored: &GraphicalPassword,
    attempt: &LoginAttempt,
    cfg: ToleranceConfig,
    size: ImageSize,
) -> Result<bool> {
    verify_points(&stored.points, &attempt.points, cfg, size)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: [(u32, u32); 5]) -> Vec<ClickPoint> {
        raw.iter().map(|&(x, y)| ClickPoint::new(x, y)).collect()
    }

    const BASE: [(u32, u32); 5] = [(100, 100), (200, 150), (300, 200), (400, 250), (500, 300)];

    fn check(stored: &[ClickPoint], attempt: &[ClickPoint]) -> Result<bool> {
        verify_points(stored, attempt, ToleranceConfig::default(), ImageSize::STUDY)
    }

    #[test]
    fn identical_attempt_verifies() {
        let p = pts(BASE);
        assert_eq!(check(&p, &p), Ok(true));
    }

    #[test]
    fn one_point_off_by_eleven_fails() {
        let stored = pts(BASE);
        let mut attempt = stored.clone();
        attempt[2].x += 11;
        assert_eq!(check(&stored, &attempt), Ok(false));
    }

    #[test]
    fn boundary_offset_accepted() {
        let stored = pts(BASE);
        let attempt: Vec<_> = stored
            .iter()
            .map(|p| ClickPoint::new(p.x + 10, p.y - 10))
            .collect();
        assert_eq!(check(&stored, &attempt), Ok(true));
    }

    #[test]
    fn order_matters() {
        let stored = pts(BASE);
        let mut attempt = stored.clone();
        attempt.swap(0, 1);
        assert_eq!(check(&stored, &attempt), Ok(false));
    }

    #[test]
    fn wrong_length_is_an_error_not_a_failure() {
        let stored = pts(BASE);
        assert_eq!(
            check(&stored, &stored[..4]),
            Err(Error::PointCount {
                expected: 5,
                actual: 4
            })
        );
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        let stored = pts(BASE);
        let mut attempt = stored.clone();
        attempt[4] = ClickPoint::new(640, 10);
        assert!(matches!(
            check(&stored, &attempt),
            Err(Error::OutOfBounds { x: 640, .. })
        ));
    }

    #[test]
    fn zero_tolerance_needs_exact_match() {
        let stored = pts(BASE);
        let mut attempt = stored.clone();
        attempt[0].y += 1;
        let strict = ToleranceConfig::new(0);
        assert_eq!(verify_points(&stored, &stored, strict, ImageSize::STUDY), Ok(true));
        assert_eq!(verify_points(&stored, &attempt, strict, ImageSize::STUDY), Ok(false));
    }

    #[test]
    fn password_json_is_array_of_pairs() {
        let pw = GraphicalPassword::new("grid", &pts(BASE)).unwrap();
        let json = serde_json::to_value(pw.points).unwrap();
        assert_eq!(json, serde_json::json!([[100, 100], [200, 150], [300, 200], [400, 250], [500, 300]]));
        assert!(GraphicalPassword::new("grid", &pts(BASE)[..3]).is_err());
    }

    #[test]
    fn region_side_is_21_at_default() {
        assert_eq!(ToleranceConfig::default().region_side(), 21);
    }
}
