use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SaliencyError};

/// An 8-bit grayscale saliency map. Zero means not salient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaliencyMap {
    width: u32,
    height: u32,
    values: Vec<u8>,
}

/// Axis-aligned pixel rectangle: top-left corner and size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    /// A `w x h` rectangle centered in a `width x height` frame (rounded
    /// toward the top-left when the margin is odd).
    pub fn centered(width: u32, height: u32, w: u32, h: u32) -> Self {
        Rect {
            x: width.saturating_sub(w) / 2,
            y: height.saturating_sub(h) / 2,
            w,
            h,
        }
    }
}

impl SaliencyMap {
    pub fn new(width: u32, height: u32, values: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(SaliencyError::EmptyMap);
        }
        if values.len() != width as usize * height as usize {
            return Err(SaliencyError::InvalidInput(format!(
                "{} values for a {width}x{height} map",
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    pub fn histogram(&self) -> [u64; 256] {
        let mut h = [0u64; 256];
        for &v in &self.values {
            h[v as usize] += 1;
        }
        h
    }

    /// Copies out the pixels inside `rect`.
    pub fn crop(&self, rect: Rect) -> Result<Self> {
        let fits = rect.w > 0
            && rect.h > 0
            && u64::from(rect.x) + u64::from(rect.w) <= u64::from(self.width)
            && u64::from(rect.y) + u64::from(rect.h) <= u64::from(self.height);
        if !fits {
            return Err(SaliencyError::CropOutOfRange {
                x: rect.x,
                y: rect.y,
                w: rect.w,
                h: rect.h,
                width: self.width,
                height: self.height,
            });
        }
        let w = self.width as usize;
        let values = (rect.y..rect.y + rect.h)
            .flat_map(|row| {
                let start = row as usize * w + rect.x as usize;
                self.values[start..start + rect.w as usize].iter().copied()
            })
            .collect();
        Self::new(rect.w, rect.h, values)
    }

    /// Parses binary (P5) or ASCII (P2) PGM with a maximum value of at most 255.
    pub fn from_pgm(bytes: &[u8], path: &Path) -> Result<Self> {
        let fail = |reason: &str| SaliencyError::Format {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        let mut pos = 0;
        let mut token = || -> Option<&[u8]> {
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                    continue;
                }
                break;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            (pos > start).then(|| &bytes[start..pos])
        };
        let magic = token().ok_or_else(|| fail("missing PGM magic"))?.to_vec();
        let mut number = |what: &str| -> Result<u32> {
            token()
                .and_then(|t| std::str::from_utf8(t).ok()?.parse().ok())
                .ok_or_else(|| fail(&format!("bad PGM {what}")))
        };
        let width = number("width")?;
        let height = number("height")?;
        let maxval = number("maxval")?;
        if maxval == 0 || maxval > 255 {
            return Err(fail("not an 8-bit grayscale map (maxval must be 1..=255)"));
        }
        let count = width as usize * height as usize;
        let values = match magic.as_slice() {
            b"P5" => {
                // exactly one whitespace byte separates the header from the raster
                let start = pos + 1;
                let raster = bytes
                    .get(start..start + count)
                    .ok_or_else(|| fail("truncated raster"))?;
                raster.to_vec()
            }
            b"P2" => (0..count)
                .map(|_| {
                    let v = number("sample")?;
                    u8::try_from(v).map_err(|_| fail("sample exceeds 255"))
                })
                .collect::<Result<_>>()?,
            b"P6" | b"P3" => return Err(fail("color PPM is not a grayscale map")),
            _ => return Err(fail("not a PGM file")),
        };
        Self::new(width, height, values)
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.values);
        out
    }
}

/// Loads a PGM or 8-bit grayscale PNG.
pub fn load_saliency_map(path: &Path) -> Result<SaliencyMap> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(b"\x89PNG") {
        let decoded = image::load_from_memory_with_format(&bytes, image::ImageFormat::Png)
            .map_err(|e| SaliencyError::Format {
                path: path.to_path_buf(),
                reason: e.to_string(),
            })?;
        match decoded {
            image::DynamicImage::ImageLuma8(gray) => {
                let (w, h) = gray.dimensions();
                SaliencyMap::new(w, h, gray.into_raw())
            }
            other => Err(SaliencyError::Format {
                path: path.to_path_buf(),
                reason: format!("expected 8-bit grayscale PNG, found {:?}", other.color()),
            }),
        }
    } else {
        SaliencyMap::from_pgm(&bytes, path)
    }
}

/// Every `.pgm` and `.png` file in `dir`, keyed by file stem, sorted by name.
pub fn load_map_dir(dir: &Path) -> Result<Vec<(String, SaliencyMap)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("png"))
        })
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((id, load_saliency_map(&p)?))
        })
        .collect()
}

/// Keeps images with a given aspect ratio and, optionally, exact resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectFilter {
    pub ratio: (u32, u32),
    pub resolution: Option<(u32, u32)>,
}

impl Default for AspectFilter {
    fn default() -> Self {
        Self {
            ratio: (4, 3),
            resolution: Some((1440, 1080)),
        }
    }
}

impl AspectFilter {
    pub fn accepts(&self, width: u32, height: u32) -> bool {
        let (rw, rh) = self.ratio;
        let ratio_ok = u64::from(width) * u64::from(rh) == u64::from(height) * u64::from(rw);
        ratio_ok && self.resolution.is_none_or(|r| r == (width, height))
    }
}
