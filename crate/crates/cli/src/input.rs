//! Parsers for command-line values.

use std::path::Path;

use anyhow::{bail, Context, Result};

/// Numbers from `1,2,3` or, with a leading `@`, from a file separated by
/// commas, whitespace or newlines.
pub fn numbers(arg: &str) -> Result<Vec<f64>> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().with_context(|| format!("not a number: {t:?}")))
        .collect()
}

/// `WxH`, e.g. `1440x1080`.
pub fn dims(arg: &str) -> Result<(u32, u32)> {
    let (w, h) = arg
        .split_once(['x', 'X'])
        .with_context(|| format!("expected WIDTHxHEIGHT, got {arg:?}"))?;
    Ok((w.trim().parse()?, h.trim().parse()?))
}

/// `W:H`, e.g. `4:3`.
pub fn ratio(arg: &str) -> Result<(u32, u32)> {
    let (w, h) = arg
        .split_once(':')
        .with_context(|| format!("expected W:H, got {arg:?}"))?;
    let r = (w.trim().parse()?, h.trim().parse()?);
    if r.0 == 0 || r.1 == 0 {
        bail!("aspect ratio terms must be positive");
    }
    Ok(r)
}

/// `Primed=LTR+RTL`: new label and the labels folded into it.
pub fn merge(arg: &str) -> Result<(String, Vec<String>)> {
    let (name, members) = arg
        .split_once('=')
        .with_context(|| format!("expected NEW=OLD+OLD, got {arg:?}"))?;
    let members: Vec<String> = members.split('+').map(|s| s.trim().to_string()).collect();
    if name.trim().is_empty() || members.iter().any(String::is_empty) {
        bail!("empty label in merge {arg:?}");
    }
    Ok((name.trim().to_string(), members))
}

pub fn read_file(path: &Path) -> Result<std::io::BufReader<std::fs::File>> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(std::io::BufReader::new(f))
}
