//! Plain-text density files: a 3-line # header (side, n, mass) followed by
//! an n-row CSV payload. Floats are written with the shortest round-trip
//! representation, so write-then-read is bit-identical.

use anyhow::{bail, Context, Result};
use exclusionkit_core::DensityGrid;
use std::fmt::Write as _;
use std::path::Path;

pub fn read_density(path: &Path) -> Result<DensityGrid> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading density file {}", path.display()))?;
    let mut lines = text.lines();
    let side = header_value(lines.next(), "side")?;
    let n = header_value(lines.next(), "n")? as usize;
    let mass = header_value(lines.next(), "mass")?;
    let mut cells = Vec::with_capacity(n * n);
    for (row, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .with_context(|| format!("payload row {row}: bad number '{field}'"))?;
            cells.push(v);
        }
    }
    let grid = DensityGrid::new((0.0, 0.0), side, n, cells)
        .map_err(|e| anyhow::anyhow!("invalid density grid: {e}"))?;
    let total = grid.total_mass();
    if (total - mass).abs() > 1e-6 * mass.abs().max(1.0) {
        bail!("header mass {mass} does not match payload integral {total}");
    }
    Ok(grid)
}

fn header_value(line: Option<&str>, key: &str) -> Result<f64> {
    let line = line.with_context(|| format!("missing header line for {key}"))?;
    let rest = line
        .strip_prefix('#')
        .with_context(|| format!("header line must start with #: '{line}'"))?;
    let (k, v) = rest
        .split_once('=')
        .with_context(|| format!("header line must be '# {key} = value': '{line}'"))?;
    if k.trim() != key {
        bail!("expected header key '{key}', got '{}'", k.trim());
    }
    Ok(v.trim().parse()?)
}

pub fn format_density(grid: &DensityGrid) -> String {
    let mut out = String::new();
    writeln!(out, "# side = {}", grid.side()).unwrap();
    writeln!(out, "# n = {}", grid.n()).unwrap();
    writeln!(out, "# mass = {}", grid.total_mass()).unwrap();
    let n = grid.n();
    for row in 0..n {
        let line: Vec<String> = (0..n).map(|col| grid.cell(col, row).to_string()).collect();
        writeln!(out, "{}", line.join(",")).unwrap();
    }
    out
}
