//! CSV data files with 17 significant digits and key-value metadata sidecars.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use wcd_core::{FieldState, StepRecord};

/// Round-trip decimal form of a double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_csv(state: &FieldState, names: &[&str]) -> String {
    let mut out = String::from("x");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for i in 0..state.len() {
        out.push_str(&fmt_f64(state.grid.x(i)));
        for c in &state.components {
            out.push(',');
            out.push_str(&fmt_f64(c[i]));
        }
        out.push('\n');
    }
    out
}

pub fn diagnostics_csv(steps: &[StepRecord]) -> String {
    let mut out = String::from("step,time,dt,c\n");
    for s in steps {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.step,
            fmt_f64(s.time),
            fmt_f64(s.dt),
            fmt_f64(s.c)
        );
    }
    out
}

/// Path of the sidecar accompanying `data`.
pub fn sidecar_path(data: &Path) -> PathBuf {
    let mut name = data.file_name().unwrap_or_default().to_os_string();
    name.push(".meta");
    data.with_file_name(name)
}

pub fn metadata_text(entries: &[(String, String)]) -> String {
    entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

/// Write `contents` to `path` and its sidecar, creating parent directories.
pub fn write_with_sidecar(path: &Path, contents: &str, meta: &[(String, String)]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    let side = sidecar_path(path);
    std::fs::write(&side, metadata_text(meta))
        .with_context(|| format!("writing {}", side.display()))?;
    Ok(())
}

/// A snapshot CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub names: Vec<String>,
    pub x: Vec<f64>,
    /// `columns[k][i]`: component `k` at node `i`.
    pub columns: Vec<Vec<f64>>,
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().context("empty snapshot file")?;
    let mut names = header.split(',').map(|s| s.trim().to_string());
    if names.next().as_deref() != Some("x") {
        bail!("snapshot header must start with `x`");
    }
    let names: Vec<String> = names.collect();
    if names.is_empty() {
        bail!("snapshot has no value columns");
    }
    let mut x = Vec::new();
    let mut columns = vec![Vec::new(); names.len()];
    for (row, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("row {}: not a number", row + 1))?;
        if vals.len() != names.len() + 1 {
            bail!(
                "row {} has {} fields, expected {}",
                row + 1,
                vals.len(),
                names.len() + 1
            );
        }
        x.push(vals[0]);
        for (c, v) in columns.iter_mut().zip(&vals[1..]) {
            c.push(*v);
        }
    }
    if x.is_empty() {
        bail!("snapshot has no rows");
    }
    Ok(Snapshot { names, x, columns })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_snapshot(&text).with_context(|| format!("parsing {}", path.display()))
}
