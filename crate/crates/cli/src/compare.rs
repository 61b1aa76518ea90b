//! Distances between two snapshots, optionally after interpolating the second
//! onto the nodes of the first.

use anyhow::{bail, Result};

use crate::output::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Piecewise-linear interpolant of `(xs, ys)` at `x`, constant outside.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return ys[0];
    }
    if k == xs.len() {
        return ys[k - 1];
    }
    let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    ys[k - 1] + t * (ys[k] - ys[k - 1])
}

/// Node weights of a uniform grid, recovered from the node spacing.
fn node_weight(x: &[f64]) -> f64 {
    if x.len() < 2 {
        1.0
    } else {
        (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64
    }
}

/// L1, L2 and max distances on the nodes of `a`, measuring the pointwise
/// difference in the Euclidean norm over components.
pub fn distances(a: &Snapshot, b: &Snapshot, interpolate_b: bool) -> Result<Distances> {
    if a.columns.len() != b.columns.len() {
        bail!(
            "component count differs: {} vs {}",
            a.columns.len(),
            b.columns.len()
        );
    }
    let conforming = a.x.len() == b.x.len()
        && a.x
            .iter()
            .zip(&b.x)
            .all(|(p, q)| (p - q).abs() <= 1e-12 * (1.0 + p.abs()));
    if !conforming && !interpolate_b {
        bail!(
            "grids differ ({} vs {} nodes); pass --interpolate to compare",
            a.x.len(),
            b.x.len()
        );
    }
    let dx = node_weight(&a.x);
    let (mut l1, mut l2, mut linf) = (0.0f64, 0.0f64, 0.0f64);
    for (i, &x) in a.x.iter().enumerate() {
        let d2: f64 = a
            .columns
            .iter()
            .zip(&b.columns)
            .map(|(ca, cb)| {
                let vb = if conforming {
                    cb[i]
                } else {
                    interpolate(&b.x, cb, x)
                };
                (ca[i] - vb).powi(2)
            })
            .sum();
        let d = d2.sqrt();
        l1 += d * dx;
        l2 += d2 * dx;
        linf = linf.max(d);
    }
    Ok(Distances {
        l1,
        l2: l2.sqrt(),
        linf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(x: Vec<f64>, u: Vec<f64>) -> Snapshot {
        Snapshot {
            names: vec!["u".into()],
            x,
            columns: vec![u],
        }
    }

    #[test]
    fn identical_snapshots_are_at_distance_zero() {
        let a = snap(vec![0.1, 0.3, 0.5], vec![1.0, -2.0, 3.0]);
        let d = distances(&a, &a, false).unwrap();
        assert_eq!(
            d,
            Distances {
                l1: 0.0,
                l2: 0.0,
                linf: 0.0
            }
        );
    }

    #[test]
    fn constant_offset() {
        let a = snap(vec![0.125, 0.375, 0.625, 0.875], vec![1.0; 4]);
        let b = snap(vec![0.125, 0.375, 0.625, 0.875], vec![0.5; 4]);
        let d = distances(&a, &b, false).unwrap();
        assert!((d.l1 - 0.5).abs() < 1e-15);
        assert!((d.l2 - 0.5).abs() < 1e-15);
        assert_eq!(d.linf, 0.5);
    }

    #[test]
    fn mismatched_grids_need_interpolation() {
        let a = snap(vec![0.25, 0.75], vec![0.25, 0.75]);
        let b = snap(vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0]);
        assert!(distances(&a, &b, false).is_err());
        let d = distances(&a, &b, true).unwrap();
        assert!(d.linf < 1e-15);
    }

    #[test]
    fn component_count_must_agree() {
        let a = snap(vec![0.0, 1.0], vec![0.0, 1.0]);
        let mut b = a.clone();
        b.columns.push(vec![0.0, 0.0]);
        b.names.push("w".into());
        assert!(distances(&a, &b, true).is_err());
    }
}
