//! Uniform grids and nodal fields.

use crate::error::{Error, Result};
use crate::models::RiemannData;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    /// Constant extrapolation of the boundary node into the ghost layer.
    OutflowExtrapolation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub bc: BoundaryCondition,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid requires x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_cells < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid requires at least 2 cells, got {n_cells}"
            )));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            n_cells,
            bc,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    /// Node `i` sits at the centre of cell `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.x(i)).collect()
    }

    /// Position of the interface between nodes `i` and `i + 1`.
    pub fn interface(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 1.0) * self.dx()
    }

    pub fn check_stencil(&self, p: usize) -> Result<()> {
        if self.n_cells < 2 * p + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} cells cannot host a stencil of half-width {p}",
                self.n_cells
            )));
        }
        Ok(())
    }
}

/// Nodal values of every component at one instant. Components are stored
/// separately: `components[k][i]` is component `k` at node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: GridSpec,
    pub components: Vec<Vec<f64>>,
    pub time: f64,
}

impl FieldState {
    pub fn new(grid: GridSpec, components: Vec<Vec<f64>>, time: f64) -> Result<Self> {
        if components.is_empty() || components.iter().any(|c| c.len() != grid.n_cells) {
            return Err(Error::ShapeMismatch(format!(
                "every component must hold {} values",
                grid.n_cells
            )));
        }
        Ok(FieldState {
            grid,
            components,
            time,
        })
    }

    pub fn scalar(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, vec![values], 0.0)
    }

    pub fn from_fn(grid: GridSpec, dim: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut components = vec![Vec::with_capacity(grid.n_cells); dim];
        for i in 0..grid.n_cells {
            let v = f(grid.x(i));
            if v.len() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "initial data returned {} components, expected {dim}",
                    v.len()
                )));
            }
            for (c, x) in components.iter_mut().zip(v) {
                c.push(x);
            }
        }
        Self::new(grid, components, 0.0)
    }

    pub fn riemann(grid: GridSpec, data: &RiemannData) -> Result<Self> {
        Self::from_fn(grid, data.left_state.len(), |x| data.state_at(x).to_vec())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn len(&self) -> usize {
        self.grid.n_cells
    }

    pub fn is_empty(&self) -> bool {
        self.grid.n_cells == 0
    }

    pub fn node(&self, i: usize) -> Vec<f64> {
        self.components.iter().map(|c| c[i]).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.components.iter().flatten().all(|v| v.is_finite())
    }

    /// `sum_i u_i dx` per component.
    pub fn integral(&self) -> Vec<f64> {
        let dx = self.grid.dx();
        self.components
            .iter()
            .map(|c| c.iter().sum::<f64>() * dx)
            .collect()
    }

    /// Euclidean norm of `u_{i+1} - u_i` for every adjacent pair.
    pub fn adjacent_jumps(&self) -> Vec<f64> {
        (0..self.len().saturating_sub(1))
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| (c[i + 1] - c[i]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }
}

/// Extend a component by `p` ghost nodes on each side.
pub(crate) fn with_ghosts(values: &[f64], p: usize, bc: BoundaryCondition, out: &mut Vec<f64>) {
    let n = values.len();
    out.clear();
    out.reserve(n + 2 * p);
    match bc {
        BoundaryCondition::Periodic => {
            for k in 0..p {
                out.push(values[(n + k - p % n) % n]);
            }
            out.extend_from_slice(values);
            for k in 0..p {
                out.push(values[k % n]);
            }
        }
        BoundaryCondition::OutflowExtrapolation => {
            out.extend(std::iter::repeat_n(values[0], p));
            out.extend_from_slice(values);
            out.extend(std::iter::repeat_n(values[n - 1], p));
        }
    }
}
