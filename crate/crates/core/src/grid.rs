//! Uniform 1-D mesh and nodal fields.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform mesh on [a, b] with m nodes: x_i = a + i·h, h = (b-a)/(m-1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub m: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid("domain", format!("need finite a < b, got [{a}, {b}]")));
        }
        if m < 3 {
            return Err(Error::invalid("m", format!("need at least 3 nodes, got {m}")));
        }
        Ok(Self { a, b, m })
    }

    /// Mesh fine enough to resolve an ε-wide interface with
    /// `cells_per_eps` cells (default practice: 8).
    pub fn resolving(a: f64, b: f64, eps: f64, cells_per_eps: f64) -> Result<Self> {
        let target_h = eps / cells_per_eps;
        let m = ((b - a) / target_h).ceil() as usize + 1;
        Self::new(a, b, m.max(3))
    }

    #[inline]
    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.m - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |i| self.x(i))
    }

    /// Trapezoidal node weight: h/2 at the two boundary nodes, h inside.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.m - 1 {
            0.5 * self.h()
        } else {
            self.h()
        }
    }
}

/// Nodal values of u on a [`Grid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.m {
            return Err(Error::invalid(
                "values",
                format!("length {} does not match grid with {} nodes", values.len(), grid.m),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("values", "non-finite entry".to_string()));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.m] }
    }

    /// Sample a function at the grid nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoidal approximation of ∫ u dx.
    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.weight(i) * v)
            .sum()
    }

    /// sup-norm distance to another field on the same grid.
    pub fn sup_distance(&self, other: &Field) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Count of sign changes across adjacent nodes (zeros of the linear
    /// interpolant; exact nodal zeros count once).
    pub fn sign_changes(&self) -> usize {
        let mut count = 0;
        let mut prev: Option<f64> = None;
        for &v in &self.values {
            let s = if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                continue; // node exactly on zero: sign carried by neighbors
            };
            if let Some(ps) = prev {
                if s != ps {
                    count += 1;
                }
            }
            prev = Some(s);
        }
        count
    }
}
