//! Spatial cells and the velocity grid used for quadrature and diagnostics.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic cells on `[0, lx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub lx: f64,
    pub nx: usize,
}

impl SpatialGrid {
    pub fn new(lx: f64, nx: usize) -> Result<Self> {
        if !(lx > 0.0 && lx.is_finite()) {
            return Err(Error::param("Lx", lx, "domain length must be positive"));
        }
        if nx == 0 {
            return Err(Error::param("Nx", 0.0, "need at least one cell"));
        }
        Ok(Self { lx, nx })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    #[inline]
    pub fn center(&self, cell: usize) -> f64 {
        (cell as f64 + 0.5) * self.dx()
    }

    /// Maps a position to its periodic image in `[0, lx)`.
    #[inline]
    pub fn wrap(&self, x: f64) -> f64 {
        let y = x.rem_euclid(self.lx);
        // rem_euclid can round up to lx itself for tiny negative inputs
        if y >= self.lx {
            0.0
        } else {
            y
        }
    }

    /// Index of the cell containing `x` (nearest-grid-point assignment).
    #[inline]
    pub fn cell_of(&self, x: f64) -> usize {
        let c = (x / self.dx()) as usize;
        c.min(self.nx - 1)
    }

    #[inline]
    pub fn left(&self, cell: usize) -> usize {
        (cell + self.nx - 1) % self.nx
    }

    #[inline]
    pub fn right(&self, cell: usize) -> usize {
        (cell + 1) % self.nx
    }

    /// Second-order centered difference of a periodic cell field.
    pub fn centered_derivative(&self, field: &[f64]) -> Vec<f64> {
        let inv = 1.0 / (2.0 * self.dx());
        (0..self.nx)
            .map(|c| (field[self.right(c)] - field[self.left(c)]) * inv)
            .collect()
    }
}

/// Uniform velocity nodes on `[-lv/2, lv/2]`, endpoints included, with
/// trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    pub lv: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl VelocityGrid {
    pub fn new(lv: f64, nv: usize) -> Result<Self> {
        if !(lv > 0.0 && lv.is_finite()) {
            return Err(Error::param("Lv", lv, "velocity extent must be positive"));
        }
        if nv < 3 {
            return Err(Error::param("Nv", nv as f64, "need at least three velocity nodes"));
        }
        let dv = lv / (nv - 1) as f64;
        let nodes = (0..nv).map(|j| -0.5 * lv + j as f64 * dv).collect();
        let mut weights = vec![dv; nv];
        weights[0] = 0.5 * dv;
        weights[nv - 1] = 0.5 * dv;
        Ok(Self { lv, nodes, weights })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn dv(&self) -> f64 {
        self.lv / (self.len() - 1) as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Trapezoid rule for samples given on the nodes.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        samples.iter().zip(&self.weights).map(|(f, w)| f * w).sum()
    }

    /// Trapezoid rule for `phi(v) * samples(v)`.
    pub fn integrate_with(&self, samples: &[f64], phi: impl Fn(f64) -> f64) -> f64 {
        samples
            .iter()
            .zip(&self.nodes)
            .zip(&self.weights)
            .map(|((f, &v), w)| f * phi(v) * w)
            .sum()
    }

    /// Node whose trapezoid cell `[v_j - dv/2, v_j + dv/2)` contains `v`.
    #[inline]
    pub fn nearest_node(&self, v: f64) -> usize {
        let j = ((v + 0.5 * self.lv) / self.dv()).round();
        (j.max(0.0) as usize).min(self.len() - 1)
    }
}

/// Phase-space discretization: periodic cells in x and the diagnostic
/// velocity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub space: SpatialGrid,
    pub velocity: VelocityGrid,
}

impl GridSpec {
    pub fn new(lx: f64, nx: usize, lv: f64, nv: usize) -> Result<Self> {
        Ok(Self {
            space: SpatialGrid::new(lx, nx)?,
            velocity: VelocityGrid::new(lv, nv)?,
        })
    }

    /// `[0, 4pi] x [-10, 10]` with the given resolutions.
    pub fn standard(nx: usize, nv: usize) -> Self {
        Self::new(4.0 * PI, nx, 20.0, nv).expect("standard domain is valid")
    }

    /// Phase-space volume `Lx * Lv`.
    pub fn volume(&self) -> f64 {
        self.space.lx * self.velocity.lv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_periodic() {
        let g = SpatialGrid::new(4.0 * PI, 8).unwrap();
        assert!((g.wrap(-0.5) - (4.0 * PI - 0.5)).abs() < 1e-15);
        assert_eq!(g.wrap(4.0 * PI), 0.0);
        assert_eq!(g.wrap(-1e-300), 0.0);
        assert_eq!(g.cell_of(g.wrap(-1e-300)), 0);
    }

    #[test]
    fn trapezoid_weights_sum_to_extent() {
        let vg = VelocityGrid::new(20.0, 512).unwrap();
        let total: f64 = vg.weights().iter().sum();
        assert!((total - 20.0).abs() < 1e-12);
        assert_eq!(vg.nearest_node(-10.0), 0);
        assert_eq!(vg.nearest_node(10.0), 511);
    }

    #[test]
    fn centered_derivative_of_sine() {
        let g = SpatialGrid::new(2.0 * PI, 256).unwrap();
        let f: Vec<f64> = (0..g.nx).map(|c| g.center(c).sin()).collect();
        let d = g.centered_derivative(&f);
        for c in 0..g.nx {
            assert!((d[c] - g.center(c).cos()).abs() < 1e-3);
        }
    }
}
