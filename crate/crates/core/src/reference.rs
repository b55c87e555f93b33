//! Discrete-velocity solver for the full two-species BGK system on the
//! `(x, v)` grid. Slow and first order; used to cross-check the
//! micro-macro scheme.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::{MixtureParams, SpeciesMoments};
use crate::velocity::{grid_moments, primitives, relax_line};

/// Both distributions sampled on the phase-space grid, stored cell by cell
/// (`f[cell * nv + node]`).
#[derive(Debug, Clone, PartialEq)]
pub struct GridDistribution {
    pub grid: GridSpec,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub t: f64,
}

/// Samples below this are reported as errors; anything above is tolerated.
const UNDERSHOOT: f64 = -1e-12;

impl GridDistribution {
    pub fn from_fn(
        grid: GridSpec,
        f1: impl Fn(f64, f64) -> f64,
        f2: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut a = Vec::with_capacity(grid.space.nx * grid.velocity.len());
        let mut b = Vec::with_capacity(a.capacity());
        for c in 0..grid.space.nx {
            let x = grid.space.center(c);
            for &v in grid.velocity.nodes() {
                a.push(f1(x, v));
                b.push(f2(x, v));
            }
        }
        GridDistribution { grid, f1: a, f2: b, t: 0.0 }
    }

    pub fn cell(&self, species: usize, c: usize) -> &[f64] {
        let nv = self.grid.velocity.len();
        let f = if species == 0 { &self.f1 } else { &self.f2 };
        &f[c * nv..(c + 1) * nv]
    }

    /// Per-cell `(n, u, T)` of both species.
    pub fn moments(&self, p: &MixtureParams) -> [Vec<SpeciesMoments>; 2] {
        let mr = [1.0, p.mass_ratio()];
        std::array::from_fn(|k| {
            (0..self.grid.space.nx)
                .map(|c| primitives(grid_moments(&self.grid.velocity, self.cell(k, c)), mr[k]))
                .collect()
        })
    }

    /// `sum_c (n, n u, <v^2 f>) dx` for one species.
    pub fn totals(&self, species: usize) -> [f64; 3] {
        let dx = self.grid.space.dx();
        let mut s = [0.0; 3];
        for c in 0..self.grid.space.nx {
            let m = grid_moments(&self.grid.velocity, self.cell(species, c));
            for k in 0..3 {
                s[k] += m[k] * dx;
            }
        }
        s
    }

    pub fn min_value(&self) -> f64 {
        self.f1.iter().chain(&self.f2).copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest stable step of the upwind transport.
    pub fn max_dt(&self) -> f64 {
        self.grid.space.dx() / (0.5 * self.grid.velocity.lv)
    }

    /// Upwind transport in `x`, then exponential relaxation in every cell
    /// toward Maxwellians built from the transported moments.
    pub fn dvm_step(&mut self, p: &MixtureParams, dt: f64) -> Result<()> {
        let required = self.max_dt();
        if dt > required * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, required });
        }
        let nv = self.grid.velocity.len();
        let nx = self.grid.space.nx;
        let r = dt / self.grid.space.dx();
        for f in [&mut self.f1, &mut self.f2] {
            let old = f.clone();
            for (j, &v) in self.grid.velocity.nodes().iter().enumerate() {
                for c in 0..nx {
                    let here = old[c * nv + j];
                    let diff = if v > 0.0 {
                        here - old[((c + nx - 1) % nx) * nv + j]
                    } else {
                        old[((c + 1) % nx) * nv + j] - here
                    };
                    f[c * nv + j] = here - v * r * diff;
                }
            }
        }
        let vg = &self.grid.velocity;
        self.f1
            .par_chunks_mut(nv)
            .zip(self.f2.par_chunks_mut(nv))
            .enumerate()
            .try_for_each(|(c, (a, b))| relax_line(vg, p, a, b, dt, c))?;
        self.t += dt;
        let (idx, min) = self
            .f1
            .iter()
            .chain(&self.f2)
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, x)| if x < acc.1 { (i, x) } else { acc });
        if min < UNDERSHOOT {
            return Err(Error::NegativeDistribution { index: idx, value: min });
        }
        Ok(())
    }
}
