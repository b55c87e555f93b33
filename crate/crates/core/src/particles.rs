//! Weighted particles carrying the kinetic remainder `g_kk = f_k - M_k`.
//!
//! A particle stands for the phase-space volume `Lx Lv / Np` around
//! `(x, v)`, so its weight is the local value of `g` times that volume.
//! Velocities never change; transport moves positions and the source
//! terms act on weights only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SpatialGrid};
use crate::linalg::solve3;
use crate::model::{Maxwellian, Species, SpeciesMoments};
use crate::velocity::relaxation_weight;

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    pub species: Species,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// Phase-space volume per particle, `Lx Lv / Np`.
    pub weight_unit: f64,
}

/// Per-cell `(<g>, <v g>, <v^2 g>, <v^3 g>)`, already divided by `dx`.
pub type CellMoments = Vec<[f64; 4]>;

/// Outcome of a matching pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchReport {
    /// Cells holding particles whose 3x3 system was singular.
    pub unmatched_cells: usize,
}

/// Draws `np` particles uniformly on `[0, Lx) x [-Lv/2, Lv/2)` and weights
/// them with `g0`.
///
/// The stream is a ChaCha8 generator seeded with `seed` on a stream chosen
/// by the species, so both species are independent and reproducible.
pub fn init_particles(
    g0: impl Fn(f64, f64) -> f64,
    grid: &GridSpec,
    np: usize,
    seed: u64,
    species: Species,
) -> ParticleSet {
    assert!(np > 0, "need at least one particle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(species.index() as u64 + 1);
    let lx = grid.space.lx;
    let half = 0.5 * grid.velocity.lv;
    let weight_unit = grid.volume() / np as f64;
    let mut x = Vec::with_capacity(np);
    let mut v = Vec::with_capacity(np);
    for _ in 0..np {
        x.push(grid.space.wrap(rng.gen_range(0.0..lx)));
        v.push(rng.gen_range(-half..half));
    }
    let w = x.iter().zip(&v).map(|(&xi, &vi)| g0(xi, vi) * weight_unit).collect();
    ParticleSet { species, x, v, w, weight_unit }
}

impl ParticleSet {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `sum |w|`.
    pub fn total_abs_weight(&self) -> f64 {
        self.w.iter().map(|w| w.abs()).sum()
    }

    /// Global `(sum w, sum w v, sum w v^2)`.
    pub fn global_sums(&self) -> [f64; 3] {
        let mut s = [0.0; 3];
        for (&w, &v) in self.w.iter().zip(&self.v) {
            s[0] += w;
            s[1] += w * v;
            s[2] += w * v * v;
        }
        s
    }

    /// Free transport: `x <- wrap(x + v dt)`.
    pub fn push(&mut self, dt: f64, grid: &SpatialGrid) {
        debug_assert!(dt >= 0.0);
        self.x
            .par_iter_mut()
            .zip(self.v.par_iter())
            .for_each(|(x, &v)| *x = grid.wrap(*x + v * dt));
    }

    /// Nearest-grid-point deposit of the first four velocity moments.
    pub fn deposit(&self, grid: &SpatialGrid) -> CellMoments {
        let mut out = vec![[0.0; 4]; grid.nx];
        let inv_dx = 1.0 / grid.dx();
        for ((&x, &v), &w) in self.x.iter().zip(&self.v).zip(&self.w) {
            let c = grid.cell_of(x);
            let cell = &mut out[c];
            let wv = w * v;
            cell[0] += w;
            cell[1] += wv;
            cell[2] += wv * v;
            cell[3] += wv * v * v;
        }
        for cell in &mut out {
            for m in cell.iter_mut() {
                *m *= inv_dx;
            }
        }
        out
    }

    /// Exponential update of the weights over `dt`:
    /// `w <- w e^{-lambda dt} + (1 - e^{-lambda dt}) / lambda * s`,
    /// with `s = source(cell, x, v) * weight_unit` and `lambda` the damping
    /// of the particle's cell.
    pub fn update_weights<F>(
        &mut self,
        grid: &SpatialGrid,
        damping: &[f64],
        dt: f64,
        source: F,
    ) -> Result<()>
    where
        F: Fn(usize, f64, f64) -> f64 + Sync,
    {
        if let Some(&bad) = damping.iter().find(|&&l| !(l >= 0.0)) {
            return Err(Error::NegativeDamping(bad));
        }
        let keep: Vec<f64> = damping.iter().map(|&l| (-l * dt).exp()).collect();
        let gain: Vec<f64> = damping.iter().map(|&l| relaxation_weight(l, dt)).collect();
        let unit = self.weight_unit;
        self.w
            .par_iter_mut()
            .zip(self.x.par_iter().zip(self.v.par_iter()))
            .for_each(|(w, (&x, &v))| {
                let c = grid.cell_of(x);
                *w = *w * keep[c] + gain[c] * source(c, x, v) * unit;
            });
        Ok(())
    }

    /// Removes from every cell the discrete moments `(sum w, sum w v,
    /// sum w v^2)` by subtracting `unit * (a0 + a1 c + a2 c^2) M(v)` from the
    /// cell's weights, `M` being the cell Maxwellian and `c` its reduced
    /// velocity. Cells whose system is singular are left untouched.
    pub fn match_moments(
        &mut self,
        grid: &SpatialGrid,
        maxwellians: &[SpeciesMoments],
        mass_ratio: f64,
    ) -> Result<MatchReport> {
        let refs = maxwellians
            .iter()
            .map(|m| Maxwellian::new(m, mass_ratio))
            .collect::<Result<Vec<_>>>()?;
        let scales: Vec<f64> = refs.iter().map(|m| m.var.sqrt()).collect();
        let cells: Vec<usize> = self.x.par_iter().map(|&x| grid.cell_of(x)).collect();
        let shape: Vec<f64> = cells
            .par_iter()
            .zip(self.v.par_iter())
            .map(|(&c, &v)| refs[c].eval(v))
            .collect();

        let mut gram = vec![[[0.0; 3]; 3]; grid.nx];
        let mut rhs = vec![[0.0; 3]; grid.nx];
        let mut count = vec![0usize; grid.nx];
        for k in 0..self.len() {
            let c = cells[k];
            let r = (self.v[k] - refs[c].u) / scales[c];
            let b = [1.0, r, r * r];
            let m = shape[k] * self.weight_unit;
            count[c] += 1;
            for i in 0..3 {
                rhs[c][i] += self.w[k] * b[i];
                for j in i..3 {
                    gram[c][i][j] += m * b[i] * b[j];
                }
            }
        }
        let mut report = MatchReport::default();
        let coeffs: Vec<Option<[f64; 3]>> = (0..grid.nx)
            .map(|c| {
                if count[c] == 0 {
                    return None;
                }
                let g = &mut gram[c];
                g[1][0] = g[0][1];
                g[2][0] = g[0][2];
                g[2][1] = g[1][2];
                let sol = solve3(*g, rhs[c], 1e-13);
                if sol.is_none() && rhs[c].iter().any(|&r| r != 0.0) {
                    report.unmatched_cells += 1;
                }
                sol
            })
            .collect();
        let unit = self.weight_unit;
        self.w
            .par_iter_mut()
            .zip(self.v.par_iter())
            .zip(cells.par_iter().zip(shape.par_iter()))
            .for_each(|((w, &v), (&c, &m))| {
                if let Some(a) = coeffs[c] {
                    let r = (v - refs[c].u) / scales[c];
                    *w -= unit * m * (a[0] + r * (a[1] + r * a[2]));
                }
            });
        Ok(report)
    }

    /// Histogram of `g` on the phase-space grid: `out[cell][node]` is the sum
    /// of weights falling in the node's trapezoid bin, divided by the bin
    /// area.
    pub fn bin(&self, grid: &GridSpec) -> Vec<Vec<f64>> {
        let vg = &grid.velocity;
        let mut out = vec![vec![0.0; vg.len()]; grid.space.nx];
        for ((&x, &v), &w) in self.x.iter().zip(&self.v).zip(&self.w) {
            out[grid.space.cell_of(x)][vg.nearest_node(v)] += w;
        }
        let dx = grid.space.dx();
        for row in &mut out {
            for (h, &bw) in row.iter_mut().zip(vg.weights()) {
                *h /= dx * bw;
            }
        }
        out
    }
}
