//! One micro-macro time step and the state it advances.
//!
//! Step order:
//! 1. deposit the (matched) particle moments and take centered differences
//!    of `<(v, v^2, v^3) g>`;
//! 2. push both particle sets;
//! 3. advance the macroscopic moments;
//! 4. rebuild the cell Maxwellians and update the weights with the micro
//!    source and exponential damping;
//! 5. match both particle sets to the new Maxwellians.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::macrofv::{Conserved, FvOptions, MacroState};
use crate::model::{
    exchange_quantities, Maxwellian, MixtureParams, Species, SpeciesMoments, ValidatedParams,
};
use crate::particles::{init_particles, MatchReport, ParticleSet};
use crate::projection::{central_from_raw, project_cross_maxwellian, project_from_moments};

/// Diagnostics at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    /// `max_x |u1 - u2|`.
    pub u_gap_inf: f64,
    /// `max_x |T1 - T2|`.
    pub t_gap_inf: f64,
    /// Cell average of `|u1 - u2|^2`.
    pub u_gap_sq: f64,
    /// Cell average of `T1 - T2`.
    pub t_diff: f64,
    pub mass: [f64; 2],
    /// `sum (n1 u1 + mr n2 u2) dx`.
    pub momentum: f64,
    /// `1/2 sum (E1 + mr E2) dx`.
    pub energy: f64,
    /// `sum |w|` per species.
    pub abs_weight: [f64; 2],
}

/// Per-cell data of the micro source `S(v) = M(v) r(c) + kappa M_cross(v)`
/// with `c = v - u`.
#[derive(Debug, Clone, Copy)]
struct CellSource {
    own: Maxwellian,
    cross: Maxwellian,
    kappa: f64,
    poly: [f64; 4],
}

impl CellSource {
    #[inline]
    fn eval(&self, v: f64) -> f64 {
        let c = v - self.own.u;
        let r = self.poly[0] + c * (self.poly[1] + c * (self.poly[2] + c * self.poly[3]));
        self.own.eval(v) * r + self.kappa * self.cross.eval(v)
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub params: MixtureParams,
    pub grid: GridSpec,
    pub macro_state: MacroState,
    pub particles: [ParticleSet; 2],
    pub opts: FvOptions,
    pub steps: usize,
    /// Cells left unmatched so far, summed over steps and species.
    pub unmatched_cells: usize,
}

fn centered(values: &[f64], c: usize, dx: f64) -> f64 {
    let nx = values.len();
    (values[(c + 1) % nx] - values[(c + nx - 1) % nx]) / (2.0 * dx)
}

impl Simulation {
    /// Builds the state from per-cell Maxwellian moments and the initial
    /// remainders `g_k(x, v)`; particles are matched before returning.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        params: ValidatedParams,
        grid: GridSpec,
        moments: [Vec<SpeciesMoments>; 2],
        g1: impl Fn(f64, f64) -> f64,
        g2: impl Fn(f64, f64) -> f64,
        np: [usize; 2],
        seed: u64,
        opts: FvOptions,
    ) -> Result<Self> {
        let params = params.into_inner();
        let nx = grid.space.nx;
        for m in &moments {
            if m.len() != nx {
                return Err(Error::Config {
                    field: "domain.Nx".into(),
                    message: format!("{} initial cells for {} grid cells", m.len(), nx),
                });
            }
        }
        let macro_state =
            MacroState::from_moments(&moments[0], &moments[1], params.mass_ratio(), grid.space.dx());
        let particles = [
            init_particles(g1, &grid, np[0], seed, Species::One),
            init_particles(g2, &grid, np[1], seed, Species::Two),
        ];
        let mut sim = Simulation { params, grid, macro_state, particles, opts, steps: 0, unmatched_cells: 0 };
        let prims = sim.macro_state.primitives(&sim.params)?;
        sim.match_all(&prims)?;
        Ok(sim)
    }

    pub fn t(&self) -> f64 {
        self.macro_state.t
    }

    fn mass_ratio(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.params.mass_ratio()
        }
    }

    fn match_all(&mut self, prims: &[Vec<SpeciesMoments>; 2]) -> Result<MatchReport> {
        let mut total = MatchReport::default();
        for k in 0..2 {
            let mr = self.mass_ratio(k);
            let r = self.particles[k].match_moments(&self.grid.space, &prims[k], mr)?;
            total.unmatched_cells += r.unmatched_cells;
        }
        self.unmatched_cells += total.unmatched_cells;
        Ok(total)
    }

    /// Centered divergence of `<(v, v^2, v^3) g>` per cell.
    fn particle_flux_div(&self) -> [Vec<Conserved>; 2] {
        let nx = self.grid.space.nx;
        if !self.opts.transport {
            return [vec![[0.0; 3]; nx], vec![[0.0; 3]; nx]];
        }
        let dx = self.grid.space.dx();
        std::array::from_fn(|k| {
            let m = self.particles[k].deposit(&self.grid.space);
            (0..nx)
                .map(|c| {
                    let (r, l) = (&m[(c + 1) % nx], &m[(c + nx - 1) % nx]);
                    [1, 2, 3].map(|j| (r[j] - l[j]) / (2.0 * dx))
                })
                .collect()
        })
    }

    fn cell_sources(
        &self,
        prims: &[Vec<SpeciesMoments>; 2],
        div: &[Vec<Conserved>; 2],
        k: usize,
    ) -> Result<Vec<CellSource>> {
        let p = &self.params;
        let mr = self.mass_ratio(k);
        let dx = self.grid.space.dx();
        let own = &prims[k];
        let n: Vec<f64> = own.iter().map(|m| m.n).collect();
        let u: Vec<f64> = own.iter().map(|m| m.u).collect();
        let th: Vec<f64> = own.iter().map(|m| m.t / mr).collect();
        let species = if k == 0 { Species::One } else { Species::Two };
        let epst = if k == 0 { p.epst1 } else { p.epst2 };
        (0..own.len())
            .map(|c| {
                let m = &own[c];
                let theta = th[c];
                // v dM/dx = M (c + u)(a + b c + e c^2)
                let (a, b, e) = if self.opts.transport {
                    let (dn, du, dth) = (centered(&n, c, dx), centered(&u, c, dx), centered(&th, c, dx));
                    (dn / m.n - dth / (2.0 * theta), du / theta, dth / (2.0 * theta * theta))
                } else {
                    (0.0, 0.0, 0.0)
                };
                let q = [m.u * a, a + m.u * b, b + m.u * e, e];
                let transport_moments = [
                    m.n * (q[0] + q[2] * theta),
                    m.n * (q[1] * theta + 3.0 * q[3] * theta * theta),
                    m.n * (q[0] * theta + 3.0 * q[2] * theta * theta),
                ];
                let pm = project_from_moments(m, mr, transport_moments)?.polynomial();
                let pg = project_from_moments(m, mr, central_from_raw(div[k][c], m.u))?.polynomial();
                let (s1, s2) = (&prims[0][c], &prims[1][c]);
                let exch = exchange_quantities(s1, s2, p);
                let pc = project_cross_maxwellian(m, &exch, species, mr)?.polynomial();
                let target = match species {
                    Species::One => exch.target_of_species1(s1),
                    Species::Two => exch.target_of_species2(s2),
                };
                let partner_n = prims[1 - k][c].n;
                let kappa = p.nu12 * partner_n / epst;
                Ok(CellSource {
                    own: Maxwellian::new(m, mr)?,
                    cross: Maxwellian::new(&target, mr)?,
                    kappa,
                    poly: [
                        pm[0] + pg[0] - kappa * pc[0] - q[0],
                        pm[1] + pg[1] - kappa * pc[1] - q[1],
                        pm[2] + pg[2] - kappa * pc[2] - q[2],
                        -q[3],
                    ],
                })
            })
            .collect()
    }

    fn damping(&self, prims: &[Vec<SpeciesMoments>; 2], k: usize) -> Vec<f64> {
        let p = &self.params;
        let (eps, epst) = if k == 0 { (p.eps1, p.epst1) } else { (p.eps2, p.epst2) };
        prims[k]
            .iter()
            .zip(&prims[1 - k])
            .map(|(own, other)| p.nu12 * (own.n / eps + other.n / epst))
            .collect()
    }

    /// Advances the whole state by `dt`.
    pub fn step(&mut self, dt: f64) -> Result<MatchReport> {
        let index = self.steps + 1;
        self.try_step(dt).map_err(|e| Error::Step { step: index, source: Box::new(e) })
    }

    fn try_step(&mut self, dt: f64) -> Result<MatchReport> {
        let div = self.particle_flux_div();
        let next = self.macro_state.fv_step(&div, &self.params, dt, &self.opts)?;
        if self.opts.transport {
            for ps in &mut self.particles {
                ps.push(dt, &self.grid.space);
            }
        }
        let prims = next.primitives(&self.params)?;
        for k in 0..2 {
            let sources = self.cell_sources(&prims, &div, k)?;
            let damping = self.damping(&prims, k);
            self.particles[k].update_weights(&self.grid.space, &damping, dt, |c, _, v| sources[c].eval(v))?;
        }
        self.macro_state = next;
        let report = self.match_all(&prims)?;
        self.steps += 1;
        Ok(report)
    }

    pub fn primitives(&self) -> Result<[Vec<SpeciesMoments>; 2]> {
        self.macro_state.primitives(&self.params)
    }

    pub fn diagnostics(&self) -> Result<Diagnostics> {
        let prims = self.primitives()?;
        let nx = prims[0].len() as f64;
        let mut d = Diagnostics {
            t: self.t(),
            u_gap_inf: 0.0,
            t_gap_inf: 0.0,
            u_gap_sq: 0.0,
            t_diff: 0.0,
            mass: [0.0; 2],
            momentum: 0.0,
            energy: 0.0,
            abs_weight: [self.particles[0].total_abs_weight(), self.particles[1].total_abs_weight()],
        };
        for (a, b) in prims[0].iter().zip(&prims[1]) {
            d.u_gap_inf = d.u_gap_inf.max((a.u - b.u).abs());
            d.t_gap_inf = d.t_gap_inf.max((a.t - b.t).abs());
            d.u_gap_sq += (a.u - b.u).powi(2) / nx;
            d.t_diff += (a.t - b.t) / nx;
        }
        let mr = self.params.mass_ratio();
        let (t1, t2) = (self.macro_state.totals(0), self.macro_state.totals(1));
        d.mass = [t1[0], t2[0]];
        d.momentum = t1[1] + mr * t2[1];
        d.energy = 0.5 * (t1[2] + mr * t2[2]);
        Ok(d)
    }

    /// `f_k = M_k + g_k` on the phase-space grid, `g_k` binned from the
    /// particles; indexed `[cell][node]`.
    pub fn reconstruct(&self, k: usize) -> Result<Vec<Vec<f64>>> {
        let prims = self.primitives()?;
        let mut f = self.particles[k].bin(&self.grid);
        let mr = self.mass_ratio(k);
        for (row, m) in f.iter_mut().zip(&prims[k]) {
            let max = Maxwellian::new(m, mr)?;
            for (x, &v) in row.iter_mut().zip(self.grid.velocity.nodes()) {
                *x += max.eval(v);
            }
        }
        Ok(f)
    }
}
