//! Finite-volume solver for the moments of the Maxwellian parts.
//!
//! Each species carries `U = (n, n u, <v^2 f>)` per cell. Transport uses a
//! Rusanov flux on the Gaussian closure, the particle remainder enters
//! through a given flux divergence, and the interspecies relaxation source
//! is integrated with classical RK4 sub-steps.

use crate::error::{Error, Result};
use crate::model::{exchange_quantities, MixtureParams, SpeciesMoments};

pub type Conserved = [f64; 3];

/// Conserved moments of both species on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroState {
    pub species: [Vec<Conserved>; 2],
    pub dx: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvOptions {
    pub cfl: f64,
    /// Turns off the flux divergence (space-homogeneous runs).
    pub transport: bool,
    /// Largest `h * rate` allowed for one RK4 sub-step of the source.
    pub source_step: f64,
}

impl Default for FvOptions {
    fn default() -> Self {
        FvOptions { cfl: 0.5, transport: true, source_step: 0.1 }
    }
}

pub fn conserved(m: &SpeciesMoments, mass_ratio: f64) -> Conserved {
    [m.n, m.n * m.u, m.n * (m.t / mass_ratio + m.u * m.u)]
}

/// `(n, u, T)` with `T = (E/n - u^2) mr`; no positivity check.
pub fn primitive(u: &Conserved, mass_ratio: f64) -> SpeciesMoments {
    let n = u[0];
    let vel = u[1] / n;
    SpeciesMoments::new(n, vel, (u[2] / n - vel * vel) * mass_ratio)
}

fn checked_primitive(u: &Conserved, mass_ratio: f64, species: usize, cell: usize) -> Result<SpeciesMoments> {
    let m = primitive(u, mass_ratio);
    if !(m.n > 0.0 && m.t > 0.0) {
        return Err(Error::Positivity { species, cell, density: m.n, temperature: m.t });
    }
    Ok(m)
}

/// `<(v, v^2, v^3) M>` for the Maxwellian with the moments of `u`.
pub fn maxwellian_flux(u: &Conserved, mass_ratio: f64) -> Result<[f64; 3]> {
    let m = primitive(u, mass_ratio);
    if !(m.t > 0.0) {
        return Err(Error::NonPositiveTemperature(m.t));
    }
    let var = m.t / mass_ratio;
    Ok([
        m.n * m.u,
        m.n * (var + m.u * m.u),
        m.n * m.u * (m.u * m.u + 3.0 * var),
    ])
}

fn signal_speed(u: &Conserved, mass_ratio: f64) -> f64 {
    let m = primitive(u, mass_ratio);
    m.u.abs() + (3.0 * m.t / mass_ratio).max(0.0).sqrt()
}

/// Rusanov flux between two cells.
pub fn numerical_flux(left: &Conserved, right: &Conserved, mass_ratio: f64) -> Result<[f64; 3]> {
    let fl = maxwellian_flux(left, mass_ratio)?;
    let fr = maxwellian_flux(right, mass_ratio)?;
    let s = signal_speed(left, mass_ratio).max(signal_speed(right, mass_ratio));
    Ok(std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * s * (right[k] - left[k])))
}

/// Interspecies relaxation of the conserved moments, `(S1, S2)`.
pub fn relaxation_source(
    u1: &Conserved,
    u2: &Conserved,
    p: &MixtureParams,
) -> (Conserved, Conserved) {
    let mr = p.mass_ratio();
    let s1 = primitive(u1, 1.0);
    let s2 = primitive(u2, mr);
    let e = exchange_quantities(&s1, &s2, p);
    let k1 = p.nu12 * s2.n / p.epst1;
    let k2 = p.nu12 * s1.n / p.epst2;
    let src1 = [
        0.0,
        k1 * s1.n * (e.u12 - s1.u),
        k1 * s1.n * (e.t12 + e.u12 * e.u12 - s1.t - s1.u * s1.u),
    ];
    let src2 = [
        0.0,
        k2 * s2.n * (e.u21 - s2.u),
        k2 * s2.n * ((e.t21 - s2.t) / mr + e.u21 * e.u21 - s2.u * s2.u),
    ];
    (src1, src2)
}

fn add(a: &Conserved, b: &Conserved, h: f64) -> Conserved {
    std::array::from_fn(|k| a[k] + h * b[k])
}

/// Integrates the source alone over `dt` from `(u1, u2)` with RK4 sub-steps.
pub fn integrate_source(
    u1: &Conserved,
    u2: &Conserved,
    p: &MixtureParams,
    dt: f64,
    max_step: f64,
) -> (Conserved, Conserved) {
    let rate = p.nu12 * (u2[0] / p.epst1 + u1[0] / p.epst2) * 2.0;
    let sub = ((dt * rate / max_step).ceil() as usize).max(1);
    let h = dt / sub as f64;
    let (mut a, mut b) = (*u1, *u2);
    for _ in 0..sub {
        let (k1a, k1b) = relaxation_source(&a, &b, p);
        let (k2a, k2b) = relaxation_source(&add(&a, &k1a, 0.5 * h), &add(&b, &k1b, 0.5 * h), p);
        let (k3a, k3b) = relaxation_source(&add(&a, &k2a, 0.5 * h), &add(&b, &k2b, 0.5 * h), p);
        let (k4a, k4b) = relaxation_source(&add(&a, &k3a, h), &add(&b, &k3b, h), p);
        for k in 0..3 {
            a[k] += h / 6.0 * (k1a[k] + 2.0 * k2a[k] + 2.0 * k3a[k] + k4a[k]);
            b[k] += h / 6.0 * (k1b[k] + 2.0 * k2b[k] + 2.0 * k3b[k] + k4b[k]);
        }
    }
    (a, b)
}

impl MacroState {
    pub fn from_moments(
        m1: &[SpeciesMoments],
        m2: &[SpeciesMoments],
        mass_ratio: f64,
        dx: f64,
    ) -> Self {
        assert_eq!(m1.len(), m2.len());
        MacroState {
            species: [
                m1.iter().map(|m| conserved(m, 1.0)).collect(),
                m2.iter().map(|m| conserved(m, mass_ratio)).collect(),
            ],
            dx,
            t: 0.0,
        }
    }

    pub fn nx(&self) -> usize {
        self.species[0].len()
    }

    /// Per-cell primitives of both species, failing on lost positivity.
    pub fn primitives(&self, p: &MixtureParams) -> Result<[Vec<SpeciesMoments>; 2]> {
        let mut out: [Vec<SpeciesMoments>; 2] = [Vec::new(), Vec::new()];
        for (k, cells) in self.species.iter().enumerate() {
            let mr = if k == 0 { 1.0 } else { p.mass_ratio() };
            out[k] = cells
                .iter()
                .enumerate()
                .map(|(c, u)| checked_primitive(u, mr, k + 1, c))
                .collect::<Result<_>>()?;
        }
        Ok(out)
    }

    /// `sum_c U dx` for one species.
    pub fn totals(&self, species: usize) -> [f64; 3] {
        let mut s = [0.0; 3];
        for u in &self.species[species] {
            for k in 0..3 {
                s[k] += u[k] * self.dx;
            }
        }
        s
    }

    pub fn max_signal_speed(&self, p: &MixtureParams) -> f64 {
        let mr = [1.0, p.mass_ratio()];
        self.species
            .iter()
            .zip(mr)
            .flat_map(|(cells, m)| cells.iter().map(move |u| signal_speed(u, m)))
            .fold(0.0, f64::max)
    }

    /// One forward-Euler transport step with the source added from its RK4
    /// integral over the step. `particle_flux_div[k][c]` is the centered
    /// divergence of `<(v, v^2, v^3) g>` for species `k`.
    pub fn fv_step(
        &self,
        particle_flux_div: &[Vec<Conserved>; 2],
        p: &MixtureParams,
        dt: f64,
        opts: &FvOptions,
    ) -> Result<MacroState> {
        let nx = self.nx();
        self.primitives(p)?;
        if opts.transport {
            let s = self.max_signal_speed(p);
            let required = opts.cfl * self.dx / s;
            if dt > required {
                return Err(Error::Cfl { dt, required });
            }
        }
        let mut next = self.clone();
        let mr = [1.0, p.mass_ratio()];
        for k in 0..2 {
            let cells = &self.species[k];
            let out = &mut next.species[k];
            if opts.transport {
                let mut flux = Vec::with_capacity(nx);
                for c in 0..nx {
                    flux.push(numerical_flux(&cells[c], &cells[(c + 1) % nx], mr[k])?);
                }
                let r = dt / self.dx;
                for c in 0..nx {
                    let left = &flux[(c + nx - 1) % nx];
                    for j in 0..3 {
                        out[c][j] -= r * (flux[c][j] - left[j]);
                    }
                }
            }
            for (u, d) in out.iter_mut().zip(&particle_flux_div[k]) {
                for j in 0..3 {
                    u[j] -= dt * d[j];
                }
            }
        }
        for c in 0..nx {
            let u1 = &self.species[0][c];
            let u2 = &self.species[1][c];
            let (a, b) = integrate_source(u1, u2, p, dt, opts.source_step);
            for j in 1..3 {
                next.species[0][c][j] += a[j] - u1[j];
                next.species[1][c][j] += b[j] - u2[j];
            }
        }
        next.t = self.t + dt;
        next.primitives(p)?;
        Ok(next)
    }
}
