//! Space-homogeneous relaxation: moment ODEs, closed-form decay of the
//! velocity and temperature gaps, relative entropy, and a direct kinetic
//! solver on the velocity grid.

use crate::error::{Error, Result};
use crate::grid::VelocityGrid;
use crate::model::{exchange_quantities, Maxwellian, MixtureParams, SpeciesMoments};
use crate::velocity::{grid_moments, l1_distance, primitives, relax_line};

/// Mixture parameters together with the (constant) densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousSystem {
    pub params: MixtureParams,
    pub n1: f64,
    pub n2: f64,
}

/// Rates of the closed-form decay laws.
///
/// `c3` governs `|u1 - u2|^2`, `c1` and `c2` the temperature gap, and `c` is
/// the entropy decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c: f64,
}

impl DecayConstants {
    pub fn new(sys: &HomogeneousSystem) -> Self {
        let p = &sys.params;
        let (n1, n2) = (sys.n1, sys.n2);
        let nu = p.nu12;
        let eps = p.eps();
        let g = p.gamma / p.m1;
        let a = n2 / p.epst1;
        let b = eps / p.epst2 * n1;
        Self {
            c1: (1.0 - p.alpha) * nu * (a + b),
            c2: nu * (a * ((1.0 - p.delta).powi(2) + g) - b * (1.0 - p.delta.powi(2) - g)),
            c3: 2.0 * nu * (1.0 - p.delta) * (a + b * p.m1 / p.m2),
            c: (nu * n1 / p.eps1 + nu * n2 / p.epst1).min(nu * n2 / p.eps2 + nu * n1 / p.epst2),
        }
    }
}

/// Mean velocities and temperatures of both species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub u1: f64,
    pub u2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl MomentState {
    pub fn velocity_gap_sq(&self) -> f64 {
        (self.u1 - self.u2).powi(2)
    }

    pub fn temperature_gap(&self) -> f64 {
        self.t1 - self.t2
    }

    fn axpy(&self, h: f64, d: &MomentState) -> MomentState {
        MomentState {
            u1: self.u1 + h * d.u1,
            u2: self.u2 + h * d.u2,
            t1: self.t1 + h * d.t1,
            t2: self.t2 + h * d.t2,
        }
    }
}

fn moment_rhs(s: &MomentState, sys: &HomogeneousSystem) -> MomentState {
    let p = &sys.params;
    let mr = p.mass_ratio();
    let m1 = SpeciesMoments::new(sys.n1, s.u1, s.t1);
    let m2 = SpeciesMoments::new(sys.n2, s.u2, s.t2);
    let e = exchange_quantities(&m1, &m2, p);
    let k1 = p.nu12 * sys.n2 / p.epst1;
    let k2 = p.nu12 * sys.n1 / p.epst2;
    MomentState {
        u1: k1 * (e.u12 - s.u1),
        u2: k2 * (e.u21 - s.u2),
        t1: k1 * (e.t12 + (e.u12 - s.u1).powi(2) - s.t1),
        t2: k2 * (e.t21 + mr * (e.u21 - s.u2).powi(2) - s.t2),
    }
}

/// One classical RK4 step of the moment equations.
pub fn moment_ode_step(s: &MomentState, sys: &HomogeneousSystem, dt: f64) -> MomentState {
    let k1 = moment_rhs(s, sys);
    let k2 = moment_rhs(&s.axpy(0.5 * dt, &k1), sys);
    let k3 = moment_rhs(&s.axpy(0.5 * dt, &k2), sys);
    let k4 = moment_rhs(&s.axpy(dt, &k3), sys);
    MomentState {
        u1: s.u1 + dt / 6.0 * (k1.u1 + 2.0 * k2.u1 + 2.0 * k3.u1 + k4.u1),
        u2: s.u2 + dt / 6.0 * (k1.u2 + 2.0 * k2.u2 + 2.0 * k3.u2 + k4.u2),
        t1: s.t1 + dt / 6.0 * (k1.t1 + 2.0 * k2.t1 + 2.0 * k3.t1 + k4.t1),
        t2: s.t2 + dt / 6.0 * (k1.t2 + 2.0 * k2.t2 + 2.0 * k3.t2 + k4.t2),
    }
}

/// Integrates the moment ODEs, returning the state after every step
/// (including the initial one).
pub fn moment_trajectory(
    init: &MomentState,
    sys: &HomogeneousSystem,
    dt: f64,
    steps: usize,
) -> Vec<MomentState> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = *init;
    out.push(s);
    for _ in 0..steps {
        s = moment_ode_step(&s, sys, dt);
        out.push(s);
    }
    out
}

/// `|u1 - u2|^2 (t) = exp(-c3 t) |u1(0) - u2(0)|^2`.
pub fn analytic_velocity_gap(t: f64, init: &MomentState, sys: &HomogeneousSystem) -> f64 {
    let k = DecayConstants::new(sys);
    (-k.c3 * t).exp() * init.velocity_gap_sq()
}

/// Closed-form `T1 - T2` at time `t`, including the `c1 = c3` limit.
pub fn analytic_temperature_gap(t: f64, init: &MomentState, sys: &HomogeneousSystem) -> f64 {
    let k = DecayConstants::new(sys);
    let d = k.c1 - k.c3;
    let decay1 = (-k.c1 * t).exp();
    // e^{-c1 t} (e^{d t} - 1) / d
    let kernel = if d.abs() < 1e-12 {
        t * decay1
    } else if d * t < 700.0 {
        decay1 * (d * t).exp_m1() / d
    } else {
        ((-k.c3 * t).exp() - decay1) / d
    };
    decay1 * init.temperature_gap() + k.c2 * kernel * init.velocity_gap_sq()
}

/// `H(f|M) = int f ln(f/M) dv` by trapezoid quadrature, with `0 ln 0 = 0`.
///
/// Samples below `-1e-14` are rejected; smaller negatives are treated as 0.
pub fn relative_entropy(
    f: &[f64],
    m: &SpeciesMoments,
    mass_ratio: f64,
    vg: &VelocityGrid,
) -> Result<f64> {
    let max = Maxwellian::new(m, mass_ratio)?;
    let mut h = 0.0;
    for (j, ((&fj, &v), &w)) in f.iter().zip(vg.nodes()).zip(vg.weights()).enumerate() {
        if fj < -1e-14 {
            return Err(Error::NegativeDistribution { index: j, value: fj });
        }
        if fj <= 0.0 {
            continue;
        }
        h += w * fj * (fj.ln() - max.ln_eval(v));
    }
    Ok(h)
}

/// Diagnostics of the kinetic homogeneous solver at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticSample {
    pub t: f64,
    pub species1: SpeciesMoments,
    pub species2: SpeciesMoments,
    /// `||f_k - M_k||_{L^1}`.
    pub l1_gap: [f64; 2],
    /// `H(f_k | M_k)`.
    pub entropy: [f64; 2],
}

impl KineticSample {
    pub fn total_entropy(&self) -> f64 {
        self.entropy[0] + self.entropy[1]
    }

    pub fn total_l1_gap(&self) -> f64 {
        self.l1_gap[0] + self.l1_gap[1]
    }

    pub fn moment_state(&self) -> MomentState {
        MomentState {
            u1: self.species1.u,
            u2: self.species2.u,
            t1: self.species1.t,
            t2: self.species2.t,
        }
    }
}

pub fn kinetic_sample(
    t: f64,
    f1: &[f64],
    f2: &[f64],
    p: &MixtureParams,
    vg: &VelocityGrid,
) -> Result<KineticSample> {
    let mr = p.mass_ratio();
    let s1 = primitives(grid_moments(vg, f1), 1.0);
    let s2 = primitives(grid_moments(vg, f2), mr);
    let m1 = Maxwellian::new(&s1, 1.0)?.sample(vg.nodes());
    let m2 = Maxwellian::new(&s2, mr)?.sample(vg.nodes());
    Ok(KineticSample {
        t,
        species1: s1,
        species2: s2,
        l1_gap: [l1_distance(vg, f1, &m1), l1_distance(vg, f2, &m2)],
        entropy: [
            relative_entropy(f1, &s1, 1.0, vg)?,
            relative_entropy(f2, &s2, mr, vg)?,
        ],
    })
}

/// Integrates the space-homogeneous BGK system directly on the velocity grid.
///
/// Each step relaxes both distributions exactly against Maxwellians frozen
/// at the start of the step. Samples are emitted at `t = 0`, every
/// `output_every` steps, and at the final step.
pub fn kinetic_homogeneous_run(
    f1: &[f64],
    f2: &[f64],
    p: &MixtureParams,
    vg: &VelocityGrid,
    dt: f64,
    t_end: f64,
    output_every: usize,
) -> Result<Vec<KineticSample>> {
    let mut f1 = f1.to_vec();
    let mut f2 = f2.to_vec();
    let steps = (t_end / dt).round() as usize;
    let every = output_every.max(1);
    let mut out = vec![kinetic_sample(0.0, &f1, &f2, p, vg)?];
    for step in 1..=steps {
        relax_line(vg, p, &mut f1, &mut f2, dt, 0)
            .map_err(|e| Error::Step { step, source: Box::new(e) })?;
        if step % every == 0 || step == steps {
            out.push(kinetic_sample(step as f64 * dt, &f1, &f2, p, vg)?);
        }
    }
    Ok(out)
}
