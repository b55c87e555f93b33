//! Discrete-velocity helpers shared by the homogeneous kinetic solver and
//! the phase-space reference solver: grid moments, renormalized discrete
//! Maxwellians and the exact relaxation step for one velocity line.

use crate::error::{Error, Result};
use crate::grid::VelocityGrid;
use crate::linalg::solve3;
use crate::model::{exchange_quantities, Maxwellian, MixtureParams, SpeciesMoments};

/// `(<f>, <v f>, <v^2 f>)` by trapezoid quadrature.
pub fn grid_moments(vg: &VelocityGrid, f: &[f64]) -> [f64; 3] {
    let mut m = [0.0; 3];
    for ((&fj, &v), &w) in f.iter().zip(vg.nodes()).zip(vg.weights()) {
        let fw = fj * w;
        m[0] += fw;
        m[1] += fw * v;
        m[2] += fw * v * v;
    }
    m
}

/// `(n, u, T)` from `(n, n u, <v^2 f>)`; `T = (E/n - u^2) mr`.
pub fn primitives(raw: [f64; 3], mass_ratio: f64) -> SpeciesMoments {
    let n = raw[0];
    let u = raw[1] / n;
    SpeciesMoments::new(n, u, (raw[2] / n - u * u) * mass_ratio)
}

/// Maxwellian sampled on the grid and corrected by a quadratic factor so
/// that its trapezoid moments equal those of `target` exactly.
pub fn discrete_maxwellian(
    vg: &VelocityGrid,
    target: &SpeciesMoments,
    mass_ratio: f64,
) -> Result<Vec<f64>> {
    let m = Maxwellian::new(target, mass_ratio)?;
    let mut samples = m.sample(vg.nodes());
    if target.n == 0.0 {
        return Ok(samples);
    }
    let s = m.var.sqrt();
    // work in c = (v - u)/s, where the exact moments are (n, 0, n)
    let mut gram = [[0.0; 3]; 3];
    let mut have = [0.0; 3];
    for ((&mj, &v), &w) in samples.iter().zip(vg.nodes()).zip(vg.weights()) {
        let c = (v - m.u) / s;
        let basis = [1.0, c, c * c];
        for i in 0..3 {
            have[i] += w * mj * basis[i];
            for k in 0..3 {
                gram[i][k] += w * mj * basis[i] * basis[k];
            }
        }
    }
    let want = [target.n, 0.0, target.n];
    let rhs = [want[0] - have[0], want[1] - have[1], want[2] - have[2]];
    let d = solve3(gram, rhs, 1e-14).ok_or(Error::NonPositiveTemperature(target.t))?;
    for (mj, &v) in samples.iter_mut().zip(vg.nodes()) {
        let c = (v - m.u) / s;
        *mj *= 1.0 + d[0] + d[1] * c + d[2] * c * c;
    }
    Ok(samples)
}

/// `||f - g||_{L^1}` by trapezoid quadrature.
pub fn l1_distance(vg: &VelocityGrid, f: &[f64], g: &[f64]) -> f64 {
    f.iter()
        .zip(g)
        .zip(vg.weights())
        .map(|((a, b), w)| (a - b).abs() * w)
        .sum()
}

fn check_state(m: &SpeciesMoments, species: usize, cell: usize) -> Result<()> {
    if !(m.n > 0.0 && m.t > 0.0) {
        return Err(Error::Positivity {
            species,
            cell,
            density: m.n,
            temperature: m.t,
        });
    }
    Ok(())
}

/// `(1 - e^{-lambda dt}) / lambda`, continuous at `lambda = 0`.
#[inline]
pub fn relaxation_weight(lambda: f64, dt: f64) -> f64 {
    if lambda == 0.0 {
        dt
    } else {
        -(-lambda * dt).exp_m1() / lambda
    }
}

/// Exponential integration over `dt` of both BGK relaxation terms on one
/// velocity line, with the Maxwellians frozen at the start-of-step moments.
/// Mass, total momentum and total energy are conserved to rounding.
pub fn relax_line(
    vg: &VelocityGrid,
    p: &MixtureParams,
    f1: &mut [f64],
    f2: &mut [f64],
    dt: f64,
    cell: usize,
) -> Result<()> {
    let mr = p.mass_ratio();
    let s1 = primitives(grid_moments(vg, f1), 1.0);
    let s2 = primitives(grid_moments(vg, f2), mr);
    check_state(&s1, 1, cell)?;
    check_state(&s2, 2, cell)?;
    let e = exchange_quantities(&s1, &s2, p);
    let (a1, b1) = (p.nu12 * s1.n / p.eps1, p.nu12 * s2.n / p.epst1);
    let (a2, b2) = (p.nu12 * s2.n / p.eps2, p.nu12 * s1.n / p.epst2);
    let phi1 = relaxation_weight(a1 + b1, dt);
    let phi2 = relaxation_weight(a2 + b2, dt);

    // The two species relax at different rates, so over a finite step the
    // cross terms only balance if the species-2 target is rescaled to
    // return exactly what species 1 gave away.
    let t1 = e.target_of_species1(&s1);
    let dp = phi1 * b1 * s1.n * (t1.u - s1.u);
    let de = phi1 * b1 * s1.n * (t1.t + t1.u * t1.u - s1.t - s1.u * s1.u);
    let k2 = phi2 * b2 * s2.n * mr;
    let u21 = s2.u - dp / k2;
    let t21 = mr * (s2.t / mr + s2.u * s2.u - de / k2 - u21 * u21);
    let t2 = SpeciesMoments::new(s2.n, u21, t21);
    check_state(&t2, 2, cell)?;

    let m1 = discrete_maxwellian(vg, &s1, 1.0)?;
    let m12 = discrete_maxwellian(vg, &t1, 1.0)?;
    let m2 = discrete_maxwellian(vg, &s2, mr)?;
    let m21 = discrete_maxwellian(vg, &t2, mr)?;

    let relax = |f: &mut [f64], own: &[f64], cross: &[f64], a: f64, b: f64| {
        let keep = (-(a + b) * dt).exp();
        let gain = relaxation_weight(a + b, dt);
        for j in 0..f.len() {
            f[j] = keep * f[j] + gain * (a * own[j] + b * cross[j]);
        }
    };
    relax(f1, &m1, &m12, a1, b1);
    relax(f2, &m2, &m21, a2, b2);
    Ok(())
}
