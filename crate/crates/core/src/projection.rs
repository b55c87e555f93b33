//! Orthogonal projection onto `span{M, vM, |v|^2 M}` in the `M^{-1}`
//! weighted inner product.
//!
//! A projection is kept as three coefficients in the orthonormal basis
//! together with the reference Maxwellian, and evaluated lazily:
//!
//! ```text
//! Pi(phi)(v) = [a0 + a1 c / sqrt(theta) + a2 (c^2 / (2 theta) - 1/2)] M(v)
//! ```
//!
//! with `c = v - u` and `theta = T / mr` the variance of `M`.

use crate::error::{Error, Result};
use crate::model::{ExchangeQuantities, Maxwellian, Species, SpeciesMoments};

/// `(<phi>, <(v-u) phi>, <(v-u)^2 phi>)` about the reference velocity.
pub type CentralMoments = [f64; 3];

/// Converts raw moments `(<phi>, <v phi>, <v^2 phi>)` to central ones.
pub fn central_from_raw(raw: [f64; 3], u: f64) -> CentralMoments {
    [
        raw[0],
        raw[1] - u * raw[0],
        raw[2] - 2.0 * u * raw[1] + u * u * raw[0],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub reference: Maxwellian,
}

impl ProjectionCoeffs {
    /// Coefficients `(p0, p1, p2)` with `Pi(phi)(v) = (p0 + p1 c + p2 c^2) M(v)`.
    pub fn polynomial(&self) -> [f64; 3] {
        let var = self.reference.var;
        [
            self.a0 - 0.5 * self.a2,
            self.a1 / var.sqrt(),
            0.5 * self.a2 / var,
        ]
    }

    #[inline]
    pub fn eval(&self, v: f64) -> f64 {
        let [p0, p1, p2] = self.polynomial();
        let c = v - self.reference.u;
        (p0 + c * (p1 + c * p2)) * self.reference.eval(v)
    }

    /// Central moments of the projected function, in closed form.
    pub fn central_moments(&self) -> CentralMoments {
        let n = self.reference.n;
        let var = self.reference.var;
        let [p0, p1, p2] = self.polynomial();
        [
            n * (p0 + p2 * var),
            n * p1 * var,
            n * (p0 * var + 3.0 * p2 * var * var),
        ]
    }
}

/// Projection of any `phi` given its central moments about `mk.u`.
pub fn project_from_moments(
    mk: &SpeciesMoments,
    mass_ratio: f64,
    phi: CentralMoments,
) -> Result<ProjectionCoeffs> {
    if !(mk.n > 0.0) {
        return Err(Error::DegenerateProjection(mk.n));
    }
    let reference = Maxwellian::new(mk, mass_ratio)?;
    let var = reference.var;
    Ok(ProjectionCoeffs {
        a0: phi[0] / mk.n,
        a1: phi[1] / (mk.n * var.sqrt()),
        a2: (phi[2] / var - phi[0]) / mk.n,
        reference,
    })
}

/// Closed-form projection of the mixture Maxwellian `M12` (species 1) or
/// `M21` (species 2) onto the span built on `mk`.
pub fn project_cross_maxwellian(
    mk: &SpeciesMoments,
    exch: &ExchangeQuantities,
    species: Species,
    mass_ratio: f64,
) -> Result<ProjectionCoeffs> {
    let reference = Maxwellian::new(mk, mass_ratio)?;
    let (u_cross, t_cross) = match species {
        Species::One => (exch.u12, exch.t12),
        Species::Two => (exch.u21, exch.t21),
    };
    let var = reference.var;
    let du = u_cross - mk.u;
    Ok(ProjectionCoeffs {
        a0: 1.0,
        a1: du / var.sqrt(),
        a2: t_cross / mk.t + du * du / var - 1.0,
        reference,
    })
}

/// `phi(v) - Pi(phi)(v)`.
#[inline]
pub fn complement_eval(phi_at_v: f64, coeffs: &ProjectionCoeffs, v: f64) -> f64 {
    phi_at_v - coeffs.eval(v)
}
