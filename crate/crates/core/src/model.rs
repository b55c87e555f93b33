//! Dimensionless two-species BGK model: parameters, Maxwellians and the
//! mixture (cross-species) velocities and temperatures.
//!
//! Everything here lives in the dimensionless frame where species 1 is the
//! reference mass. A Maxwellian of species `k` has variance `T_k / mr_k`
//! with `mr_k = m_k / m_1`.

use std::f64::consts::PI;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Species label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    One,
    Two,
}

impl Species {
    pub fn index(self) -> usize {
        match self {
            Species::One => 0,
            Species::Two => 1,
        }
    }

    pub fn partner(self) -> Species {
        match self {
            Species::One => Species::Two,
            Species::Two => Species::One,
        }
    }
}

/// Masses, exchange parameters, collision frequency and Knudsen numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    pub m1: f64,
    pub m2: f64,
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub nu12: f64,
    /// Intraspecies Knudsen number of species 1.
    pub eps1: f64,
    /// Interspecies Knudsen number of species 1.
    pub epst1: f64,
    pub eps2: f64,
    pub epst2: f64,
}

impl MixtureParams {
    /// Interspecies frequency ratio, `epst2 / epst1`.
    #[inline]
    pub fn eps(&self) -> f64 {
        self.epst2 / self.epst1
    }

    /// `m2 / m1`.
    #[inline]
    pub fn mass_ratio(&self) -> f64 {
        self.m2 / self.m1
    }

    /// Mass ratio `m_k / m1` of a species.
    #[inline]
    pub fn mass_ratio_of(&self, s: Species) -> f64 {
        match s {
            Species::One => 1.0,
            Species::Two => self.mass_ratio(),
        }
    }

    pub fn beta1(&self) -> f64 {
        self.epst1 / self.eps1
    }

    pub fn beta2(&self) -> f64 {
        self.eps() * self.epst2 / self.eps2
    }

    /// Largest admissible `gamma` for the current `delta`.
    pub fn gamma_max(&self) -> f64 {
        let r = self.eps() * self.m1 / self.m2;
        self.m1 * (1.0 - self.delta) * ((1.0 + r) * self.delta + 1.0 - r)
    }

    /// Smallest admissible `delta`.
    pub fn delta_min(&self) -> f64 {
        let r = self.eps() * self.m1 / self.m2;
        (r - 1.0) / (1.0 + r)
    }

    /// Knudsen-number setting shared by all four relaxation terms.
    pub fn with_knudsen(mut self, eps1: f64, epst1: f64, eps2: f64, epst2: f64) -> Self {
        self.eps1 = eps1;
        self.epst1 = epst1;
        self.eps2 = eps2;
        self.epst2 = epst2;
        self
    }

    /// `delta = alpha = 0.5`, `gamma = 0.1`, `nu12 = 1`, all Knudsen numbers 1.
    pub fn standard(m1: f64, m2: f64) -> Self {
        Self {
            m1,
            m2,
            delta: 0.5,
            alpha: 0.5,
            gamma: 0.1,
            nu12: 1.0,
            eps1: 1.0,
            epst1: 1.0,
            eps2: 1.0,
            epst2: 1.0,
        }
    }
}

/// Parameters that passed [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedParams(MixtureParams);

impl ValidatedParams {
    pub fn into_inner(self) -> MixtureParams {
        self.0
    }
}

impl Deref for ValidatedParams {
    type Target = MixtureParams;

    fn deref(&self) -> &MixtureParams {
        &self.0
    }
}

const BOUND_SLACK: f64 = 1e-12;

pub fn validate_params(p: MixtureParams) -> Result<ValidatedParams> {
    let positive = [
        ("m1", p.m1),
        ("m2", p.m2),
        ("nu12", p.nu12),
        ("eps1", p.eps1),
        ("epst1", p.epst1),
        ("eps2", p.eps2),
        ("epst2", p.epst2),
    ];
    for (name, value) in positive {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::param(name, value, "must be strictly positive"));
        }
    }
    let eps = p.eps();
    if eps > 1.0 + BOUND_SLACK {
        return Err(Error::param(
            "eps",
            eps,
            "interspecies ratio epst2/epst1 exceeds 1; exchange the labels of species 1 and 2",
        ));
    }
    if !(0.0..=1.0).contains(&p.alpha) {
        return Err(Error::param("alpha", p.alpha, "must lie in [0, 1]"));
    }
    let dmin = p.delta_min();
    if !(p.delta >= dmin - BOUND_SLACK && p.delta <= 1.0 + BOUND_SLACK) {
        return Err(Error::param(
            "delta",
            p.delta,
            format!("must lie in [{dmin}, 1]"),
        ));
    }
    let gmax = p.gamma_max();
    if !(p.gamma >= 0.0 && p.gamma <= gmax + BOUND_SLACK) {
        return Err(Error::param(
            "gamma",
            p.gamma,
            format!("must lie in [0, {gmax}] for delta = {}", p.delta),
        ));
    }
    Ok(ValidatedParams(p))
}

/// Density, mean velocity and temperature of one species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesMoments {
    pub n: f64,
    pub u: f64,
    pub t: f64,
}

impl SpeciesMoments {
    pub const fn new(n: f64, u: f64, t: f64) -> Self {
        Self { n, u, t }
    }
}

/// Velocities and temperatures of the mixture Maxwellians `M12`, `M21`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeQuantities {
    pub u12: f64,
    pub t12: f64,
    pub u21: f64,
    pub t21: f64,
}

pub fn exchange_quantities(
    s1: &SpeciesMoments,
    s2: &SpeciesMoments,
    p: &MixtureParams,
) -> ExchangeQuantities {
    let eps = p.eps();
    let r = p.m1 / p.m2;
    let du2 = (s1.u - s2.u).powi(2);
    let mix = r * eps * (1.0 - p.delta);
    let u12 = p.delta * s1.u + (1.0 - p.delta) * s2.u;
    let t12 = p.alpha * s1.t + (1.0 - p.alpha) * s2.t + p.gamma / p.m1 * du2;
    let u21 = (1.0 - mix) * s2.u + mix * s1.u;
    let t21 = (1.0 - eps * (1.0 - p.alpha)) * s2.t
        + eps * (1.0 - p.alpha) * s1.t
        + (eps * (1.0 - p.delta) * (r * eps * (p.delta - 1.0) + p.delta + 1.0)
            - eps * p.gamma / p.m1)
            * du2;
    ExchangeQuantities { u12, t12, u21, t21 }
}

impl ExchangeQuantities {
    /// Target moments of `M12` (density of species 1).
    pub fn target_of_species1(&self, s1: &SpeciesMoments) -> SpeciesMoments {
        SpeciesMoments::new(s1.n, self.u12, self.t12)
    }

    /// Target moments of `M21` (density of species 2).
    pub fn target_of_species2(&self, s2: &SpeciesMoments) -> SpeciesMoments {
        SpeciesMoments::new(s2.n, self.u21, self.t21)
    }
}

/// Maxwellian with precomputed normalization; `var = T / mass_ratio`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maxwellian {
    pub n: f64,
    pub u: f64,
    pub var: f64,
    norm: f64,
}

impl Maxwellian {
    pub fn new(m: &SpeciesMoments, mass_ratio: f64) -> Result<Self> {
        if !(m.t > 0.0) {
            return Err(Error::NonPositiveTemperature(m.t));
        }
        let var = m.t / mass_ratio;
        Ok(Self {
            n: m.n,
            u: m.u,
            var,
            norm: m.n / (2.0 * PI * var).sqrt(),
        })
    }

    #[inline]
    pub fn eval(&self, v: f64) -> f64 {
        let c = v - self.u;
        self.norm * (-0.5 * c * c / self.var).exp()
    }

    /// `ln M(v)`, finite where `eval` underflows.
    #[inline]
    pub fn ln_eval(&self, v: f64) -> f64 {
        let c = v - self.u;
        self.norm.ln() - 0.5 * c * c / self.var
    }

    pub fn peak(&self) -> f64 {
        self.norm
    }

    pub fn sample(&self, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&v| self.eval(v)).collect()
    }
}

/// `n sqrt(mr / (2 pi T)) exp(-mr |v - u|^2 / (2T))`.
pub fn maxwellian(m: &SpeciesMoments, mass_ratio: f64, v: f64) -> Result<f64> {
    Ok(Maxwellian::new(m, mass_ratio)?.eval(v))
}

/// `(<M>, <v M>, <v^2 M>)` of a Maxwellian.
pub fn equilibrium_moment_vector(m: &SpeciesMoments, mass_ratio: f64) -> [f64; 3] {
    [m.n, m.n * m.u, m.n * (m.t / mass_ratio + m.u * m.u)]
}

/// `<v^3 M>`.
pub fn third_moment(m: &SpeciesMoments, mass_ratio: f64) -> f64 {
    m.n * m.u * (m.u * m.u + 3.0 * m.t / mass_ratio)
}
