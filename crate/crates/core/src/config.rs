//! Run configuration (JSON) and the initial-condition presets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::{validate_params, Maxwellian, MixtureParams, SpeciesMoments, ValidatedParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Particle scheme without transport.
    Homogeneous,
    /// Full micro-macro particle scheme.
    General,
    /// Discrete-velocity solver.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Lv")]
    pub lv: f64,
    #[serde(rename = "Nx")]
    pub nx: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Particles {
    #[serde(rename = "Np1")]
    pub np1: usize,
    #[serde(rename = "Np2")]
    pub np2: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Time {
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mixture {
    pub m1: f64,
    pub m2: f64,
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub nu12: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Knudsen {
    pub eps1: f64,
    pub epst1: f64,
    pub eps2: f64,
    pub epst2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    MaxwellianMaxwellian,
    #[serde(rename = "maxwellian-maxwellian-t1-0.08")]
    MaxwellianMaxwellianColdT1,
    V4Maxwellian,
    #[serde(rename = "v4-maxwellian-t2-5")]
    V4MaxwellianHotT2,
    CosinePerturbed,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::MaxwellianMaxwellian,
        Preset::MaxwellianMaxwellianColdT1,
        Preset::V4Maxwellian,
        Preset::V4MaxwellianHotT2,
        Preset::CosinePerturbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::MaxwellianMaxwellian => "maxwellian-maxwellian",
            Preset::MaxwellianMaxwellianColdT1 => "maxwellian-maxwellian-t1-0.08",
            Preset::V4Maxwellian => "v4-maxwellian",
            Preset::V4MaxwellianHotT2 => "v4-maxwellian-t2-5",
            Preset::CosinePerturbed => "cosine-perturbed",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::MaxwellianMaxwellian => {
                "two Maxwellians: n1=1 u1=0.5 T1=1, n2=1.2 u2=0.1 T2=0.1 (use m1=1, m2=1.5)"
            }
            Preset::MaxwellianMaxwellianColdT1 => "as maxwellian-maxwellian with T1=0.08",
            Preset::V4Maxwellian => "f1 = v^4 exp(-v^2/2)/(3 sqrt(2 pi)), f2 Maxwellian n2=1.2 u2=0.1 T2=0.1",
            Preset::V4MaxwellianHotT2 => "as v4-maxwellian with T2=5",
            Preset::CosinePerturbed => {
                "f2 = (1 + beta cos(x/2)) v^4 exp(-v^2/2)/(3 sqrt(2 pi)), f1 Maxwellian n1=1 u1=0.5 T1=1 (use m1=m2=1)"
            }
        }
    }

    /// Initial distribution of each species.
    pub fn profiles(self, beta: f64) -> [Profile; 2] {
        let jin2 = |t2| Profile::Maxwellian(SpeciesMoments::new(1.2, 0.1, t2));
        match self {
            Preset::MaxwellianMaxwellian => {
                [Profile::Maxwellian(SpeciesMoments::new(1.0, 0.5, 1.0)), jin2(0.1)]
            }
            Preset::MaxwellianMaxwellianColdT1 => {
                [Profile::Maxwellian(SpeciesMoments::new(1.0, 0.5, 0.08)), jin2(0.1)]
            }
            Preset::V4Maxwellian => [Profile::V4 { beta: 0.0 }, jin2(0.1)],
            Preset::V4MaxwellianHotT2 => [Profile::V4 { beta: 0.0 }, jin2(5.0)],
            Preset::CosinePerturbed => [
                Profile::Maxwellian(SpeciesMoments::new(1.0, 0.5, 1.0)),
                Profile::V4 { beta },
            ],
        }
    }
}

/// Initial distribution of one species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// Uniform Maxwellian with the given moments.
    Maxwellian(SpeciesMoments),
    /// `(1 + beta cos(x/2)) v^4 exp(-v^2/2) / (3 sqrt(2 pi))`.
    V4 { beta: f64 },
}

impl Profile {
    pub fn eval(&self, x: f64, v: f64, mass_ratio: f64) -> f64 {
        match *self {
            Profile::Maxwellian(m) => Maxwellian::new(&m, mass_ratio).map_or(0.0, |mx| mx.eval(v)),
            Profile::V4 { beta } => {
                (1.0 + beta * (0.5 * x).cos()) * v.powi(4) * (-0.5 * v * v).exp() / (3.0 * (2.0 * PI).sqrt())
            }
        }
    }

    /// Exact `(n, u, T)` at `x`. The `v^4` profile has `<v^2> = 5` per unit
    /// density, so `T = 5 mr` and the pressure `n T` carries the cosine.
    pub fn moments(&self, x: f64, mass_ratio: f64) -> SpeciesMoments {
        match *self {
            Profile::Maxwellian(m) => m,
            Profile::V4 { beta } => SpeciesMoments::new(1.0 + beta * (0.5 * x).cos(), 0.0, 5.0 * mass_ratio),
        }
    }

    /// `f - M` at `(x, v)`.
    pub fn remainder(&self, x: f64, v: f64, mass_ratio: f64) -> f64 {
        match self {
            Profile::Maxwellian(_) => 0.0,
            Profile::V4 { .. } => {
                let m = self.moments(x, mass_ratio);
                self.eval(x, v, mass_ratio) - Maxwellian::new(&m, mass_ratio).map_or(0.0, |mx| mx.eval(v))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Init {
    pub preset: Preset,
    #[serde(default)]
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub domain: Domain,
    pub particles: Particles,
    pub time: Time,
    pub mixture: Mixture,
    pub knudsen: Knudsen,
    pub init: Init,
}

fn config_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

impl RunConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let field = msg
                .split('`')
                .nth(1)
                .map(str::to_owned)
                .unwrap_or_else(|| "document".into());
            Error::Config { field, message: msg }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.params()?;
        let t = &self.time;
        if !(t.dt > 0.0 && t.dt.is_finite()) {
            return Err(config_err("time.dt", format!("must be positive, got {}", t.dt)));
        }
        if !(t.t_end >= 0.0 && t.t_end.is_finite()) {
            return Err(config_err("time.t_end", format!("must be non-negative, got {}", t.t_end)));
        }
        if t.output_every == 0 {
            return Err(config_err("time.output_every", "must be at least 1"));
        }
        if self.mode != Mode::Reference && (self.particles.np1 == 0 || self.particles.np2 == 0) {
            return Err(config_err("particles", "Np1 and Np2 must be positive"));
        }
        if !self.init.beta.is_finite() || self.init.beta.abs() >= 1.0 {
            return Err(config_err("init.beta", "need |beta| < 1 for a positive density"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let d = &self.domain;
        GridSpec::new(d.lx, d.nx, d.lv, d.nv)
            .map_err(|e| config_err("domain", e.to_string()))
    }

    pub fn mixture_params(&self) -> MixtureParams {
        let m = &self.mixture;
        let k = &self.knudsen;
        MixtureParams {
            m1: m.m1,
            m2: m.m2,
            delta: m.delta,
            alpha: m.alpha,
            gamma: m.gamma,
            nu12: m.nu12,
            eps1: k.eps1,
            epst1: k.epst1,
            eps2: k.eps2,
            epst2: k.epst2,
        }
    }

    pub fn params(&self) -> Result<ValidatedParams> {
        validate_params(self.mixture_params())
    }

    pub fn steps(&self) -> usize {
        (self.time.t_end / self.time.dt).round() as usize
    }

    pub fn profiles(&self) -> [Profile; 2] {
        self.init.preset.profiles(self.init.beta)
    }

    /// Defaults of the experiments for a preset: `4 pi x 20` domain,
    /// `delta = alpha = 1/2`, `gamma = 0.1`, unit Knudsen numbers.
    pub fn preset_default(preset: Preset) -> Self {
        let general = preset == Preset::CosinePerturbed;
        RunConfig {
            mode: if general { Mode::General } else { Mode::Homogeneous },
            domain: Domain { lx: 4.0 * PI, lv: 20.0, nx: if general { 128 } else { 1 }, nv: 64 },
            particles: if general {
                Particles { np1: 500_000, np2: 500_000, seed: 1 }
            } else {
                Particles { np1: 10_000, np2: 10_000, seed: 1 }
            },
            time: if general {
                Time { dt: 1e-2, t_end: 6.0, output_every: 10 }
            } else {
                Time { dt: 1e-4, t_end: 0.3, output_every: 100 }
            },
            mixture: Mixture {
                m1: 1.0,
                m2: if general { 1.0 } else { 1.5 },
                delta: 0.5,
                alpha: 0.5,
                gamma: 0.1,
                nu12: 1.0,
            },
            knudsen: Knudsen { eps1: 1.0, epst1: 1.0, eps2: 1.0, epst2: 1.0 },
            init: Init { preset, beta: if general { 0.1 } else { 0.0 } },
        }
    }
}
