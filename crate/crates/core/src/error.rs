use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A mixture parameter lies outside its admissible range.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("non-positive temperature T = {0} (a Maxwellian needs T > 0)")]
    NonPositiveTemperature(f64),

    #[error("projection undefined for density n = {0}")]
    DegenerateProjection(f64),

    #[error("negative damping rate {0}")]
    NegativeDamping(f64),

    #[error("time step {dt} violates the CFL bound; need dt <= {required}")]
    Cfl { dt: f64, required: f64 },

    /// Positivity watchdog of the macroscopic solver.
    #[error("species {species} lost positivity in cell {cell}: n = {density}, T = {temperature}")]
    Positivity {
        species: usize,
        cell: usize,
        density: f64,
        temperature: f64,
    },

    #[error("distribution sample {value} at index {index} is negative")]
    NegativeDistribution { index: usize, value: f64 },

    #[error("step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason: reason.into(),
        }
    }
}
