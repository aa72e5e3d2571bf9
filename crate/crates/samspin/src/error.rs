//! Error type shared by all modules.

/// Errors produced by the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates its documented invariant.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// Geometry too close to the 1/r⁵ singularity of the coupling kernel.
    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    /// A text input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Spin-population weights do not sum to one.
    #[error("spin density weights must sum to 1 within 1e-6 (got {sum})")]
    WeightSum { sum: f64 },

    /// Two transition frequencies are too close to address separately.
    #[error(
        "transitions {first} and {second} are not resolvable: \
         |{first_freq} - {second_freq}| rad/s is within relative tolerance {tolerance}"
    )]
    UnresolvableTransitions {
        first: &'static str,
        second: &'static str,
        first_freq: f64,
        second_freq: f64,
        tolerance: f64,
    },

    /// An rf frequency matched zero or several transitions.
    #[error("ambiguous resonance: rf frequency {frequency} rad/s matches {matches} transitions")]
    AmbiguousResonance { frequency: f64, matches: usize },

    /// A pulse matched two transitions that share a basis state, so the
    /// independent two-level rotations are not defined.
    #[error("pulse drives overlapping transitions {first} and {second} (shared basis state)")]
    OverlappingResonances {
        first: &'static str,
        second: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
