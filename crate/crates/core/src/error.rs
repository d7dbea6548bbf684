use thiserror::Error;

/// Errors raised by chart, kinematic, constitutive and universality routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} lies outside the valid region of the {chart} chart")]
    SingularPoint {
        chart: &'static str,
        point: [f64; 3],
    },

    #[error("finite-difference stencil around {point:?} leaves the admissible region")]
    Stencil { point: [f64; 3] },

    #[error("analytic backend requested but {0} does not supply partial derivatives")]
    Capability(&'static str),

    #[error("singular chart transition or metric at {point:?}")]
    Singularity { point: [f64; 3] },

    #[error("degenerate deformation: Jacobian {jacobian:e} at {point:?} is below the floor")]
    DegenerateDeformation { point: [f64; 3], jacobian: f64 },

    #[error("inadmissible residual-stress profile: {0}")]
    InadmissibleProfile(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("response set mode mismatch: expected {expected}, found {found}")]
    Mode {
        expected: &'static str,
        found: &'static str,
    },

    #[error("coverage incomplete for {check}: {skipped} of {total} points skipped")]
    Coverage {
        check: String,
        skipped: usize,
        total: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn pt(x: &nalgebra::Vector3<f64>) -> [f64; 3] {
    [x[0], x[1], x[2]]
}
