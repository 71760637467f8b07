use core::fmt;

use crate::vec3::Vec3;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by field evaluation, integration, closed forms and eigensolvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The point lies on (or too close to) a singular locus of the field model.
    Domain { point: Vec3, reason: &'static str },
    /// Adaptive step size fell below the representable minimum.
    StepFailure { t: f64, step: f64 },
    /// A momentum that must be nonzero (or positive) is not.
    DegenerateMomentum { value: f64 },
    /// The pendulum constant sits on the separatrix, where the elliptic formulas degenerate.
    SeparatrixRegime { kappa: f64 },
    /// The pendulum constant is at (or below) the stable equilibrium.
    DegenerateKappa { kappa: f64 },
    /// No catalogue of integrals exists for this model.
    UnsupportedModel(&'static str),
    /// The quantum box is too small or too coarse for the requested levels.
    GridTooSmall { boundary_amplitude: f64 },
    /// Fewer bound states than requested.
    NoBoundStates { requested: usize, found: usize },
    /// Caller-supplied argument outside the documented range.
    InvalidInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { point, reason } => write!(
                f,
                "point ({}, {}, {}) outside the model domain: {reason}",
                point.x1, point.x2, point.x3
            ),
            Error::StepFailure { t, step } => {
                write!(f, "step size underflow at t = {t} (h = {step:e})")
            }
            Error::DegenerateMomentum { value } => {
                write!(f, "degenerate momentum ({value}); expected a nonzero value")
            }
            Error::SeparatrixRegime { kappa } => write!(
                f,
                "kappa = {kappa} lies on the separatrix; integrate the reduced equation numerically"
            ),
            Error::DegenerateKappa { kappa } => {
                write!(f, "kappa = {kappa} is at or below the equilibrium value -1")
            }
            Error::UnsupportedModel(what) => write!(f, "unsupported model: {what}"),
            Error::GridTooSmall { boundary_amplitude } => write!(
                f,
                "grid too small: ground state amplitude {boundary_amplitude:e} at the boundary"
            ),
            Error::NoBoundStates { requested, found } => {
                write!(f, "requested {requested} bound states, found {found}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
