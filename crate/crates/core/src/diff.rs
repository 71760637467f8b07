//! Central-difference derivatives.
//!
//! Two step policies are used: field checks take `h = 1e-5 · max(1, |x|)` for
//! the whole point, while bracket and residual evaluation take
//! `h = ε^(1/3) · max(1, |x_i|)` per coordinate.

use num_traits::Float;

use crate::error::Result;
use crate::vec3::{Mat3, Vec3};

/// Relative step for field sanity checks.
pub const FIELD_STEP: f64 = 1e-5;

/// Step policy for a central difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    /// `h = base · max(1, |x|)`, the same for every coordinate.
    PointScaled(f64),
    /// `h = ε^(1/3) · max(1, |x_i|)` for coordinate `i`.
    CubeRootEps,
}

impl Step {
    pub fn field() -> Self {
        Step::PointScaled(FIELD_STEP)
    }

    pub(crate) fn size(self, point_norm: f64, coordinate: f64) -> f64 {
        match self {
            Step::PointScaled(base) => base * point_norm.max(1.0),
            Step::CubeRootEps => cube_root_eps() * coordinate.abs().max(1.0),
        }
    }
}

pub(crate) fn cube_root_eps() -> f64 {
    f64::EPSILON.cbrt()
}

/// Central-difference step for a scalar coordinate, `ε^(1/3) · max(1, |c|)`.
pub fn coordinate_step(c: f64) -> f64 {
    Step::CubeRootEps.size(0.0, c)
}

/// Central-difference gradient of a scalar field.
pub fn gradient<F>(f: F, x: Vec3, step: Step) -> Result<Vec3>
where
    F: Fn(Vec3) -> Result<f64>,
{
    let norm = x.norm();
    let mut g = Vec3::ZERO;
    for i in 0..3 {
        let h = step.size(norm, x[i]);
        let mut xp = x;
        let mut xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp)? - f(xm)?) / (xp[i] - xm[i]);
    }
    Ok(g)
}

/// Central-difference Jacobian `J[a][i] = ∂f_a/∂x_i` of a vector field.
pub fn jacobian<F>(f: F, x: Vec3, step: Step) -> Result<Mat3>
where
    F: Fn(Vec3) -> Result<Vec3>,
{
    let norm = x.norm();
    let mut cols = [Vec3::ZERO; 3];
    for (i, col) in cols.iter_mut().enumerate() {
        let h = step.size(norm, x[i]);
        let mut xp = x;
        let mut xm = x;
        xp[i] += h;
        xm[i] -= h;
        *col = (f(xp)? - f(xm)?) * (1.0 / (xp[i] - xm[i]));
    }
    Ok(Mat3::from_columns(cols[0], cols[1], cols[2]))
}

/// Central-difference divergence of a vector field.
pub fn divergence<F>(f: F, x: Vec3, step: Step) -> Result<f64>
where
    F: Fn(Vec3) -> Result<Vec3>,
{
    Ok(jacobian(f, x, step)?.trace())
}
