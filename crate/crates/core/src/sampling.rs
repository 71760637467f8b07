//! Seeded random sampling of admissible points and phase-space states.
//!
//! Positions are uniform in the cube `[−x_box, x_box]³`, momenta uniform in
//! `[−p_box, p_box]³`; points too close to a model's singular locus are
//! rejected. Any [`RngCore`] works; the CLI uses ChaCha8 seeded from a `u64`.

use num_traits::Float;
use rand_core::RngCore;

use crate::dynamics::PhaseState;
use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::vec3::Vec3;

const MAX_REJECTIONS: usize = 100_000;

/// Uniform double in `[0, 1)` from the top 53 bits of one `u64` draw.
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit_f64(rng)
}

pub fn uniform_vec3<R: RngCore + ?Sized>(rng: &mut R, half: f64) -> Vec3 {
    Vec3::new(
        uniform(rng, -half, half),
        uniform(rng, -half, half),
        uniform(rng, -half, half),
    )
}

/// Distance-like measure from `x` to the model's singular locus; infinite when
/// the model is regular everywhere.
pub fn singular_clearance(model: &FieldModel, x: Vec3) -> f64 {
    match model {
        FieldModel::Monopole { .. } => {
            let r = x.norm();
            if x.x3 < 0.0 {
                r.min(x.x1.hypot(x.x2))
            } else {
                r
            }
        }
        FieldModel::Cylindrical { f2, .. } if f2.value(0.0) != 0.0 => x.x1.hypot(x.x2),
        _ => f64::INFINITY,
    }
}

/// Box sampler with rejection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSampler {
    pub x_box: f64,
    pub p_box: f64,
    /// Reject states with `|p₁|` below this (keeps `Bx/p₁` moderate).
    pub min_abs_p1: f64,
    /// Minimum [`singular_clearance`].
    pub clearance: f64,
    /// Optional radial shell `[r_min, r_max]` for positions.
    pub shell: Option<(f64, f64)>,
}

impl Default for StateSampler {
    fn default() -> Self {
        Self {
            x_box: 2.0,
            p_box: 2.0,
            min_abs_p1: 0.0,
            clearance: 0.25,
            shell: None,
        }
    }
}

impl StateSampler {
    pub fn with_min_abs_p1(mut self, v: f64) -> Self {
        self.min_abs_p1 = v;
        self
    }

    pub fn with_shell(mut self, r_min: f64, r_max: f64) -> Self {
        self.shell = Some((r_min, r_max));
        self.x_box = self.x_box.max(r_max);
        self
    }

    pub fn point<R: RngCore + ?Sized>(&self, rng: &mut R, model: &FieldModel) -> Result<Vec3> {
        for _ in 0..MAX_REJECTIONS {
            let x = uniform_vec3(rng, self.x_box);
            if let Some((lo, hi)) = self.shell {
                let r = x.norm();
                if r < lo || r > hi {
                    continue;
                }
            }
            if singular_clearance(model, x) >= self.clearance && model.check_domain(x).is_ok() {
                return Ok(x);
            }
        }
        Err(Error::InvalidInput("sampler rejected every candidate point"))
    }

    pub fn state<R: RngCore + ?Sized>(&self, rng: &mut R, model: &FieldModel) -> Result<PhaseState> {
        let x = self.point(rng, model)?;
        for _ in 0..MAX_REJECTIONS {
            let p = uniform_vec3(rng, self.p_box);
            if p.x1.abs() >= self.min_abs_p1 {
                return Ok(PhaseState::new(x, p));
            }
        }
        Err(Error::InvalidInput("sampler rejected every candidate momentum"))
    }

    pub fn points<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        model: &FieldModel,
        n: usize,
    ) -> Result<alloc::vec::Vec<Vec3>> {
        (0..n).map(|_| self.point(rng, model)).collect()
    }

    pub fn states<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        model: &FieldModel,
        n: usize,
    ) -> Result<alloc::vec::Vec<PhaseState>> {
        (0..n).map(|_| self.state(rng, model)).collect()
    }
}
