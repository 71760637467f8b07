//! Closed-form classical solutions.
//!
//! Constant field: the helix, the nonpolynomial fifth integral and the
//! canonical `(x̃, p̃₁)` transformation. Helical field: with conserved
//! `(p₁, p₂) = p (cos(φ_p/β), sin(φ_p/β))` and `θ = (z + φ₀ − φ_p)/β`, the
//! motion in `z` is a pendulum
//!
//! ```text
//! ½ ż² = A p (cos θ + κ),      ζ = cos θ,      (dζ/dτ)² = −(ζ−1)(ζ+1)(ζ+κ)
//! ```
//!
//! with `τ = t √(2Ap)/|β|`, solved by Jacobi `sn` for `−1 < κ < 1`
//! (libration) and `κ > 1` (rotation).

mod elliptic;

pub use elliptic::{agm, carlson_rf, complete_k, incomplete_f, inverse_sn, jacobi_sn, jacobi_sn_cn_dn};

use core::f64::consts::{PI, SQRT_2};

use num_traits::Float;

use crate::dynamics::rk45::{self, Tolerances};
use crate::dynamics::PhaseState;
use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::vec3::Vec3;

/// Half-width of the excluded bands around `κ = 1` and `κ = −1`.
pub const KAPPA_DELTA: f64 = 1e-6;

/// Momenta below this magnitude are treated as zero.
pub const MOMENTUM_EPS: f64 = 1e-12;

/// Exact constant-field state at time `t` from `s0` (field `(B, 0, 0)`, gauge `A = (0, −Bz, 0)`).
pub fn helix_solution(b: f64, s0: &PhaseState, t: f64) -> PhaseState {
    let (x0, y0, z0) = (s0.x.x1, s0.x.x2, s0.x.x3);
    let (p1, p2, p3) = (s0.p.x1, s0.p.x2, s0.p.x3);
    let (s, c) = (b * t).sin_cos();
    let zc = z0 - p2 / b;
    PhaseState::new(
        Vec3::new(
            x0 + p1 * t,
            y0 - p3 / b + c * p3 / b - s * zc,
            p2 / b + s * p3 / b + c * zc,
        ),
        Vec3::new(p1, p2, c * p3 + s * (p2 - b * z0)),
    )
}

fn require_p1(p1: f64) -> Result<()> {
    if p1.abs() < MOMENTUM_EPS {
        Err(Error::DegenerateMomentum { value: p1 })
    } else {
        Ok(())
    }
}

/// `X₅ = (Bz − p₂) cos(Bx/p₁) − p₃ sin(Bx/p₁)`.
pub fn x5_integral(b: f64, s: &PhaseState) -> Result<f64> {
    require_p1(s.p.x1)?;
    let (sn, cs) = (b * s.x.x1 / s.p.x1).sin_cos();
    Ok((b * s.x.x3 - s.p.x2) * cs - s.p.x3 * sn)
}

/// `X₆ = {X₄, X₅} = (p₂ − Bz) sin(Bx/p₁) − p₃ cos(Bx/p₁)`.
pub fn x6_integral(b: f64, s: &PhaseState) -> Result<f64> {
    require_p1(s.p.x1)?;
    let (sn, cs) = (b * s.x.x1 / s.p.x1).sin_cos();
    Ok((s.p.x2 - b * s.x.x3) * sn - s.p.x3 * cs)
}

/// `(x̃, p̃₁) = (x/p₁, p₁²/2)` for `p₁ > 0`.
pub fn tilde_transform(s: &PhaseState) -> Result<(f64, f64)> {
    let p1 = s.p.x1;
    if !(p1 > 0.0) {
        return Err(Error::DegenerateMomentum { value: p1 });
    }
    Ok((s.x.x1 / p1, 0.5 * p1 * p1))
}

/// Pendulum regime of a helical-field trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `−1 < κ < 1`: `z` oscillates, motion bounded transverse to `(p₁, p₂, 0)`.
    Libration,
    /// `κ > 1`: `z` grows without bound.
    Rotation,
    /// `|κ − 1| ≤ δ`.
    Separatrix,
    /// `κ ≤ −1 + δ`: at or next to the stable equilibrium.
    Equilibrium,
}

/// Constants of the pendulum reduction for one helical-field trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumReduction {
    /// `|(p₁, p₂)|`.
    pub p: f64,
    /// Phase with `p₁ = p cos(φ_p/β)`, `p₂ = p sin(φ_p/β)`.
    pub phi_p: f64,
    pub kappa: f64,
    /// `ζ(τ)` has its reference zero of `sn` at `τ = τ₀`.
    pub tau0: f64,
    pub amplitude: f64,
    pub beta: f64,
    pub phi0: f64,
    pub z0: f64,
    /// `ż(0) = p₃(0)`.
    pub zdot0: f64,
    /// `θ(0) = (z₀ + φ₀ − φ_p)/β` reduced to `(−π, π]`.
    pub theta0: f64,
    /// `+1` or `−1`: direction in which `θ` moves through the `sn` parametrization.
    pub sigma: f64,
}

impl PendulumReduction {
    pub fn regime(&self) -> Regime {
        classify(self.kappa)
    }

    /// `dτ/dt = √(2Ap)/|β|`.
    pub fn tau_rate(&self) -> f64 {
        (2.0 * self.amplitude * self.p).sqrt() / self.beta.abs()
    }

    /// Sets `τ₀` directly, keeping the other constants (used for ODE-identity checks).
    pub fn with_tau0(mut self, tau0: f64) -> Self {
        self.tau0 = tau0;
        self
    }
}

pub fn classify(kappa: f64) -> Regime {
    if (kappa - 1.0).abs() <= KAPPA_DELTA {
        Regime::Separatrix
    } else if kappa <= -1.0 + KAPPA_DELTA {
        Regime::Equilibrium
    } else if kappa < 1.0 {
        Regime::Libration
    } else {
        Regime::Rotation
    }
}

fn wrap_angle(a: f64) -> f64 {
    let r = a - 2.0 * PI * (a / (2.0 * PI)).round();
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Libration: `u = (τ − τ₀)/√2`, modulus `√((κ+1)/2)`.
fn libration_modulus(kappa: f64) -> f64 {
    ((kappa + 1.0) / 2.0).sqrt()
}

/// Rotation: `u = ½√(κ+1)(τ − τ₀)`, modulus `√(2/(κ+1))`.
fn rotation_modulus(kappa: f64) -> f64 {
    (2.0 / (kappa + 1.0)).sqrt()
}

fn u_scale(kappa: f64) -> f64 {
    if kappa < 1.0 {
        1.0 / SQRT_2
    } else {
        0.5 * (kappa + 1.0).sqrt()
    }
}

/// Builds the reduction from an initial state in the helical model.
pub fn pendulum_reduction(model: &FieldModel, s0: &PhaseState) -> Result<PendulumReduction> {
    let FieldModel::HelicalB {
        amplitude,
        beta,
        phi0,
    } = *model
    else {
        return Err(Error::UnsupportedModel(
            "pendulum reduction needs the helical field",
        ));
    };
    let (p1, p2) = (s0.p.x1, s0.p.x2);
    let p = p1.hypot(p2);
    if p < MOMENTUM_EPS {
        return Err(Error::DegenerateMomentum { value: p });
    }
    let phi_p = beta * p2.atan2(p1);
    let z0 = s0.x.x3;
    let zdot0 = s0.p.x3;
    let theta0 = wrap_angle((z0 + phi0 - phi_p) / beta);
    let kappa = zdot0 * zdot0 / (2.0 * amplitude * p) - theta0.cos();
    let thetadot0 = zdot0 / beta;

    let mut red = PendulumReduction {
        p,
        phi_p,
        kappa,
        tau0: 0.0,
        amplitude,
        beta,
        phi0,
        z0,
        zdot0,
        theta0,
        sigma: 1.0,
    };
    let zeta0 = theta0.cos();
    match classify(kappa) {
        Regime::Libration => {
            let k = libration_modulus(kappa);
            let kk = complete_k(k);
            // ζ = (1−κ)/(1 − k² sn²) − 1
            let s2 = ((1.0 - (1.0 - kappa) / (zeta0 + 1.0)) / (k * k)).clamp(0.0, 1.0);
            let base = inverse_sn(s2.sqrt(), k);
            // θ(u) = sgn(cn u)·arccos ζ(u) decreases on [0, 2K], increases on [2K, 4K]
            let u0 = match (theta0 >= 0.0, thetadot0 <= 0.0) {
                (true, true) => base,
                (false, true) => 2.0 * kk - base,
                (false, false) => 2.0 * kk + base,
                (true, false) => 4.0 * kk - base,
            };
            red.tau0 = -u0 / u_scale(kappa);
        }
        Regime::Rotation => {
            let k = rotation_modulus(kappa);
            let kk = complete_k(k);
            // ζ = (1−κ²)/(2 sn² − κ − 1) − κ
            let s2 = (0.5 * (kappa + 1.0 + (1.0 - kappa * kappa) / (zeta0 + kappa))).clamp(0.0, 1.0);
            let base = inverse_sn(s2.sqrt(), k);
            red.sigma = if thetadot0 >= 0.0 { 1.0 } else { -1.0 };
            // φ = σ(θ − π) mod 2π runs over [0, π] on u ∈ [0, K] and [π, 2π] on [K, 2K]
            let phase = num_traits::Euclid::rem_euclid(&(red.sigma * (theta0 - PI)), &(2.0 * PI));
            let u0 = if phase <= PI { base } else { 2.0 * kk - base };
            red.tau0 = -u0 / u_scale(kappa);
        }
        Regime::Separatrix | Regime::Equilibrium => {}
    }
    Ok(red)
}

/// `ζ(τ)` from the `sn` formulas of the two regimes.
pub fn zeta_solution(red: &PendulumReduction, tau: f64) -> Result<f64> {
    let kappa = red.kappa;
    match classify(kappa) {
        Regime::Separatrix => Err(Error::SeparatrixRegime { kappa }),
        Regime::Equilibrium => Err(Error::DegenerateKappa { kappa }),
        Regime::Libration => {
            let sn = jacobi_sn((tau - red.tau0) / SQRT_2, libration_modulus(kappa));
            Ok(2.0 * (1.0 - kappa) / (2.0 - (kappa + 1.0) * sn * sn) - 1.0)
        }
        Regime::Rotation => {
            let sn = jacobi_sn(
                0.5 * (kappa + 1.0).sqrt() * (tau - red.tau0),
                rotation_modulus(kappa),
            );
            Ok((1.0 - kappa * kappa) / (2.0 * sn * sn - kappa - 1.0) - kappa)
        }
    }
}

/// Continuous `θ(τ)` (up to a multiple of 2π) from the `sn` parametrization.
fn theta_branch(red: &PendulumReduction, tau: f64) -> Result<f64> {
    let kappa = red.kappa;
    let u = u_scale(kappa) * (tau - red.tau0);
    let zeta = zeta_solution(red, tau)?.clamp(-1.0, 1.0);
    let ac = zeta.acos();
    match classify(kappa) {
        Regime::Libration => {
            let (_, cn, _) = jacobi_sn_cn_dn(u, libration_modulus(kappa));
            Ok(if cn >= 0.0 { ac } else { -ac })
        }
        Regime::Rotation => {
            let kk = complete_k(rotation_modulus(kappa));
            let n = (u / kk).floor();
            let within = if (n as i64).rem_euclid(2) == 0 {
                PI - ac
            } else {
                ac
            };
            Ok(PI + red.sigma * (n * PI + within))
        }
        _ => unreachable!("degenerate regimes rejected by zeta_solution"),
    }
}

/// Closed-form `z(t)` for the helical field.
///
/// Libration and rotation use the `sn` formulas with a continuous branch of
/// `arccos`; the separatrix and near-equilibrium bands integrate the pendulum
/// equation `θ̈ = −(Ap/β²) sin θ` numerically instead.
pub fn helical_z_of_t(red: &PendulumReduction, t: f64) -> Result<f64> {
    match red.regime() {
        Regime::Libration | Regime::Rotation => {
            let rate = red.tau_rate();
            let start = theta_branch(red, 0.0)?;
            let now = theta_branch(red, rate * t)?;
            Ok(red.z0 + red.beta * (now - start))
        }
        Regime::Separatrix | Regime::Equilibrium => {
            if t == 0.0 {
                return Ok(red.z0);
            }
            let w2 = red.amplitude * red.p / (red.beta * red.beta);
            let tol = Tolerances {
                rel_tol: 1e-12,
                abs_tol: 1e-12,
                max_step: 0.05,
            };
            let dir = t.signum();
            let y = rk45::solve(
                |_, y: &[f64; 2]| Ok([dir * y[1], -dir * w2 * y[0].sin()]),
                0.0,
                [red.theta0, red.zdot0 / red.beta],
                t.abs(),
                &tol,
                |_, _, _| Ok(()),
            )?;
            Ok(red.z0 + red.beta * (y[0] - red.theta0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_state(z0: f64, zdot0: f64) -> PhaseState {
        PhaseState::new(Vec3::new(0.08, 0.05, z0), Vec3::new(1.0, 0.0, zdot0))
    }

    #[test]
    fn helix_examples() {
        let s0 = PhaseState::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0));
        let s = helix_solution(1.0, &s0, PI / 2.0);
        assert!((s.x.x2 + 1.0).abs() < 1e-15);
        assert!((s.x.x3 - 1.0).abs() < 1e-15);
        assert!(s.p.x3.abs() < 1e-15);
        let g = PhaseState::new(Vec3::new(0.3, -1.0, 0.4), Vec3::new(0.7, 0.2, -0.5));
        assert_eq!(helix_solution(2.0, &g, 0.0), g);
        let period = helix_solution(2.0, &g, PI);
        let expect = Vec3::new(0.3 + 0.7 * PI, -1.0, 0.4);
        assert!((period.x - expect).max_abs() < 1e-14);
        assert!((period.p - g.p).max_abs() < 1e-15);
    }

    #[test]
    fn x5_on_plane_and_degenerate() {
        let s = PhaseState::new(Vec3::new(0.0, 1.0, 0.5), Vec3::new(1.0, 0.3, 0.2));
        assert!((x5_integral(2.0, &s).unwrap() - (1.0 - 0.3)).abs() < 1e-15);
        assert!((x6_integral(2.0, &s).unwrap() + 0.2).abs() < 1e-15);
        let bad = PhaseState::new(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0));
        assert!(matches!(
            x5_integral(1.0, &bad),
            Err(Error::DegenerateMomentum { .. })
        ));
    }

    #[test]
    fn tilde_examples() {
        let s = PhaseState::new(Vec3::new(4.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0));
        assert_eq!(tilde_transform(&s).unwrap(), (2.0, 2.0));
        let s1 = PhaseState::new(Vec3::new(0.7, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(tilde_transform(&s1).unwrap(), (0.7, 0.5));
        let neg = PhaseState::new(Vec3::ZERO, Vec3::new(-1.0, 0.0, 0.0));
        assert!(tilde_transform(&neg).is_err());
    }

    #[test]
    fn kappa_from_figure_parameters() {
        let m = FieldModel::helical(3.0, 3.0, 0.0).unwrap();
        let r1 = pendulum_reduction(&m, &fig_state(0.0, 3.2)).unwrap();
        assert!((r1.kappa - 3.2 * 3.2 / 6.0 + 1.0).abs() < 1e-15);
        assert_eq!(r1.regime(), Regime::Libration);
        let r3 = pendulum_reduction(&m, &fig_state(0.0, 2.0 * 3.0f64.sqrt())).unwrap();
        assert!((r3.kappa - 1.0).abs() < 1e-15);
        assert_eq!(r3.regime(), Regime::Separatrix);
        assert!(matches!(
            zeta_solution(&r3, 0.3),
            Err(Error::SeparatrixRegime { .. })
        ));
        let eq = pendulum_reduction(&m, &fig_state(0.0, 0.0)).unwrap();
        assert_eq!(eq.kappa, -1.0);
        assert!(matches!(
            zeta_solution(&eq, 0.0),
            Err(Error::DegenerateKappa { .. })
        ));
    }

    #[test]
    fn zeta_turning_points() {
        let m = FieldModel::helical(3.0, 3.0, 0.0).unwrap();
        let lib = pendulum_reduction(&m, &fig_state(0.0, 3.2)).unwrap();
        assert!((zeta_solution(&lib, lib.tau0).unwrap() + lib.kappa).abs() < 1e-15);
        let rot = pendulum_reduction(&m, &fig_state(0.1, 3.5)).unwrap();
        assert!(rot.kappa > 1.0);
        assert!((zeta_solution(&rot, rot.tau0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn z_round_trip_at_zero() {
        let m = FieldModel::helical(3.0, 3.0, 0.0).unwrap();
        for (z0, zd) in [(0.0, 3.2), (0.1, 3.5), (-0.4, -1.0), (2.0, 0.5), (-2.5, -4.0)] {
            let red = pendulum_reduction(&m, &fig_state(z0, zd)).unwrap();
            assert!((helical_z_of_t(&red, 0.0).unwrap() - z0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_z_matches_integration() {
        use crate::dynamics::{integrate, IntegratorConfig};
        let cases = [
            (3.0, 3.0, 0.0, fig_state(0.0, 3.2)),
            (3.0, 3.0, 0.0, fig_state(0.1, 3.5)),
            (
                1.5,
                -2.0,
                0.7,
                PhaseState::new(Vec3::new(0.2, -0.1, 0.9), Vec3::new(-0.4, 0.8, -1.1)),
            ),
            (
                2.0,
                1.0,
                -0.3,
                PhaseState::new(Vec3::new(0.0, 0.5, -1.2), Vec3::new(0.3, -0.6, 2.9)),
            ),
        ];
        for (a, beta, phi0, s0) in cases {
            let m = FieldModel::helical(a, beta, phi0).unwrap();
            let red = pendulum_reduction(&m, &s0).unwrap();
            let traj = integrate(&m, s0, 20.0, &IntegratorConfig::default(), &[]).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..=400 {
                let t = 0.05 * i as f64;
                let num = traj.state_at(t).unwrap().x.x3;
                worst = worst.max((helical_z_of_t(&red, t).unwrap() - num).abs());
            }
            assert!(worst < 1e-6, "kappa={} worst={worst}", red.kappa);
        }
    }
}
