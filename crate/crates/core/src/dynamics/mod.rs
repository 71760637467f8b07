//! Hamilton's equations for `H = ½ (p + A)² + V` and time integration.

pub mod rk45;

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::integrals::{PhaseFunction, PhaseGradient};
use crate::vec3::Vec3;

/// Position and canonical momentum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseState {
    pub x: Vec3,
    pub p: Vec3,
}

impl PhaseState {
    pub const fn new(x: Vec3, p: Vec3) -> Self {
        Self { x, p }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.x.x1, self.x.x2, self.x.x3, self.p.x1, self.p.x2, self.p.x3]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(Vec3::new(a[0], a[1], a[2]), Vec3::new(a[3], a[4], a[5]))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.p.is_finite()
    }
}

/// `½ (p + A(x))² + V(x)`.
pub fn hamiltonian(model: &FieldModel, s: &PhaseState) -> Result<f64> {
    let v = s.p + model.vector_potential(s.x)?;
    Ok(0.5 * v.norm_squared() + model.scalar_potential(s.x)?)
}

/// `(dx/dt, dp/dt) = (∂H/∂p, −∂H/∂x)`.
pub fn eom_rhs(model: &FieldModel, s: &PhaseState) -> Result<(Vec3, Vec3)> {
    let g = hamiltonian_gradient(model, s)?;
    Ok((g.dp, -g.dx))
}

/// Phase-space gradient of the Hamiltonian from the analytic field derivatives.
pub fn hamiltonian_gradient(model: &FieldModel, s: &PhaseState) -> Result<PhaseGradient> {
    let v = s.p + model.vector_potential(s.x)?;
    let ja = model.vector_potential_jacobian(s.x)?;
    let grad_v = model.scalar_potential_gradient(s.x)?;
    Ok(PhaseGradient {
        dx: ja.transpose_mul_vec(v) + grad_v,
        dp: v,
    })
}

/// The Hamiltonian of a model as a named phase-space function.
#[derive(Debug, Clone, Copy)]
pub struct Energy<'a>(pub &'a FieldModel);

impl PhaseFunction for Energy<'_> {
    fn name(&self) -> &str {
        "H"
    }

    fn value(&self, s: &PhaseState) -> Result<f64> {
        hamiltonian(self.0, s)
    }

    fn gradient(&self, s: &PhaseState) -> Result<PhaseGradient> {
        hamiltonian_gradient(self.0, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Adaptive Dormand–Prince 5(4).
    #[default]
    Rk45,
    /// Fixed-step Boris rotation on the kinetic velocity `v = p + A`, step `max_step`.
    Boris,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: 0.1,
        }
    }
}

impl IntegratorConfig {
    pub fn boris(step: f64) -> Self {
        Self {
            method: Method::Boris,
            max_step: step,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::InvalidInput("tolerances and max step must be positive"));
        }
        Ok(())
    }
}

/// Time-ordered samples with per-sample diagnostics.
///
/// `names[k]` labels `diagnostics[i][k]`; the first entry is always `"H"`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub names: Vec<String>,
    pub diagnostics: Vec<Vec<f64>>,
    rates: Vec<[f64; 6]>,
}

impl Trajectory {
    fn new(names: Vec<String>) -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            names,
            diagnostics: Vec::new(),
            rates: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&PhaseState> {
        self.states.last()
    }

    /// Values of one diagnostic across all samples.
    pub fn diagnostic(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.names.iter().position(|n| n == name)?;
        Some(self.diagnostics.iter().map(|row| row[k]).collect())
    }

    /// Largest `|d(t) − d(t₀)|` of a diagnostic along the trajectory.
    pub fn max_drift(&self, name: &str) -> Option<f64> {
        let col = self.diagnostic(name)?;
        let first = *col.first()?;
        Some(col.iter().fold(0.0, |m, v| m.max((v - first).abs())))
    }

    /// Cubic Hermite interpolation between accepted steps.
    pub fn state_at(&self, t: f64) -> Result<PhaseState> {
        let (Some(&t0), Some(&t1)) = (self.times.first(), self.times.last()) else {
            return Err(Error::InvalidInput("empty trajectory"));
        };
        if !(t >= t0 && t <= t1) {
            return Err(Error::InvalidInput("time outside the trajectory span"));
        }
        let i = match self.times.partition_point(|&ti| ti <= t) {
            0 => 0,
            k if k >= self.times.len() => self.times.len() - 2,
            k => k - 1,
        };
        if self.times.len() == 1 {
            return Ok(self.states[0]);
        }
        let (ta, tb) = (self.times[i], self.times[i + 1]);
        let h = tb - ta;
        let u = (t - ta) / h;
        let (ya, yb) = (self.states[i].to_array(), self.states[i + 1].to_array());
        let (da, db) = (&self.rates[i], &self.rates[i + 1]);
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        let y = core::array::from_fn(|k| h00 * ya[k] + h10 * h * da[k] + h01 * yb[k] + h11 * h * db[k]);
        Ok(PhaseState::from_array(y))
    }

    fn push(
        &mut self,
        model: &FieldModel,
        watch: &[&dyn PhaseFunction],
        t: f64,
        s: PhaseState,
        rate: [f64; 6],
    ) -> Result<()> {
        let mut row = Vec::with_capacity(watch.len() + 1);
        row.push(hamiltonian(model, &s)?);
        for w in watch {
            row.push(w.value(&s)?);
        }
        self.times.push(t);
        self.states.push(s);
        self.diagnostics.push(row);
        self.rates.push(rate);
        Ok(())
    }
}

fn rate_of(model: &FieldModel, s: &PhaseState) -> Result<[f64; 6]> {
    let (dx, dp) = eom_rhs(model, s)?;
    Ok(PhaseState::new(dx, dp).to_array())
}

/// Integrates Hamilton's equations from `s0` over `[0, t_end]`.
///
/// Diagnostics (`H` followed by every watched function) are evaluated at each
/// accepted step.
pub fn integrate(
    model: &FieldModel,
    s0: PhaseState,
    t_end: f64,
    cfg: &IntegratorConfig,
    watch: &[&dyn PhaseFunction],
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput("t_end must be positive"));
    }
    model.check_domain(s0.x)?;
    let mut names = Vec::with_capacity(watch.len() + 1);
    names.push(String::from("H"));
    names.extend(watch.iter().map(|w| String::from(w.name())));
    let mut traj = Trajectory::new(names);

    match cfg.method {
        Method::Rk45 => {
            let tol = rk45::Tolerances {
                rel_tol: cfg.rel_tol,
                abs_tol: cfg.abs_tol,
                max_step: cfg.max_step,
            };
            rk45::solve(
                |_, y: &[f64; 6]| rate_of(model, &PhaseState::from_array(*y)),
                0.0,
                s0.to_array(),
                t_end,
                &tol,
                |t, y, dy| traj.push(model, watch, t, PhaseState::from_array(*y), *dy),
            )?;
        }
        Method::Boris => {
            let steps = (t_end / cfg.max_step).ceil().max(1.0) as usize;
            let dt = t_end / steps as f64;
            let mut s = s0;
            traj.push(model, watch, 0.0, s, rate_of(model, &s)?)?;
            for n in 1..=steps {
                s = boris_step(model, &s, dt)?;
                traj.push(model, watch, n as f64 * dt, s, rate_of(model, &s)?)?;
            }
        }
    }
    Ok(traj)
}

/// One symmetric drift–kick–drift Boris step on `v = p + A(x)`.
///
/// The kinetic equation is `dv/dt = −∇V − v × B` (unit mass, charge −1), so the
/// magnetic rotation uses `t = −B dt/2`. Canonical momentum is recovered as
/// `p = v − A` at the new position.
pub fn boris_step(model: &FieldModel, s: &PhaseState, dt: f64) -> Result<PhaseState> {
    let v0 = s.p + model.vector_potential(s.x)?;
    let x_half = s.x + v0 * (0.5 * dt);
    let force = -model.scalar_potential_gradient(x_half)?;
    let b = model.magnetic_field(x_half)?;

    let v_minus = v0 + force * (0.5 * dt);
    let t = b * (-0.5 * dt);
    let v_prime = v_minus + v_minus.cross(t);
    let sv = t * (2.0 / (1.0 + t.norm_squared()));
    let v_plus = v_minus + v_prime.cross(sv);
    let v1 = v_plus + force * (0.5 * dt);

    let x1 = x_half + v1 * (0.5 * dt);
    let p1 = v1 - model.vector_potential(x1)?;
    Ok(PhaseState::new(x1, p1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::fd_phase_gradient;

    #[test]
    fn hamiltonian_examples() {
        let m1 = FieldModel::constant_b(1.0).unwrap();
        let s = PhaseState::new(Vec3::ZERO, Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(hamiltonian(&m1, &s).unwrap(), 7.0);

        let m2 = FieldModel::constant_b(2.0).unwrap();
        let s = PhaseState::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 2.0, 0.0));
        assert_eq!(hamiltonian(&m2, &s).unwrap(), 0.0);

        // A vanishes on the positive z half-axis, V = g²/2 at |x| = 1
        let mono = FieldModel::monopole(1.0, 0.0).unwrap();
        let s = PhaseState::new(Vec3::new(0.0, 0.0, 1.0), Vec3::ZERO);
        assert_eq!(hamiltonian(&mono, &s).unwrap(), 0.5);
    }

    #[test]
    fn constant_field_equations_reduce_to_display_form() {
        let b = 1.3;
        let m = FieldModel::constant_b(b).unwrap();
        let s = PhaseState::new(Vec3::new(0.2, -0.4, 0.7), Vec3::new(0.5, 1.1, -0.3));
        let (dx, dp) = eom_rhs(&m, &s).unwrap();
        let (p, z) = (s.p, s.x.x3);
        let expect_dx = Vec3::new(p.x1, p.x2 - b * z, p.x3);
        let expect_dp = Vec3::new(0.0, 0.0, b * (p.x2 - b * z));
        assert!((dx - expect_dx).max_abs() < 1e-15);
        assert!((dp - expect_dp).max_abs() < 1e-15);

        let m1 = FieldModel::constant_b(1.0).unwrap();
        let s = PhaseState::new(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(eom_rhs(&m1, &s).unwrap(), (Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO));
    }

    #[test]
    fn helical_equations_at_origin() {
        let m = FieldModel::helical(3.0, 3.0, 0.0).unwrap();
        let s = PhaseState::new(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0));
        let (dx, dp) = eom_rhs(&m, &s).unwrap();
        assert!((dx - Vec3::new(-2.0, 0.0, 0.0)).max_abs() < 1e-15);
        assert!(dp.max_abs() < 1e-15);
    }

    #[test]
    fn eom_matches_finite_difference_gradient() {
        let models = [
            FieldModel::constant_b(0.7).unwrap(),
            FieldModel::helical(2.0, 1.5, 0.3).unwrap(),
            FieldModel::monopole(1.2, 0.8).unwrap(),
        ];
        let s = PhaseState::new(Vec3::new(0.6, -0.8, 0.9), Vec3::new(0.3, 1.0, -0.5));
        for m in &models {
            let (dx, dp) = eom_rhs(m, &s).unwrap();
            let fd = fd_phase_gradient(|st| hamiltonian(m, st), &s).unwrap();
            assert!((dx - fd.dp).max_abs() < 1e-6, "{m:?}");
            assert!((dp + fd.dx).max_abs() < 1e-6, "{m:?}");
        }
    }

    #[test]
    fn straight_line_along_the_field() {
        let m = FieldModel::constant_b(1.0).unwrap();
        let s0 = PhaseState::new(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0));
        let traj = integrate(&m, s0, 10.0, &IntegratorConfig::default(), &[]).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert!((s.x - Vec3::new(*t, 0.0, 0.0)).max_abs() < 1e-12);
        }
        assert_eq!(*traj.times.last().unwrap(), 10.0);
    }

    #[test]
    fn dense_output_interpolates_smoothly() {
        let m = FieldModel::constant_b(1.0).unwrap();
        let s0 = PhaseState::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0));
        let cfg = IntegratorConfig {
            max_step: 0.05,
            ..Default::default()
        };
        let traj = integrate(&m, s0, 3.0, &cfg, &[]).unwrap();
        // z(t) = sin t for this initial state
        for &t in &[0.013, 1.234, 2.999] {
            let s = traj.state_at(t).unwrap();
            assert!((s.x.x3 - t.sin()).abs() < 1e-7);
        }
        assert!(traj.state_at(3.5).is_err());
    }

    #[test]
    fn boris_conserves_energy_in_constant_field() {
        let m = FieldModel::constant_b(1.0).unwrap();
        let s0 = PhaseState::new(Vec3::new(0.1, 0.2, 0.3), Vec3::new(0.4, 0.5, 0.6));
        let traj = integrate(&m, s0, 100.0, &IntegratorConfig::boris(0.01), &[]).unwrap();
        assert!(traj.max_drift("H").unwrap() < 1e-12);
    }

    #[test]
    fn trajectory_times_strictly_increase() {
        let m = FieldModel::helical(3.0, 3.0, 0.0).unwrap();
        let s0 = PhaseState::new(Vec3::new(0.08, 0.05, 0.0), Vec3::new(1.0, 0.0, 3.2));
        let traj = integrate(&m, s0, 5.0, &IntegratorConfig::default(), &[]).unwrap();
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.states.len(), traj.times.len());
        assert_eq!(traj.diagnostics.len(), traj.times.len());
    }

    #[test]
    fn monopole_origin_is_rejected() {
        let m = FieldModel::monopole(1.0, 1.0).unwrap();
        let s0 = PhaseState::new(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0));
        let r = integrate(&m, s0, 1.0, &IntegratorConfig::default(), &[]);
        assert!(matches!(r, Err(Error::Domain { .. })));
    }
}
