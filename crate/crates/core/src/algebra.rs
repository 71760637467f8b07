//! Poisson-algebra structure of the integrals.
//!
//! Constant field: the seven functions `X̃₁ = p₁²/2, X₂, X₃, X₄, X₅, X₆, X₇ = 1`
//! close under the bracket with structure constants proportional to `B`, and
//! carry two quadratic Casimirs that both evaluate to `2H`. Monopole: the
//! covariant angular momenta `X_j = l^A_j + g x_j/|x|` close into the
//! rotation algebra, `(X)²` commutes with all of them, and with the modified
//! Coulomb potential the vector `R = p^A × X − Q x/|x|` is conserved.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::closedform::MOMENTUM_EPS;
use crate::dynamics::PhaseState;
use crate::error::{Error, Result};
use crate::fields::{FieldModel, MonopolePotential};
use crate::integrals::{
    known_integrals, poisson_bracket, poisson_bracket_fd, IntegralSpec, PhaseFunction, PhaseGradient,
};
use crate::vec3::Vec3;

pub const CONSTANT_B_NAMES: [&str; 7] = ["X1~", "X2", "X3", "X4", "X5", "X6", "X7"];

/// One element of the constant-field basis with analytic gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantBGenerator {
    pub b: f64,
    /// 0-based position in [`CONSTANT_B_NAMES`].
    pub index: usize,
}

impl ConstantBGenerator {
    fn phase(&self, s: &PhaseState) -> Result<(f64, f64, f64)> {
        let p1 = s.p.x1;
        if p1.abs() < MOMENTUM_EPS {
            return Err(Error::DegenerateMomentum { value: p1 });
        }
        let (sn, cs) = (self.b * s.x.x1 / p1).sin_cos();
        Ok((sn, cs, p1))
    }
}

fn x5x6(b: f64, s: &PhaseState, sn: f64, cs: f64) -> (f64, f64) {
    let w = b * s.x.x3 - s.p.x2;
    (w * cs - s.p.x3 * sn, -w * sn - s.p.x3 * cs)
}

impl PhaseFunction for ConstantBGenerator {
    fn name(&self) -> &str {
        CONSTANT_B_NAMES[self.index]
    }

    fn value(&self, s: &PhaseState) -> Result<f64> {
        let b = self.b;
        let (x, p) = (s.x, s.p);
        Ok(match self.index {
            0 => 0.5 * p.x1 * p.x1,
            1 => p.x2,
            2 => p.x3 - b * x.x2,
            3 => x.x2 * p.x3 - x.x3 * p.x2 + 0.5 * b * (x.x3 * x.x3 - x.x2 * x.x2),
            4 | 5 => {
                let (sn, cs, _) = self.phase(s)?;
                let (x5, x6) = x5x6(b, s, sn, cs);
                if self.index == 4 {
                    x5
                } else {
                    x6
                }
            }
            _ => 1.0,
        })
    }

    fn gradient(&self, s: &PhaseState) -> Result<PhaseGradient> {
        let b = self.b;
        let (x, p) = (s.x, s.p);
        let (dx, dp) = match self.index {
            0 => (Vec3::ZERO, Vec3::new(p.x1, 0.0, 0.0)),
            1 => (Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0)),
            2 => (Vec3::new(0.0, -b, 0.0), Vec3::new(0.0, 0.0, 1.0)),
            3 => (
                Vec3::new(0.0, p.x3 - b * x.x2, b * x.x3 - p.x2),
                Vec3::new(0.0, -x.x3, x.x2),
            ),
            4 | 5 => {
                let (sn, cs, p1) = self.phase(s)?;
                let (x5, x6) = x5x6(b, s, sn, cs);
                // φ = Bx/p₁: ∂X₅/∂φ = X₆, ∂X₆/∂φ = −X₅
                let dphi_dx = b / p1;
                let dphi_dp1 = -b * x.x1 / (p1 * p1);
                if self.index == 4 {
                    (
                        Vec3::new(x6 * dphi_dx, 0.0, b * cs),
                        Vec3::new(x6 * dphi_dp1, -cs, -sn),
                    )
                } else {
                    (
                        Vec3::new(-x5 * dphi_dx, 0.0, -b * sn),
                        Vec3::new(-x5 * dphi_dp1, sn, -cs),
                    )
                }
            }
            _ => (Vec3::ZERO, Vec3::ZERO),
        };
        Ok(PhaseGradient { dx, dp })
    }
}

/// `X̃₁, X₂, …, X₇` for field strength `B` (any nonzero sign).
pub fn constant_b_basis(b: f64) -> Result<[ConstantBGenerator; 7]> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidInput("field strength must be finite and nonzero"));
    }
    Ok(core::array::from_fn(|index| ConstantBGenerator { b, index }))
}

/// Predicted `{X_i, X_j}` as coefficients over the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTable {
    pub names: [&'static str; 7],
    /// `structure[i][j][k]`: coefficient of `X_k` in `{X_i, X_j}`.
    pub structure: [[[f64; 7]; 7]; 7],
}

impl BracketTable {
    /// The structure constants of the constant-field algebra.
    pub fn constant_b(b: f64) -> Self {
        let mut st = [[[0.0; 7]; 7]; 7];
        let mut set = |i: usize, j: usize, k: usize, c: f64| {
            st[i][j][k] = c;
            st[j][i][k] = -c;
        };
        // indices: 0 X̃₁, 1 X₂, 2 X₃, 3 X₄, 4 X₅, 5 X₆, 6 X₇
        set(0, 4, 5, -b);
        set(0, 5, 4, b);
        set(1, 2, 6, b);
        set(1, 3, 2, -1.0);
        set(2, 3, 1, 1.0);
        set(3, 4, 5, 1.0);
        set(3, 5, 4, -1.0);
        set(4, 5, 6, -b);
        Self {
            names: CONSTANT_B_NAMES,
            structure: st,
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..7).all(|i| (0..7).all(|j| (0..7).all(|k| self.structure[i][j][k] == -self.structure[j][i][k])))
    }

    /// Predicted bracket value from the basis values.
    pub fn predict(&self, i: usize, j: usize, values: &[f64; 7]) -> f64 {
        self.structure[i][j].iter().zip(values).map(|(c, v)| c * v).sum()
    }
}

/// Maximum discrepancy for one ordered pair `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDiscrepancy {
    pub left: String,
    pub right: String,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport {
    pub pairs: Vec<PairDiscrepancy>,
    pub max_abs: f64,
    /// Largest `|{f,g} + {g,f}|` observed.
    pub antisymmetry: f64,
}

/// Which gradients feed the bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    Analytic,
    FiniteDifference,
}

fn bracket(mode: GradientMode, f: &dyn PhaseFunction, g: &dyn PhaseFunction, s: &PhaseState) -> Result<f64> {
    match mode {
        GradientMode::Analytic => poisson_bracket(f, g, s),
        GradientMode::FiniteDifference => poisson_bracket_fd(f, g, s),
    }
}

/// Checks all 21 brackets `{X_i, X_j}`, `i < j`, against [`BracketTable::constant_b`].
pub fn verify_bracket_table(b: f64, states: &[PhaseState], mode: GradientMode) -> Result<BracketReport> {
    let basis = constant_b_basis(b)?;
    let table = BracketTable::constant_b(b);
    let mut pairs: Vec<PairDiscrepancy> = Vec::new();
    for (i, left) in CONSTANT_B_NAMES.iter().enumerate() {
        for right in &CONSTANT_B_NAMES[i + 1..] {
            pairs.push(PairDiscrepancy {
                left: String::from(*left),
                right: String::from(*right),
                max_abs: 0.0,
            });
        }
    }
    let mut antisymmetry: f64 = 0.0;
    for s in states {
        let mut values = [0.0; 7];
        for (v, g) in values.iter_mut().zip(&basis) {
            *v = g.value(s)?;
        }
        let mut k = 0;
        for i in 0..7 {
            for j in i + 1..7 {
                let got = bracket(mode, &basis[i], &basis[j], s)?;
                let back = bracket(mode, &basis[j], &basis[i], s)?;
                antisymmetry = antisymmetry.max((got + back).abs());
                let d = (got - table.predict(i, j, &values)).abs();
                pairs[k].max_abs = pairs[k].max_abs.max(d);
                k += 1;
            }
        }
    }
    let max_abs = pairs.iter().fold(0.0, |m: f64, p| m.max(p.max_abs));
    Ok(BracketReport {
        pairs,
        max_abs,
        antisymmetry,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirReport {
    /// `max |2X̃₁X₇ + X₅² + X₆² − 2H|`.
    pub first: f64,
    /// `max |2(BX₄ + X̃₁)X₇ + X₂² + X₃² − 2H|`.
    pub second: f64,
}

/// `H = ½(p₁² + (p₂ − Bz)² + p₃²)` for field `(B, 0, 0)` in the gauge `A = (0, −Bz, 0)`.
pub fn constant_b_hamiltonian(b: f64, s: &PhaseState) -> f64 {
    let w = s.p.x2 - b * s.x.x3;
    0.5 * (s.p.x1 * s.p.x1 + w * w + s.p.x3 * s.p.x3)
}

pub fn casimir_check(b: f64, states: &[PhaseState]) -> Result<CasimirReport> {
    let basis = constant_b_basis(b)?;
    let mut rep = CasimirReport {
        first: 0.0,
        second: 0.0,
    };
    for s in states {
        let v: Vec<f64> = basis.iter().map(|g| g.value(s)).collect::<Result<_>>()?;
        let two_h = 2.0 * constant_b_hamiltonian(b, s);
        let c1 = 2.0 * v[0] * v[6] + v[4] * v[4] + v[5] * v[5];
        let c2 = 2.0 * (b * v[3] + v[0]) * v[6] + v[1] * v[1] + v[2] * v[2];
        rep.first = rep.first.max((c1 - two_h).abs());
        rep.second = rep.second.max((c2 - two_h).abs());
    }
    Ok(rep)
}

/// Jacobi-identity residual `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}` with nested
/// central differences.
pub fn jacobi_residual(
    f: &dyn PhaseFunction,
    g: &dyn PhaseFunction,
    h: &dyn PhaseFunction,
    s: &PhaseState,
) -> Result<f64> {
    use crate::integrals::PhaseFn;
    let gh = PhaseFn::new("gh", |st: &PhaseState| poisson_bracket(g, h, st));
    let hf = PhaseFn::new("hf", |st: &PhaseState| poisson_bracket(h, f, st));
    let fg = PhaseFn::new("fg", |st: &PhaseState| poisson_bracket(f, g, st));
    Ok(poisson_bracket(f, &gh, s)? + poisson_bracket(g, &hf, s)? + poisson_bracket(h, &fg, s)?)
}

fn monopole_model(g: f64, q: f64) -> FieldModel {
    // g = 0 is allowed here: the generators reduce to ordinary angular momenta
    FieldModel::Monopole {
        g,
        q,
        potential: MonopolePotential::ModifiedCoulomb,
    }
}

/// `X₁, X₂, X₃, (X)²` as integral specs.
pub fn monopole_generators(g: f64) -> Result<Vec<IntegralSpec>> {
    let mut ints = known_integrals(&monopole_model(g, 0.0))?;
    ints.truncate(4);
    Ok(ints)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureReport {
    /// `max |{X₁,X₂} − X₃|`, `|{X₂,X₃} − X₁|`, `|{X₃,X₁} − X₂|`.
    pub cyclic: [f64; 3],
    /// `max |{(X)², X_j}|` for `j = 1, 2, 3`.
    pub casimir: [f64; 3],
}

impl ClosureReport {
    pub fn max_abs(&self) -> f64 {
        self.cyclic
            .iter()
            .chain(&self.casimir)
            .fold(0.0, |m: f64, v| m.max(*v))
    }
}

/// Rotation-algebra closure of the monopole generators, finite-difference brackets.
pub fn monopole_closure_check(g: f64, states: &[PhaseState]) -> Result<ClosureReport> {
    let model = monopole_model(g, 0.0);
    let specs = monopole_generators(g)?;
    let bound: Vec<_> = specs.iter().map(|s| s.bind(&model)).collect();
    let mut rep = ClosureReport {
        cyclic: [0.0; 3],
        casimir: [0.0; 3],
    };
    for s in states {
        let v: Vec<f64> = bound.iter().map(|b| b.value(s)).collect::<Result<_>>()?;
        for j in 0..3 {
            let (a, b, c) = (j, (j + 1) % 3, (j + 2) % 3);
            let br = poisson_bracket_fd(&bound[a], &bound[b], s)?;
            rep.cyclic[j] = rep.cyclic[j].max((br - v[c]).abs());
            let inv = poisson_bracket_fd(&bound[3], &bound[j], s)?;
            rep.casimir[j] = rep.casimir[j].max(inv.abs());
        }
    }
    Ok(rep)
}

/// `R = p^A × X − Q x/|x|` with `X = l^A + g x/|x|`, in the monopole gauge.
pub fn runge_lenz(g: f64, q: f64, s: &PhaseState) -> Result<Vec3> {
    let model = monopole_model(g, q);
    let pa = s.p + model.vector_potential(s.x)?;
    let r = s.x.norm();
    let unit = s.x * (1.0 / r);
    let x = s.x.cross(pa) + unit * g;
    Ok(pa.cross(x) - unit * q)
}

/// One component of [`runge_lenz`] as a phase-space function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RungeLenzComponent {
    pub g: f64,
    pub q: f64,
    /// 0-based component.
    pub j: usize,
}

impl PhaseFunction for RungeLenzComponent {
    fn name(&self) -> &str {
        ["R1", "R2", "R3"][self.j]
    }

    fn value(&self, s: &PhaseState) -> Result<f64> {
        Ok(runge_lenz(self.g, self.q, s)?[self.j])
    }
}

pub fn runge_lenz_components(g: f64, q: f64) -> [RungeLenzComponent; 3] {
    core::array::from_fn(|j| RungeLenzComponent { g, q, j })
}
