//! Integrals of motion at most quadratic in the gauge-covariant momenta.
//!
//! A second-order integral is written over the covariant Euclidean generators
//! `Y = (p^A, l^A)`, `p^A = p + A(x)`, `l^A = x × p^A`:
//!
//! ```text
//! X = Σ_{a≤b} α_ab Y_a Y_b + s(x)·p^A + m(x)
//! ```
//!
//! The quadratic part is equivalently `Σ h_j (p^A_j)² + n₁ p^A₂p^A₃ +
//! n₂ p^A₁p^A₃ + n₃ p^A₁p^A₂` with `h, n` quadratic polynomials in `x`
//! (see [`build_hn_from_alpha`]). Requiring `{H, X} = 0` splits into
//! conditions at orders 3, 2, 1, 0 in the momenta; order 3 holds by
//! construction and the rest are evaluated pointwise by
//! [`determining_residuals`].

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::diff::{self, coordinate_step, Step};
use crate::dynamics::PhaseState;
use crate::error::{Error, Result};
use crate::fields::{FieldModel, MatrixFn, ScalarFn, VectorFn};
use crate::vec3::{Mat3, Vec3};

/// Phase-space gradient `(∂f/∂x, ∂f/∂p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseGradient {
    pub dx: Vec3,
    pub dp: Vec3,
}

/// A named real function on phase space.
///
/// The default gradient is a central difference with step
/// `ε^(1/3) · max(1, |coordinate|)`; implementors override it with analytic
/// derivatives where they are available.
pub trait PhaseFunction {
    fn name(&self) -> &str;

    fn value(&self, s: &PhaseState) -> Result<f64>;

    fn gradient(&self, s: &PhaseState) -> Result<PhaseGradient> {
        fd_phase_gradient(|st| self.value(st), s)
    }
}

/// Central-difference phase-space gradient.
pub fn fd_phase_gradient<F>(f: F, s: &PhaseState) -> Result<PhaseGradient>
where
    F: Fn(&PhaseState) -> Result<f64>,
{
    let base = s.to_array();
    let mut g = [0.0; 6];
    for (k, gk) in g.iter_mut().enumerate() {
        let h = coordinate_step(base[k]);
        let mut up = base;
        let mut dn = base;
        up[k] += h;
        dn[k] -= h;
        *gk = (f(&PhaseState::from_array(up))? - f(&PhaseState::from_array(dn))?) / (up[k] - dn[k]);
    }
    Ok(PhaseGradient {
        dx: Vec3::new(g[0], g[1], g[2]),
        dp: Vec3::new(g[3], g[4], g[5]),
    })
}

/// Wraps a closure as a [`PhaseFunction`] with finite-difference gradient.
pub struct PhaseFn<F> {
    name: String,
    f: F,
}

impl<F> PhaseFn<F>
where
    F: Fn(&PhaseState) -> Result<f64>,
{
    pub fn new(name: &str, f: F) -> Self {
        Self {
            name: String::from(name),
            f,
        }
    }
}

impl<F> PhaseFunction for PhaseFn<F>
where
    F: Fn(&PhaseState) -> Result<f64>,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn value(&self, s: &PhaseState) -> Result<f64> {
        (self.f)(s)
    }
}

/// `{f, g} = Σ_j (∂f/∂x_j ∂g/∂p_j − ∂g/∂x_j ∂f/∂p_j)` from each function's gradient.
pub fn poisson_bracket(f: &dyn PhaseFunction, g: &dyn PhaseFunction, s: &PhaseState) -> Result<f64> {
    let gf = f.gradient(s)?;
    let gg = g.gradient(s)?;
    Ok(bracket_from_gradients(&gf, &gg))
}

/// Poisson bracket with both gradients taken by central differences.
pub fn poisson_bracket_fd(f: &dyn PhaseFunction, g: &dyn PhaseFunction, s: &PhaseState) -> Result<f64> {
    let gf = fd_phase_gradient(|st| f.value(st), s)?;
    let gg = fd_phase_gradient(|st| g.value(st), s)?;
    Ok(bracket_from_gradients(&gf, &gg))
}

pub fn bracket_from_gradients(gf: &PhaseGradient, gg: &PhaseGradient) -> f64 {
    gf.dx.dot(gg.dp) - gg.dx.dot(gf.dp)
}

/// `p^A = p + A(x)`.
pub fn covariant_momentum(model: &FieldModel, s: &PhaseState) -> Result<Vec3> {
    Ok(s.p + model.vector_potential(s.x)?)
}

/// `l^A = x × p^A`.
pub fn covariant_angular_momentum(model: &FieldModel, s: &PhaseState) -> Result<Vec3> {
    Ok(s.x.cross(covariant_momentum(model, s)?))
}

/// Symmetric coefficients `α_ab`, `1 ≤ a ≤ b ≤ 6`, over `Y = (p₁,p₂,p₃,l₁,l₂,l₃)`.
///
/// Indices are 1-based so that `alpha.get(1, 5)` reads `α₁₅`; `get(5, 1)` is
/// the same entry.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Alpha([[f64; 6]; 6]);

impl Alpha {
    pub fn zero() -> Self {
        Self::default()
    }

    fn slot(a: usize, b: usize) -> (usize, usize) {
        assert!(
            (1..=6).contains(&a) && (1..=6).contains(&b),
            "alpha index out of range"
        );
        if a <= b {
            (a - 1, b - 1)
        } else {
            (b - 1, a - 1)
        }
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        let (i, j) = Self::slot(a, b);
        self.0[i][j]
    }

    pub fn set(&mut self, a: usize, b: usize, value: f64) {
        let (i, j) = Self::slot(a, b);
        self.0[i][j] = value;
    }

    pub fn with(mut self, a: usize, b: usize, value: f64) -> Self {
        self.set(a, b, value);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|&v| v == 0.0)
    }

    /// `Σ_{a≤b} α_ab Y_a Y_b`.
    pub fn quadratic_form(&self, y: &[f64; 6]) -> f64 {
        let mut sum = 0.0;
        for a in 0..6 {
            for b in a..6 {
                sum += self.0[a][b] * y[a] * y[b];
            }
        }
        sum
    }

    /// `∂/∂Y_a` of the quadratic form.
    fn form_gradient(&self, y: &[f64; 6]) -> [f64; 6] {
        core::array::from_fn(|a| {
            (0..6)
                .map(|b| {
                    let coef = if a == b {
                        2.0 * self.0[a][a]
                    } else if a < b {
                        self.0[a][b]
                    } else {
                        self.0[b][a]
                    };
                    coef * y[b]
                })
                .sum()
        })
    }
}

/// Quadratic polynomial in `(x, y, z)` with monomials
/// `1, x, y, z, x², y², z², xy, xz, yz`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quadratic(pub [f64; 10]);

impl Quadratic {
    pub fn eval(&self, p: Vec3) -> f64 {
        let c = &self.0;
        let (x, y, z) = (p.x1, p.x2, p.x3);
        c[0] + c[1] * x
            + c[2] * y
            + c[3] * z
            + c[4] * x * x
            + c[5] * y * y
            + c[6] * z * z
            + c[7] * x * y
            + c[8] * x * z
            + c[9] * y * z
    }

    pub fn gradient(&self, p: Vec3) -> Vec3 {
        let c = &self.0;
        let (x, y, z) = (p.x1, p.x2, p.x3);
        Vec3::new(
            c[1] + 2.0 * c[4] * x + c[7] * y + c[8] * z,
            c[2] + 2.0 * c[5] * y + c[7] * x + c[9] * z,
            c[3] + 2.0 * c[6] * z + c[8] * x + c[9] * y,
        )
    }
}

/// The leading-order coefficient functions `h_j(x)`, `n_j(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoeffPolynomials {
    pub h: [Quadratic; 3],
    pub n: [Quadratic; 3],
}

impl CoeffPolynomials {
    pub fn h_at(&self, x: Vec3) -> Vec3 {
        Vec3::new(self.h[0].eval(x), self.h[1].eval(x), self.h[2].eval(x))
    }

    pub fn n_at(&self, x: Vec3) -> Vec3 {
        Vec3::new(self.n[0].eval(x), self.n[1].eval(x), self.n[2].eval(x))
    }

    /// `J[j][i] = ∂n_j/∂x_i`.
    pub fn n_jacobian(&self, x: Vec3) -> Mat3 {
        let rows = [
            self.n[0].gradient(x),
            self.n[1].gradient(x),
            self.n[2].gradient(x),
        ];
        Mat3([rows[0].to_array(), rows[1].to_array(), rows[2].to_array()])
    }

    pub fn h_jacobian(&self, x: Vec3) -> Mat3 {
        let rows = [
            self.h[0].gradient(x),
            self.h[1].gradient(x),
            self.h[2].gradient(x),
        ];
        Mat3([rows[0].to_array(), rows[1].to_array(), rows[2].to_array()])
    }

    /// `Σ h_j P_j² + n₁P₂P₃ + n₂P₁P₃ + n₃P₁P₂`.
    pub fn quadratic_form(&self, x: Vec3, pa: Vec3) -> f64 {
        let h = self.h_at(x);
        let n = self.n_at(x);
        h.x1 * pa.x1 * pa.x1
            + h.x2 * pa.x2 * pa.x2
            + h.x3 * pa.x3 * pa.x3
            + n.x1 * pa.x2 * pa.x3
            + n.x2 * pa.x1 * pa.x3
            + n.x3 * pa.x1 * pa.x2
    }
}

// monomial slots
const C1: usize = 0;
const X: usize = 1;
const Y: usize = 2;
const Z: usize = 3;
const XX: usize = 4;
const YY: usize = 5;
const ZZ: usize = 6;
const XY: usize = 7;
const XZ: usize = 8;
const YZ: usize = 9;

/// Expands `Σ α_ab Y_a Y_b` into the coefficient polynomials `h`, `n`.
///
/// Note: the `y` coefficient of `n₂` is `α₁₄ − α₃₆`. With that sign the
/// combination `α₁₄ = α₂₅ = α₃₆` (which multiplies `p·l ≡ 0`) drops out of
/// `n` entirely, and `∇·n = 0` holds.
pub fn build_hn_from_alpha(alpha: &Alpha) -> CoeffPolynomials {
    let a = |i: usize, j: usize| alpha.get(i, j);
    let mut h = [Quadratic::default(); 3];
    let mut n = [Quadratic::default(); 3];

    let h1 = &mut h[0].0;
    h1[YY] = a(6, 6);
    h1[YZ] = -a(5, 6);
    h1[Y] = -a(1, 6);
    h1[ZZ] = a(5, 5);
    h1[Z] = a(1, 5);
    h1[C1] = a(1, 1);

    let h2 = &mut h[1].0;
    h2[XX] = a(6, 6);
    h2[XZ] = -a(4, 6);
    h2[X] = a(2, 6);
    h2[ZZ] = a(4, 4);
    h2[Z] = -a(2, 4);
    h2[C1] = a(2, 2);

    let h3 = &mut h[2].0;
    h3[XX] = a(5, 5);
    h3[XY] = -a(4, 5);
    h3[X] = -a(3, 5);
    h3[YY] = a(4, 4);
    h3[Y] = a(3, 4);
    h3[C1] = a(3, 3);

    let n1 = &mut n[0].0;
    n1[XX] = -a(5, 6);
    n1[XY] = a(4, 6);
    n1[XZ] = a(4, 5);
    n1[X] = -a(2, 5) + a(3, 6);
    n1[YZ] = -2.0 * a(4, 4);
    n1[Y] = a(2, 4);
    n1[Z] = -a(3, 4);
    n1[C1] = a(2, 3);

    let n2 = &mut n[1].0;
    n2[XY] = a(5, 6);
    n2[XZ] = -2.0 * a(5, 5);
    n2[X] = -a(1, 5);
    n2[YY] = -a(4, 6);
    n2[YZ] = a(4, 5);
    n2[Y] = a(1, 4) - a(3, 6);
    n2[Z] = a(3, 5);
    n2[C1] = a(1, 3);

    let n3 = &mut n[2].0;
    n3[XY] = -2.0 * a(6, 6);
    n3[X] = a(1, 6);
    n3[XZ] = a(5, 6);
    n3[YZ] = a(4, 6);
    n3[Y] = -a(2, 6);
    n3[ZZ] = -a(4, 5);
    n3[Z] = a(2, 5) - a(1, 4);
    n3[C1] = a(1, 2);

    CoeffPolynomials { h, n }
}

/// A scalar function of position with optional analytic gradient.
#[derive(Clone)]
pub struct ScalarField {
    value: ScalarFn,
    gradient: Option<VectorFn>,
}

impl ScalarField {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Vec3) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(move |x| Ok(f(x))),
            gradient: None,
        }
    }

    pub fn with_gradient<F, G>(f: F, g: G) -> Self
    where
        F: Fn(Vec3) -> f64 + Send + Sync + 'static,
        G: Fn(Vec3) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(move |x| Ok(f(x))),
            gradient: Some(Arc::new(move |x| Ok(g(x)))),
        }
    }

    pub fn from_fallible(value: ScalarFn, gradient: Option<VectorFn>) -> Self {
        Self { value, gradient }
    }

    pub fn zero() -> Self {
        Self::with_gradient(|_| 0.0, |_| Vec3::ZERO)
    }

    pub fn value(&self, x: Vec3) -> Result<f64> {
        (self.value)(x)
    }

    pub fn gradient(&self, x: Vec3) -> Result<Vec3> {
        match &self.gradient {
            Some(g) => g(x),
            None => diff::gradient(|y| self.value(y), x, Step::CubeRootEps),
        }
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

/// A vector function of position with optional analytic Jacobian.
#[derive(Clone)]
pub struct VectorField {
    value: VectorFn,
    jacobian: Option<MatrixFn>,
}

impl VectorField {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Vec3) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(move |x| Ok(f(x))),
            jacobian: None,
        }
    }

    pub fn with_jacobian<F, J>(f: F, j: J) -> Self
    where
        F: Fn(Vec3) -> Vec3 + Send + Sync + 'static,
        J: Fn(Vec3) -> Mat3 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(move |x| Ok(f(x))),
            jacobian: Some(Arc::new(move |x| Ok(j(x)))),
        }
    }

    pub fn constant(c: Vec3) -> Self {
        Self::with_jacobian(move |_| c, |_| Mat3::ZERO)
    }

    /// `s(x) = e_j × x`, so that `s·p^A = l^A_j` (0-based `j`).
    pub fn rotation(j: usize) -> Self {
        let e = Vec3::unit(j);
        Self::with_jacobian(
            move |x| e.cross(x),
            move |_| {
                Mat3::from_columns(
                    e.cross(Vec3::unit(0)),
                    e.cross(Vec3::unit(1)),
                    e.cross(Vec3::unit(2)),
                )
            },
        )
    }

    pub fn value(&self, x: Vec3) -> Result<Vec3> {
        (self.value)(x)
    }

    /// `J[a][i] = ∂s_a/∂x_i`.
    pub fn jacobian(&self, x: Vec3) -> Result<Mat3> {
        match &self.jacobian {
            Some(j) => j(x),
            None => diff::jacobian(|y| self.value(y), x, Step::CubeRootEps),
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

/// A first- or second-order integral `Σ α_ab Y_a Y_b + s·p^A + m`.
#[derive(Debug, Clone)]
pub struct IntegralSpec {
    pub name: String,
    pub alpha: Alpha,
    pub s: VectorField,
    pub m: ScalarField,
}

impl IntegralSpec {
    pub fn new(name: &str, alpha: Alpha, s: VectorField, m: ScalarField) -> Self {
        Self {
            name: String::from(name),
            alpha,
            s,
            m,
        }
    }

    pub fn first_order(name: &str, s: VectorField, m: ScalarField) -> Self {
        Self::new(name, Alpha::zero(), s, m)
    }

    pub fn is_first_order(&self) -> bool {
        self.alpha.is_zero()
    }

    pub fn coefficients(&self) -> CoeffPolynomials {
        build_hn_from_alpha(&self.alpha)
    }

    /// Attaches a model so the integral can be evaluated on phase space.
    pub fn bind<'a>(&'a self, model: &'a FieldModel) -> BoundIntegral<'a> {
        BoundIntegral { spec: self, model }
    }
}

fn covariant_generators(x: Vec3, pa: Vec3) -> [f64; 6] {
    let l = x.cross(pa);
    [pa.x1, pa.x2, pa.x3, l.x1, l.x2, l.x3]
}

/// Value of an integral at a phase-space point.
pub fn evaluate_integral(spec: &IntegralSpec, model: &FieldModel, s: &PhaseState) -> Result<f64> {
    let pa = covariant_momentum(model, s)?;
    let y = covariant_generators(s.x, pa);
    Ok(spec.alpha.quadratic_form(&y) + spec.s.value(s.x)?.dot(pa) + spec.m.value(s.x)?)
}

/// An [`IntegralSpec`] paired with a model; implements [`PhaseFunction`]
/// with analytic gradient.
#[derive(Debug, Clone, Copy)]
pub struct BoundIntegral<'a> {
    pub spec: &'a IntegralSpec,
    pub model: &'a FieldModel,
}

impl PhaseFunction for BoundIntegral<'_> {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn value(&self, s: &PhaseState) -> Result<f64> {
        evaluate_integral(self.spec, self.model, s)
    }

    fn gradient(&self, s: &PhaseState) -> Result<PhaseGradient> {
        let x = s.x;
        let pa = covariant_momentum(self.model, s)?;
        let ja = self.model.vector_potential_jacobian(x)?;
        let y = covariant_generators(x, pa);
        let gy = self.spec.alpha.form_gradient(&y);
        let sv = self.spec.s.value(x)?;
        let js = self.spec.s.jacobian(x)?;
        let gm = self.spec.m.gradient(x)?;

        let mut dp = Vec3::ZERO;
        let mut dx = Vec3::ZERO;
        for i in 0..3 {
            let e = Vec3::unit(i);
            // ∂P/∂p_i = e_i, ∂L/∂p_i = x × e_i
            let dl_p = x.cross(e);
            dp[i] = gy[i] + gy[3] * dl_p.x1 + gy[4] * dl_p.x2 + gy[5] * dl_p.x3 + sv[i];
            // ∂P/∂x_i = column i of J_A, ∂L/∂x_i = e_i × P + x × ∂P/∂x_i
            let dpa = ja.column(i);
            let dl_x = e.cross(pa) + x.cross(dpa);
            dx[i] = gy[0] * dpa.x1
                + gy[1] * dpa.x2
                + gy[2] * dpa.x3
                + gy[3] * dl_x.x1
                + gy[4] * dl_x.x2
                + gy[5] * dl_x.x3
                + js.column(i).dot(pa)
                + sv.dot(dpa)
                + gm[i];
        }
        Ok(PhaseGradient { dx, dp })
    }
}

/// Whether the zero-order condition carries the `ħ²/4` quantum correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidualMode {
    Classical,
    Quantum { hbar: f64 },
}

pub const SECOND_ORDER_LABELS: [&str; 6] = [
    "second_order.xx",
    "second_order.yy",
    "second_order.zz",
    "second_order.xy",
    "second_order.xz",
    "second_order.yz",
];
pub const FIRST_ORDER_LABELS: [&str; 3] = ["first_order.x", "first_order.y", "first_order.z"];
pub const ZERO_ORDER_LABEL: &str = "zero_order";

/// Pointwise residuals of the determining equations, left side minus right side.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    pub second_order: [f64; 6],
    pub first_order: [f64; 3],
    pub zero_order: f64,
}

impl Residuals {
    /// `(label, residual)` pairs in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let mut out = Vec::with_capacity(10);
        out.extend(SECOND_ORDER_LABELS.iter().copied().zip(self.second_order));
        out.extend(FIRST_ORDER_LABELS.iter().copied().zip(self.first_order));
        out.push((ZERO_ORDER_LABEL, self.zero_order));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.named().iter().fold(0.0, |m, (_, r)| m.max(r.abs()))
    }
}

/// Evaluates the order-2, order-1 and order-0 determining equations at `x`.
///
/// Field derivatives of `B` and Jacobians of `s` without analytic overrides are
/// central differences.
pub fn determining_residuals(
    spec: &IntegralSpec,
    model: &FieldModel,
    x: Vec3,
    mode: ResidualMode,
) -> Result<Residuals> {
    let coeffs = spec.coefficients();
    let h = coeffs.h_at(x);
    let n = coeffs.n_at(x);
    let b = model.magnetic_field(x)?;
    let dv = model.scalar_potential_gradient(x)?;
    let s = spec.s.value(x)?;
    let js = spec.s.jacobian(x)?.0;
    let dm = spec.m.gradient(x)?;
    let d = |a: usize, i: usize| js[a][i];
    let (n1, n2, n3) = (n.x1, n.x2, n.x3);
    let (h1, h2, h3) = (h.x1, h.x2, h.x3);
    let (b1, b2, b3) = (b.x1, b.x2, b.x3);

    let second_order = [
        d(0, 0) - (n2 * b2 - n3 * b3),
        d(1, 1) - (n3 * b3 - n1 * b1),
        d(2, 2) - (n1 * b1 - n2 * b2),
        d(0, 1) + d(1, 0) - (n1 * b2 - n2 * b1 + 2.0 * (h1 - h2) * b3),
        d(0, 2) + d(2, 0) - (n3 * b1 - n1 * b3 + 2.0 * (h3 - h1) * b2),
        d(2, 1) + d(1, 2) - (n2 * b3 - n3 * b2 + 2.0 * (h2 - h3) * b1),
    ];
    let (vx, vy, vz) = (dv.x1, dv.x2, dv.x3);
    let first_order = [
        dm.x1 - (2.0 * h1 * vx + n3 * vy + n2 * vz + s.x3 * b2 - s.x2 * b3),
        dm.x2 - (n3 * vx + 2.0 * h2 * vy + n1 * vz + s.x1 * b3 - s.x3 * b1),
        dm.x3 - (n2 * vx + n1 * vy + 2.0 * h3 * vz + s.x2 * b1 - s.x1 * b2),
    ];
    let mut zero_order = s.dot(dv);
    if let ResidualMode::Quantum { hbar } = mode {
        if !spec.is_first_order() {
            let dn = coeffs.n_jacobian(x).0;
            let db = diff::jacobian(|y| model.magnetic_field(y), x, Step::CubeRootEps)?.0;
            // dn[j][i] = ∂_i n_{j+1}, db[j][i] = ∂_i B_{j+1}
            let bracket = dn[0][2] * db[0][2] - dn[0][1] * db[0][1] + dn[1][0] * db[1][0]
                - dn[1][2] * db[1][2]
                + dn[2][1] * db[2][1]
                - dn[2][0] * db[2][0]
                + dn[0][0] * db[1][1]
                - dn[1][1] * db[0][0];
            zero_order += hbar * hbar / 4.0 * bracket;
        }
    }
    Ok(Residuals {
        second_order,
        first_order,
        zero_order,
    })
}

fn unit_radial(x: Vec3) -> (f64, Vec3) {
    let r = x.norm();
    (r, x * (1.0 / r))
}

/// `∇(x_j/|x|) = (e_j − x̂_j x̂)/|x|`.
fn grad_direction_cosine(x: Vec3, j: usize) -> Vec3 {
    let (r, u) = unit_radial(x);
    (Vec3::unit(j) - u * u[j]) * (1.0 / r)
}

/// Second-order monopole integral with free constants `α₁₅, α₁₆, α₂₆`.
///
/// The remaining coefficients are `α₂₄ = −α₁₅`, `α₃₄ = −α₁₆`, `α₃₅ = −α₂₆`;
/// the linear part is
/// `s = g (α₁₅ y + α₁₆ z, α₂₆ z − α₁₅ x, −α₁₆ x − α₂₆ y)/|x|` and the scalar
/// part is `m = Q (α₁₆ y − α₂₆ x − α₁₅ z)/|x|`. With `(α₁₅, α₁₆, α₂₆)` equal to
/// `(0, 0, 1)`, `(0, −1, 0)`, `(1, 0, 0)` this is the Runge–Lenz component
/// `R₁`, `R₂`, `R₃` respectively.
pub fn monopole_second_order_spec(name: &str, g: f64, q: f64, a15: f64, a16: f64, a26: f64) -> IntegralSpec {
    let alpha = Alpha::zero()
        .with(1, 5, a15)
        .with(1, 6, a16)
        .with(2, 6, a26)
        .with(2, 4, -a15)
        .with(3, 4, -a16)
        .with(3, 5, -a26);
    // s_a = (g/|x|) rows[a]·x
    let rows = [
        Vec3::new(0.0, a15, a16),
        Vec3::new(-a15, 0.0, a26),
        Vec3::new(-a16, -a26, 0.0),
    ];
    let s = VectorField::with_jacobian(
        move |x| {
            let r = x.norm();
            Vec3::new(rows[0].dot(x), rows[1].dot(x), rows[2].dot(x)) * (g / r)
        },
        move |x| {
            let (r, u) = unit_radial(x);
            // ∂_i (c·x / r) = c_i / r − (c·x) x_i / r³
            let row = |c: Vec3| (c - u * c.dot(u)) * (g / r);
            let (r0, r1, r2) = (row(rows[0]), row(rows[1]), row(rows[2]));
            Mat3([r0.to_array(), r1.to_array(), r2.to_array()])
        },
    );
    let c = Vec3::new(-a26, a16, -a15);
    let m = ScalarField::with_gradient(
        move |x| q * c.dot(x) / x.norm(),
        move |x| {
            let (r, u) = unit_radial(x);
            (c - u * c.dot(u)) * (q / r)
        },
    );
    IntegralSpec::new(name, alpha, s, m)
}

/// The three components of the monopole Runge–Lenz vector as integral specs.
pub fn monopole_runge_lenz_specs(g: f64, q: f64) -> [IntegralSpec; 3] {
    [
        monopole_second_order_spec("R1", g, q, 0.0, 0.0, 1.0),
        monopole_second_order_spec("R2", g, q, 0.0, -1.0, 0.0),
        monopole_second_order_spec("R3", g, q, 1.0, 0.0, 0.0),
    ]
}

/// The named integrals of each system, in the gauge of the corresponding model.
///
/// * constant field: `X1 = p₁`, `X2 = p₂`, `X3 = p₃ − By`, `X4 = l₁ + (B/2)(z² − y²)`
///   (the nonpolynomial `X5` lives in [`crate::closedform`]);
/// * helical field: `X1 = p₁`, `X2 = p₂`, `X3 = l₃ + βp₃`;
/// * cylindrical family: `L3 = l₃`, `P3 = p₃`;
/// * monopole: `X1, X2, X3 = l^A_j + g x_j/|x|`, `X^2`, and `R1, R2, R3` when the
///   potential carries the `g²/(2|x|²)` term.
pub fn known_integrals(model: &FieldModel) -> Result<Vec<IntegralSpec>> {
    match model {
        FieldModel::ConstantB { b } => {
            let b = *b;
            Ok(vec![
                IntegralSpec::first_order("X1", VectorField::constant(Vec3::unit(0)), ScalarField::zero()),
                IntegralSpec::first_order(
                    "X2",
                    VectorField::constant(Vec3::unit(1)),
                    ScalarField::with_gradient(move |x| b * x.x3, move |_| Vec3::new(0.0, 0.0, b)),
                ),
                IntegralSpec::first_order(
                    "X3",
                    VectorField::constant(Vec3::unit(2)),
                    ScalarField::with_gradient(move |x| -b * x.x2, move |_| Vec3::new(0.0, -b, 0.0)),
                ),
                IntegralSpec::first_order(
                    "X4",
                    VectorField::rotation(0),
                    ScalarField::with_gradient(
                        move |x| -0.5 * b * (x.x2 * x.x2 + x.x3 * x.x3),
                        move |x| Vec3::new(0.0, -b * x.x2, -b * x.x3),
                    ),
                ),
            ])
        }
        FieldModel::HelicalB {
            amplitude,
            beta,
            phi0,
        } => {
            let (a, beta, phi0) = (*amplitude, *beta, *phi0);
            let angle = move |x: Vec3| ((x.x3 + phi0) / beta).sin_cos();
            Ok(vec![
                IntegralSpec::first_order(
                    "X1",
                    VectorField::constant(Vec3::unit(0)),
                    ScalarField::with_gradient(
                        move |x| a * angle(x).1,
                        move |x| Vec3::new(0.0, 0.0, -a * angle(x).0 / beta),
                    ),
                ),
                IntegralSpec::first_order(
                    "X2",
                    VectorField::constant(Vec3::unit(1)),
                    ScalarField::with_gradient(
                        move |x| a * angle(x).0,
                        move |x| Vec3::new(0.0, 0.0, a * angle(x).1 / beta),
                    ),
                ),
                IntegralSpec::first_order(
                    "X3",
                    VectorField::with_jacobian(
                        move |x| Vec3::new(-x.x2, x.x1, beta),
                        |_| Mat3([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0; 3]]),
                    ),
                    // l₃ = l₃^A − (x A₂ − y A₁)
                    ScalarField::with_gradient(
                        move |x| {
                            let (s, c) = angle(x);
                            a * (x.x1 * s - x.x2 * c)
                        },
                        move |x| {
                            let (s, c) = angle(x);
                            Vec3::new(a * s, -a * c, a * (x.x1 * c + x.x2 * s) / beta)
                        },
                    ),
                ),
            ])
        }
        FieldModel::Cylindrical { f1, f2, .. } => {
            let (f1a, f1b, f2a, f2b) = (f1.clone(), f1.clone(), f2.clone(), f2.clone());
            let radial_grad = |x: Vec3, d: f64| {
                let r = x.x1.hypot(x.x2);
                if r == 0.0 {
                    Vec3::ZERO
                } else {
                    Vec3::new(x.x1 * d / r, x.x2 * d / r, 0.0)
                }
            };
            Ok(vec![
                IntegralSpec::first_order(
                    "L3",
                    VectorField::rotation(2),
                    ScalarField::with_gradient(
                        move |x| -f2a.value(x.x1.hypot(x.x2)),
                        move |x| -radial_grad(x, f2b.derivative(x.x1.hypot(x.x2))),
                    ),
                ),
                IntegralSpec::first_order(
                    "P3",
                    VectorField::constant(Vec3::unit(2)),
                    ScalarField::with_gradient(
                        move |x| f1a.value(x.x1.hypot(x.x2)),
                        move |x| radial_grad(x, f1b.derivative(x.x1.hypot(x.x2))),
                    ),
                ),
            ])
        }
        FieldModel::Monopole { g, q, potential } => {
            let g = *g;
            let mut out: Vec<IntegralSpec> = (0..3)
                .map(|j| {
                    let name = ["X1", "X2", "X3"][j];
                    IntegralSpec::first_order(
                        name,
                        VectorField::rotation(j),
                        ScalarField::with_gradient(
                            move |x| g * x[j] / x.norm(),
                            move |x| grad_direction_cosine(x, j) * g,
                        ),
                    )
                })
                .collect();
            // Σ (l^A_j + g x_j/r)² = Σ (l^A_j)² + g², the cross term g x·l^A/r vanishes
            out.push(IntegralSpec::new(
                "X^2",
                Alpha::zero().with(4, 4, 1.0).with(5, 5, 1.0).with(6, 6, 1.0),
                VectorField::constant(Vec3::ZERO),
                ScalarField::with_gradient(move |_| g * g, |_| Vec3::ZERO),
            ));
            if *potential == crate::fields::MonopolePotential::ModifiedCoulomb {
                out.extend(monopole_runge_lenz_specs(g, *q));
            }
            Ok(out)
        }
        FieldModel::Custom(_) => Err(Error::UnsupportedModel(
            "no catalogue of integrals for custom fields",
        )),
    }
}
