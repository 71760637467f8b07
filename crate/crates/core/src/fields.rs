//! Static electromagnetic field configurations.
//!
//! Every model supplies the vector potential `A`, the magnetic field
//! `B = ∇ × A` and the electrostatic potential `V`, together with the
//! derivatives the equations of motion and the integral machinery need.
//! Units: mass 1, charge −1, so `H = ½ (p + A)² + V`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::diff::{self, Step};
use crate::error::{Error, Result};
use crate::vec3::{Mat3, Vec3};

/// Distance from a singular locus below which evaluation is refused.
pub const DOMAIN_EPS: f64 = 1e-8;

pub type VectorFn = Arc<dyn Fn(Vec3) -> Result<Vec3> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(Vec3) -> Result<f64> + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(Vec3) -> Result<Mat3> + Send + Sync>;
type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of the cylindrical radius `R` with its first derivative.
#[derive(Clone)]
pub struct RadialProfile {
    value: RealFn,
    derivative: RealFn,
}

impl RadialProfile {
    pub fn new<F, D>(value: F, derivative: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| 0.0)
    }

    /// `Σ c_i R^i`.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let coeffs: Arc<[f64]> = coeffs.into();
        let dc = coeffs.clone();
        Self::new(
            move |r| coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c),
            move |r| {
                dc.iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(0.0, |acc, (i, &c)| acc * r + i as f64 * c)
            },
        )
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        (self.derivative)(r)
    }
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("at_0", &self.value(0.0))
            .field("at_1", &self.value(1.0))
            .finish()
    }
}

/// Electrostatic potential accompanying the monopole field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonopolePotential {
    /// `g²/(2|x|²) − Q/|x|`, the potential admitting the Runge–Lenz-type integral.
    #[default]
    ModifiedCoulomb,
    /// Plain `−Q/|x|` without the monopole correction.
    CoulombOnly,
}

/// Escape hatch: arbitrary potentials given as closures.
///
/// Missing derivatives fall back to central differences.
#[derive(Clone)]
pub struct CustomField {
    pub label: &'static str,
    pub vector_potential: VectorFn,
    pub scalar_potential: ScalarFn,
    pub vector_potential_jacobian: Option<MatrixFn>,
    pub scalar_potential_gradient: Option<VectorFn>,
    pub magnetic_field: Option<VectorFn>,
}

impl CustomField {
    pub fn new<A, V>(vector_potential: A, scalar_potential: V) -> Self
    where
        A: Fn(Vec3) -> Vec3 + Send + Sync + 'static,
        V: Fn(Vec3) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: "custom",
            vector_potential: Arc::new(move |x| Ok(vector_potential(x))),
            scalar_potential: Arc::new(move |x| Ok(scalar_potential(x))),
            vector_potential_jacobian: None,
            scalar_potential_gradient: None,
            magnetic_field: None,
        }
    }
}

/// A gauge function `χ` with its gradient.
#[derive(Clone)]
pub struct GaugeFunction {
    value: ScalarFn,
    gradient: VectorFn,
}

impl GaugeFunction {
    pub fn new<F, G>(value: F, gradient: G) -> Self
    where
        F: Fn(Vec3) -> f64 + Send + Sync + 'static,
        G: Fn(Vec3) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(move |x| Ok(value(x))),
            gradient: Arc::new(move |x| Ok(gradient(x))),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| Vec3::ZERO)
    }

    /// `χ(x) = c · x`.
    pub fn linear(c: Vec3) -> Self {
        Self::new(move |x| c.dot(x), move |_| c)
    }

    pub fn value(&self, x: Vec3) -> Result<f64> {
        (self.value)(x)
    }

    pub fn gradient(&self, x: Vec3) -> Result<Vec3> {
        (self.gradient)(x)
    }

    /// Largest component of `∇χ − (central-difference gradient of χ)` at `x`.
    pub fn consistency_error(&self, x: Vec3) -> Result<f64> {
        let fd = diff::gradient(|y| self.value(y), x, Step::CubeRootEps)?;
        Ok((self.gradient(x)? - fd).max_abs())
    }
}

impl fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("GaugeFunction")
    }
}

/// The field configurations studied in this crate.
#[derive(Clone)]
pub enum FieldModel {
    /// `B = (B, 0, 0)` in the gauge `A = (0, −Bz, 0)`, `V = 0`.
    ConstantB {
        b: f64,
    },
    /// `A = −a (cos θ, sin θ, 0)` with `θ = (z + φ₀)/β`, `V = 0`.
    HelicalB {
        amplitude: f64,
        beta: f64,
        phi0: f64,
    },
    /// Monopole `B = g x/|x|³`, Dirac string along the negative z half-axis.
    Monopole {
        g: f64,
        q: f64,
        potential: MonopolePotential,
    },
    /// Axially symmetric family `A = (−y F₂/R², x F₂/R², −F₁)`, `V = V(R)`.
    Cylindrical {
        f1: RadialProfile,
        f2: RadialProfile,
        v: RadialProfile,
    },
    Custom(CustomField),
}

impl fmt::Debug for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldModel::ConstantB { b } => f.debug_struct("ConstantB").field("b", b).finish(),
            FieldModel::HelicalB {
                amplitude,
                beta,
                phi0,
            } => f
                .debug_struct("HelicalB")
                .field("amplitude", amplitude)
                .field("beta", beta)
                .field("phi0", phi0)
                .finish(),
            FieldModel::Monopole { g, q, potential } => f
                .debug_struct("Monopole")
                .field("g", g)
                .field("q", q)
                .field("potential", potential)
                .finish(),
            FieldModel::Cylindrical { f1, f2, v } => f
                .debug_struct("Cylindrical")
                .field("f1", f1)
                .field("f2", f2)
                .field("v", v)
                .finish(),
            FieldModel::Custom(c) => f.debug_tuple("Custom").field(&c.label).finish(),
        }
    }
}

impl FieldModel {
    pub fn constant_b(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidInput("constant field strength must be positive"));
        }
        Ok(FieldModel::ConstantB { b })
    }

    pub fn helical(amplitude: f64, beta: f64, phi0: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidInput("helical amplitude must be positive"));
        }
        if beta == 0.0 || !beta.is_finite() || !phi0.is_finite() {
            return Err(Error::InvalidInput("helical pitch must be finite and nonzero"));
        }
        Ok(FieldModel::HelicalB {
            amplitude,
            beta,
            phi0,
        })
    }

    pub fn monopole(g: f64, q: f64) -> Result<Self> {
        Self::monopole_with(g, q, MonopolePotential::ModifiedCoulomb)
    }

    pub fn monopole_with(g: f64, q: f64, potential: MonopolePotential) -> Result<Self> {
        if g == 0.0 || !g.is_finite() || !q.is_finite() {
            return Err(Error::InvalidInput("monopole charge must be finite and nonzero"));
        }
        Ok(FieldModel::Monopole { g, q, potential })
    }

    pub fn cylindrical(f1: RadialProfile, f2: RadialProfile, v: RadialProfile) -> Self {
        FieldModel::Cylindrical { f1, f2, v }
    }

    pub fn custom(field: CustomField) -> Self {
        FieldModel::Custom(field)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldModel::ConstantB { .. } => "constant_b",
            FieldModel::HelicalB { .. } => "helical",
            FieldModel::Monopole { .. } => "monopole",
            FieldModel::Cylindrical { .. } => "cylindrical",
            FieldModel::Custom(c) => c.label,
        }
    }

    /// Rejects points on the model's singular locus.
    pub fn check_domain(&self, x: Vec3) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain {
                point: x,
                reason: "non-finite coordinates",
            });
        }
        match self {
            FieldModel::Monopole { .. } => {
                let rho2 = x.x1 * x.x1 + x.x2 * x.x2;
                if x.norm() < DOMAIN_EPS {
                    Err(Error::Domain {
                        point: x,
                        reason: "monopole origin",
                    })
                } else if rho2 < DOMAIN_EPS * DOMAIN_EPS && x.x3 < 0.0 {
                    Err(Error::Domain {
                        point: x,
                        reason: "Dirac string (negative z half-axis)",
                    })
                } else {
                    Ok(())
                }
            }
            FieldModel::Cylindrical { f2, .. } => {
                if x.x1.hypot(x.x2) < DOMAIN_EPS && f2.value(0.0) != 0.0 {
                    Err(Error::Domain {
                        point: x,
                        reason: "symmetry axis with nonzero F2(0)",
                    })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Domain of the gauge-independent quantities `B`, `V`, `∇V`: the monopole
    /// field is regular on the Dirac string, only the origin is excluded.
    pub fn check_physical_domain(&self, x: Vec3) -> Result<()> {
        match self {
            FieldModel::Monopole { .. } if x.is_finite() && x.norm() >= DOMAIN_EPS => Ok(()),
            _ => self.check_domain(x),
        }
    }

    pub fn vector_potential(&self, x: Vec3) -> Result<Vec3> {
        self.check_domain(x)?;
        Ok(match self {
            FieldModel::ConstantB { b } => Vec3::new(0.0, -b * x.x3, 0.0),
            FieldModel::HelicalB {
                amplitude,
                beta,
                phi0,
            } => {
                let (s, c) = ((x.x3 + phi0) / beta).sin_cos();
                Vec3::new(-amplitude * c, -amplitude * s, 0.0)
            }
            FieldModel::Monopole { g, .. } => {
                let f = monopole_factor(*g, x);
                Vec3::new(-x.x2 * f, x.x1 * f, 0.0)
            }
            FieldModel::Cylindrical { f1, f2, .. } => {
                let r = x.x1.hypot(x.x2);
                if r < DOMAIN_EPS {
                    Vec3::new(0.0, 0.0, -f1.value(r))
                } else {
                    let gr = f2.value(r) / (r * r);
                    Vec3::new(-x.x2 * gr, x.x1 * gr, -f1.value(r))
                }
            }
            FieldModel::Custom(c) => (c.vector_potential)(x)?,
        })
    }

    pub fn magnetic_field(&self, x: Vec3) -> Result<Vec3> {
        self.check_physical_domain(x)?;
        Ok(match self {
            FieldModel::ConstantB { b } => Vec3::new(*b, 0.0, 0.0),
            FieldModel::HelicalB {
                amplitude,
                beta,
                phi0,
            } => {
                let (s, c) = ((x.x3 + phi0) / beta).sin_cos();
                Vec3::new(c, s, 0.0) * (amplitude / beta)
            }
            FieldModel::Monopole { g, .. } => {
                let r = x.norm();
                x * (g / (r * r * r))
            }
            FieldModel::Cylindrical { f1, f2, .. } => {
                let r = x.x1.hypot(x.x2);
                if r < DOMAIN_EPS {
                    Vec3::new(0.0, 0.0, f2.derivative(AXIS_PROBE) / AXIS_PROBE)
                } else {
                    let d1 = f1.derivative(r);
                    Vec3::new(-d1 * x.x2 / r, d1 * x.x1 / r, f2.derivative(r) / r)
                }
            }
            FieldModel::Custom(c) => match &c.magnetic_field {
                Some(bf) => bf(x)?,
                None => diff::jacobian(|y| (c.vector_potential)(y), x, Step::CubeRootEps)?.curl(),
            },
        })
    }

    pub fn scalar_potential(&self, x: Vec3) -> Result<f64> {
        self.check_physical_domain(x)?;
        Ok(match self {
            FieldModel::ConstantB { .. } | FieldModel::HelicalB { .. } => 0.0,
            FieldModel::Monopole { g, q, potential } => {
                let r = x.norm();
                match potential {
                    MonopolePotential::ModifiedCoulomb => g * g / (2.0 * r * r) - q / r,
                    MonopolePotential::CoulombOnly => -q / r,
                }
            }
            FieldModel::Cylindrical { v, .. } => v.value(x.x1.hypot(x.x2)),
            FieldModel::Custom(c) => (c.scalar_potential)(x)?,
        })
    }

    pub fn scalar_potential_gradient(&self, x: Vec3) -> Result<Vec3> {
        self.check_physical_domain(x)?;
        Ok(match self {
            FieldModel::ConstantB { .. } | FieldModel::HelicalB { .. } => Vec3::ZERO,
            FieldModel::Monopole { g, q, potential } => {
                let r = x.norm();
                let dv = match potential {
                    MonopolePotential::ModifiedCoulomb => -g * g / (r * r * r) + q / (r * r),
                    MonopolePotential::CoulombOnly => q / (r * r),
                };
                x * (dv / r)
            }
            FieldModel::Cylindrical { v, .. } => {
                let r = x.x1.hypot(x.x2);
                if r < DOMAIN_EPS {
                    Vec3::ZERO
                } else {
                    let dv = v.derivative(r) / r;
                    Vec3::new(x.x1 * dv, x.x2 * dv, 0.0)
                }
            }
            FieldModel::Custom(c) => match &c.scalar_potential_gradient {
                Some(gf) => gf(x)?,
                None => diff::gradient(|y| (c.scalar_potential)(y), x, Step::CubeRootEps)?,
            },
        })
    }

    /// `J[a][i] = ∂A_a/∂x_i`.
    pub fn vector_potential_jacobian(&self, x: Vec3) -> Result<Mat3> {
        self.check_domain(x)?;
        let mut j = Mat3::ZERO;
        match self {
            FieldModel::ConstantB { b } => j.0[1][2] = -b,
            FieldModel::HelicalB {
                amplitude,
                beta,
                phi0,
            } => {
                let (s, c) = ((x.x3 + phi0) / beta).sin_cos();
                j.0[0][2] = amplitude * s / beta;
                j.0[1][2] = -amplitude * c / beta;
            }
            FieldModel::Monopole { g, .. } => {
                let r = x.norm();
                let rz = r_plus_z(x);
                let f = g / (r * rz);
                // ∂f/∂x_i = −f ∂(r² + r z)/∂x_i / (r (r + z))
                let denom = r * rz;
                let mut df = Vec3::ZERO;
                for i in 0..3 {
                    let d = 2.0 * x[i] + x.x3 * x[i] / r + if i == 2 { r } else { 0.0 };
                    df[i] = -f * d / denom;
                }
                for i in 0..3 {
                    j.0[0][i] = -x.x2 * df[i];
                    j.0[1][i] = x.x1 * df[i];
                }
                j.0[0][1] -= f;
                j.0[1][0] += f;
            }
            FieldModel::Cylindrical { f1, f2, .. } => {
                let r = x.x1.hypot(x.x2);
                if r < DOMAIN_EPS {
                    let g0 = f2.derivative(AXIS_PROBE) / (2.0 * AXIS_PROBE);
                    j.0[0][1] = -g0;
                    j.0[1][0] = g0;
                } else {
                    let gr = f2.value(r) / (r * r);
                    let dg = (f2.derivative(r) / (r * r) - 2.0 * f2.value(r) / (r * r * r)) / r;
                    let (gx, gy) = (dg * x.x1, dg * x.x2);
                    j.0[0][0] = -x.x2 * gx;
                    j.0[0][1] = -gr - x.x2 * gy;
                    j.0[1][0] = gr + x.x1 * gx;
                    j.0[1][1] = x.x1 * gy;
                    let d1 = f1.derivative(r) / r;
                    j.0[2][0] = -d1 * x.x1;
                    j.0[2][1] = -d1 * x.x2;
                }
            }
            FieldModel::Custom(c) => {
                j = match &c.vector_potential_jacobian {
                    Some(jf) => jf(x)?,
                    None => diff::jacobian(|y| (c.vector_potential)(y), x, Step::CubeRootEps)?,
                };
            }
        }
        Ok(j)
    }

    /// Returns the gauge-equivalent model with `A' = A + ∇χ`, `V' = V`.
    pub fn gauge_shift(&self, chi: &GaugeFunction) -> FieldModel {
        let base = Arc::new(self.clone());
        let (b1, b2, b3, b4, b5) = (base.clone(), base.clone(), base.clone(), base.clone(), base);
        let (c1, c2) = (chi.clone(), chi.clone());
        FieldModel::Custom(CustomField {
            label: "gauge_shifted",
            vector_potential: Arc::new(move |x| Ok(b1.vector_potential(x)? + c1.gradient(x)?)),
            scalar_potential: Arc::new(move |x| b2.scalar_potential(x)),
            vector_potential_jacobian: Some(Arc::new(move |x| {
                let hess = diff::jacobian(|y| c2.gradient(y), x, Step::CubeRootEps)?;
                Ok(b3.vector_potential_jacobian(x)? + hess)
            })),
            scalar_potential_gradient: Some(Arc::new(move |x| b4.scalar_potential_gradient(x))),
            magnetic_field: Some(Arc::new(move |x| b5.magnetic_field(x))),
        })
    }
}

/// Probe radius for on-axis limits of the cylindrical family.
const AXIS_PROBE: f64 = 1e-6;

/// `r + z` without cancellation on the lower half-space.
fn r_plus_z(x: Vec3) -> f64 {
    let r = x.norm();
    if x.x3 >= 0.0 {
        r + x.x3
    } else {
        (x.x1 * x.x1 + x.x2 * x.x2) / (r - x.x3)
    }
}

/// `g / (r (r + z))`, equal to `g (r − z) / (r (x² + y²))` off the axis.
fn monopole_factor(g: f64, x: Vec3) -> f64 {
    g / (x.norm() * r_plus_z(x))
}

/// Maximum finite-difference violations of `∇·B = 0` and `∇×A = B`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldCheckReport {
    pub points: usize,
    pub max_div_b: f64,
    pub max_curl_residual: f64,
    pub max_div_a: f64,
}

/// Central-difference (`h = 1e-5 · max(1, |x|)`) divergence and curl checks.
pub fn divergence_checks(model: &FieldModel, points: &[Vec3]) -> Result<FieldCheckReport> {
    let mut report = FieldCheckReport {
        points: points.len(),
        ..Default::default()
    };
    for &x in points {
        let jb = diff::jacobian(|y| model.magnetic_field(y), x, Step::field())?;
        let ja = diff::jacobian(|y| model.vector_potential(y), x, Step::field())?;
        let b = model.magnetic_field(x)?;
        report.max_div_b = report.max_div_b.max(jb.trace().abs());
        report.max_div_a = report.max_div_a.max(ja.trace().abs());
        report.max_curl_residual = report.max_curl_residual.max((ja.curl() - b).max_abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn constant_field_potentials() {
        let m = FieldModel::constant_b(2.0).unwrap();
        let x = Vec3::new(5.0, 7.0, 3.0);
        assert_eq!(m.vector_potential(x).unwrap(), Vec3::new(0.0, -6.0, 0.0));
        assert_eq!(m.magnetic_field(x).unwrap(), Vec3::new(2.0, 0.0, 0.0));
        let m5 = FieldModel::constant_b(5.0).unwrap();
        assert_eq!(m5.scalar_potential(x).unwrap(), 0.0);
    }

    #[test]
    fn helical_field_at_origin() {
        let m = FieldModel::helical(3.0, 3.0, 0.0).unwrap();
        assert_eq!(m.vector_potential(Vec3::ZERO).unwrap(), Vec3::new(-3.0, 0.0, 0.0));
        assert_eq!(m.magnetic_field(Vec3::ZERO).unwrap(), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(m.scalar_potential(Vec3::new(1.0, 2.0, 3.0)).unwrap(), 0.0);
    }

    #[test]
    fn helical_phase_shift_is_a_translation() {
        let shifted = FieldModel::helical(2.0, 1.5, 0.7).unwrap();
        let plain = FieldModel::helical(2.0, 1.5, 0.0).unwrap();
        let x = Vec3::new(0.1, 0.2, 0.3);
        let y = Vec3::new(0.1, 0.2, 1.0);
        assert!(close(
            shifted.vector_potential(x).unwrap(),
            plain.vector_potential(y).unwrap(),
            1e-15
        ));
    }

    #[test]
    fn monopole_values() {
        let m = FieldModel::monopole(1.0, 0.0).unwrap();
        let a = m.vector_potential(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        // direct formula g/(|x|(x²+y²)) · (y(z−|x|), −x(z−|x|), 0)
        let direct = Vec3::new(0.0 * (0.0 - 1.0), -(0.0 - 1.0), 0.0);
        assert!(close(a, direct, 1e-15));
        assert!(close(a, Vec3::new(0.0, 1.0, 0.0), 1e-15));
        assert!(close(
            m.magnetic_field(Vec3::new(0.0, 0.0, -1.0)).unwrap(),
            Vec3::new(0.0, 0.0, -1.0),
            1e-15
        ));
        // regular on the positive z half-axis
        assert_eq!(m.vector_potential(Vec3::new(0.0, 0.0, 1.0)).unwrap(), Vec3::ZERO);
        let m2 = FieldModel::monopole(2.0, 3.0).unwrap();
        assert_eq!(m2.scalar_potential(Vec3::new(0.0, 0.0, 1.0)).unwrap(), -1.0);
    }

    #[test]
    fn monopole_stable_form_matches_direct_form() {
        let g = 1.3;
        let m = FieldModel::monopole(g, 0.0).unwrap();
        for x in [
            Vec3::new(0.3, -0.4, 1.2),
            Vec3::new(-1.0, 0.5, -0.2),
            Vec3::new(0.7, 0.7, 0.0),
        ] {
            let r = x.norm();
            let rho2 = x.x1 * x.x1 + x.x2 * x.x2;
            let k = g / (r * rho2);
            let direct = Vec3::new(x.x2 * (x.x3 - r), -x.x1 * (x.x3 - r), 0.0) * k;
            assert!(close(m.vector_potential(x).unwrap(), direct, 1e-13));
        }
    }

    #[test]
    fn monopole_singular_locus_rejected() {
        let m = FieldModel::monopole(1.0, 0.0).unwrap();
        assert!(matches!(
            m.vector_potential(Vec3::ZERO),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            m.vector_potential(Vec3::new(0.0, 0.0, -2.0)),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(m.magnetic_field(Vec3::ZERO), Err(Error::Domain { .. })));
        // B and V do not see the string
        assert!(m.magnetic_field(Vec3::new(0.0, 0.0, -2.0)).is_ok());
        assert!(m.vector_potential(Vec3::new(1e-3, 0.0, -2.0)).is_ok());
    }

    #[test]
    fn cylindrical_axis_guard() {
        let flux = FieldModel::cylindrical(
            RadialProfile::zero(),
            RadialProfile::polynomial(alloc::vec![1.0]),
            RadialProfile::zero(),
        );
        assert!(flux.vector_potential(Vec3::new(0.0, 0.0, 1.0)).is_err());
        let regular = FieldModel::cylindrical(
            RadialProfile::polynomial(alloc::vec![0.5]),
            RadialProfile::polynomial(alloc::vec![0.0, 0.0, 1.0]),
            RadialProfile::zero(),
        );
        assert_eq!(
            regular.vector_potential(Vec3::new(0.0, 0.0, 1.0)).unwrap(),
            Vec3::new(0.0, 0.0, -0.5)
        );
        // F2 = R² gives B3 = F2'/R = 2 everywhere, including the axis limit
        let b_axis = regular.magnetic_field(Vec3::ZERO).unwrap();
        assert!((b_axis.x3 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn polynomial_profile_derivative() {
        let p = RadialProfile::polynomial(alloc::vec![1.0, -2.0, 0.5, 3.0]);
        let r = 0.7;
        assert!((p.value(r) - (1.0 - 2.0 * r + 0.5 * r * r + 3.0 * r * r * r)).abs() < 1e-15);
        assert!((p.derivative(r) - (-2.0 + r + 9.0 * r * r)).abs() < 1e-15);
    }

    #[test]
    fn analytic_jacobians_match_finite_differences() {
        let models = [
            FieldModel::constant_b(1.7).unwrap(),
            FieldModel::helical(2.0, -1.3, 0.4).unwrap(),
            FieldModel::monopole(0.8, 1.0).unwrap(),
            FieldModel::cylindrical(
                RadialProfile::polynomial(alloc::vec![0.0, 0.3, 0.2]),
                RadialProfile::polynomial(alloc::vec![0.0, 0.0, 0.5, 0.1]),
                RadialProfile::polynomial(alloc::vec![0.0, 0.0, 0.5]),
            ),
        ];
        let pts = [
            Vec3::new(0.4, -0.9, 0.3),
            Vec3::new(-1.2, 0.2, -0.8),
            Vec3::new(0.6, 1.1, 1.7),
        ];
        for m in &models {
            for &x in &pts {
                let ja = m.vector_potential_jacobian(x).unwrap();
                let jf = diff::jacobian(|y| m.vector_potential(y), x, Step::CubeRootEps).unwrap();
                for a in 0..3 {
                    for i in 0..3 {
                        assert!(
                            (ja.0[a][i] - jf.0[a][i]).abs() < 1e-8,
                            "{m:?} J[{a}][{i}] at {x:?}"
                        );
                    }
                }
                let gv = m.scalar_potential_gradient(x).unwrap();
                let gf = diff::gradient(|y| m.scalar_potential(y), x, Step::CubeRootEps).unwrap();
                assert!(close(gv, gf, 1e-8), "{m:?} ∇V at {x:?}");
                assert!(close(ja.curl(), m.magnetic_field(x).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn gauge_shift_identity_and_constant() {
        let m = FieldModel::helical(1.0, 2.0, 0.0).unwrap();
        let x = Vec3::new(0.3, 0.2, -0.5);
        let same = m.gauge_shift(&GaugeFunction::zero());
        assert_eq!(same.vector_potential(x).unwrap(), m.vector_potential(x).unwrap());
        let c = Vec3::new(0.5, -1.0, 2.0);
        let shifted = m.gauge_shift(&GaugeFunction::linear(c));
        assert!(close(
            shifted.vector_potential(x).unwrap(),
            m.vector_potential(x).unwrap() + c,
            1e-15
        ));
        assert_eq!(shifted.magnetic_field(x).unwrap(), m.magnetic_field(x).unwrap());
    }

    #[test]
    fn gauge_shift_to_symmetric_gauge_keeps_curl() {
        let b = 1.5;
        let m = FieldModel::constant_b(b).unwrap();
        let chi = GaugeFunction::new(
            move |x| -b * x.x2 * x.x3,
            move |x| Vec3::new(0.0, -b * x.x3, -b * x.x2),
        );
        let sym = m.gauge_shift(&chi);
        let x = Vec3::new(0.4, 1.0, 2.0);
        assert!(chi.consistency_error(x).unwrap() < 1e-9);
        // (0, −Bz, 0) + (0, −Bz, −By)
        let a = sym.vector_potential(x).unwrap();
        assert!(close(a, Vec3::new(0.0, -2.0 * b * 2.0, -b), 1e-14));
        let j = diff::jacobian(|y| sym.vector_potential(y), x, Step::field()).unwrap();
        assert!(close(j.curl(), Vec3::new(b, 0.0, 0.0), 1e-9));
    }

    #[test]
    fn divergence_report_for_constant_field_is_rounding_only() {
        let m = FieldModel::constant_b(3.0).unwrap();
        let r = divergence_checks(&m, &[Vec3::new(1.0, 2.0, 3.0), Vec3::ZERO]).unwrap();
        assert_eq!(r.max_div_b, 0.0);
        assert!(r.max_curl_residual < 1e-10);
    }
}
