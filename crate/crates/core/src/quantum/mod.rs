//! Separated one-dimensional quantum problems.
//!
//! * constant field: `ħ² f'' = ((Bz − k₂)² + k₁² − 2E) f`, spectrum
//!   `E = ħB(n + ½) + k₁²/2`, Hermite–Gaussian eigenfunctions;
//! * helical field: the reduced equation maps onto Mathieu's equation;
//! * cylindrical family: the radial equation
//!   `ħ²(ρ'' + ρ'/R) = ((F₁ − ħk)² + (F₂ + ħm)²/R² + 2V − 2E) ρ`.
//!
//! All discretizations are three-point, symmetric and tridiagonal.

mod mathieu;
pub mod tridiag;

pub use mathieu::{
    helical_reduced_solve, mathieu_characteristic, mathieu_characteristic_values, truncation, HelicalReduced,
    MathieuResult, Parity, MAX_ABS_Q,
};

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::FieldModel;
use tridiag::SymTridiagonal;

/// Boundary amplitude above which a box counts as too small.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Relative outer-boundary amplitude above which a radial level is not bound.
pub const BOUND_TOLERANCE: f64 = 1e-6;

/// Uniform grid on `[lo, hi]` with `n` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput("grid needs finite lo < hi"));
        }
        if n < 16 {
            return Err(Error::InvalidInput("grid needs at least 16 points"));
        }
        Ok(Self { lo, hi, n })
    }

    /// Node spacing `(hi − lo)/(n − 1)`; both ends are nodes.
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|i| self.lo + h * i as f64).collect()
    }
}

/// Eigenvalues (ascending) and grid eigenfunctions normalized in the
/// trapezoid inner product on `points`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub points: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub eigenfunctions: Vec<Vec<f64>>,
}

impl SpectrumResult {
    /// Trapezoid inner product on the (uniform) sample points.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        trapezoid(&self.points, a, b)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.eigenfunctions.iter().enumerate() {
            for (j, b) in self.eigenfunctions.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.inner(a, b) - want).abs());
            }
        }
        worst
    }
}

fn trapezoid(points: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let h = (points[n - 1] - points[0]) / (n - 1) as f64;
    let mut s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    s -= 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    s * h
}

/// Sign convention: the first sample exceeding 1e-3 of the peak is positive.
fn fix_sign(v: &mut [f64]) {
    let peak = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if let Some(first) = v.iter().find(|a| a.abs() > 1e-3 * peak) {
        if *first < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

/// Dirichlet problem `−(ħ²/2) u'' + w(x) u = E u` on the interior nodes of `grid`.
fn dirichlet_solve(grid: &Grid1D, hbar: f64, w: impl Fn(f64) -> f64, n_levels: usize) -> SpectrumResult {
    let pts = grid.nodes();
    let h = grid.spacing();
    let kin = 0.5 * hbar * hbar / (h * h);
    let interior = &pts[1..pts.len() - 1];
    let d: Vec<f64> = interior.iter().map(|&x| 2.0 * kin + w(x)).collect();
    let e = vec![-kin; interior.len() - 1];
    let (vals, vecs) = SymTridiagonal::new(d, e).lowest_eigenpairs(n_levels);
    let scale = 1.0 / h.sqrt();
    let eigenfunctions = vecs
        .into_iter()
        .map(|v| {
            let mut full = Vec::with_capacity(pts.len());
            full.push(0.0);
            full.extend(v.iter().map(|a| a * scale));
            full.push(0.0);
            fix_sign(&mut full);
            full
        })
        .collect();
    SpectrumResult {
        points: pts,
        eigenvalues: vals,
        eigenfunctions,
    }
}

/// Lowest `n_levels` of the constant-field reduced problem, reported as `E`.
pub fn landau_reduced_solve(
    b: f64,
    k1: f64,
    k2: f64,
    hbar: f64,
    grid: &Grid1D,
    n_levels: usize,
) -> Result<SpectrumResult> {
    if !(b > 0.0) || !(hbar > 0.0) {
        return Err(Error::InvalidInput("B and hbar must be positive"));
    }
    if n_levels == 0 || n_levels > grid.n - 2 {
        return Err(Error::InvalidInput(
            "level count must be between 1 and the interior size",
        ));
    }
    let res = dirichlet_solve(
        grid,
        hbar,
        |z| 0.5 * (b * z - k2).powi(2) + 0.5 * k1 * k1,
        n_levels,
    );
    let g = &res.eigenfunctions[0];
    let peak = g.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let tail = g[1].abs().max(g[g.len() - 2].abs()) / peak;
    if tail > TAIL_TOLERANCE {
        return Err(Error::GridTooSmall {
            boundary_amplitude: tail,
        });
    }
    Ok(res)
}

/// Analytic levels `ħB(n + ½) + k₁²/2`.
pub fn landau_levels(b: f64, k1: f64, hbar: f64, n_levels: usize) -> Vec<f64> {
    (0..n_levels)
        .map(|n| hbar * b * (n as f64 + 0.5) + 0.5 * k1 * k1)
        .collect()
}

/// Normalized Hermite function `ψ_n` of `ξ = √(B/ħ)(z − k₂/B)`, as a function of `z`.
pub fn hermite_function(n: usize, b: f64, k2: f64, hbar: f64, z: f64) -> f64 {
    let s = (b / hbar).sqrt();
    let xi = s * (z - k2 / b);
    let mut prev = 0.0;
    let mut cur = (s * s / core::f64::consts::PI).sqrt().sqrt() * (-0.5 * xi * xi).exp();
    for j in 0..n {
        let next = (2.0 / (j + 1) as f64).sqrt() * xi * cur - (j as f64 / (j + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// L² distance between the `n`-th grid eigenfunction and the Hermite–Gaussian,
/// after aligning signs.
pub fn hermite_check(result: &SpectrumResult, b: f64, k2: f64, hbar: f64, n: usize) -> Result<f64> {
    let psi = result
        .eigenfunctions
        .get(n)
        .ok_or(Error::InvalidInput("level not computed"))?;
    let reference: Vec<f64> = result
        .points
        .iter()
        .map(|&z| hermite_function(n, b, k2, hbar, z))
        .collect();
    let sign = if result.inner(psi, &reference) < 0.0 {
        -1.0
    } else {
        1.0
    };
    let diff: Vec<f64> = psi.iter().zip(&reference).map(|(a, r)| sign * a - r).collect();
    Ok(result.inner(&diff, &diff).max(0.0).sqrt())
}

/// Radial eigenproblem of the cylindrical family for angular quantum number
/// `m` and axial wavenumber `k`.
///
/// With `ρ = u/√R` the operator becomes `−(ħ²/2)u'' + W_eff u` with
/// `W_eff = [(F₁−ħk)² + (F₂+ħm)²/R² + 2V]/2 − ħ²/(8R²)`. The grid samples
/// cell centres `R_i = lo + (i + ½)h`, `h = (hi − lo)/n`, so `R = 0` is never a
/// sample. The outer face is Dirichlet. The inner face is Dirichlet when
/// `lo > 0`; at `lo = 0` the flux through the origin vanishes, which is the
/// regular-solution condition (the conservative form `(1/R)(Rρ')'` is
/// discretized directly, then symmetrized by `√R_i`).
pub fn radial_reduced_solve(
    model: &FieldModel,
    m: i64,
    k: f64,
    hbar: f64,
    grid: &Grid1D,
    n_levels: usize,
) -> Result<SpectrumResult> {
    let FieldModel::Cylindrical { f1, f2, v } = model else {
        return Err(Error::UnsupportedModel(
            "radial solve needs the cylindrical family",
        ));
    };
    if !(grid.lo >= 0.0) {
        return Err(Error::InvalidInput("radial grid must start at R >= 0"));
    }
    if !(hbar > 0.0) || n_levels == 0 || n_levels > grid.n {
        return Err(Error::InvalidInput("invalid hbar or level count"));
    }
    let n = grid.n;
    let h = (grid.hi - grid.lo) / n as f64;
    let r: Vec<f64> = (0..n).map(|i| grid.lo + (i as f64 + 0.5) * h).collect();
    let c = 0.5 * hbar * hbar / (h * h);
    let mut d = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n - 1);
    for i in 0..n {
        let ri = r[i];
        let face_lo = ri - 0.5 * h;
        let face_hi = ri + 0.5 * h;
        // kinetic: c·[ (face_hi + face_lo) ρ_i − face_hi ρ_{i+1} − face_lo ρ_{i−1} ] / R_i
        let mut kin = c * (face_hi + face_lo) / ri;
        if i == 0 && grid.lo > 0.0 {
            // ghost ρ_{−1} = −ρ_0
            kin += c * face_lo / ri;
        }
        if i == n - 1 {
            kin += c * face_hi / ri;
        }
        let w = 0.5
            * ((f1.value(ri) - hbar * k).powi(2) + (f2.value(ri) + hbar * m as f64).powi(2) / (ri * ri))
            + v.value(ri);
        d.push(kin + w);
        if i + 1 < n {
            e.push(-c * face_hi / (ri * r[i + 1]).sqrt());
        }
    }
    let (vals, vecs) = SymTridiagonal::new(d, e).lowest_eigenpairs(n_levels);
    // u_i = √R_i ρ_i is unit-normalized in Σ; return ρ with ∫ρ² R dR = 1
    let scale = 1.0 / h.sqrt();
    let mut eigenvalues = Vec::new();
    let mut eigenfunctions = Vec::new();
    for (lam, u) in vals.into_iter().zip(vecs) {
        let peak = u.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
        if u[n - 1].abs() > BOUND_TOLERANCE * peak {
            break;
        }
        let mut rho: Vec<f64> = u.iter().zip(&r).map(|(a, ri)| a * scale / ri.sqrt()).collect();
        fix_sign(&mut rho);
        eigenvalues.push(lam);
        eigenfunctions.push(rho);
    }
    if eigenvalues.len() < n_levels {
        return Err(Error::NoBoundStates {
            requested: n_levels,
            found: eigenvalues.len(),
        });
    }
    Ok(SpectrumResult {
        points: r,
        eigenvalues,
        eigenfunctions,
    })
}

/// Orthonormality error of radial eigenfunctions in `∫ ρ_a ρ_b R dR` (midpoint rule).
pub fn radial_orthonormality_error(result: &SpectrumResult) -> f64 {
    let r = &result.points;
    if r.len() < 2 {
        return 0.0;
    }
    let h = r[1] - r[0];
    let mut worst: f64 = 0.0;
    for (i, a) in result.eigenfunctions.iter().enumerate() {
        for (j, b) in result.eigenfunctions.iter().enumerate() {
            let dot: f64 = a.iter().zip(b).zip(r).map(|((x, y), ri)| x * y * ri).sum::<f64>() * h;
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).abs());
        }
    }
    worst
}
