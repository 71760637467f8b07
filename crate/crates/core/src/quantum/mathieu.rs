//! Mathieu characteristic values `a_r(q)`, `b_r(q)` of
//! `y'' + (a − 2q cos 2w) y = 0` from truncated Fourier matrices, and the
//! helical-field reduced equation.

use alloc::vec::Vec;

use num_traits::Float;

use super::tridiag::SymTridiagonal;
use crate::dynamics::rk45::{self, Tolerances};
use crate::error::{Error, Result};

/// Largest `|q|` accepted.
pub const MAX_ABS_Q: f64 = 1e4;

/// `a_r` (cosine-type) or `b_r` (sine-type) characteristic values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Fourier truncation for a given `q`: `50 + 2⌈√|q|⌉` plus headroom for `r`.
pub fn truncation(q: f64, r: usize) -> usize {
    50 + 2 * q.abs().sqrt().ceil() as usize + r
}

/// One of the four Fourier blocks: cos 2kw, cos (2k+1)w, sin (2k+1)w, sin (2k+2)w.
fn block(q: f64, parity: Parity, odd_order: bool, n: usize) -> SymTridiagonal {
    let mut d: Vec<f64> = (0..n)
        .map(|k| {
            let m = match (parity, odd_order) {
                (Parity::Even, false) => 2 * k,
                (_, true) => 2 * k + 1,
                (Parity::Odd, false) => 2 * k + 2,
            } as f64;
            m * m
        })
        .collect();
    let mut e = alloc::vec![q; n - 1];
    match (parity, odd_order) {
        // A₀ rescaled by √2 to symmetrize the first coupling
        (Parity::Even, false) => e[0] = core::f64::consts::SQRT_2 * q,
        (Parity::Even, true) => d[0] += q,
        (Parity::Odd, true) => d[0] -= q,
        (Parity::Odd, false) => {}
    }
    SymTridiagonal::new(d, e)
}

/// Characteristic value `a_r(q)` (even) or `b_r(q)` (odd, `r ≥ 1`).
pub fn mathieu_characteristic(r: usize, parity: Parity, q: f64) -> Result<f64> {
    if !(q.abs() <= MAX_ABS_Q) {
        return Err(Error::InvalidInput("|q| exceeds the supported range"));
    }
    if parity == Parity::Odd && r == 0 {
        return Err(Error::InvalidInput("odd characteristic values start at r = 1"));
    }
    let odd_order = r % 2 == 1;
    let index = match parity {
        Parity::Even => r / 2,
        Parity::Odd => (r - 1) / 2,
    };
    let m = block(q, parity, odd_order, truncation(q, r));
    Ok(m.eigenvalue(index))
}

/// Characteristic values for `r = 0..=r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MathieuResult {
    pub q: f64,
    /// `a_0 … a_{r_max}`.
    pub even: Vec<f64>,
    /// `b_1 … b_{r_max}` (index 0 holds `b_1`).
    pub odd: Vec<f64>,
}

impl MathieuResult {
    pub fn value(&self, r: usize, parity: Parity) -> Option<f64> {
        match parity {
            Parity::Even => self.even.get(r).copied(),
            Parity::Odd => r.checked_sub(1).and_then(|i| self.odd.get(i).copied()),
        }
    }
}

pub fn mathieu_characteristic_values(q: f64, r_max: usize) -> Result<MathieuResult> {
    let even = (0..=r_max)
        .map(|r| mathieu_characteristic(r, Parity::Even, q))
        .collect::<Result<Vec<_>>>()?;
    let odd = (1..=r_max)
        .map(|r| mathieu_characteristic(r, Parity::Odd, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(MathieuResult { q, even, odd })
}

/// The reduced helical-field equation
/// `ħ²χ'' = (−2AK cos(z/β − φ_K) + A² + K² − 2E) χ` over one period `[0, 2π|β|]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HelicalReduced {
    /// Mathieu parameters in the variable `w = φ_K/2 − z/(2β)`.
    pub a: f64,
    pub q: f64,
    pub z: Vec<f64>,
    /// Fundamental solution with `χ(0) = 1, χ'(0) = 0`.
    pub c: Vec<f64>,
    pub c_prime: Vec<f64>,
    /// Fundamental solution with `χ(0) = 0, χ'(0) = 1`.
    pub s: Vec<f64>,
    pub s_prime: Vec<f64>,
}

impl HelicalReduced {
    /// `c s' − s c'` at each sample.
    pub fn wronskian(&self) -> Vec<f64> {
        (0..self.z.len())
            .map(|i| self.c[i] * self.s_prime[i] - self.s[i] * self.c_prime[i])
            .collect()
    }

    /// Trace of the monodromy matrix over one period; `±2` at band edges.
    pub fn monodromy_trace(&self) -> f64 {
        let n = self.z.len() - 1;
        self.c[n] + self.s_prime[n]
    }
}

pub fn helical_reduced_solve(
    amplitude: f64,
    beta: f64,
    k: f64,
    phi_k: f64,
    hbar: f64,
    energy: f64,
) -> Result<HelicalReduced> {
    if !(k >= 0.0) {
        return Err(Error::InvalidInput("K must be nonnegative"));
    }
    if beta == 0.0 || !(hbar > 0.0) {
        return Err(Error::InvalidInput("beta must be nonzero and hbar positive"));
    }
    let shift = amplitude * amplitude + k * k - 2.0 * energy;
    let a = -4.0 * beta * beta * shift / (hbar * hbar);
    let q = -4.0 * beta * beta * amplitude * k / (hbar * hbar);
    let period = 2.0 * core::f64::consts::PI * beta.abs();
    let h2 = hbar * hbar;
    let rhs = |z: f64, y: &[f64; 4]| {
        let w = (-2.0 * amplitude * k * (z / beta - phi_k).cos() + shift) / h2;
        Ok([y[1], w * y[0], y[3], w * y[2]])
    };
    let tol = Tolerances {
        rel_tol: 1e-13,
        abs_tol: 1e-13,
        max_step: period / 200.0,
    };
    let mut out = HelicalReduced {
        a,
        q,
        z: Vec::new(),
        c: Vec::new(),
        c_prime: Vec::new(),
        s: Vec::new(),
        s_prime: Vec::new(),
    };
    rk45::solve(rhs, 0.0, [1.0, 0.0, 0.0, 1.0], period, &tol, |z, y, _| {
        out.z.push(z);
        out.c.push(y[0]);
        out.c_prime.push(y[1]);
        out.s.push(y[2]);
        out.s_prime.push(y[3]);
        Ok(())
    })?;
    Ok(out)
}
