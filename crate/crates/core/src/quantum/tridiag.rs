//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e[i]` couples rows `i` and `i+1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        assert!(
            e.len() + 1 == d.len() || (d.is_empty() && e.is_empty()),
            "off-diagonal must be one shorter than the diagonal"
        );
        Self { d, e }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE;
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.d.len() {
            let off = if i == 0 {
                0.0
            } else {
                self.e[i - 1] * self.e[i - 1] / q
            };
            q = self.d[i] - x - off;
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r =
                if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection to full precision.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.len(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `n` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, n: usize) -> Vec<f64> {
        (0..n.min(self.len())).map(|i| self.eigenvalue(i)).collect()
    }

    /// Solves `(T − λ I) x = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, lambda: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        // rows as (sub, diag, sup, sup2) after pivoting
        let mut diag: Vec<f64> = self.d.iter().map(|v| v - lambda).collect();
        let mut sup: Vec<f64> = self.e.clone();
        sup.push(0.0);
        let mut sup2 = vec![0.0; n];
        let mut sub: Vec<f64> = self.e.clone();
        let mut rhs = b.to_vec();
        let floor = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        for i in 0..n.saturating_sub(1) {
            if sub[i].abs() > diag[i].abs() {
                // swap rows i and i+1
                core::mem::swap(&mut diag[i], &mut sub[i]);
                let (a, bb) = (sup[i], diag[i + 1]);
                sup[i] = bb;
                diag[i + 1] = a;
                sup2[i] = sup[i + 1];
                sup[i + 1] = 0.0;
                rhs.swap(i, i + 1);
            }
            if diag[i] == 0.0 {
                diag[i] = floor;
            }
            let f = sub[i] / diag[i];
            diag[i + 1] -= f * sup[i];
            sup[i + 1] -= f * sup2[i];
            rhs[i + 1] -= f * rhs[i];
        }
        if diag[n - 1] == 0.0 {
            diag[n - 1] = floor;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            if i + 1 < n {
                acc -= sup[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= sup2[i] * x[i + 2];
            }
            x[i] = acc / diag[i];
        }
        x
    }

    /// Unit eigenvector for an (accurate) eigenvalue by inverse iteration,
    /// orthogonalized against `previous`.
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.len();
        // deterministic, not orthogonal to low modes
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i * 7919 % 97) as f64 / 97.0))
            .collect();
        for _ in 0..4 {
            for p in previous {
                let c: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(p).for_each(|(a, b)| *a -= c * b);
            }
            let mut w = self.shifted_solve(lambda, &v);
            let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            w.iter_mut().for_each(|a| *a /= norm);
            v = w;
        }
        for p in previous {
            let c: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(p).for_each(|(a, b)| *a -= c * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        v
    }

    /// The `n` lowest eigenpairs; vectors have unit Euclidean norm.
    pub fn lowest_eigenpairs(&self, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let values = self.lowest_eigenvalues(n);
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
        for &lambda in &values {
            let v = self.eigenvector(lambda, &vectors);
            vectors.push(v);
        }
        (values, vectors)
    }
}
