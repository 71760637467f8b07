//! Jacobi elliptic functions and elliptic integrals of the first kind.
//!
//! `sn, cn, dn` use the arithmetic-geometric mean with descending Landen
//! back-substitution after reducing the argument modulo `4K`. The incomplete
//! integral `F(φ, k)` is evaluated through Carlson's `R_F`.

use core::f64::consts::FRAC_PI_2;

use num_traits::Float;

const MAX_LEVELS: usize = 12;
const SERIES_MODULUS: f64 = 1e-7;

/// `(sn, cn, dn)` of `(u, k)` for modulus `0 ≤ k ≤ 1`.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> (f64, f64, f64) {
    let k = k.abs().min(1.0);
    if k < SERIES_MODULUS {
        // first-order correction in m = k²
        let m = k * k;
        let (s, c) = u.sin_cos();
        let shift = 0.25 * m * (u - s * c);
        return (s - shift * c, c + shift * s, 1.0 - 0.5 * m * s * s);
    }
    if k == 1.0 {
        let sech = 1.0 / u.cosh();
        return (u.tanh(), sech, sech);
    }

    let kc = (1.0 - k * k).sqrt();
    // Reduce into one real period. K is exact to rounding so the reduced
    // argument inherits only the error of the subtraction.
    let quarter = complete_k(k);
    let u = reduce(u, 4.0 * quarter);

    let mut a = [0.0; MAX_LEVELS + 1];
    let mut c = [0.0; MAX_LEVELS + 1];
    a[0] = 1.0;
    let mut b = kc;
    c[0] = k;
    let mut n = 0;
    while n < MAX_LEVELS && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    let mut phi_prev = phi;
    for level in (1..=n).rev() {
        phi_prev = phi;
        phi = 0.5 * (phi + (c[level] / a[level] * phi.sin()).asin());
    }
    let (s, cphi) = phi.sin_cos();
    let dn = if n == 0 {
        1.0
    } else {
        cphi / (phi_prev - phi).cos()
    };
    (s, cphi, dn)
}

/// Jacobi `sn(u, k)`.
pub fn jacobi_sn(u: f64, k: f64) -> f64 {
    jacobi_sn_cn_dn(u, k).0
}

fn reduce(u: f64, period: f64) -> f64 {
    let r = u - period * (u / period).round();
    // keep the sign convention symmetric around zero
    if r > 0.5 * period {
        r - period
    } else if r < -0.5 * period {
        r + period
    } else {
        r
    }
}

/// Arithmetic-geometric mean of two nonnegative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

/// Complete elliptic integral `K(k) = π / (2 AGM(1, √(1−k²)))`; infinite at `k = 1`.
pub fn complete_k(k: f64) -> f64 {
    let kc = (1.0 - k * k).max(0.0).sqrt();
    if kc == 0.0 {
        return f64::INFINITY;
    }
    FRAC_PI_2 / agm(1.0, kc)
}

/// Carlson's symmetric integral `R_F(x, y, z)` (at most one argument zero).
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    let mu = (x + y + z) / 3.0;
    1.0 / mu.sqrt()
}

/// Incomplete integral `F(φ, k)` for `|φ| ≤ π/2`.
pub fn incomplete_f(phi: f64, k: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)
}

/// Smallest `u ∈ [0, K]` with `sn(u, k) = s`, for `0 ≤ s ≤ 1`.
pub fn inverse_sn(s: f64, k: f64) -> f64 {
    incomplete_f(s.clamp(0.0, 1.0).asin(), k)
}
