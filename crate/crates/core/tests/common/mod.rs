//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superint_core::fields::{FieldModel, RadialProfile};
use superint_core::quantum::Parity;
use superint_core::sampling::StateSampler;
use superint_core::{PhaseState, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Axially symmetric sample: F₁ = 0.3 + 0.5R², F₂ = 0.4R², V = R²/2.
pub fn cylindrical() -> FieldModel {
    FieldModel::cylindrical(
        RadialProfile::polynomial(vec![0.3, 0.0, 0.5]),
        RadialProfile::polynomial(vec![0.0, 0.0, 0.4]),
        RadialProfile::polynomial(vec![0.0, 0.0, 0.5]),
    )
}

/// One representative of every named system (plus a second helical gauge).
pub fn named_models() -> Vec<(&'static str, FieldModel)> {
    vec![
        ("constant_b", FieldModel::constant_b(1.3).unwrap()),
        ("helical", FieldModel::helical(3.0, 3.0, 0.0).unwrap()),
        ("helical_shifted", FieldModel::helical(1.5, -2.0, 0.7).unwrap()),
        ("monopole", FieldModel::monopole(1.0, 1.0).unwrap()),
        ("cylindrical", cylindrical()),
    ]
}

pub fn points(model: &FieldModel, n: usize, seed: u64) -> Vec<Vec3> {
    StateSampler::default().points(&mut rng(seed), model, n).unwrap()
}

pub fn states(model: &FieldModel, n: usize, seed: u64) -> Vec<PhaseState> {
    StateSampler::default().states(&mut rng(seed), model, n).unwrap()
}

/// States with `|p₁| > 0.1`, as required where `Bx/p₁` appears.
pub fn states_p1(model: &FieldModel, n: usize, seed: u64) -> Vec<PhaseState> {
    StateSampler::default()
        .with_min_abs_p1(0.1)
        .states(&mut rng(seed), model, n)
        .unwrap()
}

/// Figure-caption initial state of the helical system.
pub fn figure_state(z0: f64, zdot0: f64) -> PhaseState {
    PhaseState::new(Vec3::new(0.08, 0.05, z0), Vec3::new(1.0, 0.0, zdot0))
}

/// Bounded monopole orbit whose cone `x̂·X = g` keeps it in `z > 0`, clear of
/// the Dirac string.
pub fn monopole_orbit_state() -> PhaseState {
    PhaseState::new(Vec3::new(1.0, 0.0, 0.4), Vec3::new(0.0, 0.8, 0.05))
}

/// Fixed-step RK4 for y'' + (a − 2q cos 2x) y = 0 on [0, π/2].
fn shoot(a: f64, q: f64, y0: f64, dy0: f64) -> (f64, f64) {
    let n = 4000;
    let h = std::f64::consts::FRAC_PI_2 / n as f64;
    let f = |x: f64, y: f64, dy: f64| (dy, -(a - 2.0 * q * (2.0 * x).cos()) * y);
    let (mut y, mut dy) = (y0, dy0);
    for i in 0..n {
        let x = i as f64 * h;
        let k1 = f(x, y, dy);
        let k2 = f(x + 0.5 * h, y + 0.5 * h * k1.0, dy + 0.5 * h * k1.1);
        let k3 = f(x + 0.5 * h, y + 0.5 * h * k2.0, dy + 0.5 * h * k2.1);
        let k4 = f(x + h, y + h * k3.0, dy + h * k3.1);
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dy += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    (y, dy)
}

/// Characteristic value by bisection on the quarter-period boundary condition.
///
/// Even solutions start at (1, 0), odd at (0, 1); even-r cosines and odd-r
/// sines need y'(π/2) = 0, the other two y(π/2) = 0.
pub fn shooting_oracle(r: usize, parity: Parity, q: f64, guess: f64) -> f64 {
    let (y0, dy0) = match parity {
        Parity::Even => (1.0, 0.0),
        Parity::Odd => (0.0, 1.0),
    };
    let wants_slope = matches!((parity, r % 2), (Parity::Even, 0) | (Parity::Odd, 1));
    let g = |a: f64| {
        let (y, dy) = shoot(a, q, y0, dy0);
        if wants_slope {
            dy
        } else {
            y
        }
    };
    let (mut lo, mut hi) = (guess - 0.25, guess + 0.25);
    let (mut glo, ghi) = (g(lo), g(hi));
    assert!(glo * ghi < 0.0, "no bracket for r={r} {parity:?} q={q}");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm * glo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Five-point central difference, `h = 1e-3`. The three-point rule leaves an
/// `O(h²)` truncation error near 1e-8 for the steeper `ζ(τ)` profiles.
pub fn central_derivative(f: impl Fn(f64) -> f64, t: f64) -> f64 {
    let h = 1e-3;
    (8.0 * (f(t + h) - f(t - h)) - (f(t + 2.0 * h) - f(t - 2.0 * h))) / (12.0 * h)
}
