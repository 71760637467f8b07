//! Adaptive Dormand–Prince 5(4) stepper over fixed-size real state vectors.

use num_traits::Float;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_REJECT_HALVINGS: usize = 60;

/// Tolerances and step bounds for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn initial_step<const N: usize, F>(f: &mut F, t0: f64, y0: &[f64; N], k1: &[f64; N], tol: &Tolerances) -> f64
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let scale = |i: usize, y: &[f64; N]| tol.abs_tol + tol.rel_tol * y[i].abs();
    let rms = |v: &[f64; N], y: &[f64; N]| {
        let s: f64 = (0..N).map(|i| (v[i] / scale(i, y)).powi(2)).sum();
        (s / N as f64).sqrt()
    };
    let d0 = rms(y0, y0);
    let d1 = rms(k1, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(tol.max_step);
    let y1 = axpy(y0, h0, &[(1.0, k1)]);
    let h1 = match f(t0 + h0, &y1) {
        Ok(k2) => {
            let diff: [f64; N] = core::array::from_fn(|i| (k2[i] - k1[i]) / h0);
            let d2 = rms(&diff, y0);
            if d1.max(d2) <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / d1.max(d2)).powf(0.2)
            }
        }
        Err(_) => h0,
    };
    (100.0 * h0).min(h1).min(tol.max_step)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (> `t0`).
///
/// `on_step(t, y, dy)` is called at `t0` and after every accepted step with
/// the new state and its derivative. A stage evaluation that fails triggers
/// a step rejection; if shrinking the step cannot avoid the failure, the
/// error from `f` is returned.
pub fn solve<const N: usize, F, S>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: &Tolerances,
    mut on_step: S,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    S: FnMut(f64, &[f64; N], &[f64; N]) -> Result<()>,
{
    if !(t_end > t0) {
        return Err(Error::InvalidInput("integration end must exceed start"));
    }
    if !(tol.rel_tol > 0.0 && tol.abs_tol > 0.0 && tol.max_step > 0.0) {
        return Err(Error::InvalidInput("tolerances and max step must be positive"));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    on_step(t, &y, &k1)?;
    let mut h = initial_step(&mut f, t0, &y0, &k1, tol);
    let mut last_err: Option<Error> = None;
    let mut failures = 0usize;

    while t < t_end {
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_min {
            return Err(last_err.unwrap_or(Error::StepFailure { t, step: h }));
        }

        let trial = (|| -> Result<([f64; N], [f64; N], f64)> {
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = f(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                t + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y_new = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(t + h, &y_new)?;
            let mut sum = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = tol.abs_tol + tol.rel_tol * y[i].abs().max(y_new[i].abs());
                sum += (e / sc) * (e / sc);
            }
            Ok((y_new, k7, (sum / N as f64).sqrt()))
        })();

        match trial {
            Ok((y_new, k7, err)) if err <= 1.0 => {
                t = if last { t_end } else { t + h };
                y = y_new;
                k1 = k7;
                failures = 0;
                last_err = None;
                on_step(t, &y, &k1)?;
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                h = (h * factor).min(tol.max_step);
            }
            Ok((_, _, err)) => {
                h *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            }
            Err(e) => {
                failures += 1;
                if failures > MAX_REJECT_HALVINGS {
                    return Err(e);
                }
                last_err = Some(e);
                h *= 0.5;
            }
        }
    }
    Ok(y)
}
