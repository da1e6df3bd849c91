//! Dormand–Prince 5(4) with PI step-size control over fixed-size states.
//!
//! Steps are clipped so that every requested sample time is hit exactly.

use crate::error::{Error, Result};

use super::IntegratorConfig;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (equal to the last row of `A`).
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Fifth minus fourth order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;

/// What the observer wants after an accepted step.
pub(crate) enum Flow {
    Continue,
    Stop,
}

/// Counters of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[[f64; N]; 7], row: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (j, a) in row.iter().enumerate() {
        if *a != 0.0 {
            for i in 0..N {
                out[i] += h * a * k[j][i];
            }
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction).
///
/// `on_step(t, y, h)` sees every accepted step; `on_sample(t, y, h)` sees the
/// initial state and every state at `t0 + i stride` and `t_end`.
pub(crate) fn solve<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    cfg: &IntegratorConfig,
    mut on_step: impl FnMut(f64, &[f64; N]) -> Flow,
    mut on_sample: impl FnMut(f64, &[f64; N], f64),
) -> Result<Stats> {
    cfg.validate()?;
    let mut stats = Stats::default();
    on_sample(t0, &y0, 0.0);
    if t_end == t0 {
        return Ok(stats);
    }
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();
    let n_samples = (span / cfg.stride).ceil().max(1.0) as u64;
    let sample_time = |i: u64| {
        if i >= n_samples {
            t_end
        } else {
            t0 + dir * cfg.stride * i as f64
        }
    };

    let mut t = t0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y)?;
    let mut h = cfg.h_init.min(cfg.h_max).min(span);
    let mut err_prev: f64 = 1e-4;
    let mut next = 1u64;
    let mut target = sample_time(next);

    loop {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::StepLimitExceeded {
                max_steps: cfg.max_steps,
                t,
            });
        }
        let remaining = (target - t).abs();
        let clipped = h >= remaining * (1.0 - 1e-12);
        let step = if clipped { remaining } else { h };
        if step <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h: step });
        }
        let sh = dir * step;

        let mut failed = false;
        for s in 1..7 {
            let ys = axpy(&y, sh, &k, &A[s][..s]);
            match f(t + C[s] * sh, &ys) {
                Ok(v) if v.iter().all(|x| x.is_finite()) => k[s] = v,
                Ok(_) | Err(Error::Domain(_)) => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            stats.rejected += 1;
            h = step * 0.25;
            continue;
        }
        let y_new = axpy(&y, sh, &k, &B);
        let mut acc = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (j, w) in E.iter().enumerate() {
                e += w * k[j][i];
            }
            let scale = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
            acc += (sh * e / scale).powi(2);
        }
        let err = (acc / N as f64).sqrt();

        if err <= 1.0 {
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-ALPHA) * err_prev.powf(BETA)).clamp(FAC_MIN, FAC_MAX)
            };
            err_prev = err.max(1e-4);
            stats.accepted += 1;
            t = if clipped { target } else { t + sh };
            y = y_new;
            k[0] = k[6];
            let proposal = (step * fac).min(cfg.h_max);
            // A clipped step says nothing about how large h may be.
            h = if clipped {
                h.max(proposal).min(cfg.h_max)
            } else {
                proposal
            };
            if let Flow::Stop = on_step(t, &y) {
                return Ok(stats);
            }
            if clipped {
                on_sample(t, &y, step);
                if next >= n_samples {
                    return Ok(stats);
                }
                next += 1;
                target = sample_time(next);
            }
        } else {
            stats.rejected += 1;
            let fac = (SAFETY * err.powf(-ALPHA)).clamp(FAC_MIN, 1.0);
            h = step * fac;
        }
    }
}
