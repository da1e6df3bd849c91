//! Adaptive Gauss–Kronrod (7/15) quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rtol: 1e-12,
            atol: 1e-14,
            max_subdivisions: 500,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rtol: f64, atol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            rtol,
            atol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rtol.is_nan() || self.atol.is_nan() || self.rtol <= 0.0 || self.atol <= 0.0 {
            return Err(Error::invalid("quadrature tolerances must be strictly positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_sum;
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]` (either orientation).
///
/// Terminates once the summed error estimate is at most
/// `max(atol, rtol * |result|)`; fails with `ToleranceNotMet` if that needs
/// more than `cfg.max_subdivisions` bisections.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("quadrature limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_fn(f, b, a, cfg).map(|v| -v);
    }

    let mut segments = vec![gauss_kronrod(&f, a, b)?];
    let mut subdivisions = 0;
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if err <= cfg.atol.max(cfg.rtol * total.abs()) {
            return Ok(total);
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                a,
                b,
                estimate: err,
                subdivisions,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::ToleranceNotMet {
                a,
                b,
                estimate: err,
                subdivisions,
            });
        }
        segments.push(gauss_kronrod(&f, seg.a, mid)?);
        segments.push(gauss_kronrod(&f, mid, seg.b)?);
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_is_exact() {
        let v = integrate_fn(Ok, 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let cfg = QuadratureConfig::default();
        let fwd = integrate_fn(|t| Ok(t * t), 0.0, 2.0, &cfg).unwrap();
        let bwd = integrate_fn(|t| Ok(t * t), 2.0, 0.0, &cfg).unwrap();
        assert_eq!(fwd, -bwd);
    }

    #[test]
    fn subdivision_limit_reports_tolerance_not_met() {
        let cfg = QuadratureConfig::new(1e-14, 1e-16, 1).unwrap();
        let r = integrate_fn(|t: f64| Ok(t.abs().sqrt()), -1.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })), "{r:?}");
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(QuadratureConfig::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-10, 0).is_err());
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate_fn(
            |t| if t > 0.5 { Err(Error::domain("x")) } else { Ok(1.0) },
            0.0,
            1.0,
            &QuadratureConfig::default(),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
