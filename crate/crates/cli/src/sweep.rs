//! Randomized search for maps that satisfy the derivative condition yet cover some value
//! more than `p` times.

use hvl_core::criterion::check_remark_condition;
use hvl_core::valence::valence_scan;
use hvl_core::{Complex64, FunctionSpec, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::{CliError, EXIT_INPUT};

/// Radius of the circle whose image is scanned for each kept sample.
pub const SWEEP_RADIUS: f64 = 0.999;
/// Angular samples per circle for the margin estimate.
const MARGIN_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub trials: usize,
    pub p: u32,
    pub m: u32,
    pub max_degree: u32,
    pub coefficient_scale: f64,
    pub seed: u64,
    pub margin_requirement: f64,
    pub grid: (usize, usize),
    /// Stop drawing once this many samples have been kept; `trials` stays the upper bound.
    #[serde(default)]
    pub target_kept: Option<usize>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::new(EXIT_INPUT, msg));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.p == 0 || self.m < 2 {
            return bad("need p >= 1 and m >= 2");
        }
        if self.max_degree <= self.p {
            return bad("max_degree must exceed p");
        }
        if !(self.coefficient_scale >= 0.0 && self.coefficient_scale.is_finite()) {
            return bad("coefficient_scale must be a non-negative number");
        }
        if self.margin_requirement.is_nan() || self.margin_requirement < 0.0 {
            return bad("margin_requirement must be non-negative");
        }
        if self.grid.0 == 0 || self.grid.1 == 0 {
            return bad("grid must be non-empty");
        }
        if self.target_kept == Some(0) {
            return bad("target_kept must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub index: usize,
    /// Coefficients of `z^p, z^(p+1), ...`.
    pub coeffs: Vec<Complex64>,
    pub margin: Option<f64>,
    pub kept: bool,
    pub max_valence: Option<i64>,
    pub consistent_with_p: Option<bool>,
    pub counterexample_candidate: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub kept: usize,
    pub scan_failures: usize,
    pub candidates: usize,
    pub samples: Vec<SweepSample>,
}

/// Draws `a_n = scale * rho * e^{i theta}` for `n = p+1 ..= max_degree`.
pub fn draw_coefficients(rng: &mut ChaCha8Rng, cfg: &SweepConfig) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for _ in cfg.p + 1..=cfg.max_degree {
        let rho: f64 = rng.random();
        let theta: f64 = rng.random::<f64>() * TAU;
        coeffs.push(Complex64::from_polar(cfg.coefficient_scale * rho, theta));
    }
    coeffs
}

pub fn run_sweep(cfg: &SweepConfig, qcfg: &QuadratureConfig) -> Result<SweepReport, CliError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::with_capacity(cfg.trials);
    let mut kept = 0;
    for index in 0..cfg.trials {
        if cfg.target_kept.is_some_and(|target| kept >= target) {
            break;
        }
        let coeffs = draw_coefficients(&mut rng, cfg);
        let mut sample = SweepSample {
            index,
            coeffs: coeffs.clone(),
            margin: None,
            kept: false,
            max_valence: None,
            consistent_with_p: None,
            counterexample_candidate: false,
            error: None,
        };
        let map = FunctionSpec::poly_series(cfg.p, coeffs).and_then(|h| h.derive_g(cfg.m));
        let map = match map {
            Ok(map) => map,
            Err(e) => {
                sample.error = Some(e.to_string());
                samples.push(sample);
                continue;
            }
        };
        match check_remark_condition(map.h(), cfg.m, MARGIN_GRID) {
            Ok(margin) => {
                sample.margin = Some(margin);
                sample.kept = margin > cfg.margin_requirement;
            }
            Err(e) => sample.error = Some(e.to_string()),
        }
        if sample.kept {
            kept += 1;
            match valence_scan(&map, SWEEP_RADIUS, cfg.grid, qcfg) {
                Ok(report) => {
                    sample.max_valence = Some(report.max_valence);
                    sample.consistent_with_p = Some(report.consistent_with_p);
                    sample.counterexample_candidate = report.max_valence > cfg.p as i64;
                }
                Err(e) => sample.error = Some(e.to_string()),
            }
        }
        samples.push(sample);
    }
    Ok(SweepReport {
        config: cfg.clone(),
        kept,
        scan_failures: samples.iter().filter(|s| s.kept && s.max_valence.is_none()).count(),
        candidates: samples.iter().filter(|s| s.counterexample_candidate).count(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SweepConfig {
        SweepConfig {
            trials: 3,
            p: 1,
            m: 2,
            max_degree: 3,
            coefficient_scale: 0.2,
            seed: 7,
            margin_requirement: 0.0,
            grid: (16, 16),
            target_kept: None,
        }
    }

    #[test]
    fn coefficient_stream_is_seeded() {
        let c = cfg();
        let a = draw_coefficients(&mut ChaCha8Rng::seed_from_u64(1), &c);
        let b = draw_coefficients(&mut ChaCha8Rng::seed_from_u64(1), &c);
        let other = draw_coefficients(&mut ChaCha8Rng::seed_from_u64(2), &c);
        assert_eq!(a, b);
        assert_ne!(a, other);
        assert_eq!(a.len(), 3);
        assert_eq!(a[0], Complex64::new(1.0, 0.0));
        assert!(a[1..].iter().all(|z| z.norm() <= 0.2));
    }

    #[test]
    fn small_sweep_is_reproducible() {
        let q = QuadratureConfig::default();
        let a = run_sweep(&cfg(), &q).unwrap();
        let b = run_sweep(&cfg(), &q).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples.len(), 3);
        assert_eq!(a.candidates, 0);
    }

    #[test]
    fn target_kept_stops_early() {
        let c = SweepConfig {
            trials: 200,
            target_kept: Some(2),
            coefficient_scale: 0.05,
            ..cfg()
        };
        let r = run_sweep(&c, &QuadratureConfig::default()).unwrap();
        assert_eq!(r.kept, 2);
        assert!(r.samples.last().unwrap().kept);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig { trials: 0, ..cfg() }.validate().is_err());
        assert!(SweepConfig { max_degree: 1, ..cfg() }.validate().is_err());
        assert!(SweepConfig { m: 1, ..cfg() }.validate().is_err());
        assert!(cfg().validate().is_ok());
    }
}
