//! The boundary phase function `F(t) = (2p+m-1) t + 2 arg H(e^{it})` and the
//! root-count test on the levels `F(t) = 2 k pi`.
//!
//! `arg H` is taken on a continuous branch anchored at the principal value at `t = -pi`,
//! so `F` is continuous on `[-pi, pi]` and its level crossings can be bracketed and
//! bisected. Every sign change of `F - 2 k pi` on the sample grid yields a root; grid
//! minima of `|F - 2 k pi|` without a sign change are refined and either resolved into
//! a pair of crossings or flagged as suspected tangencies.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::function::{uniform_angles, FunctionSpec, HarmonicMapSpec};
use crate::phase::{unwrap_on_circle, winding_on_circle, PhaseTable};
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionConfig {
    /// Samples of `t` over `[-pi, pi)`; a power of two, at least 1024.
    pub grid_size: usize,
    pub bisect_tol: f64,
    pub tangency_threshold: f64,
    pub h_nonvanish_tol: f64,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        CriterionConfig {
            grid_size: 8192,
            bisect_tol: 1e-12,
            tangency_threshold: 1e-7,
            h_nonvanish_tol: 1e-9,
        }
    }
}

impl CriterionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 1024 || !self.grid_size.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid_size must be a power of two >= 1024, got {}",
                self.grid_size
            )));
        }
        if !(self.bisect_tol > 0.0) {
            return Err(Error::InvalidParameter("bisect_tol must be positive".into()));
        }
        if !(self.tangency_threshold >= 0.0) || !(self.h_nonvanish_tol >= 0.0) {
            return Err(Error::InvalidParameter("thresholds must be non-negative".into()));
        }
        Ok(())
    }
}

/// One solution of `F(t) = 2 k pi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub k: i64,
    pub t: f64,
    /// `f(e^{it})`, the cusp image.
    pub f_value_at_root: Complex64,
    pub suspected_tangency: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub p: u32,
    pub m: u32,
    pub roots: Vec<RootRecord>,
    pub per_k_counts: BTreeMap<i64, usize>,
    pub total_roots: usize,
    /// `h` analytic on the closed disk (no poles of `h'` on the circle).
    pub h_analytic_closed_disk: bool,
    pub h_nonvanishing: bool,
    pub h_min_modulus: Option<f64>,
    /// Winding of `H(e^{it})` about the origin.
    pub h_winding: Option<i64>,
    /// `(F(-pi), F(pi-))` on the continuous branch.
    pub f_range: Option<(f64, f64)>,
    /// `min Re(1 + z h''/h') + (m-1)/2` over the sampled circles.
    pub remark_margin: Option<f64>,
    pub hypotheses_hold: bool,
    pub theorem_applies: bool,
    pub notes: Vec<String>,
}

/// `K = {0, +-1, ..., +-floor((2p+m+1)/2)}`.
pub fn level_indices(p: u32, m: u32) -> std::ops::RangeInclusive<i64> {
    let kmax = (2 * p + m).div_ceil(2) as i64;
    -kmax..=kmax
}

fn boundary_point(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Continuous branch of `arg H(e^{it})` on `[-pi, pi]`.
pub fn unwrap_arg_h(spec: &FunctionSpec, grid_size: usize, vanish_tol: f64) -> Result<PhaseTable> {
    if let Some(&at) = spec.boundary_poles().first() {
        return Err(Error::HPoleOnBoundary { at });
    }
    unwrap_on_circle(
        |t| {
            spec.eval_big_h(boundary_point(t)).map_err(|e| match e {
                Error::Pole { at } => Error::HPoleOnBoundary { at },
                other => other,
            })
        },
        grid_size,
        vanish_tol,
    )
}

/// `F(t)` using `table` to select the branch.
pub fn phase_function(spec: &FunctionSpec, m: u32, t: f64, table: &PhaseTable) -> Result<f64> {
    let value = spec.eval_big_h(boundary_point(t))?;
    Ok(slope(spec.p(), m) * t + 2.0 * table.phase_at(t, value))
}

fn slope(p: u32, m: u32) -> f64 {
    (2 * p + m - 1) as f64
}

/// `F'(t) = m + 1 + 2 Re(e^{it} h''(e^{it}) / h'(e^{it}))`.
pub fn phase_function_derivative(spec: &FunctionSpec, m: u32, t: f64) -> Result<f64> {
    let z = boundary_point(t);
    let hp = spec.eval_h_prime(z)?;
    if hp.norm() == 0.0 {
        return Err(Error::CriticalPoint { at: z });
    }
    let hpp = spec.eval_h_second(z)?;
    Ok(m as f64 + 1.0 + 2.0 * (z * hpp / hp).re)
}

struct Level<'a> {
    spec: &'a FunctionSpec,
    m: u32,
    table: &'a PhaseTable,
    target: f64,
}

impl Level<'_> {
    fn offset(&self, t: f64) -> f64 {
        // The table was built from the same evaluator, so this cannot fail inside [-pi, pi].
        phase_function(self.spec, self.m, t, self.table).expect("H evaluable on table range")
            - self.target
    }

    fn node_offset(&self, j: usize) -> f64 {
        slope(self.spec.p(), self.m) * self.table.t[j] + 2.0 * self.table.phase[j] - self.target
    }

    /// Bisects a bracketing interval until the residual drops below `tol` or `t` stops moving.
    fn bisect(&self, mut a: f64, mut da: f64, mut b: f64, tol: f64) -> f64 {
        let mut best = (a, da.abs());
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let dm = self.offset(mid);
            if dm.abs() < best.1 {
                best = (mid, dm.abs());
            }
            if dm == 0.0 || ((b - a) < tol && dm.abs() < tol) {
                return mid;
            }
            if (dm < 0.0) == (da < 0.0) {
                a = mid;
                da = dm;
            } else {
                b = mid;
            }
        }
        best.0
    }

    /// Golden-section search for the minimizer of `sign * offset` on `[a, b]`.
    fn extremum(&self, mut a: f64, mut b: f64, sign: f64) -> (f64, f64) {
        let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
        let mut x1 = b - ratio * (b - a);
        let mut x2 = a + ratio * (b - a);
        let mut f1 = sign * self.offset(x1);
        let mut f2 = sign * self.offset(x2);
        for _ in 0..120 {
            if b - a < 1e-14 {
                break;
            }
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = sign * self.offset(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = sign * self.offset(x2);
            }
        }
        if f1 < f2 {
            (x1, sign * f1)
        } else {
            (x2, sign * f2)
        }
    }

    /// Returns `(t, tangent)` pairs for this level.
    fn solve(&self, cfg: &CriterionConfig) -> Vec<(f64, bool)> {
        let n = self.table.t.len();
        let d: Vec<f64> = (0..n).map(|j| self.node_offset(j)).collect();
        let mut found = Vec::new();
        for j in 0..n - 1 {
            if d[j] == 0.0 {
                found.push((self.table.t[j], false));
            } else if d[j] * d[j + 1] < 0.0 {
                found.push((self.bisect(self.table.t[j], d[j], self.table.t[j + 1], cfg.bisect_tol), false));
            }
        }
        for j in 1..n - 1 {
            let (l, c, r) = (d[j - 1], d[j], d[j + 1]);
            let same_sign = l * c > 0.0 && c * r > 0.0;
            if !same_sign || c.abs() > l.abs() || c.abs() > r.abs() {
                continue;
            }
            let sign = c.signum();
            let (lo, hi) = (self.table.t[j - 1], self.table.t[j + 1]);
            let (t_star, d_star) = self.extremum(lo, hi, sign);
            if d_star.abs() < cfg.tangency_threshold {
                found.push((t_star, true));
            } else if d_star * sign < 0.0 {
                found.push((self.bisect(lo, l, t_star, cfg.bisect_tol), false));
                found.push((self.bisect(t_star, d_star, hi, cfg.bisect_tol), false));
            }
        }
        found
    }
}

/// All solutions of `F(t) = 2 k pi`, `k` in `K`, on `[-pi, pi)`, sorted by `t`.
pub fn find_criterion_roots(
    map: &HarmonicMapSpec,
    table: &PhaseTable,
    cfg: &CriterionConfig,
    qcfg: &QuadratureConfig,
) -> Result<Vec<RootRecord>> {
    let spec = map.h();
    let levels: Vec<i64> = level_indices(spec.p(), map.m()).collect();
    let per_level: Vec<Vec<(i64, f64, bool)>> = levels
        .par_iter()
        .map(|&k| {
            let level = Level {
                spec,
                m: map.m(),
                table,
                target: TAU * k as f64,
            };
            level
                .solve(cfg)
                .into_iter()
                .filter(|&(t, _)| (-PI..PI).contains(&t))
                .map(|(t, tangent)| (k, t, tangent))
                .collect()
        })
        .collect();
    let mut roots = per_level
        .into_iter()
        .flatten()
        .map(|(k, t, suspected_tangency)| {
            Ok(RootRecord {
                k,
                t,
                f_value_at_root: map.eval_f(boundary_point(t), qcfg)?,
                suspected_tangency,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    roots.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.k.cmp(&b.k)));
    Ok(roots)
}

/// Radii sampled by [`check_remark_condition`].
pub const REMARK_RADII: [f64; 4] = [0.9, 0.99, 0.999, 1.0 - 1e-6];

/// `min Re(1 + z h''(z)/h'(z)) + (m-1)/2` over [`REMARK_RADII`] x `grid_size` angles.
///
/// `h'` must have no zeros in the disk besides the `z^(p-1)` factor, otherwise the
/// quantity is unbounded below near them; this is certified first by the winding of
/// `h'` on the outermost circle.
pub fn check_remark_condition(spec: &FunctionSpec, m: u32, grid_size: usize) -> Result<f64> {
    let r_max = REMARK_RADII[REMARK_RADII.len() - 1];
    let (numer, denom) = spec.big_h_factors();
    let zeros = winding_on_circle(|z| numer.eval(z), r_max, grid_size)
        .map_err(|_| Error::CriticalPoint { at: Complex64::new(r_max, 0.0) })?;
    let poles = match &denom {
        Some(d) => winding_on_circle(|z| d.eval(z), r_max, grid_size)
            .map_err(|_| Error::Pole { at: Complex64::new(r_max, 0.0) })?,
        None => 0,
    };
    if zeros != 0 || poles != 0 {
        return Err(Error::InteriorCriticalPoints { count: zeros - poles });
    }

    let offset = 0.5 * (m as f64 - 1.0);
    let mut margin = f64::INFINITY;
    for &r in &REMARK_RADII {
        for t in uniform_angles(grid_size) {
            let z = Complex64::from_polar(r, t);
            let hp = spec.eval_h_prime(z)?;
            if hp.norm() == 0.0 {
                return Err(Error::CriticalPoint { at: z });
            }
            let value = (1.0 + z * spec.eval_h_second(z)? / hp).re + offset;
            margin = margin.min(value);
        }
    }
    Ok(margin)
}

/// Assembles the full hypothesis and root-count report. Failures are recorded, not returned.
pub fn check_theorem(
    map: &HarmonicMapSpec,
    cfg: &CriterionConfig,
    qcfg: &QuadratureConfig,
) -> CriterionReport {
    let spec = map.h();
    let (p, m) = (map.p(), map.m());
    let mut notes = Vec::new();

    let h_analytic_closed_disk = !spec.has_boundary_poles();
    if !h_analytic_closed_disk {
        notes.push(format!(
            "h' has {} pole(s) on the unit circle",
            spec.boundary_poles().len()
        ));
    }

    let table = match unwrap_arg_h(spec, cfg.grid_size, cfg.h_nonvanish_tol) {
        Ok(t) => Some(t),
        Err(e) => {
            notes.push(format!("arg H unavailable: {e}"));
            None
        }
    };
    let h_min_modulus = table.as_ref().map(PhaseTable::min_modulus);
    let h_winding = table.as_ref().map(PhaseTable::winding);
    let h_nonvanishing = matches!((h_min_modulus, h_winding), (Some(min), Some(0)) if min > cfg.h_nonvanish_tol);
    if let Some(w) = h_winding.filter(|&w| w != 0) {
        notes.push(format!("H winds {w} time(s) about 0: zeros inside the disk"));
    }

    let f_range = table.as_ref().map(|tb| {
        let s = slope(p, m);
        (
            s * tb.t[0] + 2.0 * tb.phase[0],
            s * tb.t[tb.t.len() - 1] + 2.0 * tb.phase[tb.t.len() - 1],
        )
    });

    let roots = match &table {
        Some(tb) => find_criterion_roots(map, tb, cfg, qcfg).unwrap_or_else(|e| {
            notes.push(format!("root search failed: {e}"));
            Vec::new()
        }),
        None => Vec::new(),
    };

    let remark_margin = match check_remark_condition(spec, m, cfg.grid_size) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("remark condition not evaluable: {e}"));
            None
        }
    };

    let mut per_k_counts: BTreeMap<i64, usize> = level_indices(p, m).map(|k| (k, 0)).collect();
    let mut tangent = 0;
    for r in &roots {
        if r.suspected_tangency {
            tangent += 1;
        } else {
            *per_k_counts.entry(r.k).or_default() += 1;
        }
    }
    let total_roots = roots.len() - tangent;
    if tangent > 0 {
        notes.push(format!("{tangent} suspected tangency(ies)"));
    }

    let hypotheses_hold = h_analytic_closed_disk && h_nonvanishing;
    let theorem_applies = hypotheses_hold
        && per_k_counts.values().all(|&c| c <= 1)
        && total_roots == map.cusp_count() as usize
        && tangent == 0;

    CriterionReport {
        p,
        m,
        roots,
        per_k_counts,
        total_roots,
        h_analytic_closed_disk,
        h_nonvanishing,
        h_min_modulus,
        h_winding,
        f_range,
        remark_margin,
        hypotheses_hold,
        theorem_applies,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn table_for(map: &HarmonicMapSpec) -> PhaseTable {
        unwrap_arg_h(map.h(), 8192, 1e-9).unwrap()
    }

    #[test]
    fn level_set_bounds() {
        assert_eq!(level_indices(2, 4), -4..=4);
        assert_eq!(level_indices(3, 2), -4..=4);
        assert_eq!(level_indices(1, 2), -2..=2);
    }

    #[test]
    fn monomial_phase_is_zero() {
        for p in 1..5 {
            let map = presets::monomial(p, 3).unwrap();
            let table = table_for(&map);
            assert!(table.phase.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn example2_phase_matches_principal_value() {
        let map = presets::example2();
        let table = table_for(&map);
        for (&t, &ph) in table.t.iter().zip(&table.phase) {
            let principal = (3.0 + Complex64::new(0.0, 1.0) * boundary_point(t)).arg();
            // |arg(3 + i e^{it})| <= arcsin(1/3), so the branch never leaves (-pi/2, pi/2).
            assert!((ph - principal).abs() < 1e-12);
        }
    }

    #[test]
    fn octagon_pole_is_reported() {
        let map = presets::octagon();
        assert!(matches!(
            unwrap_arg_h(map.h(), 8192, 1e-9),
            Err(Error::HPoleOnBoundary { .. })
        ));
    }

    #[test]
    fn phase_function_examples() {
        let map = presets::example1();
        let table = table_for(&map);
        assert_eq!(phase_function(map.h(), 4, 0.0, &table).unwrap(), 0.0);
        let v = phase_function(map.h(), 4, PI / 7.0, &table).unwrap();
        assert!((v - PI).abs() < 1e-14);

        let map = presets::example2();
        let table = table_for(&map);
        let v = phase_function(map.h(), 2, 0.0, &table).unwrap();
        assert!((v - 2.0 * (1.0_f64 / 3.0).atan()).abs() < 1e-14);
    }

    #[test]
    fn example2_endpoint_values() {
        // F(-pi) and F(pi) in closed form with theta = arg c = pi/2, |c| = 1, p = 3.
        let report = check_theorem(&presets::example2(), &CriterionConfig::default(), &QuadratureConfig::default());
        let (lo, hi) = report.f_range.unwrap();
        let bend = 2.0 * (1.0_f64 / 3.0).atan();
        assert!((lo - (-7.0 * PI - bend)).abs() < 1e-12);
        assert!((hi - (7.0 * PI - bend)).abs() < 1e-12);
    }

    #[test]
    fn phase_derivative_examples() {
        let map = presets::monomial(3, 5).unwrap();
        for t in [-3.0, -0.4, 0.0, 1.1, 2.9] {
            let v = phase_function_derivative(map.h(), 5, t).unwrap();
            assert!((v - 10.0).abs() < 1e-12);
        }
        let map = presets::example2();
        // z h''/h' = 2 + iz/(3 + iz), so F'(0) = 3 + 2 * 2.1.
        assert!((phase_function_derivative(map.h(), 2, 0.0).unwrap() - 7.2).abs() < 1e-13);
    }

    #[test]
    fn phase_derivative_matches_finite_differences() {
        let map = presets::example2();
        let table = table_for(&map);
        let delta = 1e-5;
        for i in 0..100 {
            let t = -3.0 + 6.0 * (i as f64 + 0.5) / 100.0;
            let fd = (phase_function(map.h(), 2, t + delta, &table).unwrap()
                - phase_function(map.h(), 2, t - delta, &table).unwrap())
                / (2.0 * delta);
            let exact = phase_function_derivative(map.h(), 2, t).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-6, "t={t}: {fd} vs {exact}");
        }
    }

    #[test]
    fn example1_roots_are_sevenths() {
        let map = presets::example1();
        let table = table_for(&map);
        let roots = find_criterion_roots(&map, &table, &CriterionConfig::default(), &QuadratureConfig::default()).unwrap();
        assert_eq!(roots.len(), 7);
        for (r, k) in roots.iter().zip(-3..=3) {
            assert_eq!(r.k, k);
            assert!((r.t - TAU * k as f64 / 7.0).abs() < 1e-12);
            assert!(!r.suspected_tangency);
            assert!((r.f_value_at_root.norm() - 1.4).abs() < 1e-12);
        }
    }

    #[test]
    fn example2_roots_match_finer_grid() {
        let map = presets::example2();
        let coarse = find_criterion_roots(&map, &table_for(&map), &CriterionConfig::default(), &QuadratureConfig::default()).unwrap();
        let fine_cfg = CriterionConfig {
            grid_size: 8192 * 8,
            ..Default::default()
        };
        let fine_table = unwrap_arg_h(map.h(), fine_cfg.grid_size, 1e-9).unwrap();
        let fine = find_criterion_roots(&map, &fine_table, &fine_cfg, &QuadratureConfig::default()).unwrap();
        assert_eq!(coarse.len(), 7);
        assert_eq!(fine.len(), 7);
        for (a, b) in coarse.iter().zip(&fine) {
            assert_eq!(a.k, b.k);
            assert!((a.t - b.t).abs() < 1e-11);
        }
        let ks: Vec<i64> = coarse.iter().map(|r| r.k).collect();
        assert_eq!(ks, (-3..=3).collect::<Vec<_>>());
    }

    #[test]
    fn remark_margin_examples() {
        for (p, m) in [(1, 2), (2, 4), (3, 3)] {
            let map = presets::monomial(p, m).unwrap();
            let margin = check_remark_condition(map.h(), m, 1024).unwrap();
            assert!((margin - (p as f64 + 0.5 * (m as f64 - 1.0))).abs() < 1e-12);
        }
        let map = presets::example2();
        let margin = check_remark_condition(map.h(), 2, 1024).unwrap();
        // Lower bound p + 1 - p/(p - |c|) + (m-1)/2 with p = 3, |c| = 1.
        assert!(margin > 4.0 - 1.5 + 0.5);
    }

    #[test]
    fn remark_rejects_interior_critical_point() {
        // h = z + 5 z^2 / 2: h' = 1 + 5z vanishes at -1/5.
        let spec = FunctionSpec::poly_series(1, vec![Complex64::new(1.0, 0.0), Complex64::new(2.5, 0.0)]).unwrap();
        assert!(matches!(
            check_remark_condition(&spec, 2, 1024),
            Err(Error::InteriorCriticalPoints { count: 1 })
        ));
    }

    #[test]
    fn theorem_reports() {
        let q = QuadratureConfig::default();
        let cfg = CriterionConfig::default();
        let r = check_theorem(&presets::example1(), &cfg, &q);
        assert!(r.theorem_applies && r.total_roots == 7);
        let r = check_theorem(&presets::example2(), &cfg, &q);
        assert!(r.theorem_applies && r.total_roots == 7 && r.remark_margin.unwrap() > 0.0);
        let r = check_theorem(&presets::pentagram(), &cfg, &q);
        assert!(!r.hypotheses_hold && !r.theorem_applies);
    }

    #[test]
    fn winding_of_h_changes_phase_span() {
        // h' = 1 + 3z has a zero at -1/3: H winds once, F(pi) - F(-pi) = 2 pi (2p+m-1) + 4 pi.
        let spec = FunctionSpec::poly_series(1, vec![Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.0)]).unwrap();
        let map = spec.derive_g(2).unwrap();
        let r = check_theorem(&map, &CriterionConfig::default(), &QuadratureConfig::default());
        assert_eq!(r.h_winding, Some(1));
        assert!(!r.h_nonvanishing && !r.theorem_applies);
        let (lo, hi) = r.f_range.unwrap();
        assert!((hi - lo - (TAU * 3.0 + 2.0 * TAU)).abs() < 1e-9);
    }

    #[test]
    fn monotone_phase_gives_single_roots() {
        // h = z + 0.3 z^2: F' = 3 + 2 Re(w / (1 + w)) with |w| = 0.6, so F' > 0.
        let spec = FunctionSpec::poly_series(1, vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.0)]).unwrap();
        let map = spec.derive_g(2).unwrap();
        let r = check_theorem(&map, &CriterionConfig::default(), &QuadratureConfig::default());
        assert!(r.remark_margin.unwrap() > 0.0);
        assert!(r.per_k_counts.values().all(|&n| n <= 1));
        assert!(r.roots.iter().all(|x| !x.suspected_tangency));
        assert!(r.theorem_applies);
    }

    #[test]
    fn grazing_level_is_flagged() {
        // h' = 1 + rho e^{i alpha} z, p = 1, m = 2: F(t) = 3t + 2 arg(1 + rho e^{i(t + alpha)}).
        // F' = 0 where 3 + 5 rho^2 + 8 rho cos(t + alpha) = 0; the local max sits at
        // t + alpha = acos(-(3 + 5 rho^2) / (8 rho)). Rotating by alpha shifts the max value
        // by -3 alpha, so alpha is chosen to put it exactly on the level 2 pi k.
        let rho = 0.8_f64;
        let theta = (-(3.0 + 5.0 * rho * rho) / (8.0 * rho)).acos();
        let peak = 3.0 * theta + 2.0 * (1.0 + Complex64::from_polar(rho, theta)).arg();
        let k = (peak / TAU).floor();
        let alpha = (peak - TAU * k) / 3.0;
        assert!((theta - alpha).abs() < PI);
        let c = Complex64::from_polar(rho / 2.0, alpha);
        let spec = FunctionSpec::poly_series(1, vec![Complex64::new(1.0, 0.0), c]).unwrap();
        let map = spec.derive_g(2).unwrap();
        let r = check_theorem(&map, &CriterionConfig::default(), &QuadratureConfig::default());
        let tangent: Vec<_> = r.roots.iter().filter(|x| x.suspected_tangency).collect();
        assert_eq!(tangent.len(), 1, "{:?}", r.roots);
        assert_eq!(tangent[0].k, k as i64);
        assert!((tangent[0].t - (theta - alpha)).abs() < 1e-6);
        assert!(!r.theorem_applies);
    }

    #[test]
    fn config_validation() {
        assert!(CriterionConfig::default().validate().is_ok());
        let bad = CriterionConfig {
            grid_size: 1000,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
