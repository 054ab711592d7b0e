//! Image curves of circles under `f`, the boundary parametrization `phi(t) = f(e^{it})`
//! and its closed-form derivatives, cusp location and the concavity test.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use crate::criterion::CriterionReport;
use crate::error::{Error, Result};
use crate::function::{uniform_angles, HarmonicMapSpec, Sample};
use crate::quadrature::QuadratureConfig;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Closed-form `phi'` and `phi''` at each sample of a boundary trace; `None` at poles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDerivatives {
    pub phi_prime: Vec<Option<Complex64>>,
    pub phi_second: Vec<Option<Complex64>>,
}

/// Samples of `f(r e^{it})` for `t` increasing through `[-pi, pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub radius: f64,
    pub t: Vec<f64>,
    pub points: Vec<Complex64>,
    pub clamped: Vec<bool>,
    /// Present only for `radius == 1`.
    pub boundary: Option<BoundaryDerivatives>,
}

impl CurveTrace {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Largest distance between two samples.
    pub fn diameter(&self) -> f64 {
        let pts = &self.points;
        (0..pts.len())
            .into_par_iter()
            .map(|i| {
                pts[i + 1..]
                    .iter()
                    .map(|q| (pts[i] - q).norm_sqr())
                    .fold(0.0_f64, f64::max)
            })
            .reduce(|| 0.0, f64::max)
            .sqrt()
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::around(&self.points)
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// `t,re_f,im_f,clamped` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.len() + 32);
        out.push_str("t,re_f,im_f,clamped\n");
        for ((t, p), c) in self.t.iter().zip(&self.points).zip(&self.clamped) {
            let _ = writeln!(out, "{t:.16e},{:.16e},{:.16e},{}", p.re, p.im, u8::from(*c));
        }
        out
    }
}

/// Axis-aligned box in the image plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn around(points: &[Complex64]) -> Self {
        points.iter().fold(
            BoundingBox {
                min_x: f64::INFINITY,
                max_x: f64::NEG_INFINITY,
                min_y: f64::INFINITY,
                max_y: f64::NEG_INFINITY,
            },
            |b, p| BoundingBox {
                min_x: b.min_x.min(p.re),
                max_x: b.max_x.max(p.re),
                min_y: b.min_y.min(p.im),
                max_y: b.max_y.max(p.im),
            },
        )
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Grows each side by `fraction` of the box's extent along that axis.
    pub fn padded(&self, fraction: f64) -> Self {
        let (dx, dy) = (fraction * self.width(), fraction * self.height());
        BoundingBox {
            min_x: self.min_x - dx,
            max_x: self.max_x + dx,
            min_y: self.min_y - dy,
            max_y: self.max_y + dy,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("radius must lie in (0, 1], got {r}")))
    }
}

/// `n` uniformly spaced samples of `f` on the circle of radius `r`.
pub fn trace_circle(
    map: &HarmonicMapSpec,
    r: f64,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<CurveTrace> {
    check_radius(r)?;
    if n < 256 {
        return Err(Error::InvalidParameter(format!("need at least 256 samples, got {n}")));
    }
    let t: Vec<f64> = uniform_angles(n).collect();
    let samples: Vec<Sample> = t
        .par_iter()
        .map(|&t| map.eval_f_polar(r, t, cfg))
        .collect::<Result<_>>()?;
    let boundary = (r == 1.0).then(|| BoundaryDerivatives {
        phi_prime: t.par_iter().map(|&t| eval_phi_prime(map, t).ok()).collect(),
        phi_second: t.par_iter().map(|&t| eval_phi_second(map, t).ok()).collect(),
    });
    Ok(CurveTrace {
        radius: r,
        points: samples.iter().map(|s| s.value).collect(),
        clamped: samples.iter().map(|s| s.clamped).collect(),
        t,
        boundary,
    })
}

/// Like [`trace_circle`] but bisects any step whose image chord exceeds `rel_chord` times
/// the bounding-box diagonal of the uniform base trace, up to `max_depth` levels per base
/// interval.
pub fn trace_circle_adaptive(
    map: &HarmonicMapSpec,
    r: f64,
    base_n: usize,
    rel_chord: f64,
    max_depth: u32,
    cfg: &QuadratureConfig,
) -> Result<CurveTrace> {
    let base = trace_circle(map, r, base_n.max(256), cfg)?;
    let n = base.len();
    let max_chord = rel_chord * base.bounding_box().diagonal();
    let refined: Vec<Vec<(f64, Sample)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let t0 = base.t[j];
            let t1 = if j + 1 < n { base.t[j + 1] } else { base.t[0] + TAU };
            let s0 = Sample {
                value: base.points[j],
                clamped: base.clamped[j],
            };
            let s1 = Sample {
                value: base.points[(j + 1) % n],
                clamped: base.clamped[(j + 1) % n],
            };
            let mut out = vec![(t0, s0)];
            subdivide(map, r, (t0, s0), (t1, s1), max_chord, max_depth, cfg, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut t = Vec::new();
    let mut points = Vec::new();
    let mut clamped = Vec::new();
    for (tt, s) in refined.into_iter().flatten() {
        t.push(tt);
        points.push(s.value);
        clamped.push(s.clamped);
    }
    Ok(CurveTrace {
        radius: r,
        t,
        points,
        clamped,
        boundary: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn subdivide(
    map: &HarmonicMapSpec,
    r: f64,
    a: (f64, Sample),
    b: (f64, Sample),
    max_chord: f64,
    depth: u32,
    cfg: &QuadratureConfig,
    out: &mut Vec<(f64, Sample)>,
) -> Result<()> {
    if depth == 0 || (a.1.value - b.1.value).norm() <= max_chord {
        return Ok(());
    }
    let tm = 0.5 * (a.0 + b.0);
    let sm = map.eval_f_polar(r, tm, cfg)?;
    subdivide(map, r, a, (tm, sm), max_chord, depth - 1, cfg, out)?;
    out.push((tm, sm));
    subdivide(map, r, (tm, sm), b, max_chord, depth - 1, cfg, out)
}

/// `phi'(t) = i z (h'(z) - conj(z)^(m+1) conj(h'(z)))`, `z = e^{it}`.
pub fn eval_phi_prime(map: &HarmonicMapSpec, t: f64) -> Result<Complex64> {
    let z = Complex64::from_polar(1.0, t);
    let hp = map.h().eval_h_prime(z)?;
    Ok(I * z * (hp - z.conj().powu(map.m() + 1) * hp.conj()))
}

/// `phi''(t) = -(z h' + z^2 h'' + m conj(z)^m conj(h') + conj(z)^(m+1) conj(h''))`.
pub fn eval_phi_second(map: &HarmonicMapSpec, t: f64) -> Result<Complex64> {
    let z = Complex64::from_polar(1.0, t);
    let hp = map.h().eval_h_prime(z)?;
    let hpp = map.h().eval_h_second(z)?;
    let zb = z.conj();
    let m = map.m();
    Ok(-(z * hp + z * z * hpp + m as f64 * zb.powu(m) * hp.conj() + zb.powu(m + 1) * hpp.conj()))
}

/// Right-hand side of the concavity identity:
/// `(m-1) |h'|^2 Re(conj(z)^(m+1) (conj(h')/|h'|)^2 - 1)`.
pub fn concavity_identity_rhs(m: u32, z: Complex64, hp: Complex64) -> f64 {
    let unit = hp.conj() / hp.norm();
    (m as f64 - 1.0) * hp.norm_sqr() * (z.conj().powu(m + 1) * unit * unit - 1.0).re
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub samples: usize,
    /// Samples at poles of `h'` or zeros of `h'`.
    pub skipped: usize,
    /// `max Im(phi'' conj(phi'))`.
    pub max_im: f64,
    /// `max |direct - identity| / max(1, |phi'| |phi''|)`.
    pub max_identity_discrepancy: f64,
    /// `max |phi'| * max |phi''|`.
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluates `Im(phi'' conj(phi'))` directly and through the factored identity at `n`
/// boundary samples.
pub fn concavity_check(map: &HarmonicMapSpec, n: usize) -> Result<ConcavityReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let m = map.m();
    let rows: Vec<Option<(f64, f64, f64, f64)>> = uniform_angles(n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&t| {
            let z = Complex64::from_polar(1.0, t);
            let hp = map.h().eval_h_prime(z).ok()?;
            if hp.norm() == 0.0 {
                return None;
            }
            let d1 = eval_phi_prime(map, t).ok()?;
            let d2 = eval_phi_second(map, t).ok()?;
            let direct = (d2 * d1.conj()).im;
            let rhs = concavity_identity_rhs(m, z, hp);
            let rel = (direct - rhs).abs() / (d1.norm() * d2.norm()).max(1.0);
            Some((direct, rel, d1.norm(), d2.norm()))
        })
        .collect();
    let mut max_im = f64::NEG_INFINITY;
    let mut max_disc: f64 = 0.0;
    let (mut max_d1, mut max_d2): (f64, f64) = (0.0, 0.0);
    let mut skipped = 0;
    for row in &rows {
        match row {
            Some((direct, rel, a, b)) => {
                max_im = max_im.max(*direct);
                max_disc = max_disc.max(*rel);
                max_d1 = max_d1.max(*a);
                max_d2 = max_d2.max(*b);
            }
            None => skipped += 1,
        }
    }
    let scale = max_d1 * max_d2;
    let tol = 1e-9 * scale;
    Ok(ConcavityReport {
        samples: n,
        skipped,
        max_im,
        max_identity_discrepancy: max_disc,
        scale,
        tol,
        pass: skipped < n && max_im <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cusp {
    pub t: f64,
    pub image: Complex64,
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CuspSet {
    pub cusps: Vec<Cusp>,
    pub warnings: Vec<String>,
}

impl CuspSet {
    pub fn count(&self) -> usize {
        self.cusps.len()
    }
}

/// `max |phi'|` over `n` uniform boundary samples, skipping poles.
pub fn max_phi_prime(map: &HarmonicMapSpec, n: usize) -> f64 {
    uniform_angles(n)
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|&t| eval_phi_prime(map, t).ok())
        .map(|v| v.norm())
        .reduce(|| 0.0, f64::max)
}

/// Relative threshold for `|phi'|` at a cusp.
pub const CUSP_REL_TOL: f64 = 1e-6;

/// One cusp per non-tangent criterion root, each verified as a zero of `phi'`.
///
/// Reports that do not certify the theorem are refused unless `allow_uncertified`.
pub fn detect_cusps(
    map: &HarmonicMapSpec,
    report: &CriterionReport,
    allow_uncertified: bool,
) -> Result<CuspSet> {
    if !report.theorem_applies && !allow_uncertified {
        return Err(Error::CriterionUnavailable);
    }
    let mut set = CuspSet::default();
    if !report.theorem_applies {
        set.warnings
            .push("criterion report does not certify the theorem; cusps are exploratory".into());
    }
    if report.roots.is_empty() {
        set.warnings.push("no criterion roots available".into());
        return Ok(set);
    }
    let tol = CUSP_REL_TOL * max_phi_prime(map, 8192);
    for root in report.roots.iter().filter(|r| !r.suspected_tangency) {
        let modulus = eval_phi_prime(map, root.t)?.norm();
        if modulus >= tol {
            return Err(Error::CuspMismatch {
                t: root.t,
                modulus,
                tol,
            });
        }
        set.cusps.push(Cusp {
            t: root.t,
            image: root.f_value_at_root,
            k: root.k,
        });
    }
    Ok(set)
}

/// Zeros of `phi'` on the circle located by minimizing `|phi'|`, independent of `F`.
pub fn find_phi_prime_zeros(map: &HarmonicMapSpec, n: usize) -> Result<Vec<f64>> {
    let t: Vec<f64> = uniform_angles(n).collect();
    let modulus: Vec<f64> = t
        .par_iter()
        .map(|&t| eval_phi_prime(map, t).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    let scale = modulus.iter().copied().fold(0.0, f64::max);
    let tol = CUSP_REL_TOL * scale;
    let abs = |t: f64| eval_phi_prime(map, t).map(|v| v.norm()).unwrap_or(f64::INFINITY);
    let step = TAU / n as f64;
    let mut zeros = Vec::new();
    for j in 0..n {
        let (l, c, r) = (modulus[(j + n - 1) % n], modulus[j], modulus[(j + 1) % n]);
        // Ties break toward the left neighbour so a flat pair yields one candidate.
        if !(c < l && c <= r) {
            continue;
        }
        let (mut a, mut b) = (t[j] - step, t[j] + step);
        let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
        let mut x1 = b - ratio * (b - a);
        let mut x2 = a + ratio * (b - a);
        let (mut f1, mut f2) = (abs(x1), abs(x2));
        while b - a > 1e-15 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = abs(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = abs(x2);
            }
        }
        let (tm, fm) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
        if fm < tol {
            let tm = if tm < -PI { tm + TAU } else if tm >= PI { tm - TAU } else { tm };
            zeros.push(tm);
        }
    }
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(zeros)
}

/// Angles halfway between consecutive boundary poles of `h'`, where the straight-sided
/// families have their vertices. Empty when `h'` has no boundary poles.
pub fn vertex_breakpoints(map: &HarmonicMapSpec) -> Vec<f64> {
    let poles: Vec<f64> = map.h().boundary_poles().iter().map(|z| z.arg()).collect();
    let n = poles.len();
    let mut mids: Vec<f64> = (0..n)
        .map(|j| {
            let next = if j + 1 < n { poles[j + 1] } else { poles[0] + TAU };
            let mid = 0.5 * (poles[j] + next);
            if mid >= PI {
                mid - TAU
            } else {
                mid
            }
        })
        .collect();
    mids.sort_by(f64::total_cmp);
    mids
}

/// For each arc between consecutive breakpoints (endpoints included), the largest
/// distance from a sample to the chord through the arc's end samples, over all arcs,
/// divided by the curve diameter.
pub fn segment_collinearity(trace: &CurveTrace, breakpoints: &[f64]) -> Result<f64> {
    if breakpoints.is_empty() {
        return Err(Error::InvalidParameter("no breakpoints".into()));
    }
    let wrap = |t: f64| t.rem_euclid(TAU) - PI;
    let mut bps: Vec<f64> = breakpoints.iter().map(|&b| wrap(b + PI)).collect();
    bps.sort_by(f64::total_cmp);
    let diameter = trace.diameter();
    let mut worst: f64 = 0.0;
    let nb = bps.len();
    for arc in 0..nb {
        let lo = bps[arc];
        let hi = if arc + 1 < nb { bps[arc + 1] } else { bps[0] + TAU };
        let mut members: Vec<(f64, Complex64)> = trace
            .t
            .iter()
            .zip(&trace.points)
            .filter_map(|(&t, &p)| {
                let tt = if t < lo - 1e-12 { t + TAU } else { t };
                (tt >= lo - 1e-12 && tt <= hi + 1e-12).then_some((tt, p))
            })
            .collect();
        if members.len() < 3 {
            return Err(Error::InsufficientResolution {
                arc,
                samples: members.len(),
            });
        }
        members.sort_by(|a, b| a.0.total_cmp(&b.0));
        let a = members[0].1;
        let b = members[members.len() - 1].1;
        let chord = b - a;
        let len = chord.norm();
        for &(_, q) in &members[1..members.len() - 1] {
            let dist = if len > 0.0 {
                ((q - a) * chord.conj()).im.abs() / len
            } else {
                (q - a).norm()
            };
            worst = worst.max(dist);
        }
    }
    Ok(if diameter > 0.0 { worst / diameter } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn example1_trace_at_seventh_roots() {
        let map = presets::example1();
        let trace = trace_circle(&map, 1.0, 7 * 256, &q()).unwrap();
        for k in -3..=3 {
            let idx = (896 + 256 * k) as usize;
            let t = TAU * k as f64 / 7.0;
            assert!((trace.t[idx] - t).abs() < 1e-12);
            let expected = Complex64::from_polar(1.4, 2.0 * t);
            assert!((trace.points[idx] - expected).norm() < 1e-12);
        }
        assert!((trace.points[896] - Complex64::new(1.4, 0.0)).norm() < 1e-15);
        assert!(trace.boundary.is_some());
    }

    #[test]
    fn small_circles_look_like_z_to_the_p() {
        for map in [presets::example1(), presets::example2(), presets::pentagram(), presets::octagon()] {
            let r = 1e-3;
            let trace = trace_circle(&map, r, 256, &q()).unwrap();
            let p = map.p() as i32;
            for (&t, &pt) in trace.t.iter().zip(&trace.points) {
                let scaled = pt / r.powi(p);
                assert!((scaled - Complex64::from_polar(1.0, p as f64 * t)).norm() < 5.0 * r);
            }
        }
    }

    #[test]
    fn star_near_boundary_is_bounded() {
        let trace = trace_circle(&presets::pentagram(), 1.0 - 1e-6, 2048, &q()).unwrap();
        assert!(trace.points.iter().all(|p| p.re.is_finite() && p.im.is_finite()));
        assert!(trace.max_modulus() < 2.0);
    }

    #[test]
    fn phi_prime_examples() {
        let map = presets::example1();
        assert!(eval_phi_prime(&map, 0.0).unwrap().norm() < 1e-15);
        assert!(eval_phi_prime(&map, PI / 7.0).unwrap().norm() > 0.1);
        let star = presets::pentagram();
        assert!(eval_phi_prime(&star, PI / 5.0 + 0.3).unwrap().norm() < 1e-14);
    }

    #[test]
    fn phi_second_at_zero_for_example1() {
        // phi(t) = e^{2it} + 0.4 e^{-5it}, so phi''(0) = -4 - 10 = -14.
        let v = eval_phi_second(&presets::example1(), 0.0).unwrap();
        assert!((v - Complex64::new(-14.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let delta = 1e-5;
        for map in [presets::example1(), presets::example2()] {
            for i in 0..100 {
                let t = -3.1 + 6.2 * (i as f64 * 0.618_033_988_7).fract();
                let fd1 = (map.eval_f(Complex64::from_polar(1.0, t + delta), &q()).unwrap()
                    - map.eval_f(Complex64::from_polar(1.0, t - delta), &q()).unwrap())
                    / (2.0 * delta);
                let d1 = eval_phi_prime(&map, t).unwrap();
                assert!((fd1 - d1).norm() <= 1e-6 * d1.norm().max(1.0), "phi' at {t}");
                let fd2 = (eval_phi_prime(&map, t + delta).unwrap() - eval_phi_prime(&map, t - delta).unwrap())
                    / (2.0 * delta);
                let d2 = eval_phi_second(&map, t).unwrap();
                assert!((fd2 - d2).norm() <= 1e-6 * d2.norm().max(1.0), "phi'' at {t}");
            }
        }
    }

    #[test]
    fn phi_second_modulus_is_rotation_invariant_for_monomials() {
        let map = presets::monomial(2, 4).unwrap();
        let step = TAU / 7.0;
        for t in [-2.0, -0.3, 0.7, 1.9] {
            let a = eval_phi_second(&map, t).unwrap().norm();
            let b = eval_phi_second(&map, t + step).unwrap().norm();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn concavity_for_examples() {
        for map in [presets::example1(), presets::example2()] {
            let r = concavity_check(&map, 8192).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.max_identity_discrepancy < 1e-9, "{r:?}");
            assert_eq!(r.skipped, 0);
        }
    }

    #[test]
    fn identity_values_for_monomials() {
        // At cusps (F = 2k pi) both sides vanish; midway between cusps (F = (2k+1) pi)
        // the bracket equals -2, giving -2 (m-1) p^2.
        for (p, m) in [(1, 2), (2, 4), (3, 3)] {
            let map = presets::monomial(p, m).unwrap();
            let n = (2 * p + m - 1) as f64;
            for k in 0..3 {
                let cusp = TAU * k as f64 / n;
                let mid = (2 * k + 1) as f64 * PI / n;
                for (t, expected) in [(cusp, 0.0), (mid, -2.0 * (m as f64 - 1.0) * (p * p) as f64)] {
                    let z = Complex64::from_polar(1.0, t);
                    let hp = map.h().eval_h_prime(z).unwrap();
                    let rhs = concavity_identity_rhs(m, z, hp);
                    let direct = (eval_phi_second(&map, t).unwrap() * eval_phi_prime(&map, t).unwrap().conj()).im;
                    assert!((rhs - expected).abs() < 1e-11, "rhs {rhs} vs {expected}");
                    assert!((direct - expected).abs() < 1e-11, "direct {direct} vs {expected}");
                }
            }
        }
    }

    #[test]
    fn disk_degenerate_case_is_concave() {
        let map = presets::monomial(1, 2).unwrap();
        let r = concavity_check(&map, 4096).unwrap();
        assert!(r.pass);
        assert!(r.max_im <= 1e-12);
    }

    #[test]
    fn cusps_for_examples() {
        use crate::criterion::{check_theorem, CriterionConfig};
        let map = presets::example1();
        let report = check_theorem(&map, &CriterionConfig::default(), &q());
        let cusps = detect_cusps(&map, &report, false).unwrap();
        assert_eq!(cusps.count(), 7);
        for c in &cusps.cusps {
            assert!((c.image.norm() - 1.4).abs() < 1e-12);
        }
        let map = presets::example2();
        let report = check_theorem(&map, &CriterionConfig::default(), &q());
        assert_eq!(detect_cusps(&map, &report, false).unwrap().count(), 7);

        let star = presets::pentagram();
        let report = check_theorem(&star, &CriterionConfig::default(), &q());
        assert!(matches!(detect_cusps(&star, &report, false), Err(Error::CriterionUnavailable)));
        let set = detect_cusps(&star, &report, true).unwrap();
        assert_eq!(set.count(), 0);
        assert!(!set.warnings.is_empty());
    }

    #[test]
    fn independent_cusp_search_matches_sevenths() {
        let zeros = find_phi_prime_zeros(&presets::example1(), 8192).unwrap();
        assert_eq!(zeros.len(), 7);
        for (z, k) in zeros.iter().zip(-3..=3) {
            assert!((z - TAU * k as f64 / 7.0).abs() < 1e-9);
        }
    }

    #[test]
    fn straight_sides() {
        let oct = presets::octagon();
        let trace = trace_circle(&oct, 0.9999, 8192, &q()).unwrap();
        let dev = segment_collinearity(&trace, &vertex_breakpoints(&oct)).unwrap();
        assert!(dev < 1e-3, "octagon deviation {dev}");

        let star = presets::pentagram();
        let trace = trace_circle(&star, 0.9999, 8192, &q()).unwrap();
        let dev = segment_collinearity(&trace, &vertex_breakpoints(&star)).unwrap();
        assert!(dev < 1e-3, "star deviation {dev}");

        let ex1 = presets::example1();
        let trace = trace_circle(&ex1, 0.9999, 8192, &q()).unwrap();
        let cusps: Vec<f64> = (-3..=3).map(|k| TAU * k as f64 / 7.0).collect();
        let dev = segment_collinearity(&trace, &cusps).unwrap();
        assert!(dev > 1e-2, "concave arcs should not be straight: {dev}");
    }

    #[test]
    fn pole_angle_breakpoints_split_sides_at_vertices() {
        // Each arc between two poles maps onto a vertex plus half of each adjacent side.
        let oct = presets::octagon();
        let trace = trace_circle(&oct, 0.9999, 8192, &q()).unwrap();
        let poles: Vec<f64> = oct.h().boundary_poles().iter().map(|z| z.arg()).collect();
        assert!(segment_collinearity(&trace, &poles).unwrap() > 1e-2);
    }

    #[test]
    fn collinearity_needs_samples() {
        let trace = trace_circle(&presets::octagon(), 0.9, 256, &q()).unwrap();
        let many: Vec<f64> = (0..200).map(|j| -PI + TAU * j as f64 / 200.0).collect();
        assert!(matches!(
            segment_collinearity(&trace, &many),
            Err(Error::InsufficientResolution { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let trace = trace_circle(&presets::example1(), 0.5, 256, &q()).unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,re_f,im_f,clamped"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 4);
        let t: f64 = row[0].parse().unwrap();
        assert_eq!(t, trace.t[0]);
        let re: f64 = row[1].parse().unwrap();
        assert_eq!(re, trace.points[0].re);
        assert_eq!(csv.lines().count(), 257);
    }

    #[test]
    fn adaptive_trace_bounds_chords() {
        let star = presets::pentagram();
        let trace = trace_circle_adaptive(&star, 0.999, 1024, 0.002, 12, &q()).unwrap();
        assert!(trace.t.windows(2).all(|w| w[0] < w[1]));
        let chord = 0.002 * trace_circle(&star, 0.999, 1024, &q()).unwrap().bounding_box().diagonal();
        let n = trace.len();
        for j in 0..n {
            assert!((trace.points[(j + 1) % n] - trace.points[j]).norm() <= chord + 1e-12);
        }
    }
}
