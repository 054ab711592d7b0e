//! Valence certificates: winding numbers of image curves about probe points, a
//! disk-wide probe scan, and a damped Newton preimage oracle.
//!
//! For a sense-preserving harmonic map the number of preimages of `w` inside `|z| < r`,
//! counted with multiplicity, equals the winding number of `f(|z| = r)` about `w`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::function::HarmonicMapSpec;
use crate::geometry::{trace_circle_adaptive, BoundingBox, CurveTrace};
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub w: Complex64,
    pub winding: i64,
    pub min_curve_distance: f64,
}

/// Distance from `w` to the segment `[a, b]`.
fn segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let s = (((w - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (w - (a + ab * s)).norm()
}

/// Per-step bookkeeping of a closed polyline around `w`.
struct Sweep {
    min_distance: f64,
    /// Signed crossings of the ray `w + [0, inf)`.
    crossings: i64,
    /// First step whose angle increment reaches `pi/2`.
    coarse_step: Option<usize>,
}

fn sweep(points: &[Complex64], w: Complex64) -> Sweep {
    let n = points.len();
    let mut min_distance = f64::INFINITY;
    let mut crossings = 0;
    let mut coarse_step = None;
    for j in 0..n {
        let a = points[j] - w;
        let b = points[(j + 1) % n] - w;
        min_distance = min_distance.min(segment_distance(Complex64::new(0.0, 0.0), a, b));
        let cross = a.re * b.im - a.im * b.re;
        let dot = a.re * b.re + a.im * b.im;
        if dot <= 0.0 && coarse_step.is_none() {
            coarse_step = Some(j);
        }
        if a.im <= 0.0 && b.im > 0.0 && cross > 0.0 {
            crossings += 1;
        } else if a.im > 0.0 && b.im <= 0.0 && cross < 0.0 {
            crossings -= 1;
        }
    }
    Sweep {
        min_distance,
        crossings,
        coarse_step,
    }
}

/// Sum of principal-value angle increments of `points - w` divided by `2 pi`.
///
/// This is the textbook form of the discrete winding number; [`winding_number`] computes
/// the same integer by counting signed ray crossings, which agrees whenever every
/// increment is below `pi/2`.
pub fn winding_by_angle_sum(points: &[Complex64], w: Complex64) -> f64 {
    let n = points.len();
    let total: f64 = (0..n)
        .map(|j| ((points[(j + 1) % n] - w) * (points[j] - w).conj()).arg())
        .sum();
    total / TAU
}

fn classify(trace: &CurveTrace, w: Complex64, clearance: f64) -> Result<Sweep> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("probe {w} is not finite")));
    }
    let s = sweep(&trace.points, w);
    if s.min_distance <= clearance {
        return Err(Error::IndeterminateProbe {
            w,
            distance: s.min_distance,
            clearance,
        });
    }
    Ok(s)
}

/// Winding number of a closed trace about `w`, without refinement.
pub fn winding_number(trace: &CurveTrace, w: Complex64, probe_clearance: f64) -> Result<WindingResult> {
    let s = classify(trace, w, probe_clearance)?;
    if s.coarse_step.is_some() {
        return Err(Error::Resolution { w });
    }
    Ok(WindingResult {
        w,
        winding: s.crossings,
        min_curve_distance: s.min_distance,
    })
}

/// Winding number about `w`, splitting each too-coarse step into up to four sub-steps
/// evaluated from `map` before giving up.
pub fn winding_number_refined(
    map: &HarmonicMapSpec,
    trace: &CurveTrace,
    w: Complex64,
    probe_clearance: f64,
    cfg: &QuadratureConfig,
) -> Result<WindingResult> {
    let s = classify(trace, w, probe_clearance)?;
    if s.coarse_step.is_none() {
        return Ok(WindingResult {
            w,
            winding: s.crossings,
            min_curve_distance: s.min_distance,
        });
    }
    let n = trace.len();
    let mut points = Vec::with_capacity(n + 64);
    for j in 0..n {
        let a = trace.points[j];
        let b = trace.points[(j + 1) % n];
        points.push(a);
        let (da, db) = (a - w, b - w);
        if da.re * db.re + da.im * db.im > 0.0 {
            continue;
        }
        let t0 = trace.t[j];
        let t1 = if j + 1 < n { trace.t[j + 1] } else { trace.t[0] + TAU };
        let mut prev = a;
        for q in 1..4 {
            let t = t0 + (t1 - t0) * q as f64 / 4.0;
            let p = map.eval_f_polar(trace.radius, t, cfg)?.value;
            if ((p - w) * (prev - w).conj()).arg().abs() >= FRAC_PI_2 {
                return Err(Error::Resolution { w });
            }
            points.push(p);
            prev = p;
        }
        if ((b - w) * (prev - w).conj()).arg().abs() >= FRAC_PI_2 {
            return Err(Error::Resolution { w });
        }
    }
    let s = sweep(&points, w);
    if s.min_distance <= probe_clearance {
        return Err(Error::IndeterminateProbe {
            w,
            distance: s.min_distance,
            clearance: probe_clearance,
        });
    }
    if s.coarse_step.is_some() {
        return Err(Error::Resolution { w });
    }
    Ok(WindingResult {
        w,
        winding: s.crossings,
        min_curve_distance: s.min_distance,
    })
}

/// Trace resolution used for valence work: a 4096-sample base refined until no chord
/// exceeds 1/800 of the image extent.
pub fn valence_trace(map: &HarmonicMapSpec, r: f64, cfg: &QuadratureConfig) -> Result<CurveTrace> {
    trace_circle_adaptive(map, r, 4096, 1.0 / 800.0, 12, cfg)
}

/// Probe clearance relative to image diameter.
pub const PROBE_CLEARANCE_REL: f64 = 1e-4;
/// Largest tolerated fraction of indeterminate probes.
pub const MAX_INDETERMINATE_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValenceReport {
    pub p: u32,
    pub radius: f64,
    /// Probe columns and rows.
    pub grid: (usize, usize),
    /// Probe region: image bounding box padded by 10%.
    pub region: BoundingBox,
    pub trace_samples: usize,
    pub probe_clearance: f64,
    pub results: Vec<WindingResult>,
    pub indeterminate: usize,
    pub max_valence: i64,
    pub attained_at: Vec<Complex64>,
    pub consistent_with_p: bool,
}

/// Winding numbers of `f(|z| = r)` over a `cols x rows` probe grid.
pub fn valence_scan(
    map: &HarmonicMapSpec,
    r: f64,
    (cols, rows): (usize, usize),
    cfg: &QuadratureConfig,
) -> Result<ValenceReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("scan radius must lie in (0, 1), got {r}")));
    }
    if cols == 0 || rows == 0 {
        return Err(Error::InvalidParameter("probe grid must be non-empty".into()));
    }
    let trace = valence_trace(map, r, cfg)?;
    let region = trace.bounding_box().padded(0.1);
    let clearance = PROBE_CLEARANCE_REL * trace.diameter();
    let probes: Vec<Complex64> = (0..rows)
        .flat_map(|iy| {
            (0..cols).map(move |ix| {
                Complex64::new(
                    region.min_x + (ix as f64 + 0.5) * region.width() / cols as f64,
                    region.min_y + (iy as f64 + 0.5) * region.height() / rows as f64,
                )
            })
        })
        .collect();
    let outcomes: Vec<Result<Option<WindingResult>>> = probes
        .par_iter()
        .map(|&w| match winding_number_refined(map, &trace, w, clearance, cfg) {
            Ok(r) => Ok(Some(r)),
            Err(Error::IndeterminateProbe { .. } | Error::Resolution { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut results = Vec::with_capacity(probes.len());
    let mut indeterminate = 0;
    for o in outcomes {
        match o? {
            Some(r) => results.push(r),
            None => indeterminate += 1,
        }
    }
    let total = probes.len();
    if indeterminate as f64 > MAX_INDETERMINATE_FRACTION * total as f64 {
        return Err(Error::ScanQuality {
            indeterminate,
            total,
        });
    }
    let max_valence = results.iter().map(|r| r.winding).max().unwrap_or(0);
    let attained_at = results
        .iter()
        .filter(|r| r.winding == max_valence)
        .map(|r| r.w)
        .collect();
    Ok(ValenceReport {
        p: map.p(),
        radius: r,
        grid: (cols, rows),
        region,
        trace_samples: trace.len(),
        probe_clearance: clearance,
        results,
        indeterminate,
        max_valence,
        attained_at,
        consistent_with_p: max_valence == map.p() as i64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    pub tol: f64,
    pub dedupe_radius: f64,
    pub max_iter: usize,
    pub max_halvings: u32,
    /// Starts are drawn from `|z| < start_radius`.
    pub start_radius: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tol: 1e-10,
            dedupe_radius: 1e-6,
            max_iter: 100,
            max_halvings: 20,
            start_radius: 0.999,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub w: Complex64,
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub starts: usize,
    pub non_converged: usize,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// First `count` points of the Halton (2, 3) sequence mapped to the square
/// `[-radius, radius]^2` that fall inside `|z| < radius`.
pub fn halton_disk(count: usize, radius: f64) -> Vec<Complex64> {
    (1_u64..)
        .map(|i| {
            Complex64::new(
                radius * (2.0 * radical_inverse(i, 2) - 1.0),
                radius * (2.0 * radical_inverse(i, 3) - 1.0),
            )
        })
        .filter(|z| z.norm() < radius)
        .take(count)
        .collect()
}

/// Jacobian determinant of `f` seen as a map of the plane: `|h'|^2 - |g'|^2`.
pub fn jacobian(map: &HarmonicMapSpec, z: Complex64) -> Result<f64> {
    Ok(map.h().eval_h_prime(z)?.norm_sqr() - map.eval_g_prime(z)?.norm_sqr())
}

fn newton_from(
    map: &HarmonicMapSpec,
    w: Complex64,
    start: Complex64,
    ncfg: &NewtonConfig,
    cfg: &QuadratureConfig,
) -> Option<(Complex64, f64)> {
    let residual = |z: Complex64| map.eval_f(z, cfg).ok().map(|v| v - w);
    let mut z = start;
    let mut r = residual(z)?;
    for _ in 0..ncfg.max_iter {
        if r.norm() == 0.0 {
            break;
        }
        let hp = map.h().eval_h_prime(z).ok()?;
        let gp = map.eval_g_prime(z).ok()?;
        // df = a dx + b dy with a = h' + conj(g'), b = i (h' - conj(g')).
        let a = hp + gp.conj();
        let b = Complex64::new(0.0, 1.0) * (hp - gp.conj());
        let det = a.re * b.im - b.re * a.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = -(b.im * r.re - b.re * r.im) / det;
        let dy = -(a.re * r.im - a.im * r.re) / det;
        let step = Complex64::new(dx, dy);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=ncfg.max_halvings {
            let cand = z + step * lambda;
            if cand.norm() < 1.0 {
                if let Some(rc) = residual(cand) {
                    if rc.norm() < r.norm() {
                        accepted = Some((cand, rc));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        let Some((next, rn)) = accepted else { break };
        let moved = (next - z).norm();
        z = next;
        r = rn;
        if r.norm() < ncfg.tol && moved <= 1e-12 * (1.0 + z.norm()) {
            break;
        }
    }
    (r.norm() < ncfg.tol && z.norm() < 1.0).then_some((z, r.norm()))
}

/// Distinct solutions of `f(z) = w` reached by damped Newton from `starts` quasi-random
/// points in the disk.
pub fn newton_preimages(
    map: &HarmonicMapSpec,
    w: Complex64,
    starts: usize,
    ncfg: &NewtonConfig,
    cfg: &QuadratureConfig,
) -> Result<PreimageSet> {
    if starts < 100 {
        return Err(Error::InvalidParameter(format!("need at least 100 starts, got {starts}")));
    }
    let seeds = halton_disk(starts, ncfg.start_radius);
    let found: Vec<Option<(Complex64, f64)>> = seeds
        .par_iter()
        .map(|&s| newton_from(map, w, s, ncfg, cfg))
        .collect();
    let non_converged = found.iter().filter(|f| f.is_none()).count();
    let mut roots: Vec<(Complex64, f64)> = Vec::new();
    for (z, res) in found.into_iter().flatten() {
        match roots.iter_mut().find(|(r, _)| (r - z).norm() < ncfg.dedupe_radius) {
            Some(existing) => {
                if res < existing.1 {
                    *existing = (z, res);
                }
            }
            None => roots.push((z, res)),
        }
    }
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(PreimageSet {
        w,
        roots: roots.iter().map(|r| r.0).collect(),
        residuals: roots.iter().map(|r| r.1).collect(),
        starts,
        non_converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossCheckOutcome {
    Agree,
    Disagree,
    /// Some preimage has a singular local linearization; counts are not comparable.
    IndeterminateMultiplicity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub w: Complex64,
    pub radius: f64,
    pub winding: i64,
    pub preimages: Vec<Complex64>,
    pub outcome: CrossCheckOutcome,
}

impl CrossCheck {
    /// `Some(true)` on agreement, `None` for multiplicity cases.
    pub fn agrees(&self) -> Option<bool> {
        match self.outcome {
            CrossCheckOutcome::Agree => Some(true),
            CrossCheckOutcome::Disagree => Some(false),
            CrossCheckOutcome::IndeterminateMultiplicity => None,
        }
    }
}

/// Jacobian threshold below which a preimage counts as degenerate.
pub const SIMPLE_ROOT_JACOBIAN: f64 = 1e-12;

/// Compares the winding number of `f(|z| = r)` about `w` with the number of Newton
/// preimages inside `|z| < r`.
pub fn cross_check(
    map: &HarmonicMapSpec,
    w: Complex64,
    r: f64,
    starts: usize,
    trace: Option<&CurveTrace>,
    cfg: &QuadratureConfig,
) -> Result<CrossCheck> {
    let owned;
    let trace = match trace {
        Some(t) => t,
        None => {
            owned = valence_trace(map, r, cfg)?;
            &owned
        }
    };
    let clearance = PROBE_CLEARANCE_REL * trace.diameter();
    let winding = winding_number_refined(map, trace, w, clearance, cfg)?.winding;
    let set = newton_preimages(map, w, starts, &NewtonConfig::default(), cfg)?;
    let inside: Vec<Complex64> = set.roots.into_iter().filter(|z| z.norm() < r).collect();
    let mut degenerate = false;
    for &z in &inside {
        if jacobian(map, z)? <= SIMPLE_ROOT_JACOBIAN {
            degenerate = true;
        }
    }
    let outcome = if degenerate {
        CrossCheckOutcome::IndeterminateMultiplicity
    } else if inside.len() as i64 == winding {
        CrossCheckOutcome::Agree
    } else {
        CrossCheckOutcome::Disagree
    };
    Ok(CrossCheck {
        w,
        radius: r,
        winding,
        preimages: inside,
        outcome,
    })
}
