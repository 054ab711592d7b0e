//! Deterministic SVG figures: images of concentric circles and radial rays under `f`,
//! the near-boundary outline, and cusp markers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use crate::criterion::CriterionReport;
use crate::error::{Error, Result};
use crate::function::HarmonicMapSpec;
use crate::geometry::BoundingBox;
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub circle_radii: Vec<f64>,
    pub ray_count: usize,
    pub samples_per_curve: usize,
    pub width_px: u32,
    pub height_px: u32,
    pub boundary_stroke_px: f64,
    pub grid_stroke_px: f64,
    pub boundary_color: String,
    pub grid_color: String,
    pub cusp_color: String,
    pub cusp_radius_px: f64,
    pub show_cusps: bool,
    /// Radius of the outline curve.
    pub max_radius: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            circle_radii: vec![0.2, 0.4, 0.6, 0.8, 0.95, 0.999],
            ray_count: 24,
            samples_per_curve: 2048,
            width_px: 800,
            height_px: 800,
            boundary_stroke_px: 2.0,
            grid_stroke_px: 0.6,
            boundary_color: "#1f3b73".into(),
            grid_color: "#8a9bb8".into(),
            cusp_color: "#c0392b".into(),
            cusp_radius_px: 4.0,
            show_cusps: true,
            max_radius: 1.0 - 1e-6,
        }
    }
}

impl RenderOptions {
    /// Outline only.
    pub fn boundary_only() -> Self {
        RenderOptions {
            circle_radii: Vec::new(),
            ray_count: 0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.circle_radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidParameter("circle radii must lie in (0, 1)".into()));
        }
        if !(self.max_radius > 0.0 && self.max_radius <= 1.0) {
            return Err(Error::InvalidParameter("max_radius must lie in (0, 1]".into()));
        }
        if self.samples_per_curve < 512 {
            return Err(Error::InvalidParameter("samples_per_curve must be at least 512".into()));
        }
        if self.width_px == 0 || self.height_px == 0 {
            return Err(Error::InvalidParameter("canvas must be non-empty".into()));
        }
        Ok(())
    }
}

/// A sampled curve split into runs of successfully evaluated points.
struct Polyline {
    runs: Vec<Vec<Complex64>>,
    closed: bool,
    failures: Vec<String>,
}

fn sample_curve<F>(params: &[f64], closed: bool, eval: F) -> Polyline
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let values: Vec<Result<Complex64>> = params
        .par_iter()
        .map(|&s| {
            eval(s).and_then(|v| {
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::InvalidParameter(format!("non-finite value at parameter {s}")))
                }
            })
        })
        .collect();
    let mut runs = vec![Vec::new()];
    let mut failures = Vec::new();
    for (s, v) in params.iter().zip(values) {
        match v {
            Ok(p) => runs.last_mut().unwrap().push(p),
            Err(e) => {
                failures.push(format!("parameter {s:.6}: {e}"));
                if !runs.last().unwrap().is_empty() {
                    runs.push(Vec::new());
                }
            }
        }
    }
    runs.retain(|r| !r.is_empty());
    Polyline {
        closed: closed && failures.is_empty(),
        runs,
        failures,
    }
}

fn comment_safe(text: &str) -> String {
    text.replace("--", "- -")
}

fn write_path(out: &mut String, class: &str, line: &Polyline) {
    for failure in &line.failures {
        let _ = writeln!(out, "<!-- broken {class} path: {} -->", comment_safe(failure));
    }
    for run in &line.runs {
        let mut d = String::with_capacity(run.len() * 24);
        for (i, p) in run.iter().enumerate() {
            let _ = write!(d, "{}{:.6} {:.6}", if i == 0 { "M" } else { " L" }, p.re, -p.im);
        }
        if line.closed {
            d.push_str(" Z");
        }
        let _ = writeln!(out, "<path class=\"{class}\" d=\"{d}\"/>");
    }
}

fn escape_attr(text: &str) -> String {
    text.replace('&', "&amp;").replace('"', "&quot;").replace('<', "&lt;")
}

/// SVG 1.1 document of the image of the disk under `map`.
///
/// Evaluation failures never abort rendering: the affected curve is split and the error is
/// embedded as a comment.
pub fn render_scene(
    map: &HarmonicMapSpec,
    criterion: Option<&CriterionReport>,
    opts: &RenderOptions,
    cfg: &QuadratureConfig,
) -> Result<String> {
    opts.validate()?;
    let n = opts.samples_per_curve;
    let angles: Vec<f64> = (0..n).map(|j| -PI + TAU * j as f64 / n as f64).collect();

    let outline = sample_curve(&angles, true, |t| {
        map.eval_f_polar(opts.max_radius, t, cfg).map(|s| s.value)
    });
    let circles: Vec<Polyline> = opts
        .circle_radii
        .iter()
        .map(|&r| sample_curve(&angles, true, |t| map.eval_f_polar(r, t, cfg).map(|s| s.value)))
        .collect();
    let radial: Vec<f64> = (0..n)
        .map(|j| opts.max_radius * j as f64 / (n - 1) as f64)
        .collect();
    let rays: Vec<Polyline> = (0..opts.ray_count)
        .map(|k| {
            let theta = -PI + TAU * k as f64 / opts.ray_count as f64;
            sample_curve(&radial, false, |s| map.eval_f_polar(s, theta, cfg).map(|v| v.value))
        })
        .collect();

    let all_outline: Vec<Complex64> = outline.runs.iter().flatten().copied().collect();
    let bbox = if all_outline.is_empty() {
        BoundingBox {
            min_x: -1.0,
            max_x: 1.0,
            min_y: -1.0,
            max_y: 1.0,
        }
    } else {
        // The SVG y axis points down; flip before fitting.
        let flipped: Vec<Complex64> = all_outline.iter().map(|p| p.conj()).collect();
        BoundingBox::around(&flipped)
    };
    let side = bbox.width().max(bbox.height()).max(1e-12);
    let pad = 0.05 * side;
    let (cx, cy) = (0.5 * (bbox.min_x + bbox.max_x), 0.5 * (bbox.min_y + bbox.max_y));
    let aspect = opts.width_px as f64 / opts.height_px as f64;
    let (mut vw, mut vh) = (side + 2.0 * pad, side + 2.0 * pad);
    if aspect >= 1.0 {
        vw *= aspect;
    } else {
        vh /= aspect;
    }
    let (vx, vy) = (cx - 0.5 * vw, cy - 0.5 * vh);
    let unit = vw / opts.width_px as f64;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\">",
        opts.width_px, opts.height_px
    );
    let _ = writeln!(
        out,
        "<!-- f = h + conj(g), p = {}, m = {}, outline radius {:.6} -->",
        map.p(),
        map.m(),
        opts.max_radius
    );
    let _ = writeln!(
        out,
        "<rect x=\"{vx:.6}\" y=\"{vy:.6}\" width=\"{vw:.6}\" height=\"{vh:.6}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\" stroke-linejoin=\"round\">",
        escape_attr(&opts.grid_color),
        opts.grid_stroke_px * unit
    );
    for c in &circles {
        write_path(&mut out, "circle", c);
    }
    for r in &rays {
        write_path(&mut out, "ray", r);
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\" stroke-linejoin=\"round\">",
        escape_attr(&opts.boundary_color),
        opts.boundary_stroke_px * unit
    );
    write_path(&mut out, "boundary", &outline);
    out.push_str("</g>\n");

    if let Some(report) = criterion.filter(|r| opts.show_cusps && r.theorem_applies) {
        let _ = writeln!(out, "<g fill=\"{}\" stroke=\"none\">", escape_attr(&opts.cusp_color));
        for root in report.roots.iter().filter(|r| !r.suspected_tangency) {
            let p = root.f_value_at_root;
            let _ = writeln!(
                out,
                "<circle class=\"cusp\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\"/>",
                p.re,
                -p.im,
                opts.cusp_radius_px * unit
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
