//! Continuous argument branches of nonvanishing complex functions along `[-pi, pi]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Cap on refined sample count.
pub const MAX_UNWRAP_POINTS: usize = 1 << 20;

/// Samples of a function on `[-pi, pi]` (both ends included) with a continuous phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub t: Vec<f64>,
    pub values: Vec<Complex64>,
    pub phase: Vec<f64>,
}

impl PhaseTable {
    /// Net number of turns about the origin over the full period.
    pub fn winding(&self) -> i64 {
        let total = self.phase.last().unwrap() - self.phase[0];
        (total / TAU).round() as i64
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Index `j` with `t[j] <= t < t[j+1]`, clamped to the table.
    pub fn cell(&self, t: f64) -> usize {
        let j = self.t.partition_point(|&x| x <= t);
        j.saturating_sub(1).min(self.t.len() - 2)
    }

    /// Continuous phase at `t` given the function value there.
    pub fn phase_at(&self, t: f64, value: Complex64) -> f64 {
        let j = self.cell(t);
        let left = (value * self.values[j].conj()).arg();
        let right = (value * self.values[j + 1].conj()).arg();
        // Anchor to whichever neighbour is closer; both agree on a resolved grid.
        if t - self.t[j] <= self.t[j + 1] - t {
            self.phase[j] + left
        } else {
            self.phase[j + 1] + right
        }
    }
}

/// Samples `f` on a uniform grid of `grid_size` cells over `[-pi, pi]`, bisecting any cell
/// whose phase increment reaches `pi/2`. The branch starts at the principal value at `-pi`.
///
/// Fails if `|f|` drops to `vanish_tol` or below at a sample, if `f` errors, or if the
/// refined table would exceed [`MAX_UNWRAP_POINTS`].
pub fn unwrap_on_circle<F>(f: F, grid_size: usize, vanish_tol: f64) -> Result<PhaseTable>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let sample = |t: f64| -> Result<Complex64> {
        let v = f(t)?;
        if !(v.norm() > vanish_tol) {
            return Err(Error::HVanishesOnBoundary { t, modulus: v.norm() });
        }
        Ok(v)
    };

    let coarse: Vec<f64> = (0..=grid_size)
        .map(|j| -PI + TAU * j as f64 / grid_size as f64)
        .collect();
    let coarse_vals: Vec<Complex64> = coarse.iter().map(|&t| sample(t)).collect::<Result<_>>()?;

    let mut t_out = Vec::with_capacity(grid_size + 1);
    let mut v_out = Vec::with_capacity(grid_size + 1);
    let mut ph_out = Vec::with_capacity(grid_size + 1);
    t_out.push(coarse[0]);
    v_out.push(coarse_vals[0]);
    ph_out.push(coarse_vals[0].arg());

    // Pending right endpoints, processed left to right.
    let mut pending: Vec<(f64, Complex64)> = Vec::new();
    for j in 1..coarse.len() {
        pending.push((coarse[j], coarse_vals[j]));
        while let Some(&(tr, vr)) = pending.last() {
            let tl = *t_out.last().unwrap();
            let vl = *v_out.last().unwrap();
            let step = (vr * vl.conj()).arg();
            if step.abs() < FRAC_PI_2 {
                pending.pop();
                t_out.push(tr);
                v_out.push(vr);
                ph_out.push(ph_out.last().unwrap() + step);
                continue;
            }
            if t_out.len() + pending.len() >= MAX_UNWRAP_POINTS {
                return Err(Error::UnwrapFailure {
                    limit: MAX_UNWRAP_POINTS,
                });
            }
            let tm = 0.5 * (tl + tr);
            if tm <= tl || tm >= tr {
                return Err(Error::UnwrapFailure {
                    limit: MAX_UNWRAP_POINTS,
                });
            }
            pending.push((tm, sample(tm)?));
        }
    }

    Ok(PhaseTable {
        t: t_out,
        values: v_out,
        phase: ph_out,
    })
}

/// Number of zeros of a polynomial-like function inside the circle of radius `r`,
/// by the winding of its image.
pub fn winding_on_circle<F>(f: F, r: f64, grid_size: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
{
    let table = unwrap_on_circle(|t| Ok(f(Complex64::from_polar(r, t))), grid_size, 0.0)?;
    Ok(table.winding())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_function_has_zero_phase() {
        let table = unwrap_on_circle(|_| Ok(Complex64::new(2.0, 0.0)), 1024, 1e-9).unwrap();
        assert!(table.phase.iter().all(|&p| p == 0.0));
        assert_eq!(table.winding(), 0);
    }

    #[test]
    fn fast_rotation_is_refined() {
        // e^{i 300 t} on 1024 cells: coarse increments of about 1.84 rad need refinement.
        let table = unwrap_on_circle(|t| Ok(Complex64::from_polar(1.0, 300.0 * t)), 1024, 1e-9).unwrap();
        assert_eq!(table.winding(), 300);
        assert!(table.t.len() > 1025);
        for w in table.phase.windows(2) {
            assert!((w[1] - w[0]).abs() < FRAC_PI_2);
        }
        for (&t, &ph) in table.t.iter().zip(&table.phase) {
            let expected = Complex64::from_polar(1.0, 300.0 * t);
            assert!((Complex64::from_polar(1.0, ph) - expected).norm() < 1e-9);
        }
    }

    #[test]
    fn vanishing_function_is_rejected() {
        let err = unwrap_on_circle(|t| Ok(Complex64::new(t, 0.0)), 1024, 1e-9).unwrap_err();
        assert!(matches!(err, Error::HVanishesOnBoundary { .. }));
    }

    #[test]
    fn zero_counting() {
        // (z - 0.5)(z + 0.2i)(z - 3): two zeros inside the unit circle.
        let f = |z: Complex64| (z - 0.5) * (z + Complex64::new(0.0, 0.2)) * (z - 3.0);
        assert_eq!(winding_on_circle(f, 1.0, 1024).unwrap(), 2);
        assert_eq!(winding_on_circle(f, 0.3, 1024).unwrap(), 1);
    }
}
