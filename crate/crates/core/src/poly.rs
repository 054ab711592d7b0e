//! Dense complex polynomials in ascending coefficient order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<Complex64>);

impl Poly {
    /// Builds a polynomial from `coeffs[k]` = coefficient of `z^k`. Trailing zeros are dropped.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Horner evaluation.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Sum of coefficient moduli; bounds `|p(z)|` on the closed unit disk.
    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).sum()
    }

    /// Number of leading (low-order) coefficients that are exactly zero.
    pub fn low_order_zeros(&self) -> usize {
        self.0
            .iter()
            .take_while(|c| **c == Complex64::new(0.0, 0.0))
            .count()
    }

    /// Divides by `z^k`, assuming the low-order `k` coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.0.iter().skip(k).copied().collect())
    }

    /// All roots via Durand-Kerner iteration followed by Newton polishing.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.0[n];
        let monic: Vec<Complex64> = self.0.iter().map(|c| c / lead).collect();
        let monic = Poly(monic);

        // Cauchy bound for the initial circle.
        let bound = 1.0
            + monic.0[..n]
                .iter()
                .map(|c| c.norm())
                .fold(0.0_f64, f64::max);
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| {
                let angle = 0.4 + std::f64::consts::TAU * k as f64 / n as f64;
                Complex64::from_polar(0.5 * bound, angle)
            })
            .collect();

        for _ in 0..1000 {
            let mut delta = 0.0_f64;
            for i in 0..n {
                let zi = roots[i];
                let denom = roots
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(Complex64::new(1.0, 0.0), |acc, (_, &zj)| acc * (zi - zj));
                if denom.norm() == 0.0 {
                    roots[i] += Complex64::new(1e-10, 1e-10);
                    delta = f64::INFINITY;
                    continue;
                }
                let step = monic.eval(zi) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm() / (1.0 + zi.norm()));
            }
            if delta < 1e-15 {
                break;
            }
        }

        let dp = monic.derivative();
        for r in roots.iter_mut() {
            for _ in 0..5 {
                let d = dp.eval(*r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = monic.eval(*r) / d;
                *r -= step;
                if step.norm() <= f64::EPSILON * (1.0 + r.norm()) {
                    break;
                }
            }
        }
        roots
    }
}

impl From<Vec<Complex64>> for Poly {
    fn from(v: Vec<Complex64>) -> Self {
        Poly::new(v)
    }
}
