//! Analytic part `h`, co-analytic part `g` with `g'(z) = z^(m-1) h'(z)`, and `f = h + conj(g)`.
//!
//! Two machine representations of `h` are supported: a finite power series normalized so
//! that the `z^p` coefficient is exactly one, and a closed-form rational derivative
//! `h'(z) = numer(z) / denom(z)` with `h(0) = 0`. Series specs are evaluated exactly by
//! nested multiplication; rational specs reach `h` and `g` by radial Gauss-Kronrod
//! quadrature of their derivatives.
//!
//! Rational specs may carry poles on the unit circle. Points requested within
//! `boundary_epsilon` of the circle are then pulled back to radius `1 - boundary_epsilon`
//! and the resulting [`Sample`] is flagged as clamped.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::{integrate, QuadratureConfig};

/// Slack for points numerically on the unit circle, e.g. `exp(i t)`.
const CIRCLE_SLACK: f64 = 1e-12;
/// Denominator roots within this distance of the unit circle count as boundary poles.
const BOUNDARY_POLE_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Defining data of the analytic part `h`.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// `coeffs[j]` is the coefficient of `z^(p+j)`; `coeffs[0] == 1`.
    PolySeries { coeffs: Vec<Complex64> },
    /// `h'(z) = numer(z) / denom(z)` and `h(0) = 0`.
    RationalDeriv { numer: Poly, denom: Poly },
}

#[derive(Debug, Clone)]
enum Kernel {
    Series {
        h: Poly,
        dh: Poly,
        d2h: Poly,
        big_h: Poly,
    },
    Rational {
        numer: Poly,
        denom: Poly,
        dnumer: Poly,
        ddenom: Poly,
        /// `numer / z^(p-1)`.
        big_h_numer: Poly,
        boundary_poles: Vec<Complex64>,
        pole_scale: f64,
    },
}

/// A validated analytic part `h` of valence target `p`.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    p: u32,
    repr: Representation,
    kernel: Kernel,
}

impl PartialEq for FunctionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.repr == other.repr
    }
}

/// A value of `h`, `g` or `f`, flagged when the input point was pulled off the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: Complex64,
    pub clamped: bool,
}

fn check_finite(label: &str, coeffs: &[Complex64]) -> Result<()> {
    if coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{label} has non-finite coefficients")))
    }
}

impl FunctionSpec {
    pub fn new(p: u32, repr: Representation) -> Result<Self> {
        match repr {
            Representation::PolySeries { coeffs } => Self::poly_series(p, coeffs),
            Representation::RationalDeriv { numer, denom } => Self::rational_deriv(p, numer, denom),
        }
    }

    /// `h(z) = sum_j coeffs[j] z^(p+j)`.
    pub fn poly_series(p: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSpec("p must be a positive integer".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("coefficient list is empty".into()));
        }
        check_finite("coeffs", &coeffs)?;
        if coeffs[0] != Complex64::new(1.0, 0.0) {
            return Err(Error::InvalidSpec(format!(
                "normalization violated: a_{p} = {} (must be exactly 1)",
                coeffs[0]
            )));
        }
        let mut full = vec![ZERO; p as usize];
        full.extend_from_slice(&coeffs);
        let h = Poly::new(full);
        let dh = h.derivative();
        let d2h = dh.derivative();
        let big_h = dh.shift_down(p as usize - 1);
        Ok(FunctionSpec {
            p,
            repr: Representation::PolySeries { coeffs },
            kernel: Kernel::Series { h, dh, d2h, big_h },
        })
    }

    /// `h'(z) = numer(z) / denom(z)`, `h(0) = 0`.
    pub fn rational_deriv(p: u32, numer: Poly, denom: Poly) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSpec("p must be a positive integer".into()));
        }
        check_finite("numer", numer.coeffs())?;
        check_finite("denom", denom.coeffs())?;
        if numer.is_zero() || denom.is_zero() {
            return Err(Error::InvalidSpec("numer and denom must be nonzero".into()));
        }
        let d0 = denom.coeffs()[0];
        if d0 == ZERO {
            return Err(Error::InvalidSpec("denom(0) must be nonzero".into()));
        }
        if numer.low_order_zeros() != p as usize - 1 {
            return Err(Error::InvalidSpec(format!(
                "numer must vanish to order exactly {} at the origin",
                p - 1
            )));
        }
        let lead = numer.coeffs()[p as usize - 1] / d0;
        if (lead - p as f64).norm() > 1e-12 * p as f64 {
            return Err(Error::InvalidSpec(format!(
                "normalization violated: h'(z) / z^{} -> {lead} at 0 (must be {p})",
                p - 1
            )));
        }

        let mut boundary_poles = Vec::new();
        for root in denom.roots() {
            let r = root.norm();
            if r < 1.0 - BOUNDARY_POLE_TOL {
                return Err(Error::InvalidSpec(format!(
                    "h' has a pole at {root} inside the unit disk"
                )));
            }
            if r <= 1.0 + BOUNDARY_POLE_TOL {
                boundary_poles.push(root / r);
            }
        }
        boundary_poles.sort_by(|a, b| a.arg().total_cmp(&b.arg()));

        let kernel = Kernel::Rational {
            dnumer: numer.derivative(),
            ddenom: denom.derivative(),
            big_h_numer: numer.shift_down(p as usize - 1),
            pole_scale: denom.l1_norm(),
            boundary_poles,
            numer: numer.clone(),
            denom: denom.clone(),
        };
        Ok(FunctionSpec {
            p,
            repr: Representation::RationalDeriv { numer, denom },
            kernel,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// Poles of `h'` on the unit circle (normalized to modulus one), sorted by argument.
    pub fn boundary_poles(&self) -> &[Complex64] {
        match &self.kernel {
            Kernel::Series { .. } => &[],
            Kernel::Rational { boundary_poles, .. } => boundary_poles,
        }
    }

    pub fn has_boundary_poles(&self) -> bool {
        !self.boundary_poles().is_empty()
    }

    pub fn is_series(&self) -> bool {
        matches!(self.kernel, Kernel::Series { .. })
    }

    fn check_domain(z: Complex64) -> Result<()> {
        if z.norm() > 1.0 + CIRCLE_SLACK || !z.re.is_finite() || !z.im.is_finite() {
            Err(Error::Domain { z })
        } else {
            Ok(())
        }
    }

    /// Applies the boundary clamp for specs with poles on the unit circle.
    pub(crate) fn clamp(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<(Complex64, bool)> {
        Self::check_domain(z)?;
        let radius = 1.0 - cfg.boundary_epsilon;
        if self.has_boundary_poles() && z.norm() > radius {
            Ok((z / z.norm() * radius, true))
        } else {
            Ok((z, false))
        }
    }

    fn denom_checked(denom: &Poly, scale: f64, z: Complex64) -> Result<Complex64> {
        let d = denom.eval(z);
        if d.norm() <= 1e-14 * scale {
            Err(Error::Pole { at: z })
        } else {
            Ok(d)
        }
    }

    /// `h(z)`, with the clamp flag for rational specs with boundary poles.
    pub fn eval_h_sample(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<Sample> {
        let (z, clamped) = self.clamp(z, cfg)?;
        let value = match &self.kernel {
            Kernel::Series { h, .. } => h.eval(z),
            Kernel::Rational { numer, denom, .. } => {
                if z == ZERO {
                    ZERO
                } else {
                    z * integrate(|s| numer.eval(z * s) / denom.eval(z * s), 0.0, 1.0, cfg)?
                }
            }
        };
        Ok(Sample { value, clamped })
    }

    pub fn eval_h(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
        self.eval_h_sample(z, cfg).map(|s| s.value)
    }

    pub fn eval_h_prime(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        match &self.kernel {
            Kernel::Series { dh, .. } => Ok(dh.eval(z)),
            Kernel::Rational {
                numer,
                denom,
                pole_scale,
                ..
            } => Ok(numer.eval(z) / Self::denom_checked(denom, *pole_scale, z)?),
        }
    }

    pub fn eval_h_second(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        match &self.kernel {
            Kernel::Series { d2h, .. } => Ok(d2h.eval(z)),
            Kernel::Rational {
                numer,
                denom,
                dnumer,
                ddenom,
                pole_scale,
                ..
            } => {
                let d = Self::denom_checked(denom, *pole_scale, z)?;
                Ok((dnumer.eval(z) * d - numer.eval(z) * ddenom.eval(z)) / (d * d))
            }
        }
    }

    /// `H(z) = h'(z) / z^(p-1)`, evaluated without division by `z`.
    pub fn eval_big_h(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        match &self.kernel {
            Kernel::Series { big_h, .. } => Ok(big_h.eval(z)),
            Kernel::Rational {
                big_h_numer,
                denom,
                pole_scale,
                ..
            } => Ok(big_h_numer.eval(z) / Self::denom_checked(denom, *pole_scale, z)?),
        }
    }

    /// Polynomials whose zeros inside the disk are the zeros and poles of `H`:
    /// `(numerator of H, denominator of h')`. Series specs have a trivial denominator.
    pub(crate) fn big_h_factors(&self) -> (Poly, Option<Poly>) {
        match &self.kernel {
            Kernel::Series { big_h, .. } => (big_h.clone(), None),
            Kernel::Rational {
                big_h_numer, denom, ..
            } => (big_h_numer.clone(), Some(denom.clone())),
        }
    }

    /// `h(z) = z^p + sum a_n z^n` as a dense polynomial; `None` for rational specs.
    pub fn series_poly(&self) -> Option<&Poly> {
        match &self.kernel {
            Kernel::Series { h, .. } => Some(h),
            Kernel::Rational { .. } => None,
        }
    }

    /// Builds `g` with `g'(z) = z^(m-1) h'(z)` and `g(0) = 0`.
    pub fn derive_g(&self, m: u32) -> Result<HarmonicMapSpec> {
        HarmonicMapSpec::new(self.clone(), m)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum CoAnalytic {
    Series(Poly),
    Quadrature,
}

/// `f = h + conj(g)` with `g'(z) = z^(m-1) h'(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMapSpec {
    h: FunctionSpec,
    m: u32,
    g: CoAnalytic,
}

impl HarmonicMapSpec {
    pub fn new(h: FunctionSpec, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
        }
        let g = match h.representation() {
            Representation::PolySeries { coeffs } => {
                let p = h.p() as usize;
                let shift = m as usize - 1;
                let mut g = vec![ZERO; p + shift + coeffs.len()];
                for (j, a) in coeffs.iter().enumerate() {
                    let n = (p + j) as f64;
                    g[p + j + shift] = a * (n / (n + shift as f64));
                }
                CoAnalytic::Series(Poly::new(g))
            }
            Representation::RationalDeriv { .. } => CoAnalytic::Quadrature,
        };
        Ok(HarmonicMapSpec { h, m, g })
    }

    pub fn h(&self) -> &FunctionSpec {
        &self.h
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> u32 {
        self.h.p()
    }

    /// Number of boundary cusps predicted for theorem-regular specs, `2p + m - 1`.
    pub fn cusp_count(&self) -> u32 {
        2 * self.p() + self.m - 1
    }

    /// Explicit `g` polynomial for series specs.
    pub fn g_series(&self) -> Option<&Poly> {
        match &self.g {
            CoAnalytic::Series(g) => Some(g),
            CoAnalytic::Quadrature => None,
        }
    }

    pub fn eval_g_sample(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<Sample> {
        let (z, clamped) = self.h.clamp(z, cfg)?;
        let value = match &self.g {
            CoAnalytic::Series(g) => g.eval(z),
            CoAnalytic::Quadrature => {
                if z == ZERO {
                    ZERO
                } else {
                    let (numer, denom) = match self.h.representation() {
                        Representation::RationalDeriv { numer, denom } => (numer, denom),
                        Representation::PolySeries { .. } => unreachable!(),
                    };
                    let shift = self.m as i32 - 1;
                    z * integrate(
                        |s| {
                            let w = z * s;
                            w.powi(shift) * numer.eval(w) / denom.eval(w)
                        },
                        0.0,
                        1.0,
                        cfg,
                    )?
                }
            }
        };
        Ok(Sample { value, clamped })
    }

    pub fn eval_g(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
        self.eval_g_sample(z, cfg).map(|s| s.value)
    }

    /// `g'(z) = z^(m-1) h'(z)`.
    pub fn eval_g_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(z.powi(self.m as i32 - 1) * self.h.eval_h_prime(z)?)
    }

    pub fn eval_f_sample(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<Sample> {
        let h = self.h.eval_h_sample(z, cfg)?;
        let g = self.eval_g_sample(z, cfg)?;
        Ok(Sample {
            value: h.value + g.value.conj(),
            clamped: h.clamped || g.clamped,
        })
    }

    pub fn eval_f(&self, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
        self.eval_f_sample(z, cfg).map(|s| s.value)
    }

    /// `f(r e^{it})`.
    pub fn eval_f_polar(&self, r: f64, t: f64, cfg: &QuadratureConfig) -> Result<Sample> {
        self.eval_f_sample(Complex64::from_polar(r, t), cfg)
    }
}

/// Uniform angles `-pi + 2 pi j / n`, `j = 0..n`.
pub fn uniform_angles(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |j| -std::f64::consts::PI + TAU * j as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z_squared() -> FunctionSpec {
        FunctionSpec::poly_series(2, vec![c(1.0, 0.0)]).unwrap()
    }

    fn example2() -> FunctionSpec {
        FunctionSpec::poly_series(3, vec![c(1.0, 0.0), c(0.0, 0.25)]).unwrap()
    }

    fn star() -> FunctionSpec {
        let mut denom = vec![ZERO; 6];
        denom[0] = c(1.0, 0.0);
        denom[5] = c(1.0, 0.0);
        FunctionSpec::rational_deriv(2, Poly::new(vec![ZERO, c(2.0, 0.0)]), Poly::new(denom)).unwrap()
    }

    fn octagon() -> FunctionSpec {
        let mut denom = vec![ZERO; 9];
        denom[0] = c(1.0, 0.0);
        denom[8] = c(1.0, 0.0);
        FunctionSpec::rational_deriv(1, Poly::new(vec![c(1.0, 0.0)]), Poly::new(denom)).unwrap()
    }

    #[test]
    fn eval_h_examples() {
        let cfg = QuadratureConfig::default();
        assert_relative_eq!(z_squared().eval_h(c(0.0, 1.0), &cfg).unwrap().re, -1.0);
        assert!(z_squared().eval_h(c(0.0, 1.0), &cfg).unwrap().im.abs() < 1e-16);
        let v = example2().eval_h(c(1.0, 0.0), &cfg).unwrap();
        assert!((v - c(1.0, 0.25)).norm() < 1e-15);
        assert_eq!(star().eval_h(ZERO, &cfg).unwrap(), ZERO);
    }

    #[test]
    fn eval_h_prime_examples() {
        assert_eq!(z_squared().eval_h_prime(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(star().eval_h_prime(ZERO).unwrap(), ZERO);
        // d/dz (z^3 + i z^4 / 4) = 3 z^2 + i z^3
        assert!((example2().eval_h_prime(c(1.0, 0.0)).unwrap() - c(3.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_h_second_examples() {
        assert_eq!(z_squared().eval_h_second(c(0.3, 0.1)).unwrap(), c(2.0, 0.0));
        assert!((example2().eval_h_second(c(1.0, 0.0)).unwrap() - c(6.0, 3.0)).norm() < 1e-15);
        assert_eq!(octagon().eval_h_second(ZERO).unwrap(), ZERO);
    }

    #[test]
    fn h_second_of_octagon_matches_closed_form() {
        let z = c(0.4, -0.5);
        let expected = -8.0 * z.powi(7) / (1.0 + z.powi(8)).powi(2);
        assert!((octagon().eval_h_second(z).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn derive_g_series_coefficients() {
        let g = z_squared().derive_g(4).unwrap();
        let coeffs = g.g_series().unwrap().coeffs();
        assert_eq!(coeffs.len(), 6);
        assert_relative_eq!(coeffs[5].re, 0.4);
        assert!(coeffs[..5].iter().all(|c| *c == ZERO));

        let g = example2().derive_g(2).unwrap();
        let coeffs = g.g_series().unwrap().coeffs();
        assert!((coeffs[4] - c(0.75, 0.0)).norm() < 1e-16);
        assert!((coeffs[5] - c(0.0, 0.2)).norm() < 1e-16);

        for p in 1..6 {
            let mut coeffs = vec![c(1.0, 0.0)];
            coeffs.truncate(1);
            let h = FunctionSpec::poly_series(p, coeffs).unwrap();
            let g = h.derive_g(2).unwrap();
            let gc = g.g_series().unwrap().coeffs();
            assert_relative_eq!(gc[p as usize + 1].re, p as f64 / (p as f64 + 1.0));
        }
    }

    #[test]
    fn derive_g_rejects_small_m() {
        assert!(matches!(z_squared().derive_g(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn eval_g_and_f_examples() {
        let cfg = QuadratureConfig::default();
        let map = z_squared().derive_g(4).unwrap();
        assert_relative_eq!(map.eval_g(c(1.0, 0.0), &cfg).unwrap().re, 0.4);
        assert_relative_eq!(map.eval_f(c(1.0, 0.0), &cfg).unwrap().re, 1.4);
        let v = map.eval_f(c(0.0, 1.0), &cfg).unwrap();
        assert!((v - c(-1.0, -0.4)).norm() < 1e-15);
        assert_eq!(map.eval_f(ZERO, &cfg).unwrap(), ZERO);
        let s = star().derive_g(2).unwrap();
        assert_eq!(s.eval_g(ZERO, &cfg).unwrap(), ZERO);
        assert_eq!(s.eval_f(ZERO, &cfg).unwrap(), ZERO);
    }

    #[test]
    fn octagon_g_matches_trapezoid_oracle() {
        // Independent composite trapezoid on [0, 0.5] for zeta^6 / (1 + zeta^8).
        let n = 1 << 20;
        let step = 0.5 / n as f64;
        let f = |x: f64| x.powi(6) / (1.0 + x.powi(8));
        let mut acc = 0.5 * (f(0.0) + f(0.5));
        for i in 1..n {
            acc += f(i as f64 * step);
        }
        let oracle = acc * step;
        let map = octagon().derive_g(7).unwrap();
        let v = map.eval_g(c(0.5, 0.0), &QuadratureConfig::default()).unwrap();
        assert!((v.re - oracle).abs() < 1e-9, "{} vs {oracle}", v.re);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            FunctionSpec::poly_series(2, vec![c(2.0, 0.0)]),
            Err(Error::InvalidSpec(msg)) if msg.contains("normalization")
        ));
        assert!(FunctionSpec::poly_series(2, vec![]).is_err());
        assert!(FunctionSpec::poly_series(0, vec![c(1.0, 0.0)]).is_err());
        // numer must vanish to order p - 1 = 1.
        assert!(FunctionSpec::rational_deriv(
            2,
            Poly::new(vec![c(1.0, 0.0)]),
            Poly::new(vec![c(1.0, 0.0)])
        )
        .is_err());
        // denom(0) = 0.
        assert!(FunctionSpec::rational_deriv(
            1,
            Poly::new(vec![c(1.0, 0.0)]),
            Poly::new(vec![ZERO, c(1.0, 0.0)])
        )
        .is_err());
        // pole at z = 1/2.
        assert!(FunctionSpec::rational_deriv(
            1,
            Poly::new(vec![c(-0.5, 0.0)]),
            Poly::new(vec![c(-0.5, 0.0), c(1.0, 0.0)])
        )
        .is_err());
    }

    #[test]
    fn domain_and_pole_errors() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            z_squared().eval_h(c(1.5, 0.0), &cfg),
            Err(Error::Domain { .. })
        ));
        let pole = Complex64::from_polar(1.0, std::f64::consts::PI / 8.0);
        assert!(matches!(octagon().eval_h_prime(pole), Err(Error::Pole { .. })));
    }

    #[test]
    fn boundary_poles_are_detected_and_clamped() {
        let cfg = QuadratureConfig::default();
        let star = star();
        assert_eq!(star.boundary_poles().len(), 5);
        let s = star.eval_h_sample(c(1.0, 0.0), &cfg).unwrap();
        assert!(s.clamped);
        let inner = star.eval_h_sample(c(0.999, 0.0), &cfg).unwrap();
        assert!(!inner.clamped);
        assert!(!z_squared().has_boundary_poles());
    }
}
