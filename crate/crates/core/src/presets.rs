//! Ready-made maps: `h = z^p`, the one-parameter family `h = z^p + c z^(p+1) / (p+1)`,
//! and the rational families `h' = p z^(p-1) / (1 + z^(2p+m-1))` whose images are stars
//! and regular polygons.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::{FunctionSpec, HarmonicMapSpec};
use crate::poly::Poly;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `h = z^p`, defaults to `p = 2`, `m = 4`.
pub fn monomial(p: u32, m: u32) -> Result<HarmonicMapSpec> {
    FunctionSpec::poly_series(p, vec![ONE])?.derive_g(m)
}

/// Largest `|c|` admitted for [`linear_perturbation`]: `p - 2p / (2p + m + 1)`.
pub fn perturbation_bound(p: u32, m: u32) -> f64 {
    let p = p as f64;
    p - 2.0 * p / (2.0 * p + m as f64 + 1.0)
}

/// `h = z^p + c z^(p+1) / (p+1)` with `|c| <= p - 2p / (2p + m + 1)`.
pub fn linear_perturbation(p: u32, m: u32, c: Complex64) -> Result<HarmonicMapSpec> {
    let bound = perturbation_bound(p, m);
    if !(c.norm() <= bound) {
        return Err(Error::InvalidParameter(format!(
            "|c| = {} exceeds the admissible bound {bound}",
            c.norm()
        )));
    }
    FunctionSpec::poly_series(p, vec![ONE, c / (p as f64 + 1.0)])?.derive_g(m)
}

/// `h'(z) = p z^(p-1) / (1 + z^(2p+m-1))`.
pub fn star(p: u32, m: u32) -> Result<HarmonicMapSpec> {
    if p == 0 || m < 2 {
        return Err(Error::InvalidParameter(format!(
            "star family needs p >= 1 and m >= 2 (got p = {p}, m = {m})"
        )));
    }
    let n = (2 * p + m - 1) as usize;
    let mut numer = vec![ZERO; p as usize];
    numer[p as usize - 1] = Complex64::new(p as f64, 0.0);
    let mut denom = vec![ZERO; n + 1];
    denom[0] = ONE;
    denom[n] = ONE;
    FunctionSpec::rational_deriv(p, Poly::new(numer), Poly::new(denom))?.derive_g(m)
}

/// The univalent `(m+1)`-gon: the `p = 1` member of the star family.
pub fn polygon(m: u32) -> Result<HarmonicMapSpec> {
    star(1, m)
}

pub fn example1() -> HarmonicMapSpec {
    monomial(2, 4).expect("valid preset")
}

pub fn example2() -> HarmonicMapSpec {
    linear_perturbation(3, 2, Complex64::new(0.0, 1.0)).expect("valid preset")
}

pub fn pentagram() -> HarmonicMapSpec {
    star(2, 2).expect("valid preset")
}

pub fn octagon() -> HarmonicMapSpec {
    polygon(7).expect("valid preset")
}
