//! Numerical verification toolkit for multivalent harmonic mappings
//! `f(z) = h(z) + conj(g(z))` of the unit disk with `g'(z) = z^(m-1) h'(z)`.
//!
//! * [`function`]: representations of `h`, construction of `g`, evaluation of `f`.
//! * [`criterion`]: the boundary phase function `F(t)` and the root-count test.
//! * [`geometry`]: boundary traces, `phi'`/`phi''`, cusps, concavity, straight sides.
//! * [`valence`]: argument-principle winding numbers and a Newton preimage oracle.
//! * [`render`]: deterministic SVG figures of image domains.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod criterion;
pub mod error;
pub mod function;
pub mod geometry;
pub mod phase;
pub mod poly;
pub mod presets;
pub mod quadrature;
pub mod render;
pub mod valence;

pub use num_complex::Complex64;

pub use criterion::{check_theorem, CriterionConfig, CriterionReport, RootRecord};
pub use error::{Error, Result};
pub use function::{FunctionSpec, HarmonicMapSpec, Representation, Sample};
pub use geometry::{ConcavityReport, CurveTrace, CuspSet};
pub use poly::Poly;
pub use quadrature::QuadratureConfig;
pub use render::RenderOptions;
pub use valence::{PreimageSet, ValenceReport, WindingResult};
