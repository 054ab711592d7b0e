//! JSON spec files and named presets.

use hvl_core::{presets, Complex64, FunctionSpec, HarmonicMapSpec, Poly, Representation};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::{CliError, EXIT_INPUT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Example1,
    Example2,
    Star,
    Octagon,
}

/// On-disk description of a map `f = h + conj(g)`.
///
/// Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecFile {
    /// `h(z) = sum_j coeffs[j] z^(p+j)`, `coeffs[0] = [1, 0]`.
    Poly {
        p: u32,
        m: u32,
        coeffs: Vec<Complex64>,
    },
    /// `h'(z) = numer(z) / denom(z)`, ascending coefficients from `z^0`.
    RationalHprime {
        p: u32,
        m: u32,
        numer: Vec<Complex64>,
        denom: Vec<Complex64>,
    },
    Preset {
        preset: PresetName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<Complex64>,
    },
}

fn input_error(msg: impl Into<String>) -> CliError {
    CliError::new(EXIT_INPUT, msg)
}

impl SpecFile {
    pub fn preset(name: PresetName) -> Self {
        SpecFile::Preset {
            preset: name,
            p: None,
            m: None,
            c: None,
        }
    }

    /// Parses `preset:<name>` or reads a JSON file.
    pub fn load(input: &str) -> Result<Self, CliError> {
        if let Some(name) = input.strip_prefix("preset:") {
            let name: PresetName = serde_json::from_value(serde_json::Value::String(name.into()))
                .map_err(|_| {
                    input_error(format!(
                        "unknown preset `{name}` (expected example1, example2, star or octagon)"
                    ))
                })?;
            return Ok(Self::preset(name));
        }
        let text = std::fs::read_to_string(Path::new(input))
            .map_err(|e| input_error(format!("cannot read {input}: {e}")))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| input_error(format!("malformed spec: {e}")))
    }

    /// Validates and builds the map.
    pub fn build(&self) -> Result<HarmonicMapSpec, CliError> {
        let map = match self {
            SpecFile::Poly { p, m, coeffs } => {
                FunctionSpec::poly_series(*p, coeffs.clone()).and_then(|h| h.derive_g(*m))
            }
            SpecFile::RationalHprime { p, m, numer, denom } => {
                FunctionSpec::rational_deriv(*p, Poly::new(numer.clone()), Poly::new(denom.clone()))
                    .and_then(|h| h.derive_g(*m))
            }
            SpecFile::Preset { preset, p, m, c } => build_preset(*preset, *p, *m, *c)?,
        };
        map.map_err(|e| input_error(e.to_string()))
    }

    /// The explicit (non-preset) spec describing `map`.
    pub fn explicit(map: &HarmonicMapSpec) -> Self {
        let (p, m) = (map.p(), map.m());
        match map.h().representation() {
            Representation::PolySeries { coeffs } => SpecFile::Poly {
                p,
                m,
                coeffs: coeffs.clone(),
            },
            Representation::RationalDeriv { numer, denom } => SpecFile::RationalHprime {
                p,
                m,
                numer: numer.coeffs().to_vec(),
                denom: denom.coeffs().to_vec(),
            },
        }
    }
}

fn reject(name: &str, field: &str) -> CliError {
    input_error(format!("preset {name} does not take parameter `{field}`"))
}

fn build_preset(
    name: PresetName,
    p: Option<u32>,
    m: Option<u32>,
    c: Option<Complex64>,
) -> Result<hvl_core::Result<HarmonicMapSpec>, CliError> {
    Ok(match name {
        PresetName::Example1 => {
            if c.is_some() {
                return Err(reject("example1", "c"));
            }
            presets::monomial(p.unwrap_or(2), m.unwrap_or(4))
        }
        PresetName::Example2 => presets::linear_perturbation(
            p.unwrap_or(3),
            m.unwrap_or(2),
            c.unwrap_or(Complex64::new(0.0, 1.0)),
        ),
        PresetName::Star => {
            if c.is_some() {
                return Err(reject("star", "c"));
            }
            presets::star(p.unwrap_or(2), m.unwrap_or(2))
        }
        PresetName::Octagon => {
            if c.is_some() {
                return Err(reject("octagon", "c"));
            }
            if p.is_some_and(|p| p != 1) {
                return Err(input_error("preset octagon is univalent: `p` must be 1"));
            }
            presets::polygon(m.unwrap_or(7))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        for (name, p, m) in [
            (PresetName::Example1, 2, 4),
            (PresetName::Example2, 3, 2),
            (PresetName::Star, 2, 2),
            (PresetName::Octagon, 1, 7),
        ] {
            let map = SpecFile::preset(name).build().unwrap();
            assert_eq!((map.p(), map.m()), (p, m));
        }
    }

    #[test]
    fn json_layout() {
        let spec = SpecFile::parse(r#"{"kind":"poly","p":2,"m":4,"coeffs":[[1,0],[0,0.5]]}"#).unwrap();
        assert_eq!(
            spec,
            SpecFile::Poly {
                p: 2,
                m: 4,
                coeffs: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)],
            }
        );
        let spec = SpecFile::parse(r#"{"kind":"preset","preset":"example2","c":[0.5,0]}"#).unwrap();
        let map = spec.build().unwrap();
        assert_eq!(map.h().series_poly().unwrap().coeffs()[4], Complex64::new(0.125, 0.0));
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = SpecFile::parse(r#"{"kind":"poly","p":2,"m":4,"coeffs":[[1,0]],"extra":1}"#).unwrap_err();
        assert!(err.message.contains("extra"), "{}", err.message);
        let err = SpecFile::parse(r#"{"kind":"poly","p":2,"coeffs":[[1,0]]}"#).unwrap_err();
        assert!(err.message.contains("`m`"), "{}", err.message);
        let err = SpecFile::parse(r#"{"kind":"conic"}"#).unwrap_err();
        assert!(err.message.contains("conic"), "{}", err.message);
    }

    #[test]
    fn validation_errors() {
        let err = SpecFile::parse(r#"{"kind":"poly","p":2,"m":4,"coeffs":[[2,0]]}"#)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.message.contains("normalization violated"));
        assert_eq!(err.code, EXIT_INPUT);
        let far = SpecFile::Preset {
            preset: PresetName::Example2,
            p: None,
            m: None,
            c: Some(Complex64::new(2.4, 0.0)),
        };
        assert!(far.build().is_err());
        assert!(SpecFile::load("preset:hexagon").is_err());
        let bad_c = SpecFile::Preset {
            preset: PresetName::Star,
            p: None,
            m: None,
            c: Some(Complex64::new(0.1, 0.0)),
        };
        assert!(bad_c.build().unwrap_err().message.contains("`c`"));
    }
}
