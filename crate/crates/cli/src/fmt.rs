//! Deterministic number formatting for reports.
//!
//! Floats are serialized as decimal strings with 17 significant digits, so
//! every `f64` round-trips bit-exactly and identical runs produce identical
//! bytes; rationals are `"numerator/denominator"` strings.

use anyhow::{anyhow, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use treeharmonic::BigRational;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| anyhow!("bad float {s:?}: {e}"))
}

pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A complex number as a pair of full-precision decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexField {
    pub re: String,
    pub im: String,
}

impl ComplexField {
    pub fn from_complex(z: Complex64) -> Self {
        ComplexField {
            re: fmt_f64(z.re),
            im: fmt_f64(z.im),
        }
    }

    pub fn to_complex(&self) -> Result<Complex64> {
        Ok(Complex64::new(parse_f64(&self.re)?, parse_f64(&self.im)?))
    }
}

/// Parses `"0.25"`, `"0.25+0.7i"`, `"-0.7i"`, `"i"` and scientific notation
/// like `"1e-3-2.5e-4i"`.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if !s.ends_with('i') && !s.ends_with('I') {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("bad complex literal {input:?}: {e}"));
    }
    let body = &s[..s.len() - 1];
    // split at the last sign that is not an exponent sign and not leading
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && bytes[i - 1] != b'e'
            && bytes[i - 1] != b'E'
        {
            split = Some(i);
            break;
        }
    }
    let parse_im = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => other
                .parse::<f64>()
                .map_err(|e| format!("bad complex literal {input:?}: {e}")),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i]
                .parse::<f64>()
                .map_err(|e| format!("bad complex literal {input:?}: {e}"))?;
            let im = parse_im(&body[i..])?;
            Ok(Complex64::new(re, im))
        }
        None => Ok(Complex64::new(0.0, parse_im(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.25").unwrap(), Complex64::new(0.25, 0.0));
        assert_eq!(
            parse_complex("0.25+0.7i").unwrap(),
            Complex64::new(0.25, 0.7)
        );
        assert_eq!(
            parse_complex("0.25-0.7i").unwrap(),
            Complex64::new(0.25, -0.7)
        );
        assert_eq!(parse_complex("0.7i").unwrap(), Complex64::new(0.0, 0.7));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(
            parse_complex("1e-3-2.5e-4i").unwrap(),
            Complex64::new(1e-3, -2.5e-4)
        );
        assert_eq!(parse_complex(" 0.1 + 0.2i ").unwrap(), Complex64::new(0.1, 0.2));
        assert!(parse_complex("apple").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn float_round_trip() {
        for x in [0.25, -1.0 / 3.0, 1e-300, std::f64::consts::PI] {
            let s = fmt_f64(x);
            assert_eq!(parse_f64(&s).unwrap(), x);
        }
    }
}
