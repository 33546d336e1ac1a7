//! Input parsing: compact descriptor syntax, inline JSON, and @file
//! indirection, plus the error-to-exit-code mapping.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use lpconj_core::error::Error as CoreError;
use lpconj_core::lp::{FinSeq, WeightSeq};
use lpconj_core::warp::ExponentSeq;

/// CLI failure classes, each with its own exit code and a machine-readable
/// kind for the JSON error body.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: a measured quantity exceeded its gate.
    Verification(String),
    /// Exit 2: malformed flags, descriptors or input vectors.
    Parse(String),
    /// Exit 3: a construction hypothesis rejected the inputs.
    Hypothesis(String),
    /// Exit 4: filesystem trouble.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Verification(_) => "verification_failed",
            CliError::Parse(_) => "invalid_input",
            CliError::Hypothesis(_) => "hypothesis_violation",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Verification(m)
            | CliError::Parse(m)
            | CliError::Hypothesis(m)
            | CliError::Io(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidSpaceExponent { .. }
            | CoreError::ZeroIndex
            | CoreError::InvalidDescriptor(_) => CliError::Parse(e.to_string()),
            _ => CliError::Hypothesis(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Resolves an argument that may be inline JSON, `@path`, or a bare path to
/// an existing file, returning the JSON text.
fn resolve_json_source(arg: &str) -> Result<Option<String>, CliError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return Ok(Some(trimmed.to_string()));
    }
    if let Some(path) = trimmed.strip_prefix('@') {
        return Ok(Some(std::fs::read_to_string(path)?));
    }
    if Path::new(trimmed).is_file() {
        return Ok(Some(std::fs::read_to_string(trimmed)?));
    }
    Ok(None)
}

/// Parses a complex literal: `2`, `-0.5`, `2i`, `1+2i`, `3.5e-2-1e-3i`, `i`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CliError::Parse("empty complex literal".into()));
    }
    let bad = || CliError::Parse(format!("invalid complex literal {text:?}"));
    let parse_imag_coeff = |t: &str| -> Result<f64, CliError> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    // locate a '+'/'-' separating the real and imaginary summands (never at
    // position 0 and never right after an exponent marker)
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..s.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    if let Some(stripped) = s.strip_suffix('i') {
        match split {
            Some(i) if i < stripped.len() + 1 => {
                let re: f64 = s[..i].parse().map_err(|_| bad())?;
                let im = parse_imag_coeff(&s[i..s.len() - 1])?;
                Ok(Complex64::new(re, im))
            }
            _ => Ok(Complex64::new(0.0, parse_imag_coeff(stripped)?)),
        }
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Splits `values/tail` (also accepting `;` as the separator).
fn split_tail(rest: &str) -> Option<(&str, &str)> {
    rest.split_once('/').or_else(|| rest.split_once(';'))
}

/// Weight descriptor: JSON (inline or file) or compact syntax
/// `constant:C`, `list:V1,V2,.../TAIL`, `harmonic:C,A` with complex scalars.
pub fn parse_weights(arg: &str) -> Result<WeightSeq, CliError> {
    if let Some(json) = resolve_json_source(arg)? {
        return serde_json::from_str(&json)
            .map_err(|e| CliError::Parse(format!("weight descriptor: {e}")));
    }
    let (kind, rest) = arg
        .split_once(':')
        .ok_or_else(|| CliError::Parse(format!("weight descriptor {arg:?} needs kind:args")))?;
    match kind.trim() {
        "constant" => Ok(WeightSeq::constant(parse_complex(rest)?)?),
        "list" => {
            let (head, tail) = split_tail(rest).ok_or_else(|| {
                CliError::Parse("list descriptor needs `list:v1,v2,.../tail`".into())
            })?;
            let values = head
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(parse_complex)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(WeightSeq::list(values, parse_complex(tail)?)?)
        }
        "harmonic" => {
            let (c, a) = rest
                .split_once(',')
                .ok_or_else(|| CliError::Parse("harmonic descriptor needs `harmonic:c,a`".into()))?;
            Ok(WeightSeq::harmonic(parse_complex(c)?, parse_complex(a)?)?)
        }
        other => Err(CliError::Parse(format!("unknown weight kind {other:?}"))),
    }
}

/// Exponent descriptor: JSON or compact syntax with real scalars,
/// `constant:S`, `list:S1,S2,.../TAIL`, `harmonic:C,A`.
pub fn parse_exponents(arg: &str) -> Result<ExponentSeq, CliError> {
    if let Some(json) = resolve_json_source(arg)? {
        return serde_json::from_str(&json)
            .map_err(|e| CliError::Parse(format!("exponent descriptor: {e}")));
    }
    let (kind, rest) = arg
        .split_once(':')
        .ok_or_else(|| CliError::Parse(format!("exponent descriptor {arg:?} needs kind:args")))?;
    let real = |t: &str| -> Result<f64, CliError> {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Parse(format!("invalid real literal {t:?}")))
    };
    match kind.trim() {
        "constant" => Ok(ExponentSeq::constant(real(rest)?)?),
        "list" => {
            let (head, tail) = split_tail(rest).ok_or_else(|| {
                CliError::Parse("list descriptor needs `list:s1,s2,.../tail`".into())
            })?;
            let values = head
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(real)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ExponentSeq::list(values, real(tail)?)?)
        }
        "harmonic" => {
            let (c, a) = rest
                .split_once(',')
                .ok_or_else(|| CliError::Parse("harmonic descriptor needs `harmonic:c,a`".into()))?;
            Ok(ExponentSeq::harmonic(real(c)?, real(a)?)?)
        }
        other => Err(CliError::Parse(format!("unknown exponent kind {other:?}"))),
    }
}

/// Input vector: inline JSON or @file/path, in the FinSeq schema.
pub fn parse_vector(arg: &str) -> Result<FinSeq, CliError> {
    let json = resolve_json_source(arg)?
        .ok_or_else(|| CliError::Parse(format!("vector input {arg:?} is neither JSON nor a readable file")))?;
    serde_json::from_str(&json).map_err(|e| CliError::Parse(format!("vector input: {e}")))
}

/// Comma-separated positive indices.
pub fn parse_indices(arg: &str) -> Result<Vec<u32>, CliError> {
    let out = arg
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Parse(format!("invalid index {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(CliError::Parse("no indices given".into()));
    }
    Ok(out)
}
