//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space exponent must satisfy 1 <= p < infinity, got p = {p}")]
    InvalidSpaceExponent { p: f64 },

    #[error("coordinate indices start at 1")]
    ZeroIndex,

    #[error("exponent mismatch: operating in l^{left} on a vector from l^{right}")]
    ExponentMismatch { left: f64, right: f64 },

    #[error("power difference needs t_hi >= t_lo >= 0, got t_hi = {t_hi}, t_lo = {t_lo}")]
    PowerDiffOrder { t_hi: f64, t_lo: f64 },

    #[error("power difference exponent must satisfy s >= 1, got s = {s}")]
    PowerDiffExponent { s: f64 },

    #[error("exponent sequence must satisfy s_n >= 1 for every n (violated by {min})")]
    ExponentBelowOne { min: f64 },

    #[error("exponent extraction requires a base rho > 1, got rho = {rho}")]
    LogBaseNotAboveOne { rho: f64 },

    #[error("weight moduli fall below the log base: inf |w_n| = {inf_modulus} < {base}")]
    WeightBelowBase { inf_modulus: f64, base: f64 },

    #[error("weight moduli exceed the log base: sup |w_n| = {sup_modulus} > {base}")]
    WeightAboveBase { sup_modulus: f64, base: f64 },

    #[error("phase warp is undefined for a nonzero scalar of modulus 1, got w = {w}")]
    UnimodularPhase { w: Complex64 },

    #[error("weight w_{index} is nonzero with modulus 1; the coordinatewise phase warp is undefined there")]
    UnimodularWeight { index: u32 },

    #[error("conjugacy to the doubling operator requires inf_n |w_n| > 1, got inf = {inf_modulus}")]
    DoublingHypothesis { inf_modulus: f64 },

    #[error("conjugacy to the halving operator requires 0 < inf_n |w_n| and sup_n |w_n| < 1, got inf = {inf_modulus}, sup = {sup_modulus}")]
    HalvingHypothesis { inf_modulus: f64, sup_modulus: f64 },

    #[error("composition requires the left map's target operator to equal the right map's source operator")]
    CertificateMismatch,

    #[error("escape radius must exceed the start norm, got radius = {radius} <= {norm}")]
    RadiusNotAboveNorm { radius: f64, norm: f64 },

    #[error("escape profiling requires inf_n |w_n| >= 1, got inf = {inf_modulus}")]
    ProbeHypothesis { inf_modulus: f64 },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
