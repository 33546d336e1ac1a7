//! The tail-sum warp homeomorphism of ℓ^p.
//!
//! For a bounded exponent sequence `{s_n}` with `s_n >= 1`, the warp sends a
//! vector `x` to the vector whose n-th coordinate keeps the phase of `x_n`
//! and has modulus
//!
//! ```text
//! ( T_n^{s_n} - T_{n+1}^{s_n} )^{1/p},    T_n = sum_{k >= n} |x_k|^p.
//! ```
//!
//! The map is a homeomorphism of ℓ^p onto itself; on finitely supported
//! vectors it is inverted exactly by walking the support downward with
//! `T_n = (|y_n|^p + T_{n+1}^{s_n})^{1/s_n}`.
//!
//! When two tail sums are close, forming `a^s - b^s` by subtracting computed
//! powers cancels catastrophically. [`stable_power_diff`] instead evaluates
//! `a^s * (-expm1(s * log(b/a)))`, with the log taken via `ln_1p` of the
//! exactly representable difference quotient whenever `b/a > 1/2`, so the
//! kernel stays accurate to a few ulp across the whole range.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{is_zero, modulus_pow, validate_space_exponent, FinSeq, WeightDescriptor, WeightSeq};

/// Declarative description of a bounded real exponent sequence `{s_n}`,
/// `s_n >= 1`.
///
/// The first three shapes mirror [`WeightDescriptor`] with real scalars. The
/// fourth is derived: `s_n = log_base |w_n|`, which is how conjugacy
/// construction turns a weight sequence into warp exponents (the modulus of a
/// harmonic weight sequence has no closed form in the other three shapes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentDescriptor {
    Constant { value: f64 },
    List { values: Vec<f64>, tail: f64 },
    Harmonic { c: f64, a: f64 },
    LogModulus { weights: WeightDescriptor, base: f64 },
}

impl ExponentDescriptor {
    pub fn value_at(&self, n: u32) -> f64 {
        debug_assert!(n >= 1);
        match self {
            ExponentDescriptor::Constant { value } => *value,
            ExponentDescriptor::List { values, tail } => {
                values.get(n as usize - 1).copied().unwrap_or(*tail)
            }
            ExponentDescriptor::Harmonic { c, a } => c + a / (n as f64),
            ExponentDescriptor::LogModulus { weights, base } => {
                weights.value_at(n).norm().log(*base)
            }
        }
    }
}

/// A validated exponent sequence together with its exact bounds.
///
/// `upper_bound()` is the recorded `r >= sup s_n` that the norm estimates for
/// the warp are phrased in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExponentDescriptor", into = "ExponentDescriptor")]
pub struct ExponentSeq {
    descriptor: ExponentDescriptor,
    inf: f64,
    sup: f64,
}

impl ExponentSeq {
    pub fn new(descriptor: ExponentDescriptor) -> Result<Self> {
        let finite = |v: f64| v.is_finite();
        let (inf, sup) = match &descriptor {
            ExponentDescriptor::Constant { value } => {
                if !finite(*value) {
                    return Err(Error::InvalidDescriptor("non-finite exponent".into()));
                }
                (*value, *value)
            }
            ExponentDescriptor::List { values, tail } => {
                let mut lo = *tail;
                let mut hi = *tail;
                for v in values {
                    if !finite(*v) {
                        return Err(Error::InvalidDescriptor("non-finite exponent".into()));
                    }
                    lo = lo.min(*v);
                    hi = hi.max(*v);
                }
                if !finite(*tail) {
                    return Err(Error::InvalidDescriptor("non-finite exponent".into()));
                }
                (lo, hi)
            }
            ExponentDescriptor::Harmonic { c, a } => {
                if !finite(*c) || !finite(*a) {
                    return Err(Error::InvalidDescriptor("non-finite exponent".into()));
                }
                // s_n = c + a/n runs monotonically from c + a at n = 1 toward
                // the limit c
                if *a >= 0.0 {
                    (*c, c + a)
                } else {
                    (c + a, *c)
                }
            }
            ExponentDescriptor::LogModulus { weights, base } => {
                if !finite(*base) || *base <= 0.0 || *base == 1.0 {
                    return Err(Error::InvalidDescriptor(format!(
                        "log base must be positive and distinct from 1, got {base}"
                    )));
                }
                let (wi, ws) = weights.modulus_extrema();
                if *base > 1.0 {
                    if wi < *base {
                        return Err(Error::WeightBelowBase { inf_modulus: wi, base: *base });
                    }
                } else {
                    if ws > *base {
                        return Err(Error::WeightAboveBase { sup_modulus: ws, base: *base });
                    }
                    if wi <= 0.0 {
                        return Err(Error::WeightBelowBase { inf_modulus: wi, base: *base });
                    }
                }
                let a = wi.log(*base);
                let b = ws.log(*base);
                (a.min(b), a.max(b))
            }
        };
        if inf < 1.0 || inf.is_nan() {
            return Err(Error::ExponentBelowOne { min: inf });
        }
        Ok(Self { descriptor, inf, sup })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(ExponentDescriptor::Constant { value })
    }

    pub fn list(values: Vec<f64>, tail: f64) -> Result<Self> {
        Self::new(ExponentDescriptor::List { values, tail })
    }

    /// `s_n = c + a/n`.
    pub fn harmonic(c: f64, a: f64) -> Result<Self> {
        Self::new(ExponentDescriptor::Harmonic { c, a })
    }

    /// `s_n = log_rho |w_n|` for a base `rho > 1` with `|w_n| >= rho`.
    ///
    /// With `rho = inf_n |w_n|` this produces exactly the exponents that
    /// conjugate the dilation `rho * I` to the modulus diagonal of `weights`.
    pub fn from_weights(weights: &WeightSeq, rho: f64) -> Result<Self> {
        if rho <= 1.0 || rho.is_nan() {
            return Err(Error::LogBaseNotAboveOne { rho });
        }
        Self::log_modulus(weights, rho)
    }

    /// `s_n = log_base |w_n|` for either orientation of the base: `base > 1`
    /// with moduli at or above it, or `base < 1` with moduli at or below it.
    pub fn log_modulus(weights: &WeightSeq, base: f64) -> Result<Self> {
        Self::new(ExponentDescriptor::LogModulus {
            weights: weights.descriptor().clone(),
            base,
        })
    }

    pub fn value_at(&self, n: u32) -> f64 {
        self.descriptor.value_at(n)
    }

    /// Exact infimum of the sequence.
    pub fn lower_bound(&self) -> f64 {
        self.inf
    }

    /// Exact supremum of the sequence; the bound `r` in the norm estimates.
    pub fn upper_bound(&self) -> f64 {
        self.sup
    }

    /// True exactly when every `s_n = 1`, in which case the warp is the
    /// identity map.
    pub fn is_identity(&self) -> bool {
        self.inf == 1.0 && self.sup == 1.0
    }

    pub fn descriptor(&self) -> &ExponentDescriptor {
        &self.descriptor
    }
}

impl TryFrom<ExponentDescriptor> for ExponentSeq {
    type Error = Error;

    fn try_from(d: ExponentDescriptor) -> Result<Self> {
        ExponentSeq::new(d)
    }
}

impl From<ExponentSeq> for ExponentDescriptor {
    fn from(e: ExponentSeq) -> Self {
        e.descriptor
    }
}

/// `t_hi^s - t_lo^s` without catastrophic cancellation, for any `s > 0`.
///
/// Preconditions (`t_hi >= t_lo >= 0`, `s > 0`) are the caller's business;
/// the public [`stable_power_diff`] enforces the `s >= 1` contract.
pub(crate) fn power_diff_raw(t_hi: f64, t_lo: f64, s: f64) -> f64 {
    debug_assert!(t_hi >= t_lo && t_lo >= 0.0 && s > 0.0);
    if t_hi == 0.0 || t_hi == t_lo {
        return 0.0;
    }
    if s == 1.0 {
        return t_hi - t_lo;
    }
    if t_lo == 0.0 {
        return t_hi.powf(s);
    }
    let log_ratio = if t_lo > 0.5 * t_hi {
        // t_lo - t_hi is exact here (Sterbenz), so the log of the ratio keeps
        // full relative precision even when the ratio is within an ulp of 1
        ((t_lo - t_hi) / t_hi).ln_1p()
    } else {
        (t_lo / t_hi).ln()
    };
    t_hi.powf(s) * (-f64::exp_m1(s * log_ratio))
}

/// Numerically stable `t_hi^s - t_lo^s` for `t_hi >= t_lo >= 0` and `s >= 1`.
///
/// Returns 0 when `t_hi = 0` or the arguments coincide; the result is never
/// negative.
pub fn stable_power_diff(t_hi: f64, t_lo: f64, s: f64) -> Result<f64> {
    if s < 1.0 || s.is_nan() {
        return Err(Error::PowerDiffExponent { s });
    }
    let ordered = t_lo >= 0.0 && t_hi >= t_lo;
    if !ordered {
        return Err(Error::PowerDiffOrder { t_hi, t_lo });
    }
    Ok(power_diff_raw(t_hi, t_lo, s))
}

/// Relative condition number of the radicand `T_n^s - T_{n+1}^s` at one
/// coordinate: how much input relative error is amplified into the output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadicandCondition {
    pub index: u32,
    pub condition: f64,
}

/// The warp homeomorphism for a fixed exponent sequence and space exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpMap {
    exponents: ExponentSeq,
    p: f64,
}

impl WarpMap {
    pub fn new(exponents: ExponentSeq, p: f64) -> Result<Self> {
        validate_space_exponent(p)?;
        Ok(Self { exponents, p })
    }

    pub fn exponents(&self) -> &ExponentSeq {
        &self.exponents
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn check_p(&self, x: &FinSeq) -> Result<()> {
        if self.p != x.p() {
            return Err(Error::ExponentMismatch { left: self.p, right: x.p() });
        }
        Ok(())
    }

    /// Forward evaluation. The output support equals the input support, and
    /// each coordinate keeps its phase.
    pub fn forward(&self, x: &FinSeq) -> Result<FinSeq> {
        self.forward_impl(x, None)
    }

    /// Forward evaluation that also reports the per-coordinate condition
    /// number of the radicand.
    pub fn forward_with_conditions(&self, x: &FinSeq) -> Result<(FinSeq, Vec<RadicandCondition>)> {
        let mut conds = Vec::with_capacity(x.support_len());
        let y = self.forward_impl(x, Some(&mut conds))?;
        Ok((y, conds))
    }

    fn forward_impl(&self, x: &FinSeq, mut conds: Option<&mut Vec<RadicandCondition>>) -> Result<FinSeq> {
        self.check_p(x)?;
        if self.exponents.is_identity() {
            if let Some(conds) = conds {
                conds.extend(x.support().map(|n| RadicandCondition { index: n, condition: 1.0 }));
            }
            return Ok(x.clone());
        }
        let tails = x.tail_sums();
        let inv_p = 1.0 / self.p;
        let mut entries = std::collections::BTreeMap::new();
        for (n, z) in x.iter() {
            let s = self.exponents.value_at(n);
            let t_hi = tails.at(n);
            let t_lo = tails.after(n);
            let radicand = power_diff_raw(t_hi, t_lo, s);
            if let Some(conds) = conds.as_deref_mut() {
                let hi_s = t_hi.powf(s);
                let lo_s = t_lo.powf(s);
                let condition = if radicand > 0.0 {
                    s * (hi_s + lo_s) / radicand
                } else {
                    f64::INFINITY
                };
                conds.push(RadicandCondition { index: n, condition });
            }
            let modulus = if self.p == 1.0 { radicand } else { radicand.powf(inv_p) };
            let y = z * (modulus / z.norm());
            if !is_zero(y) {
                entries.insert(n, y);
            }
        }
        Ok(FinSeq::from_raw(self.p, entries))
    }

    /// Exact inverse on finitely supported vectors: walk the support from the
    /// top index down, rebuilding each tail sum from
    /// `T_n = (|y_n|^p + T_{n+1}^{s_n})^{1/s_n}` and each modulus from the
    /// stable difference of the two tails. Phases carry over unchanged.
    pub fn inverse(&self, y: &FinSeq) -> Result<FinSeq> {
        self.check_p(y)?;
        if self.exponents.is_identity() {
            return Ok(y.clone());
        }
        let inv_p = 1.0 / self.p;
        let mut entries = std::collections::BTreeMap::new();
        let mut tail = 0.0_f64;
        for (n, z) in y.iter().rev() {
            let s = self.exponents.value_at(n);
            let sigma = 1.0 / s;
            let a = modulus_pow(z, self.p);
            let v = tail.powf(s);
            let u = a + v;
            let modulus_p = power_diff_raw(u, v, sigma);
            let modulus = if self.p == 1.0 { modulus_p } else { modulus_p.powf(inv_p) };
            let xn = z * (modulus / z.norm());
            if !is_zero(xn) {
                entries.insert(n, xn);
            }
            tail = u.powf(sigma);
        }
        Ok(FinSeq::from_raw(self.p, entries))
    }
}
