//! High-precision reference evaluations for cross-checking the f64 kernels.
//!
//! Everything here recomputes a quantity in software floating point at a
//! configurable number of decimal digits and rounds the result back to f64.
//! It is a measurement instrument for the binary64 implementation, not an
//! alternative evaluation path: production code never calls into it.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::lp::FinSeq;
use crate::warp::WarpMap;

const RM: RoundingMode = RoundingMode::ToEven;

/// A reference evaluator carrying its working precision and constants cache.
pub struct HighPrecision {
    digits: u32,
    prec: usize,
    cc: Consts,
}

impl HighPrecision {
    /// `digits` decimal digits of working precision (plus guard bits).
    pub fn new(digits: u32) -> Self {
        let prec = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
        Self {
            digits,
            prec,
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn big(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    fn pow(&mut self, base: &BigFloat, exp: f64) -> BigFloat {
        if base.is_zero() {
            return self.big(0.0);
        }
        base.pow(&self.big(exp), self.prec, RM, &mut self.cc)
    }

    /// Reference `t_hi^s - t_lo^s`, rounded once at the end.
    pub fn power_diff(&mut self, t_hi: f64, t_lo: f64, s: f64) -> f64 {
        let hi = self.pow(&self.big(t_hi), s);
        let lo = self.pow(&self.big(t_lo), s);
        to_f64(&hi.sub(&lo, self.prec, RM))
    }

    /// Reference coordinate moduli of the warp image of `x`, one `(index,
    /// modulus)` pair per support index, each computed entirely in extended
    /// precision from the exact binary64 inputs.
    pub fn warp_moduli(&mut self, map: &WarpMap, x: &FinSeq) -> Vec<(u32, f64)> {
        let p = map.p();
        let entries: Vec<(u32, f64, f64)> = x.iter().map(|(n, z)| (n, z.re, z.im)).collect();
        // tail sums of |x_k|^p, from the top index down
        let mut tails: Vec<BigFloat> = Vec::with_capacity(entries.len() + 1);
        tails.push(self.big(0.0));
        for (_, re, im) in entries.iter().rev() {
            let sq = self
                .big(*re)
                .mul(&self.big(*re), self.prec, RM)
                .add(&self.big(*im).mul(&self.big(*im), self.prec, RM), self.prec, RM);
            let modulus = sq.sqrt(self.prec, RM);
            let term = self.pow(&modulus, p);
            let next = tails.last().unwrap().add(&term, self.prec, RM);
            tails.push(next);
        }
        tails.reverse(); // tails[i] is now T at the i-th support position

        entries
            .iter()
            .enumerate()
            .map(|(i, (n, _, _))| {
                let s = map.exponents().value_at(*n);
                let hi = self.pow(&tails[i], s);
                let lo = self.pow(&tails[i + 1], s);
                let radicand = hi.sub(&lo, self.prec, RM);
                let modulus = self.pow(&radicand, 1.0 / p);
                (*n, to_f64(&modulus))
            })
            .collect()
    }

    /// Reference ℓ^p norm of `x`.
    pub fn norm_p(&mut self, x: &FinSeq) -> f64 {
        let p = x.p();
        let mut total = self.big(0.0);
        for (_, z) in x.iter() {
            let sq = self
                .big(z.re)
                .mul(&self.big(z.re), self.prec, RM)
                .add(&self.big(z.im).mul(&self.big(z.im), self.prec, RM), self.prec, RM);
            let term = self.pow(&sq.sqrt(self.prec, RM), p);
            total = total.add(&term, self.prec, RM);
        }
        to_f64(&self.pow(&total, 1.0 / p))
    }
}

/// Rounds a finite BigFloat to f64 through its raw parts.
///
/// Faithful for values in the normal f64 range; reference quantities never
/// reach the subnormal range, where the raw-parts exponent convention of the
/// backing library shifts.
fn to_f64(b: &BigFloat) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    if b.is_inf_pos() {
        return f64::INFINITY;
    }
    if b.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, sign, exponent, _)) = b.as_raw_parts() else {
        return f64::NAN;
    };
    // words are least-significant first and normalized, so the top word
    // carries the leading 64 bits of the mantissa: value = top/2^64 * 2^e
    let top = *words.last().expect("nonzero value has mantissa words");
    let magnitude = scale_by_pow2(top as f64, exponent as i64 - 64);
    match sign {
        Sign::Pos => magnitude,
        Sign::Neg => -magnitude,
    }
}

// x * 2^k with the exponent split in half so neither factor under- or
// overflows before the product does
fn scale_by_pow2(x: f64, k: i64) -> f64 {
    let half = k / 2;
    x * (half as f64).exp2() * ((k - half) as f64).exp2()
}
