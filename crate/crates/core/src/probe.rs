//! Escape-time probe for the obstruction separating `inf |w_n| > 1` from
//! `inf |w_n| = 1`.
//!
//! When the weight moduli are uniformly above 1, every basis direction leaves
//! a fixed ball after a uniformly bounded number of iterations of `D_W`. When
//! the infimum is exactly 1 (without being attained), escape times along a
//! suitable subsequence of basis directions grow without bound — the
//! measurable footprint of the fact that no homeomorphism can carry `D_W`
//! onto the doubling operator. The probe measures the phenomenon; it does not
//! prove the classification.
//!
//! A weight attaining modulus exactly 1 pins its coordinate's orbit to a
//! circle; such orbits show up here as non-escaping sentinels, and the
//! invariant sets themselves are not constructed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{DiagonalOperator, FinSeq, WeightSeq};
use num_complex::Complex64;

/// Result of iterating one orbit against an exit radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EscapeOutcome {
    /// Smallest `k` with `||D^k x|| > radius` (strictly).
    Escaped { steps: u32 },
    /// The orbit stayed inside through `cap` iterations.
    CappedAt { cap: u32 },
}

impl EscapeOutcome {
    pub fn steps(&self) -> Option<u32> {
        match self {
            EscapeOutcome::Escaped { steps } => Some(*steps),
            EscapeOutcome::CappedAt { .. } => None,
        }
    }

    pub fn is_escape(&self) -> bool {
        matches!(self, EscapeOutcome::Escaped { .. })
    }
}

/// Iterates `x, Dx, D^2 x, ...` and returns the first iteration count whose
/// norm strictly exceeds `radius`, or the cap sentinel. Exact ties do not
/// count as escape.
pub fn escape_time(
    op: &DiagonalOperator,
    x: &FinSeq,
    radius: f64,
    cap: u32,
) -> Result<EscapeOutcome> {
    let start = x.norm_p();
    if radius <= start || radius.is_nan() {
        return Err(Error::RadiusNotAboveNorm { radius, norm: start });
    }
    let mut y = x.clone();
    for k in 1..=cap {
        y = op.apply(&y)?;
        if y.norm_p() > radius {
            return Ok(EscapeOutcome::Escaped { steps: k });
        }
    }
    Ok(EscapeOutcome::CappedAt { cap })
}

/// One measured basis direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EscapeRow {
    pub index: u32,
    /// Escape step, or the cap value when `sentinel` is set.
    pub escape_time: u32,
    pub sentinel: bool,
}

/// Escape times of `epsilon * e_n` across the requested indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeProfile {
    pub weights: WeightSeq,
    pub p: f64,
    pub epsilon: f64,
    pub radius: f64,
    pub cap: u32,
    pub rows: Vec<EscapeRow>,
    /// Monotone-growth heuristic over the sampled indices: set when every
    /// escape time in the final quarter strictly exceeds the first quarter's
    /// maximum, and by convention for profiles where no orbit escapes at all.
    /// A heuristic over finitely many indices, not a proof of anything.
    pub divergence_flag: bool,
}

/// Measures escape times of `epsilon * e_n` at `radius = radius_factor *
/// epsilon` for each requested index. Requires `inf |w_n| >= 1`,
/// `epsilon > 0` and `radius_factor > 1`.
pub fn escape_profile(
    weights: &WeightSeq,
    p: f64,
    epsilon: f64,
    indices: &[u32],
    radius_factor: f64,
    cap: u32,
) -> Result<EscapeProfile> {
    if weights.inf_modulus() < 1.0 {
        return Err(Error::ProbeHypothesis { inf_modulus: weights.inf_modulus() });
    }
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidDescriptor(format!("epsilon must be positive, got {epsilon}")));
    }
    if radius_factor <= 1.0 || !radius_factor.is_finite() {
        return Err(Error::InvalidDescriptor(format!(
            "radius factor must exceed 1, got {radius_factor}"
        )));
    }
    if indices.is_empty() {
        return Err(Error::InvalidDescriptor("no probe indices given".into()));
    }
    let mut sorted: Vec<u32> = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted[0] == 0 {
        return Err(Error::ZeroIndex);
    }

    let op = DiagonalOperator::new(weights.clone(), p)?;
    let radius = radius_factor * epsilon;
    let mut rows = Vec::with_capacity(sorted.len());
    for n in sorted {
        let x = FinSeq::basis(p, n, Complex64::new(epsilon, 0.0))?;
        let outcome = escape_time(&op, &x, radius, cap)?;
        rows.push(match outcome {
            EscapeOutcome::Escaped { steps } => {
                EscapeRow { index: n, escape_time: steps, sentinel: false }
            }
            EscapeOutcome::CappedAt { cap } => {
                EscapeRow { index: n, escape_time: cap, sentinel: true }
            }
        });
    }

    let divergence_flag = divergence_heuristic(&rows);
    Ok(EscapeProfile {
        weights: weights.clone(),
        p,
        epsilon,
        radius,
        cap,
        rows,
        divergence_flag,
    })
}

fn divergence_heuristic(rows: &[EscapeRow]) -> bool {
    if rows.iter().all(|r| r.sentinel) {
        // never-escaping orbits count as divergent by convention
        return true;
    }
    let len = rows.len();
    let quarter = len.div_ceil(4);
    let value = |r: &EscapeRow| if r.sentinel { u64::MAX } else { r.escape_time as u64 };
    let first_max = rows[..quarter].iter().map(value).max().unwrap_or(0);
    rows[len - quarter..].iter().all(|r| value(r) > first_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn doubling_operator_escapes_in_two() {
        // ||D x|| = 2 epsilon does not strictly exceed the radius; k = 2 does
        let op = DiagonalOperator::scalar(c(2.0, 0.0), 1.0).unwrap();
        let eps = 0.1;
        let x = FinSeq::basis(1.0, 1, c(eps, 0.0)).unwrap();
        let got = escape_time(&op, &x, 2.0 * eps, 1000).unwrap();
        assert_eq!(got, EscapeOutcome::Escaped { steps: 2 });
    }

    #[test]
    fn harmonic_index_ten_escapes_in_eight() {
        let w = WeightSeq::harmonic(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let op = DiagonalOperator::new(w, 2.0).unwrap();
        let eps = 0.1;
        let x = FinSeq::basis(2.0, 10, c(eps, 0.0)).unwrap();
        let got = escape_time(&op, &x, 2.0 * eps, 1000).unwrap();
        assert_eq!(got, EscapeOutcome::Escaped { steps: 8 });
    }

    #[test]
    fn unit_weight_never_escapes() {
        let w = WeightSeq::list(vec![c(1.0, 0.0)], c(2.0, 0.0)).unwrap();
        let op = DiagonalOperator::new(w, 1.0).unwrap();
        let x = FinSeq::basis(1.0, 1, c(0.1, 0.0)).unwrap();
        let got = escape_time(&op, &x, 0.2, 500).unwrap();
        assert_eq!(got, EscapeOutcome::CappedAt { cap: 500 });
    }

    #[test]
    fn rejects_radius_inside_start_norm() {
        let op = DiagonalOperator::scalar(c(2.0, 0.0), 1.0).unwrap();
        let x = FinSeq::basis(1.0, 1, c(0.5, 0.0)).unwrap();
        assert!(matches!(
            escape_time(&op, &x, 0.5, 10),
            Err(Error::RadiusNotAboveNorm { .. })
        ));
    }

    #[test]
    fn profile_matches_frozen_escape_times() {
        let w = WeightSeq::harmonic(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let profile = escape_profile(&w, 1.0, 0.1, &[1, 10, 100, 1000], 2.0, 100_000).unwrap();
        let times: Vec<u32> = profile.rows.iter().map(|r| r.escape_time).collect();
        assert_eq!(times, vec![2, 8, 70, 694]);
        assert!(profile.rows.iter().all(|r| !r.sentinel));
        assert!(profile.divergence_flag);
    }

    #[test]
    fn constant_profile_is_flat() {
        let w = WeightSeq::constant(c(2.0, 0.0)).unwrap();
        let profile = escape_profile(&w, 1.0, 0.01, &[1, 5, 40, 900], 2.0, 1000).unwrap();
        assert!(profile.rows.iter().all(|r| r.escape_time == 2 && !r.sentinel));
        assert!(!profile.divergence_flag);
    }

    #[test]
    fn all_unit_weights_flag_divergence_by_convention() {
        let w = WeightSeq::constant(c(1.0, 0.0)).unwrap();
        let profile = escape_profile(&w, 1.0, 0.1, &[1, 2, 3, 4], 2.0, 200).unwrap();
        assert!(profile.rows.iter().all(|r| r.sentinel && r.escape_time == 200));
        assert!(profile.divergence_flag);
    }

    #[test]
    fn profile_rejects_bad_hypotheses() {
        let small = WeightSeq::constant(c(0.9, 0.0)).unwrap();
        assert!(matches!(
            escape_profile(&small, 1.0, 0.1, &[1], 2.0, 10),
            Err(Error::ProbeHypothesis { .. })
        ));
        let w = WeightSeq::constant(c(2.0, 0.0)).unwrap();
        assert!(escape_profile(&w, 1.0, 0.0, &[1], 2.0, 10).is_err());
        assert!(escape_profile(&w, 1.0, 0.1, &[1], 1.0, 10).is_err());
        assert!(escape_profile(&w, 1.0, 0.1, &[], 2.0, 10).is_err());
        assert!(matches!(
            escape_profile(&w, 1.0, 0.1, &[0, 1], 2.0, 10),
            Err(Error::ZeroIndex)
        ));
    }

    #[test]
    fn uniformly_expanding_weights_have_bounded_escape() {
        // quantitative bound: k <= ceil(log R / log inf) + 1
        let cases = [
            WeightSeq::constant(c(1.1, 0.0)).unwrap(),
            WeightSeq::harmonic(c(1.1, 0.0), c(1.0, 0.0)).unwrap(),
            WeightSeq::list(vec![c(0.0, 1.1), c(5.0, 0.0)], c(1.25, 0.0)).unwrap(),
        ];
        for w in cases {
            let bound = (2.0f64.ln() / w.inf_modulus().ln()).ceil() as u32 + 1;
            let profile =
                escape_profile(&w, 1.5, 0.2, &[1, 2, 3, 7, 50, 313, 4096], 2.0, 10_000).unwrap();
            for row in &profile.rows {
                assert!(!row.sentinel);
                assert!(row.escape_time <= bound, "index {}: {} > {bound}", row.index, row.escape_time);
            }
        }
    }

    #[test]
    fn harmonic_escape_grows_like_the_closed_form() {
        let w = WeightSeq::harmonic(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let op = DiagonalOperator::new(w.clone(), 1.0).unwrap();
        for exp in 1..=4u32 {
            let n = 10u32.pow(exp);
            let x = FinSeq::basis(1.0, n, c(0.5, 0.0)).unwrap();
            let got = escape_time(&op, &x, 1.0, 100_000).unwrap().steps().unwrap();
            // independent closed form: least k with (1 + 1/n)^k > 2
            let wn = 1.0 + 1.0 / n as f64;
            let mut k = (2.0f64.ln() / wn.ln()).floor() as u32 + 1;
            while wn.powi(k as i32 - 1) > 2.0 {
                k -= 1;
            }
            while wn.powi(k as i32) <= 2.0 {
                k += 1;
            }
            assert_eq!(got, k, "index {n}");
        }
    }

    #[test]
    fn escape_invariant_under_unimodular_scaling() {
        let w = WeightSeq::harmonic(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let op = DiagonalOperator::new(w, 2.0).unwrap();
        let x = FinSeq::from_entries(2.0, [(3, c(0.1, 0.0)), (17, c(0.0, 0.05))]).unwrap();
        let base = escape_time(&op, &x, 0.3, 10_000).unwrap();
        for phi in [0.3, 1.7, -2.2] {
            let y = x.scaled_complex(Complex64::from_polar(1.0, phi));
            let got = escape_time(&op, &y, 0.3, 10_000).unwrap();
            assert_eq!(got, base);
        }
    }
}
