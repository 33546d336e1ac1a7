//! Deterministic generation of random finitely supported vectors.
//!
//! Every randomized measurement in the crate draws its per-sample generator
//! from `(seed, sample index)` via a fixed ChaCha stream split, so reports are
//! reproducible and samples are independent of evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::FinSeq;

/// Shape of the sampled vectors: support size, index spread, and a
/// log-uniform target norm range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub p: f64,
    pub min_support: u32,
    pub max_support: u32,
    pub max_index: u32,
    pub log10_norm_min: f64,
    pub log10_norm_max: f64,
}

impl SampleSpec {
    /// The distribution used by conjugacy defect measurements: supports of
    /// 1..=50 over indices 1..=200, norms log-uniform in the given range.
    pub fn defect(p: f64, norm_min: f64, norm_max: f64) -> Self {
        Self {
            p,
            min_support: 1,
            max_support: 50,
            max_index: 200,
            log10_norm_min: norm_min.log10(),
            log10_norm_max: norm_max.log10(),
        }
    }
}

/// Generator for sample `index` of the run keyed by `seed`.
pub fn derived_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws one vector: distinct random indices, random phases, per-coordinate
/// moduli spread over two decades, then a rescale to the target norm.
pub fn sample_finseq(rng: &mut ChaCha8Rng, spec: &SampleSpec) -> FinSeq {
    let k = rng.random_range(spec.min_support..=spec.max_support);
    let mut entries = std::collections::BTreeMap::new();
    while entries.len() < k as usize {
        let n = rng.random_range(1..=spec.max_index);
        entries.entry(n).or_insert_with(|| {
            Complex64::from_polar(
                10f64.powf(rng.random_range(-1.0..1.0)),
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
        });
    }
    let x = FinSeq::from_entries(spec.p, entries).expect("sampled entries are valid");
    let target = 10f64.powf(rng.random_range(spec.log10_norm_min..=spec.log10_norm_max));
    x.scaled(target / x.norm_p())
}
