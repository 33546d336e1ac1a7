//! Constructive conjugacies between diagonal operators and their scalar
//! normal forms, with certified composition and numerical defect
//! measurement.
//!
//! A [`ConjugacyMap`] is an ordered list of invertible stages (warp maps and
//! coordinatewise phase warps) together with a certificate naming the source
//! and target operators it intertwines: evaluating the map Φ must satisfy
//! `Φ(source(x)) = target(Φ(x))`.
//!
//! For weights with `inf |w_n| > 1` the map to the doubling normal form `2I`
//! is built from three stages applied in order:
//!
//! 1. a constant-exponent warp turning scaling by 2 into scaling by
//!    `rho = inf |w_n|`,
//! 2. the warp with exponents `s_n = log_rho |w_n|`, turning scaling by `rho`
//!    into the modulus diagonal `D_|W|`,
//! 3. the phase warp lift, turning `D_|W|` into `D_W`.
//!
//! Weights trapped in the unit disk (`0 < inf`, `sup < 1`) reduce to the same
//! construction through their reciprocals: the identical stage list built
//! with base `sup |w_n|` intertwines `D_{1/W}` with doubling, and inverting
//! the scalar relation certifies the map from the halving normal form `½I` to
//! `D_W`. The phase-warp stage still uses the original weights because
//! `f_w(z / |w|) = f_w(z) / w` makes `F_W` intertwine `D_{1/|W|}` with
//! `D_{1/W}`.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lp::{DiagonalOperator, FinSeq, WeightSeq};
use crate::rotation::{rotation_forward, rotation_inverse};
use crate::sampling::{derived_rng, sample_finseq, SampleSpec};
use crate::warp::{ExponentSeq, WarpMap};

/// One invertible building block of a conjugacy map.
#[derive(Debug, Clone, PartialEq)]
pub enum Stage {
    WarpForward(WarpMap),
    WarpInverse(WarpMap),
    RotateForward(WeightSeq),
    RotateInverse(WeightSeq),
}

impl Stage {
    pub fn apply(&self, x: &FinSeq) -> Result<FinSeq> {
        match self {
            Stage::WarpForward(h) => h.forward(x),
            Stage::WarpInverse(h) => h.inverse(x),
            Stage::RotateForward(w) => rotation_forward(w, x),
            Stage::RotateInverse(w) => rotation_inverse(w, x),
        }
    }

    pub fn inverted(&self) -> Stage {
        match self {
            Stage::WarpForward(h) => Stage::WarpInverse(h.clone()),
            Stage::WarpInverse(h) => Stage::WarpForward(h.clone()),
            Stage::RotateForward(w) => Stage::RotateInverse(w.clone()),
            Stage::RotateInverse(w) => Stage::RotateForward(w.clone()),
        }
    }
}

impl Serialize for Stage {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Stage", 2)?;
        match self {
            Stage::WarpForward(h) => {
                st.serialize_field("kind", "warp_forward")?;
                st.serialize_field("exponents", h.exponents())?;
            }
            Stage::WarpInverse(h) => {
                st.serialize_field("kind", "warp_inverse")?;
                st.serialize_field("exponents", h.exponents())?;
            }
            Stage::RotateForward(w) => {
                st.serialize_field("kind", "rotate_forward")?;
                st.serialize_field("weights", w)?;
            }
            Stage::RotateInverse(w) => {
                st.serialize_field("kind", "rotate_inverse")?;
                st.serialize_field("weights", w)?;
            }
        }
        st.end()
    }
}

/// Evaluation direction for a composed map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A composable invertible map of ℓ^p with a source/target certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyMap {
    stages: Vec<Stage>,
    source: DiagonalOperator,
    target: DiagonalOperator,
}

impl ConjugacyMap {
    /// The identity map certifying an operator as conjugate to itself.
    pub fn identity(op: DiagonalOperator) -> Self {
        Self { stages: Vec::new(), source: op.clone(), target: op }
    }

    /// Assembles a map from explicit parts. The caller asserts that the
    /// stage list actually intertwines the two operators; `defect` measures
    /// whether it does.
    pub fn from_parts(
        stages: Vec<Stage>,
        source: DiagonalOperator,
        target: DiagonalOperator,
    ) -> Result<Self> {
        if source.p() != target.p() {
            return Err(Error::ExponentMismatch { left: source.p(), right: target.p() });
        }
        Ok(Self { stages, source, target })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn source(&self) -> &DiagonalOperator {
        &self.source
    }

    pub fn target(&self) -> &DiagonalOperator {
        &self.target
    }

    pub fn p(&self) -> f64 {
        self.source.p()
    }

    /// Applies the stages in order (`Forward`) or the inverted stages in
    /// reverse order (`Inverse`).
    pub fn evaluate(&self, x: &FinSeq, direction: Direction) -> Result<FinSeq> {
        if x.p() != self.p() {
            return Err(Error::ExponentMismatch { left: self.p(), right: x.p() });
        }
        let mut v = x.clone();
        match direction {
            Direction::Forward => {
                for stage in &self.stages {
                    v = stage.apply(&v)?;
                }
            }
            Direction::Inverse => {
                for stage in self.stages.iter().rev() {
                    v = stage.inverted().apply(&v)?;
                }
            }
        }
        Ok(v)
    }

    /// The inverse map, certifying the reverse conjugacy.
    pub fn inverted(&self) -> ConjugacyMap {
        ConjugacyMap {
            stages: self.stages.iter().rev().map(Stage::inverted).collect(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Concatenation `self` then `after`; requires the target certificate of
    /// `self` to equal the source certificate of `after`.
    pub fn compose(&self, after: &ConjugacyMap) -> Result<ConjugacyMap> {
        if self.target != after.source {
            return Err(Error::CertificateMismatch);
        }
        let mut stages = self.stages.clone();
        stages.extend(after.stages.iter().cloned());
        Ok(ConjugacyMap {
            stages,
            source: self.source.clone(),
            target: after.target.clone(),
        })
    }

    /// Measures the conjugacy defect over `samples` random vectors drawn
    /// deterministically from `seed`, with norms log-uniform in `norm_range`.
    ///
    /// Each sample contributes the norm of `Φ(source(x)) - target(Φ(x))`
    /// relative to the larger of the two sides, so the defect is comparable
    /// across norm scales. An exact conjugacy has defect 0.
    pub fn defect(&self, samples: u64, seed: u64, norm_range: (f64, f64)) -> Result<DefectReport> {
        let (lo, hi) = norm_range;
        let range_ok = lo > 0.0 && hi >= lo && hi.is_finite();
        if samples == 0 || !range_ok {
            return Err(Error::InvalidDescriptor(format!(
                "defect measurement needs samples >= 1 and a positive norm range, got {samples} samples in [{lo}, {hi}]"
            )));
        }
        let spec = SampleSpec::defect(self.p(), lo, hi);
        let mut max_defect = 0.0_f64;
        let mut sum = 0.0_f64;
        let mut worst: Option<FinSeq> = None;
        for i in 0..samples {
            let mut rng = derived_rng(seed, i);
            let x = sample_finseq(&mut rng, &spec);
            let lhs = self.evaluate(&self.source.apply(&x)?, Direction::Forward)?;
            let rhs = self.target.apply(&self.evaluate(&x, Direction::Forward)?)?;
            let num = lhs.distance(&rhs)?;
            let defect = if num == 0.0 {
                0.0
            } else {
                num / lhs.norm_p().max(rhs.norm_p())
            };
            sum += defect;
            if defect >= max_defect {
                if defect > max_defect || worst.is_none() {
                    worst = Some(x);
                }
                max_defect = defect;
            }
        }
        Ok(DefectReport {
            samples,
            max_defect,
            mean_defect: sum / samples as f64,
            worst_witness: worst.expect("samples >= 1"),
        })
    }
}

/// Measurement record produced by [`ConjugacyMap::defect`].
///
/// Defects are relative: each sample's residual norm is divided by the
/// larger of the two pipeline outputs for that sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub samples: u64,
    pub max_defect: f64,
    pub mean_defect: f64,
    pub worst_witness: FinSeq,
}

/// The stage realizing the inverse of the constant-exponent warp that
/// intertwines scaling by `rho` with scaling by 2.
///
/// For `rho <= 2` that inverse is stored directly (the constant exponent
/// `log_rho 2 >= 1` is admissible). For `rho > 2` the identity
/// `(h^σ)^{-1} = h^{1/σ}` for constant σ trades it for a forward warp with
/// exponent `log_2 rho > 1`.
fn dilation_normalizer(rho: f64, p: f64) -> Result<Stage> {
    debug_assert!(rho > 1.0);
    if rho >= 2.0 {
        let h = WarpMap::new(ExponentSeq::constant(rho.log2())?, p)?;
        Ok(Stage::WarpForward(h))
    } else {
        let h = WarpMap::new(ExponentSeq::constant(2.0f64.log(rho))?, p)?;
        Ok(Stage::WarpInverse(h))
    }
}

/// Builds the conjugacy from the doubling operator `2I` to `D_W`; requires
/// `inf |w_n| > 1`.
pub fn build_doubling_conjugacy(weights: WeightSeq, p: f64) -> Result<ConjugacyMap> {
    let rho = weights.inf_modulus();
    if rho <= 1.0 || rho.is_nan() {
        return Err(Error::DoublingHypothesis { inf_modulus: rho });
    }
    let warp = WarpMap::new(ExponentSeq::from_weights(&weights, rho)?, p)?;
    let stages = vec![
        dilation_normalizer(rho, p)?,
        Stage::WarpForward(warp),
        Stage::RotateForward(weights.clone()),
    ];
    let source = DiagonalOperator::scalar(Complex64::new(2.0, 0.0), p)?;
    let target = DiagonalOperator::new(weights, p)?;
    ConjugacyMap::from_parts(stages, source, target)
}

/// Builds the conjugacy from the halving operator `½I` to `D_W`; requires
/// `0 < inf |w_n|` and `sup |w_n| < 1`.
pub fn build_halving_conjugacy(weights: WeightSeq, p: f64) -> Result<ConjugacyMap> {
    let inf = weights.inf_modulus();
    let sup = weights.sup_modulus();
    let admissible = inf > 0.0 && sup < 1.0;
    if !admissible {
        return Err(Error::HalvingHypothesis { inf_modulus: inf, sup_modulus: sup });
    }
    // reciprocal weights have inf |1/w_n| = 1/sup > 1, and
    // log_{1/sup} |1/w_n| = log_sup |w_n|, so the exponent stage can be
    // phrased in the original weights with base sup
    let rho = 1.0 / sup;
    let warp = WarpMap::new(ExponentSeq::log_modulus(&weights, sup)?, p)?;
    let stages = vec![
        dilation_normalizer(rho, p)?,
        Stage::WarpForward(warp),
        Stage::RotateForward(weights.clone()),
    ];
    let source = DiagonalOperator::scalar(Complex64::new(0.5, 0.0), p)?;
    let target = DiagonalOperator::new(weights, p)?;
    ConjugacyMap::from_parts(stages, source, target)
}
