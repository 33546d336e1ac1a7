//! Sequence-space primitives: finitely supported vectors in ℓ^p, their norms
//! and suffix sums, bounded weight sequences and the diagonal operators they
//! induce.
//!
//! Finitely supported vectors are the computational domain of the whole
//! crate. They form a dense subset of ℓ^p that every map here sends onto
//! itself, so all constructions are exact on it; general vectors are handled
//! by truncating first and accounting for the truncation error separately.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) fn is_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// |z|^p, with exact shortcuts for the common exponents.
///
/// Every norm and tail sum in the crate goes through this single function so
/// that the identity `T_n - T_{n+1} = |x_n|^p` holds for the same rounding of
/// `|x_n|^p` everywhere.
pub(crate) fn modulus_pow(z: Complex64, p: f64) -> f64 {
    if p == 1.0 {
        z.norm()
    } else if p == 2.0 {
        z.norm_sqr()
    } else {
        z.norm().powf(p)
    }
}

pub(crate) fn validate_space_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpaceExponent { p })
    }
}

/// A finitely supported complex vector in ℓ^p.
///
/// Only nonzero coordinates are stored, indices are 1-based, and the space
/// exponent `p` travels with the vector. Values are immutable after
/// construction; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct FinSeq {
    p: f64,
    entries: BTreeMap<u32, Complex64>,
}

impl FinSeq {
    /// The zero vector of ℓ^p (empty support).
    pub fn zero(p: f64) -> Result<Self> {
        validate_space_exponent(p)?;
        Ok(Self { p, entries: BTreeMap::new() })
    }

    /// Builds a vector from `(index, value)` pairs.
    ///
    /// Zero values are dropped, indices must be >= 1 and distinct, and every
    /// value must be finite.
    pub fn from_entries(p: f64, entries: impl IntoIterator<Item = (u32, Complex64)>) -> Result<Self> {
        validate_space_exponent(p)?;
        let mut map = BTreeMap::new();
        for (n, z) in entries {
            if n == 0 {
                return Err(Error::ZeroIndex);
            }
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidDescriptor(format!(
                    "non-finite coordinate {z} at index {n}"
                )));
            }
            if is_zero(z) {
                continue;
            }
            if map.insert(n, z).is_some() {
                return Err(Error::InvalidDescriptor(format!("duplicate index {n}")));
            }
        }
        Ok(Self { p, entries: map })
    }

    /// `coeff * e_n`, the scaled n-th standard basis vector.
    pub fn basis(p: f64, index: u32, coeff: Complex64) -> Result<Self> {
        Self::from_entries(p, [(index, coeff)])
    }

    /// Internal constructor for maps whose invariants the caller upholds.
    pub(crate) fn from_raw(p: f64, entries: BTreeMap<u32, Complex64>) -> Self {
        debug_assert!(entries.iter().all(|(n, z)| *n >= 1 && !is_zero(*z)));
        Self { p, entries }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero_vector(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest support index, or `None` for the zero vector.
    pub fn max_index(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    /// Iterates `(index, value)` pairs in increasing index order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, Complex64)> + '_ {
        self.entries.iter().map(|(n, z)| (*n, *z))
    }

    /// Support indices in increasing order.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    /// The n-th coordinate, zero when absent.
    pub fn coordinate(&self, n: u32) -> Complex64 {
        self.entries.get(&n).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The ℓ^p norm `(sum |x_n|^p)^(1/p)`.
    ///
    /// A single-coordinate vector short-circuits to `|x_n|` so that powers of
    /// the exponent do not round-trip through `powf`.
    pub fn norm_p(&self) -> f64 {
        match self.entries.len() {
            0 => 0.0,
            1 => self.entries.values().next().unwrap().norm(),
            _ => {
                let total = self.tail_sums().total();
                if self.p == 1.0 {
                    total
                } else if self.p == 2.0 {
                    total.sqrt()
                } else {
                    total.powf(1.0 / self.p)
                }
            }
        }
    }

    /// Suffix sums `T_n = sum_{k >= n} |x_k|^p`, summed from the largest
    /// support index downward so each `T_n` is literally `|x_n|^p + T_{n+1}`.
    pub fn tail_sums(&self) -> TailSums {
        let mut sums = BTreeMap::new();
        let mut running = 0.0;
        for (n, z) in self.entries.iter().rev() {
            running += modulus_pow(*z, self.p);
            sums.insert(*n, running);
        }
        TailSums { sums, max_index: self.max_index().unwrap_or(0) }
    }

    /// Scales every coordinate by a real factor.
    pub fn scaled(&self, t: f64) -> Self {
        self.scaled_complex(Complex64::new(t, 0.0))
    }

    /// Scales every coordinate by a complex factor.
    pub fn scaled_complex(&self, t: Complex64) -> Self {
        let entries = self
            .entries
            .iter()
            .filter_map(|(n, z)| {
                let v = z * t;
                (!is_zero(v)).then_some((*n, v))
            })
            .collect();
        Self::from_raw(self.p, entries)
    }

    pub fn add(&self, other: &FinSeq) -> Result<FinSeq> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FinSeq) -> Result<FinSeq> {
        self.combine(other, |a, b| a - b)
    }

    /// ℓ^p distance to another vector of the same space.
    pub fn distance(&self, other: &FinSeq) -> Result<f64> {
        Ok(self.sub(other)?.norm_p())
    }

    fn combine(&self, other: &FinSeq, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<FinSeq> {
        if self.p != other.p {
            return Err(Error::ExponentMismatch { left: self.p, right: other.p });
        }
        let mut entries = BTreeMap::new();
        for n in self.entries.keys().chain(other.entries.keys()) {
            if entries.contains_key(n) {
                continue;
            }
            let v = f(self.coordinate(*n), other.coordinate(*n));
            if !is_zero(v) {
                entries.insert(*n, v);
            }
        }
        Ok(FinSeq::from_raw(self.p, entries))
    }
}

impl Serialize for FinSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a BTreeMap<u32, Complex64>);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (n, z) in self.0 {
                    map.serialize_entry(&n.to_string(), &[z.re, z.im])?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("FinSeq", 2)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("entries", &Entries(&self.entries))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for FinSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: f64,
            entries: BTreeMap<String, [f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut pairs = Vec::with_capacity(raw.entries.len());
        for (key, [re, im]) in raw.entries {
            let n: u32 = key
                .parse()
                .map_err(|_| de::Error::custom(format!("invalid coordinate index {key:?}")))?;
            pairs.push((n, Complex64::new(re, im)));
        }
        FinSeq::from_entries(raw.p, pairs).map_err(de::Error::custom)
    }
}

/// Suffix sums of `|x_k|^p`, stored at the support indices only.
///
/// Between support indices the tail sum is constant, so `at(n)` resolves to
/// the value at the next support index at or after `n`, and to 0 beyond the
/// support. `T_1` equals the p-th power of the norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSums {
    sums: BTreeMap<u32, f64>,
    max_index: u32,
}

impl TailSums {
    /// `T_n` for any `n >= 1`.
    pub fn at(&self, n: u32) -> f64 {
        self.sums.range(n..).next().map(|(_, t)| *t).unwrap_or(0.0)
    }

    /// `T_{n+1}`, the tail strictly after `n`.
    pub fn after(&self, n: u32) -> f64 {
        match n.checked_add(1) {
            Some(m) => self.at(m),
            None => 0.0,
        }
    }

    /// `T_1 = ||x||_p^p`.
    pub fn total(&self) -> f64 {
        self.at(1)
    }

    /// Largest support index (0 for the zero vector).
    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    /// `(index, T_index)` pairs over the support, in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.sums.iter().map(|(n, t)| (*n, *t))
    }
}

/// Declarative description of a bounded complex weight sequence `{w_n}`.
///
/// Three shapes cover everything the crate constructs: a constant sequence,
/// an explicit head with a constant tail, and the harmonic family
/// `w_n = c + a/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightDescriptor {
    Constant {
        #[serde(with = "complex_pair")]
        value: Complex64,
    },
    List {
        #[serde(with = "complex_pairs")]
        values: Vec<Complex64>,
        #[serde(with = "complex_pair")]
        tail: Complex64,
    },
    Harmonic {
        #[serde(with = "complex_pair")]
        c: Complex64,
        #[serde(with = "complex_pair")]
        a: Complex64,
    },
}

pub(crate) mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub(crate) mod complex_pairs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl WeightDescriptor {
    pub fn value_at(&self, n: u32) -> Complex64 {
        debug_assert!(n >= 1);
        match self {
            WeightDescriptor::Constant { value } => *value,
            WeightDescriptor::List { values, tail } => {
                values.get(n as usize - 1).copied().unwrap_or(*tail)
            }
            WeightDescriptor::Harmonic { c, a } => c + a / (n as f64),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        let ok = match self {
            WeightDescriptor::Constant { value } => finite(value),
            WeightDescriptor::List { values, tail } => values.iter().all(finite) && finite(tail),
            WeightDescriptor::Harmonic { c, a } => finite(c) && finite(a),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDescriptor("weight descriptor contains a non-finite value".into()))
        }
    }

    /// Exact `(inf |w_n|, sup |w_n|)` over `n >= 1`.
    ///
    /// The harmonic case evaluates the quadratic `|c + a t|^2` on the set
    /// `{1/n} ∪ {0}` (the 0 endpoint is the limit). An upward parabola takes
    /// its extrema over that set at the interval endpoints or at the discrete
    /// points straddling the vertex, so finitely many candidates suffice.
    pub fn modulus_extrema(&self) -> (f64, f64) {
        match self {
            WeightDescriptor::Constant { value } => {
                let m = value.norm();
                (m, m)
            }
            WeightDescriptor::List { values, tail } => {
                let mut lo = tail.norm();
                let mut hi = lo;
                for v in values {
                    let m = v.norm();
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
                (lo, hi)
            }
            WeightDescriptor::Harmonic { c, a } => {
                if is_zero(*a) {
                    let m = c.norm();
                    return (m, m);
                }
                let q = |t: f64| (c + a * t).norm();
                let limit = c.norm();
                let head = q(1.0);
                let hi = head.max(limit);
                let alpha = a.norm_sqr();
                let beta = (c.conj() * a).re;
                let vertex = -beta / alpha;
                let lo = if vertex <= 0.0 {
                    // increasing on (0, 1]: the limit is the infimum
                    limit.min(head)
                } else if vertex >= 1.0 {
                    // decreasing on (0, 1]: n = 1 minimizes
                    head
                } else {
                    let n_lo = (1.0 / vertex).floor().max(1.0);
                    let n_hi = n_lo + 1.0;
                    q(1.0 / n_lo).min(q(1.0 / n_hi))
                };
                (lo, hi)
            }
        }
    }

    /// First index carrying a nonzero weight of modulus exactly 1, if any.
    ///
    /// The harmonic case solves `|c + a/n| = 1` for real roots in `1/n` and
    /// checks the neighbouring integers, so detection stays closed-form.
    pub fn unimodular_index(&self) -> Option<u32> {
        let hits = |w: Complex64| !is_zero(w) && w.norm() == 1.0;
        match self {
            WeightDescriptor::Constant { value } => hits(*value).then_some(1),
            WeightDescriptor::List { values, tail } => {
                for (i, v) in values.iter().enumerate() {
                    if hits(*v) {
                        return Some(i as u32 + 1);
                    }
                }
                hits(*tail).then_some(values.len() as u32 + 1)
            }
            WeightDescriptor::Harmonic { c, a } => {
                if is_zero(*a) {
                    return hits(*c).then_some(1);
                }
                let mut candidates = vec![1u32];
                let alpha = a.norm_sqr();
                let beta = (c.conj() * a).re;
                let gamma = c.norm_sqr() - 1.0;
                let disc = beta * beta - alpha * gamma;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for root in [(-beta + sq) / alpha, (-beta - sq) / alpha] {
                        if root > 0.0 && root.is_finite() {
                            let around = 1.0 / root;
                            for off in -1i64..=1 {
                                let n = around.round() as i64 + off;
                                if n >= 1 && n <= u32::MAX as i64 {
                                    candidates.push(n as u32);
                                }
                            }
                        }
                    }
                }
                candidates.sort_unstable();
                candidates.dedup();
                candidates.into_iter().find(|n| hits(self.value_at(*n)))
            }
        }
    }
}

impl fmt::Display for WeightDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightDescriptor::Constant { value } => write!(f, "constant {value}"),
            WeightDescriptor::List { values, tail } => {
                write!(f, "list [")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "] tail {tail}")
            }
            WeightDescriptor::Harmonic { c, a } => write!(f, "harmonic {c} + {a}/n"),
        }
    }
}

/// A bounded weight sequence with its exact modulus extrema cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightDescriptor", into = "WeightDescriptor")]
pub struct WeightSeq {
    descriptor: WeightDescriptor,
    inf_modulus: f64,
    sup_modulus: f64,
}

impl WeightSeq {
    pub fn new(descriptor: WeightDescriptor) -> Result<Self> {
        descriptor.validate()?;
        let (inf_modulus, sup_modulus) = descriptor.modulus_extrema();
        Ok(Self { descriptor, inf_modulus, sup_modulus })
    }

    pub fn constant(value: Complex64) -> Result<Self> {
        Self::new(WeightDescriptor::Constant { value })
    }

    pub fn list(values: Vec<Complex64>, tail: Complex64) -> Result<Self> {
        Self::new(WeightDescriptor::List { values, tail })
    }

    /// `w_n = c + a/n`.
    pub fn harmonic(c: Complex64, a: Complex64) -> Result<Self> {
        Self::new(WeightDescriptor::Harmonic { c, a })
    }

    pub fn value_at(&self, n: u32) -> Complex64 {
        self.descriptor.value_at(n)
    }

    pub fn inf_modulus(&self) -> f64 {
        self.inf_modulus
    }

    pub fn sup_modulus(&self) -> f64 {
        self.sup_modulus
    }

    pub fn unimodular_index(&self) -> Option<u32> {
        self.descriptor.unimodular_index()
    }

    pub fn descriptor(&self) -> &WeightDescriptor {
        &self.descriptor
    }
}

impl TryFrom<WeightDescriptor> for WeightSeq {
    type Error = Error;

    fn try_from(d: WeightDescriptor) -> Result<Self> {
        WeightSeq::new(d)
    }
}

impl From<WeightSeq> for WeightDescriptor {
    fn from(w: WeightSeq) -> Self {
        w.descriptor
    }
}

/// The diagonal operator `(D_W x)_n = w_n x_n` acting on ℓ^p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalOperator {
    weights: WeightSeq,
    p: f64,
}

impl DiagonalOperator {
    pub fn new(weights: WeightSeq, p: f64) -> Result<Self> {
        validate_space_exponent(p)?;
        Ok(Self { weights, p })
    }

    /// `c * I`, a scalar multiple of the identity.
    pub fn scalar(c: Complex64, p: f64) -> Result<Self> {
        Self::new(WeightSeq::constant(c)?, p)
    }

    pub fn weights(&self) -> &WeightSeq {
        &self.weights
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Operator norm; equals the weight supremum.
    pub fn operator_norm(&self) -> f64 {
        self.weights.sup_modulus()
    }

    /// Coordinatewise product `w_n x_n`; coordinates annihilated by a zero
    /// weight leave the support.
    pub fn apply(&self, x: &FinSeq) -> Result<FinSeq> {
        if self.p != x.p() {
            return Err(Error::ExponentMismatch { left: self.p, right: x.p() });
        }
        let entries = x
            .iter()
            .filter_map(|(n, z)| {
                let v = self.weights.value_at(n) * z;
                (!is_zero(v)).then_some((n, v))
            })
            .collect();
        Ok(FinSeq::from_raw(self.p, entries))
    }
}

/// Applies the modulus diagonal `x_n -> |w_n| x_n`.
///
/// This is the absolute-value companion of [`DiagonalOperator::apply`]; the
/// phase warp intertwines the two.
pub fn apply_modulus_diagonal(weights: &WeightSeq, x: &FinSeq) -> FinSeq {
    let entries = x
        .iter()
        .filter_map(|(n, z)| {
            let v = z * weights.value_at(n).norm();
            (!is_zero(v)).then_some((n, v))
        })
        .collect();
    FinSeq::from_raw(x.p(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norm_zero_vector() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            assert_eq!(FinSeq::zero(p).unwrap().norm_p(), 0.0);
        }
    }

    #[test]
    fn norm_single_coordinate() {
        let x = FinSeq::basis(2.0, 1, c(3.0, 4.0)).unwrap();
        assert_eq!(x.norm_p(), 5.0);
    }

    #[test]
    fn norm_direct_summation() {
        let x = FinSeq::from_entries(1.0, [(1, c(0.3, 0.0)), (2, c(0.2, 0.0))]).unwrap();
        assert!((x.norm_p() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tail_sums_example() {
        let x = FinSeq::from_entries(1.0, [(1, c(0.3, 0.0)), (2, c(0.2, 0.0))]).unwrap();
        let t = x.tail_sums();
        assert!((t.at(1) - 0.5).abs() < 1e-15);
        assert!((t.at(2) - 0.2).abs() < 1e-15);
        assert_eq!(t.at(3), 0.0);
        assert_eq!(t.max_index(), 2);
    }

    #[test]
    fn tail_sums_zero_vector() {
        let t = FinSeq::zero(2.0).unwrap().tail_sums();
        assert_eq!(t.at(1), 0.0);
        assert_eq!(t.total(), 0.0);
        assert_eq!(t.max_index(), 0);
    }

    #[test]
    fn tail_sums_single_support_point() {
        let x = FinSeq::basis(2.0, 5, c(2.0, 0.0)).unwrap();
        let t = x.tail_sums();
        for n in 1..=5 {
            assert_eq!(t.at(n), 4.0);
        }
        assert_eq!(t.at(6), 0.0);
    }

    #[test]
    fn tail_sums_reconstruct_moduli() {
        let x = FinSeq::from_entries(
            1.5,
            [(2, c(0.4, 0.1)), (7, c(-1.0, 2.0)), (9, c(0.0, 3.0)), (40, c(5.0, -0.5))],
        )
        .unwrap();
        let t = x.tail_sums();
        for (n, z) in x.iter() {
            let lhs = t.at(n) - t.after(n);
            let rhs = modulus_pow(z, 1.5);
            // downward summation leaves at most the one rounding of
            // |x_n|^p + T_{n+1}, i.e. an ulp of the tail itself
            assert!((lhs - rhs).abs() <= 1e-15 * t.at(n), "n={n}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn apply_scalar_operator() {
        let d = DiagonalOperator::scalar(c(2.0, 0.0), 1.0).unwrap();
        let x = FinSeq::from_entries(1.0, [(1, c(1.0, 0.0)), (3, c(-1.0, 0.0))]).unwrap();
        let y = d.apply(&x).unwrap();
        assert_eq!(y.coordinate(1), c(2.0, 0.0));
        assert_eq!(y.coordinate(3), c(-2.0, 0.0));
    }

    #[test]
    fn apply_harmonic_weight() {
        let d = DiagonalOperator::new(
            WeightSeq::harmonic(c(1.0, 0.0), c(1.0, 0.0)).unwrap(),
            1.0,
        )
        .unwrap();
        let x = FinSeq::basis(1.0, 2, c(1.0, 0.0)).unwrap();
        assert_eq!(d.apply(&x).unwrap().coordinate(2), c(1.5, 0.0));
    }

    #[test]
    fn apply_annihilating_weight() {
        let d = DiagonalOperator::new(
            WeightSeq::list(vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap(),
            2.0,
        )
        .unwrap();
        let x = FinSeq::basis(2.0, 1, c(7.0, 0.0)).unwrap();
        assert!(d.apply(&x).unwrap().is_zero_vector());
    }

    #[test]
    fn apply_rejects_exponent_mismatch() {
        let d = DiagonalOperator::scalar(c(2.0, 0.0), 1.0).unwrap();
        let x = FinSeq::basis(2.0, 1, c(1.0, 0.0)).unwrap();
        assert!(matches!(d.apply(&x), Err(Error::ExponentMismatch { .. })));
    }

    #[test]
    fn coordinate_access() {
        let x = FinSeq::basis(1.0, 1, c(0.0, 2.0)).unwrap();
        assert_eq!(x.coordinate(1), c(0.0, 2.0));
        assert_eq!(x.coordinate(2), c(0.0, 0.0));
        let y = FinSeq::basis(1.0, 3, c(1.0, 1.0)).unwrap();
        assert_eq!(y.coordinate(3), c(1.0, 1.0));
    }

    #[test]
    fn basis_scaling_through_operator() {
        let w = WeightSeq::harmonic(c(2.0, 0.0), c(0.0, 1.0)).unwrap();
        let d = DiagonalOperator::new(w.clone(), 2.0).unwrap();
        for n in [1u32, 4, 17] {
            let t = 0.75;
            let x = FinSeq::basis(2.0, n, c(t, 0.0)).unwrap();
            let expected = w.value_at(n).norm() * t;
            let got = d.apply(&x).unwrap().norm_p();
            assert!((got - expected).abs() <= 1e-14 * expected);
        }
    }

    #[test]
    fn rejects_invalid_space_exponent() {
        assert!(FinSeq::zero(0.5).is_err());
        assert!(FinSeq::zero(f64::INFINITY).is_err());
        assert!(FinSeq::zero(f64::NAN).is_err());
    }

    #[test]
    fn rejects_zero_index_and_duplicates() {
        assert!(matches!(
            FinSeq::from_entries(1.0, [(0, c(1.0, 0.0))]),
            Err(Error::ZeroIndex)
        ));
        assert!(FinSeq::from_entries(1.0, [(3, c(1.0, 0.0)), (3, c(2.0, 0.0))]).is_err());
    }

    #[test]
    fn zero_values_are_dropped() {
        let x = FinSeq::from_entries(1.0, [(1, c(0.0, 0.0)), (2, c(1.0, 0.0))]).unwrap();
        assert_eq!(x.support_len(), 1);
    }

    #[test]
    fn harmonic_extrema_match_scan() {
        // a handful of harmonic shapes, including complex ones where |w_n|
        // is not monotone in n
        let cases = [
            (c(1.0, 0.0), c(1.0, 0.0)),
            (c(2.0, 0.0), c(1.0, 0.0)),
            (c(0.5, 0.0), c(-0.3, 0.0)),
            (c(0.0, 2.0), c(1.0, 0.0)),
            (c(1.0, 1.0), c(-2.0, 0.5)),
            (c(-0.2, 0.8), c(0.6, -0.4)),
            (c(0.0, 0.0), c(1.0, 0.0)),
        ];
        for (cc, aa) in cases {
            let w = WeightSeq::harmonic(cc, aa).unwrap();
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for n in 1..=200_000u32 {
                let m = w.value_at(n).norm();
                lo = lo.min(m);
                hi = hi.max(m);
            }
            // the limit point |c| may be the unattained inf or sup
            lo = lo.min(cc.norm());
            hi = hi.max(cc.norm());
            assert!(
                (w.inf_modulus() - lo).abs() <= 1e-9 * (1.0 + lo),
                "inf: cached {} vs scan {lo} for c={cc} a={aa}",
                w.inf_modulus()
            );
            assert!(
                (w.sup_modulus() - hi).abs() <= 1e-9 * (1.0 + hi),
                "sup: cached {} vs scan {hi} for c={cc} a={aa}",
                w.sup_modulus()
            );
        }
    }

    #[test]
    fn unimodular_detection() {
        assert_eq!(WeightSeq::constant(c(0.0, 1.0)).unwrap().unimodular_index(), Some(1));
        assert_eq!(WeightSeq::constant(c(0.0, 0.0)).unwrap().unimodular_index(), None);
        assert_eq!(WeightSeq::constant(c(2.0, 0.0)).unwrap().unimodular_index(), None);
        let l = WeightSeq::list(vec![c(2.0, 0.0), c(-1.0, 0.0)], c(3.0, 0.0)).unwrap();
        assert_eq!(l.unimodular_index(), Some(2));
        let t = WeightSeq::list(vec![c(2.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!(t.unimodular_index(), Some(2));
        // w_n = 0.5 + 1/n passes through modulus 1 at n = 2 exactly
        let h = WeightSeq::harmonic(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(h.unimodular_index(), Some(2));
        // w_n = 1 + 1/n never attains modulus 1
        let g = WeightSeq::harmonic(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(g.unimodular_index(), None);
    }

    #[test]
    fn finseq_json_schema() {
        let x = FinSeq::from_entries(1.0, [(1, c(0.3, 0.0)), (2, c(0.0, -0.2))]).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"p":1.0,"entries":{"1":[0.3,0.0],"2":[0.0,-0.2]}}"#);
        let back: FinSeq = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn weight_descriptor_json_schema() {
        let w = WeightSeq::constant(c(2.0, 0.0)).unwrap();
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"kind":"constant","value":[2.0,0.0]}"#
        );
        let l = WeightSeq::list(vec![c(2.0, 0.0), c(8.0, 0.0)], c(2.0, 0.0)).unwrap();
        assert_eq!(
            serde_json::to_string(&l).unwrap(),
            r#"{"kind":"list","values":[[2.0,0.0],[8.0,0.0]],"tail":[2.0,0.0]}"#
        );
        let h: WeightSeq =
            serde_json::from_str(r#"{"kind":"harmonic","c":[1.0,0.0],"a":[1.0,0.0]}"#).unwrap();
        assert_eq!(h.value_at(2), c(1.5, 0.0));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_finseq(p: f64) -> impl Strategy<Value = FinSeq> {
            proptest::collection::btree_map(1u32..60, (-5.0f64..5.0, -5.0f64..5.0), 0..12)
                .prop_map(move |m| {
                    FinSeq::from_entries(p, m.into_iter().map(|(n, (re, im))| (n, c(re, im))))
                        .unwrap()
                })
        }

        proptest! {
            #[test]
            fn triangle_inequality(x in arb_finseq(1.5), y in arb_finseq(1.5)) {
                let lhs = x.add(&y).unwrap().norm_p();
                let rhs = x.norm_p() + y.norm_p();
                prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
            }

            #[test]
            fn absolute_homogeneity(x in arb_finseq(2.0), t in -4.0f64..4.0) {
                let lhs = x.scaled(t).norm_p();
                let rhs = t.abs() * x.norm_p();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
            }

            #[test]
            fn tails_nonincreasing(x in arb_finseq(1.0)) {
                let t = x.tail_sums();
                let mut prev = f64::INFINITY;
                for (_, v) in t.iter() {
                    prop_assert!(v >= 0.0);
                    prop_assert!(v <= prev);
                    prev = v;
                }
                prop_assert_eq!(t.total(), x.tail_sums().at(1));
            }
        }
    }
}
