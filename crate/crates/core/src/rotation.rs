//! The scalar phase warp and its coordinatewise lift.
//!
//! For a complex scalar `w = |w| e^{iθ}` with `|w| != 1`, the phase warp
//! rotates `z` by the angle `(ln|z| / ln|w|) * θ`. It preserves moduli, fixes
//! 0, and intertwines multiplication by `|w|` with multiplication by `w`:
//! `f_w(|w| z) = w f_w(z)`. Lifting it coordinatewise with one scalar map per
//! weight conjugates the modulus diagonal `D_|W|` to the full diagonal `D_W`.
//!
//! Conventions: the angle θ is the principal argument in (−π, π] (any fixed
//! branch satisfies the intertwining identity); `w = 0` means the identity
//! scalar map; inputs with subnormal modulus are treated as 0, where the map
//! is continuous with value 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lp::{is_zero, FinSeq, WeightSeq};

/// The scalar phase warp `f_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWarp {
    w: Complex64,
    theta: f64,
    log_mod: f64,
}

impl PhaseWarp {
    /// Fails for nonzero `w` of modulus exactly 1, where the rotation angle
    /// would be unbounded.
    pub fn new(w: Complex64) -> Result<Self> {
        if is_zero(w) {
            return Ok(Self { w, theta: 0.0, log_mod: 0.0 });
        }
        let m = w.norm();
        if m == 1.0 {
            return Err(Error::UnimodularPhase { w });
        }
        Ok(Self { w, theta: w.arg(), log_mod: m.ln() })
    }

    pub fn scalar(&self) -> Complex64 {
        self.w
    }

    /// `f_w(z)`: modulus-preserving rotation by `(ln|z| / ln|w|) * θ`.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.rotate(z, 1.0)
    }

    /// `f_w^{-1}(z)`: the same rotation with the opposite sign.
    pub fn apply_inverse(&self, z: Complex64) -> Complex64 {
        self.rotate(z, -1.0)
    }

    fn rotate(&self, z: Complex64, sign: f64) -> Complex64 {
        if is_zero(self.w) {
            return z;
        }
        let m = z.norm();
        if m < f64::MIN_POSITIVE {
            return Complex64::new(0.0, 0.0);
        }
        let angle = sign * self.theta * (m.ln() / self.log_mod);
        z * Complex64::from_polar(1.0, angle)
    }
}

fn check_weights(weights: &WeightSeq) -> Result<()> {
    if let Some(index) = weights.unimodular_index() {
        return Err(Error::UnimodularWeight { index });
    }
    Ok(())
}

/// Coordinatewise phase warp `x_n -> f_{w_n}(x_n)`. Norm-preserving.
pub fn rotation_forward(weights: &WeightSeq, x: &FinSeq) -> Result<FinSeq> {
    rotate_seq(weights, x, PhaseWarp::apply)
}

/// Coordinatewise inverse `x_n -> f_{w_n}^{-1}(x_n)`.
pub fn rotation_inverse(weights: &WeightSeq, x: &FinSeq) -> Result<FinSeq> {
    rotate_seq(weights, x, PhaseWarp::apply_inverse)
}

fn rotate_seq(
    weights: &WeightSeq,
    x: &FinSeq,
    f: impl Fn(&PhaseWarp, Complex64) -> Complex64,
) -> Result<FinSeq> {
    check_weights(weights)?;
    let mut entries = std::collections::BTreeMap::new();
    for (n, z) in x.iter() {
        let pw = PhaseWarp::new(weights.value_at(n))?;
        let v = f(&pw, z);
        if !is_zero(v) {
            entries.insert(n, v);
        }
    }
    Ok(FinSeq::from_raw(x.p(), entries))
}
