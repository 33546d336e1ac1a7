//! Constructive topological conjugacies for diagonal operators on the
//! complex sequence spaces ℓ^p, 1 <= p < ∞.
//!
//! Two homeomorphism families do all the work:
//!
//! * the **tail-sum warp** ([`warp::WarpMap`]), whose n-th output modulus is
//!   the p-th root of `T_n^{s_n} - T_{n+1}^{s_n}` for the suffix sums
//!   `T_n = sum_{k>=n} |x_k|^p` — it turns scalar dilations into modulus
//!   diagonals;
//! * the **phase warp** ([`rotation::PhaseWarp`] and its coordinatewise
//!   lift), which rotates each coordinate by an angle proportional to the log
//!   of its modulus — it turns modulus diagonals into full complex diagonals.
//!
//! [`conjugacy`] composes the two into certified maps between a diagonal
//! operator `D_W` and its scalar normal form (`2I` when `inf |w_n| > 1`, `½I`
//! when the weights sit strictly inside the unit disk), and measures the
//! conjugacy defect numerically. [`probe`] measures the escape-time
//! obstruction that separates `inf |w_n| > 1` from `inf |w_n| = 1`.
//! [`selftest`] bundles every inequality these constructions rest on into a
//! deterministic, seeded property suite, with optional cross-checks against
//! the extended-precision reference in [`oracle`].
//!
//! Everything operates on finitely supported vectors ([`lp::FinSeq`]), the
//! dense subset of ℓ^p on which the warp is exactly invertible.

pub mod conjugacy;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod probe;
pub mod rotation;
pub mod sampling;
pub mod selftest;
pub mod warp;

pub use conjugacy::{
    build_doubling_conjugacy, build_halving_conjugacy, ConjugacyMap, DefectReport, Direction,
    Stage,
};
pub use error::Error;
pub use lp::{
    apply_modulus_diagonal, DiagonalOperator, FinSeq, TailSums, WeightDescriptor, WeightSeq,
};
pub use probe::{escape_profile, escape_time, EscapeOutcome, EscapeProfile, EscapeRow};
pub use rotation::{rotation_forward, rotation_inverse, PhaseWarp};
pub use warp::{stable_power_diff, ExponentDescriptor, ExponentSeq, WarpMap};
