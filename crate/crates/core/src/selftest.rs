//! The deterministic property suite behind `selftest`: every inequality and
//! intertwining identity the constructions rely on, checked on seeded random
//! samples with fixed tolerances. Each property reports its worst violation;
//! the suite is byte-reproducible for a fixed seed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lp::{apply_modulus_diagonal, FinSeq, WeightSeq};
use crate::oracle::HighPrecision;
use crate::rotation::{rotation_forward, PhaseWarp};
use crate::sampling::derived_rng;
use crate::warp::{stable_power_diff, ExponentSeq, WarpMap};

/// Configuration of one selftest run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Decimal digits for the optional high-precision cross-checks; `None`
    /// skips them.
    pub precision: Option<u32>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { seed: 7, precision: None }
    }
}

/// Outcome of a single property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: u64,
    pub tolerance: f64,
    pub max_violation: f64,
    pub pass: bool,
}

impl PropertyReport {
    fn new(name: &str, samples: u64, tolerance: f64, max_violation: f64) -> Self {
        Self {
            name: name.to_string(),
            samples,
            tolerance,
            max_violation,
            pass: max_violation <= tolerance,
        }
    }
}

/// Full suite outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub precision: Option<u32>,
    pub properties: Vec<PropertyReport>,
    pub pass: bool,
}

fn rng_for(seed: u64, property: u64, sample: u64) -> ChaCha8Rng {
    derived_rng(seed, (property << 32) | sample)
}

/// Runs every property and collects the reports.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let mut properties = vec![
        power_diff_sandwich(cfg.seed),
        shifted_root_contraction(cfg.seed),
        warp_norm_sandwich_small(cfg.seed),
        warp_norm_sandwich_large(cfg.seed),
        warp_scaling_identity(cfg.seed),
        warp_roundtrip(cfg.seed),
        phase_warp_homogeneity(cfg.seed),
        rotation_diagonal_intertwine(cfg.seed),
        warp_dilation_intertwine(cfg.seed),
        naive_power_map_unbounded(),
    ];
    if let Some(digits) = cfg.precision {
        properties.push(power_diff_vs_reference(cfg.seed, digits));
        properties.push(warp_vs_reference(cfg.seed, digits));
    }
    let pass = properties.iter().all(|p| p.pass);
    SelftestReport { seed: cfg.seed, precision: cfg.precision, properties, pass }
}

/// `(1-a)(a^r - b^r) <= a^s - b^s <= (a-b)/(1-a)` for `0 <= b <= a < 1` and
/// integer `r >= s >= 1`.
pub fn power_diff_sandwich(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 100_000;
    const TOL: f64 = 1e-12;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 1, i);
        let a: f64 = rng.random_range(0.0..1.0);
        let b = match i % 100 {
            0 => 0.0,
            1 => a,
            _ => rng.random_range(0.0..=a),
        };
        let r: u32 = rng.random_range(1..=8);
        let s: f64 = rng.random_range(1.0..=r as f64);
        let mid = stable_power_diff(a, b, s).expect("valid arguments");
        let lower = (1.0 - a) * (a.powi(r as i32) - b.powi(r as i32));
        let upper = (a - b) / (1.0 - a);
        worst = worst.max(lower - mid).max(mid - upper);
    }
    PropertyReport::new("power_diff_sandwich", SAMPLES, TOL, worst)
}

/// `x -> (a + x^s)^(1/s)` is a contraction for `a > 0`, `s >= 1`.
pub fn shifted_root_contraction(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 100_000;
    const TOL: f64 = 1e-12;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 2, i);
        let a: f64 = rng.random_range(1e-6..10.0);
        let s: f64 = rng.random_range(1.0..8.0);
        let x: f64 = rng.random_range(0.0..10.0);
        let y: f64 = rng.random_range(0.0..10.0);
        let f = |t: f64| (a + t.powf(s)).powf(1.0 / s);
        worst = worst.max((f(x) - f(y)).abs() - (x - y).abs());
    }
    PropertyReport::new("shifted_root_contraction", SAMPLES, TOL, worst)
}

fn random_exponents(rng: &mut ChaCha8Rng, max: f64) -> ExponentSeq {
    match rng.random_range(0..3u8) {
        0 => ExponentSeq::constant(rng.random_range(1.0..=max)).unwrap(),
        1 => {
            let len = rng.random_range(1..6usize);
            let values = (0..len).map(|_| rng.random_range(1.0..=max)).collect();
            ExponentSeq::list(values, rng.random_range(1.0..=max)).unwrap()
        }
        _ => {
            let c = rng.random_range(1.0..=(max - 0.5));
            let a = rng.random_range(0.0..=(max - c));
            ExponentSeq::harmonic(c, a).unwrap()
        }
    }
}

fn random_vector_with_norm(
    rng: &mut ChaCha8Rng,
    p: f64,
    max_support: u32,
    max_index: u32,
    norm: f64,
) -> FinSeq {
    let k = rng.random_range(1..=max_support);
    let mut entries = std::collections::BTreeMap::new();
    while entries.len() < k as usize {
        let n = rng.random_range(1..=max_index);
        entries.entry(n).or_insert_with(|| {
            Complex64::from_polar(
                10f64.powf(rng.random_range(-1.0..1.0)),
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
        });
    }
    let x = FinSeq::from_entries(p, entries).expect("valid entries");
    x.scaled(norm / x.norm_p())
}

const P_CHOICES: [f64; 3] = [1.0, 1.5, 2.0];

fn sandwich_violation(seed: u64, property: u64, samples: u64, small_branch: bool) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples {
        let mut rng = rng_for(seed, property, i);
        let p = P_CHOICES[(i % 3) as usize];
        let exponents = random_exponents(&mut rng, 4.0);
        let r = exponents.upper_bound();
        // target ||x||_p^p on the requested side of 1/2
        let norm_pow: f64 = if small_branch {
            rng.random_range(1e-6..=0.5)
        } else {
            0.5 * (1.0 + 10f64.powf(rng.random_range(-6.0..4.0)))
        };
        let norm = norm_pow.powf(1.0 / p);
        let x = random_vector_with_norm(&mut rng, p, 30, 120, norm);
        let h = WarpMap::new(exponents, p).unwrap();
        let got = h.forward(&x).unwrap().norm_p();
        let nx = x.norm_p();
        let (lower, upper) = if small_branch {
            (2f64.powf(-1.0 / p) * nx.powf(r), 2f64.powf(1.0 / p) * nx)
        } else {
            (2f64.powf(-r / p) * nx, 2f64.powf(r / p) * nx.powf(r))
        };
        let viol = ((lower - got) / lower.max(f64::MIN_POSITIVE))
            .max((got - upper) / upper.max(f64::MIN_POSITIVE));
        worst = worst.max(viol);
    }
    worst
}

/// Norm sandwich on the small branch `||x||_p^p <= 1/2`:
/// `2^(-1/p) ||x||^r <= ||h(x)|| <= 2^(1/p) ||x||`.
pub fn warp_norm_sandwich_small(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 10_000;
    let worst = sandwich_violation(seed, 3, SAMPLES, true);
    PropertyReport::new("warp_norm_sandwich_small", SAMPLES, 1e-12, worst)
}

/// Norm sandwich on the large branch `||x||_p^p > 1/2`:
/// `2^(-r/p) ||x|| <= ||h(x)|| <= 2^(r/p) ||x||^r`.
pub fn warp_norm_sandwich_large(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 10_000;
    let worst = sandwich_violation(seed, 4, SAMPLES, false);
    PropertyReport::new("warp_norm_sandwich_large", SAMPLES, 1e-12, worst)
}

/// Coordinatewise homogeneity `h(t x)_n = t^{s_n} h(x)_n` for `t >= 1`.
pub fn warp_scaling_identity(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 2_000;
    const TOL: f64 = 1e-10;
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 5, i);
        let p = P_CHOICES[(i % 3) as usize];
        let exponents = random_exponents(&mut rng, 4.0);
        let h = WarpMap::new(exponents.clone(), p).unwrap();
        let norm = 10f64.powf(rng.random_range(-2.0..2.0));
        let x = random_vector_with_norm(&mut rng, p, 20, 100, norm);
        let t: f64 = rng.random_range(1.0..10.0);
        let lhs = h.forward(&x.scaled(t)).unwrap();
        let rhs = h.forward(&x).unwrap();
        for (n, z) in lhs.iter() {
            let want = rhs.coordinate(n) * t.powf(exponents.value_at(n));
            let denom = want.norm().max(f64::MIN_POSITIVE);
            worst = worst.max((z - want).norm() / denom);
        }
    }
    PropertyReport::new("warp_scaling_identity", SAMPLES, TOL, worst)
}

/// `inverse(forward(x)) = x` within 1e-9 relative for supports up to 50 and
/// exponents up to 4.
pub fn warp_roundtrip(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 1_000;
    const TOL: f64 = 1e-9;
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 6, i);
        let p = P_CHOICES[(i % 3) as usize];
        let h = WarpMap::new(random_exponents(&mut rng, 4.0), p).unwrap();
        let norm = 10f64.powf(rng.random_range(-2.0..2.0));
        let x = random_vector_with_norm(&mut rng, p, 50, 200, norm);
        let back = h.inverse(&h.forward(&x).unwrap()).unwrap();
        worst = worst.max(back.distance(&x).unwrap() / x.norm_p());
    }
    PropertyReport::new("warp_roundtrip", SAMPLES, TOL, worst)
}

/// Scalar intertwining `f_w(|w| z) = w f_w(z)`, measured against
/// `1e-10 * (1 + |z|)`.
pub fn phase_warp_homogeneity(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 10_000;
    const TOL: f64 = 1e-10;
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 7, i);
        let modulus: f64 = if rng.random_bool(0.5) {
            rng.random_range(0.1..0.9)
        } else {
            rng.random_range(1.1..10.0)
        };
        let w = Complex64::from_polar(modulus, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
        let z = if i % 50 == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(
                10f64.powf(rng.random_range(-6.0..6.0)),
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
        };
        let f = PhaseWarp::new(w).unwrap();
        let lhs = f.apply(z * w.norm());
        let rhs = w * f.apply(z);
        worst = worst.max((lhs - rhs).norm() / (1.0 + z.norm()));
    }
    PropertyReport::new("phase_warp_homogeneity", SAMPLES, TOL, worst)
}

fn random_expanding_weights(rng: &mut ChaCha8Rng) -> WeightSeq {
    let polar = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        Complex64::from_polar(rng.random_range(lo..hi), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
    };
    match rng.random_range(0..3u8) {
        0 => WeightSeq::constant(polar(rng, 1.2, 4.0)).unwrap(),
        1 => {
            let len = rng.random_range(1..5usize);
            let values = (0..len).map(|_| polar(rng, 1.2, 4.0)).collect();
            WeightSeq::list(values, polar(rng, 1.2, 4.0)).unwrap()
        }
        _ => {
            let c = polar(rng, 1.5, 4.0);
            let a = polar(rng, 0.0, 0.2);
            WeightSeq::harmonic(c, a).unwrap()
        }
    }
}

/// Lifted intertwining `F_W(D_|W| x) = D_W(F_W x)` on random vectors.
pub fn rotation_diagonal_intertwine(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 1_000;
    const TOL: f64 = 1e-10;
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 8, i);
        let p = P_CHOICES[(i % 3) as usize];
        let w = random_expanding_weights(&mut rng);
        debug_assert!(w.unimodular_index().is_none());
        let norm = 10f64.powf(rng.random_range(-2.0..2.0));
        let x = random_vector_with_norm(&mut rng, p, 25, 100, norm);
        let lhs = rotation_forward(&w, &apply_modulus_diagonal(&w, &x)).unwrap();
        let rhs = apply_diagonal_checked(&w, p, &rotation_forward(&w, &x).unwrap());
        let denom = lhs.norm_p().max(rhs.norm_p()).max(f64::MIN_POSITIVE);
        worst = worst.max(lhs.distance(&rhs).unwrap() / denom);
    }
    PropertyReport::new("rotation_diagonal_intertwine", SAMPLES, TOL, worst)
}

fn apply_diagonal_checked(w: &WeightSeq, p: f64, x: &FinSeq) -> FinSeq {
    crate::lp::DiagonalOperator::new(w.clone(), p)
        .and_then(|d| d.apply(x))
        .expect("weights and vector share the space")
}

/// Dilation intertwining of the warp stage alone:
/// `h^S(rho x) = D_|W|(h^S(x))` for `s_n = log_rho |w_n|`, `rho = inf |w_n|`.
pub fn warp_dilation_intertwine(seed: u64) -> PropertyReport {
    const SAMPLES: u64 = 1_000;
    const TOL: f64 = 1e-9;
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 9, i);
        let p = P_CHOICES[(i % 3) as usize];
        let w = random_expanding_weights(&mut rng);
        let rho = w.inf_modulus();
        let h = WarpMap::new(ExponentSeq::from_weights(&w, rho).unwrap(), p).unwrap();
        let norm = 10f64.powf(rng.random_range(-2.0..2.0));
        let x = random_vector_with_norm(&mut rng, p, 25, 100, norm);
        let lhs = h.forward(&x.scaled(rho)).unwrap();
        let rhs = apply_modulus_diagonal(&w, &h.forward(&x).unwrap());
        let denom = lhs.norm_p().max(rhs.norm_p()).max(f64::MIN_POSITIVE);
        worst = worst.max(lhs.distance(&rhs).unwrap() / denom);
    }
    PropertyReport::new("warp_dilation_intertwine", SAMPLES, TOL, worst)
}

/// The coordinatewise power map `x_n -> (x_n/|x_n|) |x_n|^{s_n}` fails the
/// lower norm bound on flat unit vectors of growing support, while the
/// tail-sum warp honours the sandwich on the same family. Violation counts
/// family members where either half fails.
pub fn naive_power_map_unbounded() -> PropertyReport {
    let p = 1.0;
    let s = 2.0;
    let r = 2.0;
    let lower = 2f64.powf(-r / p); // = 1/4 at ||x|| = 1
    let upper = 2f64.powf(r / p);
    let h = WarpMap::new(ExponentSeq::constant(s).unwrap(), p).unwrap();
    let family: Vec<u32> = vec![8, 16, 32, 64, 128];
    let mut failures = 0u64;
    for m in &family {
        let x = FinSeq::from_entries(
            p,
            (1..=*m).map(|n| (n, Complex64::new(1.0 / *m as f64, 0.0))),
        )
        .unwrap();
        // the naive image norm is sum of |x_n|^s = m^(1-s)
        let naive_norm: f64 = x.iter().map(|(_, z)| z.norm().powf(s)).sum();
        let warp_norm = h.forward(&x).unwrap().norm_p();
        let naive_violates = naive_norm < lower;
        let warp_holds = warp_norm >= lower - 1e-12 && warp_norm <= upper + 1e-12;
        if !(naive_violates && warp_holds) {
            failures += 1;
        }
    }
    PropertyReport::new("naive_power_map_unbounded", family.len() as u64, 0.0, failures as f64)
}

/// Stable kernel versus the extended-precision reference, including
/// near-cancelling inputs.
pub fn power_diff_vs_reference(seed: u64, digits: u32) -> PropertyReport {
    const SAMPLES: u64 = 300;
    const TOL: f64 = 1e-13;
    let mut hp = HighPrecision::new(digits);
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 10, i);
        let t_hi: f64 = 10f64.powf(rng.random_range(-6.0..3.0));
        let t_lo = if rng.random_bool(0.5) {
            t_hi * (1.0 - 10f64.powf(rng.random_range(-14.0..-8.0)))
        } else {
            t_hi * rng.random_range(0.0..1.0)
        };
        let s: f64 = rng.random_range(1.0..6.0);
        let got = stable_power_diff(t_hi, t_lo, s).unwrap();
        let want = hp.power_diff(t_hi, t_lo, s);
        if want != 0.0 {
            worst = worst.max((got - want).abs() / want.abs());
        } else {
            worst = worst.max(got.abs());
        }
    }
    PropertyReport::new("power_diff_vs_reference", SAMPLES, TOL, worst)
}

/// Forward warp coordinate moduli versus the extended-precision reference.
pub fn warp_vs_reference(seed: u64, digits: u32) -> PropertyReport {
    const SAMPLES: u64 = 50;
    const TOL: f64 = 1e-12;
    let mut hp = HighPrecision::new(digits);
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut rng = rng_for(seed, 11, i);
        let p = P_CHOICES[(i % 3) as usize];
        let h = WarpMap::new(random_exponents(&mut rng, 4.0), p).unwrap();
        let norm = 10f64.powf(rng.random_range(-2.0..2.0));
        let x = random_vector_with_norm(&mut rng, p, 15, 60, norm);
        let y = h.forward(&x).unwrap();
        for (n, want) in hp.warp_moduli(&h, &x) {
            let got = y.coordinate(n).norm();
            worst = worst.max((got - want).abs() / want.max(f64::MIN_POSITIVE));
        }
    }
    PropertyReport::new("warp_vs_reference", SAMPLES, TOL, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let report = run_selftest(&SelftestConfig { seed: 7, precision: None });
        for p in &report.properties {
            assert!(p.pass, "{}: violation {} > {}", p.name, p.max_violation, p.tolerance);
        }
        assert!(report.pass);
        assert_eq!(report.properties.len(), 10);
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_selftest(&SelftestConfig { seed: 42, precision: None });
        let b = run_selftest(&SelftestConfig { seed: 42, precision: None });
        assert_eq!(a, b);
    }

    #[test]
    fn precision_mode_adds_reference_checks() {
        let report = run_selftest(&SelftestConfig { seed: 7, precision: Some(40) });
        assert_eq!(report.properties.len(), 12);
        assert!(report.pass, "{report:?}");
    }
}
