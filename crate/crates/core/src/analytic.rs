//! Closed-form limits and small-chain formulas.
//!
//! These are independent of the mode sums in [`crate::dynamics`] and serve as
//! reference curves for tests and the CLI. Approximate forms return their
//! validity diagnostic next to the value; none of them extrapolates silently.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{primed_labels, HalfInteger};
use crate::measures::PairType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("{name} = {value} is outside the domain of this formula")]
    Domain { name: &'static str, value: f64 },
    #[error("mode {0} is not in the primed set for n = {1}")]
    NotPrimed(HalfInteger, usize),
}

fn domain(name: &'static str, value: f64) -> AnalyticError {
    AnalyticError::Domain { name, value }
}

fn finite(name: &'static str, value: f64) -> Result<f64, AnalyticError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(name, value))
    }
}

/// Which small chain a scaled field refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldScaling {
    /// `s = b/g`
    TwoSite,
    /// `s = (b - v/2)/g`
    ThreeSite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledField {
    pub s: f64,
    pub scaling: FieldScaling,
}

impl ScaledField {
    pub fn two_site(b: f64, g: f64) -> Result<Self, AnalyticError> {
        Ok(Self { s: finite("s", b / g)?, scaling: FieldScaling::TwoSite })
    }

    pub fn three_site(b: f64, v: f64, g: f64) -> Result<Self, AnalyticError> {
        Ok(Self { s: finite("s", (b - v / 2.0) / g)?, scaling: FieldScaling::ThreeSite })
    }

    pub fn c1_max(&self) -> f64 {
        match self.scaling {
            FieldScaling::TwoSite => c1max_n2(self.s),
            FieldScaling::ThreeSite => c1max_n3(self.s),
        }
    }

    /// For two sites the pair concurrence coincides with `C₁`.
    pub fn c2_max(&self) -> f64 {
        match self.scaling {
            FieldScaling::TwoSite => c1max_n2(self.s),
            FieldScaling::ThreeSite => c2max_n3(self.s),
        }
    }
}

pub fn c1max_n2(s: f64) -> f64 {
    let a = s.abs();
    if a <= 1.0 {
        1.0
    } else {
        2.0 * a / (s * s + 1.0)
    }
}

pub fn c1max_n3(s: f64) -> f64 {
    if s.abs() <= 0.5 {
        1.0
    } else {
        (2.0 * s * s + 0.5).sqrt() / (s * s + 0.75)
    }
}

/// Pair concurrence of the three-site chain as a function of the flip probability.
pub fn c2_of_p_n3(p: f64) -> Result<(f64, PairType), AnalyticError> {
    if !(0.0..=2.0 / 3.0 + 1e-12).contains(&p) {
        return Err(domain("p", p));
    }
    let p = p.min(2.0 / 3.0);
    let diff = (p * (2.0 - 3.0 * p)).sqrt() - p;
    let kind = if diff > 0.0 {
        PairType::I
    } else if diff < 0.0 {
        PairType::II
    } else {
        PairType::None
    };
    Ok((diff.abs(), kind))
}

/// `√3 - 3/2`: edge of the type II peak around `b = v/2`.
pub fn s_critical() -> f64 {
    3f64.sqrt() - 1.5
}

pub fn c2max_n3(s: f64) -> f64 {
    let a = s.abs();
    let denom = s * s + 0.75;
    if a <= s_critical() {
        (0.5 - a) / denom
    } else if a <= 1.5 {
        1.0 / 3.0
    } else {
        (a - 0.5) / denom
    }
}

/// Dominant entanglement type of the three-site maximum.
pub fn c2max_n3_type(s: f64) -> PairType {
    if s.abs() < s_critical() {
        PairType::II
    } else {
        PairType::I
    }
}

fn primed_angle(n: usize, k: HalfInteger) -> Result<f64, AnalyticError> {
    if primed_labels(n).contains(&k) {
        Ok(k.angle(n))
    } else {
        Err(AnalyticError::NotPrimed(k, n))
    }
}

/// Weak-anisotropy limit of `C₁^m` at a resonance field.
pub fn resonance_limit_c1(n: usize) -> f64 {
    let p = 2.0 / n as f64;
    if p >= 0.5 {
        1.0
    } else {
        2.0 * (p * (1.0 - p)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeIILimit {
    pub value: f64,
    /// Largest `sin² ω_k` for which the limit is positive.
    pub sin2_bound: f64,
    pub positive: bool,
}

/// Weak-anisotropy type II pair maximum at `b = b_k`, reached when `sin² λ_k t = 1`.
pub fn resonance_limit_c2_type_ii(n: usize, k: HalfInteger) -> Result<TypeIILimit, AnalyticError> {
    let omega = primed_angle(n, k)?;
    let nf = n as f64;
    let (sin, cos) = omega.sin_cos();
    let raw = 4.0 / nf * (cos.abs() - sin * (1.0 - 4.0 / nf + 4.0 / (nf * nf) * sin * sin).sqrt());
    let q = 1.0 - 2.0 / nf;
    let sin2_bound = 1.0 / (q + (q * q + 4.0 / (nf * nf)).sqrt());
    Ok(TypeIILimit { value: raw.max(0.0), sin2_bound, positive: sin * sin <= sin2_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeILimit {
    pub value: f64,
    /// `cos 2λ_k t` at the maximizing times.
    pub cos_2lt: f64,
}

/// Weak-anisotropy type I pair maximum at `b = b_k`.
pub fn resonance_limit_c2_type_i(n: usize, k: HalfInteger) -> Result<TypeILimit, AnalyticError> {
    let omega = primed_angle(n, k)?;
    let nf = n as f64;
    let s2 = omega.sin().powi(2);
    let a = 1.0 - 2.0 / nf * s2;
    let r = (a * a + s2).sqrt();
    Ok(TypeILimit { value: 2.0 / nf * (r - a), cos_2lt: a / r })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicLimit {
    pub p: f64,
    pub beta: f64,
    pub alpha_abs: f64,
    /// First maximum of `p`, `π/(2 g sin ω_k)`.
    pub t_first_max: f64,
}

/// Purely harmonic single-mode evolution at `b = b_k` for `g → 0`.
pub fn harmonic_limit_series(n: usize, k: HalfInteger, g: f64, t: f64) -> Result<HarmonicLimit, AnalyticError> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(domain("g", g));
    }
    finite("t", t)?;
    let omega = primed_angle(n, k)?;
    let nf = n as f64;
    let (sin, cos) = omega.sin_cos();
    let lambda = g * sin;
    let s2 = (lambda * t).sin().powi(2);
    Ok(HarmonicLimit {
        p: 2.0 / nf * s2,
        beta: 2.0 / nf * cos * s2,
        alpha_abs: (sin * (2.0 * lambda * t).sin()).abs() / nf,
        t_first_max: PI / (2.0 * lambda),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicPoint {
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Strictly periodic evolution at `g = v`, `b = 0`, valid for `n ≥ 4`.
pub fn isotropic_zero_field(v: f64, t: f64) -> Result<IsotropicPoint, AnalyticError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(domain("v", v));
    }
    finite("t", t)?;
    let (sin, cos) = (v * t).sin_cos();
    let s = sin.abs();
    Ok(IsotropicPoint { p: 0.5 * sin * sin, c1: s * (2.0 - sin * sin).sqrt(), c2: s * (cos.abs() - s / 2.0).max(0.0) })
}

/// First time at which the periodic pair concurrence peaks (`cos 2vt = 1/√5`).
pub fn isotropic_c2_peak_time(v: f64) -> f64 {
    (1.0 / 5f64.sqrt()).acos() / (2.0 * v)
}

/// `(√5 - 1)/4`.
pub fn isotropic_c2_peak() -> f64 {
    (5f64.sqrt() - 1.0) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortTime {
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
    /// `λ_max t`; the expansion is meaningful only while this is small.
    pub validity: f64,
}

/// Low-order expansions around `t = 0`, valid for `n ≥ 5`.
///
/// The `C₁` series follows from composing `2√(p(1-p))` with the `p` series,
/// which gives the coefficient `(v² + 4b² + 9g²)/24`.
pub fn short_time_series(n: usize, b: f64, v: f64, g: f64, t: f64) -> Result<ShortTime, AnalyticError> {
    if n < 5 {
        return Err(domain("n", n as f64));
    }
    for (name, x) in [("b", b), ("v", v), ("g", g), ("t", t)] {
        finite(name, x)?;
    }
    let (b2, v2, g2, t2) = (b * b, v * v, g * g, t * t);
    let gt = g * t;
    let p = 0.5 * g2 * t2 * (1.0 - t2 / 12.0 * (v2 + 4.0 * b2 + 3.0 * g2));
    let c1 = SQRT_2 * gt * (1.0 - t2 / 24.0 * (v2 + 4.0 * b2 + 9.0 * g2));
    let c2 = gt * (1.0 - gt / 2.0 - t2 / 6.0 * (v2 + b2 + 3.0 * g2) + gt * t2 / 12.0 * (2.0 * b2 + 3.0 * g2 - v2));
    // λ_k ≤ |b| + |v| + |g| for every mode
    let validity = (b.abs() + v.abs() + g.abs()) * t.abs();
    Ok(ShortTime { p, c1, c2, validity })
}

/// Field magnitudes `|b|/v` where `λ_{1/2} = 2 λ_{3/2}` for four sites.
///
/// There the largest `p` reached in time is only `4/5` of the envelope.
pub fn dip_fields_n4(gamma: f64) -> Result<(f64, f64), AnalyticError> {
    if !(0.0..4.0 / 3.0).contains(&gamma) {
        return Err(domain("gamma", gamma));
    }
    let root = (16.0 - 9.0 * gamma * gamma).sqrt();
    Ok((SQRT_2 * (5.0 - root) / 6.0, SQRT_2 * (5.0 + root) / 6.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LargeField {
    pub c1_max: f64,
    pub c2_max: f64,
    /// `max(|v|, g)/|b|`; first-order accuracy needs this small.
    pub validity: f64,
}

/// First-order maxima for `|b| ≫ v, g`, independent of `n ≥ 3`.
pub fn asymptotic_large_field(n: usize, b: f64, v: f64, g: f64) -> Result<LargeField, AnalyticError> {
    if n < 3 {
        return Err(domain("n", n as f64));
    }
    if b == 0.0 || !b.is_finite() {
        return Err(domain("b", b));
    }
    let ratio = g / b.abs();
    Ok(LargeField { c1_max: SQRT_2 * ratio, c2_max: ratio, validity: v.abs().max(g) / b.abs() })
}
