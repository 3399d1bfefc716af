//! Chain parameters, half-integer momentum modes and the quasiparticle
//! spectrum of the cyclic XY chain in a transverse field.
//!
//! Within the positive spin-parity sector the Jordan-Wigner fermions obey
//! antiperiodic boundary conditions, so the allowed momenta are
//! `ω_k = 2πk/n` with `k` half-integer. Each mode carries the quasiparticle
//! energy
//!
//! ```text
//! λ_k = sqrt((b - v cos ω_k)² + g² sin² ω_k)
//! ```
//!
//! and the BCS occupation coefficients `u_k² , v_k² = [λ_k ± (b - v cos ω_k)] / (2λ_k)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("chain needs at least two sites, got n = {0}")]
    TooFewSites(usize),
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("pairing strength g must be positive for this operation")]
    ZeroPairing,
    #[error("k = {0} is not in the positive half-integer range of an n = {1} chain")]
    NotPrimed(HalfInteger, usize),
}

/// Physical instance `(n, b, v, g)`.
///
/// `b` is the transverse field, `v = (v_x + v_y)/2` the hopping strength and
/// `g = (v_x - v_y)/2` the pairing strength. Validated instances have
/// `v ≥ 0` and `g ≥ 0`; the only way to obtain `v < 0` is through
/// [`symmetry_partner`] for odd chains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    n: usize,
    b: f64,
    v: f64,
    g: f64,
}

impl ChainParams {
    pub fn new(n: usize, b: f64, v: f64, g: f64) -> Result<Self, ChainError> {
        if n < 2 {
            return Err(ChainError::TooFewSites(n));
        }
        for (name, value) in [("b", b), ("v", v), ("g", g)] {
            if !value.is_finite() {
                return Err(ChainError::NonFinite { name, value });
            }
        }
        for (name, value) in [("v", v), ("g", g)] {
            if value < 0.0 {
                return Err(ChainError::Negative { name, value });
            }
        }
        Ok(Self { n, b, v, g })
    }

    /// Builds an instance from the anisotropy `γ = g/v` instead of `g`.
    pub fn with_anisotropy(n: usize, b: f64, v: f64, gamma: f64) -> Result<Self, ChainError> {
        if !gamma.is_finite() {
            return Err(ChainError::NonFinite { name: "gamma", value: gamma });
        }
        if gamma < 0.0 {
            return Err(ChainError::Negative { name: "gamma", value: gamma });
        }
        Self::new(n, b, v, gamma * v)
    }

    /// Same chain, different field.
    pub fn with_field(&self, b: f64) -> Result<Self, ChainError> {
        if !b.is_finite() {
            return Err(ChainError::NonFinite { name: "b", value: b });
        }
        Ok(Self { b, ..*self })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Anisotropy `g/v`; undefined for `v = 0`.
    pub fn gamma(&self) -> Option<f64> {
        (self.v > 0.0).then(|| self.g / self.v)
    }
}

impl fmt::Display for ChainParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} b={} v={} g={}", self.n, self.b, self.v, self.g)
    }
}

/// Validating constructor, the entry point used by the CLI.
pub fn make_params(n: usize, b: f64, v: f64, g: f64) -> Result<ChainParams, ChainError> {
    ChainParams::new(n, b, v, g)
}

/// Half-integer stored exactly as its double `2k` (always odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInteger(i32);

impl HalfInteger {
    /// `k = twice / 2`; `twice` must be odd.
    pub fn from_twice(twice: i32) -> Option<Self> {
        (twice.rem_euclid(2) == 1).then_some(Self(twice))
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// `ω_k = 2πk/n`, evaluated as `π(2k)/n`.
    pub fn angle(self, n: usize) -> f64 {
        PI * f64::from(self.0) / n as f64
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// BCS coefficients of a mode with nonzero quasiparticle energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcsCoefficients {
    pub u2: f64,
    pub v2: f64,
    /// `|u_k v_k| = g |sin ω_k| / (2λ_k)`.
    pub uv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: HalfInteger,
    pub omega: f64,
    /// `b - v cos ω_k`.
    pub detuning: f64,
    pub lambda: f64,
    /// `None` flags a degenerate mode (`λ_k = 0`), possible only for `g = 0`
    /// at `b = v cos ω_k`, or for the unpaired `ω = π` mode at `b = -v`.
    pub bcs: Option<BcsCoefficients>,
}

impl Mode {
    fn new(params: &ChainParams, k: HalfInteger) -> Self {
        let omega = k.angle(params.n);
        let (sin, cos) = omega.sin_cos();
        let detuning = params.b - params.v * cos;
        let pairing = params.g * sin;
        let lambda = detuning.hypot(pairing);
        let bcs = (lambda > 0.0).then(|| BcsCoefficients {
            u2: (lambda + detuning) / (2.0 * lambda),
            v2: (lambda - detuning) / (2.0 * lambda),
            uv: pairing.abs() / (2.0 * lambda),
        });
        Self { k, omega, detuning, lambda, bcs }
    }

    pub fn is_degenerate(&self) -> bool {
        self.bcs.is_none()
    }

    /// Modes with `sin ω = 0` have no `-k` partner (only `k = n/2`, odd `n`).
    pub fn is_unpaired(&self) -> bool {
        self.omega.sin().abs() < 1e-12
    }
}

/// All `n` modes, ordered by ascending `k`, plus the primed subset
/// `k = 1/2, …, [n/2] - 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub full: Vec<Mode>,
    pub positive: Vec<Mode>,
}

impl ModeSpectrum {
    pub fn max_lambda(&self) -> f64 {
        self.full.iter().map(|m| m.lambda).fold(0.0, f64::max)
    }
}

/// Doubled labels `2k` of all modes of an `n`-site chain, ascending.
pub fn mode_labels(n: usize) -> Vec<HalfInteger> {
    let n = n as i32;
    let (lo, hi) = if n % 2 == 0 { (-(n - 1), n - 1) } else { (-n + 2, n) };
    (lo..=hi).step_by(2).map(HalfInteger).collect()
}

/// Doubled labels of the primed subset.
pub fn primed_labels(n: usize) -> Vec<HalfInteger> {
    let half = (n / 2) as i32;
    (0..half).map(|i| HalfInteger(2 * i + 1)).collect()
}

pub fn mode_spectrum(params: &ChainParams) -> ModeSpectrum {
    let full: Vec<Mode> = mode_labels(params.n).into_iter().map(|k| Mode::new(params, k)).collect();
    let positive = primed_labels(params.n).into_iter().map(|k| Mode::new(params, k)).collect();
    ModeSpectrum { full, positive }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub k: HalfInteger,
    pub field: f64,
}

/// Fields `b_k = v cos ω_k` at which the primed quasiparticle energies are
/// minimal, sorted by descending field.
pub fn resonance_fields(params: &ChainParams) -> Vec<Resonance> {
    let mut out: Vec<Resonance> = primed_labels(params.n)
        .into_iter()
        .map(|k| Resonance { k, field: params.v * k.angle(params.n).cos() })
        .collect();
    out.sort_by(|a, b| b.field.total_cmp(&a.field));
    out
}

/// Half-width at half-maximum `g sin ω_k` of the resonant Lorentzian in `p_m`.
pub fn peak_width_estimate(params: &ChainParams, k: HalfInteger) -> Result<f64, ChainError> {
    if params.g <= 0.0 {
        return Err(ChainError::ZeroPairing);
    }
    if !primed_labels(params.n).contains(&k) {
        return Err(ChainError::NotPrimed(k, params.n));
    }
    Ok(params.g * k.angle(params.n).sin())
}

/// Instance with identical entanglement dynamics.
///
/// Even chains: `(n, -b, v, g)`, the sublattice rotation `s^{x,y}_j → (-1)^j s^{x,y}_j`
/// flips the sign of `v` and time reversal then flips `b`. Odd chains have no
/// such rotation; their partner is `(n, -b, -v, g)`, which leaves the
/// `v ≥ 0` convention and is used to drive symmetry tests only.
pub fn symmetry_partner(params: &ChainParams) -> ChainParams {
    if params.n.is_multiple_of(2) {
        ChainParams { b: -params.b, ..*params }
    } else {
        ChainParams { b: -params.b, v: -params.v, ..*params }
    }
}
