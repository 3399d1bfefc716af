//! Closed-form time dependence of the one- and two-site observables.
//!
//! Starting from the fully aligned state (the fermion vacuum), every
//! primed mode pair `(k, -k)` oscillates independently with frequency
//! `2λ_k`. The spin-flip probability and the adjacent-pair correlators are
//! sums over primed modes:
//!
//! ```text
//! p(t) = (2/n) Σ' g² sin²ω_k / λ_k² · sin² λ_k t
//! β(t) = (2/n) Σ' g² cos ω_k sin²ω_k / λ_k² · sin² λ_k t
//! α(t) = (2/n) Σ' g sin²ω_k / λ_k · sin λ_k t · [(b - v cos ω_k)/λ_k · sin λ_k t - i cos λ_k t]
//! ```
//!
//! and Wick's theorem gives the doubly occupied pair probability
//! `p₁ = p² - β² + |α|²`. Cost is `O(n)` per time point.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{mode_spectrum, ChainParams, ModeSpectrum};

/// Roundoff allowance for the `[0, 1]` box of probabilities.
pub const CLAMP_TOL: f64 = 1e-10;
/// Allowance for the positivity bounds `|α| ≤ sqrt(p₁p₃)`, `|β| ≤ p₂`.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("{quantity} = {value:e} violates its bound at t = {t} (implementation bug)")]
    ConstraintViolation { quantity: &'static str, value: f64, t: f64 },
    #[error("time must be finite and non-negative, got {0}")]
    BadTime(f64),
    #[error("invalid time grid: {0}")]
    BadGrid(String),
}

/// Fermionic averages defining the one- and two-site reduced densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairContractions {
    pub t: f64,
    pub p: f64,
    /// `⟨s⁺_j s⁻_{j+1}⟩`, real.
    pub beta: f64,
    /// `⟨s⁺_j s⁺_{j+1}⟩`.
    pub alpha: Complex64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

/// Uniform time grid `t_i = i·dt`, `i = 0 … samples-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub dt: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, dt: f64) -> Result<Self, DynamicsError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DynamicsError::BadGrid(format!("dt must be positive, got {dt}")));
        }
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(DynamicsError::BadGrid(format!("t_max must be non-negative, got {t_max}")));
        }
        // the small slack keeps t_max itself on the grid when t_max/dt is integral
        let samples = (t_max / dt + 1e-9).floor() as usize + 1;
        Ok(Self { t_max, dt, samples })
    }

    /// Default resolution: `dt = min(0.05/λ_max, 0.01/v)`.
    pub fn default_for(params: &ChainParams, t_max: f64) -> Result<Self, DynamicsError> {
        let lambda_max = mode_spectrum(params).max_lambda();
        let mut dt = f64::INFINITY;
        if lambda_max > 0.0 {
            dt = 0.05 / lambda_max;
        }
        if params.v() > 0.0 {
            dt = dt.min(0.01 / params.v());
        }
        if !dt.is_finite() {
            dt = t_max.max(1.0);
        }
        Self::new(t_max, dt)
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(|i| self.time(i))
    }
}

#[derive(Debug, Clone, Copy)]
struct ModeTerm {
    lambda: f64,
    /// `g² sin²ω / λ²`
    weight: f64,
    cos_omega: f64,
    /// `g sin²ω / λ`
    pair_amplitude: f64,
    /// `(b - v cos ω)/λ`
    detuning_ratio: f64,
}

/// Precomputed per-mode coefficients of an instance.
#[derive(Debug, Clone)]
pub struct FreeFermionEvolution {
    n: usize,
    terms: Vec<ModeTerm>,
}

impl FreeFermionEvolution {
    pub fn new(params: &ChainParams, spectrum: &ModeSpectrum) -> Self {
        let g = params.g();
        let terms = spectrum
            .positive
            .iter()
            // degenerate modes carry g² sin²ω = 0 in every numerator
            .filter(|m| m.lambda > 0.0 && g > 0.0)
            .map(|m| {
                let (sin, cos) = m.omega.sin_cos();
                let pairing = g * sin;
                let amp = pairing / m.lambda;
                ModeTerm {
                    lambda: m.lambda,
                    weight: amp * amp,
                    cos_omega: cos,
                    pair_amplitude: amp * sin,
                    detuning_ratio: m.detuning / m.lambda,
                }
            })
            .collect();
        Self { n: params.n(), terms }
    }

    pub fn from_params(params: &ChainParams) -> Self {
        Self::new(params, &mode_spectrum(params))
    }

    fn prefactor(&self) -> f64 {
        2.0 / self.n as f64
    }

    /// Raw `p(t)`, not clamped.
    fn raw_p(&self, t: f64) -> f64 {
        let sum: f64 = self
            .terms
            .iter()
            .map(|m| {
                let s = (m.lambda * t).sin();
                m.weight * s * s
            })
            .sum();
        self.prefactor() * sum
    }

    pub fn spin_flip_probability(&self, t: f64) -> f64 {
        let p = self.raw_p(t);
        debug_assert!(p > -CLAMP_TOL && p < 1.0 + CLAMP_TOL, "p = {p}");
        p.clamp(0.0, 1.0)
    }

    /// `(p, β, α)` without the Wick step.
    fn raw_correlators(&self, t: f64) -> (f64, f64, Complex64) {
        let (mut p, mut beta, mut re, mut im) = (0.0, 0.0, 0.0, 0.0);
        for m in &self.terms {
            let (s, c) = (m.lambda * t).sin_cos();
            let s2 = s * s;
            p += m.weight * s2;
            beta += m.weight * m.cos_omega * s2;
            re += m.pair_amplitude * m.detuning_ratio * s2;
            im -= m.pair_amplitude * s * c;
        }
        let f = self.prefactor();
        (f * p, f * beta, Complex64::new(f * re, f * im))
    }

    pub fn pair_contractions(&self, t: f64) -> Result<PairContractions, DynamicsError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(DynamicsError::BadTime(t));
        }
        let (p, beta, alpha) = self.raw_correlators(t);
        let p = clamp_unit("p", p, t)?;
        let p1 = clamp_unit("p1", p * p - beta * beta + alpha.norm_sqr(), t)?;
        let p2 = clamp_unit("p2", p - p1, t)?;
        let p3 = clamp_unit("p3", 1.0 - 2.0 * p + p1, t)?;
        let alpha_excess = alpha.norm() - (p1 * p3).sqrt();
        if alpha_excess > POSITIVITY_TOL {
            return Err(DynamicsError::ConstraintViolation {
                quantity: "|alpha| - sqrt(p1 p3)",
                value: alpha_excess,
                t,
            });
        }
        let beta_excess = beta.abs() - p2;
        if beta_excess > POSITIVITY_TOL {
            return Err(DynamicsError::ConstraintViolation { quantity: "|beta| - p2", value: beta_excess, t });
        }
        Ok(PairContractions { t, p, beta, alpha, p1, p2, p3 })
    }

    /// Upper envelope obtained by setting every `sin² λ_k t` to one.
    pub fn envelope_pm(&self) -> f64 {
        (self.prefactor() * self.terms.iter().map(|m| m.weight).sum::<f64>()).min(1.0)
    }

    pub fn evolve(&self, grid: &TimeGrid) -> Result<Vec<PairContractions>, DynamicsError> {
        (0..grid.samples).into_par_iter().map(|i| self.pair_contractions(grid.time(i))).collect()
    }
}

fn clamp_unit(quantity: &'static str, value: f64, t: f64) -> Result<f64, DynamicsError> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&value) {
        return Err(DynamicsError::ConstraintViolation { quantity, value, t });
    }
    Ok(value.clamp(0.0, 1.0))
}

pub fn spin_flip_probability(params: &ChainParams, spectrum: &ModeSpectrum, t: f64) -> f64 {
    FreeFermionEvolution::new(params, spectrum).spin_flip_probability(t)
}

pub fn pair_contractions(
    params: &ChainParams,
    spectrum: &ModeSpectrum,
    t: f64,
) -> Result<PairContractions, DynamicsError> {
    FreeFermionEvolution::new(params, spectrum).pair_contractions(t)
}

/// `p_m = (2/n) Σ' g² sin²ω_k / ((b - v cos ω_k)² + g² sin²ω_k)`.
pub fn envelope_pm(params: &ChainParams, spectrum: &ModeSpectrum) -> f64 {
    FreeFermionEvolution::new(params, spectrum).envelope_pm()
}

/// Contractions at every grid time; results do not depend on how the
/// work is split across threads.
pub fn evolve_series(params: &ChainParams, grid: &TimeGrid) -> Result<Vec<PairContractions>, DynamicsError> {
    FreeFermionEvolution::from_params(params).evolve(grid)
}
