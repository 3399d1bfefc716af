//! Field sweeps of the time-window maxima and resonance peak detection.
//!
//! For every field on the grid the chain is evolved over `[0, t_max]` and the
//! largest sampled `C₁`, type I `C₂`, type II `C₂` and `p` are recorded next
//! to the envelope `p_m` and the `C₁` it implies. Sampled maxima of a
//! quasiperiodic signal undershoot the supremum; both numbers are kept and
//! never blended.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{mode_spectrum, peak_width_estimate, resonance_fields, ChainError, ChainParams, HalfInteger};
use crate::dynamics::{DynamicsError, FreeFermionEvolution, TimeGrid};
use crate::measures::{c1_from_p, c2_x_state, MeasureError, PairDensityX, PairType};

pub const DEFAULT_B_STEPS: usize = 601;
pub const DEFAULT_PROMINENCE: f64 = 0.02;
/// Upper bound on `λ_max·dt`.
pub const MAX_PHASE_STEP: f64 = 0.05;
/// Minimum grid points per resonance width before a warning is raised.
pub const POINTS_PER_WIDTH: f64 = 5.0;
/// Maxima this close to `C₁ = 1` are saturated plateaus, located at their center.
pub const SATURATION_TOL: f64 = 1e-3;
/// Allowance for `C₂ ≤ C₁` at each sample.
pub const ORDER_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("invalid scan configuration: {0}")]
    Config(String),
    #[error("invariant violated at b = {b}, t = {t}: {what}")]
    Invariant { b: f64, t: f64, what: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Supplies `n`, `v` and `g`; its field is ignored.
    pub template: ChainParams,
    pub b_min: f64,
    pub b_max: f64,
    pub b_steps: usize,
    pub t_max: f64,
    /// Upper bound on the time step; each field further caps it at `0.05/λ_max`.
    pub dt: Option<f64>,
    pub prominence: f64,
}

impl ScanConfig {
    pub fn new(template: ChainParams, b_min: f64, b_max: f64, b_steps: usize, t_max: f64) -> Result<Self, ScanError> {
        let cfg = Self { template, b_min, b_max, b_steps, t_max, dt: None, prominence: DEFAULT_PROMINENCE };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Window `vt ≤ 40` for `n ≤ 8` and `vt ≤ 180` beyond, 601 fields in `[-2v, 2v]`.
    pub fn with_defaults(template: ChainParams) -> Result<Self, ScanError> {
        let v = if template.v() > 0.0 { template.v() } else { 1.0 };
        let vt = if template.n() <= 8 { 40.0 } else { 180.0 };
        Self::new(template, -2.0 * v, 2.0 * v, DEFAULT_B_STEPS, vt / v)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if !(self.b_min.is_finite() && self.b_max.is_finite() && self.b_min < self.b_max) {
            return Err(ScanError::Config(format!("need b_min < b_max, got [{}, {}]", self.b_min, self.b_max)));
        }
        if self.b_steps < 2 {
            return Err(ScanError::Config(format!("need at least 2 field points, got {}", self.b_steps)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(ScanError::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(ScanError::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.prominence >= 0.0 && self.prominence.is_finite()) {
            return Err(ScanError::Config(format!("prominence must be non-negative, got {}", self.prominence)));
        }
        Ok(())
    }

    pub fn b_step(&self) -> f64 {
        (self.b_max - self.b_min) / (self.b_steps - 1) as f64
    }

    pub fn fields(&self) -> Vec<f64> {
        let step = self.b_step();
        (0..self.b_steps)
            .map(|i| if i + 1 == self.b_steps { self.b_max } else { self.b_min + i as f64 * step })
            .collect()
    }

    /// Time grid used at one field.
    pub fn time_grid(&self, params: &ChainParams) -> Result<TimeGrid, ScanError> {
        let lambda_max = mode_spectrum(params).max_lambda();
        let mut dt = self.dt.unwrap_or(f64::INFINITY);
        if lambda_max > 0.0 {
            dt = dt.min(MAX_PHASE_STEP / lambda_max);
        }
        if !dt.is_finite() {
            dt = self.t_max;
        }
        Ok(TimeGrid::new(self.t_max, dt)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub b: f64,
    pub c1m_sampled: f64,
    pub c1m_envelope: f64,
    pub c2m_i: f64,
    pub c2m_ii: f64,
    pub p_m: f64,
    pub p_max_sampled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Refined location.
    pub b_peak: f64,
    pub height: f64,
    pub prominence: f64,
    /// Full width at half prominence, measured on the grid.
    pub width_estimate: f64,
    pub matched_k: Option<HalfInteger>,
    /// Resonance field of the matched mode.
    pub matched_field: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub config: ScanConfig,
    pub records: Vec<ScanRecord>,
    pub peaks: Vec<Peak>,
    pub warnings: Vec<String>,
}

/// Maxima over the time window at a single field.
pub fn scan_point(config: &ScanConfig, b: f64) -> Result<ScanRecord, ScanError> {
    let params = config.template.with_field(b)?;
    let evolution = FreeFermionEvolution::from_params(&params);
    let grid = config.time_grid(&params)?;
    let p_m = evolution.envelope_pm();
    let mut rec = ScanRecord {
        b,
        c1m_sampled: 0.0,
        c1m_envelope: if p_m >= 0.5 { 1.0 } else { c1_from_p(p_m)? },
        c2m_i: 0.0,
        c2m_ii: 0.0,
        p_m,
        p_max_sampled: 0.0,
    };
    for t in grid.times() {
        let c = evolution.pair_contractions(t)?;
        let c1 = c1_from_p(c.p)?;
        let (c2, kind) = c2_x_state(&PairDensityX::from(&c))?;
        if c2 > c1 + ORDER_TOL {
            return Err(ScanError::Invariant { b, t, what: format!("C2 = {c2} exceeds C1 = {c1}") });
        }
        rec.p_max_sampled = rec.p_max_sampled.max(c.p);
        rec.c1m_sampled = rec.c1m_sampled.max(c1);
        match kind {
            PairType::I => rec.c2m_i = rec.c2m_i.max(c2),
            PairType::II => rec.c2m_ii = rec.c2m_ii.max(c2),
            PairType::None => {}
        }
    }
    Ok(rec)
}

/// Sweeps the configured field grid; fields run in parallel, records stay in grid order.
pub fn scan_field(config: &ScanConfig) -> Result<ScanResult, ScanError> {
    config.validate()?;
    let records = config.fields().into_par_iter().map(|b| scan_point(config, b)).collect::<Result<Vec<_>, _>>()?;
    let mut result = ScanResult { config: *config, records, peaks: Vec::new(), warnings: Vec::new() };
    let (peaks, warnings) = detect_peaks(&result, &config.template, config.prominence)?;
    result.peaks = peaks;
    result.warnings = warnings;
    Ok(result)
}

/// Local maxima of `C₁^m` (sampled) above `prominence`, matched to resonance fields.
///
/// Flat runs count as one maximum located at their center, and so do
/// saturated plateaus. Other isolated maxima are refined by a parabola
/// through three grid points.
///
/// A peak is kept only if the envelope `C₁` also has a maximum within its
/// half-prominence run. Sampled maxima dip where the quasiparticle energies
/// are commensurate, and the shoulders between such dips are not resonances.
pub fn detect_peaks(
    result: &ScanResult,
    template: &ChainParams,
    prominence: f64,
) -> Result<(Vec<Peak>, Vec<String>), ScanError> {
    let b: Vec<f64> = result.records.iter().map(|r| r.b).collect();
    let y: Vec<f64> = result.records.iter().map(|r| r.c1m_sampled).collect();
    let envelope: Vec<f64> = result.records.iter().map(|r| r.c1m_envelope).collect();
    let mut warnings = Vec::new();
    if b.len() < 3 {
        return Ok((Vec::new(), warnings));
    }
    let step = (b[b.len() - 1] - b[0]) / (b.len() - 1) as f64;
    let resonances = resonance_fields(template);
    if template.g() > 0.0 {
        for r in &resonances {
            if r.field < b[0] || r.field > b[b.len() - 1] {
                continue;
            }
            let width = peak_width_estimate(template, r.k)?;
            if step > width / POINTS_PER_WIDTH {
                warnings.push(format!(
                    "field step {step:.3e} exceeds width/{POINTS_PER_WIDTH} = {:.3e} for the resonance k = {} at b = {:.6}",
                    width / POINTS_PER_WIDTH,
                    r.k,
                    r.field
                ));
            }
        }
    }

    let mut peaks = Vec::new();
    let mut i = 1;
    while i < y.len() {
        // extent of the flat run starting at i
        let mut j = i;
        while j + 1 < y.len() && y[j + 1] == y[i] {
            j += 1;
        }
        let rises = y[i] > y[i - 1];
        let falls = j + 1 < y.len() && y[j + 1] < y[i];
        if rises && falls {
            let prom = prominence_of(&y, i, j);
            let run = level_run(&y, i, j, y[i] - prom / 2.0);
            if prom >= prominence && has_local_max(&envelope, run) {
                let (b_peak, height) = if y[i] >= 1.0 - SATURATION_TOL {
                    saturated_center(&b, &y, i, j)
                } else if i == j {
                    refine(&b, &y, i)
                } else {
                    (0.5 * (b[i] + b[j]), y[i])
                };
                let width = run_width(&b, &y, run, y[i] - prom / 2.0);
                let matched = resonances
                    .iter()
                    .filter_map(|r| {
                        let tol = peak_width_estimate(template, r.k).ok()?;
                        let d = (r.field - b_peak).abs();
                        (d <= tol).then_some((d, r))
                    })
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                peaks.push(Peak {
                    b_peak,
                    height,
                    prominence: prom,
                    width_estimate: width,
                    matched_k: matched.map(|m| m.1.k),
                    matched_field: matched.map(|m| m.1.field),
                });
            }
        }
        i = j + 1;
    }
    Ok((peaks, warnings))
}

/// Height above the higher of the two bases reached before a taller point.
///
/// An equal point to the left counts as taller, so tied maxima yield one
/// prominent peak instead of two.
fn prominence_of(y: &[f64], i: usize, j: usize) -> f64 {
    let h = y[i];
    let mut left = h;
    for &v in y[..i].iter().rev() {
        if v >= h {
            break;
        }
        left = left.min(v);
    }
    let mut right = h;
    for &v in &y[j + 1..] {
        if v > h {
            break;
        }
        right = right.min(v);
    }
    h - left.max(right)
}

/// Center of the run within `SATURATION_TOL` of `C₁ = 1` containing `i..=j`.
fn saturated_center(b: &[f64], y: &[f64], i: usize, j: usize) -> (f64, f64) {
    let (lo, hi) = level_run(y, i, j, 1.0 - SATURATION_TOL);
    (0.5 * (b[lo] + b[hi]), y[i])
}

fn refine(b: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    if curvature >= 0.0 {
        return (b[i], y1);
    }
    let offset = 0.5 * (y0 - y2) / curvature;
    let step = b[i + 1] - b[i];
    // C₁ ≤ 1 bounds the interpolated height
    (b[i] + offset * step, (y1 - 0.25 * (y0 - y2) * offset).min(1.0))
}

/// Index range around `i..=j` where `y` stays at or above `level`.
fn level_run(y: &[f64], i: usize, j: usize, level: f64) -> (usize, usize) {
    let mut lo = i;
    while lo > 0 && y[lo - 1] >= level {
        lo -= 1;
    }
    let mut hi = j;
    while hi + 1 < y.len() && y[hi + 1] >= level {
        hi += 1;
    }
    (lo, hi)
}

fn run_width(b: &[f64], y: &[f64], (lo, hi): (usize, usize), level: f64) -> f64 {
    let cross = |a: usize, c: usize| {
        // linear interpolation of the level crossing between a (inside) and c (outside)
        let f = (y[a] - level) / (y[a] - y[c]);
        b[a] + f * (b[c] - b[a])
    };
    let left = if lo > 0 { cross(lo, lo - 1) } else { b[0] };
    let right = if hi + 1 < y.len() { cross(hi, hi + 1) } else { b[b.len() - 1] };
    right - left
}

fn has_local_max(y: &[f64], (lo, hi): (usize, usize)) -> bool {
    (lo..=hi).any(|m| (m == 0 || y[m] >= y[m - 1]) && (m + 1 == y.len() || y[m] >= y[m + 1]))
}

/// Largest envelope `p_m` over a field window.
pub fn max_envelope(n: usize, v: f64, gamma: f64, b_window: (f64, f64)) -> Result<f64, ScanError> {
    const COARSE: usize = 801;
    let pm = |b: f64| -> Result<f64, ScanError> {
        let params = ChainParams::with_anisotropy(n, b, v, gamma)?;
        Ok(FreeFermionEvolution::from_params(&params).envelope_pm())
    };
    let (lo, hi) = b_window;
    let step = (hi - lo) / (COARSE - 1) as f64;
    let mut best = (lo, pm(lo)?);
    for i in 1..COARSE {
        let b = lo + i as f64 * step;
        let value = pm(b)?;
        if value > best.1 {
            best = (b, value);
        }
    }
    // golden-section refinement within one coarse step of the best point
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut c) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let mut x1 = c - ratio * (c - a);
    let mut x2 = a + ratio * (c - a);
    let (mut f1, mut f2) = (pm(x1)?, pm(x2)?);
    for _ in 0..80 {
        if f1 > f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - ratio * (c - a);
            f1 = pm(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (c - a);
            f2 = pm(x2)?;
        }
    }
    Ok(best.1.max(f1).max(f2))
}

/// Smallest anisotropy for which some field in the window reaches `p_m = 1/2`.
///
/// At `γ = 1`, `b = 0` every `λ_k = v` and `p_m = 1/2` exactly, so `γ_c ≤ 1`.
pub fn saturation_threshold(n: usize, v: f64, b_window: (f64, f64), tol: f64) -> Result<f64, ScanError> {
    if n < 5 {
        return Err(ScanError::Config(format!("saturation threshold needs n >= 5, got {n}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(ScanError::Config(format!("tolerance must be positive, got {tol}")));
    }
    if b_window.0.partial_cmp(&b_window.1) != Some(std::cmp::Ordering::Less) {
        return Err(ScanError::Config("empty field window".into()));
    }
    let (mut lo, mut hi) = (tol.min(1e-3), 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if max_envelope(n, v, mid, b_window)? >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
