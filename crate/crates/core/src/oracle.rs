//! Brute-force ground truth on the full `2ⁿ`-dimensional Hilbert space.
//!
//! Basis states are bit patterns: bit `j-1` set means site `j` is `|↑⟩`.
//! The Hamiltonian
//!
//! ```text
//! H = b S^z - ½ Σ_{j=1..n} (v s⁺_j s⁻_{j+1} + g s⁺_j s⁺_{j+1} + h.c.),   n+1 ≡ 1
//! ```
//!
//! is real symmetric in this basis and conserves the spin parity
//! `P = (-1)^{#up}`, so it is stored as two parity blocks. The aligned
//! initial state has no up spins and lives in the even block, which is the
//! only block that gets diagonalized.
//!
//! For `n = 2` the two bond terms `(1,2)` and `(2,1)` are both kept, doubling
//! the couplings; this is what the free-fermion spectrum describes.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{mode_spectrum, ChainParams};
use crate::dynamics::{DynamicsError, FreeFermionEvolution};
use crate::measures::{self, c2_x_state, MeasureError, PairDensityX};

pub const DEFAULT_MAX_SITES: usize = 14;
/// Tolerance of the symmetry assertions on reduced densities.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("n = {n} exceeds the dense oracle cap of {cap} sites")]
    CapExceeded { n: usize, cap: usize },
    #[error("site index {0} out of range")]
    BadSite(usize),
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone)]
pub struct ParityBlock {
    /// Basis states (bit patterns) spanning the block, ascending.
    pub states: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

/// Dense Hamiltonian split into parity blocks, with the even block factorized.
#[derive(Debug, Clone)]
pub struct DenseHamiltonian {
    n: usize,
    params: ChainParams,
    pub even: ParityBlock,
    pub odd: ParityBlock,
    /// Position of each basis state inside its own block.
    position: Vec<usize>,
    /// Eigenvalues of the even block.
    pub energies: DVector<f64>,
    /// Orthonormal eigenvectors of the even block, column-wise.
    pub vectors: DMatrix<f64>,
}

fn bit(x: usize, site: usize) -> bool {
    (x >> site) & 1 == 1
}

fn even_parity(x: usize) -> bool {
    x.count_ones().is_multiple_of(2)
}

/// Nonzero matrix elements `(row, col, value)` of the full Hamiltonian.
fn hamiltonian_entries(params: &ChainParams) -> Vec<(usize, usize, f64)> {
    let n = params.n();
    let dim = 1usize << n;
    let mut entries = Vec::with_capacity(dim * (n + 1));
    for x in 0..dim {
        let up = x.count_ones() as f64;
        entries.push((x, x, params.b() * (up - n as f64 / 2.0)));
        for j in 0..n {
            let next = (j + 1) % n;
            let y = x ^ (1 << j) ^ (1 << next);
            // s⁺s⁻ + h.c. flips an antiparallel bond, s⁺s⁺ + h.c. a parallel one
            let amp = if bit(x, j) != bit(x, next) { -params.v() / 2.0 } else { -params.g() / 2.0 };
            if amp != 0.0 {
                entries.push((y, x, amp));
            }
        }
    }
    entries
}

pub fn build_hamiltonian(params: &ChainParams) -> Result<DenseHamiltonian, OracleError> {
    build_hamiltonian_with_cap(params, DEFAULT_MAX_SITES)
}

pub fn build_hamiltonian_with_cap(params: &ChainParams, cap: usize) -> Result<DenseHamiltonian, OracleError> {
    let n = params.n();
    if n > cap {
        return Err(OracleError::CapExceeded { n, cap });
    }
    let dim = 1usize << n;
    let (even_states, odd_states): (Vec<usize>, Vec<usize>) = (0..dim).partition(|&x| even_parity(x));
    let mut position = vec![0; dim];
    for states in [&even_states, &odd_states] {
        for (i, &x) in states.iter().enumerate() {
            position[x] = i;
        }
    }
    let half = dim / 2;
    let mut even = DMatrix::<f64>::zeros(half, half);
    let mut odd = DMatrix::<f64>::zeros(half, half);
    for (row, col, value) in hamiltonian_entries(params) {
        if even_parity(row) != even_parity(col) {
            return Err(OracleError::SymmetryViolation(format!("H couples parity sectors at ({row}, {col})")));
        }
        let block = if even_parity(row) { &mut even } else { &mut odd };
        block[(position[row], position[col])] += value;
    }
    let asym = (&even - even.transpose()).abs().max().max((&odd - odd.transpose()).abs().max());
    if asym > 0.0 {
        return Err(OracleError::SymmetryViolation(format!("H not symmetric ({asym:e})")));
    }
    let eig = even.clone().symmetric_eigen();
    Ok(DenseHamiltonian {
        n,
        params: *params,
        even: ParityBlock { states: even_states, matrix: even },
        odd: ParityBlock { states: odd_states, matrix: odd },
        position,
        energies: eig.eigenvalues,
        vectors: eig.eigenvectors,
    })
}

impl DenseHamiltonian {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    /// Reassembled `2ⁿ × 2ⁿ` matrix; intended for small chains.
    pub fn full_matrix(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n;
        let mut full = DMatrix::zeros(dim, dim);
        for block in [&self.even, &self.odd] {
            for (i, &x) in block.states.iter().enumerate() {
                for (j, &y) in block.states.iter().enumerate() {
                    full[(x, y)] = block.matrix[(i, j)];
                }
            }
        }
        full
    }

    /// Sorted eigenvalues of the positive-parity block.
    pub fn even_levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = self.energies.iter().copied().collect();
        levels.sort_by(f64::total_cmp);
        levels
    }
}

/// Full state vector of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨(-1)^{#up}⟩`.
    pub fn parity_expectation(&self) -> f64 {
        self.amplitudes.iter().enumerate().map(|(x, a)| if even_parity(x) { a.norm_sqr() } else { -a.norm_sqr() }).sum()
    }
}

/// `exp(-iHt)|↓…↓⟩` through the even-block eigendecomposition.
pub fn evolve_dense(h: &DenseHamiltonian, t: f64) -> DenseState {
    let start = h.position[0];
    let overlaps = h.vectors.row(start).transpose();
    let (cos, sin): (DVector<f64>, DVector<f64>) = (
        overlaps.zip_map(&h.energies, |c, e| c * (e * t).cos()),
        overlaps.zip_map(&h.energies, |c, e| -c * (e * t).sin()),
    );
    let re = &h.vectors * cos;
    let im = &h.vectors * sin;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << h.n];
    for (i, &x) in h.even.states.iter().enumerate() {
        amplitudes[x] = Complex64::new(re[i], im[i]);
    }
    DenseState { n: h.n, amplitudes }
}

fn check_site(state: &DenseState, site: usize) -> Result<usize, OracleError> {
    if site == 0 || site > state.n {
        return Err(OracleError::BadSite(site));
    }
    Ok(site - 1)
}

/// One-site density in the `(|↑⟩, |↓⟩)` basis, no symmetry assertions.
pub fn reduce_site_raw(state: &DenseState, site: usize) -> Result<Matrix2<Complex64>, OracleError> {
    let s = check_site(state, site)?;
    let mut rho = Matrix2::<Complex64>::zeros();
    for (x, a) in state.amplitudes.iter().enumerate() {
        let row = usize::from(!bit(x, s));
        rho[(row, row)] += a.norm_sqr();
        if row == 0 {
            rho[(0, 1)] += a * state.amplitudes[x ^ (1 << s)].conj();
        }
    }
    rho[(1, 0)] = rho[(0, 1)].conj();
    Ok(rho)
}

/// One-site density, asserting it is diagonal and the same on every site.
pub fn reduce_one(state: &DenseState, site: usize) -> Result<Matrix2<Complex64>, OracleError> {
    let rho = reduce_site_raw(state, site)?;
    if rho[(0, 1)].norm() > SYMMETRY_TOL {
        return Err(OracleError::SymmetryViolation(format!("ρ₁ off-diagonal {:e}", rho[(0, 1)].norm())));
    }
    for other in 1..=state.n {
        let dev = measures::max_norm(&(reduce_site_raw(state, other)? - rho));
        if dev > SYMMETRY_TOL {
            return Err(OracleError::SymmetryViolation(format!(
                "ρ₁ differs between sites {site} and {other} ({dev:e})"
            )));
        }
    }
    Ok(rho)
}

/// Two-site density of sites `(i, j)` in the `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` basis.
pub fn reduce_sites(state: &DenseState, i: usize, j: usize) -> Result<Matrix4<Complex64>, OracleError> {
    let (a, b) = (check_site(state, i)?, check_site(state, j)?);
    if a == b {
        return Err(OracleError::BadSite(j));
    }
    let mask = (1 << a) | (1 << b);
    let local = |x: usize| 2 * usize::from(!bit(x, a)) + usize::from(!bit(x, b));
    let mut rho = Matrix4::<Complex64>::zeros();
    for (x, ax) in state.amplitudes.iter().enumerate() {
        if ax.norm_sqr() == 0.0 {
            continue;
        }
        let rest = x & !mask;
        for pattern in [0, 1 << a, 1 << b, mask] {
            let y = rest | pattern;
            rho[(local(x), local(y))] += ax * state.amplitudes[y].conj();
        }
    }
    Ok(rho)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReduction {
    pub matrix: Matrix4<Complex64>,
    pub x: PairDensityX,
}

fn x_projection(rho: &Matrix4<Complex64>) -> Result<PairDensityX, OracleError> {
    let forbidden = [(0, 1), (0, 2), (1, 3), (2, 3)];
    for &(r, c) in &forbidden {
        let dev = rho[(r, c)].norm().max(rho[(c, r)].norm());
        if dev > SYMMETRY_TOL {
            return Err(OracleError::SymmetryViolation(format!("ρ₂ entry ({r},{c}) = {dev:e} breaks X form")));
        }
    }
    if rho[(2, 1)].im.abs() > SYMMETRY_TOL {
        return Err(OracleError::SymmetryViolation(format!("β not real ({:e})", rho[(2, 1)].im)));
    }
    if (rho[(1, 1)].re - rho[(2, 2)].re).abs() > SYMMETRY_TOL {
        return Err(OracleError::SymmetryViolation("ρ₂ not inversion symmetric".into()));
    }
    Ok(PairDensityX {
        p1: rho[(0, 0)].re,
        p2: 0.5 * (rho[(1, 1)].re + rho[(2, 2)].re),
        p3: rho[(3, 3)].re,
        alpha: rho[(3, 0)],
        beta: rho[(2, 1)].re,
    })
}

/// Adjacent pair `(j, j+1 mod n)`, asserting X form and translation invariance.
pub fn reduce_pair(state: &DenseState, j: usize) -> Result<PairReduction, OracleError> {
    check_site(state, j)?;
    let next = j % state.n + 1;
    let matrix = reduce_sites(state, j, next)?;
    let x = x_projection(&matrix)?;
    if state.n > 2 {
        for other in 1..=state.n {
            let dev = measures::max_norm(&(reduce_sites(state, other, other % state.n + 1)? - matrix));
            if dev > SYMMETRY_TOL {
                return Err(OracleError::SymmetryViolation(format!(
                    "ρ₂ differs between bonds {j} and {other} ({dev:e})"
                )));
            }
        }
    }
    Ok(PairReduction { matrix, x })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub levels: usize,
    pub max_deviation: f64,
    /// `(dense, predicted)` pair with the largest mismatch.
    pub worst: Option<(f64, f64)>,
    pub passed: bool,
}

/// Positive-parity levels predicted by the quasiparticle picture, sorted.
///
/// Levels are `E₀ + Σ_{k∈S} λ_k` with `E₀ = -bn/2 - ½ Σ_k [λ_k - (b - v cos ω_k)]`.
/// `S` must leave an even number of fermions: paired modes always change
/// the fermion number by two, while the unpaired `ω = π` mode of odd chains
/// is filled in the quasiparticle vacuum when `b + v < 0`.
pub fn quasiparticle_levels(params: &ChainParams) -> Vec<f64> {
    let spectrum = mode_spectrum(params);
    let n = params.n();
    let e0 = -params.b() * n as f64 / 2.0 - 0.5 * spectrum.full.iter().map(|m| m.lambda - m.detuning).sum::<f64>();
    let holes = spectrum.full.iter().filter(|m| m.is_unpaired() && m.detuning < 0.0).count();
    let lambdas: Vec<f64> = spectrum.full.iter().map(|m| m.lambda).collect();
    let mut levels: Vec<f64> = (0usize..1 << n)
        .filter(|mask| (mask.count_ones() as usize + holes).is_multiple_of(2))
        .map(|mask| e0 + (0..n).filter(|&i| bit(mask, i)).map(|i| lambdas[i]).sum::<f64>())
        .collect();
    levels.sort_by(f64::total_cmp);
    levels
}

pub fn spectrum_crosscheck(params: &ChainParams, tol: f64) -> Result<SpectrumReport, OracleError> {
    let h = build_hamiltonian(params)?;
    Ok(compare_levels(&h.even_levels(), &quasiparticle_levels(params), tol))
}

fn compare_levels(dense: &[f64], predicted: &[f64], tol: f64) -> SpectrumReport {
    if dense.len() != predicted.len() {
        return SpectrumReport { levels: dense.len(), max_deviation: f64::INFINITY, worst: None, passed: false };
    }
    let mut report = SpectrumReport { levels: dense.len(), max_deviation: 0.0, worst: None, passed: true };
    for (&d, &q) in dense.iter().zip(predicted) {
        let dev = (d - q).abs();
        if dev > report.max_deviation || report.worst.is_none() {
            report.max_deviation = report.max_deviation.max(dev);
            report.worst = Some((d, q));
        }
    }
    report.passed = report.max_deviation <= tol;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonogamyReport {
    pub c1: f64,
    /// `C_{1j}` for `j = 2 … n`.
    pub pair_concurrences: Vec<f64>,
    pub c1_squared: f64,
    pub pair_sum: f64,
    pub holds: bool,
}

/// Checks `C₁² ≥ Σ_{j≠1} C_{1j}²` for site 1, including non-adjacent pairs.
pub fn monogamy_check(state: &DenseState) -> Result<MonogamyReport, OracleError> {
    let c1 = measures::one_tangle_from_density(&reduce_site_raw(state, 1)?)?;
    let pair_concurrences = (2..=state.n)
        .map(|j| Ok(measures::wootters_concurrence(&reduce_sites(state, 1, j)?)?))
        .collect::<Result<Vec<f64>, OracleError>>()?;
    let c1_squared = c1 * c1;
    let pair_sum = pair_concurrences.iter().map(|c| c * c).sum::<f64>();
    Ok(MonogamyReport { c1, pair_concurrences, c1_squared, pair_sum, holds: c1_squared >= pair_sum - 1e-9 })
}

/// Largest absolute fast-path vs oracle deviation per observable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Deviations {
    pub p: f64,
    pub beta: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub p1: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Deviations {
    pub const NAMES: [&'static str; 7] = ["p", "beta", "alpha_re", "alpha_im", "p1", "C1", "C2"];

    pub fn values(&self) -> [f64; 7] {
        [self.p, self.beta, self.alpha_re, self.alpha_im, self.p1, self.c1, self.c2]
    }

    pub fn max(&self) -> f64 {
        self.values().into_iter().fold(0.0, f64::max)
    }

    pub fn merge(&mut self, other: &Deviations) {
        self.p = self.p.max(other.p);
        self.beta = self.beta.max(other.beta);
        self.alpha_re = self.alpha_re.max(other.alpha_re);
        self.alpha_im = self.alpha_im.max(other.alpha_im);
        self.p1 = self.p1.max(other.p1);
        self.c1 = self.c1.max(other.c1);
        self.c2 = self.c2.max(other.c2);
    }
}

/// Oracle observables at one time, in the same form as the fast path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub t: f64,
    pub p: f64,
    pub pair: PairDensityX,
    pub c1: f64,
    pub c2: f64,
}

pub fn oracle_sample(h: &DenseHamiltonian, t: f64) -> Result<OracleSample, OracleError> {
    let state = evolve_dense(h, t);
    let rho1 = reduce_one(&state, 1)?;
    let pair = reduce_pair(&state, 1)?.x;
    Ok(OracleSample {
        t,
        p: rho1[(0, 0)].re,
        pair,
        c1: measures::one_tangle_from_density(&rho1)?,
        c2: c2_x_state(&pair)?.0,
    })
}

/// Runs fast path and oracle side by side at the given times.
pub fn compare_with_fast_path(h: &DenseHamiltonian, times: &[f64]) -> Result<Deviations, OracleError> {
    let fast = FreeFermionEvolution::from_params(h.params());
    let mut dev = Deviations::default();
    for &t in times {
        let o = oracle_sample(h, t)?;
        let f = fast.pair_contractions(t)?;
        let point = measures::EntanglementPoint::from_contractions(&f)?;
        dev.merge(&Deviations {
            p: (f.p - o.p).abs(),
            beta: (f.beta - o.pair.beta).abs(),
            alpha_re: (f.alpha.re - o.pair.alpha.re).abs(),
            alpha_im: (f.alpha.im - o.pair.alpha.im).abs(),
            p1: (f.p1 - o.pair.p1).abs(),
            c1: (point.c1 - o.c1).abs(),
            c2: (point.c2 - o.c2).abs(),
        });
    }
    Ok(dev)
}
