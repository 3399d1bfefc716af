//! Entanglement measures for the one-site and adjacent-pair reduced states.
//!
//! All entropies are in ebits (`log₂`). Pair densities use the ordered
//! basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`; one-site densities use `|↑⟩, |↓⟩`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::PairContractions;

/// Tolerance for validating density matrices handed to the general routines.
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("{name} = {value} is outside [0, 1]")]
    Domain { name: &'static str, value: f64 },
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("type I ({type1:e}) and type II ({type2:e}) pair entanglement are both positive")]
    CoexistingTypes { type1: f64, type2: f64 },
}

fn check_unit(name: &'static str, value: f64) -> Result<(), MeasureError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(MeasureError::Domain { name, value })
    }
}

/// `C₁ = 2 sqrt(p(1-p))` for the diagonal one-site density `diag(p, 1-p)`.
/// Largest entry modulus of a complex matrix.
pub fn max_norm<'a>(m: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    m.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn c1_from_p(p: f64) -> Result<f64, MeasureError> {
    check_unit("p", p)?;
    Ok(2.0 * (p * (1.0 - p)).sqrt())
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn entropy_binary(x: f64) -> Result<f64, MeasureError> {
    check_unit("x", x)?;
    let h = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    Ok(h(x) + h(1.0 - x))
}

/// Entanglement of formation of a two-qubit state with concurrence `c`.
pub fn eof_from_concurrence(c: f64) -> Result<f64, MeasureError> {
    check_unit("C", c)?;
    let q = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    entropy_binary(q.min(1.0))
}

/// Which parity sector of the pair density carries the entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairType {
    /// `|α| > p₂`, positive-parity block.
    I,
    /// `|β| > sqrt(p₁p₃)`, negative-parity block.
    II,
    None,
}

impl PairType {
    pub fn label(self) -> &'static str {
        match self {
            PairType::I => "I",
            PairType::II => "II",
            PairType::None => "none",
        }
    }
}

/// The X-shaped adjacent pair density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDensityX {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub alpha: Complex64,
    pub beta: f64,
}

impl PairDensityX {
    pub fn trace(&self) -> f64 {
        self.p1 + 2.0 * self.p2 + self.p3
    }

    /// Matrix with `α` at `⟨↓↓|ρ|↑↑⟩` and `α*` at `⟨↑↑|ρ|↓↓⟩`.
    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let z = Complex64::new(0.0, 0.0);
        #[rustfmt::skip]
        let m = Matrix4::new(
            r(self.p1), z, z, self.alpha.conj(),
            z, r(self.p2), r(self.beta), z,
            z, r(self.beta), r(self.p2), z,
            self.alpha, z, z, r(self.p3),
        );
        m
    }

    /// `(|α| - p₂, |β| - sqrt(p₁p₃))`.
    pub fn type_margins(&self) -> (f64, f64) {
        (self.alpha.norm() - self.p2, self.beta.abs() - (self.p1 * self.p3).max(0.0).sqrt())
    }
}

impl From<&PairContractions> for PairDensityX {
    fn from(c: &PairContractions) -> Self {
        Self { p1: c.p1, p2: c.p2, p3: c.p3, alpha: c.alpha, beta: c.beta }
    }
}

/// Concurrence of an X-state and the sector it comes from.
pub fn c2_x_state(pd: &PairDensityX) -> Result<(f64, PairType), MeasureError> {
    let (type1, type2) = pd.type_margins();
    if type1 > DENSITY_TOL && type2 > DENSITY_TOL {
        return Err(MeasureError::CoexistingTypes { type1, type2 });
    }
    let c = 2.0 * type1.max(type2).max(0.0);
    let kind = if type1 > 0.0 && type1 > type2 {
        PairType::I
    } else if type2 > 0.0 && type2 > type1 {
        PairType::II
    } else {
        PairType::None
    };
    if kind == PairType::None {
        return Ok((0.0, kind));
    }
    Ok((c.min(1.0), kind))
}

fn check_hermitian_unit_trace(herm: f64, trace: Complex64) -> Result<(), MeasureError> {
    if herm > DENSITY_TOL {
        return Err(MeasureError::NotDensity(format!("not Hermitian (deviation {herm:e})")));
    }
    if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
        return Err(MeasureError::NotDensity(format!("trace {trace}")));
    }
    Ok(())
}

fn check_min_eigenvalue(min: f64) -> Result<(), MeasureError> {
    if min < -DENSITY_TOL {
        return Err(MeasureError::NotDensity(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

fn check_density4(rho: &Matrix4<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::U4>, MeasureError> {
    check_hermitian_unit_trace(max_norm(&(rho - rho.adjoint())), rho.trace())?;
    let eig = (rho + rho.adjoint()).scale(0.5).symmetric_eigen();
    check_min_eigenvalue(eig.eigenvalues.min())?;
    Ok(eig)
}

fn check_density2(rho: &Matrix2<Complex64>) -> Result<(), MeasureError> {
    check_hermitian_unit_trace(max_norm(&(rho - rho.adjoint())), rho.trace())?;
    check_min_eigenvalue((rho + rho.adjoint()).scale(0.5).symmetric_eigenvalues().min())
}

/// Wootters concurrence `max(λ₁ - λ₂ - λ₃ - λ₄, 0)` of a general two-qubit state.
///
/// With `ρ = W W†` from the eigendecomposition, the `λ_i` (square roots of
/// the eigenvalues of `ρ ρ̃`) are the singular values of `Wᵀ (σ_y⊗σ_y) W`.
/// Taking singular values avoids square-rooting roundoff in near-zero `λ_i²`.
pub fn wootters_concurrence(rho: &Matrix4<Complex64>) -> Result<f64, MeasureError> {
    let eig = check_density4(rho)?;
    // roundoff negatives are clamped before the square root
    let weights = eig.eigenvalues.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
    let w = eig.eigenvectors * Matrix4::from_diagonal(&weights);
    let tau = w.transpose() * yy() * w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// `σ_y ⊗ σ_y`, real: anti-diagonal `(-1, 1, 1, -1)`.
fn yy() -> Matrix4<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        o, o, o, -one,
        o, o, one, o,
        o, one, o, o,
        -one, o, o, o,
    );
    m
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    yy() * rho.conjugate() * yy()
}

/// `C₁ = 2 sqrt(det ρ₁)`.
pub fn one_tangle_from_density(rho: &Matrix2<Complex64>) -> Result<f64, MeasureError> {
    check_density2(rho)?;
    let det = rho[(0, 0)].re * rho[(1, 1)].re - rho[(0, 1)].norm_sqr();
    Ok((2.0 * det.max(0.0).sqrt()).min(1.0))
}

/// One sample of the entanglement evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementPoint {
    pub t: f64,
    pub c1: f64,
    pub e1: f64,
    pub c2: f64,
    pub c2_type: PairType,
    pub e2: f64,
}

impl EntanglementPoint {
    pub fn from_contractions(c: &PairContractions) -> Result<Self, MeasureError> {
        let c1 = c1_from_p(c.p)?;
        let e1 = entropy_binary(c.p)?;
        let (c2, c2_type) = c2_x_state(&PairDensityX::from(c))?;
        let e2 = eof_from_concurrence(c2)?;
        Ok(Self { t: c.t, c1, e1, c2, c2_type, e2 })
    }
}
