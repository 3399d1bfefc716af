//! Exact entanglement dynamics of finite cyclic XY chains in a transverse
//! field, starting from the fully aligned state.
//!
//! * [`chain`]: parameters, momentum modes, quasiparticle spectrum.
//! * [`dynamics`]: `O(n)` free-fermion evaluation of the one- and two-site
//!   correlators.
//! * [`measures`]: one-tangle, pair concurrence (X-state and general
//!   Wootters), entropies.
//! * [`oracle`]: dense `2ⁿ` exact diagonalization used as ground truth.
//! * [`analytic`]: closed forms and limits for small chains and special regimes.
//! * [`scanner`]: transverse-field sweeps and resonance peak detection.

pub mod analytic;
pub mod chain;
pub mod dynamics;
pub mod measures;
pub mod oracle;
pub mod scanner;

pub use chain::{make_params, mode_spectrum, ChainParams, HalfInteger, Mode, ModeSpectrum};
pub use dynamics::{FreeFermionEvolution, PairContractions, TimeGrid};
pub use measures::{EntanglementPoint, PairDensityX, PairType};
