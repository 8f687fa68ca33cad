//! Landau-basis realization of the no-pair Weyl operator with a Coulomb
//! impurity and a homogeneous magnetic field.
//!
//! The operator splits into angular momentum sectors `m`; each sector is a
//! symmetric matrix over the radial index `n` with kinetic diagonal
//! `2√(n + m₊ + 1)` and two non-negative Coulomb matrices. The crate
//! provides:
//!
//! - [`special`]: log-space Gamma ratios, Laguerre polynomials, Gautschi's
//!   inequality;
//! - [`coulomb`]: closed-form matrix elements, sector blocks and the lemma
//!   suites about them;
//! - [`quadrature`]: an independent Gauss–Laguerre oracle for the same
//!   elements;
//! - [`spectral`]: truncated sector Hamiltonians and their lowest
//!   eigenvalues;
//! - [`bounds`]: the weighted row-sum majorization and the critical coupling
//!   `Z_c ≈ 0.3780`;
//! - [`trial`]: trial sequences whose energy diverges for `Z > Z_c`.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

// `!(x > 0)` is the NaN-rejecting form used for argument checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod coulomb;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod trial;

pub use bounds::{compute_constants, BoundConstants, WeightSequence};
pub use coulomb::{
    build_block, kinetic_diag, v0_element, v1_element, BlockCache, SectorBlock, SectorIndex,
};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use quadrature::{
    oracle_coulomb_element, oracle_orthonormality, BasisFunction, QuadratureRule,
};
pub use report::{Verdict, VerificationReport};
pub use scalar::Scalar;
pub use special::{gautschi_check, laguerre, log_gamma, pochhammer, PochhammerValue};
pub use spectral::{assemble, scan, HamiltonianBlock, SpectralScanRecord};
pub use trial::{fit_log_slope, trial_energies, LogSlopeFit, TrialEnergyRecord};

pub type Real = f64;
pub type SectorBlockF64 = SectorBlock<f64>;
pub type HamiltonianBlockF64 = HamiltonianBlock<f64>;
pub type BoundConstantsF64 = BoundConstants<f64>;
pub type BlockCacheF64 = BlockCache<f64>;
pub type SpectralScanRecordF64 = SpectralScanRecord<f64>;
pub type TrialEnergyRecordF64 = TrialEnergyRecord<f64>;
pub type LogSlopeFitF64 = LogSlopeFit<f64>;
pub type QuadratureRuleF64 = QuadratureRule<f64>;
pub type DenseMatrixF64 = DenseMatrix<f64>;
