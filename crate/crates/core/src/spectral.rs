//! Truncated sector Hamiltonians and their lowest eigenvalues.

use rayon::prelude::*;
use serde::Serialize;

use crate::coulomb::{BlockCache, SectorBlock};
use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix, SymmetricEigen};
use crate::scalar::Scalar;

/// `t^m - (Z/2)(v^{m,0} + v^{m,1})` on indices `0..=n_max`.
#[derive(Debug, Clone)]
pub struct HamiltonianBlock<T> {
    pub m: i64,
    pub z: T,
    pub n_max: usize,
    pub matrix: DenseMatrix<T>,
}

impl<T: Scalar> HamiltonianBlock<T> {
    pub fn from_sector(block: &SectorBlock<T>, z: T) -> Result<Self> {
        if !(z >= T::zero()) || !z.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coupling Z = {z} must be finite and >= 0"
            )));
        }
        let order = block.order();
        let half_z = z * T::lit(0.5);
        let mut matrix = DenseMatrix::zeros(order)?;
        for n in 0..order {
            for n2 in 0..order {
                let potential = block.v0[(n, n2)] + block.v1[(n, n2)];
                matrix[(n, n2)] = -half_z * potential;
            }
            matrix[(n, n)] = block.kinetic[n] + matrix[(n, n)];
        }
        Ok(Self {
            m: block.m,
            z,
            n_max: block.n_max,
            matrix,
        })
    }

    /// The `k` smallest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<T>> {
        lowest_eigenvalues(self, k)
    }

    pub fn eigen(&self, want_vectors: bool) -> Result<SymmetricEigen<T>> {
        linalg::symmetric_eigen(&self.matrix, want_vectors)
    }
}

/// Builds the block for `(m, Z, n_max)` from scratch.
pub fn assemble<T: Scalar>(m: i64, z: T, n_max: usize) -> Result<HamiltonianBlock<T>> {
    let sector = crate::coulomb::build_block(m, n_max)?;
    HamiltonianBlock::from_sector(&sector, z)
}

/// As [`assemble`], reusing a cached sector block.
pub fn assemble_cached<T: Scalar>(
    cache: &BlockCache<T>,
    m: i64,
    z: T,
    n_max: usize,
) -> Result<HamiltonianBlock<T>> {
    HamiltonianBlock::from_sector(&*cache.get(m, n_max)?, z)
}

pub fn lowest_eigenvalues<T: Scalar>(block: &HamiltonianBlock<T>, k: usize) -> Result<Vec<T>> {
    linalg::lowest_eigenvalues(&block.matrix, k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralScanRecord<T> {
    pub m: i64,
    pub z: T,
    pub n_max: usize,
    pub lowest_eigenvalues: Vec<T>,
}

/// A scan cell that could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure<T> {
    pub m: i64,
    pub z: T,
    pub n_max: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome<T> {
    pub records: Vec<SpectralScanRecord<T>>,
    pub failures: Vec<ScanFailure<T>>,
}

impl<T> ScanOutcome<T> {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every `(m, n_max, Z)` cell, ordered by `m`, then `n_max`, then `Z` in the
/// order given. Failing cells are collected and the scan continues.
pub fn scan<T: Scalar>(
    cache: &BlockCache<T>,
    z_list: &[T],
    m_list: &[i64],
    n_max_list: &[usize],
    k: usize,
) -> ScanOutcome<T> {
    let sectors: Vec<(i64, usize)> = m_list
        .iter()
        .flat_map(|&m| n_max_list.iter().map(move |&n| (m, n)))
        .collect();

    let cells: Vec<Vec<std::result::Result<SpectralScanRecord<T>, ScanFailure<T>>>> = sectors
        .par_iter()
        .map(|&(m, n_max)| {
            if z_list.is_empty() {
                return Vec::new();
            }
            let sector = cache.get(m, n_max);
            z_list
                .iter()
                .map(|&z| {
                    let fail = |error| ScanFailure { m, z, n_max, error };
                    let sector = sector.as_ref().map_err(|e| fail(e.clone()))?;
                    let eigenvalues = HamiltonianBlock::from_sector(sector, z)
                        .and_then(|h| h.lowest_eigenvalues(k))
                        .map_err(fail)?;
                    Ok(SpectralScanRecord {
                        m,
                        z,
                        n_max,
                        lowest_eigenvalues: eigenvalues,
                    })
                })
                .collect()
        })
        .collect();

    let mut outcome = ScanOutcome {
        records: Vec::new(),
        failures: Vec::new(),
    };
    for cell in cells.into_iter().flatten() {
        match cell {
            Ok(record) => outcome.records.push(record),
            Err(failure) => outcome.failures.push(failure),
        }
    }
    outcome
}
