//! Matrix elements of the reduced no-pair operator in the Landau basis.
//!
//! For a fixed orbital angular momentum `m` the form is an infinite symmetric
//! matrix over the radial index `n`: a diagonal kinetic part
//! `t_n = 2√(n + m₊ + 1)` and two Coulomb summands. The first is
//!
//! ```text
//! v⁰_{n,n'} = 1/(π √((n+1)_{|m|} (n'+1)_{|m|}))
//!             Σ_{k ≤ min(n,n')} (k+1)_{|m|-½} / ((n-k+½)_{½} (n'-k+½)_{½})
//! ```
//!
//! and the second is a shifted copy of it: `v¹(m) = v⁰(m+1)` for `m ≥ 0`,
//! and `v¹(m)_{n,n'} = v⁰(m+1)_{n+1,n'+1}` for `m < 0`.
//!
//! Every factor is a Pochhammer ratio taken in log space. Per-`|m|` log
//! tables live in [`CoulombFactors`], so one element costs one `exp` per
//! k-term.
//!
//! The lemma suites check positivity and `|m|`-symmetry, monotonicity in
//! `m ≥ 0`, maximality of `v⁰ + v¹` at `m = 0`, and the diagonal shift
//! `v⁰(0)_{n+1,n'+1} ≤ v⁰(0)_{n,n'}`. The argument for negative `m` appeals to
//! "all three claims" of the positivity/monotonicity lemma although only two
//! are stated; the suites check the two stated claims plus the diagonal
//! shift and do not guess at a third.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::report::{Relation, VerificationReport, ENTRYWISE_TOL};
use crate::scalar::Scalar;
use crate::special::ln_pochhammer;

/// Default truncation order of a sector block.
pub const DEFAULT_NMAX: usize = 256;

/// Largest block truncation accepted by [`build_block`].
pub const MAX_BLOCK_NMAX: usize = 2048;

/// Largest radial index accepted by the element functions.
pub const MAX_ELEMENT_INDEX: usize = 1 << 20;

/// Orbital angular momentum `m` and radial (Landau) index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorIndex {
    pub m: i64,
    pub n: usize,
}

impl SectorIndex {
    pub fn new(m: i64, n: usize) -> Self {
        Self { m, n }
    }

    /// Eigenvalue `2√(n + m₊ + 1)` of the free operator.
    pub fn kinetic<T: Scalar>(&self) -> T {
        kinetic_diag(self.m, self.n)
    }
}

/// `2√(n + max(m, 0) + 1)`
pub fn kinetic_diag<T: Scalar>(m: i64, n: usize) -> T {
    let m_plus = m.max(0) as usize;
    T::lit(2.0) * T::from_usize_exact(n + m_plus + 1).sqrt()
}

/// Log tables for one `|m|`:
/// `ln (k+1)_{|m|-½}`, `½ ln (n+1)_{|m|}` and `ln (j+½)_{½}`.
#[derive(Debug, Clone)]
pub struct CoulombFactors<T> {
    abs_m: usize,
    ln_numer: Vec<T>,
    half_ln_norm: Vec<T>,
    ln_denom: Vec<T>,
}

impl<T: Scalar> CoulombFactors<T> {
    /// Tables covering radial indices `0..len`.
    pub fn new(abs_m: usize, len: usize) -> Result<Self> {
        if len > MAX_ELEMENT_INDEX + 1 {
            return Err(Error::Resource(format!(
                "radial index table of length {len} exceeds {}",
                MAX_ELEMENT_INDEX + 1
            )));
        }
        let mf = T::from_usize_exact(abs_m);
        let half = T::lit(0.5);
        let mut ln_numer = Vec::with_capacity(len);
        let mut half_ln_norm = Vec::with_capacity(len);
        let mut ln_denom = Vec::with_capacity(len);
        for k in 0..len {
            let kf = T::from_usize_exact(k);
            ln_numer.push(ln_pochhammer(kf + T::one(), mf - half)?);
            half_ln_norm.push(half * ln_pochhammer(kf + T::one(), mf)?);
            ln_denom.push(ln_pochhammer(kf + half, half)?);
        }
        Ok(Self {
            abs_m,
            ln_numer,
            half_ln_norm,
            ln_denom,
        })
    }

    pub fn abs_m(&self) -> usize {
        self.abs_m
    }

    /// Number of radial indices covered.
    pub fn len(&self) -> usize {
        self.ln_numer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_numer.is_empty()
    }

    /// `v⁰_{n,n2}` for this `|m|`. Symmetric bit for bit: indices are put in
    /// canonical order before summing.
    pub fn element(&self, n: usize, n2: usize) -> T {
        let (lo, hi) = if n <= n2 { (n, n2) } else { (n2, n) };
        let prefactor = self.half_ln_norm[lo] + self.half_ln_norm[hi];
        let mut sum = T::zero();
        for k in 0..=lo {
            let ln_term =
                self.ln_numer[k] - self.ln_denom[lo - k] - self.ln_denom[hi - k] - prefactor;
            sum = sum + ln_term.exp();
        }
        sum / T::PI()
    }

    /// `v⁰_{n,n2}` for `n2 = 0..len` (one row of the truncated matrix).
    pub fn row(&self, n: usize, len: usize) -> Vec<T> {
        (0..len).map(|n2| self.element(n, n2)).collect()
    }
}

fn check_index(op: &'static str, n: usize, n2: usize) -> Result<()> {
    if n.max(n2) > MAX_ELEMENT_INDEX {
        return Err(Error::domain(
            op,
            format!("indices ({n}, {n2}) exceed {MAX_ELEMENT_INDEX}"),
        ));
    }
    Ok(())
}

/// `v^{m,0}_{n,n2}`, the Coulomb matrix element `(f_{mn}, |z|⁻¹ f_{mn2})`.
pub fn v0_element<T: Scalar>(m: i64, n: usize, n2: usize) -> Result<T> {
    check_index("v0_element", n, n2)?;
    let factors = CoulombFactors::new(m.unsigned_abs() as usize, n.max(n2) + 1)?;
    Ok(factors.element(n, n2))
}

/// `v^{m,1}_{n,n2}`: `v^{m+1,0}_{n,n2}` for `m ≥ 0`, `v^{m+1,0}_{n+1,n2+1}` for `m < 0`.
pub fn v1_element<T: Scalar>(m: i64, n: usize, n2: usize) -> Result<T> {
    if m >= 0 {
        v0_element(m + 1, n, n2)
    } else {
        v0_element(m + 1, n + 1, n2 + 1)
    }
}

/// Truncated matrix representation of one angular momentum sector,
/// indices `0..=n_max`.
#[derive(Debug, Clone)]
pub struct SectorBlock<T> {
    pub m: i64,
    pub n_max: usize,
    pub kinetic: Vec<T>,
    pub v0: DenseMatrix<T>,
    pub v1: DenseMatrix<T>,
}

impl<T: Scalar> SectorBlock<T> {
    pub fn order(&self) -> usize {
        self.n_max + 1
    }

    /// `v⁰` for `sigma = 0`, `v¹` for `sigma = 1`.
    pub fn potential(&self, sigma: u8) -> &DenseMatrix<T> {
        if sigma == 0 {
            &self.v0
        } else {
            &self.v1
        }
    }

    /// `Σ t_n a_n² - (Z/2) aᵀ(v⁰ + v¹)a` over the leading `a.len()` indices.
    pub fn energy(&self, z: T, a: &[T]) -> T {
        let kinetic = a
            .iter()
            .zip(&self.kinetic)
            .fold(T::zero(), |acc, (&x, &t)| acc + t * x * x);
        kinetic - z * T::lit(0.5) * (self.v0.quadratic_form(a) + self.v1.quadratic_form(a))
    }
}

fn fill_symmetric<T: Scalar>(
    factors: &CoulombFactors<T>,
    order: usize,
    shift: usize,
) -> Result<DenseMatrix<T>> {
    let rows: Vec<Vec<T>> = (0..order)
        .into_par_iter()
        .map(|n| {
            (n..order)
                .map(|n2| factors.element(n + shift, n2 + shift))
                .collect()
        })
        .collect();
    let mut matrix = DenseMatrix::zeros(order)?;
    for (n, row) in rows.into_iter().enumerate() {
        for (offset, value) in row.into_iter().enumerate() {
            let n2 = n + offset;
            matrix[(n, n2)] = value;
            matrix[(n2, n)] = value;
        }
    }
    Ok(matrix)
}

/// Assembles kinetic diagonal, `v⁰` and `v¹` for indices `0..=n_max`.
pub fn build_block<T: Scalar>(m: i64, n_max: usize) -> Result<SectorBlock<T>> {
    if n_max > MAX_BLOCK_NMAX {
        return Err(Error::Resource(format!(
            "n_max = {n_max} exceeds the supported maximum {MAX_BLOCK_NMAX}"
        )));
    }
    let order = n_max + 1;
    let kinetic = (0..order).map(|n| kinetic_diag(m, n)).collect();
    let f0 = CoulombFactors::new(m.unsigned_abs() as usize, order)?;
    let v0 = fill_symmetric(&f0, order, 0)?;

    let m1 = m + 1;
    let shift = usize::from(m < 0);
    let f1 = CoulombFactors::new(m1.unsigned_abs() as usize, order + shift)?;
    let v1 = fill_symmetric(&f1, order, shift)?;

    Ok(SectorBlock {
        m,
        n_max,
        kinetic,
        v0,
        v1,
    })
}

type BlockMap<T> = HashMap<(i64, usize), Arc<SectorBlock<T>>>;

/// Process-wide cache of assembled blocks keyed by `(m, n_max)`.
///
/// Blocks are built outside the lock; when two threads race, the first
/// insertion wins and both get the same `Arc`.
#[derive(Debug)]
pub struct BlockCache<T> {
    blocks: Mutex<BlockMap<T>>,
}

impl<T> Default for BlockCache<T> {
    fn default() -> Self {
        Self {
            blocks: Mutex::new(HashMap::new()),
        }
    }
}

impl<T: Scalar> BlockCache<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, m: i64, n_max: usize) -> Result<Arc<SectorBlock<T>>> {
        if let Some(block) = self.lock().get(&(m, n_max)) {
            return Ok(Arc::clone(block));
        }
        let block = Arc::new(build_block(m, n_max)?);
        Ok(Arc::clone(self.lock().entry((m, n_max)).or_insert(block)))
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, BlockMap<T>> {
        // a poisoned map only ever holds fully built blocks
        self.blocks.lock().unwrap_or_else(|e| e.into_inner())
    }
}

fn pair_label(what: &str, m: i64, n: usize, n2: usize) -> String {
    format!("{what} m={m} n={n} n'={n2}")
}

/// Positivity, `|m|`-symmetry and `m`-monotonicity of `v⁰` on the sweep.
pub fn verify_lemma_pre<T: Scalar>(
    cache: &BlockCache<T>,
    m_range: RangeInclusive<i64>,
    n_max: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("lemma-pre");
    let order = n_max + 1;
    let mut max_abs = 0;
    for m in m_range.clone() {
        max_abs = max_abs.max(m.unsigned_abs() as i64);
        let block = cache.get(m, n_max)?;
        let mirrored = cache.get(m.abs(), n_max)?;
        for n in 0..order {
            for n2 in 0..order {
                let v0 = block.v0[(n, n2)].to_f64_lossy();
                let v1 = block.v1[(n, n2)].to_f64_lossy();
                report.check(
                    || pair_label("v0 >= 0", m, n, n2),
                    0.0,
                    v0,
                    Relation::LessEq,
                    0.0,
                );
                report.check(
                    || pair_label("v1 >= 0", m, n, n2),
                    0.0,
                    v1,
                    Relation::LessEq,
                    0.0,
                );
                report.check_bitwise(
                    || pair_label("v0(m) = v0(|m|)", m, n, n2),
                    v0,
                    mirrored.v0[(n, n2)].to_f64_lossy(),
                );
            }
        }
    }

    for m in 0..max_abs {
        if !(m_range.contains(&m) || m_range.contains(&-m)) {
            continue;
        }
        let lower = cache.get(m, n_max)?;
        let upper = cache.get(m + 1, n_max)?;
        for n in 0..order {
            for n2 in 0..order {
                report.check(
                    || pair_label("v0(m+1) <= v0(m)", m, n, n2),
                    upper.v0[(n, n2)].to_f64_lossy(),
                    lower.v0[(n, n2)].to_f64_lossy(),
                    Relation::LessEq,
                    ENTRYWISE_TOL,
                );
            }
        }
    }
    Ok(report)
}

/// Maximality of `v⁰ + v¹` at `m = 0`, plus the diagonal shift of `v⁰(0)`.
pub fn verify_lemma2<T: Scalar>(
    cache: &BlockCache<T>,
    m_range: RangeInclusive<i64>,
    n_max: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("lemma2");
    let order = n_max + 1;
    let reference = cache.get(0, n_max)?;
    for m in m_range {
        let block = cache.get(m, n_max)?;
        for n in 0..order {
            for n2 in 0..order {
                let lhs = block.v0[(n, n2)] + block.v1[(n, n2)];
                let rhs = reference.v0[(n, n2)] + reference.v1[(n, n2)];
                report.check(
                    || pair_label("(v0+v1)(m) <= (v0+v1)(0)", m, n, n2),
                    lhs.to_f64_lossy(),
                    rhs.to_f64_lossy(),
                    Relation::LessEq,
                    ENTRYWISE_TOL,
                );
            }
        }
    }

    for n in 0..n_max {
        for n2 in 0..n_max {
            report.check(
                || pair_label("v0(0) diagonal shift", 0, n, n2),
                reference.v0[(n + 1, n2 + 1)].to_f64_lossy(),
                reference.v0[(n, n2)].to_f64_lossy(),
                Relation::LessEq,
                ENTRYWISE_TOL,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn kinetic_examples() {
        assert_eq!(kinetic_diag::<f64>(0, 0), 2.0);
        assert_eq!(kinetic_diag::<f64>(-7, 3), 4.0);
        assert_eq!(kinetic_diag::<f64>(2, 1), 4.0);
        assert_eq!(SectorIndex::new(2, 1).kinetic::<f64>(), 4.0);
    }

    #[test]
    fn v0_hand_values() {
        let sqrt_pi = PI.sqrt();
        assert_relative_eq!(
            v0_element::<f64>(0, 0, 0).unwrap(),
            sqrt_pi,
            max_relative = 1e-15
        );
        // two-term k-sum: (1/π)[(1)_{-½}/(3/2)_{½}² + (2)_{-½}/(1/2)_{½}²]
        //   = (1/π)[√π·π/4 + (√π/2)·π/2] = ¾√π
        assert_relative_eq!(
            v0_element::<f64>(0, 1, 1).unwrap(),
            0.75 * sqrt_pi,
            max_relative = 1e-14
        );
    }

    #[test]
    fn v0_mirror_is_bitwise() {
        let a: f64 = v0_element(-3, 2, 5).unwrap();
        let b: f64 = v0_element(3, 2, 5).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        let c: f64 = v0_element(3, 5, 2).unwrap();
        assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn v1_shifts() {
        for n in 0..4 {
            for n2 in 0..4 {
                assert_eq!(
                    v1_element::<f64>(0, n, n2).unwrap(),
                    v0_element::<f64>(1, n, n2).unwrap()
                );
            }
        }
        assert_relative_eq!(
            v1_element::<f64>(-1, 0, 0).unwrap(),
            0.75 * PI.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn small_block() {
        let b = build_block::<f64>(0, 0).unwrap();
        assert_eq!(b.kinetic, vec![2.0]);
        assert_eq!(b.v0[(0, 0)], v0_element::<f64>(0, 0, 0).unwrap());
        assert_eq!(b.v1[(0, 0)], v0_element::<f64>(1, 0, 0).unwrap());
    }

    #[test]
    fn block_structure() {
        for &m in &[5i64, -3, 0] {
            let b = build_block::<f64>(m, 12).unwrap();
            assert!(b.v0.is_symmetric() && b.v1.is_symmetric());
            assert!(b.v0.as_slice().iter().all(|&v| v >= 0.0));
            assert!(b.v1.as_slice().iter().all(|&v| v >= 0.0));
            for n in 0..=12 {
                for n2 in 0..=12 {
                    assert_eq!(b.v0[(n, n2)], v0_element::<f64>(m, n, n2).unwrap());
                    assert_eq!(b.v1[(n, n2)], v1_element::<f64>(m, n, n2).unwrap());
                }
            }
        }
    }

    #[test]
    fn block_size_limit() {
        assert!(matches!(
            build_block::<f64>(0, MAX_BLOCK_NMAX + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn cache_reuses_blocks() {
        let cache = BlockCache::<f64>::new();
        let a = cache.get(2, 5).unwrap();
        let b = cache.get(2, 5).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn cache_concurrent_insertion() {
        let cache = BlockCache::<f64>::new();
        let blocks: Vec<_> = (0..8)
            .into_par_iter()
            .map(|i| cache.get(i % 2, 10).unwrap())
            .collect();
        assert_eq!(cache.len(), 2);
        for b in &blocks {
            assert_eq!(b.v0[(3, 4)], cache.get(b.m, 10).unwrap().v0[(3, 4)]);
        }
    }

    #[test]
    fn lemma_pre_small_sweep() {
        let cache = BlockCache::<f64>::new();
        let r = verify_lemma_pre(&cache, -4..=4, 10).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.inconclusive, 0);
        // √π ≥ v0(1,0,0)
        let b0 = cache.get(0, 10).unwrap();
        let b1 = cache.get(1, 10).unwrap();
        assert!(b0.v0[(0, 0)] >= b1.v0[(0, 0)]);
    }

    #[test]
    fn lemma2_small_sweep() {
        let cache = BlockCache::<f64>::new();
        let r = verify_lemma2(&cache, -4..=4, 10).unwrap();
        assert!(r.passed(), "{r}");
        // m = 0 compared to itself has zero margin
        assert_eq!(r.worst_margin, 0.0);
        let b0 = cache.get(0, 10).unwrap();
        assert!(b0.v0[(1, 1)] <= b0.v0[(0, 0)]);
    }

    #[test]
    fn f32_elements() {
        let v: f32 = v0_element(0, 0, 0).unwrap();
        assert!((v - std::f32::consts::PI.sqrt()).abs() < 1e-5);
    }
}
