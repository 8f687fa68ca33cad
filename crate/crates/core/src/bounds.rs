//! Diagonal majorization of the `m = 0` Coulomb matrices and the critical
//! coupling.
//!
//! For a positive weight sequence `g`, Schwarz gives
//! `(a, v a) ≤ Σ_n a_n² (1/g_n) Σ_{n'} v_{n,n'} g_{n'}`. With
//! `g_n = 1/(n+¼)_{¾}` for `v⁰` and `g_n = √(n+1)/(n+¾)_{5/4}` for `v¹` the
//! row sums are bounded by `C0 Γ(n+¾)/Γ(n+¼)` and `C1 Γ(n+5/4)/Γ(n+¾)`,
//! both below `C_σ √(n+1)`. Together with the kinetic term `2√(n+1)` this
//! gives `E₀[a] ≥ Σ 2√(n+1)(1 - Z/Z_c) a_n²` with `Z_c = 4/(C0 + C1)`.
//!
//! Truncated row sums drop only positive terms, so every check here is
//! one-sided and valid at any truncation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coulomb::{CoulombFactors, SectorBlock};
use crate::error::{Error, Result};
use crate::report::{Relation, VerificationReport, ENTRYWISE_TOL};
use crate::scalar::Scalar;
use crate::special::{ln_pochhammer, log_gamma};

/// Rows checked by the default row-sum suite.
pub const DEFAULT_ROW_LIMIT: usize = 512;
/// Truncation of the default row-sum suite.
pub const DEFAULT_ROW_TRUNCATION: usize = 4096;
/// Number of random sequences in the default form-bound sweep.
pub const DEFAULT_SEQUENCE_COUNT: usize = 1000;
/// Support bound of the random sequences.
pub const DEFAULT_SEQUENCE_NMAX: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants<T> {
    /// `Γ(¼)⁴ / (2π²)`
    pub c0: T,
    /// `32π² / Γ(¼)⁴`
    pub c1: T,
    /// `(Γ(¼)⁴/(8π²) + 8π²/Γ(¼)⁴)⁻¹`
    pub zc: T,
}

impl<T: Scalar> BoundConstants<T> {
    pub fn compute() -> Result<Self> {
        let gamma4 = (T::lit(4.0) * log_gamma(T::lit(0.25))?).exp();
        let pi2 = T::PI() * T::PI();
        let eight_pi2 = T::lit(8.0) * pi2;
        Ok(Self {
            c0: gamma4 / (T::lit(2.0) * pi2),
            c1: T::lit(32.0) * pi2 / gamma4,
            zc: (gamma4 / eight_pi2 + eight_pi2 / gamma4).recip(),
        })
    }

    pub fn c(&self, sigma: u8) -> T {
        if sigma == 0 {
            self.c0
        } else {
            self.c1
        }
    }
}

pub fn compute_constants<T: Scalar>() -> Result<BoundConstants<T>> {
    BoundConstants::compute()
}

fn check_sigma(sigma: u8) -> Result<()> {
    if sigma > 1 {
        return Err(Error::InvalidArgument(format!(
            "sigma = {sigma} must be 0 or 1"
        )));
    }
    Ok(())
}

/// `g_n`: `1/(n+¼)_{¾}` for `σ = 0`, `√(n+1)/(n+¾)_{5/4}` for `σ = 1`.
pub fn weight<T: Scalar>(sigma: u8, n: usize) -> Result<T> {
    check_sigma(sigma)?;
    let nf = T::from_usize_exact(n);
    Ok(if sigma == 0 {
        (-ln_pochhammer(nf + T::lit(0.25), T::lit(0.75))?).exp()
    } else {
        (nf + T::one()).sqrt() * (-ln_pochhammer(nf + T::lit(0.75), T::lit(1.25))?).exp()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence<T> {
    pub sigma: u8,
    pub values: Vec<T>,
}

impl<T: Scalar> WeightSequence<T> {
    /// `g_0 ..= g_{n_max}`.
    pub fn new(sigma: u8, n_max: usize) -> Result<Self> {
        let values = (0..=n_max)
            .map(|n| weight(sigma, n))
            .collect::<Result<_>>()?;
        Ok(Self { sigma, values })
    }
}

/// `Γ(n+¾)/Γ(n+¼)` for `σ = 0`, `Γ(n+5/4)/Γ(n+¾)` for `σ = 1`.
fn gamma_ratio<T: Scalar>(sigma: u8, n: usize) -> Result<T> {
    let nf = T::from_usize_exact(n);
    let (hi, lo) = if sigma == 0 {
        (T::lit(0.75), T::lit(0.25))
    } else {
        (T::lit(1.25), T::lit(0.75))
    };
    Ok((log_gamma(nf + hi)? - log_gamma(nf + lo)?).exp())
}

/// Records the two row-sum bounds for row `n`.
fn record_row_sum<T: Scalar>(
    report: &mut VerificationReport,
    constants: &BoundConstants<T>,
    sigma: u8,
    n: usize,
    row_sum: T,
) -> Result<()> {
    let c = constants.c(sigma);
    let sharp = c * gamma_ratio(sigma, n)?;
    let diagonal = c * T::from_usize_exact(n + 1).sqrt();
    let strict = if sigma == 0 {
        Relation::LessEq
    } else {
        Relation::Less
    };
    report.check(
        || format!("sigma={sigma} n={n}: row sum <= C*Gamma ratio"),
        row_sum.to_f64_lossy(),
        sharp.to_f64_lossy(),
        Relation::LessEq,
        ENTRYWISE_TOL,
    );
    report.check(
        || format!("sigma={sigma} n={n}: row sum <= C*sqrt(n+1)"),
        row_sum.to_f64_lossy(),
        diagonal.to_f64_lossy(),
        strict,
        ENTRYWISE_TOL,
    );
    Ok(())
}

/// Row sum `(1/g_n) Σ_{n'} v^σ_{n,n'} g_{n'}` over the block's truncation,
/// checked against `C_σ √(n+1)` and the sharper Gamma-ratio bound.
pub fn lieb_yau_row_check<T: Scalar>(
    sigma: u8,
    m0_block: &SectorBlock<T>,
    n: usize,
) -> Result<VerificationReport> {
    check_sigma(sigma)?;
    if m0_block.m != 0 {
        return Err(Error::InvalidArgument(format!(
            "row-sum check needs the m = 0 block, got m = {}",
            m0_block.m
        )));
    }
    if n > m0_block.n_max {
        return Err(Error::InvalidArgument(format!(
            "row {n} outside truncation {}",
            m0_block.n_max
        )));
    }
    let g = WeightSequence::<T>::new(sigma, m0_block.n_max)?;
    let row = m0_block.potential(sigma).row(n);
    let sum = row
        .iter()
        .zip(&g.values)
        .fold(T::zero(), |acc, (&v, &w)| acc + v * w)
        / g.values[n];
    let mut report = VerificationReport::new("lieb-yau-row");
    record_row_sum(&mut report, &BoundConstants::compute()?, sigma, n, sum)?;
    Ok(report)
}

/// Row sums `(1/g_n) Σ_{n' ≤ truncation} v^σ_{n,n'} g_{n'}` for `n ≤ rows`.
///
/// Rows are generated element by element from the closed form, so large
/// truncations do not need an assembled block.
pub fn row_sums<T: Scalar>(sigma: u8, rows: usize, truncation: usize) -> Result<Vec<T>> {
    check_sigma(sigma)?;
    if rows > truncation {
        return Err(Error::InvalidArgument(format!(
            "rows {rows} exceed truncation {truncation}"
        )));
    }
    // v^{0,1} = v^{1,0}: σ doubles as |m| for the factor tables
    let factors = CoulombFactors::<T>::new(sigma as usize, truncation + 1)?;
    let g = WeightSequence::<T>::new(sigma, truncation)?;
    Ok((0..=rows)
        .into_par_iter()
        .map(|n| {
            let mut sum = T::zero();
            for (n2, &w) in g.values.iter().enumerate() {
                sum = sum + factors.element(n, n2) * w;
            }
            sum / g.values[n]
        })
        .collect())
}

/// Row-sum bounds for both `σ` and every row `n ≤ rows` at `truncation`.
pub fn lieb_yau_row_suite<T: Scalar>(rows: usize, truncation: usize) -> Result<VerificationReport> {
    let constants = BoundConstants::<T>::compute()?;
    let mut report = VerificationReport::new("lieb-yau-rows");
    for sigma in 0..=1u8 {
        for (n, sum) in row_sums::<T>(sigma, rows, truncation)?
            .into_iter()
            .enumerate()
        {
            record_row_sum(&mut report, &constants, sigma, n, sum)?;
        }
    }
    report.note(format!("rows 0..={rows}, truncation {truncation}"));
    Ok(report)
}

/// `Γ(n+¾)/Γ(n+¼) ≤ √(n+1)` and `Γ(n+5/4)/Γ(n+¾) < √(n+1)` for `n ≤ n_max`.
pub fn gamma_ratio_check<T: Scalar>(n_max: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("gamma-ratio");
    for n in 0..=n_max {
        let root = T::from_usize_exact(n + 1).sqrt().to_f64_lossy();
        report.check(
            || format!("Gamma(n+3/4)/Gamma(n+1/4) <= sqrt(n+1), n={n}"),
            gamma_ratio::<T>(0, n)?.to_f64_lossy(),
            root,
            Relation::LessEq,
            ENTRYWISE_TOL,
        );
        report.check(
            || format!("Gamma(n+5/4)/Gamma(n+3/4) < sqrt(n+1), n={n}"),
            gamma_ratio::<T>(1, n)?.to_f64_lossy(),
            root,
            Relation::Less,
            ENTRYWISE_TOL,
        );
    }
    Ok(report)
}

fn validate_sequence<T: Scalar>(block: &SectorBlock<T>, a: &[T]) -> Result<()> {
    if block.m != 0 {
        return Err(Error::InvalidArgument(format!(
            "bound checks need the m = 0 block, got m = {}",
            block.m
        )));
    }
    if a.len() > block.order() {
        return Err(Error::InvalidArgument(format!(
            "sequence support {} exceeds block order {}",
            a.len(),
            block.order()
        )));
    }
    if a.iter().any(|&x| !(x >= T::zero()) || !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "sequence entries must be finite and >= 0".into(),
        ));
    }
    Ok(())
}

fn weighted_norm<T: Scalar>(a: &[T]) -> T {
    a.iter().enumerate().fold(T::zero(), |acc, (n, &x)| {
        acc + T::from_usize_exact(n + 1).sqrt() * x * x
    })
}

/// `(a, v^σ a) ≤ C_σ Σ √(n+1) a_n²`, strict for `σ = 1` and `a ≠ 0`.
pub fn quadratic_form_bound_check<T: Scalar>(
    sigma: u8,
    m0_block: &SectorBlock<T>,
    a: &[T],
) -> Result<VerificationReport> {
    check_sigma(sigma)?;
    validate_sequence(m0_block, a)?;
    let constants = BoundConstants::<T>::compute()?;
    let lhs = m0_block.potential(sigma).quadratic_form(a);
    let rhs = constants.c(sigma) * weighted_norm(a);
    let nonzero = a.iter().any(|&x| x > T::zero());
    let relation = if sigma == 1 && nonzero {
        Relation::Less
    } else {
        Relation::LessEq
    };
    let mut report = VerificationReport::new("form-bound");
    report.check(
        || format!("sigma={sigma} (a, v a) <= C sum sqrt(n+1) a^2"),
        lhs.to_f64_lossy(),
        rhs.to_f64_lossy(),
        relation,
        ENTRYWISE_TOL,
    );
    Ok(report)
}

/// `E₀[a] ≥ Σ 2√(n+1)(1 - Z/Z_c) a_n²` for `0 ≤ Z ≤ Z_c`.
pub fn energy_lower_bound_check<T: Scalar>(
    z: T,
    m0_block: &SectorBlock<T>,
    a: &[T],
) -> Result<VerificationReport> {
    validate_sequence(m0_block, a)?;
    let constants = BoundConstants::<T>::compute()?;
    if !(z >= T::zero() && z <= constants.zc) {
        return Err(Error::InvalidArgument(format!(
            "coupling Z = {z} outside [0, Z_c = {}]",
            constants.zc
        )));
    }
    let energy = m0_block.energy(z, a);
    let bound = T::lit(2.0) * (T::one() - z / constants.zc) * weighted_norm(a);
    let mut report = VerificationReport::new("energy-bound");
    report.check(
        || format!("Z={z}: E0[a] >= 2(1 - Z/Zc) sum sqrt(n+1) a^2"),
        bound.to_f64_lossy(),
        energy.to_f64_lossy(),
        Relation::LessEq,
        ENTRYWISE_TOL,
    );
    Ok(report)
}

/// Non-negative sequence with entries uniform in `[0, 1)` on a random
/// contiguous window inside `0..=n_max`; zero before the window.
pub fn random_sequence<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n_max: usize) -> Vec<T> {
    let a = rng.gen_range(0..=n_max);
    let b = rng.gen_range(0..=n_max);
    let (lo, hi) = (a.min(b), a.max(b));
    let mut seq = vec![T::zero(); hi + 1];
    for x in &mut seq[lo..=hi] {
        *x = T::lit(rng.gen::<f64>());
    }
    seq
}

/// Seeded sweep of [`quadratic_form_bound_check`] (both `σ`) and, when `z` is
/// given, [`energy_lower_bound_check`] over `count` random sequences.
pub fn random_form_sweep<T: Scalar>(
    m0_block: &SectorBlock<T>,
    count: usize,
    seed: u64,
    z: Option<T>,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("form-bound-random").with_seed(seed);
    for _ in 0..count {
        let a: Vec<T> = random_sequence(&mut rng, m0_block.n_max);
        for sigma in 0..=1 {
            report.merge(quadratic_form_bound_check(sigma, m0_block, &a)?);
        }
        if let Some(z) = z {
            report.merge(energy_lower_bound_check(z, m0_block, &a)?);
        }
    }
    report.note(format!(
        "{count} sequences, support within 0..={}, seed {seed}",
        m0_block.n_max
    ));
    Ok(report)
}
