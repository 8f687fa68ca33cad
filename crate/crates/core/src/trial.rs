//! Trial sequences `a_n = (n+1)^{-3/4}` (cut off at `N`) whose energy
//! diverges like `2(1 - Z/Z_c) log N`.
//!
//! Exchanging the n- and k-sums in the closed form of `v^σ` (at `m = 0`) gives
//!
//! ```text
//! (a, v^σ a) = (1/π) Σ_{k=0}^{N} (k+1)_{σ-½} ( Σ_{j=1}^{N-k+1} (j)_{-½} / (j+k)^{¾+σ/2} )²
//! ```
//!
//! which costs `O(N²)` instead of the `O(N³)` of a dense quadratic form.

use serde::Serialize;

use crate::coulomb::kinetic_diag;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::ln_pochhammer;

/// Largest cutoff accepted by [`trial_energies`].
pub const MAX_TRIAL_CUTOFF: usize = 50_000;

/// Records with smaller cutoffs are ignored by the slope fits.
pub const FIT_MIN_CUTOFF: usize = 100;

/// Exponent of the leading finite-size correction of the potential energies.
///
/// The inner sums are cut off at `N - k + 1`; their tails decay like
/// `(N-k)^{-1/4}`, which leaves an `N^{-1/4}` remainder in `(a, v⁰ a)` on
/// top of the constant.
pub const CORRECTION_EXPONENT: f64 = -0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialEnergyRecord<T> {
    pub cutoff: usize,
    pub kinetic: T,
    pub v0_energy: T,
    pub v1_energy: T,
}

impl<T: Scalar> TrialEnergyRecord<T> {
    /// `kinetic - (Z/2)(v0_energy + v1_energy)`
    pub fn total(&self, z: T) -> T {
        self.kinetic - z * T::lit(0.5) * (self.v0_energy + self.v1_energy)
    }
}

/// `a_n = (n+1)^{-3/4}` for `n = 0..=cutoff`.
pub fn trial_sequence<T: Scalar>(cutoff: usize) -> Vec<T> {
    (0..=cutoff)
        .map(|n| T::from_usize_exact(n + 1).powf(T::lit(-0.75)))
        .collect()
}

fn validate_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 || cutoff > MAX_TRIAL_CUTOFF {
        return Err(Error::InvalidArgument(format!(
            "trial cutoff {cutoff} must be in 1..={MAX_TRIAL_CUTOFF}"
        )));
    }
    Ok(())
}

/// `(a, v^σ a)` for the trial sequence, by the k-sum representation.
pub fn trial_potential_energy<T: Scalar>(sigma: u8, cutoff: usize) -> Result<T> {
    validate_cutoff(cutoff)?;
    if sigma > 1 {
        return Err(Error::InvalidArgument(format!(
            "sigma = {sigma} must be 0 or 1"
        )));
    }
    let half = T::lit(0.5);
    let exponent = -(T::lit(0.75) + T::from_usize_exact(sigma as usize) * half);
    // index j - 1 holds the value for j = 1..=cutoff+1
    let poch: Vec<T> = (1..=cutoff + 1)
        .map(|j| ln_pochhammer(T::from_usize_exact(j), -half).map(T::exp))
        .collect::<Result<_>>()?;
    let powers: Vec<T> = (1..=cutoff + 1)
        .map(|j| T::from_usize_exact(j).powf(exponent))
        .collect();
    let shift = T::from_usize_exact(sigma as usize) - half;

    let mut total = T::zero();
    for k in 0..=cutoff {
        let terms = cutoff - k + 1;
        // Σ_j (j)_{-½} (j+k)^{-p}; powers[j+k-1] is (j+k)^{-p}
        let inner = poch[..terms]
            .iter()
            .zip(&powers[k..k + terms])
            .fold(T::zero(), |acc, (&p, &w)| acc + p * w);
        let prefactor = ln_pochhammer(T::from_usize_exact(k + 1), shift)?.exp();
        total = total + prefactor * inner * inner;
    }
    Ok(total / T::PI())
}

/// Kinetic and both potential energies of the trial sequence at `cutoff`.
pub fn trial_energies<T: Scalar>(cutoff: usize) -> Result<TrialEnergyRecord<T>> {
    validate_cutoff(cutoff)?;
    let kinetic = (0..=cutoff).fold(T::zero(), |acc, n| {
        let a2 = T::from_usize_exact(n + 1).powf(T::lit(-1.5));
        acc + kinetic_diag::<T>(0, n) * a2
    });
    Ok(TrialEnergyRecord {
        cutoff,
        kinetic,
        v0_energy: trial_potential_energy(0, cutoff)?,
        v1_energy: trial_potential_energy(1, cutoff)?,
    })
}

/// Which energy a slope fit is taken of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel<T> {
    Kinetic,
    V0,
    V1,
    Total(T),
}

impl<T: Scalar> Channel<T> {
    fn value(&self, r: &TrialEnergyRecord<T>) -> T {
        match *self {
            Channel::Kinetic => r.kinetic,
            Channel::V0 => r.v0_energy,
            Channel::V1 => r.v1_energy,
            Channel::Total(z) => r.total(z),
        }
    }
}

/// Least-squares fit of `E(N) ≈ slope·log N + intercept + correction·N^{-1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogSlopeFit<T> {
    pub slope: T,
    pub intercept: T,
    pub correction: T,
    /// Slope of the plain two-parameter fit `slope·log N + intercept`.
    pub linear_slope: T,
    pub points: usize,
}

/// Least squares by modified Gram–Schmidt; `columns` are the design columns.
fn least_squares<T: Scalar>(columns: &[Vec<T>], y: &[T]) -> Result<Vec<T>> {
    let p = columns.len();
    let mut q: Vec<Vec<T>> = columns.to_vec();
    let mut r = vec![vec![T::zero(); p]; p];
    for j in 0..p {
        for i in 0..j {
            let dot = q[i]
                .iter()
                .zip(&q[j])
                .fold(T::zero(), |a, (&x, &y)| a + x * y);
            r[i][j] = dot;
            let qi = q[i].clone();
            for (v, &b) in q[j].iter_mut().zip(&qi) {
                *v = *v - dot * b;
            }
        }
        let norm = q[j].iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        if !(norm > T::epsilon() * T::lit(64.0)) {
            return Err(Error::Fit("design matrix is rank deficient".into()));
        }
        r[j][j] = norm;
        for v in &mut q[j] {
            *v = *v / norm;
        }
    }
    let qty: Vec<T> = q
        .iter()
        .map(|col| col.iter().zip(y).fold(T::zero(), |a, (&x, &y)| a + x * y))
        .collect();
    let mut coef = vec![T::zero(); p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in (i + 1)..p {
            s = s - r[i][j] * coef[j];
        }
        coef[i] = s / r[i][i];
    }
    Ok(coef)
}

/// Fits one energy channel against `log N`.
///
/// Records with `N < 100` are dropped; at least four must remain and span
/// two decades.
pub fn fit_channel<T: Scalar>(
    records: &[TrialEnergyRecord<T>],
    channel: Channel<T>,
) -> Result<LogSlopeFit<T>> {
    let used: Vec<&TrialEnergyRecord<T>> = records
        .iter()
        .filter(|r| r.cutoff >= FIT_MIN_CUTOFF)
        .collect();
    if used.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 records with N >= {FIT_MIN_CUTOFF}, got {}",
            used.len()
        )));
    }
    let lo = used.iter().map(|r| r.cutoff).min().unwrap_or(0);
    let hi = used.iter().map(|r| r.cutoff).max().unwrap_or(0);
    if hi < 100 * lo {
        return Err(Error::Fit(format!(
            "cutoffs {lo}..={hi} span less than two decades"
        )));
    }
    let log_n: Vec<T> = used
        .iter()
        .map(|r| T::from_usize_exact(r.cutoff).ln())
        .collect();
    let ones = vec![T::one(); used.len()];
    let corr: Vec<T> = used
        .iter()
        .map(|r| T::from_usize_exact(r.cutoff).powf(T::lit(CORRECTION_EXPONENT)))
        .collect();
    let y: Vec<T> = used.iter().map(|r| channel.value(r)).collect();

    let full = least_squares(&[log_n.clone(), ones.clone(), corr], &y)?;
    let linear = least_squares(&[log_n, ones], &y)?;
    Ok(LogSlopeFit {
        slope: full[0],
        intercept: full[1],
        correction: full[2],
        linear_slope: linear[0],
        points: used.len(),
    })
}

/// Slope of `total(Z)` against `log N`; tends to `2(1 - Z/Z_c)`.
pub fn fit_log_slope<T: Scalar>(records: &[TrialEnergyRecord<T>], z: T) -> Result<LogSlopeFit<T>> {
    fit_channel(records, Channel::Total(z))
}

/// The cutoffs used by default: decades from 100 below `n_max`, then `n_max`.
pub fn default_cutoffs(n_max: usize) -> Vec<usize> {
    let mut cutoffs = Vec::new();
    let mut n = FIT_MIN_CUTOFF;
    while n < n_max {
        cutoffs.push(n);
        n *= 10;
    }
    cutoffs.push(n_max);
    cutoffs
}
