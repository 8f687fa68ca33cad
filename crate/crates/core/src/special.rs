//! Gamma-family primitives and generalized Laguerre polynomials.
//!
//! Everything that forms a ratio of Gamma functions goes through
//! [`ln_pochhammer`], which works in log space and never evaluates a Gamma
//! function on its own. Large arguments use the difference of two Stirling
//! series written with `ln_1p`, small arguments are shifted up with the
//! functional equation first.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Relation, VerificationReport, STRICT_GUARD};
use crate::scalar::Scalar;

/// Below this argument the Stirling series is not used directly.
const STIRLING_MIN: f64 = 10.0;

/// `B_{2k} / (2k (2k - 1))` for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Largest polynomial degree accepted by [`laguerre`].
pub const LAGUERRE_MAX_DEGREE: usize = 10_000;

/// Tail of the Stirling series, `ln Γ(x) - [(x - ½) ln x - x + ½ ln 2π]`.
fn stirling_tail<T: Scalar>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    // Horner in 1/x^2, highest order first.
    let mut acc = T::zero();
    for &c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + T::lit(c);
    }
    acc * inv
}

fn ln_gamma_stirling<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    let ln_sqrt_2pi = T::lit(0.918_938_533_204_672_8);
    (x - half) * x.ln() - x + ln_sqrt_2pi + stirling_tail(x)
}

/// Number of unit steps needed to push `x` to the Stirling range.
fn shift_count<T: Scalar>(x: T) -> usize {
    let min = T::lit(STIRLING_MIN);
    if x >= min {
        0
    } else {
        (min - x).ceil().to_usize().unwrap_or(0)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(
            "log_gamma",
            format!("x = {x} must be finite and > 0"),
        ));
    }
    if x == T::one() || x == T::lit(2.0) {
        return Ok(T::zero());
    }
    let shift = shift_count(x);
    if shift == 0 {
        return Ok(ln_gamma_stirling(x));
    }
    let mut product = T::one();
    let mut xi = x;
    for _ in 0..shift {
        product = product * xi;
        xi = xi + T::one();
    }
    Ok(ln_gamma_stirling(xi) - product.ln())
}

/// `(z)_a = Γ(z + a) / Γ(z)` held as sign and log of the magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PochhammerValue<T> {
    pub log_abs: T,
    pub sign: i8,
}

/// Product of two symbols: logs add, signs multiply.
impl<T: Scalar> std::ops::Mul for PochhammerValue<T> {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        Self {
            log_abs: self.log_abs + other.log_abs,
            sign: self.sign * other.sign,
        }
    }
}

impl<T: Scalar> PochhammerValue<T> {
    pub fn one() -> Self {
        Self {
            log_abs: T::zero(),
            sign: 1,
        }
    }

    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            s if s < 0 => -self.log_abs.exp(),
            _ => self.log_abs.exp(),
        }
    }

    pub fn recip(self) -> Self {
        Self {
            log_abs: -self.log_abs,
            sign: self.sign,
        }
    }
}

/// `ln (z)_a` for `z > 0` and `z + a > 0`.
pub fn ln_pochhammer<T: Scalar>(z: T, a: T) -> Result<T> {
    let za = z + a;
    if !(z > T::zero()) || !(za > T::zero()) || !z.is_finite() || !za.is_finite() {
        return Err(Error::domain(
            "pochhammer",
            format!("need z > 0 and z + a > 0, got z = {z}, a = {a}"),
        ));
    }
    if a == T::zero() {
        return Ok(T::zero());
    }

    let shift = shift_count(z.min(za));
    // ln (z)_a = ln (z+s)_a - sum_{i<s} ln((z+a+i)/(z+i))
    let mut correction = T::zero();
    let mut zi = z;
    for _ in 0..shift {
        correction = correction + (a / zi).ln_1p();
        zi = zi + T::one();
    }
    let zs = zi;
    let zas = zs + a;
    let half = T::lit(0.5);
    let large =
        (zs - half) * (a / zs).ln_1p() + a * zas.ln() - a + stirling_tail(zas) - stirling_tail(zs);
    Ok(large - correction)
}

/// `(z)_a = Γ(z + a) / Γ(z)` in log space.
pub fn pochhammer<T: Scalar>(z: T, a: T) -> Result<PochhammerValue<T>> {
    Ok(PochhammerValue {
        log_abs: ln_pochhammer(z, a)?,
        sign: 1,
    })
}

/// Generalized Laguerre polynomial `L_n^α(t)` by upward three-term recurrence.
pub fn laguerre<T: Scalar>(n: usize, alpha: T, t: T) -> Result<T> {
    if n > LAGUERRE_MAX_DEGREE {
        return Err(Error::domain(
            "laguerre",
            format!("degree {n} exceeds {LAGUERRE_MAX_DEGREE}"),
        ));
    }
    if !(alpha > -T::one()) {
        return Err(Error::domain(
            "laguerre",
            format!("alpha = {alpha} must be > -1"),
        ));
    }
    if !(t >= T::zero()) {
        return Err(Error::domain("laguerre", format!("t = {t} must be >= 0")));
    }
    Ok(laguerre_unchecked(n, alpha, t))
}

/// Recurrence without argument validation; callers guarantee the domain.
pub(crate) fn laguerre_unchecked<T: Scalar>(n: usize, alpha: T, t: T) -> T {
    laguerre_pair(n, alpha, t).1
}

/// Returns `(L_{n-1}^α(t), L_n^α(t))`, with `L_{-1} = 0`.
pub(crate) fn laguerre_pair<T: Scalar>(n: usize, alpha: T, t: T) -> (T, T) {
    let one = T::one();
    let mut prev = T::zero();
    let mut cur = one;
    for k in 0..n {
        let kf = T::from_usize_exact(k);
        // (k+1) L_{k+1} = (2k + 1 + α - t) L_k - (k + α) L_{k-1}
        let next = ((kf + kf + one + alpha - t) * cur - (kf + alpha) * prev) / (kf + one);
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Both sides of Gautschi's inequality at one `(x, s)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GautschiCell {
    pub x: f64,
    pub s: f64,
    pub lower: f64,
    pub ratio: f64,
    pub upper: f64,
}

impl GautschiCell {
    /// `ratio - lower`
    pub fn left_margin(&self) -> f64 {
        self.ratio - self.lower
    }

    /// `upper - ratio`
    pub fn right_margin(&self) -> f64 {
        self.upper - self.ratio
    }
}

pub fn gautschi_cell<T: Scalar>(x: T, s: T) -> Result<GautschiCell> {
    if !(x > T::zero()) || !(s >= T::zero() && s <= T::one()) {
        return Err(Error::domain(
            "gautschi_check",
            format!("need x > 0 and 0 <= s <= 1, got x = {x}, s = {s}"),
        ));
    }
    let one = T::one();
    let ratio = pochhammer(x + one, s - one)?.value();
    Ok(GautschiCell {
        x: x.to_f64_lossy(),
        s: s.to_f64_lossy(),
        lower: (x + one).powf(s - one).to_f64_lossy(),
        ratio: ratio.to_f64_lossy(),
        upper: x.powf(s - one).to_f64_lossy(),
    })
}

/// Checks `(x+1)^{s-1} <= Γ(x+s)/Γ(x+1) < x^{s-1}`.
///
/// At `s = 0` and `s = 1` the right-hand side is attained exactly, so those
/// cells come back inconclusive rather than passing.
pub fn gautschi_check<T: Scalar>(x: T, s: T) -> Result<VerificationReport> {
    let cell = gautschi_cell(x, s)?;
    let mut report = VerificationReport::new("gautschi");
    report.check(
        || format!("lower x={} s={}", cell.x, cell.s),
        cell.lower,
        cell.ratio,
        Relation::LessEq,
        STRICT_GUARD,
    );
    report.check(
        || format!("upper x={} s={}", cell.x, cell.s),
        cell.ratio,
        cell.upper,
        Relation::Less,
        STRICT_GUARD,
    );
    Ok(report)
}

/// The default sweep grid: x = 0.1, 0.2, …, 100 and s ∈ {0, ¼, ½, ¾, 1}.
pub fn gautschi_default_grid() -> (Vec<f64>, Vec<f64>) {
    let xs = (1..=1000).map(|i| i as f64 / 10.0).collect();
    let ss = vec![0.0, 0.25, 0.5, 0.75, 1.0];
    (xs, ss)
}

pub fn gautschi_sweep<T: Scalar>(xs: &[T], ss: &[T]) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("gautschi");
    for &x in xs {
        for &s in ss {
            report.merge(gautschi_check(x, s)?);
        }
    }
    if report.inconclusive > 0 {
        report
            .note("s = 0 and s = 1 make the upper bound an identity; those cells are inconclusive");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Γ(n + ½) by the functional equation from Γ(½) = √π.
    fn gamma_half_integer(n: u32) -> f64 {
        let mut g = PI.sqrt();
        for k in 0..n {
            g *= k as f64 + 0.5;
        }
        g
    }

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn log_gamma_trivial_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(
            log_gamma(0.5).unwrap(),
            0.572_364_942_924_700_1,
            max_relative = 1e-14
        );
    }

    #[test]
    fn log_gamma_matches_factorials_and_half_integers() {
        for n in 1..=60u32 {
            let exact = factorial(n - 1).ln();
            let got = log_gamma(n as f64).unwrap();
            assert!((got - exact).abs() <= 1e-14 * exact.abs().max(1.0), "n={n}");
        }
        for n in 0..=60u32 {
            let exact = gamma_half_integer(n).ln();
            let got = log_gamma(n as f64 + 0.5).unwrap();
            assert!((got - exact).abs() <= 1e-14 * exact.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn log_gamma_quarter_by_reflection() {
        // Γ(¼)Γ(¾) = π / sin(π/4) = π√2
        let sum = log_gamma(0.25).unwrap() + log_gamma(0.75).unwrap();
        assert_relative_eq!(sum, (PI * 2f64.sqrt()).ln(), max_relative = 1e-14);
        // Γ(¼) = 3.625609908221908...
        assert_relative_eq!(
            log_gamma(0.25f64).unwrap().exp(),
            3.625_609_908_221_908,
            max_relative = 1e-14
        );
    }

    #[test]
    fn log_gamma_rejects_non_positive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        assert_relative_eq!(
            pochhammer(1.0, -0.5).unwrap().value(),
            PI.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            pochhammer(0.5, 0.5).unwrap().value(),
            1.0 / PI.sqrt(),
            max_relative = 1e-14
        );
        // Γ(4.5)/Γ(5) = (3.5·2.5·1.5·0.5·√π)/24
        let oracle = gamma_half_integer(4) / 24.0;
        assert_relative_eq!(
            pochhammer(5.0, -0.5).unwrap().value(),
            oracle,
            max_relative = 1e-14
        );
        assert_eq!(pochhammer(3.7, 0.0).unwrap(), PochhammerValue::one());
    }

    #[test]
    fn pochhammer_large_indices_stay_finite() {
        // (n + ½)_{½} ~ √n for n = 10^6
        let v = pochhammer(1e6 + 0.5, 0.5).unwrap().value();
        assert_relative_eq!(v, (1e6f64).sqrt(), max_relative = 1e-6);
        // (1)_{10^6} = (10^6)! would overflow as a value, the log does not.
        let lv: f64 = ln_pochhammer(1.0, 1e6).unwrap();
        assert!(lv.is_finite() && lv > 1e7);
        assert_relative_eq!(lv, log_gamma(1e6 + 1.0).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn pochhammer_matches_integer_products() {
        // (z)_k = z (z+1) ... (z+k-1)
        for &z in &[0.1, 0.5, 1.0, 3.25, 17.5, 99.0] {
            let mut prod = 1.0;
            for k in 0..40 {
                let got = pochhammer(z, k as f64).unwrap().value();
                assert_relative_eq!(got, prod, max_relative = 1e-13);
                prod *= z + k as f64;
            }
        }
    }

    #[test]
    fn pochhammer_domain_errors() {
        assert!(pochhammer(0.0, 1.0).is_err());
        assert!(pochhammer(1.0, -1.0).is_err());
        assert!(pochhammer(-2.0, 5.0).is_err());
    }

    /// Explicit coefficient form L_n^α(t) = Σ_j (-1)^j C(n+α, n-j) t^j / j!,
    /// summed in exact rational arithmetic (integer α, t taken as its exact
    /// binary value) so the alternating sum loses nothing to cancellation.
    fn laguerre_coefficients(n: usize, alpha: u32, t: f64) -> f64 {
        use num::{BigInt, BigRational, One, ToPrimitive, Zero};
        let t = BigRational::from_float(t).unwrap();
        let mut sum = BigRational::zero();
        let mut t_pow = BigRational::one();
        let mut j_fact = BigInt::one();
        for j in 0..=n {
            if j > 0 {
                t_pow = &t_pow * &t;
                j_fact *= BigInt::from(j);
            }
            // C(n+α, n-j) for integer α
            let mut binom = BigInt::one();
            for i in 1..=(n - j) {
                binom = binom * BigInt::from(alpha as usize + j + i) / BigInt::from(i);
            }
            let term = BigRational::from_integer(binom) * &t_pow
                / BigRational::from_integer(j_fact.clone());
            if j % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        sum.to_f64().unwrap()
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 0.0, 3.7).unwrap(), 1.0);
        for m in 0..5 {
            let t = 0.9;
            assert_relative_eq!(
                laguerre(1, m as f64, t).unwrap(),
                1.0 + m as f64 - t,
                max_relative = 1e-15
            );
        }
        let oracle = laguerre_coefficients(5, 2, 1.3);
        assert!((laguerre(5, 2.0, 1.3).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn laguerre_agrees_with_coefficient_sum() {
        for n in 0..=30 {
            for alpha in 0..=10 {
                for &t in &[0.0, 0.3, 1.0, 2.5, 7.0] {
                    let a = laguerre(n, alpha as f64, t).unwrap();
                    let b = laguerre_coefficients(n, alpha, t);
                    assert!(
                        (a - b).abs() <= 1e-12 * b.abs().max(1.0),
                        "n={n} alpha={alpha} t={t}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn laguerre_limits() {
        assert!(laguerre(LAGUERRE_MAX_DEGREE, 0.0, 1.0).is_ok());
        assert!(laguerre(LAGUERRE_MAX_DEGREE + 1, 0.0, 1.0).is_err());
        assert!(laguerre(3, -1.0, 1.0).is_err());
        assert!(laguerre(3, 0.0, -0.1).is_err());
    }

    #[test]
    fn gautschi_examples() {
        let cell = gautschi_cell(1.0, 0.5).unwrap();
        assert_relative_eq!(cell.lower, 0.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(cell.ratio, PI.sqrt() / 2.0, max_relative = 1e-14);
        assert_eq!(cell.upper, 1.0);
        let r = gautschi_check(1.0, 0.5).unwrap();
        assert!(r.passed());
        assert_eq!(r.inconclusive, 0);

        let cell = gautschi_cell(3.0, 1.0).unwrap();
        assert_eq!(cell.ratio, 1.0);
        let r = gautschi_check(3.0, 1.0).unwrap();
        assert!(r.passed());
        assert_eq!(r.inconclusive, 1);
    }

    #[test]
    fn gautschi_grid_passes() {
        let (xs, ss) = gautschi_default_grid();
        let r = gautschi_sweep(&xs, &ss).unwrap();
        assert_eq!(r.checks, 2 * xs.len() * ss.len());
        assert!(r.passed(), "{r}");
        // only the s ∈ {0, 1} upper bounds are identities
        assert_eq!(r.inconclusive, 2 * xs.len());
    }

    #[test]
    fn f32_smoke() {
        let v: f32 = pochhammer(1.0f32, -0.5).unwrap().value();
        assert!((v - std::f32::consts::PI.sqrt()).abs() < 1e-5);
        assert!((laguerre(1, 2.0f32, 0.5).unwrap() - 2.5).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn functional_equation(z in 1e-3f64..100.0, a in -0.5f64..50.0) {
            let lhs = pochhammer(z, a + 1.0).unwrap().value();
            let rhs = (z + a) * pochhammer(z, a).unwrap().value();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }

        #[test]
        fn reflection(z in 1e-3f64..0.999) {
            let v = (log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap()).exp() * (PI * z).sin();
            prop_assert!((v - PI).abs() <= 1e-12 * PI);
        }

        #[test]
        fn pochhammer_is_gamma_ratio(z in 0.05f64..150.0, a in 0.0f64..40.0) {
            let (upper, lower) = (log_gamma(z + a).unwrap(), log_gamma(z).unwrap());
            let got = ln_pochhammer(z, a).unwrap();
            // the difference of two logs is only as good as their magnitude
            let tol = 4e-15 * (upper.abs() + lower.abs()).max(1.0);
            prop_assert!((got - (upper - lower)).abs() <= tol);
        }
    }
}
