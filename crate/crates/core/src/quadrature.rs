//! Brute-force path to the Landau-basis matrix elements.
//!
//! The basis functions separate as `f_{mn}(r, φ) = R_{mn}(r) e^{imφ}`, so the
//! angular integral is the constant `2π` and only a radial integral is left.
//! With `t = r²` it becomes a Laguerre-weighted integral of a polynomial,
//! which generalized Gauss–Laguerre quadrature evaluates exactly once the
//! rule has enough nodes. Nothing here uses the closed-form k-sum.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, DenseMatrix};
use crate::scalar::Scalar;
use crate::special::{laguerre_pair, ln_pochhammer, log_gamma};

/// Largest radial index the oracle accepts.
pub const ORACLE_MAX_INDEX: usize = 100;

const NEWTON_MAX_STEPS: usize = 20;

/// Nodes and weights of `∫₀^∞ f(t) t^α e^{-t} dt ≈ Σ wᵢ f(tᵢ)`.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub weight_exponent: T,
}

impl<T: Scalar> QuadratureRule<T> {
    /// Generalized Gauss–Laguerre rule with `count` nodes.
    ///
    /// Golub–Welsch eigenvalues seed a Newton polish on the Laguerre
    /// recurrence; weights come from the derivative formula
    /// `w = Γ(n+α+1) / (n! t [L_n^α'(t)]²)` in log space.
    pub fn gauss_laguerre(count: usize, alpha: T) -> Result<Self> {
        if count == 0 {
            return Err(Error::Quadrature("rule needs at least one node".into()));
        }
        if !(alpha > -T::one()) {
            return Err(Error::Quadrature(format!(
                "weight exponent {alpha} must be > -1"
            )));
        }
        let one = T::one();
        let mut jacobi = DenseMatrix::zeros(count)?;
        for i in 0..count {
            let fi = T::from_usize_exact(i);
            jacobi[(i, i)] = fi + fi + alpha + one;
            if i > 0 {
                let off = (fi * (fi + alpha)).sqrt();
                jacobi[(i, i - 1)] = off;
                jacobi[(i - 1, i)] = off;
            }
        }
        let seeds = symmetric_eigen(&jacobi, false)
            .map_err(|e| Error::Quadrature(format!("Jacobi matrix eigenvalues: {e}")))?
            .values;

        let nf = T::from_usize_exact(count);
        let ln_scale = log_gamma(nf + alpha + one)? - log_gamma(nf + one)?;
        let mut nodes = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        for seed in seeds {
            let mut x = seed;
            let mut derivative = T::zero();
            for step in 0..=NEWTON_MAX_STEPS {
                let (prev, cur) = laguerre_pair(count, alpha, x);
                derivative = (nf * cur - (nf + alpha) * prev) / x;
                if step == NEWTON_MAX_STEPS {
                    break;
                }
                let dx = cur / derivative;
                x = x - dx;
                if dx.abs() <= T::lit(4.0) * T::epsilon() * x.abs() {
                    let (prev, cur) = laguerre_pair(count, alpha, x);
                    derivative = (nf * cur - (nf + alpha) * prev) / x;
                    break;
                }
            }
            if !(x > T::zero()) || !derivative.is_finite() || derivative == T::zero() {
                return Err(Error::Quadrature(format!(
                    "Newton polish failed near node {seed} (count {count}, alpha {alpha})"
                )));
            }
            let ln_w = ln_scale - x.ln() - T::lit(2.0) * derivative.abs().ln();
            nodes.push(x);
            weights.push(ln_w.exp());
        }
        Ok(Self {
            nodes,
            weights,
            weight_exponent: alpha,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Landau basis function `f_{mn}` with its normalization
/// `√(n! / (π (n+|m|)!))` held as a log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction<T> {
    pub m: i64,
    pub n: usize,
    pub ln_normalization: T,
}

impl<T: Scalar> BasisFunction<T> {
    pub fn new(m: i64, n: usize) -> Result<Self> {
        if n > ORACLE_MAX_INDEX {
            return Err(Error::domain(
                "basis function",
                format!("n = {n} exceeds oracle limit {ORACLE_MAX_INDEX}"),
            ));
        }
        let abs_m = T::from_usize_exact(m.unsigned_abs() as usize);
        let half = T::lit(0.5);
        let ln_norm =
            -half * T::PI().ln() - half * ln_pochhammer(T::from_usize_exact(n + 1), abs_m)?;
        Ok(Self {
            m,
            n,
            ln_normalization: ln_norm,
        })
    }

    pub fn normalization(&self) -> T {
        self.ln_normalization.exp()
    }

    /// `N e^{-r²/2} r^{|m|} L_n^{|m|}(r²)`; the phase `e^{imφ}` is dropped.
    pub fn radial(&self, r: T) -> T {
        let abs_m = self.m.unsigned_abs() as usize;
        let r2 = r * r;
        let power = if abs_m == 0 {
            T::zero()
        } else if r == T::zero() {
            return T::zero();
        } else {
            T::from_usize_exact(abs_m) * r.ln()
        };
        let envelope = (self.ln_normalization - r2 * T::lit(0.5) + power).exp();
        envelope * laguerre_pair(self.n, T::from_usize_exact(abs_m), r2).1
    }
}

pub fn eval_basis_radial<T: Scalar>(m: i64, n: usize, r: T) -> Result<T> {
    if !(r >= T::zero()) {
        return Err(Error::domain(
            "eval_basis_radial",
            format!("r = {r} must be >= 0"),
        ));
    }
    Ok(BasisFunction::new(m, n)?.radial(r))
}

fn check_pair(op: &'static str, n: usize, n2: usize) -> Result<()> {
    if n.max(n2) > ORACLE_MAX_INDEX {
        return Err(Error::domain(
            op,
            format!("indices ({n}, {n2}) exceed oracle limit {ORACLE_MAX_INDEX}"),
        ));
    }
    Ok(())
}

/// `π N_n N_{n2} Σ wᵢ L_n(tᵢ) L_{n2}(tᵢ)` for a rule with exponent `α`.
fn radial_pair<T: Scalar>(rule: &QuadratureRule<T>, m: i64, n: usize, n2: usize) -> Result<T> {
    let abs_m = T::from_usize_exact(m.unsigned_abs() as usize);
    let half = T::lit(0.5);
    let ln_prefactor = -half
        * (ln_pochhammer(T::from_usize_exact(n + 1), abs_m)?
            + ln_pochhammer(T::from_usize_exact(n2 + 1), abs_m)?);
    let sum = rule.integrate(|t| laguerre_pair(n, abs_m, t).1 * laguerre_pair(n2, abs_m, t).1);
    Ok(ln_prefactor.exp() * sum)
}

fn node_count(n: usize, n2: usize) -> usize {
    n + n2 + 2
}

/// `(f_{mn}, |z|⁻¹ f_{mn2})` by quadrature with weight `t^{|m|-½} e^{-t}`.
pub fn oracle_coulomb_element<T: Scalar>(m: i64, n: usize, n2: usize) -> Result<T> {
    check_pair("oracle_coulomb_element", n, n2)?;
    let alpha = T::from_usize_exact(m.unsigned_abs() as usize) - T::lit(0.5);
    let rule = QuadratureRule::gauss_laguerre(node_count(n, n2), alpha)?;
    radial_pair(&rule, m, n, n2)
}

/// `(f_{mn}, f_{mn2})` by quadrature with weight `t^{|m|} e^{-t}`.
pub fn oracle_orthonormality<T: Scalar>(m: i64, n: usize, n2: usize) -> Result<T> {
    check_pair("oracle_orthonormality", n, n2)?;
    let alpha = T::from_usize_exact(m.unsigned_abs() as usize);
    let rule = QuadratureRule::gauss_laguerre(node_count(n, n2), alpha)?;
    radial_pair(&rule, m, n, n2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Integrand {
    Coulomb,
    Overlap,
}

/// Oracle that keeps one rule per `(|m|, integrand)`, sized for the largest
/// index requested so far. Sweeps should use this instead of the free
/// functions, which build a fresh rule per call.
#[derive(Debug, Default)]
pub struct Oracle<T> {
    rules: HashMap<(u64, Integrand), QuadratureRule<T>>,
}

impl<T: Scalar> Oracle<T> {
    pub fn new() -> Self {
        Self {
            rules: HashMap::new(),
        }
    }

    fn rule(&mut self, m: i64, n: usize, n2: usize, kind: Integrand) -> Result<&QuadratureRule<T>> {
        check_pair("oracle", n, n2)?;
        let abs_m = m.unsigned_abs();
        let alpha = match kind {
            Integrand::Coulomb => T::from_usize_exact(abs_m as usize) - T::lit(0.5),
            Integrand::Overlap => T::from_usize_exact(abs_m as usize),
        };
        // a larger rule stays exact for smaller pairs, so only ever grow
        let needed = node_count(n, n2);
        let key = (abs_m, kind);
        let stale = self.rules.get(&key).is_none_or(|r| r.len() < needed);
        if stale {
            let rule = QuadratureRule::gauss_laguerre(needed, alpha)?;
            self.rules.insert(key, rule);
        }
        Ok(&self.rules[&key])
    }

    pub fn coulomb_element(&mut self, m: i64, n: usize, n2: usize) -> Result<T> {
        let rule = self.rule(m, n, n2, Integrand::Coulomb)?.clone();
        radial_pair(&rule, m, n, n2)
    }

    pub fn overlap(&mut self, m: i64, n: usize, n2: usize) -> Result<T> {
        let rule = self.rule(m, n, n2, Integrand::Overlap)?.clone();
        radial_pair(&rule, m, n, n2)
    }

    /// Pre-sizes the rules so every index pair up to `n_max` is exact.
    pub fn prepare(&mut self, m: i64, n_max: usize) -> Result<()> {
        self.rule(m, n_max, n_max, Integrand::Coulomb)?;
        self.rule(m, n_max, n_max, Integrand::Overlap)?;
        Ok(())
    }
}
