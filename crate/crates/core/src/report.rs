//! Structured outcome of an inequality sweep.

use std::fmt;

use serde::Serialize;

/// Default relative tolerance for analytically non-strict entrywise checks.
pub const ENTRYWISE_TOL: f64 = 1e-12;

/// Guard band for analytically strict inequalities.
pub const STRICT_GUARD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

/// Whether the inequality `lhs (<=|<) rhs` is analytically strict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Less,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Outcome of one suite. Margins are `rhs - lhs`, so positive means the
/// inequality holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub worst_margin: f64,
    pub worst_relative_margin: f64,
    pub worst_case: Option<String>,
    pub seed: Option<u64>,
    /// First few violations, for diagnostics.
    pub failed: Vec<Failure>,
    pub notes: Vec<String>,
}

const MAX_RECORDED_FAILURES: usize = 16;

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: 0,
            failures: 0,
            inconclusive: 0,
            worst_margin: f64::INFINITY,
            worst_relative_margin: f64::INFINITY,
            worst_case: None,
            seed: None,
            failed: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn verdict(&self) -> Verdict {
        if self.failures > 0 {
            Verdict::Fail
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    /// A suite passes when nothing failed; inconclusive cells are allowed.
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Records `lhs <= rhs` (or `<`) with tolerance `tol * max(|lhs|, |rhs|, 1)`.
    ///
    /// Non-strict: a violation inside the tolerance passes. Strict: a margin
    /// inside the band is inconclusive.
    pub fn check(
        &mut self,
        label: impl FnOnce() -> String,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        tol: f64,
    ) -> Verdict {
        self.checks += 1;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        let band = tol * scale;
        let margin = rhs - lhs;
        let relative = margin / scale;

        let verdict = if margin.is_nan() {
            Verdict::Fail
        } else {
            match relation {
                Relation::LessEq if margin >= -band => Verdict::Pass,
                Relation::Less if margin > band => Verdict::Pass,
                Relation::Less if margin >= -band => Verdict::Inconclusive,
                _ => Verdict::Fail,
            }
        };

        let new_worst = relative < self.worst_relative_margin || relative.is_nan();
        let label = if new_worst || verdict == Verdict::Fail {
            Some(label())
        } else {
            None
        };
        if margin < self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
        }
        if new_worst {
            self.worst_relative_margin = relative;
            self.worst_case = label.clone();
        }

        match verdict {
            Verdict::Pass => {}
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Fail => {
                self.failures += 1;
                if self.failed.len() < MAX_RECORDED_FAILURES {
                    self.failed.push(Failure {
                        label: label.unwrap_or_default(),
                        lhs,
                        rhs,
                        margin,
                    });
                }
            }
        }
        verdict
    }

    /// Records an equality that must hold bit for bit.
    pub fn check_bitwise(&mut self, label: impl FnOnce() -> String, a: f64, b: f64) -> Verdict {
        self.checks += 1;
        if a.to_bits() == b.to_bits() {
            Verdict::Pass
        } else {
            self.failures += 1;
            if self.failed.len() < MAX_RECORDED_FAILURES {
                self.failed.push(Failure {
                    label: label(),
                    lhs: a,
                    rhs: b,
                    margin: -(a - b).abs(),
                });
            }
            Verdict::Fail
        }
    }

    /// Folds another report into this one.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.failures += other.failures;
        self.inconclusive += other.inconclusive;
        if other.worst_margin < self.worst_margin {
            self.worst_margin = other.worst_margin;
        }
        if other.worst_relative_margin < self.worst_relative_margin {
            self.worst_relative_margin = other.worst_relative_margin;
            self.worst_case = other.worst_case;
        }
        if self.seed.is_none() {
            self.seed = other.seed;
        }
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failed.len());
        self.failed.extend(other.failed.into_iter().take(room));
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:?} ({} checks, {} failed, {} inconclusive, worst margin {:.3e}",
            self.suite,
            self.verdict(),
            self.checks,
            self.failures,
            self.inconclusive,
            self.worst_margin
        )?;
        if let Some(case) = &self.worst_case {
            write!(f, " at {case}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_absorbs_rounding_for_non_strict() {
        let mut r = VerificationReport::new("t");
        assert_eq!(
            r.check(
                || "a".into(),
                1.0 + 1e-14,
                1.0,
                Relation::LessEq,
                ENTRYWISE_TOL
            ),
            Verdict::Pass
        );
        assert_eq!(
            r.check(
                || "b".into(),
                1.0 + 1e-9,
                1.0,
                Relation::LessEq,
                ENTRYWISE_TOL
            ),
            Verdict::Fail
        );
        assert_eq!(r.failures, 1);
        assert!(!r.passed());
    }

    #[test]
    fn strict_equality_is_inconclusive() {
        let mut r = VerificationReport::new("t");
        assert_eq!(
            r.check(|| "eq".into(), 1.0, 1.0, Relation::Less, STRICT_GUARD),
            Verdict::Inconclusive
        );
        assert!(r.passed());
        assert_eq!(r.verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn nan_fails() {
        let mut r = VerificationReport::new("t");
        assert_eq!(
            r.check(|| "nan".into(), f64::NAN, 1.0, Relation::LessEq, 0.0),
            Verdict::Fail
        );
    }
}
