//! Triangular fuzzy numbers, their α-cuts, and the interval arithmetic
//! needed to compare fuzzy quotients exactly.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for floating-point comparisons on fuzzy quantities.
pub const FUZZY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("invalid triangular fuzzy number ({a}, {b}, {c}): require finite a <= b <= c")]
    InvalidTfn { a: f64, b: f64, c: f64 },
    #[error("invalid interval [{lo}, {hi}]: require finite lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("alpha level {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("division by an interval or fuzzy number whose support contains zero")]
    DivisionDomain,
}

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(FuzzyError::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `other ⊆ self`, allowing `tol` of slack on either end.
    pub fn contains_interval(&self, other: &Interval, tol: f64) -> bool {
        self.lo - tol <= other.lo && other.hi <= self.hi + tol
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// Set quotient `{x / y : x ∈ self, y ∈ den}`.
    ///
    /// The divisor must not contain zero. For a positive divisor and a
    /// nonnegative numerator this reduces to `[lo / den.hi, hi / den.lo]`.
    pub fn divide(&self, den: &Interval) -> Result<Interval, FuzzyError> {
        if den.contains_zero() {
            return Err(FuzzyError::DivisionDomain);
        }
        let q = [self.lo / den.lo, self.lo / den.hi, self.hi / den.lo, self.hi / den.hi];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.4}, {:.4}]", self.lo, self.hi)
    }
}

/// Triangular fuzzy number `(a, b, c)` with `a <= b <= c`.
///
/// Membership rises linearly from `a` to the modal value `b` and falls
/// linearly to `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Tfn {
    a: f64,
    b: f64,
    c: f64,
}

impl TryFrom<[f64; 3]> for Tfn {
    type Error = FuzzyError;

    fn try_from([a, b, c]: [f64; 3]) -> Result<Self, Self::Error> {
        Tfn::new(a, b, c)
    }
}

impl From<Tfn> for [f64; 3] {
    fn from(t: Tfn) -> Self {
        [t.a, t.b, t.c]
    }
}

impl Tfn {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a > b || b > c {
            return Err(FuzzyError::InvalidTfn { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn crisp(x: f64) -> Self {
        Self { a: x, b: x, c: x }
    }

    /// Lower end of the support.
    pub fn lower(&self) -> f64 {
        self.a
    }

    /// Modal value (membership one).
    pub fn modal(&self) -> f64 {
        self.b
    }

    /// Upper end of the support.
    pub fn upper(&self) -> f64 {
        self.c
    }

    pub fn is_crisp(&self) -> bool {
        self.a == self.c
    }

    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.c {
            0.0
        } else if x == self.b {
            1.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else {
            (self.c - x) / (self.c - self.b)
        }
    }

    /// α-cut `[a + α(b − a), c − α(c − b)]`. Level 0 yields the closed
    /// support `[a, c]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        check_alpha(alpha)?;
        Ok(self.cut_unchecked(alpha))
    }

    pub(crate) fn cut_unchecked(&self, alpha: f64) -> Interval {
        Interval {
            lo: self.a + alpha * (self.b - self.a),
            hi: self.c - alpha * (self.c - self.b),
        }
    }

    pub fn support(&self) -> Interval {
        Interval { lo: self.a, hi: self.c }
    }

    /// Graded mean integration representation `(a + 4b + c) / 6`.
    pub fn gmir(&self) -> f64 {
        (self.a + 4.0 * self.b + self.c) / 6.0
    }

    /// Componentwise `λ·self + (1 − λ)·other`.
    pub fn convex_combination(&self, other: &Tfn, lambda: f64) -> Tfn {
        let mix = |x: f64, y: f64| lambda * x + (1.0 - lambda) * y;
        Tfn {
            a: mix(self.a, other.a),
            b: mix(self.b, other.b),
            c: mix(self.c, other.c),
        }
    }

    pub fn scale(&self, k: f64) -> Tfn {
        debug_assert!(k >= 0.0);
        Tfn {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
        }
    }

    fn negate(&self) -> Tfn {
        Tfn {
            a: -self.c,
            b: -self.b,
            c: -self.a,
        }
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), FuzzyError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(FuzzyError::AlphaOutOfRange(alpha))
    }
}

/// Membership of `x` in the exact fuzzy quotient `num / den`, i.e. the
/// largest α with `x ∈ num_α / den_α`.
///
/// Each boundary of the quotient cut is a ratio of two linear functions of
/// α, so every branch is solved in closed form.
pub fn exact_quotient_membership(num: &Tfn, den: &Tfn, x: f64) -> Result<f64, FuzzyError> {
    if den.a <= 0.0 && den.c >= 0.0 {
        return Err(FuzzyError::DivisionDomain);
    }
    // A/B = (−A)/(−B); reduce to a positive divisor.
    let (num, den) = if den.c < 0.0 {
        (num.negate(), den.negate())
    } else {
        (*num, *den)
    };

    let modal = num.b / den.b;
    if x == modal {
        return Ok(1.0);
    }
    let alpha = if x < modal {
        // Lower boundary: num_l/den_u when num_l >= 0, num_l/den_l otherwise.
        let (top, bottom) = if x >= 0.0 {
            (x * den.c - num.a, (num.b - num.a) + x * (den.c - den.b))
        } else {
            (x * den.a - num.a, (num.b - num.a) - x * (den.b - den.a))
        };
        top / bottom
    } else {
        // Upper boundary: num_u/den_l when num_u >= 0, num_u/den_u otherwise.
        let (top, bottom) = if x > 0.0 {
            (num.c - x * den.a, (num.c - num.b) + x * (den.b - den.a))
        } else {
            (num.c - x * den.c, (num.c - num.b) - x * (den.c - den.b))
        };
        top / bottom
    };
    if alpha.is_nan() {
        return Ok(0.0);
    }
    Ok(alpha.clamp(0.0, 1.0))
}

/// Endpoint-ratio approximation of a fuzzy quotient: the support is the
/// interval quotient of the supports and the modal value is `b₁/b₂`.
///
/// For a nonnegative numerator this is `(a₁/c₂, b₁/b₂, c₁/a₂)`.
pub fn approximate_quotient(num: &Tfn, den: &Tfn) -> Result<Tfn, FuzzyError> {
    if den.a <= 0.0 {
        return Err(FuzzyError::DivisionDomain);
    }
    let support = num.support().divide(&den.support())?;
    Tfn::new(support.lo, num.b / den.b, support.hi)
}
