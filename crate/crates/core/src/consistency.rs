//! Consistency values for violated necessary conditions, consistency-index
//! lower bounds and consistency-ratio upper bounds.

use serde::Serialize;
use thiserror::Error;

use crate::fpcs::{AlphaGrid, Fpcs, LinguisticTerm};

/// Tolerance for the equality conditions (constant products across criteria).
pub const PRODUCT_TOL: f64 = 1e-9;
/// A decrease of f, g or h larger than this counts as a monotonicity violation.
pub const MONOTONE_TOL: f64 = 1e-12;
/// Scan step used to isolate the smallest positive root before bisection.
pub const ROOT_SCAN_STEP: f64 = 1e-3;

/// Label shown when no condition fails. The conditions are necessary only.
pub const NO_VIOLATION_VERDICT: &str = "no necessary-condition violation detected";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConsistencyError {
    #[error("consistency values require positive inputs")]
    Domain,
    #[error("the consistency index is undefined when best and worst are judged equal (\"1\")")]
    UndefinedCi,
}

/// Consistency value for an unequal pair of products `p1·q1 ≠ p2·q2`:
/// the smallest `x` with `(p1 + x)(q1 + x) = (p2 − x)(q2 − x)` for the
/// smaller product on the left.
pub fn cv_pair(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<f64, ConsistencyError> {
    if [p1, q1, p2, q2].iter().any(|&v| !(v > 0.0)) {
        return Err(ConsistencyError::Domain);
    }
    Ok((p2 * q2 - p1 * q1).abs() / (p1 + q1 + p2 + q2))
}

/// Smallest positive root of `(p − x)(q − x) = r + x`, or 0 when `p·q ≤ r`.
pub fn cv_quadratic(p: f64, q: f64, r: f64) -> Result<f64, ConsistencyError> {
    if [p, q, r].iter().any(|&v| !(v > 0.0)) {
        return Err(ConsistencyError::Domain);
    }
    if p * q <= r {
        return Ok(0.0);
    }
    let s = p + q + 1.0;
    let delta = s * s - 4.0 * (p * q - r);
    Ok((s - delta.sqrt()) / 2.0)
}

/// Smallest positive root of `(a−x)(b−x)(c−x)(d−x) = (e+x)(f+x)`, or 0 when
/// `a·b·c·d ≤ e·f`.
pub fn cv_quartic_over(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<f64, ConsistencyError> {
    if [a, b, c, d, e, f].iter().any(|&v| !(v > 0.0)) {
        return Err(ConsistencyError::Domain);
    }
    if a * b * c * d <= e * f {
        return Ok(0.0);
    }
    let g = |x: f64| (a - x) * (b - x) * (c - x) * (d - x) - (e + x) * (f + x);
    Ok(smallest_root(g, a.min(b).min(c).min(d)))
}

/// Smallest positive root of `(a+x)(b+x)(c+x)(d+x) = (e−x)(f−x)`, or 0 when
/// `a·b·c·d ≥ e·f`.
pub fn cv_quartic_under(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<f64, ConsistencyError> {
    if [a, b, c, d, e, f].iter().any(|&v| !(v > 0.0)) {
        return Err(ConsistencyError::Domain);
    }
    if a * b * c * d >= e * f {
        return Ok(0.0);
    }
    let g = |x: f64| (e - x) * (f - x) - (a + x) * (b + x) * (c + x) * (d + x);
    Ok(smallest_root(g, e.min(f)))
}

/// Smallest positive root of `Π(lhs + x) = Π(rhs − x)`, or 0 when
/// `Π lhs ≥ Π rhs`.
pub fn cv_monotonicity(lhs: [f64; 3], rhs: [f64; 3]) -> Result<f64, ConsistencyError> {
    if lhs.iter().chain(&rhs).any(|&v| !(v > 0.0)) {
        return Err(ConsistencyError::Domain);
    }
    let prod = |v: [f64; 3], x: f64| (v[0] + x) * (v[1] + x) * (v[2] + x);
    if prod(lhs, 0.0) >= rhs[0] * rhs[1] * rhs[2] {
        return Ok(0.0);
    }
    let g = |x: f64| (rhs[0] - x) * (rhs[1] - x) * (rhs[2] - x) - prod(lhs, x);
    Ok(smallest_root(g, rhs[0].min(rhs[1]).min(rhs[2])))
}

/// Smallest root of `g` on `(0, upper]` for `g(0) > 0 ≥ g(upper)`.
fn smallest_root(g: impl Fn(f64) -> f64, upper: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = upper;
    let mut x = ROOT_SCAN_STEP;
    while x < upper {
        if g(x) <= 0.0 {
            hi = x;
            break;
        }
        lo = x;
        x += ROOT_SCAN_STEP;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if g(hi).abs() < g(lo).abs() {
        hi
    } else {
        lo
    }
}

/// One row of the consistency-index table: the largest consistency value
/// each violation family can reach for a given best-to-worst judgment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CiRow {
    pub a_bw: LinguisticTerm,
    /// Cases 1 and 2.
    pub pair: f64,
    /// Case 3 subcase 1 and Cases 4 to 6.
    pub over: f64,
    /// Case 3 subcase 2.
    pub under: f64,
    /// Upper bound for Cases 7 to 9 on this scale.
    pub monotonicity_bound: f64,
    pub ci_lower: f64,
}

/// Bound on monotonicity consistency values for the linguistic scale.
pub const MONOTONICITY_CV_BOUND: f64 = 0.5;

pub fn ci_row(a_bw: LinguisticTerm) -> Result<CiRow, ConsistencyError> {
    if a_bw == LinguisticTerm::ONE {
        return Err(ConsistencyError::UndefinedCi);
    }
    // Every case peaks at α = 1, where each cut collapses to the modal value.
    let a = a_bw.tfn().modal();
    let pair = cv_pair(1.0, 1.0, a, a)?;
    let over = cv_quadratic(a, a, a)?.max(cv_quartic_over(a, a, a, a, a, a)?);
    let under = cv_quartic_under(1.0, 1.0, 1.0, 1.0, a, a)?;
    Ok(CiRow {
        a_bw,
        pair,
        over,
        under,
        monotonicity_bound: MONOTONICITY_CV_BOUND,
        ci_lower: pair.max(over).max(under),
    })
}

/// Lower bound of the consistency index for the given best-to-worst judgment.
pub fn ci_lower_bound(a_bw: LinguisticTerm) -> Result<f64, ConsistencyError> {
    ci_row(a_bw).map(|r| r.ci_lower)
}

/// Rows for `"2"` through `"9"`.
pub fn ci_table() -> Vec<CiRow> {
    LinguisticTerm::all()
        .skip(1)
        .map(|t| ci_row(t).expect("defined for terms above one"))
        .collect()
}

/// Upper bounds on the consistency ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrBound {
    /// `ε*_F / CI_lower`.
    pub reported: f64,
    /// `(ε*_F + DoA) / CI_lower`, covering the gap to the dense optimum.
    pub conservative: f64,
}

pub fn cr_upper(epsilon_star: f64, doa: f64, a_bw: LinguisticTerm) -> Result<CrBound, ConsistencyError> {
    let ci = ci_lower_bound(a_bw)?;
    Ok(CrBound {
        reported: epsilon_star / ci,
        conservative: (epsilon_star + doa) / ci,
    })
}

/// A failed necessary condition together with its consistency value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub case: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcase: Option<u8>,
    /// Criterion indices involved (one, or the pair `i₁, i₂`).
    pub indices: Vec<usize>,
    pub criteria: Vec<String>,
    /// One α level, or the pair `α₁ < α₂` for monotonicity cases.
    pub alphas: Vec<f64>,
    pub cv: f64,
}

/// Common product at one α level, when it is the same for every
/// non-best, non-worst criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductLevel {
    pub alpha: f64,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub criteria: Vec<String>,
    pub a_bw: LinguisticTerm,
    pub grid: Vec<f64>,
    pub violations: Vec<Violation>,
    pub k1_profile: Vec<ProductLevel>,
    pub k2_profile: Vec<ProductLevel>,
    pub max_cv: f64,
    /// `None` when best and worst are judged equal.
    pub ci_lower: Option<f64>,
    pub epsilon_star: Option<f64>,
    pub doa: f64,
    pub cr_upper: Option<CrBound>,
    pub threshold: Option<f64>,
    /// Reported CR bound at or below the threshold.
    pub acceptable: Option<bool>,
    pub verdict: String,
}

impl ConsistencyReport {
    /// Fills in the ratio bounds from a solved system on the same grid.
    pub fn with_solution(mut self, epsilon_star: f64, threshold: Option<f64>) -> Self {
        self.epsilon_star = Some(epsilon_star);
        self.cr_upper = cr_upper(epsilon_star, self.doa, self.a_bw).ok();
        self.threshold = threshold;
        self.acceptable = match (self.cr_upper, threshold) {
            (Some(cr), Some(t)) => Some(cr.reported <= t),
            _ => None,
        };
        self
    }
}

/// Checks every necessary condition for a consistent system on the grid
/// and measures each violation.
pub fn check_conditions(fpcs: &Fpcs, grid: &AlphaGrid) -> ConsistencyReport {
    let middle: Vec<usize> = fpcs.middle().collect();
    let names = |idx: &[usize]| idx.iter().map(|&i| fpcs.criteria()[i].clone()).collect();
    let mut violations = Vec::new();
    let mut push = |case: u8, subcase: Option<u8>, indices: Vec<usize>, alphas: Vec<f64>, cv: f64| {
        violations.push(Violation {
            case,
            subcase,
            criteria: names(&indices),
            indices,
            alphas,
            cv,
        });
    };
    let mut k1_profile = Vec::with_capacity(grid.len());
    let mut k2_profile = Vec::with_capacity(grid.len());

    for &alpha in grid.levels() {
        let bw = fpcs.cut_bw(alpha);
        let bi = |i: usize| fpcs.cut_bi(i, alpha);
        let iw = |i: usize| fpcs.cut_iw(i, alpha);

        let mut k1_const = true;
        let mut k2_const = true;
        for (x, &i1) in middle.iter().enumerate() {
            for &i2 in &middle[x + 1..] {
                let (p1, q1, p2, q2) = (bi(i1).lo, iw(i1).hi, bi(i2).lo, iw(i2).hi);
                if (p1 * q1 - p2 * q2).abs() > PRODUCT_TOL {
                    k1_const = false;
                    push(
                        1,
                        None,
                        vec![i1, i2],
                        vec![alpha],
                        cv_pair(p1, q1, p2, q2).unwrap_or(0.0),
                    );
                }
                let (p1, q1, p2, q2) = (bi(i1).hi, iw(i1).lo, bi(i2).hi, iw(i2).lo);
                if (p1 * q1 - p2 * q2).abs() > PRODUCT_TOL {
                    k2_const = false;
                    push(
                        2,
                        None,
                        vec![i1, i2],
                        vec![alpha],
                        cv_pair(p1, q1, p2, q2).unwrap_or(0.0),
                    );
                }
            }
        }
        let first = middle.first().copied();
        k1_profile.push(ProductLevel {
            alpha,
            value: first.filter(|_| k1_const).map(|i| bi(i).lo * iw(i).hi),
        });
        k2_profile.push(ProductLevel {
            alpha,
            value: first.filter(|_| k2_const).map(|i| bi(i).hi * iw(i).lo),
        });

        let target = bw.lo * bw.hi;
        for &i1 in &middle {
            for &i2 in &middle {
                let (a, b, c, d) = (bi(i1).lo, iw(i1).hi, bi(i2).hi, iw(i2).lo);
                let product = a * b * c * d;
                if product > target + PRODUCT_TOL {
                    let cv = cv_quartic_over(a, b, c, d, bw.lo, bw.hi).unwrap_or(0.0);
                    push(3, Some(1), vec![i1, i2], vec![alpha], cv);
                } else if product < target - PRODUCT_TOL {
                    let cv = cv_quartic_under(a, b, c, d, bw.lo, bw.hi).unwrap_or(0.0);
                    push(3, Some(2), vec![i1, i2], vec![alpha], cv);
                }
            }
        }

        for &i in &middle {
            let checks = [
                (4, bi(i).lo, iw(i).hi, bw.hi),
                (5, bi(i).hi, iw(i).lo, bw.hi),
                (6, bi(i).lo, iw(i).lo, bw.lo),
            ];
            for (case, p, q, r) in checks {
                if p * q > r + PRODUCT_TOL {
                    push(case, None, vec![i], vec![alpha], cv_quadratic(p, q, r).unwrap_or(0.0));
                }
            }
        }
    }

    for pair in grid.levels().windows(2) {
        let (a1, a2) = (pair[0], pair[1]);
        let (bw1, bw2) = (fpcs.cut_bw(a1), fpcs.cut_bw(a2));
        for &i in &middle {
            let (bi1, bi2) = (fpcs.cut_bi(i, a1), fpcs.cut_bi(i, a2));
            let (iw1, iw2) = (fpcs.cut_iw(i, a1), fpcs.cut_iw(i, a2));
            let checks = [
                (7, [bi2.lo, iw2.hi, bw1.hi], [bi1.lo, iw1.hi, bw2.hi]),
                (8, [bi2.hi, iw2.lo, bw1.hi], [bi1.hi, iw1.lo, bw2.hi]),
                (9, [bi2.lo, iw2.lo, bw1.lo], [bi1.lo, iw1.lo, bw2.lo]),
            ];
            for (case, lhs, rhs) in checks {
                // f(α₂) < f(α₁) written without division.
                let left = lhs[0] * lhs[1] * lhs[2];
                let right = rhs[0] * rhs[1] * rhs[2];
                if right - left > MONOTONE_TOL * right.max(1.0) {
                    push(
                        case,
                        None,
                        vec![i],
                        vec![a1, a2],
                        cv_monotonicity(lhs, rhs).unwrap_or(0.0),
                    );
                }
            }
        }
    }

    let max_cv = violations.iter().map(|v| v.cv).fold(0.0, f64::max);
    let verdict = if violations.is_empty() {
        NO_VIOLATION_VERDICT.to_string()
    } else {
        format!("{} necessary-condition violation(s) detected", violations.len())
    };
    ConsistencyReport {
        criteria: fpcs.criteria().to_vec(),
        a_bw: fpcs.a_bw(),
        grid: grid.levels().to_vec(),
        violations,
        k1_profile,
        k2_profile,
        max_cv,
        ci_lower: ci_lower_bound(fpcs.a_bw()).ok(),
        epsilon_star: None,
        doa: grid.mesh(),
        cr_upper: None,
        threshold: None,
        acceptable: None,
        verdict,
    }
}
