//! Finite-grid minimax solve for triangular fuzzy weights, interval
//! weights, and hierarchical composition.
//!
//! `ε*_F` is found by bisection on ε with an exact LP feasibility test at
//! each step, so the returned optimum is certified to within the bisection
//! tolerance.

mod hierarchy;
mod lp;
mod oracle;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::{ci_lower_bound, cr_upper, CrBound};
use crate::fpcs::{AlphaGrid, Fpcs, GridError};
use crate::fuzzy::{Interval, Tfn};

pub use hierarchy::{hierarchical_compose, rank, GlobalWeight, RankEntry};
pub use oracle::{oracle_gmir_range, oracle_search, oracle_solve, OracleResult, ORACLE_MAX_N};

use lp::{Lp, Model};

/// Lower bound on every weight component.
pub const DENOMINATOR_FLOOR: f64 = 1e-9;
/// Initial relative slack on ε for the interval programs.
pub const INTERVAL_SLACK: f64 = 1e-8;
/// Largest relative slack tried before giving up on an interval program.
pub const MAX_INTERVAL_SLACK: f64 = 1e-4;

const BISECTION_FRACTIONS: [f64; 5] = [0.5, 0.45, 0.55, 0.4, 0.6];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("zero or negative weight denominator at alpha = {alpha}")]
    ZeroDenominator { alpha: f64 },
    #[error("oracle search is limited to {max} criteria, got {n}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("composition error: {0}")]
    Compose(String),
    #[error("internal solver error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Lower,
    Upper,
}

/// One ratio `w_num(α) / w_den(α)` compared against a judgment endpoint.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RatioTerm {
    pub num: usize,
    pub num_side: Side,
    pub den: usize,
    pub den_side: Side,
    /// Which judgment: `Some(i)` for the best-to-`i` or `i`-to-worst entry
    /// (decided by `num == best`), `None` for best-to-worst.
    judgment: Option<usize>,
    judgment_side: Side,
}

impl RatioTerm {
    pub fn judgment(&self, fpcs: &Fpcs, alpha: f64) -> f64 {
        let cut = match self.judgment {
            None => fpcs.cut_bw(alpha),
            Some(i) if self.num == fpcs.best() => fpcs.cut_bi(i, alpha),
            Some(i) => fpcs.cut_iw(i, alpha),
        };
        match self.judgment_side {
            Side::Lower => cut.lo,
            Side::Upper => cut.hi,
        }
    }

    fn residual(&self, fpcs: &Fpcs, weights: &[Tfn], alpha: f64) -> Result<f64, SolverError> {
        let num = side_value(&weights[self.num], self.num_side, alpha);
        let den = side_value(&weights[self.den], self.den_side, alpha);
        if !(den > 0.0) {
            return Err(SolverError::ZeroDenominator { alpha });
        }
        Ok((num / den - self.judgment(fpcs, alpha)).abs())
    }
}

fn side_value(t: &Tfn, side: Side, alpha: f64) -> f64 {
    let cut = t.cut_unchecked(alpha);
    match side {
        Side::Lower => cut.lo,
        Side::Upper => cut.hi,
    }
}

/// Residual terms in reporting order: for each criterion other than best
/// and worst, best-to-i lower/upper then i-to-worst lower/upper; finally
/// best-to-worst lower/upper.
pub(crate) fn ratio_terms(fpcs: &Fpcs) -> Vec<RatioTerm> {
    use Side::{Lower as L, Upper as U};
    let (b, w) = (fpcs.best(), fpcs.worst());
    let term = |num, num_side, den, den_side, judgment, judgment_side| RatioTerm {
        num,
        num_side,
        den,
        den_side,
        judgment,
        judgment_side,
    };
    let mut terms = Vec::with_capacity(4 * fpcs.n());
    for i in fpcs.middle() {
        terms.push(term(b, L, i, U, Some(i), L));
        terms.push(term(b, U, i, L, Some(i), U));
        terms.push(term(i, L, w, U, Some(i), L));
        terms.push(term(i, U, w, L, Some(i), U));
    }
    terms.push(term(b, L, w, U, None, L));
    terms.push(term(b, U, w, L, None, U));
    terms
}

/// Triangular fuzzy weights, one per criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSet {
    pub weights: Vec<Tfn>,
}

impl WeightSet {
    pub fn new(weights: Vec<Tfn>) -> Self {
        Self { weights }
    }

    /// Crisp equal weights `1/n`.
    pub fn uniform(n: usize) -> Self {
        Self::new(vec![Tfn::crisp(1.0 / n as f64); n])
    }

    pub fn gmirs(&self) -> Vec<f64> {
        self.weights.iter().map(Tfn::gmir).collect()
    }

    pub fn gmir_sum(&self) -> f64 {
        self.weights.iter().map(Tfn::gmir).sum()
    }

    pub fn is_well_formed(&self) -> bool {
        self.weights.iter().all(|t| t.lower() >= 0.0)
    }
}

/// The `4(n − 2) + 2` absolute residuals of `ws` at level `alpha`.
pub fn residuals(ws: &WeightSet, fpcs: &Fpcs, alpha: f64) -> Result<Vec<f64>, SolverError> {
    if ws.weights.len() != fpcs.n() {
        return Err(SolverError::Internal(format!(
            "{} weights for {} criteria",
            ws.weights.len(),
            fpcs.n()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SolverError::Internal(format!("alpha {alpha} outside [0, 1]")));
    }
    ratio_terms(fpcs)
        .iter()
        .map(|t| t.residual(fpcs, &ws.weights, alpha))
        .collect()
}

/// Largest residual of `ws` over the given α levels.
pub fn max_residual(ws: &WeightSet, fpcs: &Fpcs, levels: &[f64]) -> Result<f64, SolverError> {
    let terms = ratio_terms(fpcs);
    let mut worst = 0.0f64;
    for &alpha in levels {
        for t in &terms {
            worst = worst.max(t.residual(fpcs, &ws.weights, alpha)?);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Seeds the randomized oracle search. The LP solve itself is deterministic.
    pub seed: u64,
    /// Width of the final ε bracket.
    pub optimality_tol: f64,
    /// Accepted for configuration compatibility; the LP bisection does not use it.
    pub max_starts: usize,
    /// Number of α levels used to estimate the dense-grid residual.
    pub dense_eta_grid: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            optimality_tol: 1e-7,
            max_starts: 32,
            dense_eta_grid: 1001,
        }
    }
}

/// Optimal weights on a grid with their objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSolution {
    pub weights: WeightSet,
    /// Largest residual of `weights` over the grid.
    pub epsilon_star: f64,
    /// Largest ε proven infeasible by the bisection.
    pub lower_bound: f64,
}

/// Minimizes the largest residual over the grid.
pub fn solve_weights(fpcs: &Fpcs, grid: &AlphaGrid, opts: &SolverOptions) -> Result<WeightSolution, SolverError> {
    let model = Model::new(fpcs, grid);
    let levels = grid.levels();

    // A numerical failure here only skips the shortcut.
    if let Ok(Lp::Feasible(w)) = model.feasible_point(0.0) {
        let ws = WeightSet::new(w);
        let eps = max_residual(&ws, fpcs, levels)?;
        return Ok(WeightSolution {
            weights: ws,
            epsilon_star: eps,
            lower_bound: 0.0,
        });
    }

    // Equal weights are always feasible.
    let mut best = WeightSet::uniform(fpcs.n());
    let mut best_eps = max_residual(&best, fpcs, levels)?;
    let mut lo = 0.0;
    let mut hi = best_eps;
    let tol = opts.optimality_tol.max(1e-12);
    while hi - lo > tol {
        let (mid, outcome) = probe(&model, lo, hi)?;
        match outcome {
            Lp::Feasible(w) => {
                let ws = WeightSet::new(w);
                let eps = max_residual(&ws, fpcs, levels)?;
                if eps < best_eps {
                    best = ws;
                    best_eps = eps;
                }
                hi = mid.min(best_eps).max(lo);
            }
            Lp::Infeasible => lo = mid,
        }
    }
    Ok(WeightSolution {
        weights: best,
        epsilon_star: best_eps,
        lower_bound: lo,
    })
}

/// Any ε strictly between the bounds serves the bisection, so points near
/// the middle stand in when the LP at the middle fails numerically.
fn probe(model: &Model, lo: f64, hi: f64) -> Result<(f64, Lp<Vec<Tfn>>), SolverError> {
    let mut last = None;
    for fraction in BISECTION_FRACTIONS {
        let mid = lo + fraction * (hi - lo);
        match model.feasible_point(mid) {
            Ok(outcome) => return Ok((mid, outcome)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one fraction"))
}

/// GLB and LUB of the GMIR of criterion `k` over weight sets whose grid
/// residuals are at most `epsilon_star` plus a small slack.
pub fn interval_weights(fpcs: &Fpcs, grid: &AlphaGrid, epsilon_star: f64, k: usize) -> Result<Interval, SolverError> {
    if k >= fpcs.n() {
        return Err(SolverError::Internal(format!("criterion index {k} out of range")));
    }
    let model = Model::new(fpcs, grid);
    let (lo, _) = extreme_with_slack(&model, epsilon_star, k, false)?;
    let (hi, _) = extreme_with_slack(&model, epsilon_star, k, true)?;
    Ok(Interval { lo: lo.min(hi), hi })
}

/// Interval weights for every criterion, with the largest slack used.
pub fn all_interval_weights(
    fpcs: &Fpcs,
    grid: &AlphaGrid,
    epsilon_star: f64,
) -> Result<(Vec<Interval>, f64), SolverError> {
    let model = Model::new(fpcs, grid);
    let jobs: Vec<(usize, bool)> = (0..fpcs.n()).flat_map(|k| [(k, false), (k, true)]).collect();
    let ends = jobs
        .par_iter()
        .map(|&(k, maximize)| extreme_with_slack(&model, epsilon_star, k, maximize))
        .collect::<Result<Vec<_>, _>>()?;
    let slack = ends.iter().map(|&(_, s)| s).fold(0.0, f64::max);
    let intervals = ends
        .chunks(2)
        .map(|pair| {
            let (lo, hi) = (pair[0].0, pair[1].0);
            Interval { lo: lo.min(hi), hi }
        })
        .collect();
    Ok((intervals, slack))
}

fn extreme_with_slack(model: &Model, eps: f64, k: usize, maximize: bool) -> Result<(f64, f64), SolverError> {
    let scale = eps.max(1.0);
    let mut rel = INTERVAL_SLACK;
    let mut failure = None;
    while rel <= MAX_INTERVAL_SLACK * (1.0 + 1e-9) {
        let slack = rel * scale;
        match model.extreme_gmir(eps + slack, k, maximize) {
            Ok(Lp::Feasible(g)) => return Ok((g, slack)),
            Ok(Lp::Infeasible) => {}
            Err(e) => failure = Some(e),
        }
        rel *= 10.0;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Err(SolverError::Internal(format!(
        "interval program infeasible at epsilon {eps} with slack up to {}",
        MAX_INTERVAL_SLACK * scale
    )))
}

/// Componentwise midpoints `(lo + hi) / 2`.
pub fn midpoint_weights(intervals: &[Interval]) -> Vec<f64> {
    intervals.iter().map(Interval::midpoint).collect()
}

/// Full result for one comparison system on one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub criteria: Vec<String>,
    pub best: String,
    pub worst: String,
    pub grid_size: usize,
    pub doa: f64,
    pub weights: WeightSet,
    pub epsilon_star: f64,
    pub interval_weights: Vec<Interval>,
    pub midpoint_weights: Vec<f64>,
    /// Lower bound of the consistency index; `None` when best and worst are
    /// judged equal.
    pub ci_lower: Option<f64>,
    pub cr_upper: Option<CrBound>,
    /// Largest residual of `weights` on a dense uniform α grid.
    pub eta_dense: f64,
    pub interval_slack: f64,
    pub ranking: Vec<RankEntry>,
}

pub fn solve(fpcs: &Fpcs, grid: &AlphaGrid, opts: &SolverOptions) -> Result<SolveReport, SolverError> {
    let sol = solve_weights(fpcs, grid, opts)?;
    let (intervals, slack) = all_interval_weights(fpcs, grid, sol.epsilon_star)?;
    let midpoints = midpoint_weights(&intervals);
    let dense = AlphaGrid::uniform(opts.dense_eta_grid.max(2))?;
    let eta_dense = max_residual(&sol.weights, fpcs, dense.levels())?;
    let doa = grid.mesh();
    let ranking = rank(
        &fpcs
            .criteria()
            .iter()
            .cloned()
            .zip(midpoints.iter().copied())
            .collect::<Vec<_>>(),
    );
    Ok(SolveReport {
        criteria: fpcs.criteria().to_vec(),
        best: fpcs.criteria()[fpcs.best()].clone(),
        worst: fpcs.criteria()[fpcs.worst()].clone(),
        grid_size: grid.len(),
        doa,
        weights: sol.weights,
        epsilon_star: sol.epsilon_star,
        interval_weights: intervals,
        midpoint_weights: midpoints,
        ci_lower: ci_lower_bound(fpcs.a_bw()).ok(),
        cr_upper: cr_upper(sol.epsilon_star, doa, fpcs.a_bw()).ok(),
        eta_dense,
        interval_slack: slack,
        ranking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcs::LinguisticTerm;

    pub(crate) fn fpcs(bto: &[u8], otw: &[u8], best: usize, worst: usize) -> Fpcs {
        let names: Vec<String> = (1..=bto.len()).map(|i| format!("c{i}")).collect();
        let t = |v: &[u8]| v.iter().map(|&l| LinguisticTerm::new(l).unwrap()).collect();
        Fpcs::new(names.clone(), &names[best], &names[worst], t(bto), t(otw)).unwrap()
    }

    fn example1() -> Fpcs {
        fpcs(&[2, 1, 4, 2, 8], &[3, 8, 5, 4, 1], 1, 4)
    }

    #[test]
    fn residual_count_and_order() {
        let f = example1();
        let r = residuals(&WeightSet::uniform(5), &f, 1.0).unwrap();
        assert_eq!(r.len(), 4 * 3 + 2);
        // c1 at α = 1: |1 − 2|, |1 − 2|, |1 − 3|, |1 − 3|.
        assert_eq!(&r[..4], &[1.0, 1.0, 2.0, 2.0]);
        assert_eq!(&r[12..], &[7.0, 7.0]);
    }

    #[test]
    fn uniform_residuals_are_bounded_by_best_to_worst() {
        let f = example1();
        for alpha in [0.0, 0.3, 1.0] {
            let bound = (f.cut_bw(alpha).hi - 1.0).abs();
            let r = residuals(&WeightSet::uniform(5), &f, alpha).unwrap();
            assert!(r.iter().all(|&x| x <= bound + 1e-12));
        }
    }

    #[test]
    fn all_ones_is_perfectly_consistent() {
        let f = fpcs(&[1, 1, 1], &[1, 1, 1], 0, 2);
        assert!(residuals(&WeightSet::uniform(3), &f, 0.4)
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
        let grid = AlphaGrid::uniform(5).unwrap();
        let r = solve(&f, &grid, &SolverOptions::default()).unwrap();
        assert!(r.epsilon_star < 1e-9);
        for iv in &r.interval_weights {
            assert!((iv.lo - 1.0 / 3.0).abs() < 1e-6 && (iv.hi - 1.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_denominator_is_reported() {
        let f = example1();
        let mut ws = WeightSet::uniform(5);
        ws.weights[4] = Tfn::crisp(0.0);
        assert!(matches!(
            residuals(&ws, &f, 0.5),
            Err(SolverError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn example1_two_level_grid() {
        let f = example1();
        let grid = AlphaGrid::uniform(2).unwrap();
        let r = solve(&f, &grid, &SolverOptions::default()).unwrap();
        assert!((r.epsilon_star - 1.3945).abs() < 1e-3, "{}", r.epsilon_star);
        assert!((r.weights.gmir_sum() - 1.0).abs() < 1e-9);
        let c5 = r.interval_weights[4];
        assert!((c5.lo - 0.0418).abs() < 2e-3 && (c5.hi - 0.0522).abs() < 2e-3, "{c5}");
        let order: Vec<&str> = r.ranking.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(order, ["c2", "c4", "c3", "c1", "c5"]);
        assert!((r.cr_upper.unwrap().reported - 0.3120).abs() < 1e-3);
    }

    #[test]
    fn two_criteria_consistent() {
        let f = fpcs(&[1, 2], &[2, 1], 0, 1);
        let r = solve(&f, &AlphaGrid::uniform(17).unwrap(), &SolverOptions::default()).unwrap();
        assert!(r.epsilon_star < 1e-6);
        assert!((r.midpoint_weights[0] - 2.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn midpoint_examples() {
        let m = midpoint_weights(&[
            Interval::new(0.0418, 0.0522).unwrap(),
            Interval::new(0.3143, 0.4476).unwrap(),
            Interval::point(0.25),
        ]);
        assert!((m[0] - 0.0470).abs() < 1e-12);
        assert!((m[1] - 0.38095).abs() < 1e-12);
        assert_eq!(m[2], 0.25);
    }
}
