//! Linear programs behind the minimax solve.
//!
//! For a fixed ε every residual bound `|num/den − a| ≤ ε` with `den > 0` is
//! the pair of linear rows `num ≤ (a + ε)·den` and `num ≥ (a − ε)·den`, so
//! feasibility at a given ε and the extreme GMIR values are plain LPs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use microlp::{ComparisonOp, Error as LpError, LinearExpr, OptimizationDirection, Problem, Solution, Variable};

use super::{ratio_terms, RatioTerm, Side, SolverError, DENOMINATOR_FLOOR};
use crate::fpcs::{AlphaGrid, Fpcs};
use crate::fuzzy::Tfn;

pub(crate) struct Model<'a> {
    fpcs: &'a Fpcs,
    grid: &'a AlphaGrid,
    terms: Vec<RatioTerm>,
}

/// Outcome of one LP solve.
pub(crate) enum Lp<T> {
    Feasible(T),
    Infeasible,
}

type Vars = Vec<[Variable; 3]>;

const RETRY_NUDGES: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-9];
const RETRY_ORDERS: u64 = 6;

impl<'a> Model<'a> {
    pub fn new(fpcs: &'a Fpcs, grid: &'a AlphaGrid) -> Self {
        Self {
            fpcs,
            grid,
            terms: ratio_terms(fpcs),
        }
    }

    /// `order` 0 adds rows level by level, 1 in reverse, anything else in a
    /// shuffled order seeded by it.
    fn build(
        &self,
        eps: f64,
        direction: OptimizationDirection,
        objective: Option<usize>,
        order: u64,
    ) -> (Problem, Vars) {
        let mut p = Problem::new(direction);
        let vars: Vars = (0..self.fpcs.n())
            .map(|k| {
                let c = if objective == Some(k) { 1.0 } else { 0.0 };
                // GMIR weights 1/6, 4/6, 1/6 on (l, m, u).
                [
                    p.add_var(c / 6.0, (DENOMINATOR_FLOOR, f64::INFINITY)),
                    p.add_var(4.0 * c / 6.0, (DENOMINATOR_FLOOR, f64::INFINITY)),
                    p.add_var(c / 6.0, (DENOMINATOR_FLOOR, f64::INFINITY)),
                ]
            })
            .collect();
        for v in &vars {
            p.add_constraint([(v[0], 1.0), (v[1], -1.0)], ComparisonOp::Le, 0.0);
            p.add_constraint([(v[1], 1.0), (v[2], -1.0)], ComparisonOp::Le, 0.0);
        }
        let total: LinearExpr = vars
            .iter()
            .flat_map(|v| [(v[0], 1.0), (v[1], 4.0), (v[2], 1.0)])
            .collect();
        p.add_constraint(total, ComparisonOp::Eq, 6.0);

        // Lower and upper cuts meet at α = 1 and crisp judgments repeat
        // across levels; repeated rows make the basis singular.
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for &alpha in self.grid.levels() {
            for t in &self.terms {
                let a = t.judgment(self.fpcs, alpha);
                let num = cut_expr(&vars[t.num], t.num_side, alpha);
                let den = cut_expr(&vars[t.den], t.den_side, alpha);
                let mut pair = vec![(combine(&num, 1.0, &den, -(a + eps)), ComparisonOp::Le)];
                if a - eps > 0.0 {
                    pair.push((combine(&num, 1.0, &den, -(a - eps)), ComparisonOp::Ge));
                }
                for (row, op) in pair {
                    if seen.insert(row_key(&row, op)) {
                        rows.push((row, op));
                    }
                }
            }
        }
        match order {
            0 => {}
            1 => rows.reverse(),
            seed => rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        }
        for (row, op) in rows {
            p.add_constraint(row, op, 0.0);
        }
        (p, vars)
    }

    /// A weight set whose residuals on the grid are all at most `eps`.
    pub fn feasible_point(&self, eps: f64) -> Result<Lp<Vec<Tfn>>, SolverError> {
        self.with_retries(eps, OptimizationDirection::Minimize, None, |vars, sol| {
            extract(vars, |v| sol.var_value(v))
        })
    }

    /// Minimum or maximum GMIR of criterion `k` over weight sets with
    /// residuals at most `eps`.
    pub fn extreme_gmir(&self, eps: f64, k: usize, maximize: bool) -> Result<Lp<f64>, SolverError> {
        let direction = if maximize {
            OptimizationDirection::Maximize
        } else {
            OptimizationDirection::Minimize
        };
        self.with_retries(eps, direction, Some(k), |vars, sol| {
            let [l, m, u] = vars[k].map(|v| sol.var_value(v));
            let total: f64 = vars
                .iter()
                .map(|v| (sol.var_value(v[0]) + 4.0 * sol.var_value(v[1]) + sol.var_value(v[2])) / 6.0)
                .sum();
            (l + 4.0 * m + u) / 6.0 / total
        })
    }

    /// The simplex occasionally hits a singular basis; the same system with
    /// another row order, or a bound looser by a tiny amount, usually solves.
    /// Loosening only ever moves ε up, so an infeasible answer still holds
    /// at `eps`.
    fn with_retries<T>(
        &self,
        eps: f64,
        direction: OptimizationDirection,
        objective: Option<usize>,
        read: impl Fn(&Vars, &Solution) -> T,
    ) -> Result<Lp<T>, SolverError> {
        let mut last = None;
        for relative in RETRY_NUDGES {
            let e = eps + (eps.abs() * relative).max(relative * 1e-3);
            for order in 0..RETRY_ORDERS {
                let (p, vars) = self.build(e, direction, objective, order);
                match p.solve() {
                    Ok(outcome) => {
                        let sol = outcome
                            .into_solution()
                            .map_err(|_| SolverError::Internal("linear program was interrupted".into()))?;
                        return Ok(Lp::Feasible(read(&vars, &sol)));
                    }
                    Err(LpError::Infeasible) => return Ok(Lp::Infeasible),
                    Err(e) => last = Some(e),
                }
            }
        }
        Err(SolverError::Internal(format!(
            "linear program failed: {}",
            last.expect("at least one attempt")
        )))
    }
}

/// `w^l(α) = (1 − α)l + αm` or `w^u(α) = (1 − α)u + αm`.
fn cut_expr(v: &[Variable; 3], side: Side, alpha: f64) -> [(Variable, f64); 2] {
    let end = match side {
        Side::Lower => v[0],
        Side::Upper => v[2],
    };
    [(end, 1.0 - alpha), (v[1], alpha)]
}

fn combine(x: &[(Variable, f64); 2], cx: f64, y: &[(Variable, f64); 2], cy: f64) -> Vec<(Variable, f64)> {
    let mut row: Vec<(Variable, f64)> = Vec::with_capacity(4);
    for (v, c) in x
        .iter()
        .map(|&(v, c)| (v, c * cx))
        .chain(y.iter().map(|&(v, c)| (v, c * cy)))
    {
        match row.iter_mut().find(|(w, _)| *w == v) {
            Some(entry) => entry.1 += c,
            None => row.push((v, c)),
        }
    }
    row.retain(|&(_, c)| c != 0.0);
    row.sort_by_key(|&(v, _)| v.idx());
    row
}

fn row_key(row: &[(Variable, f64)], op: ComparisonOp) -> (bool, Vec<(usize, u64)>) {
    (
        matches!(op, ComparisonOp::Le),
        row.iter().map(|&(v, c)| (v.idx(), c.to_bits())).collect(),
    )
}

/// Reads weights from an LP solution, repairs rounding in `l ≤ m ≤ u` and
/// rescales to unit GMIR total.
fn extract(vars: &Vars, value: impl Fn(Variable) -> f64) -> Vec<Tfn> {
    let raw: Vec<[f64; 3]> = vars
        .iter()
        .map(|v| {
            let l = value(v[0]).max(DENOMINATOR_FLOOR);
            let m = value(v[1]).max(l);
            let u = value(v[2]).max(m);
            [l, m, u]
        })
        .collect();
    let total: f64 = raw.iter().map(|[l, m, u]| (l + 4.0 * m + u) / 6.0).sum();
    raw.iter()
        .map(|[l, m, u]| Tfn::new(l / total, m / total, u / total).expect("ordered by construction"))
        .collect()
}
