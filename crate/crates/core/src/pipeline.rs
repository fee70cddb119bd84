//! End-to-end entry points shared by the command line and the HTTP API, so
//! both produce the same documents for the same inputs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::{check_conditions, ConsistencyReport};
use crate::fpcs::{AlphaGrid, Fpcs, FpcsError, GridError, Hierarchy, LinguisticTerm, Problem};
use crate::fuzzy::{approximate_quotient, exact_quotient_membership, FuzzyError, Tfn};
use crate::solver::{
    hierarchical_compose, rank, solve, solve_weights, GlobalWeight, RankEntry, SolveReport, SolverError, SolverOptions,
};

pub const DEFAULT_M: usize = 17;
pub const DEFAULT_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Input(#[from] FpcsError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{0}")]
    Options(String),
    #[error("best and worst are judged equal (\"1\"); the consistency index is undefined")]
    Degenerate,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl PipelineError {
    pub fn code(&self) -> &'static str {
        match self {
            PipelineError::Input(_) => "validation_error",
            PipelineError::Grid(_) => "invalid_grid",
            PipelineError::Options(_) => "invalid_options",
            PipelineError::Degenerate => "degenerate_fpcs",
            PipelineError::Solver(_) => "solver_error",
        }
    }

    pub fn field_path(&self) -> Option<String> {
        match self {
            PipelineError::Input(e) => Some(e.field_path.clone()),
            _ => None,
        }
    }

    /// Caused by the request rather than by the solver.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            PipelineError::Input(_) | PipelineError::Grid(_) | PipelineError::Options(_)
        )
    }
}

/// Grid choice: `m` uniform levels, or explicit levels.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Uniform(usize),
    Levels(Vec<f64>),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Uniform(DEFAULT_M)
    }
}

impl GridSpec {
    /// At most one of `m` and `levels` may be given.
    pub fn from_parts(m: Option<usize>, levels: Option<Vec<f64>>) -> Result<Self, PipelineError> {
        match (m, levels) {
            (Some(_), Some(_)) => Err(PipelineError::Options("give either m or grid, not both".into())),
            (Some(m), None) => Ok(GridSpec::Uniform(m)),
            (None, Some(levels)) => Ok(GridSpec::Levels(levels)),
            (None, None) => Ok(GridSpec::default()),
        }
    }

    pub fn build(&self) -> Result<AlphaGrid, PipelineError> {
        Ok(match self {
            GridSpec::Uniform(m) => AlphaGrid::uniform(*m)?,
            GridSpec::Levels(l) => AlphaGrid::from_levels(l.clone())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChildReport {
    pub parent: String,
    pub report: SolveReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyReport {
    pub root: SolveReport,
    pub children: Vec<ChildReport>,
    pub global_weights: Vec<GlobalWeight>,
    pub ranking: Vec<RankEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemReport {
    Single(SolveReport),
    Hierarchy(HierarchyReport),
}

pub fn solve_problem(problem: &Problem, grid: &GridSpec, opts: &SolverOptions) -> Result<ProblemReport, PipelineError> {
    check_options(opts)?;
    let grid = grid.build()?;
    match problem {
        Problem::Single(f) => Ok(ProblemReport::Single(solve(f, &grid, opts)?)),
        Problem::Hierarchy(h) => solve_hierarchy(h, &grid, opts).map(ProblemReport::Hierarchy),
    }
}

fn check_options(opts: &SolverOptions) -> Result<(), PipelineError> {
    if !(opts.optimality_tol > 0.0 && opts.optimality_tol.is_finite()) {
        return Err(PipelineError::Options(format!(
            "tol must be a positive number, got {}",
            opts.optimality_tol
        )));
    }
    if opts.dense_eta_grid < 2 {
        return Err(PipelineError::Options("dense_eta_grid must be at least 2".into()));
    }
    Ok(())
}

fn solve_hierarchy(h: &Hierarchy, grid: &AlphaGrid, opts: &SolverOptions) -> Result<HierarchyReport, PipelineError> {
    let root = solve(&h.root, grid, opts)?;
    let children = h
        .children
        .par_iter()
        .map(|(parent, f)| {
            solve(f, grid, opts).map(|report| ChildReport {
                parent: parent.clone(),
                report,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let parents: Vec<(String, f64)> = root
        .criteria
        .iter()
        .cloned()
        .zip(root.midpoint_weights.iter().copied())
        .collect();
    let blocks: Vec<(String, Vec<(String, f64)>)> = children
        .iter()
        .map(|c| {
            let local = c
                .report
                .criteria
                .iter()
                .cloned()
                .zip(c.report.midpoint_weights.iter().copied())
                .collect();
            (c.parent.clone(), local)
        })
        .collect();
    let global_weights = hierarchical_compose(&parents, &blocks)?;
    let ranking = rank(
        &global_weights
            .iter()
            .map(|g| (g.name.clone(), g.global))
            .collect::<Vec<_>>(),
    );
    Ok(HierarchyReport {
        root,
        children,
        global_weights,
        ranking,
    })
}

/// Condition check plus ratio bounds from a solve on the same grid.
pub fn analyze_consistency(
    fpcs: &Fpcs,
    grid: &GridSpec,
    opts: &SolverOptions,
    threshold: Option<f64>,
) -> Result<ConsistencyReport, PipelineError> {
    check_options(opts)?;
    if let Some(t) = threshold {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(PipelineError::Options(format!(
                "threshold must be nonnegative, got {t}"
            )));
        }
    }
    if fpcs.is_degenerate() {
        return Err(PipelineError::Degenerate);
    }
    let grid = grid.build()?;
    let eps = solve_weights(fpcs, &grid, opts)?.epsilon_star;
    Ok(check_conditions(fpcs, &grid).with_solution(eps, threshold))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivideSample {
    pub x: f64,
    pub exact: f64,
    pub approx: f64,
}

/// Exact and approximate quotient memberships at `samples` evenly spaced
/// points across the quotient's support.
pub fn divide_samples(num: &Tfn, den: &Tfn, samples: usize) -> Result<Vec<DivideSample>, FuzzyError> {
    let approx = approximate_quotient(num, den)?;
    let (lo, hi) = (approx.lower(), approx.upper());
    let count = samples.max(2);
    (0..count)
        .map(|k| {
            let x = if k + 1 == count {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            };
            Ok(DivideSample {
                x,
                exact: exact_quotient_membership(num, den, x)?,
                approx: approx.membership(x),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    pub label: String,
    pub tfn: Tfn,
    pub description: String,
}

pub fn scale_table() -> Vec<ScaleEntry> {
    LinguisticTerm::all()
        .map(|t| ScaleEntry {
            label: t.label(),
            tfn: t.tfn(),
            description: t.description().to_string(),
        })
        .collect()
}
