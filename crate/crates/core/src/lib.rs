//! α-cut fuzzy best-worst method: triangular fuzzy weights from linguistic
//! best-to-others and others-to-worst judgments, with interval weights,
//! consistency analysis and hierarchical composition.

pub mod consistency;
pub mod fpcs;
pub mod fuzzy;
pub mod pipeline;
pub mod solver;

pub use consistency::{
    check_conditions, ci_lower_bound, ci_row, ci_table, cr_upper, cv_monotonicity, cv_pair, cv_quadratic,
    cv_quartic_over, cv_quartic_under, CiRow, ConsistencyError, ConsistencyReport, CrBound, Violation,
};
pub use fpcs::{
    scale_lookup, AlphaGrid, ErrorCode, Fpcs, FpcsDocument, FpcsError, GridError, Hierarchy, LinguisticTerm, Problem,
};
pub use fuzzy::{approximate_quotient, exact_quotient_membership, FuzzyError, Interval, Tfn};
pub use pipeline::{
    analyze_consistency, divide_samples, scale_table, solve_problem, ChildReport, DivideSample, GridSpec,
    HierarchyReport, PipelineError, ProblemReport, ScaleEntry,
};
pub use solver::{
    all_interval_weights, hierarchical_compose, interval_weights, max_residual, midpoint_weights, oracle_gmir_range,
    oracle_search, oracle_solve, rank, residuals, solve, solve_weights, GlobalWeight, OracleResult, RankEntry,
    SolveReport, SolverError, SolverOptions, WeightSet, WeightSolution,
};
