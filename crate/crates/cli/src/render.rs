//! Plain-text tables. Numbers are rounded to four decimals; the JSON format
//! keeps full precision.

use std::fmt::Write;

use fbwm_core::{CiRow, ConsistencyReport, DivideSample, HierarchyReport, ProblemReport, SolveReport};

pub fn problem(report: &ProblemReport) -> String {
    match report {
        ProblemReport::Single(r) => solve(r),
        ProblemReport::Hierarchy(h) => hierarchy(h),
    }
}

fn name_width<'a>(names: impl IntoIterator<Item = &'a String>, header: &str) -> usize {
    names
        .into_iter()
        .map(|n| n.chars().count())
        .max()
        .unwrap_or(0)
        .max(header.len())
}

pub fn solve(r: &SolveReport) -> String {
    let mut out = String::new();
    let w = name_width(&r.criteria, "Criterion");
    writeln!(out, "{:<w$}  {:<18}  {:>7}", "Criterion", "Interval-weight", "Average").unwrap();
    for ((name, iv), mid) in r.criteria.iter().zip(&r.interval_weights).zip(&r.midpoint_weights) {
        let interval = format!("[{:.4}, {:.4}]", iv.lo, iv.hi);
        writeln!(out, "{name:<w$}  {interval:<18}  {mid:>7.4}").unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "best      {}", r.best).unwrap();
    writeln!(out, "worst     {}", r.worst).unwrap();
    writeln!(out, "ε*_F      {:.4}", r.epsilon_star).unwrap();
    match r.cr_upper {
        Some(cr) => writeln!(out, "CR ≤      {:.4} (with DoA: {:.4})", cr.reported, cr.conservative).unwrap(),
        None => writeln!(out, "CR ≤      undefined (best and worst judged equal)").unwrap(),
    }
    writeln!(out, "DoA       {}", r.doa).unwrap();
    writeln!(out, "levels    {}", r.grid_size).unwrap();
    out
}

pub fn hierarchy(h: &HierarchyReport) -> String {
    let mut out = String::new();
    writeln!(out, "== root ==").unwrap();
    out.push_str(&solve(&h.root));
    for child in &h.children {
        writeln!(out, "\n== {} ==", child.parent).unwrap();
        out.push_str(&solve(&child.report));
    }
    writeln!(out, "\n== global weights ==").unwrap();
    let w = name_width(h.global_weights.iter().map(|g| &g.name), "Criterion");
    let pw = name_width(h.global_weights.iter().map(|g| &g.parent), "Parent");
    writeln!(
        out,
        "{:<w$}  {:<pw$}  {:>7}  {:>7}  {:>7}  {:>7}  {:>4}",
        "Criterion", "Parent", "Parent", "Local", "Product", "Global", "Rank"
    )
    .unwrap();
    for g in &h.global_weights {
        let rank = h.ranking.iter().find(|e| e.name == g.name).map(|e| e.rank).unwrap_or(0);
        writeln!(
            out,
            "{:<w$}  {:<pw$}  {:>7.4}  {:>7.4}  {:>7.4}  {:>7.4}  {:>4}",
            g.name, g.parent, g.parent_weight, g.local_weight, g.product, g.global, rank
        )
        .unwrap();
    }
    let order: Vec<&str> = h.ranking.iter().map(|e| e.name.as_str()).collect();
    writeln!(out, "\nranking   {}", order.join(" > ")).unwrap();
    out
}

pub fn consistency(r: &ConsistencyReport) -> String {
    let mut out = String::new();
    writeln!(out, "criteria     {}", r.criteria.join(", ")).unwrap();
    writeln!(out, "a_bw         {}", r.a_bw).unwrap();
    writeln!(out, "levels       {}", r.grid.len()).unwrap();
    match r.ci_lower {
        Some(ci) => writeln!(out, "CI ≥         {ci:.4}").unwrap(),
        None => writeln!(out, "CI ≥         undefined (best and worst judged equal)").unwrap(),
    }
    if let Some(eps) = r.epsilon_star {
        writeln!(out, "ε*_F         {eps:.4}").unwrap();
    }
    writeln!(out, "DoA          {}", r.doa).unwrap();
    if let Some(cr) = r.cr_upper {
        writeln!(
            out,
            "CR ≤         {:.4} (with DoA: {:.4})",
            cr.reported, cr.conservative
        )
        .unwrap();
    }
    if let (Some(t), Some(ok)) = (r.threshold, r.acceptable) {
        writeln!(
            out,
            "threshold    {t} ({})",
            if ok { "acceptable" } else { "above threshold" }
        )
        .unwrap();
    }
    writeln!(out, "max cv       {:.4}", r.max_cv).unwrap();
    writeln!(out, "verdict      {}", r.verdict).unwrap();
    if !r.violations.is_empty() {
        writeln!(out, "\n{:<6}  {:<16}  {:<16}  {:>7}", "Case", "Criteria", "α", "CV").unwrap();
        for v in &r.violations {
            let case = match v.subcase {
                Some(s) => format!("{}.{}", v.case, s),
                None => v.case.to_string(),
            };
            let alphas: Vec<String> = v.alphas.iter().map(|a| format!("{a:.4}")).collect();
            writeln!(
                out,
                "{case:<6}  {:<16}  {:<16}  {:>7.4}",
                v.criteria.join(", "),
                alphas.join(", "),
                v.cv
            )
            .unwrap();
        }
    }
    out
}

pub fn ci_table(rows: &[CiRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<5}  {:>9}  {:>10}  {:>10}  {:>9}  {:>8}",
        "a_bw", "Cases 1-2", "Cases 3-6", "Case 3.2", "Cases 7-9", "CI ≥"
    )
    .unwrap();
    for r in rows {
        writeln!(
            out,
            "{:<5}  {:>9.4}  {:>10.4}  {:>10.4}  {:>9.4}  {:>8.4}",
            r.a_bw.to_string(),
            r.pair,
            r.over,
            r.under,
            r.monotonicity_bound,
            r.ci_lower
        )
        .unwrap();
    }
    out
}

pub fn divide_csv(rows: &[DivideSample]) -> String {
    let mut out = String::from("x,exact,approx\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.x, r.exact, r.approx).unwrap();
    }
    out
}
