use std::collections::HashSet;

use serde::Serialize;

use super::SolverError;

/// Values closer than this are reported as tied.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalWeight {
    pub name: String,
    pub parent: String,
    pub parent_weight: f64,
    pub local_weight: f64,
    /// `parent_weight × local_weight`.
    pub product: f64,
    /// `product` rescaled so the global weights sum to one.
    pub global: f64,
}

/// Multiplies each child's local weight by its parent's weight.
///
/// `parents` pairs each root criterion with its weight; `children` maps a
/// root criterion to its `(name, local weight)` list. Every root criterion
/// needs a child block and flattened names must be unique.
pub fn hierarchical_compose(
    parents: &[(String, f64)],
    children: &[(String, Vec<(String, f64)>)],
) -> Result<Vec<GlobalWeight>, SolverError> {
    if let Some((name, _)) = children.iter().find(|(c, _)| !parents.iter().any(|(p, _)| p == c)) {
        return Err(SolverError::Compose(format!(
            "child block {name:?} has no parent criterion"
        )));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (parent, pw) in parents {
        let (_, block) = children
            .iter()
            .find(|(c, _)| c == parent)
            .ok_or_else(|| SolverError::Compose(format!("missing child block for {parent:?}")))?;
        for (name, lw) in block {
            if !seen.insert(name.clone()) {
                return Err(SolverError::Compose(format!(
                    "duplicate global criterion name {name:?}"
                )));
            }
            out.push(GlobalWeight {
                name: name.clone(),
                parent: parent.clone(),
                parent_weight: *pw,
                local_weight: *lw,
                product: pw * lw,
                global: 0.0,
            });
        }
    }
    let total: f64 = out.iter().map(|g| g.product).sum();
    if !(total > 0.0) {
        return Err(SolverError::Compose("global weights sum to zero".into()));
    }
    for g in &mut out {
        g.global = g.product / total;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub rank: usize,
    pub name: String,
    pub weight: f64,
    /// Shares its weight with a neighbour; input order decided the placement.
    pub tie: bool,
}

/// Orders by descending weight, keeping input order among ties.
pub fn rank(weights: &[(String, f64)]) -> Vec<RankEntry> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].1.total_cmp(&weights[a].1));
    let tied = |x: usize, y: usize| (weights[x].1 - weights[y].1).abs() <= TIE_TOL;
    order
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let tie = (pos > 0 && tied(i, order[pos - 1])) || (pos + 1 < order.len() && tied(i, order[pos + 1]));
            RankEntry {
                rank: pos + 1,
                name: weights[i].0.clone(),
                weight: weights[i].1,
                tie,
            }
        })
        .collect()
}
