//! Derivative-free search over normalized triangular weights, used to
//! cross-check the LP solve on small systems.
//!
//! Each start runs a pattern search whose step begins at 0.1 and halves
//! down to `resolution / 64`. Moves are single-coordinate steps plus seeded
//! random directions. Every start is then polished by restarting the search
//! from its incumbent. The best point over all starts is kept, so the value
//! is always attained by a concrete weight set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{max_residual, SolverError, WeightSet, DENOMINATOR_FLOOR};
use crate::fpcs::{AlphaGrid, Fpcs};
use crate::fuzzy::{Interval, Tfn};

/// Largest system the oracle accepts.
pub const ORACLE_MAX_N: usize = 4;

const INITIAL_STEP: f64 = 0.1;
const REFINEMENTS: f64 = 64.0;
const DIRECTIONS_PER_DIM: usize = 8;
const POLISH_ROUNDS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Largest grid residual of `weights`.
    pub value: f64,
    pub weights: WeightSet,
}

/// Smallest largest-residual found by the search, with default seeding.
pub fn oracle_solve(fpcs: &Fpcs, grid: &AlphaGrid, resolution: f64) -> Result<f64, SolverError> {
    oracle_search(fpcs, grid, resolution, 42, 16).map(|r| r.value)
}

pub fn oracle_search(
    fpcs: &Fpcs,
    grid: &AlphaGrid,
    resolution: f64,
    seed: u64,
    starts: usize,
) -> Result<OracleResult, SolverError> {
    let n = fpcs.n();
    if n > ORACLE_MAX_N {
        return Err(SolverError::OracleTooLarge { n, max: ORACLE_MAX_N });
    }
    check_resolution(resolution)?;
    let starts = starts.max(1);
    let results: Vec<(f64, Vec<f64>)> = (0..starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let x0 = if s == 0 {
                // Crisp equal weights.
                [1.0, 0.0, 0.0].repeat(n)
            } else {
                (0..3 * n).map(|_| rng.gen_range(0.0..1.0)).collect()
            };
            let key = |x: &[f64]| (objective(fpcs, grid, x), 0.0);
            let (mut fx, mut x) = pattern_search(&key, x0, INITIAL_STEP, resolution, &mut rng);
            for round in 0..POLISH_ROUNDS {
                let step = INITIAL_STEP / 4f64.powi(round as i32 + 1);
                let (fy, y) = pattern_search(&key, x.clone(), step, resolution, &mut rng);
                if fy < fx {
                    (fx, x) = (fy, y);
                }
            }
            (fx.0, x)
        })
        .collect();
    let (value, x) = results
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one start");
    Ok(OracleResult {
        value,
        weights: decode(&x),
    })
}

/// Range of criterion `k`'s GMIR over weight sets the search reaches while
/// keeping every grid residual at most `eps`, starting from `start`.
///
/// `start` must itself be feasible at `eps`.
pub fn oracle_gmir_range(
    fpcs: &Fpcs,
    grid: &AlphaGrid,
    eps: f64,
    start: &WeightSet,
    k: usize,
    resolution: f64,
    seed: u64,
) -> Result<Interval, SolverError> {
    check_resolution(resolution)?;
    if k >= fpcs.n() || start.weights.len() != fpcs.n() {
        return Err(SolverError::Internal(format!("criterion index {k} out of range")));
    }
    let reached = max_residual(start, fpcs, grid.levels())?;
    if reached > eps {
        return Err(SolverError::Internal(format!(
            "start has residual {reached} above {eps}"
        )));
    }
    let x0: Vec<f64> = start
        .weights
        .iter()
        .flat_map(|t| [t.lower(), t.modal() - t.lower(), t.upper() - t.modal()])
        .collect();
    let mut ends = [0.0; 2];
    for (end, sign) in ends.iter_mut().zip([1.0, -1.0]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = |x: &[f64]| {
            let violation = (objective(fpcs, grid, x) - eps).max(0.0);
            (violation, sign * decode(x).gmirs()[k])
        };
        let (fx, _) = pattern_search(&key, x0.clone(), INITIAL_STEP, resolution, &mut rng);
        *end = sign * fx.1;
    }
    Ok(Interval {
        lo: ends[0],
        hi: ends[1],
    })
}

fn check_resolution(resolution: f64) -> Result<(), SolverError> {
    if resolution > 0.0 {
        Ok(())
    } else {
        Err(SolverError::Internal(format!(
            "oracle resolution must be positive, got {resolution}"
        )))
    }
}

/// Weights are encoded as `(l, m − l, u − m)` per criterion.
fn decode(x: &[f64]) -> WeightSet {
    let raw: Vec<[f64; 3]> = x
        .chunks(3)
        .map(|c| {
            let l = c[0].max(DENOMINATOR_FLOOR);
            let m = l + c[1].max(0.0);
            [l, m, m + c[2].max(0.0)]
        })
        .collect();
    let total: f64 = raw.iter().map(|[l, m, u]| (l + 4.0 * m + u) / 6.0).sum();
    WeightSet::new(
        raw.iter()
            .map(|[l, m, u]| Tfn::new(l / total, m / total, u / total).expect("ordered by construction"))
            .collect(),
    )
}

fn normalize(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    for c in x.chunks_mut(3) {
        c[0] = c[0].max(DENOMINATOR_FLOOR);
    }
    // GMIR sum, with m = l + d₁ and u = m + d₂.
    let total: f64 = x.chunks(3).map(|c| (6.0 * c[0] + 5.0 * c[1] + c[2]) / 6.0).sum();
    for v in x.iter_mut() {
        *v /= total;
    }
}

fn objective(fpcs: &Fpcs, grid: &AlphaGrid, x: &[f64]) -> f64 {
    max_residual(&decode(x), fpcs, grid.levels()).unwrap_or(f64::INFINITY)
}

/// Minimizes `key` lexicographically.
fn pattern_search(
    key: &impl Fn(&[f64]) -> (f64, f64),
    mut x: Vec<f64>,
    mut step: f64,
    resolution: f64,
    rng: &mut ChaCha8Rng,
) -> ((f64, f64), Vec<f64>) {
    normalize(&mut x);
    let dim = x.len();
    let better = |a: (f64, f64), b: (f64, f64)| a.0 < b.0 || (a.0 == b.0 && a.1 < b.1);
    let mut fx = key(&x);
    let floor = resolution / REFINEMENTS;
    let mut candidate = vec![0.0; dim];
    let mut direction = vec![0.0; dim];
    while step >= floor {
        let mut improved = false;
        for j in 0..dim {
            for sign in [1.0, -1.0] {
                candidate.copy_from_slice(&x);
                candidate[j] += sign * step;
                normalize(&mut candidate);
                let fc = key(&candidate);
                if better(fc, fx) {
                    x.copy_from_slice(&candidate);
                    fx = fc;
                    improved = true;
                }
            }
        }
        for _ in 0..DIRECTIONS_PER_DIM * dim {
            for d in direction.iter_mut() {
                *d = rng.gen_range(-1.0..1.0);
            }
            let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt().max(1e-12);
            for (c, (xi, d)) in candidate.iter_mut().zip(x.iter().zip(&direction)) {
                *c = xi + step * d / norm;
            }
            normalize(&mut candidate);
            let fc = key(&candidate);
            if better(fc, fx) {
                x.copy_from_slice(&candidate);
                fx = fc;
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (fx, x)
}
