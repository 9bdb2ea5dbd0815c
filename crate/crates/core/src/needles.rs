//! One-dimensional localisation along a 1-Lipschitz guide function.
//!
//! The guide `u` determines the transport relation `Γ_u`; its non-branching
//! points split into chains on which `u` decreases at unit speed. Each chain
//! carries a density w.r.t. arclength, and [`check_needle_density`] tests the
//! 1D curvature-dimension inequality for it. [`check_kink`] tests the one-sided
//! slope condition at a junction of two smooth pieces.

use crate::coefficients::{pi_k, sin_k, CUTOFF_GUARD};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Worst};
use crate::space::MetricMeasureSpace;
use serde::Serialize;
use serde_json::json;
use std::io::Write;
use std::time::Instant;

/// Tolerance of `u(x) - u(y) = d(x, y)` and of the Lipschitz bound.
pub const RELATION_TOL: f64 = 1e-9;
/// `C` in the density-check tolerance `C·h²`.
pub const DENSITY_C: f64 = 10.0;

/// Per-point values of a 1-Lipschitz function.
#[derive(Debug, Clone, PartialEq)]
pub struct GuideFunction {
    values: Vec<f64>,
}

impl GuideFunction {
    pub fn new(s: &MetricMeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != s.len() {
            return Err(Error::InvalidInput(format!("guide has {} values for {} points", values.len(), s.len())));
        }
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let du = (values[i] - values[j]).abs();
                if du > s.d(i, j) + RELATION_TOL {
                    return Err(Error::NotOneLipschitz {
                        x: s.id(i).to_string(),
                        y: s.id(j).to_string(),
                        du,
                        d: s.d(i, j),
                    });
                }
            }
        }
        Ok(GuideFunction { values })
    }

    /// The guide `x ↦ d(x, target)`.
    pub fn distance_to(s: &MetricMeasureSpace, target: usize) -> Self {
        GuideFunction { values: (0..s.len()).map(|i| s.d(i, target)).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn related(s: &MetricMeasureSpace, u: &[f64], x: usize, y: usize) -> bool {
    x != y && (u[x] - u[y] - s.d(x, y)).abs() <= RELATION_TOL
}

/// All ordered pairs `(x, y)`, `x ≠ y`, with `u(x) - u(y) = d(x, y)`.
pub fn transport_relation(s: &MetricMeasureSpace, u: &GuideFunction) -> Vec<(usize, usize)> {
    let v = u.values();
    let mut out = Vec::new();
    for x in 0..s.len() {
        for y in 0..s.len() {
            if related(s, v, x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Chains of non-branching points, sorted by decreasing `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSet {
    pub chains: Vec<Vec<usize>>,
    pub branch: Vec<usize>,
    pub unused: Vec<usize>,
}

/// Splits the points into chains, branch points and points outside every
/// nontrivial chain. A point branches when two members of its relation
/// neighbourhood are unrelated to each other.
pub fn extract_chains(s: &MetricMeasureSpace, u: &GuideFunction) -> ChainSet {
    let n = s.len();
    let v = u.values();
    let sym = |x: usize, y: usize| related(s, v, x, y) || related(s, v, y, x);
    let neighbours: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| sym(x, y)).collect()).collect();
    let branching: Vec<bool> = neighbours
        .iter()
        .map(|nb| nb.iter().enumerate().any(|(a, &y)| nb[a + 1..].iter().any(|&z| !sym(y, z))))
        .collect();

    // among non-branching points the relation is an equivalence on its support
    let mut label = vec![usize::MAX; n];
    let mut chains = Vec::new();
    let mut unused = Vec::new();
    for x in 0..n {
        if branching[x] || label[x] != usize::MAX {
            continue;
        }
        let mut members = vec![x];
        members.extend(neighbours[x].iter().copied().filter(|&y| !branching[y]));
        if members.len() == 1 {
            unused.push(x);
            continue;
        }
        for &m in &members {
            label[m] = chains.len();
        }
        members.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
        chains.push(members);
    }
    let branch = (0..n).filter(|&x| branching[x]).collect();
    ChainSet { chains, branch, unused }
}

/// A chain with its disintegrated measure: `h` is node weight per unit
/// arclength (midpoint cells) and `q` the chain's total weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeedleChain {
    pub nodes: Vec<usize>,
    pub arclength: Vec<f64>,
    pub u: Vec<f64>,
    pub weights: Vec<f64>,
    pub h: Vec<f64>,
    pub q: f64,
}

impl NeedleChain {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Density of the chain's conditional probability measure.
    pub fn normalized_density(&self) -> Vec<f64> {
        self.h.iter().map(|h| h / self.q).collect()
    }

    pub fn profile(&self) -> Result<DensityProfile> {
        DensityProfile::new(self.arclength.clone(), self.h.clone())
    }
}

fn midpoint_cells(r: &[f64]) -> Vec<f64> {
    let m = r.len();
    (0..m)
        .map(|k| {
            let lo = if k == 0 { r[0] } else { 0.5 * (r[k - 1] + r[k]) };
            let hi = if k + 1 == m { r[m - 1] } else { 0.5 * (r[k] + r[k + 1]) };
            hi - lo
        })
        .collect()
}

/// Assigns every chain node's weight to its chain. Arclength starts at the
/// first node (largest `u`).
pub fn disintegrate(s: &MetricMeasureSpace, u: &GuideFunction, chains: &[Vec<usize>]) -> Result<Vec<NeedleChain>> {
    let mut owner = vec![usize::MAX; s.len()];
    for (c, chain) in chains.iter().enumerate() {
        for &x in chain {
            if owner[x] != usize::MAX {
                return Err(Error::OverlappingChains(s.id(x).to_string()));
            }
            owner[x] = c;
        }
    }
    chains
        .iter()
        .map(|chain| {
            let u_vals: Vec<f64> = chain.iter().map(|&x| u.values()[x]).collect();
            let arclength: Vec<f64> = chain.iter().map(|&x| s.d(chain[0], x)).collect();
            let weights: Vec<f64> = chain.iter().map(|&x| s.weight(x)).collect();
            let cells = midpoint_cells(&arclength);
            if chain.len() > 1 && cells.iter().any(|&c| c <= 0.0) {
                return Err(Error::InvalidInput("chain has coincident nodes".into()));
            }
            let h = if chain.len() > 1 {
                weights.iter().zip(&cells).map(|(w, c)| w / c).collect()
            } else {
                vec![f64::INFINITY]
            };
            let q = weights.iter().sum();
            Ok(NeedleChain { nodes: chain.clone(), arclength, u: u_vals, weights, h, q })
        })
        .collect()
}

/// Mass bookkeeping of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassBalance {
    pub chains: f64,
    pub branch: f64,
    pub unused: f64,
    pub total: f64,
}

impl MassBalance {
    pub fn of(s: &MetricMeasureSpace, set: &ChainSet, needles: &[NeedleChain]) -> Self {
        MassBalance {
            chains: needles.iter().map(|c| c.q).fold(0.0, |a, b| a + b),
            branch: set.branch.iter().map(|&x| s.weight(x)).fold(0.0, |a, b| a + b),
            unused: set.unused.iter().map(|&x| s.weight(x)).fold(0.0, |a, b| a + b),
            total: s.total_weight(),
        }
    }

    pub fn defect(&self) -> f64 {
        (self.chains + self.branch + self.unused - self.total).abs()
    }
}

/// A function sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl DensityProfile {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.is_empty() {
            return Err(Error::InvalidInput("grid and values must be nonempty and of equal length".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("grid must be strictly increasing".into()));
        }
        if grid.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("profile has non-finite entries".into()));
        }
        Ok(DensityProfile { grid, values })
    }

    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&r| f(r)).collect();
        DensityProfile::new(grid, values)
    }

    /// `n` equally spaced points on `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        DensityProfile::from_fn(grid, f)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_step(&self) -> f64 {
        self.grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    fn second_differences(&self) -> Vec<(usize, f64)> {
        (1..self.len().saturating_sub(1))
            .map(|k| {
                let r = [self.grid[k - 1], self.grid[k], self.grid[k + 1]];
                let f = [self.values[k - 1], self.values[k], self.values[k + 1]];
                (k, crate::space::second_difference(r, f))
            })
            .collect()
    }
}

/// `h(c_t)^{1/(N-1)} ≥ σ^{(1-t)}_{K,N-1}(θ) h(c_0)^{1/(N-1)} + σ^{(t)}_{K,N-1}(θ) h(c_1)^{1/(N-1)}`
/// over every grid triple `c_0 < c_t < c_1`.
pub fn check_needle_density(profile: &DensityProfile, k: f64, n: f64) -> Result<CheckReport> {
    let start = Instant::now();
    if !(n > 1.0) {
        return Err(Error::Precondition(format!("density check needs N > 1, got {n}")));
    }
    if let Some((index, &value)) = profile.values().iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::NonPositiveDensity { index, value });
    }
    let kappa = k / (n - 1.0);
    let cutoff = pi_k(kappa).to_f64();
    let r = profile.grid();
    let m = r.len();
    let p: Vec<f64> = profile.values().iter().map(|h| h.powf(1.0 / (n - 1.0))).collect();
    // sin_κ of every pairwise gap; NaN marks gaps at or beyond the cutoff
    let mut table = vec![f64::NAN; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let gap = r[j] - r[i];
            if gap < cutoff - CUTOFF_GUARD {
                table[i * m + j] = sin_k(kappa, gap);
            }
        }
    }
    let mut worst = Worst::new();
    for i in 0..m {
        for j in (i + 2)..m {
            let sij = table[i * m + j];
            for c in (i + 1)..j {
                let margin = if sij.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    p[c] - (table[c * m + j] / sij) * p[i] - (table[i * m + c] / sij) * p[j]
                };
                worst.offer(margin, || json!({"r0": r[i], "rt": r[c], "r1": r[j]}));
            }
        }
    }
    let tol = DENSITY_C * profile.max_step().powi(2);
    Ok(worst.into_report("needle_density", tol).timed(start))
}

/// Least-squares slope of `(x, y)` samples.
pub(crate) fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Kink test at a junction `c`: each side must satisfy `u'' ≤ -k·u`, and then
/// the left slope must dominate the right slope.
pub fn check_kink(left: &DensityProfile, right: &DensityProfile, c: f64, k: f64) -> Result<CheckReport> {
    let start = Instant::now();
    if left.len() < 3 || right.len() < 3 {
        return Err(Error::InvalidInput("each side needs at least 3 grid points".into()));
    }
    if *left.grid().last().unwrap() > c + RELATION_TOL || right.grid()[0] < c - RELATION_TOL {
        return Err(Error::InvalidInput(format!("profiles must lie on either side of the junction {c}")));
    }
    let h = left.max_step().max(right.max_step());
    let mut d2_max: f64 = 0.0;
    for (side, prof) in [("left", left), ("right", right)] {
        for (idx, d2) in prof.second_differences() {
            let u = prof.values()[idx];
            if d2 > -k * u + DENSITY_C * h * h * u.abs().max(1.0) {
                return Err(Error::SideConditionFailed { side, index: idx });
            }
            d2_max = d2_max.max(d2.abs());
        }
    }
    let tail = left.len() - 3;
    let d_minus = ls_slope(&left.grid()[tail..], &left.values()[tail..]);
    let d_plus = ls_slope(&right.grid()[..3], &right.values()[..3]);
    let tol = 2.0 * h * d2_max + 1e-12;
    Ok(CheckReport::from_margin("kink", d_minus - d_plus, tol, json!({"c": c, "d_minus": d_minus, "d_plus": d_plus})).timed(start))
}

/// Runs the needle decomposition for each guide and checks the density of
/// every chain with at least three nodes.
pub fn verify_cd1(s: &MetricMeasureSpace, guides: &[GuideFunction], k: f64, n: f64) -> Result<CheckReport> {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (g, u) in guides.iter().enumerate() {
        let set = extract_chains(s, u);
        let needles = disintegrate(s, u, &set.chains)?;
        let balance = MassBalance::of(s, &set, &needles);
        let mut chain_parts = Vec::new();
        for (ci, chain) in needles.iter().enumerate() {
            if chain.len() < 3 {
                continue;
            }
            let mut r = check_needle_density(&chain.profile()?, k, n)?;
            r.check = format!("needle_density[{ci}]");
            chain_parts.push(r);
        }
        let mut r = CheckReport::bundle(format!("guide[{g}]"), chain_parts);
        if balance.branch > 0.0 {
            r.notes.push(format!("branch mass {}", balance.branch));
        }
        if balance.unused > 0.0 {
            r.notes.push(format!("unused mass {}", balance.unused));
        }
        parts.push(r);
    }
    Ok(CheckReport::bundle("cd1", parts).timed(start))
}

/// Writes one CSV row per chain node.
pub fn write_needles_csv<W: Write>(out: W, s: &MetricMeasureSpace, needles: &[NeedleChain]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["chain_id", "node_id", "arclength", "u", "weight", "h"])?;
    for (c, chain) in needles.iter().enumerate() {
        for k in 0..chain.len() {
            w.write_record([
                c.to_string(),
                s.id(chain.nodes[k]).to_string(),
                chain.arclength[k].to_string(),
                chain.u[k].to_string(),
                chain.weights[k].to_string(),
                chain.h[k].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
