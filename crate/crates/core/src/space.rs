//! Finite metric measure spaces.
//!
//! A space is an ordered list of opaque point ids with a symmetric distance
//! matrix and nonnegative point weights. Points are addressed by index
//! internally; ids are only used at the boundary (I/O, witnesses).

use crate::coefficients::{md_k, pi_k, ExtendedReal};
use crate::error::{Error, Result};
use crate::graph;
use crate::report::{CheckReport, Worst};
use serde_json::json;
use std::collections::HashMap;

/// Tolerance for the metric axioms in [`validate_space`].
pub const METRIC_TOL: f64 = 1e-9;
/// Allowed excess of a discrete geodesic's length over the endpoint distance.
pub const GEODESIC_TOL: f64 = 1e-6;
/// Constant in the `C·h²` tolerance of the comparison check.
pub const COMPARISON_C: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricMeasureSpace {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<f64>,
    weight: Vec<f64>,
    boundary: Vec<usize>,
}

impl MetricMeasureSpace {
    /// Builds a space from a row-major `n × n` distance matrix. Only shapes and
    /// id uniqueness are checked here; use [`validate_space`] for the axioms.
    pub fn from_flat(ids: Vec<String>, dist: Vec<f64>, weight: Vec<f64>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidInput("space has no points".into()));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidInput(format!("distance matrix has {} entries, expected {}", dist.len(), n * n)));
        }
        if weight.len() != n {
            return Err(Error::InvalidInput(format!("{} weights for {} points", weight.len(), n)));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate point id `{id}`")));
            }
        }
        Ok(MetricMeasureSpace { ids, index, dist, weight, boundary: Vec::new() })
    }

    pub fn new(ids: Vec<String>, dist: Vec<Vec<f64>>, weight: Vec<f64>) -> Result<Self> {
        let n = ids.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("distance matrix is not square".into()));
        }
        Self::from_flat(ids, dist.into_iter().flatten().collect(), weight)
    }

    /// Declares the boundary by point ids.
    pub fn with_boundary<S: AsRef<str>>(mut self, ids: &[S]) -> Result<Self> {
        let mut b = ids.iter().map(|id| self.index_of(id.as_ref())).collect::<Result<Vec<_>>>()?;
        b.sort_unstable();
        b.dedup();
        self.boundary = b;
        Ok(self)
    }

    pub fn with_boundary_indices(mut self, mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        idx.dedup();
        assert!(idx.iter().all(|&i| i < self.len()));
        self.boundary = idx;
        self
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.ids.len() + j]
    }

    pub fn dist_flat(&self) -> &[f64] {
        &self.dist
    }

    pub fn dist_rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weight[i]
    }

    pub fn total_weight(&self) -> f64 {
        self.weight.iter().sum()
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn has_boundary(&self) -> bool {
        !self.boundary.is_empty()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary.binary_search(&i).is_ok()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Largest nearest-neighbour distance: the spatial resolution of the sample.
    pub fn mesh_size(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| self.d(i, j)).fold(f64::INFINITY, f64::min))
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max)
    }

    /// Same points and metric with new weights.
    pub fn reweighted(&self, weights: Vec<f64>) -> MetricMeasureSpace {
        assert_eq!(weights.len(), self.len());
        MetricMeasureSpace { weight: weights, ..self.clone() }
    }

    pub fn validate(&self) -> CheckReport {
        validate_space(self)
    }
}

/// Checks the metric axioms, weight signs and boundary declaration.
pub fn validate_space(s: &MetricMeasureSpace) -> CheckReport {
    let n = s.len();
    let mut worst = Worst::new();
    let mut notes = Vec::new();
    for i in 0..n {
        worst.offer(-s.d(i, i).abs(), || json!({"kind": "diagonal", "points": [s.id(i)]}));
        for j in 0..n {
            let dij = s.d(i, j);
            if !dij.is_finite() {
                worst.offer(f64::NEG_INFINITY, || json!({"kind": "non_finite", "points": [s.id(i), s.id(j)]}));
                continue;
            }
            worst.offer(dij.min(0.0), || json!({"kind": "negative", "points": [s.id(i), s.id(j)]}));
            if j > i {
                let asym = (dij - s.d(j, i)).abs();
                worst.offer(-asym, || json!({"kind": "asymmetric", "points": [s.id(i), s.id(j)]}));
                if dij == 0.0 && notes.is_empty() {
                    notes.push(format!("points `{}` and `{}` are at distance zero", s.id(i), s.id(j)));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let dij = s.d(i, j);
            for k in 0..n {
                let slack = dij + s.d(j, k) - s.d(i, k);
                if slack < worst.margin {
                    worst.offer(slack, || json!({"kind": "triangle", "points": [s.id(i), s.id(j), s.id(k)]}));
                }
            }
        }
    }
    for (i, &w) in s.weights().iter().enumerate() {
        let m = if w.is_finite() { w.min(0.0) } else { f64::NEG_INFINITY };
        worst.offer(m, || json!({"kind": "weight", "points": [s.id(i)]}));
    }
    if s.total_weight() <= 0.0 {
        worst.offer(f64::NEG_INFINITY, || json!({"kind": "total_weight"}));
    }
    let mut r = worst.into_report("validate_space", METRIC_TOL);
    r.notes.extend(notes);
    r
}

/// Completes a weighted graph to its shortest-path metric. Edges are
/// `(i, j, w)` with node indices into `ids`; `weights` defaults to one per node.
pub fn metric_from_graph(ids: Vec<String>, edges: &[(usize, usize, f64)], weights: Option<Vec<f64>>) -> Result<MetricMeasureSpace> {
    let n = ids.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b, w) in edges {
        if a >= n || b >= n {
            return Err(Error::InvalidInput(format!("edge ({a}, {b}) references a missing node")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidInput(format!("edge ({a}, {b}) has non-positive weight {w}")));
        }
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let dist = graph::all_pairs(&adj);
    if let Some(pos) = dist.iter().position(|d| d.is_infinite()) {
        return Err(Error::DisconnectedGraph(ids[pos % n].clone()));
    }
    let weights = weights.unwrap_or_else(|| vec![1.0; n]);
    MetricMeasureSpace::from_flat(ids, dist, weights)
}

/// Rényi entropy `S_N(μ|m) = -Σ ρ_i^{1-1/N} m_i` with `ρ = μ/m`.
pub fn renyi_entropy(mu: &[f64], s: &MetricMeasureSpace, n: f64) -> Result<f64> {
    if mu.len() != s.len() {
        return Err(Error::InvalidInput(format!("measure has {} entries for {} points", mu.len(), s.len())));
    }
    if n < 1.0 {
        return Err(Error::InvalidInput(format!("N = {n} < 1")));
    }
    if mu.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidInput("measure has negative or non-finite entries".into()));
    }
    let total: f64 = mu.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("measure has total mass {total}, expected 1")));
    }
    let expo = 1.0 - 1.0 / n;
    let mut acc = 0.0;
    for (i, (&m, &w)) in mu.iter().zip(s.weights()).enumerate() {
        if m == 0.0 {
            continue;
        }
        if w <= 0.0 {
            return Err(Error::AbsoluteContinuityViolation(s.id(i).to_string()));
        }
        acc += (m / w).powf(expo) * w;
    }
    Ok(-acc)
}

/// Shortest-path distances inside `subset` using only edges of length at most
/// `r_nn`. Pairs in different components get `+∞`. Row-major `k × k`.
pub(crate) fn intrinsic_distances(s: &MetricMeasureSpace, subset: &[usize], r_nn: f64) -> Vec<f64> {
    let k = subset.len();
    let adj: Vec<Vec<(usize, f64)>> = (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a)
                .filter_map(|b| {
                    let w = s.d(subset[a], subset[b]);
                    (w <= r_nn).then_some((b, w))
                })
                .collect()
        })
        .collect();
    graph::all_pairs(&adj)
}

/// Restriction of `s` to `subset` with the intrinsic (neighbour-graph) metric.
pub fn intrinsic_submetric(s: &MetricMeasureSpace, subset: &[usize], r_nn: f64) -> Result<MetricMeasureSpace> {
    if subset.is_empty() {
        return Err(Error::InvalidInput("empty subset".into()));
    }
    let k = subset.len();
    let dist = intrinsic_distances(s, subset, r_nn);
    if let Some(pos) = dist.iter().position(|d| d.is_infinite()) {
        return Err(Error::DisconnectedSubset {
            from: s.id(subset[pos / k]).to_string(),
            to: s.id(subset[pos % k]).to_string(),
            radius: r_nn,
        });
    }
    let ids = subset.iter().map(|&i| s.id(i).to_string()).collect();
    let weights = subset.iter().map(|&i| s.weight(i)).collect();
    let boundary: Vec<usize> = (0..k).filter(|&a| s.is_boundary(subset[a])).collect();
    Ok(MetricMeasureSpace::from_flat(ids, dist, weights)?.with_boundary_indices(boundary))
}

/// An ordered chain of points whose consecutive distances add up to the
/// distance between its endpoints (up to [`GEODESIC_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGeodesic {
    nodes: Vec<usize>,
    arclength: Vec<f64>,
}

impl DiscreteGeodesic {
    pub fn new(s: &MetricMeasureSpace, nodes: Vec<usize>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("empty geodesic".into()));
        }
        if let Some(&bad) = nodes.iter().find(|&&i| i >= s.len()) {
            return Err(Error::InvalidInput(format!("geodesic node index {bad} out of range")));
        }
        let mut arclength = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        arclength.push(0.0);
        for w in nodes.windows(2) {
            acc += s.d(w[0], w[1]);
            arclength.push(acc);
        }
        let direct = s.d(nodes[0], *nodes.last().unwrap());
        if acc - direct > GEODESIC_TOL {
            return Err(Error::InvalidInput(format!(
                "chain {} -> {} has length {acc} but endpoints are {direct} apart",
                s.id(nodes[0]),
                s.id(*nodes.last().unwrap())
            )));
        }
        Ok(DiscreteGeodesic { nodes, arclength })
    }

    pub fn from_ids<S: AsRef<str>>(s: &MetricMeasureSpace, ids: &[S]) -> Result<Self> {
        let nodes = ids.iter().map(|id| s.index_of(id.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(s, nodes)
    }

    /// Builds the finest chain from `a` to `b` by repeatedly stepping to the
    /// nearest point that lies metrically between the current point and `b`
    /// (ties go to the lowest index).
    pub fn between(s: &MetricMeasureSpace, a: usize, b: usize) -> Self {
        let tol = 1e-9 * s.d(a, b).max(1.0);
        let mut nodes = vec![a];
        let mut cur = a;
        while cur != b {
            let to_b = s.d(cur, b);
            let mut best = b;
            let mut best_d = to_b;
            for z in 0..s.len() {
                let dz = s.d(cur, z);
                if z == cur || dz <= 0.0 || dz >= best_d {
                    continue;
                }
                let rest = s.d(z, b);
                if rest < to_b && dz + rest <= to_b + tol {
                    best = z;
                    best_d = dz;
                }
            }
            nodes.push(best);
            cur = best;
        }
        let mut arclength = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        arclength.push(0.0);
        for w in nodes.windows(2) {
            acc += s.d(w[0], w[1]);
            arclength.push(acc);
        }
        DiscreteGeodesic { nodes, arclength }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn arclength(&self) -> &[f64] {
        &self.arclength
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        *self.arclength.last().unwrap()
    }

    pub fn max_step(&self) -> f64 {
        self.arclength.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    pub fn reversed(&self) -> Self {
        let total = self.total_length();
        DiscreteGeodesic {
            nodes: self.nodes.iter().rev().copied().collect(),
            arclength: self.arclength.iter().rev().map(|a| total - a).collect(),
        }
    }

    /// Node whose arclength is nearest to `target`; ties go to the lowest point
    /// index. Gaps within a relative `1e-12` of the length count as ties, so
    /// half-way targets do not depend on rounding.
    pub fn nearest_node(&self, target: f64) -> usize {
        let eps = 1e-12 * self.total_length().max(target.abs());
        let mut best = (f64::INFINITY, usize::MAX);
        for (&node, &r) in self.nodes.iter().zip(&self.arclength) {
            let gap = (r - target).abs();
            if gap < best.0 - eps || (gap <= best.0 + eps && node < best.1) {
                best = (gap.min(best.0), node);
            }
        }
        best.1
    }
}

/// Second-derivative estimate at the middle of three samples on a possibly
/// non-uniform grid.
#[inline]
pub(crate) fn second_difference(r: [f64; 3], f: [f64; 3]) -> f64 {
    let hm = r[1] - r[0];
    let hp = r[2] - r[1];
    2.0 * ((f[2] - f[1]) / hp - (f[1] - f[0]) / hm) / (hm + hp)
}

/// Discrete form of `[md_κ(d_y∘γ)]'' + κ·md_κ(d_y∘γ) ≤ 1` along each geodesic
/// for each witness `y`, with tolerance `10·h²` (`h` the largest step).
pub fn check_alexandrov_comparison(
    s: &MetricMeasureSpace,
    kappa: f64,
    geodesics: &[DiscreteGeodesic],
    witnesses: &[usize],
) -> Result<CheckReport> {
    let h = geodesics.iter().map(DiscreteGeodesic::max_step).fold(0.0, f64::max);
    let tol = COMPARISON_C * h * h;
    let bound = pi_k(kappa).scale(2.0);
    let mut worst = Worst::new();
    for (gi, g) in geodesics.iter().enumerate() {
        let nodes = g.nodes();
        for &y in witnesses {
            let perimeter = s.d(y, nodes[0]) + g.total_length() + s.d(*nodes.last().unwrap(), y);
            if ExtendedReal::Finite(perimeter) >= bound {
                return Err(Error::PerimeterBoundViolated {
                    geodesic: gi,
                    witness: s.id(y).to_string(),
                    perimeter,
                    bound: bound.to_f64(),
                });
            }
            for k in 1..nodes.len().saturating_sub(1) {
                let r = [g.arclength()[k - 1], g.arclength()[k], g.arclength()[k + 1]];
                let f = [
                    md_k(kappa, s.d(y, nodes[k - 1])),
                    md_k(kappa, s.d(y, nodes[k])),
                    md_k(kappa, s.d(y, nodes[k + 1])),
                ];
                let margin = 1.0 - (second_difference(r, f) + kappa * f[1]);
                worst.offer(margin, || {
                    json!({"geodesic": gi, "node": s.id(nodes[k]), "witness": s.id(y), "arclength": r[1]})
                });
            }
        }
    }
    Ok(worst.into_report("alexandrov_comparison", tol))
}
