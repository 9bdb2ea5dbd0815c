//! Gluing two spaces along an isometry of their boundaries.
//!
//! The glued distance is the infimum of lengths of chains that may jump
//! between identified boundary points at no cost. On finite spaces every chain
//! alternates between direct hops inside `X0` or `X1`, so the infimum reduces
//! to a shortest-path problem on the seam followed by one hop at each end.

use crate::error::{Error, Result};
use crate::report::{CheckReport, Worst};
use crate::space::{intrinsic_distances, MetricMeasureSpace};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::HashSet;

/// Tolerance on intrinsic boundary distances for a pairing to count as an isometry.
pub const ISOMETRY_TOL: f64 = 1e-6;
/// Tolerance for functions to agree across the seam.
pub const SEAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

/// Pairing of boundary ids of `X0` with boundary ids of `X1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryIsometry {
    pub pairs: Vec<(String, String)>,
}

impl BoundaryIsometry {
    pub fn new(pairs: Vec<(String, String)>) -> Self {
        BoundaryIsometry { pairs }
    }

    /// Identity pairing of the boundary of `x` with itself.
    pub fn identity(x: &MetricMeasureSpace) -> Self {
        let pairs = x.boundary().iter().map(|&b| (x.id(b).to_string(), x.id(b).to_string())).collect();
        BoundaryIsometry { pairs }
    }

    pub fn inverse(&self) -> Self {
        BoundaryIsometry { pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    fn resolve(&self, x0: &MetricMeasureSpace, x1: &MetricMeasureSpace) -> Result<Vec<(usize, usize)>> {
        self.pairs
            .iter()
            .map(|(a, b)| Ok((x0.index_of(a)?, x1.index_of(b)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::IsometryInvalid(e.to_string()))
    }
}

/// Where a quotient point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preimage {
    pub side0: Option<usize>,
    pub side1: Option<usize>,
}

impl Preimage {
    pub fn is_seam(&self) -> bool {
        self.side0.is_some() && self.side1.is_some()
    }

    pub fn on(&self, side: Side) -> Option<usize> {
        match side {
            Side::Zero => self.side0,
            Side::One => self.side1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub id: String,
    pub side: Side,
    pub original: String,
}

#[derive(Debug, Clone)]
pub struct GluedSpace {
    space: MetricMeasureSpace,
    preimages: Vec<Preimage>,
    seam: Vec<usize>,
    to_quotient: [Vec<usize>; 2],
    original_ids: [Vec<String>; 2],
    doubled: bool,
}

impl GluedSpace {
    pub fn space(&self) -> &MetricMeasureSpace {
        &self.space
    }

    pub fn into_space(self) -> MetricMeasureSpace {
        self.space
    }

    /// Quotient indices of identified boundary points.
    pub fn seam(&self) -> &[usize] {
        &self.seam
    }

    pub fn preimage(&self, q: usize) -> Preimage {
        self.preimages[q]
    }

    pub fn preimages(&self) -> &[Preimage] {
        &self.preimages
    }

    /// Quotient index of point `i` of the given side.
    pub fn quotient_of(&self, side: Side, i: usize) -> usize {
        self.to_quotient[side as usize][i]
    }

    pub fn side_len(&self, side: Side) -> usize {
        self.to_quotient[side as usize].len()
    }

    /// True when the point belongs to the image of `side` (seam points belong to both).
    pub fn lies_on(&self, q: usize, side: Side) -> bool {
        self.preimages[q].on(side).is_some()
    }

    pub fn provenance(&self) -> Vec<ProvenanceEntry> {
        let mut out = Vec::new();
        for (q, p) in self.preimages.iter().enumerate() {
            for side in [Side::Zero, Side::One] {
                if let Some(i) = p.on(side) {
                    out.push(ProvenanceEntry {
                        id: self.space.id(q).to_string(),
                        side,
                        original: self.original_ids[side as usize][i].clone(),
                    });
                }
            }
        }
        out
    }

    /// For a double space, the involution swapping the two copies and fixing
    /// the seam, as a permutation of quotient indices.
    pub fn mirror(&self) -> Option<Vec<usize>> {
        if !self.doubled {
            return None;
        }
        Some(
            self.preimages
                .iter()
                .map(|p| match (p.side0, p.side1) {
                    (Some(i), None) => self.to_quotient[1][i],
                    (None, Some(i)) => self.to_quotient[0][i],
                    _ => self.to_quotient[0][p.side0.unwrap()],
                })
                .collect(),
        )
    }
}

fn check_bijection(x0: &MetricMeasureSpace, x1: &MetricMeasureSpace, pairs: &[(usize, usize)]) -> Option<String> {
    let mut left = HashSet::new();
    let mut right = HashSet::new();
    for &(a, b) in pairs {
        if !x0.is_boundary(a) {
            return Some(format!("`{}` is not a boundary point of X0", x0.id(a)));
        }
        if !x1.is_boundary(b) {
            return Some(format!("`{}` is not a boundary point of X1", x1.id(b)));
        }
        if !left.insert(a) {
            return Some(format!("`{}` is paired twice", x0.id(a)));
        }
        if !right.insert(b) {
            return Some(format!("`{}` is paired twice", x1.id(b)));
        }
    }
    if left.len() != x0.boundary().len() || right.len() != x1.boundary().len() {
        return Some("pairing does not cover both boundaries".into());
    }
    None
}

/// Checks that the pairing is a bijection of the declared boundaries that
/// preserves intrinsic boundary distances (neighbour graph of radius `r_nn`).
pub fn validate_boundary_isometry(
    x0: &MetricMeasureSpace,
    x1: &MetricMeasureSpace,
    iso: &BoundaryIsometry,
    r_nn: f64,
) -> Result<CheckReport> {
    if !x0.has_boundary() || !x1.has_boundary() {
        return Err(Error::MissingBoundary);
    }
    let pairs = iso.resolve(x0, x1)?;
    if let Some(why) = check_bijection(x0, x1, &pairs) {
        return Ok(CheckReport::from_margin("boundary_isometry", f64::NEG_INFINITY, ISOMETRY_TOL, json!({"kind": "bijection", "reason": why})));
    }
    let left: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let right: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let d0 = intrinsic_distances(x0, &left, r_nn);
    let d1 = intrinsic_distances(x1, &right, r_nn);
    let k = pairs.len();
    let mut worst = Worst::new();
    let mut disconnected = false;
    for a in 0..k {
        for b in (a + 1)..k {
            let (u, v) = (d0[a * k + b], d1[a * k + b]);
            let gap = match (u.is_finite(), v.is_finite()) {
                (true, true) => (u - v).abs(),
                (false, false) => {
                    disconnected = true;
                    0.0
                }
                _ => f64::INFINITY,
            };
            worst.offer(-gap, || json!({"pair": [[x0.id(left[a]), x1.id(right[a])], [x0.id(left[b]), x1.id(right[b])]], "d0": u, "d1": v}));
        }
    }
    if k < 2 {
        return Ok(CheckReport::vacuous("boundary_isometry", ISOMETRY_TOL));
    }
    let mut r = worst.into_report("boundary_isometry", ISOMETRY_TOL);
    if disconnected {
        r.notes.push(format!("DisconnectedSubset: boundary is disconnected at connectivity radius {r_nn}; such pairs are compared as components only"));
    }
    Ok(r)
}

/// Glues `x0` and `x1` along `iso` after validating it.
pub fn glue_spaces(x0: &MetricMeasureSpace, x1: &MetricMeasureSpace, iso: &BoundaryIsometry, r_nn: f64) -> Result<GluedSpace> {
    let report = validate_boundary_isometry(x0, x1, iso, r_nn)?;
    if !report.pass {
        return Err(Error::IsometryInvalid(format!("worst intrinsic mismatch {} at {}", report.worst_margin, report.witness)));
    }
    let pairs = iso.resolve(x0, x1)?;
    Ok(glue_unchecked(x0, x1, &pairs, false))
}

/// The double `X ∪_id X` of a space with boundary.
pub fn double_space(x: &MetricMeasureSpace) -> Result<GluedSpace> {
    if !x.has_boundary() {
        return Err(Error::MissingBoundary);
    }
    let pairs: Vec<(usize, usize)> = x.boundary().iter().map(|&b| (b, b)).collect();
    Ok(glue_unchecked(x, x, &pairs, true))
}

fn glue_unchecked(x0: &MetricMeasureSpace, x1: &MetricMeasureSpace, pairs: &[(usize, usize)], doubled: bool) -> GluedSpace {
    let (n0, n1, k) = (x0.len(), x1.len(), pairs.len());

    // seam-to-seam chain distances
    let mut seam_d = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            seam_d[a * k + b] = x0.d(pairs[a].0, pairs[b].0).min(x1.d(pairs[a].1, pairs[b].1));
        }
    }
    for m in 0..k {
        for a in 0..k {
            for b in 0..k {
                let via = seam_d[a * k + m] + seam_d[m * k + b];
                if via < seam_d[a * k + b] {
                    seam_d[a * k + b] = via;
                }
            }
        }
    }
    // reach[x][q]: shortest chain from x (inside its side) to seam point q
    let reach = |x: &MetricMeasureSpace, pick: fn(&(usize, usize)) -> usize, n: usize| -> Vec<f64> {
        let mut out = vec![f64::INFINITY; n * k];
        for i in 0..n {
            for q in 0..k {
                let mut best = f64::INFINITY;
                for p in 0..k {
                    best = best.min(x.d(i, pick(&pairs[p])) + seam_d[p * k + q]);
                }
                out[i * k + q] = best;
            }
        }
        out
    };
    let reach0 = reach(x0, |p| p.0, n0);
    let reach1 = reach(x1, |p| p.1, n1);

    // quotient layout: all of X0, then the non-seam part of X1
    let mut partner1 = vec![None; n1];
    for &(a, b) in pairs {
        partner1[b] = Some(a);
    }
    let mut preimages: Vec<Preimage> = (0..n0).map(|i| Preimage { side0: Some(i), side1: None }).collect();
    let mut to_q1 = vec![0; n1];
    for j in 0..n1 {
        match partner1[j] {
            Some(a) => {
                preimages[a].side1 = Some(j);
                to_q1[j] = a;
            }
            None => {
                to_q1[j] = preimages.len();
                preimages.push(Preimage { side0: None, side1: Some(j) });
            }
        }
    }
    let nq = preimages.len();

    let mut taken: HashSet<String> = x0.ids().iter().cloned().collect();
    let mut ids: Vec<String> = x0.ids().to_vec();
    for p in &preimages[n0..] {
        let mut id = format!("{}#1", x1.id(p.side1.unwrap()));
        while taken.contains(&id) {
            id.push_str("#1");
        }
        taken.insert(id.clone());
        ids.push(id);
    }

    let hop = |side_a: Side, a: usize, side_b: Side, b: usize| -> f64 {
        let (reach_a, _) = match side_a {
            Side::Zero => (&reach0, n0),
            Side::One => (&reach1, n1),
        };
        let mut best = match (side_a, side_b) {
            (Side::Zero, Side::Zero) => x0.d(a, b),
            (Side::One, Side::One) => x1.d(a, b),
            _ => f64::INFINITY,
        };
        for q in 0..k {
            let last = match side_b {
                Side::Zero => x0.d(pairs[q].0, b),
                Side::One => x1.d(pairs[q].1, b),
            };
            best = best.min(reach_a[a * k + q] + last);
        }
        best
    };
    let rep = |p: &Preimage| match p.side0 {
        Some(i) => (Side::Zero, i),
        None => (Side::One, p.side1.unwrap()),
    };
    let mut dist = vec![0.0; nq * nq];
    for a in 0..nq {
        let (sa, ia) = rep(&preimages[a]);
        for b in (a + 1)..nq {
            let (sb, ib) = rep(&preimages[b]);
            let v = hop(sa, ia, sb, ib).min(hop(sb, ib, sa, ia));
            dist[a * nq + b] = v;
            dist[b * nq + a] = v;
        }
    }

    let mut weights: Vec<f64> = x0.weights().to_vec();
    for &(a, b) in pairs {
        weights[a] += x1.weight(b);
    }
    weights.extend(preimages[n0..].iter().map(|p| x1.weight(p.side1.unwrap())));

    let space = MetricMeasureSpace::from_flat(ids, dist, weights).expect("quotient ids are unique");
    let mut seam: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    seam.sort_unstable();
    GluedSpace {
        space,
        preimages,
        seam,
        to_quotient: [(0..n0).collect(), to_q1],
        original_ids: [x0.ids().to_vec(), x1.ids().to_vec()],
        doubled,
    }
}

/// `Φ_Z` on the quotient: `Φ0` on the image of `X0`, `Φ1` on the image of `X1`.
pub fn glue_function(phi0: &[f64], phi1: &[f64], glued: &GluedSpace) -> Result<Vec<f64>> {
    if phi0.len() != glued.side_len(Side::Zero) || phi1.len() != glued.side_len(Side::One) {
        return Err(Error::InvalidInput("function length does not match its side".into()));
    }
    glued
        .preimages
        .iter()
        .enumerate()
        .map(|(q, p)| match (p.side0, p.side1) {
            (Some(a), Some(b)) => {
                if (phi0[a] - phi1[b]).abs() > SEAM_TOL {
                    Err(Error::SeamMismatch { id: glued.space.id(q).to_string(), left: phi0[a], right: phi1[b] })
                } else {
                    Ok(phi0[a])
                }
            }
            (Some(a), None) => Ok(phi0[a]),
            (None, Some(b)) => Ok(phi1[b]),
            (None, None) => unreachable!("every quotient point has a preimage"),
        })
        .collect()
}
