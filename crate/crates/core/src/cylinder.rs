//! The capped-cylinder counterexample: a short cylinder satisfies the scalar
//! MCP test at every distance it contains, while its double is long enough to
//! violate it.
//!
//! The sphere factor is discretized by a ring of circumference `2πδ`; the
//! contraction on the flat double uses the `t^N` volume law of a flat
//! `N`-dimensional cylinder rather than a measured one.

use crate::coefficients::tau_coeff;
use crate::error::{Error, Result};
use crate::gluing::{double_space, GluedSpace, Side};
use crate::report::{CheckReport, Worst};
use crate::space::{metric_from_graph, MetricMeasureSpace};
use crate::transport::{default_t_grid, mcp_scalar_test, mcp_threshold};
use serde_json::json;
use std::f64::consts::PI;
use std::time::Instant;

pub const DEFAULT_ARC_POINTS: usize = 48;
pub const DEFAULT_RING_POINTS: usize = 12;
/// Bisection precision of the threshold.
pub const THRESHOLD_PRECISION: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct CylinderOptions {
    /// Points along the axis `[0, ¾ε]`.
    pub arc_points: usize,
    /// Points on each cross-section ring.
    pub ring_points: usize,
}

impl Default for CylinderOptions {
    fn default() -> Self {
        CylinderOptions { arc_points: DEFAULT_ARC_POINTS, ring_points: DEFAULT_RING_POINTS }
    }
}

#[derive(Debug, Clone)]
pub struct CylinderOutcome {
    pub threshold: f64,
    pub epsilon: f64,
    pub cylinder: MetricMeasureSpace,
    pub double: GluedSpace,
    pub report: CheckReport,
}

/// Axis `[0, length]` times a ring, with a hub capping the `i = 0` end.
/// Ids are `a{i}_{j}` and `hub`; the open-end ring is the boundary.
pub fn capped_cylinder(length: f64, delta: f64, arc_points: usize, ring_points: usize) -> Result<MetricMeasureSpace> {
    if arc_points < 2 || ring_points < 3 {
        return Err(Error::Precondition("cylinder needs at least 2 axis points and 3 ring points".into()));
    }
    let (m, p) = (arc_points, ring_points);
    let da = length / (m - 1) as f64;
    let ds = 2.0 * PI * delta / p as f64;
    let node = |i: usize, j: usize| i * p + j;
    let hub = m * p;
    let mut ids: Vec<String> = (0..m).flat_map(|i| (0..p).map(move |j| format!("a{i}_{j}"))).collect();
    ids.push("hub".into());
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..p {
            edges.push((node(i, j), node(i, (j + 1) % p), ds));
            if i + 1 < m {
                edges.push((node(i, j), node(i + 1, j), da));
            }
        }
    }
    for j in 0..p {
        edges.push((hub, node(0, j), delta));
    }
    let mut weights: Vec<f64> = (0..m)
        .flat_map(|i| {
            let w = if i == 0 || i == m - 1 { 0.5 * da * ds } else { da * ds };
            std::iter::repeat_n(w, p)
        })
        .collect();
    weights.push(PI * delta * delta);
    let s = metric_from_graph(ids, &edges, Some(weights))?;
    Ok(s.with_boundary_indices(((m - 1) * p..m * p).collect()))
}

/// Reproduces the counterexample for dimension `n ≥ 2` and ring radius
/// `delta`. The bundle passes when every step behaves as predicted, including
/// the two expected failures.
pub fn run_cylinder_example(n: usize, delta: f64, opts: CylinderOptions) -> Result<CylinderOutcome> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::Precondition(format!("dimension must be at least 2, got {n}")));
    }
    let nf = n as f64;
    let threshold = mcp_threshold(nf, THRESHOLD_PRECISION)?;
    let epsilon = 8.0 / 9.0 * threshold;
    if !(delta > 0.0 && delta <= epsilon / 16.0) {
        return Err(Error::Precondition(format!("ring radius {delta} must lie in (0, ε/16] with ε = {epsilon}")));
    }
    let grid = default_t_grid();
    let mut parts = Vec::new();

    let in_range = threshold.min(PI - threshold);
    parts.push(CheckReport::from_margin("threshold_in_range", in_range, 0.0, json!({"threshold": threshold})));

    let mut at_eps = mcp_scalar_test(nf, epsilon, &grid);
    at_eps.check = "scalar_at_epsilon".into();
    parts.push(at_eps);

    let mut beyond = CheckReport::expect_failure(mcp_scalar_test(nf, 1.25 * epsilon, &grid));
    beyond.check = "scalar_fails_at_5/4_epsilon".into();
    parts.push(beyond);

    let length = 0.75 * epsilon;
    let cylinder = capped_cylinder(length, delta, opts.arc_points, opts.ring_points)?;
    let h = length / (opts.arc_points - 1) as f64;

    // every distance in the single cylinder lies below ε, hence in Θ
    let diam = cylinder.diameter();
    let mut single = mcp_scalar_test(nf, diam, &grid);
    single.check = "single_cylinder_scalar".into();
    single.witness = json!({"diameter": diam, "inner": single.witness});
    parts.push(CheckReport::from_margin("single_cylinder_diameter", epsilon - diam, 0.0, json!({"diameter": diam})));
    parts.push(single);

    let double = double_space(&cylinder)?;
    let q = double.space();
    let p = opts.ring_points;
    let rim0 = double.quotient_of(Side::Zero, 0);
    let rim1 = double.quotient_of(Side::One, 0);
    let doubled_len = q.d(rim0, rim1);
    parts.push(CheckReport::from_margin(
        "double_length",
        h - (doubled_len - 1.5 * epsilon).abs(),
        0.0,
        json!({"length": doubled_len, "expected": 1.5 * epsilon}),
    ));

    // contract the far part of side 0 toward the hub of side 1
    let hub1 = double.quotient_of(Side::One, opts.arc_points * p);
    let reach = 1.25 * epsilon;
    let set: Vec<usize> = (0..cylinder.len())
        .map(|i| double.quotient_of(Side::Zero, i))
        .filter(|&x| q.d(hub1, x) >= reach)
        .collect();
    if set.is_empty() {
        return Err(Error::Precondition("no points of the double lie at distance 5/4·ε from the far hub".into()));
    }
    let mass: f64 = set.iter().map(|&x| q.weight(x)).sum();
    let mut worst = Worst::new();
    for &t in &grid {
        let contracted = t.powf(nf) * mass;
        let required: f64 = set.iter().map(|&x| tau_coeff(nf, nf + 1.0, t, q.d(hub1, x)).powf(nf + 1.0).to_f64() * q.weight(x)).sum();
        worst.offer(contracted - required, || json!({"t": t, "contracted": contracted, "required": required}));
    }
    let mut contraction = CheckReport::expect_failure(worst.into_report("contraction", crate::transport::MCP_TOL));
    contraction.check = "double_contraction_fails".into();
    contraction.notes.push(format!("{} points at distance ≥ {reach} from the far hub", set.len()));
    parts.push(contraction);

    let report = CheckReport::bundle("cylinder_example", parts).timed(start);
    Ok(CylinderOutcome { threshold, epsilon, cylinder, double, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::validate_space;

    #[test]
    fn n4_reproduces_the_counterexample() {
        let out = run_cylinder_example(4, 0.02, CylinderOptions::default()).unwrap();
        assert!(out.report.pass, "{}", out.report.to_json());
        assert!(out.threshold > 0.0 && out.threshold < PI);
        let len = out.report.parts.iter().find(|p| p.check == "double_length").unwrap();
        assert!((len.witness["length"].as_f64().unwrap() - 1.5 * out.epsilon).abs() < 1e-9);
    }

    #[test]
    fn thick_ring_is_rejected() {
        let thr = mcp_threshold(2.0, THRESHOLD_PRECISION).unwrap();
        let eps = 8.0 / 9.0 * thr;
        assert!(matches!(run_cylinder_example(2, eps, Default::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn cylinder_is_a_valid_space() {
        let s = capped_cylinder(0.5, 0.02, 6, 5).unwrap();
        assert!(validate_space(&s).pass);
        assert_eq!(s.boundary().len(), 5);
        assert!((s.d(0, 5 * 5) - 0.5).abs() < 1e-12);
    }
}
