//! Optimal transport on finite spaces and the entropy inequalities built on it.
//!
//! [`optimal_coupling`] solves the quadratic-cost transportation problem
//! exactly, [`displacement_interpolation`] moves each transported atom along a
//! discrete geodesic, and [`check_cd`] compares the Rényi entropy of the
//! interpolant against the distortion-weighted right-hand side of the CD
//! (`τ` coefficients) or CD* (`σ` coefficients) inequality. The scalar MCP
//! test and its threshold live here as well.

mod simplex;

use crate::coefficients::{sigma_coeff, tau_coeff, CurvatureDimension, ExtendedReal};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Worst};
use crate::space::{renyi_entropy, DiscreteGeodesic, MetricMeasureSpace};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::HashMap;
use std::time::Instant;

/// Marginal tolerance for couplings and probability measures.
pub const MARGINAL_TOL: f64 = 1e-9;
/// Tolerance of the scalar MCP inequality.
pub const MCP_TOL: f64 = 1e-12;
/// Number of intervals in the default time grid.
pub const DEFAULT_T_STEPS: usize = 16;
/// Number of intervals in the dense grid used for the MCP threshold.
pub const DENSE_T_STEPS: usize = 4096;

/// `{k/steps : k = 0..=steps}`.
pub fn uniform_t_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 / steps as f64).collect()
}

pub fn default_t_grid() -> Vec<f64> {
    uniform_t_grid(DEFAULT_T_STEPS)
}

/// A transport plan stored sparsely as `(source, target, mass)` triples over
/// point indices of one space, together with its marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    entries: Vec<(usize, usize, f64)>,
    source: Vec<f64>,
    target: Vec<f64>,
}

impl Coupling {
    pub fn new(entries: Vec<(usize, usize, f64)>, source: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        let c = Coupling { entries, source, target };
        c.validate()?;
        Ok(c)
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn source(&self) -> &[f64] {
        &self.source
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.target.len()]; self.source.len()];
        for &(i, j, m) in &self.entries {
            out[i][j] += m;
        }
        out
    }

    /// `Σ π(i,j) d(i,j)²`.
    pub fn cost(&self, s: &MetricMeasureSpace) -> f64 {
        self.entries.iter().map(|&(i, j, m)| m * s.d(i, j).powi(2)).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let (n0, n1) = (self.source.len(), self.target.len());
        let mut rows = vec![0.0; n0];
        let mut cols = vec![0.0; n1];
        for &(i, j, m) in &self.entries {
            if i >= n0 || j >= n1 || !(m >= 0.0) {
                return Err(Error::MarginalMismatch(format!("bad plan entry ({i}, {j}, {m})")));
            }
            rows[i] += m;
            cols[j] += m;
        }
        for (k, (a, b)) in rows.iter().zip(&self.source).enumerate() {
            if (a - b).abs() > MARGINAL_TOL {
                return Err(Error::MarginalMismatch(format!("row {k} sums to {a}, expected {b}")));
            }
        }
        for (k, (a, b)) in cols.iter().zip(&self.target).enumerate() {
            if (a - b).abs() > MARGINAL_TOL {
                return Err(Error::MarginalMismatch(format!("column {k} sums to {a}, expected {b}")));
            }
        }
        Ok(())
    }
}

fn check_probability(mu: &[f64], s: &MetricMeasureSpace, name: &str) -> Result<()> {
    if mu.len() != s.len() {
        return Err(Error::MarginalMismatch(format!("{name} has {} entries for {} points", mu.len(), s.len())));
    }
    if mu.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::MarginalMismatch(format!("{name} has negative or non-finite mass")));
    }
    let total: f64 = mu.iter().sum();
    if (total - 1.0).abs() > MARGINAL_TOL {
        return Err(Error::MarginalMismatch(format!("{name} has total mass {total}")));
    }
    Ok(())
}

/// Exact optimal coupling for the cost `d²` and the resulting `W2`.
pub fn optimal_coupling(s: &MetricMeasureSpace, mu0: &[f64], mu1: &[f64]) -> Result<(Coupling, f64)> {
    check_probability(mu0, s, "mu0")?;
    check_probability(mu1, s, "mu1")?;
    let src: Vec<usize> = (0..s.len()).filter(|&i| mu0[i] > 0.0).collect();
    let dst: Vec<usize> = (0..s.len()).filter(|&j| mu1[j] > 0.0).collect();
    let supply: Vec<f64> = src.iter().map(|&i| mu0[i]).collect();
    let total0: f64 = supply.iter().sum();
    let total1: f64 = dst.iter().map(|&j| mu1[j]).sum();
    // absorb the (≤ 1e-9) total mismatch so the problem is exactly balanced
    let demand: Vec<f64> = dst.iter().map(|&j| mu1[j] * total0 / total1).collect();
    let cost: Vec<f64> = src.iter().flat_map(|&i| dst.iter().map(move |&j| s.d(i, j).powi(2))).collect();
    let plan = simplex::solve(&supply, &demand, &cost);
    let entries = plan.flows.iter().map(|&(a, b, m)| (src[a], dst[b], m)).collect();
    let coupling = Coupling::new(entries, mu0.to_vec(), mu1.to_vec())?;
    Ok((coupling, plan.cost.max(0.0).sqrt()))
}

/// A discrete curve of probability measures, one weight vector per time.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation {
    pub times: Vec<f64>,
    pub measures: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct InterpolationOptions {
    /// Reject transported pairs whose chosen geodesic has a step longer than this.
    pub max_gap: Option<f64>,
}

fn validate_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidInput("time grid must be a nonempty subset of [0, 1]".into()));
    }
    Ok(())
}

/// Places each transported atom `π(i,j)` at the node of a discrete geodesic
/// from `i` to `j` whose arclength is nearest `t·d(i,j)`.
pub fn displacement_interpolation(
    s: &MetricMeasureSpace,
    coupling: &Coupling,
    t_grid: &[f64],
    opts: InterpolationOptions,
) -> Result<Interpolation> {
    validate_t_grid(t_grid)?;
    if coupling.source().len() != s.len() || coupling.target().len() != s.len() {
        return Err(Error::InvalidInput("coupling does not live on this space".into()));
    }
    let mut geodesics: HashMap<(usize, usize), DiscreteGeodesic> = HashMap::new();
    for &(i, j, _) in coupling.entries() {
        if i == j || geodesics.contains_key(&(i, j)) {
            continue;
        }
        let g = DiscreteGeodesic::between(s, i, j);
        if let Some(gap) = opts.max_gap {
            if g.max_step() > gap {
                return Err(Error::NoGeodesicFound(s.id(i).to_string(), s.id(j).to_string()));
            }
        }
        geodesics.insert((i, j), g);
    }
    let measures = t_grid
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return coupling.source().to_vec();
            }
            if t == 1.0 {
                return coupling.target().to_vec();
            }
            let mut mu = vec![0.0; s.len()];
            for &(i, j, m) in coupling.entries() {
                let at = if i == j { i } else { geodesics[&(i, j)].nearest_node(t * s.d(i, j)) };
                mu[at] += m;
            }
            mu
        })
        .collect();
    Ok(Interpolation { times: t_grid.to_vec(), measures })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CdVariant {
    /// `τ` coefficients: CD(K, N).
    Full,
    /// `σ` coefficients: CD*(K, N).
    Reduced,
}

impl std::str::FromStr for CdVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CdVariant::Full),
            "reduced" => Ok(CdVariant::Reduced),
            other => Err(Error::InvalidInput(format!("unknown CD variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CdOptions {
    /// `C` in the default tolerance `C·h^{1/2}`, `h` the mesh size of the space.
    pub tol_constant: f64,
    /// Overrides the default tolerance.
    pub tolerance: Option<f64>,
    pub interpolation: InterpolationOptions,
}

impl Default for CdOptions {
    fn default() -> Self {
        CdOptions { tol_constant: 1.0, tolerance: None, interpolation: InterpolationOptions::default() }
    }
}

/// Per-time data of a CD check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdSlice {
    pub t: f64,
    pub entropy: f64,
    #[serde(serialize_with = "ser_neg_ext")]
    pub rhs: f64,
}

fn ser_neg_ext<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("-inf")
    }
}

/// Full output of [`check_cd_detailed`].
#[derive(Debug, Clone)]
pub struct CdOutcome {
    pub report: CheckReport,
    pub coupling: Coupling,
    pub w2: f64,
    pub interpolation: Interpolation,
    pub slices: Vec<CdSlice>,
}

/// `-Σ π(x,y) [c^{(1-t)}(θ) ρ0(x)^{-1/N} + c^{(t)}(θ) ρ1(y)^{-1/N}]` with
/// `θ = d(x,y)` and `c = τ_{K,N}` or `σ_{K,N}`. Returns `-∞` when a coefficient
/// is infinite on a charged pair.
pub fn cd_rhs(s: &MetricMeasureSpace, cd: CurvatureDimension, variant: CdVariant, coupling: &Coupling, t: f64) -> f64 {
    let coef = |tt: f64, theta: f64| match variant {
        CdVariant::Full => tau_coeff(cd.k, cd.n, tt, theta),
        CdVariant::Reduced => sigma_coeff(cd.k, cd.n, tt, theta),
    };
    let m = s.weights();
    let (mu0, mu1) = (coupling.source(), coupling.target());
    let mut acc = ExtendedReal::ZERO;
    for &(x, y, mass) in coupling.entries() {
        let theta = s.d(x, y);
        let r0 = (mu0[x] / m[x]).powf(-1.0 / cd.n);
        let r1 = (mu1[y] / m[y]).powf(-1.0 / cd.n);
        let term = (coef(1.0 - t, theta).scale(r0) + coef(t, theta).scale(r1)).scale(mass);
        acc = acc + term;
        if acc.is_infinite() {
            return f64::NEG_INFINITY;
        }
    }
    -acc.to_f64()
}

fn check_absolute_continuity(s: &MetricMeasureSpace, mu: &[f64]) -> Result<()> {
    for (i, (&m, &w)) in mu.iter().zip(s.weights()).enumerate() {
        if m > 0.0 && w <= 0.0 {
            return Err(Error::AbsoluteContinuityViolation(s.id(i).to_string()));
        }
    }
    Ok(())
}

/// Verifies the CD (or CD*) entropy inequality along the constructed
/// interpolation at each time of `t_grid`.
pub fn check_cd_detailed(
    s: &MetricMeasureSpace,
    cd: CurvatureDimension,
    mu0: &[f64],
    mu1: &[f64],
    t_grid: &[f64],
    variant: CdVariant,
    opts: CdOptions,
) -> Result<CdOutcome> {
    let start = Instant::now();
    check_probability(mu0, s, "mu0")?;
    check_probability(mu1, s, "mu1")?;
    check_absolute_continuity(s, mu0)?;
    check_absolute_continuity(s, mu1)?;
    let (coupling, w2) = optimal_coupling(s, mu0, mu1)?;
    let interpolation = displacement_interpolation(s, &coupling, t_grid, opts.interpolation)?;
    let tolerance = opts.tolerance.unwrap_or_else(|| opts.tol_constant * s.mesh_size().sqrt());
    let mut worst = Worst::new();
    let mut slices = Vec::with_capacity(t_grid.len());
    for (&t, mu_t) in interpolation.times.iter().zip(&interpolation.measures) {
        let entropy = renyi_entropy(mu_t, s, cd.n)?;
        let rhs = cd_rhs(s, cd, variant, &coupling, t);
        let margin = rhs - entropy;
        worst.offer(margin, || json!({"t": t, "entropy": entropy, "rhs": if rhs.is_finite() { json!(rhs) } else { json!("-inf") }}));
        slices.push(CdSlice { t, entropy, rhs });
    }
    let name = match variant {
        CdVariant::Full => "cd",
        CdVariant::Reduced => "cd_reduced",
    };
    let mut report = worst.into_report(name, tolerance).timed(start);
    if !report.pass {
        report.notes.push("no certificate found via this interpolation".into());
    }
    Ok(CdOutcome { report, coupling, w2, interpolation, slices })
}

pub fn check_cd(
    s: &MetricMeasureSpace,
    cd: CurvatureDimension,
    mu0: &[f64],
    mu1: &[f64],
    t_grid: &[f64],
    variant: CdVariant,
    opts: CdOptions,
) -> Result<CheckReport> {
    check_cd_detailed(s, cd, mu0, mu1, t_grid, variant, opts).map(|o| o.report)
}

/// `t^N ≥ τ_{N,N+1}^{(t)}(θ)^{N+1}` for every `t` in the grid.
pub fn mcp_scalar_test(n: f64, theta: f64, t_grid: &[f64]) -> CheckReport {
    let mut worst = Worst::new();
    for &t in t_grid {
        let lhs = t.powf(n);
        let rhs = tau_coeff(n, n + 1.0, t, theta).powf(n + 1.0);
        let margin = match rhs {
            ExtendedReal::Finite(r) => lhs - r,
            ExtendedReal::Infinity => f64::NEG_INFINITY,
        };
        worst.offer(margin, || json!({"t": t, "theta": theta, "lhs": lhs, "rhs": rhs.to_string()}));
    }
    worst.into_report("mcp_scalar", MCP_TOL)
}

/// Supremum of `θ ∈ [0, π]` passing [`mcp_scalar_test`] on `t_grid`, by
/// bisection to within `precision`. The returned value itself passes.
pub fn mcp_threshold_on(n: f64, precision: f64, t_grid: &[f64]) -> Result<f64> {
    if !(precision > 0.0) {
        return Err(Error::InvalidInput(format!("precision must be positive, got {precision}")));
    }
    validate_t_grid(t_grid)?;
    let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
    if mcp_scalar_test(n, hi, t_grid).pass {
        return Ok(hi);
    }
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if mcp_scalar_test(n, mid, t_grid).pass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// [`mcp_threshold_on`] with the dense grid of [`DENSE_T_STEPS`] intervals.
pub fn mcp_threshold(n: f64, precision: f64) -> Result<f64> {
    mcp_threshold_on(n, precision, &uniform_t_grid(DENSE_T_STEPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{line_points, segment};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dirac(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn dirac_to_dirac() {
        let s = segment(6, 1.0);
        let (c, w2) = optimal_coupling(&s, &dirac(6, 1), &dirac(6, 4)).unwrap();
        assert_eq!(c.entries(), &[(1, 4, 1.0)]);
        assert!((w2 - s.d(1, 4)).abs() < 1e-15);
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let s = segment(5, 1.0);
        let mu = vec![0.1, 0.2, 0.3, 0.25, 0.15];
        let (c, w2) = optimal_coupling(&s, &mu, &mu).unwrap();
        assert_eq!(w2, 0.0);
        assert!(c.entries().iter().all(|&(i, j, _)| i == j));
    }

    #[test]
    fn marginal_mismatch() {
        let s = segment(3, 1.0);
        assert!(matches!(optimal_coupling(&s, &[0.5, 0.5, 0.1], &dirac(3, 0)), Err(Error::MarginalMismatch(_))));
        assert!(matches!(optimal_coupling(&s, &[0.5, 0.5], &dirac(3, 0)), Err(Error::MarginalMismatch(_))));
    }

    #[test]
    fn interpolation_examples() {
        let s = segment(5, 1.0);
        let (c, _) = optimal_coupling(&s, &dirac(5, 0), &dirac(5, 4)).unwrap();
        let it = displacement_interpolation(&s, &c, &[0.0, 0.5, 1.0], Default::default()).unwrap();
        assert_eq!(it.measures[1], dirac(5, 2));

        let fine = segment(81, 1.0);
        let mut mu0 = vec![0.0; 81];
        mu0[0] = 0.5;
        mu0[20] = 0.5;
        let mu1 = dirac(81, 80);
        let (c, _) = optimal_coupling(&fine, &mu0, &mu1).unwrap();
        let it = displacement_interpolation(&fine, &c, &[0.0, 0.5, 1.0], Default::default()).unwrap();
        // 0 -> 1 passes 0.5 (node 40); 0.25 -> 1 passes 0.625 (node 50)
        assert_eq!(it.measures[1][40], 0.5);
        assert_eq!(it.measures[1][50], 0.5);
        assert_eq!(it.measures[0], mu0);
        assert_eq!(it.measures[2], mu1);
    }

    #[test]
    fn coarse_geodesics_rejected_on_request() {
        let s = line_points(&[0.0, 1.0], vec![1.0, 1.0]);
        let (c, _) = optimal_coupling(&s, &dirac(2, 0), &dirac(2, 1)).unwrap();
        let opts = InterpolationOptions { max_gap: Some(0.5) };
        assert!(matches!(displacement_interpolation(&s, &c, &[0.5], opts), Err(Error::NoGeodesicFound(..))));
    }

    #[test]
    fn cd_equal_measures_has_zero_margin() {
        let s = segment(20, 1.0);
        let mu: Vec<f64> = (0..20).map(|i| (1.0 + i as f64) / 210.0).collect();
        let cd = CurvatureDimension::new(3.0, 4.0).unwrap();
        for variant in [CdVariant::Full, CdVariant::Reduced] {
            let r = check_cd(&s, cd, &mu, &mu, &default_t_grid(), variant, Default::default()).unwrap();
            assert!(r.pass);
            assert!(r.worst_margin.abs() < 1e-12, "{}", r.worst_margin);
        }
    }

    #[test]
    fn cd_rejects_mass_on_null_points() {
        let s = segment(4, 1.0).reweighted(vec![1.0, 0.0, 1.0, 1.0]);
        let cd = CurvatureDimension::new(0.0, 2.0).unwrap();
        let r = check_cd(&s, cd, &dirac(4, 1), &dirac(4, 3), &default_t_grid(), CdVariant::Full, Default::default());
        assert!(matches!(r, Err(Error::AbsoluteContinuityViolation(_))));
    }

    #[test]
    fn mcp_examples() {
        let grid = default_t_grid();
        for n in [1.0, 2.0, 4.0, 7.5] {
            let r = mcp_scalar_test(n, 0.0, &grid);
            assert!(r.pass);
        }
        assert!(mcp_scalar_test(4.0, 0.4, &uniform_t_grid(2048)).pass);
        assert!(!mcp_scalar_test(4.0, 3.1, &grid).pass);
    }

    #[test]
    fn mcp_threshold_brackets() {
        let thr = mcp_threshold(4.0, 1e-10).unwrap();
        assert!(thr > 0.0 && thr < std::f64::consts::PI);
        let dense = uniform_t_grid(DENSE_T_STEPS);
        assert!(mcp_scalar_test(4.0, 0.9 * thr, &dense).pass);
        assert!(!mcp_scalar_test(4.0, 1.1 * thr, &dense).pass);
        // the binding constraint is t -> 1, where θ cot θ = (N-1)/N
        assert!((thr / thr.tan() - 0.75).abs() < 1e-3);
    }

    #[test]
    fn mcp_threshold_never_grows_under_refinement() {
        for n in [2.0, 3.0, 4.0, 6.0] {
            let mut prev = f64::INFINITY;
            for steps in [4, 8, 16, 32, 64, 128] {
                let thr = mcp_threshold_on(n, 1e-12, &uniform_t_grid(steps)).unwrap();
                assert!(thr <= prev + 1e-12, "n={n} steps={steps}");
                prev = thr;
            }
        }
    }

    /// Brute force over basic feasible solutions: every choice of `m + n - 1`
    /// cells that forms a spanning tree determines a unique plan.
    fn brute_force_cost(supply: &[f64], demand: &[f64], cost: &[f64]) -> f64 {
        let (m, n) = (supply.len(), demand.len());
        let cells = m * n;
        let need = m + n - 1;
        let mut best = f64::INFINITY;
        for mask in 0u32..(1u32 << cells) {
            if mask.count_ones() as usize != need {
                continue;
            }
            let chosen: Vec<(usize, usize)> = (0..cells).filter(|c| mask >> c & 1 == 1).map(|c| (c / n, c % n)).collect();
            // peel leaves to solve for the flows
            let mut ra = supply.to_vec();
            let mut rb = demand.to_vec();
            let mut alive = vec![true; chosen.len()];
            let mut flows = vec![0.0; chosen.len()];
            let mut ok = true;
            for _ in 0..chosen.len() {
                let mut progressed = false;
                for e in 0..chosen.len() {
                    if !alive[e] {
                        continue;
                    }
                    let (i, j) = chosen[e];
                    let row_deg = (0..chosen.len()).filter(|&f| alive[f] && chosen[f].0 == i).count();
                    let col_deg = (0..chosen.len()).filter(|&f| alive[f] && chosen[f].1 == j).count();
                    if row_deg == 1 || col_deg == 1 {
                        let x = if row_deg == 1 { ra[i] } else { rb[j] };
                        flows[e] = x;
                        ra[i] -= x;
                        rb[j] -= x;
                        alive[e] = false;
                        progressed = true;
                        break;
                    }
                }
                if !progressed {
                    ok = false;
                    break;
                }
            }
            if !ok || ra.iter().chain(&rb).any(|r| r.abs() > 1e-12) || flows.iter().any(|&f| f < -1e-12) {
                continue;
            }
            let c: f64 = chosen.iter().zip(&flows).map(|(&(i, j), f)| f * cost[i * n + j]).sum();
            best = best.min(c);
        }
        best
    }

    #[test]
    fn coupling_matches_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = 6;
            let pos: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let mut sorted = pos.clone();
            sorted.sort_by(f64::total_cmp);
            let s = line_points(&sorted, vec![1.0; n]);
            let mut mu0 = vec![0.0; n];
            let mut mu1 = vec![0.0; n];
            for i in 0..3 {
                mu0[i] = rng.gen_range(0.1..1.0);
                mu1[n - 1 - i] = rng.gen_range(0.1..1.0);
            }
            let (a, b): (f64, f64) = (mu0.iter().sum(), mu1.iter().sum());
            mu0.iter_mut().for_each(|v| *v /= a);
            mu1.iter_mut().for_each(|v| *v /= b);
            let (c, w2) = optimal_coupling(&s, &mu0, &mu1).unwrap();
            let supply: Vec<f64> = mu0.iter().copied().filter(|&v| v > 0.0).collect();
            let demand: Vec<f64> = mu1.iter().copied().filter(|&v| v > 0.0).collect();
            let cost: Vec<f64> = (0..3).flat_map(|i| (0..3).map(move |j| (i, n - 3 + j))).map(|(i, j)| s.d(i, j).powi(2)).collect();
            let brute = brute_force_cost(&supply, &demand, &cost);
            assert!((w2 * w2 - brute).abs() < 1e-9, "{} vs {}", w2 * w2, brute);
            assert!((c.cost(&s) - brute).abs() < 1e-9);
        }
    }
}
