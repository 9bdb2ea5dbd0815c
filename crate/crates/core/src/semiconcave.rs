//! λ-concavity along discrete geodesics, one-sided slopes, and the gluing
//! conditions for semiconcave functions.
//!
//! A function on a space with boundary is semiconcave on the double exactly
//! when it is λ-concave on the space and its slope into the space is
//! nonpositive at the boundary. [`check_double_semiconcave`] evaluates both
//! sides of that equivalence: the characterization on `X` and a direct check
//! on the double along seam-crossing geodesics.

use crate::error::{Error, Result};
use crate::gluing::{double_space, glue_function, GluedSpace, Side};
use crate::needles::ls_slope;
use crate::report::{CheckReport, Worst};
use crate::space::{second_difference, DiscreteGeodesic, MetricMeasureSpace};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::time::Instant;

/// `C` in the λ-concavity tolerance `C·h³`.
pub const CONCAVITY_C: f64 = 1.0;
/// Number of leading chain nodes used for a one-sided slope.
pub const SLOPE_SAMPLES: usize = 3;

/// Per-point values with their Lipschitz constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
    lipschitz: f64,
}

impl ScalarField {
    pub fn new(s: &MetricMeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != s.len() {
            return Err(Error::InvalidInput(format!("field has {} values for {} points", values.len(), s.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("field has non-finite values".into()));
        }
        let mut lipschitz: f64 = 0.0;
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let d = s.d(i, j);
                if d > 0.0 {
                    lipschitz = lipschitz.max((values[i] - values[j]).abs() / d);
                }
            }
        }
        Ok(ScalarField { values, lipschitz })
    }

    pub fn from_fn(s: &MetricMeasureSpace, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new(s, (0..s.len()).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

/// Second differences along each geodesic are at most `λ` up to `C·h` in
/// derivative units; margins are reported as `(λ - f'')·h_k²` against `C·h³`.
pub fn check_lambda_concave(values: &[f64], geodesics: &[DiscreteGeodesic], lambda: f64) -> CheckReport {
    let start = Instant::now();
    let h = geodesics.iter().map(DiscreteGeodesic::max_step).fold(0.0, f64::max);
    let mut worst = Worst::new();
    for (gi, g) in geodesics.iter().enumerate() {
        let (nodes, r) = (g.nodes(), g.arclength());
        for k in 1..nodes.len().saturating_sub(1) {
            let rr = [r[k - 1], r[k], r[k + 1]];
            let d2 = second_difference(rr, [values[nodes[k - 1]], values[nodes[k]], values[nodes[k + 1]]]);
            let hk = 0.5 * (rr[2] - rr[0]);
            worst.offer((lambda - d2) * hk * hk, || json!({"geodesic": gi, "node": nodes[k], "arclength": rr[1], "d2": d2}));
        }
    }
    worst.into_report("lambda_concave", CONCAVITY_C * h.powi(3)).timed(start)
}

/// Forward slope of a function at the first node of a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionalSlope {
    pub base: usize,
    pub slope: f64,
    pub samples: usize,
}

/// Least-squares slope over the first [`SLOPE_SAMPLES`] nodes of the chain.
pub fn directional_slope(values: &[f64], chain: &DiscreteGeodesic) -> Result<DirectionalSlope> {
    if chain.len() < SLOPE_SAMPLES {
        return Err(Error::ChainTooShort(chain.len()));
    }
    let r = &chain.arclength()[..SLOPE_SAMPLES];
    let f: Vec<f64> = chain.nodes()[..SLOPE_SAMPLES].iter().map(|&i| values[i]).collect();
    Ok(DirectionalSlope { base: chain.nodes()[0], slope: ls_slope(r, &f), samples: SLOPE_SAMPLES })
}

/// `h·max|f''|` over the leading nodes of the chains: the bias of a linear fit.
fn slope_tolerance(values: &[f64], chains: &[&DiscreteGeodesic]) -> f64 {
    let mut tol: f64 = 0.0;
    for c in chains {
        let n = c.len().min(SLOPE_SAMPLES);
        let (nodes, r) = (c.nodes(), c.arclength());
        for k in 1..n.saturating_sub(1) {
            let d2 = second_difference([r[k - 1], r[k], r[k + 1]], [values[nodes[k - 1]], values[nodes[k]], values[nodes[k + 1]]]);
            tol = tol.max(c.max_step() * d2.abs());
        }
    }
    tol + 1e-12
}

/// A seam point of a glued space with one chain into each side, given as
/// quotient indices starting at the seam point.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalPair {
    pub seam: usize,
    pub into0: Vec<usize>,
    pub into1: Vec<usize>,
}

fn normal_chain(glued: &GluedSpace, seam: usize, nodes: &[usize], side: Side) -> Result<DiscreteGeodesic> {
    let q = glued.space();
    if nodes.first() != Some(&seam) {
        return Err(Error::InvalidInput(format!("normal chain must start at seam point `{}`", q.id(seam))));
    }
    if let Some(&bad) = nodes[1..].iter().find(|&&x| x >= q.len() || !glued.lies_on(x, side) || glued.preimage(x).is_seam()) {
        let node = if bad < q.len() { q.id(bad).to_string() } else { bad.to_string() };
        return Err(Error::ChainLeavesWrongSide { seam: q.id(seam).to_string(), node });
    }
    DiscreteGeodesic::new(q, nodes.to_vec())
}

/// `dΦ0(v0) + dΦ1(v1) ≤ 0` at each declared seam point.
pub fn check_normal_condition(phi0: &[f64], phi1: &[f64], glued: &GluedSpace, normals: &[NormalPair]) -> Result<CheckReport> {
    let start = Instant::now();
    let phi = glue_function(phi0, phi1, glued)?;
    let mut chains = Vec::with_capacity(2 * normals.len());
    for p in normals {
        chains.push((p.seam, normal_chain(glued, p.seam, &p.into0, Side::Zero)?, normal_chain(glued, p.seam, &p.into1, Side::One)?));
    }
    let all: Vec<&DiscreteGeodesic> = chains.iter().flat_map(|(_, a, b)| [a, b]).collect();
    let tol = slope_tolerance(&phi, &all);
    let mut worst = Worst::new();
    for (seam, c0, c1) in &chains {
        let s0 = directional_slope(&phi, c0)?.slope;
        let s1 = directional_slope(&phi, c1)?.slope;
        worst.offer(-(s0 + s1), || json!({"seam": glued.space().id(*seam), "slope0": s0, "slope1": s1}));
    }
    Ok(worst.into_report("normal_condition", tol).timed(start))
}

/// `dΦ(v) ≤ 0` along chains leaving the boundary into the space.
pub fn check_boundary_sign(s: &MetricMeasureSpace, values: &[f64], normals: &[DiscreteGeodesic]) -> Result<CheckReport> {
    let start = Instant::now();
    for c in normals {
        if !s.is_boundary(c.nodes()[0]) {
            return Err(Error::InvalidInput(format!("normal chain starts at interior point `{}`", s.id(c.nodes()[0]))));
        }
    }
    let tol = slope_tolerance(values, &normals.iter().collect::<Vec<_>>());
    let mut worst = Worst::new();
    for c in normals {
        let d = directional_slope(values, c)?;
        worst.offer(-d.slope, || json!({"base": s.id(d.base), "slope": d.slope}));
    }
    Ok(worst.into_report("boundary_sign", tol).timed(start))
}

#[derive(Debug, Clone, Copy)]
pub struct DoubleOptions {
    /// Cap on seam-crossing geodesics; beyond it endpoint pairs are sampled.
    pub max_crossings: usize,
    pub seed: u64,
}

impl Default for DoubleOptions {
    fn default() -> Self {
        DoubleOptions { max_crossings: 400, seed: 0 }
    }
}

/// Seam-crossing geodesics of a double: shortest chains between non-seam
/// points on opposite sides, all pairs or a seeded sample of them.
pub fn crossing_geodesics(glued: &GluedSpace, max: usize, seed: u64) -> Vec<DiscreteGeodesic> {
    let q = glued.space();
    let side = |s: Side| -> Vec<usize> { (0..q.len()).filter(|&x| glued.lies_on(x, s) && !glued.preimage(x).is_seam()).collect() };
    let (a, b) = (side(Side::Zero), side(Side::One));
    let mut pairs: Vec<(usize, usize)> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
    if pairs.len() > max {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(max);
        pairs.sort_unstable();
    }
    pairs.into_iter().map(|(x, y)| DiscreteGeodesic::between(q, x, y)).collect()
}

/// Both routes of the double-semiconcavity test.
#[derive(Debug, Clone)]
pub struct DoubleOutcome {
    pub characterization: CheckReport,
    pub direct: CheckReport,
    pub agree: bool,
    /// Disagreement confined to a boundary slope within discretization range of zero.
    pub borderline: bool,
    pub report: CheckReport,
}

/// Tests semiconcavity of `Φ∘P` on the double of `x` two ways:
/// λ-concavity on `x` plus the boundary sign condition, and λ-concavity of
/// `Φ∘P` along the given geodesics (on either copy) and along seam-crossing
/// geodesics of the double.
pub fn check_double_semiconcave(
    x: &MetricMeasureSpace,
    phi: &ScalarField,
    lambda: f64,
    geodesics: &[DiscreteGeodesic],
    normals: &[DiscreteGeodesic],
    opts: DoubleOptions,
) -> Result<DoubleOutcome> {
    let start = Instant::now();
    let values = phi.values();
    let concave = check_lambda_concave(values, geodesics, lambda);
    let sign = check_boundary_sign(x, values, normals)?;
    let characterization = CheckReport::bundle("characterization", vec![concave, sign.clone()]);

    let double = double_space(x)?;
    let phi_hat = glue_function(values, values, &double)?;
    let mut lifted = Vec::with_capacity(2 * geodesics.len());
    for side in [Side::Zero, Side::One] {
        for g in geodesics {
            let nodes = g.nodes().iter().map(|&i| double.quotient_of(side, i)).collect();
            lifted.push(DiscreteGeodesic::new(double.space(), nodes)?);
        }
    }
    lifted.extend(crossing_geodesics(&double, opts.max_crossings, opts.seed));
    let mut direct = check_lambda_concave(&phi_hat, &lifted, lambda);
    direct.check = "double_direct".into();

    let agree = characterization.pass == direct.pass;
    // the direct route tolerates seam slopes up to about h·λ/2, and the fitted
    // slope carries a bias of h·|f''|, so slopes this close to zero are unresolved
    let h = normals.iter().map(DiscreteGeodesic::max_step).fold(0.0, f64::max);
    let band = h * lambda.abs() + 2.0 * sign.tolerance;
    let borderline = !agree && sign.worst_margin.abs() <= band;
    let agreement = if agree || borderline {
        CheckReport::from_margin("route_agreement", 0.0, 0.0, json!({"borderline": borderline}))
    } else {
        CheckReport::from_margin("route_agreement", f64::NEG_INFINITY, 0.0, json!({"characterization": characterization.pass, "direct": direct.pass}))
    };
    let report = CheckReport::bundle("double_semiconcave", vec![characterization.clone(), direct.clone(), agreement]).timed(start);
    Ok(DoubleOutcome { characterization, direct, agree, borderline, report })
}

/// One-sided slopes at interior seam crossings of each geodesic:
/// `d⁻(Φ_Z∘γ) ≥ d⁺(Φ_Z∘γ)` at every seam node.
pub fn check_seam_kinks(glued: &GluedSpace, phi_z: &[f64], geodesics: &[DiscreteGeodesic]) -> CheckReport {
    let start = Instant::now();
    let mut worst = Worst::new();
    let mut tol: f64 = 0.0;
    for (gi, g) in geodesics.iter().enumerate() {
        let (nodes, r) = (g.nodes(), g.arclength());
        let f: Vec<f64> = nodes.iter().map(|&i| phi_z[i]).collect();
        let m = nodes.len();
        for k in 1..m.saturating_sub(1) {
            let seam = glued.preimage(nodes[k]).is_seam();
            if !seam {
                let d2 = second_difference([r[k - 1], r[k], r[k + 1]], [f[k - 1], f[k], f[k + 1]]);
                tol = tol.max(2.0 * g.max_step() * d2.abs());
                continue;
            }
            if k + 1 < SLOPE_SAMPLES || k + SLOPE_SAMPLES > m {
                continue;
            }
            let lo = k + 1 - SLOPE_SAMPLES;
            let d_minus = ls_slope(&r[lo..=k], &f[lo..=k]);
            let d_plus = ls_slope(&r[k..k + SLOPE_SAMPLES], &f[k..k + SLOPE_SAMPLES]);
            worst.offer(d_minus - d_plus, || {
                json!({"geodesic": gi, "seam": glued.space().id(nodes[k]), "d_minus": d_minus, "d_plus": d_plus})
            });
        }
    }
    worst.into_report("seam_kinks", tol + 1e-12).timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{segment, segment_normals};
    use crate::gluing::glue_spaces;
    use crate::gluing::BoundaryIsometry;
    use proptest::prelude::*;

    fn whole(s: &MetricMeasureSpace) -> Vec<DiscreteGeodesic> {
        vec![DiscreteGeodesic::new(s, (0..s.len()).collect()).unwrap()]
    }

    fn pos(s: &MetricMeasureSpace, i: usize) -> f64 {
        s.d(0, i)
    }

    #[test]
    fn lambda_concave_examples() {
        let s = segment(21, 1.0);
        let g = whole(&s);
        let c = vec![3.0; 21];
        assert!(check_lambda_concave(&c, &g, 0.0).pass);
        let sq: Vec<f64> = (0..21).map(|i| pos(&s, i).powi(2)).collect();
        let r = check_lambda_concave(&sq, &g, 2.0);
        assert!(r.pass && r.worst_margin.abs() < 1e-12);
        assert!(!check_lambda_concave(&sq, &g, 1.9).pass);
        let shifted: Vec<f64> = (0..21).map(|i| pos(&s, i).powi(2) - pos(&s, i)).collect();
        assert!(check_lambda_concave(&shifted, &g, 2.0).pass);
    }

    #[test]
    fn slope_examples() {
        let s = segment(21, 1.0);
        let g = whole(&s);
        let lin: Vec<f64> = (0..21).map(|i| pos(&s, i)).collect();
        assert!((directional_slope(&lin, &g[0]).unwrap().slope - 1.0).abs() < 1e-12);
        let sq: Vec<f64> = lin.iter().map(|x| x * x).collect();
        let d = directional_slope(&sq, &g[0]).unwrap();
        assert!(d.slope.abs() <= 2.0 * 0.05 + 1e-12);
        let short = DiscreteGeodesic::new(&s, vec![0, 1]).unwrap();
        assert!(matches!(directional_slope(&lin, &short), Err(Error::ChainTooShort(2))));
    }

    fn glued_at_zero(n: usize) -> GluedSpace {
        let s = segment(n, 1.0).with_boundary_indices(vec![0]);
        let iso = BoundaryIsometry::identity(&s);
        glue_spaces(&s, &s, &iso, 1.0).unwrap()
    }

    fn normal_at_zero(g: &GluedSpace) -> NormalPair {
        NormalPair {
            seam: g.quotient_of(Side::Zero, 0),
            into0: (0..5).map(|i| g.quotient_of(Side::Zero, i)).collect(),
            into1: (0..5).map(|i| g.quotient_of(Side::One, i)).collect(),
        }
    }

    #[test]
    fn normal_condition_examples() {
        let n = 41;
        let g = glued_at_zero(n);
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let pair = normal_at_zero(&g);

        let c = vec![1.0; n];
        assert!(check_normal_condition(&c, &c, &g, std::slice::from_ref(&pair)).unwrap().pass);

        let q: Vec<f64> = x.iter().map(|x| x * x - x).collect();
        let r = check_normal_condition(&q, &q, &g, std::slice::from_ref(&pair)).unwrap();
        assert!(r.pass);
        let s0 = r.witness["slope0"].as_f64().unwrap();
        assert!((s0 + 1.0).abs() < 0.06);

        let r = check_normal_condition(&x, &x, &g, std::slice::from_ref(&pair)).unwrap();
        assert!(!r.pass);
        assert!((r.worst_margin + 2.0).abs() < 1e-12);
    }

    #[test]
    fn normal_chain_must_stay_on_its_side() {
        let g = glued_at_zero(11);
        let mut pair = normal_at_zero(&g);
        pair.into0 = (0..3).map(|i| g.quotient_of(Side::One, i)).collect();
        let c = vec![0.0; 11];
        assert!(matches!(check_normal_condition(&c, &c, &g, &[pair]), Err(Error::ChainLeavesWrongSide { .. })));
    }

    fn run_double(f: impl Fn(f64) -> f64, lambda: f64) -> DoubleOutcome {
        let s = segment(41, 1.0);
        let phi = ScalarField::from_fn(&s, |i| f(s.d(0, i))).unwrap();
        check_double_semiconcave(&s, &phi, lambda, &whole(&s), &segment_normals(&s, 5), Default::default()).unwrap()
    }

    #[test]
    fn double_examples() {
        let o = run_double(|x| x * x - x, 2.0);
        assert!(o.characterization.pass && o.direct.pass && o.report.pass);

        let o = run_double(|x| x, 0.0);
        assert!(!o.characterization.pass && !o.direct.pass);
        assert!(o.agree && !o.report.pass);

        let o = run_double(|_| 0.7, 0.0);
        assert!(o.report.pass);
    }

    #[test]
    fn seam_kinks_on_the_double() {
        let s = segment(41, 1.0);
        let d = double_space(&s).unwrap();
        let v: Vec<f64> = (0..41).map(|i| s.d(0, i).powi(2) - s.d(0, i)).collect();
        let phi = glue_function(&v, &v, &d).unwrap();
        let geos = crossing_geodesics(&d, 200, 1);
        let r = check_seam_kinks(&d, &phi, &geos);
        assert!(r.pass);
        assert!((r.worst_margin - (2.0 - 4.0 * 0.025)).abs() < 0.2, "{}", r.worst_margin);

        let v: Vec<f64> = (0..41).map(|i| s.d(0, i)).collect();
        let phi = glue_function(&v, &v, &d).unwrap();
        assert!(!check_seam_kinks(&d, &phi, &geos).pass);
    }

    proptest! {
        #[test]
        fn slope_bounded_by_lipschitz(vals in proptest::collection::vec(-3.0f64..3.0, 12)) {
            let s = segment(12, 1.0);
            let f = ScalarField::new(&s, vals).unwrap();
            let g = whole(&s);
            let d = directional_slope(f.values(), &g[0]).unwrap();
            prop_assert!(d.slope.abs() <= f.lipschitz() + 1e-9);
            let d = directional_slope(f.values(), &g[0].reversed()).unwrap();
            prop_assert!(d.slope.abs() <= f.lipschitz() + 1e-9);
        }
    }
}
