// Randomized invariants of transport and localisation.

use glued_cd::generators::{circle, segment, tripod};
use glued_cd::needles::{extract_chains, GuideFunction};
use glued_cd::space::renyi_entropy;
use glued_cd::transport::{check_cd, check_cd_detailed, default_t_grid, optimal_coupling, CdOptions, CdVariant};
use glued_cd::{CurvatureDimension, MetricMeasureSpace};
use proptest::prelude::*;

fn plane(points: &[(f64, f64)]) -> MetricMeasureSpace {
    let n = points.len();
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    let dist = points
        .iter()
        .map(|a| points.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect();
    MetricMeasureSpace::new(ids, dist, vec![1.0 / n as f64; n]).unwrap()
}

fn normalize(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

fn measure(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, len).prop_map(|v| normalize(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w2_triangle_inequality(
        pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 7),
        a in measure(7), b in measure(7), c in measure(7),
    ) {
        let s = plane(&pts);
        let w = |x: &[f64], y: &[f64]| optimal_coupling(&s, x, y).unwrap().1;
        prop_assert!(w(&a, &c) <= w(&a, &b) + w(&b, &c) + 1e-7);
    }

    #[test]
    fn full_cd_implies_reduced(mu0 in measure(30), mu1 in measure(30), k in -2.0f64..5.0, n in 2.0f64..8.0) {
        let s = segment(30, 1.0);
        let cd = CurvatureDimension::new(k, n).unwrap();
        let grid = default_t_grid();
        let full = check_cd_detailed(&s, cd, &mu0, &mu1, &grid, CdVariant::Full, CdOptions::default()).unwrap();
        let reduced = check_cd_detailed(&s, cd, &mu0, &mu1, &grid, CdVariant::Reduced, CdOptions::default()).unwrap();
        for (f, r) in full.slices.iter().zip(&reduced.slices) {
            prop_assert!(r.rhs >= f.rhs - 1e-12);
        }
        if full.report.pass {
            prop_assert!(reduced.report.pass);
        }
    }

    #[test]
    fn interpolation_is_an_approximate_geodesic(mu0 in measure(40), mu1 in measure(40)) {
        let s = segment(40, 1.0);
        let h = s.mesh_size();
        let o = check_cd_detailed(&s, CurvatureDimension::new(0.0, 3.0).unwrap(), &mu0, &mu1, &default_t_grid(), CdVariant::Full, CdOptions::default()).unwrap();
        for (&t, mu_t) in o.interpolation.times.iter().zip(&o.interpolation.measures) {
            let w = optimal_coupling(&s, &mu0, mu_t).unwrap().1;
            prop_assert!(w <= t * o.w2 + h, "t = {t}: {w} > {} + {h}", t * o.w2);
        }
    }

    #[test]
    fn entropy_convex_on_flat_instances(mu0 in measure(40), mu1 in measure(40), n in 1.5f64..8.0) {
        let s = segment(40, 1.0);
        let cd = CurvatureDimension::new(0.0, n).unwrap();
        let o = check_cd_detailed(&s, cd, &mu0, &mu1, &default_t_grid(), CdVariant::Full, CdOptions::default()).unwrap();
        prop_assume!(o.report.pass);
        let (s0, s1) = (renyi_entropy(&mu0, &s, n).unwrap(), renyi_entropy(&mu1, &s, n).unwrap());
        for slice in &o.slices {
            prop_assert!(slice.entropy <= (1.0 - slice.t) * s0 + slice.t * s1 + o.report.tolerance);
        }
    }

    #[test]
    fn chains_descend_at_unit_speed(kind in 0usize..3, size in 3usize..12, anchor_seed in 0usize..1000) {
        let s = match kind {
            0 => segment(size, 1.0),
            1 => tripod(size, 1.0),
            _ => circle(size, 2.0),
        };
        let u = GuideFunction::distance_to(&s, anchor_seed % s.len());
        let set = extract_chains(&s, &u);
        for chain in &set.chains {
            for w in chain.windows(2) {
                let step = u.values()[w[0]] - u.values()[w[1]];
                prop_assert!(step > 0.0);
                prop_assert!((step - s.d(w[0], w[1])).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn identical_runs_give_identical_reports() {
    let s = segment(25, 1.0);
    let mu0 = normalize(&(0..25).map(|i| 1.0 + (i as f64).sin().abs()).collect::<Vec<_>>());
    let mu1 = normalize(&(0..25).map(|i| 1.0 + (i as f64 * 0.3).cos().abs()).collect::<Vec<_>>());
    let cd = CurvatureDimension::new(1.0, 4.0).unwrap();
    let run = || check_cd(&s, cd, &mu0, &mu1, &default_t_grid(), CdVariant::Full, CdOptions::default()).unwrap().to_json();
    assert_eq!(run(), run());
}
