//! Small discretized spaces used by scenarios, examples and tests.

use crate::space::{metric_from_graph, DiscreteGeodesic, MetricMeasureSpace};
use std::f64::consts::PI;

/// `n` equally spaced points on `[0, length]`, ids `s0..`, boundary at both
/// ends, uniform probability weights. Distances are `|i - j|·h`.
pub fn segment(n: usize, length: f64) -> MetricMeasureSpace {
    assert!(n >= 1);
    let h = if n > 1 { length / (n - 1) as f64 } else { 0.0 };
    let ids = (0..n).map(|i| format!("s{i}")).collect();
    let dist = (0..n * n).map(|k| (k / n).abs_diff(k % n) as f64 * h).collect();
    let s = MetricMeasureSpace::from_flat(ids, dist, vec![1.0 / n as f64; n]).expect("valid segment");
    let boundary = if n > 1 { vec![0, n - 1] } else { vec![0] };
    s.with_boundary_indices(boundary)
}

/// Points at the given sorted positions on the real line.
pub fn line_points(positions: &[f64], weights: Vec<f64>) -> MetricMeasureSpace {
    let n = positions.len();
    let ids = (0..n).map(|i| format!("x{i}")).collect();
    let dist = (0..n * n).map(|k| (positions[k / n] - positions[k % n]).abs()).collect();
    MetricMeasureSpace::from_flat(ids, dist, weights)
        .expect("valid line")
        .with_boundary_indices(vec![0, n - 1])
}

/// `n` equally spaced points on a circle of the given circumference.
pub fn circle(n: usize, circumference: f64) -> MetricMeasureSpace {
    let h = circumference / n as f64;
    let ids = (0..n).map(|i| format!("c{i}")).collect();
    let dist = (0..n * n)
        .map(|k| {
            let g = (k / n).abs_diff(k % n);
            g.min(n - g) as f64 * h
        })
        .collect();
    MetricMeasureSpace::from_flat(ids, dist, vec![1.0 / n as f64; n]).expect("valid circle")
}

/// Three legs of `per_leg` points each joined at a center (index 0). Leg `l`
/// occupies indices `1 + l·per_leg ..`, ordered outward; the tips are the boundary.
pub fn tripod(per_leg: usize, leg_length: f64) -> MetricMeasureSpace {
    let h = leg_length / per_leg as f64;
    let mut ids = vec!["o".to_string()];
    let mut edges = Vec::new();
    for l in 0..3 {
        for i in 0..per_leg {
            ids.push(format!("l{l}_{i}"));
            let me = 1 + l * per_leg + i;
            let prev = if i == 0 { 0 } else { me - 1 };
            edges.push((prev, me, h));
        }
    }
    let n = ids.len();
    let s = metric_from_graph(ids, &edges, Some(vec![1.0 / n as f64; n])).expect("tripod is connected");
    s.with_boundary_indices((0..3).map(|l| (l + 1) * per_leg).collect())
}

/// Flat disc of the given radius sampled on concentric rings (plus the
/// center), Euclidean distances; the outer ring is the boundary.
pub fn disc(rings: usize, per_ring: usize, radius: f64) -> MetricMeasureSpace {
    let mut pts = vec![(0.0, 0.0)];
    let mut ids = vec!["c".to_string()];
    for r in 1..=rings {
        let rad = radius * r as f64 / rings as f64;
        for k in 0..per_ring {
            let a = 2.0 * PI * k as f64 / per_ring as f64;
            pts.push((rad * a.cos(), rad * a.sin()));
            ids.push(format!("r{r}_{k}"));
        }
    }
    let n = pts.len();
    let dist = (0..n * n)
        .map(|k| {
            let (a, b) = (pts[k / n], pts[k % n]);
            ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
        })
        .collect();
    let s = MetricMeasureSpace::from_flat(ids, dist, vec![1.0 / n as f64; n]).expect("valid disc");
    s.with_boundary_indices(((n - per_ring)..n).collect())
}

/// Points of the unit sphere with great-circle distances: an arc of `n`
/// points along the equator of the given length, plus a few witnesses off
/// the arc. Returns the space, the arc indices and the witness indices.
pub fn sphere_arc_with_witnesses(n: usize, arc_length: f64) -> (MetricMeasureSpace, Vec<usize>, Vec<usize>) {
    let mut pts: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let a = arc_length * i as f64 / (n - 1) as f64;
            [a.cos(), a.sin(), 0.0]
        })
        .collect();
    for &(lon, lat) in &[(0.3, 0.5), (0.6, -0.9), (-0.4, 0.2), (1.0, 1.2)] {
        let (lon, lat): (f64, f64) = (lon, lat);
        pts.push([lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]);
    }
    let m = pts.len();
    let ids = (0..m).map(|i| format!("q{i}")).collect();
    let dist = (0..m * m)
        .map(|k| {
            let (a, b) = (pts[k / m], pts[k % m]);
            if k / m == k % m {
                0.0
            } else {
                (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
            }
        })
        .collect();
    let s = MetricMeasureSpace::from_flat(ids, dist, vec![1.0; m]).expect("valid sphere sample");
    (s, (0..n).collect(), (n..m).collect())
}

/// Inward chains of `len` nodes at the two ends of a [`segment`].
pub fn segment_normals(s: &MetricMeasureSpace, len: usize) -> Vec<DiscreteGeodesic> {
    let n = s.len();
    vec![
        DiscreteGeodesic::new(s, (0..len).collect()).expect("segment chain"),
        DiscreteGeodesic::new(s, (0..len).map(|i| n - 1 - i).collect()).expect("segment chain"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::validate_space;

    #[test]
    fn generated_spaces_are_valid() {
        for s in [segment(7, 1.0), circle(9, 2.0), tripod(4, 1.0), disc(3, 12, 1.0), sphere_arc_with_witnesses(20, 1.0).0] {
            let r = validate_space(&s);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn segment_endpoints_are_boundary() {
        let s = segment(5, 2.0);
        assert_eq!(s.boundary(), &[0, 4]);
        assert_eq!(s.d(0, 4), 2.0);
    }
}
