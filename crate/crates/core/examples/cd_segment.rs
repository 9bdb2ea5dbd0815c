//! Optimal transport between two smooth densities on a segment and the CD*
//! entropy inequality along the displacement interpolation, at K = 0 (holds)
//! and K = 50 (fails).
//!
//! ```bash
//! cargo run --example cd_segment
//! ```

use glued_cd::generators::segment;
use glued_cd::transport::{check_cd_detailed, default_t_grid, CdOptions, CdVariant};
use glued_cd::CurvatureDimension;

fn density(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|i| f((i as f64 + 0.5) / n as f64)).collect();
    let total: f64 = v.iter().sum();
    v.into_iter().map(|x| x / total).collect()
}

pub fn run_example() -> glued_cd::Result<()> {
    let n = 200;
    let s = segment(n, 1.0);
    let mu0 = density(n, |x| 1.0 + 0.8 * (3.0 * x).sin());
    let mu1 = density(n, |x| 1.0 + 0.8 * (4.0 * x + 1.0).cos());
    let opts = CdOptions { tolerance: Some(1e-2), ..Default::default() };

    for k in [0.0, 50.0] {
        let cd = CurvatureDimension::new(k, 5.0)?;
        let o = check_cd_detailed(&s, cd, &mu0, &mu1, &default_t_grid(), CdVariant::Reduced, opts)?;
        println!("K = {k}: W2 = {:.5}, {}", o.w2, o.report.summary_line());
        for slice in o.slices.iter().step_by(4) {
            println!("  t = {:.3}  S_N = {:+.6}  rhs = {:+.6}", slice.t, slice.entropy, slice.rhs);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
