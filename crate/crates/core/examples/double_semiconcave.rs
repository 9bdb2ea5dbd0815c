//! Double-semiconcavity of a function on a segment, checked through the
//! boundary-slope characterization and directly on the double.
//!
//! ```bash
//! cargo run --example double_semiconcave
//! ```

use glued_cd::generators::{segment, segment_normals};
use glued_cd::semiconcave::{check_double_semiconcave, ScalarField};
use glued_cd::DiscreteGeodesic;

type Case = (&'static str, fn(f64) -> f64, f64);

pub fn run_example() -> glued_cd::Result<()> {
    let s = segment(51, 1.0);
    let whole = vec![DiscreteGeodesic::new(&s, (0..s.len()).collect())?];
    let normals = segment_normals(&s, 5);

    let cases: [Case; 3] = [("x^2 - x", |x| x * x - x, 2.0), ("x", |x| x, 0.0), ("const", |_| 1.0, 0.0)];
    for (name, f, lambda) in cases {
        let phi = ScalarField::from_fn(&s, |i| f(s.d(0, i)))?;
        let o = check_double_semiconcave(&s, &phi, lambda, &whole, &normals, Default::default())?;
        println!(
            "{name:>8}: characterization {}  direct {}  agree {}",
            o.characterization.pass, o.direct.pass, o.agree
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
