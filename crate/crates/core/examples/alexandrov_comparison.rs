//! The comparison inequality along discrete geodesics: a sphere arc passes at
//! κ = 1, a tripod fails at its branch point.
//!
//! ```bash
//! cargo run --example alexandrov_comparison
//! ```

use glued_cd::generators::{sphere_arc_with_witnesses, tripod};
use glued_cd::space::check_alexandrov_comparison;
use glued_cd::DiscreteGeodesic;

pub fn run_example() -> glued_cd::Result<()> {
    let (sphere, arc, witnesses) = sphere_arc_with_witnesses(80, 1.2);
    let g = DiscreteGeodesic::new(&sphere, arc)?;
    let r = check_alexandrov_comparison(&sphere, 1.0, &[g], &witnesses)?;
    println!("{}", r.summary_line());
    assert!(r.pass);

    // witness on leg 0, geodesic from the tip of leg 1 to the tip of leg 2
    let per_leg = 10;
    let t = tripod(per_leg, 1.0);
    let leg = |l: usize| (0..per_leg).map(move |i| 1 + l * per_leg + i);
    let mut path: Vec<usize> = leg(1).rev().collect();
    path.push(0);
    path.extend(leg(2));
    let g = DiscreteGeodesic::new(&t, path)?;
    let y = 1 + 4;
    let r = check_alexandrov_comparison(&t, 0.0, &[g], &[y])?;
    println!("{}", r.summary_line());
    println!("worst node: {}", r.witness["node"]);
    assert!(!r.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
