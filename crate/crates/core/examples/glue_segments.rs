//! Gluing two segments at both ends gives a circle; gluing at one end gives a
//! wedge. Functions that agree on the seam glue to a function on the result.
//!
//! ```bash
//! cargo run --example glue_segments
//! ```

use glued_cd::generators::segment;
use glued_cd::gluing::{double_space, glue_function, glue_spaces, validate_boundary_isometry};
use glued_cd::{BoundaryIsometry, Side};

pub fn run_example() -> glued_cd::Result<()> {
    let x = segment(3, 1.0);
    let iso = BoundaryIsometry::identity(&x);
    let report = validate_boundary_isometry(&x, &x, &iso, 0.5)?;
    println!("{}", report.summary_line());
    for note in &report.notes {
        println!("  note: {note}");
    }

    let circle = glue_spaces(&x, &x, &iso, 0.5)?;
    let q = circle.space();
    let (a, b) = (circle.quotient_of(Side::Zero, 1), circle.quotient_of(Side::One, 1));
    println!("glued {} points; d({}, {}) = {}", q.len(), q.id(a), q.id(b), q.d(a, b));
    assert_eq!(q.d(a, b), 1.0);
    for p in circle.provenance() {
        println!("  {:>6} <- side {} `{}`", p.id, p.side as u8, p.original);
    }

    let double = double_space(&segment(5, 1.0))?;
    println!("double of a 5-point segment: {} points, diameter {}", double.space().len(), double.space().diameter());

    let phi: Vec<f64> = (0..3).map(|i| i as f64 / 2.0).collect();
    let glued = glue_function(&phi, &phi, &circle)?;
    println!("glued function: {glued:?}");

    let wedge_x = segment(3, 1.0).with_boundary_indices(vec![2]);
    let wedge_y = segment(3, 1.0).with_boundary_indices(vec![0]);
    let iso = BoundaryIsometry::new(vec![("s2".into(), "s0".into())]);
    let wedge = glue_spaces(&wedge_x, &wedge_y, &iso, 1.0)?;
    let (a, b) = (wedge.quotient_of(Side::Zero, 0), wedge.quotient_of(Side::One, 2));
    println!("wedge: d(far ends) = {}", wedge.space().d(a, b));
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
