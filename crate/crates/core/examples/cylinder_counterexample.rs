//! The capped cylinder passes the scalar MCP test at every distance it
//! contains; its double is long enough to fail it.
//!
//! ```bash
//! cargo run --example cylinder_counterexample
//! ```

use glued_cd::cylinder::{run_cylinder_example, CylinderOptions};

pub fn run_example() -> glued_cd::Result<()> {
    let out = run_cylinder_example(4, 0.02, CylinderOptions::default())?;
    println!("threshold {:.6}, epsilon {:.6}", out.threshold, out.epsilon);
    println!("cylinder: {} points, double: {} points", out.cylinder.len(), out.double.space().len());
    for part in &out.report.parts {
        println!("  {}", part.summary_line());
    }
    println!("{}", out.report.summary_line());
    assert!(out.report.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
