//! Needle decomposition of a tripod along a guide function, the density check
//! on a model profile, and the kink test.
//!
//! ```bash
//! cargo run --example needle_localisation
//! ```

use glued_cd::generators::tripod;
use glued_cd::needles::{check_kink, check_needle_density, disintegrate, extract_chains, DensityProfile, GuideFunction, MassBalance};
use std::f64::consts::PI;

pub fn run_example() -> glued_cd::Result<()> {
    let s = tripod(6, 1.0);
    let u = GuideFunction::distance_to(&s, 0);
    let set = extract_chains(&s, &u);
    let needles = disintegrate(&s, &u, &set.chains)?;
    println!("{} chains, branch points {:?}", needles.len(), set.branch.iter().map(|&i| s.id(i)).collect::<Vec<_>>());
    for (c, chain) in needles.iter().enumerate() {
        println!("  chain {c}: {} nodes, q = {:.4}", chain.len(), chain.q);
    }
    let balance = MassBalance::of(&s, &set, &needles);
    println!("mass: chains {:.4} + branch {:.4} + unused {:.4} = {:.4}", balance.chains, balance.branch, balance.unused, balance.total);

    for n in [2.0, 3.0, 5.0] {
        let p = DensityProfile::uniform(0.05, PI - 0.05, 200, |r| r.sin().powf(n - 1.0))?;
        let r = check_needle_density(&p, n - 1.0, n)?;
        println!("sin^(N-1), N = {n}: {}", r.summary_line());
    }

    let left = DensityProfile::uniform(0.0, 0.5, 11, |r| r)?;
    let right = DensityProfile::uniform(0.5, 1.0, 11, |r| 1.0 - r)?;
    println!("concave kink: {}", check_kink(&left, &right, 0.5, 0.0)?.summary_line());
    let left = DensityProfile::uniform(0.0, 0.5, 11, |r| 0.5 - r)?;
    let right = DensityProfile::uniform(0.5, 1.0, 11, |r| r - 0.5)?;
    println!("convex kink:  {}", check_kink(&left, &right, 0.5, 0.0)?.summary_line());
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
