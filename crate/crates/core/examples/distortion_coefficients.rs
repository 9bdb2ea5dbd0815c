//! Model functions and distortion coefficients, including the infinite
//! branches.
//!
//! ```bash
//! cargo run --example distortion_coefficients
//! ```

use glued_cd::coefficients::{kappa_model, sigma_coeff, tau_coeff, ModelFn};
use glued_cd::ExtendedReal;
use std::f64::consts::PI;

pub fn run_example() -> glued_cd::Result<()> {
    println!("sin_0(2.5) = {}", kappa_model(ModelFn::Sin, 0.0, 2.5));
    println!("md_0(3)    = {}", kappa_model(ModelFn::Md, 0.0, 3.0));
    println!("pi_4       = {}", kappa_model(ModelFn::Pi, 4.0, 0.0));
    println!("pi_-1      = {}", kappa_model(ModelFn::Pi, -1.0, 0.0));

    println!("\n  theta    sigma_(3,4)   tau_(3,4)   at t = 0.5");
    for theta in [0.0, 0.5, 1.0, 2.0, 2.3, 2.5] {
        let s = sigma_coeff(3.0, 4.0, 0.5, theta);
        let t = tau_coeff(3.0, 4.0, 0.5, theta);
        println!("  {theta:5.2}    {:>10.6}   {:>10.6}", s.to_f64(), t.to_f64());
        assert!(t >= s);
    }

    // K > 0, N = 1: θ·∞ with 0·∞ = 0
    assert_eq!(tau_coeff(1.0, 1.0, 0.5, 0.0), ExtendedReal::Finite(0.0));
    assert_eq!(tau_coeff(1.0, 1.0, 0.5, 0.1), ExtendedReal::Infinity);
    assert_eq!(sigma_coeff(1.0, 1.0, 0.5, PI), ExtendedReal::Infinity);
    println!("\ntau_(1,1)(0) = 0, tau_(1,1)(0.1) = inf, sigma_(1,1)(pi) = inf");
    Ok(())
}

#[allow(dead_code)]
fn main() -> glued_cd::Result<()> {
    run_example()
}
