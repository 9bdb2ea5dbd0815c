//! Model-space trigonometry and volume distortion coefficients.
//!
//! `cos_κ`, `sin_κ` solve `v'' + κ v = 0` with the usual initial data, `md_κ`
//! solves `v'' + κ v = 1` with `v(0) = v'(0) = 0`, and `π_κ` is the diameter of
//! the simply connected model surface of curvature κ. The distortion
//! coefficients `σ` and `τ` are built on top of `sin_κ` and may be infinite, so
//! they are returned as [`ExtendedReal`].

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

/// Arguments closer than this to `π_κ` are treated as being at the cutoff.
pub const CUTOFF_GUARD: f64 = 1e-12;

/// A real number or `+∞`, with the convention `0·∞ = 0`. In JSON it is a
/// number or the string `"+inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);
    pub const ONE: ExtendedReal = ExtendedReal::Finite(1.0);

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinity => None,
        }
    }

    /// Lossy conversion; `+∞` becomes `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn scale(self, a: f64) -> ExtendedReal {
        self * ExtendedReal::Finite(a)
    }

    /// `x^p` for `p >= 0`, with `∞^0 = 1` and `∞^p = ∞` otherwise.
    pub fn powf(self, p: f64) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v.powf(p)),
            ExtendedReal::Infinity if p == 0.0 => ExtendedReal::ONE,
            ExtendedReal::Infinity => ExtendedReal::Infinity,
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::Infinity => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(ExtendedReal::Finite(v)),
            Repr::Text(t) if t == "+inf" || t == "inf" => Ok(ExtendedReal::Infinity),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"+inf\", got `{t}`"))),
        }
    }
}

/// Product with `0·∞ = 0`. Negative finite factors times `∞` are not
/// representable and panic.
impl std::ops::Mul for ExtendedReal {
    type Output = ExtendedReal;
    fn mul(self, other: ExtendedReal) -> ExtendedReal {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a * b),
            (Finite(a), Infinity) | (Infinity, Finite(a)) => {
                assert!(a >= 0.0, "negative factor times +inf");
                if a == 0.0 {
                    Finite(0.0)
                } else {
                    Infinity
                }
            }
            (Infinity, Infinity) => Infinity,
        }
    }
}

impl std::ops::Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, other: ExtendedReal) -> ExtendedReal {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinity,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedReal::Infinity
        } else {
            ExtendedReal::Finite(v)
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinity) => Some(Ordering::Less),
            (Infinity, Finite(_)) => Some(Ordering::Greater),
            (Infinity, Infinity) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => write!(f, "+inf"),
        }
    }
}

/// Curvature parameter `K` and dimension parameter `N >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureDimension {
    pub k: f64,
    pub n: f64,
}

impl CurvatureDimension {
    pub fn new(k: f64, n: f64) -> Result<Self> {
        if !k.is_finite() || !n.is_finite() || n < 1.0 {
            return Err(Error::InvalidInput(format!("need finite K and N >= 1, got K={k}, N={n}")));
        }
        Ok(CurvatureDimension { k, n })
    }

    pub fn tau(&self, t: f64, theta: f64) -> ExtendedReal {
        tau_coeff(self.k, self.n, t, theta)
    }

    pub fn sigma(&self, t: f64, theta: f64) -> ExtendedReal {
        sigma_coeff(self.k, self.n, t, theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFn {
    Cos,
    Sin,
    Md,
    Pi,
}

impl std::str::FromStr for ModelFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cos" => Ok(ModelFn::Cos),
            "sin" => Ok(ModelFn::Sin),
            "md" => Ok(ModelFn::Md),
            "pi" => Ok(ModelFn::Pi),
            other => Err(Error::InvalidInput(format!("unknown model function `{other}`"))),
        }
    }
}

pub fn cos_k(kappa: f64, x: f64) -> f64 {
    if kappa < 0.0 {
        ((-kappa).sqrt() * x).cosh()
    } else if kappa == 0.0 {
        1.0
    } else {
        (kappa.sqrt() * x).cos()
    }
}

pub fn sin_k(kappa: f64, x: f64) -> f64 {
    if kappa < 0.0 {
        let s = (-kappa).sqrt();
        (s * x).sinh() / s
    } else if kappa == 0.0 {
        x
    } else {
        let s = kappa.sqrt();
        (s * x).sin() / s
    }
}

pub fn md_k(kappa: f64, x: f64) -> f64 {
    if kappa == 0.0 {
        0.5 * x * x
    } else {
        (1.0 - cos_k(kappa, x)) / kappa
    }
}

pub fn pi_k(kappa: f64) -> ExtendedReal {
    if kappa <= 0.0 {
        ExtendedReal::Infinity
    } else {
        ExtendedReal::Finite(PI / kappa.sqrt())
    }
}

pub fn kappa_model(kind: ModelFn, kappa: f64, x: f64) -> ExtendedReal {
    match kind {
        ModelFn::Cos => ExtendedReal::Finite(cos_k(kappa, x)),
        ModelFn::Sin => ExtendedReal::Finite(sin_k(kappa, x)),
        ModelFn::Md => ExtendedReal::Finite(md_k(kappa, x)),
        ModelFn::Pi => pi_k(kappa),
    }
}

/// True when `theta` lies in `[0, π_κ)` and is not within [`CUTOFF_GUARD`] of it.
fn below_cutoff(kappa: f64, theta: f64) -> bool {
    match pi_k(kappa) {
        ExtendedReal::Infinity => true,
        ExtendedReal::Finite(p) => theta < p - CUTOFF_GUARD,
    }
}

/// `ln σ_{K,N}^{(t)}(θ)` for `t > 0`, `θ > 0`; `None` at or beyond the cutoff.
fn ln_sigma(k: f64, n: f64, t: f64, theta: f64) -> Option<f64> {
    let kappa = k / n;
    if !below_cutoff(kappa, theta) {
        return None;
    }
    Some(if kappa < 0.0 {
        // ln[sinh(txθ)/sinh(xθ)] without overflow for large arguments
        let x = (-kappa).sqrt() * theta;
        x * (t - 1.0) + (-(-2.0 * x * t).exp_m1()).ln() - (-(-2.0 * x).exp_m1()).ln()
    } else {
        (sin_k(kappa, t * theta) / sin_k(kappa, theta)).ln()
    })
}

/// `σ_{K,N}^{(t)}(θ) = sin_{K/N}(tθ) / sin_{K/N}(θ)` below the cutoff, `+∞` beyond.
pub fn sigma_coeff(k: f64, n: f64, t: f64, theta: f64) -> ExtendedReal {
    if theta == 0.0 {
        return ExtendedReal::Finite(t);
    }
    let kappa = k / n;
    if !below_cutoff(kappa, theta) {
        return ExtendedReal::Infinity;
    }
    if kappa < 0.0 && (-kappa).sqrt() * theta > 300.0 {
        return ExtendedReal::Finite(ln_sigma(k, n, t, theta).map_or(0.0, f64::exp));
    }
    ExtendedReal::Finite(sin_k(kappa, t * theta) / sin_k(kappa, theta))
}

/// Modified coefficient `τ_{K,N}^{(t)}(θ) = t^{1/N} σ_{K,N-1}^{(t)}(θ)^{1-1/N}`,
/// with `τ = θ·∞` when `K > 0` and `N = 1`.
pub fn tau_coeff(k: f64, n: f64, t: f64, theta: f64) -> ExtendedReal {
    if n == 1.0 {
        if k > 0.0 {
            return ExtendedReal::Finite(theta) * ExtendedReal::Infinity;
        }
        // exponent 1 - 1/N vanishes; σ_{K,0} is never evaluated
        return ExtendedReal::Finite(t);
    }
    if t == 0.0 {
        return ExtendedReal::ZERO;
    }
    if theta == 0.0 {
        return ExtendedReal::Finite(t);
    }
    // written as t·(σ/t)^{1-1/N} so that σ = t gives τ = t exactly; when
    // σ_{K,N-1} underflows τ need not, so fall back to logarithms
    let p = 1.0 - 1.0 / n;
    match sigma_coeff(k, n - 1.0, t, theta) {
        ExtendedReal::Infinity => ExtendedReal::Infinity,
        ExtendedReal::Finite(sigma) if sigma > f64::MIN_POSITIVE => ExtendedReal::Finite(t * (sigma / t).powf(p)),
        ExtendedReal::Finite(_) => {
            let ls = ln_sigma(k, n - 1.0, t, theta).expect("below cutoff");
            ExtendedReal::Finite(t * (p * (ls - t.ln())).exp())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: ExtendedReal) -> f64 {
        v.finite().expect("finite")
    }

    #[test]
    fn json_form() {
        use ExtendedReal::*;
        assert_eq!(serde_json::to_string(&Finite(0.5)).unwrap(), "0.5");
        assert_eq!(serde_json::to_string(&Infinity).unwrap(), "\"+inf\"");
        assert_eq!(serde_json::from_str::<ExtendedReal>("\"+inf\"").unwrap(), Infinity);
        assert_eq!(serde_json::from_str::<ExtendedReal>("2").unwrap(), Finite(2.0));
    }

    #[test]
    fn model_function_examples() {
        assert_eq!(kappa_model(ModelFn::Sin, 0.0, 2.5), ExtendedReal::Finite(2.5));
        assert_eq!(kappa_model(ModelFn::Md, 0.0, 3.0), ExtendedReal::Finite(4.5));
        assert_eq!(fin(kappa_model(ModelFn::Pi, 4.0, 0.0)), PI / 2.0);
        assert_eq!(kappa_model(ModelFn::Cos, -1.0, 0.0), ExtendedReal::Finite(1.0));
        assert!(kappa_model(ModelFn::Pi, 0.0, 1.0).is_infinite());
        assert!(kappa_model(ModelFn::Pi, -3.0, 1.0).is_infinite());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_coeff(2.0, 3.0, 0.3, 0.0), ExtendedReal::Finite(0.3));
        assert_eq!(sigma_coeff(-7.0, 1.5, 0.3, 0.0), ExtendedReal::Finite(0.3));
        assert!((fin(sigma_coeff(0.0, 2.0, 0.7, 1.0)) - 0.7).abs() < 1e-15);
        assert!(sigma_coeff(1.0, 1.0, 0.5, PI).is_infinite());
        assert!(sigma_coeff(1.0, 1.0, 0.5, PI - 1e-13).is_infinite());
        assert!(sigma_coeff(1.0, 1.0, 0.5, 4.0).is_infinite());
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_coeff(1.0, 1.0, 0.5, 0.0), ExtendedReal::Finite(0.0));
        assert!(tau_coeff(1.0, 1.0, 0.5, 0.1).is_infinite());
        assert!((fin(tau_coeff(0.0, 3.0, 0.5, 2.0)) - 0.5).abs() < 1e-15);
        assert_eq!(tau_coeff(-2.0, 1.0, 0.25, 3.0), ExtendedReal::Finite(0.25));
    }

    #[test]
    fn extended_arithmetic() {
        use ExtendedReal::*;
        assert_eq!(Finite(0.0) * Infinity, Finite(0.0));
        assert_eq!(Infinity * Finite(2.0), Infinity);
        assert!(Infinity > Finite(1e300));
        assert_eq!(Infinity.powf(0.0), Finite(1.0));
        assert_eq!(Finite(1.0) + Infinity, Infinity);
    }

    #[test]
    fn endpoints_of_sigma() {
        for &(k, n) in &[(3.0, 2.0), (-1.0, 4.0), (0.0, 1.0)] {
            for &theta in &[0.1, 0.5, 1.2] {
                assert_eq!(fin(sigma_coeff(k, n, 1.0, theta)), 1.0);
                assert_eq!(fin(sigma_coeff(k, n, 0.0, theta)), 0.0);
            }
        }
    }

    #[test]
    fn sin_cos_satisfy_ode_to_second_order() {
        // v'' + κ v = 0 with central differences; error must shrink like h².
        for &kappa in &[-2.0, -0.5, 0.0, 0.7, 3.0] {
            let mut errs = Vec::new();
            for &h in &[1e-2, 5e-3] {
                let mut worst: f64 = 0.0;
                for i in 1..50 {
                    let x = 0.03 * i as f64;
                    for f in [sin_k, cos_k] {
                        let d2 = (f(kappa, x + h) - 2.0 * f(kappa, x) + f(kappa, x - h)) / (h * h);
                        worst = worst.max((d2 + kappa * f(kappa, x)).abs());
                    }
                }
                errs.push(worst);
            }
            // halving h cuts the error by about 4 (allow float noise when tiny)
            assert!(errs[1] <= errs[0] / 3.0 + 1e-6, "kappa={kappa}: {errs:?}");
        }
    }

    #[test]
    fn md_solves_its_ode() {
        let h = 1e-3;
        for &kappa in &[-1.0, 0.0, 2.0] {
            for i in 1..20 {
                let x = 0.1 * i as f64;
                let d2 = (md_k(kappa, x + h) - 2.0 * md_k(kappa, x) + md_k(kappa, x - h)) / (h * h);
                assert!((d2 + kappa * md_k(kappa, x) - 1.0).abs() < 1e-4);
            }
            assert_eq!(md_k(kappa, 0.0), 0.0);
        }
    }

    #[test]
    fn sigma_diverges_at_cutoff() {
        for &(k, n) in &[(1.0, 1.0), (4.0, 2.0), (10.0, 1.0)] {
            let cutoff = fin(pi_k(k / n));
            for &t in &[0.25, 0.5, 0.75] {
                let v = sigma_coeff(k, n, t, cutoff - 1e-7).to_f64();
                assert!(v > 1e6, "k={k} n={n} t={t}: {v}");
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn tau_dominates_sigma(k in -20.0f64..20.0, n in 1.0f64..12.0, t in 0.0f64..=1.0, theta in 0.0f64..6.0) {
                let tau = tau_coeff(k, n, t, theta);
                let sigma = sigma_coeff(k, n, t, theta);
                match (tau, sigma) {
                    (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => prop_assert!(a >= b - 1e-12 * b.abs().max(1.0)),
                    _ => prop_assert!(tau >= sigma),
                }
            }

            #[test]
            fn sigma_continuous_below_cutoff(k in 0.1f64..10.0, n in 1.0f64..5.0, t in 0.0f64..=1.0, frac in 0.0f64..0.9) {
                let cutoff = pi_k(k / n).to_f64();
                let theta = frac * cutoff;
                let a = sigma_coeff(k, n, t, theta).to_f64();
                let b = sigma_coeff(k, n, t, theta + 1e-9).to_f64();
                prop_assert!((a - b).abs() < 1e-6);
            }
        }
    }
}
