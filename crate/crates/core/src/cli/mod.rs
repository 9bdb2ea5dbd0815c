//! Command-line front end.
//!
//! Each subcommand assembles a [`Scenario`], validates it, runs the matching
//! library operation and prints the resulting reports as JSON. Exit codes:
//! 0 when every check passes, 1 when a check fails, 2 on a usage error and 3
//! on an input error.

use crate::coefficients::{kappa_model, sigma_coeff, tau_coeff, ModelFn};
use crate::cylinder::{run_cylinder_example, CylinderOptions};
use crate::error::{Error, Result};
use crate::generators;
use crate::gluing::{double_space, glue_spaces, validate_boundary_isometry};
use crate::io::{self, SpaceFile};
use crate::needles::{disintegrate, extract_chains, verify_cd1, write_needles_csv, GuideFunction};
use crate::report::CheckReport;
use crate::semiconcave::{check_double_semiconcave, DoubleOptions, ScalarField};
use crate::space::{validate_space, DiscreteGeodesic, MetricMeasureSpace};
use crate::transport::{check_cd_detailed, default_t_grid, mcp_scalar_test, mcp_threshold_on, uniform_t_grid, CdOptions, CdVariant, DENSE_T_STEPS};
use crate::CurvatureDimension;
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "glued-cd", version, about = "Discrete curvature-dimension checks for glued metric measure spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Space JSON file, or a generator such as `gen:segment:200:1.0`.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Second space for gluing.
    #[arg(long, global = true)]
    pub space2: Option<String>,
    /// Boundary isometry: JSON list of id pairs.
    #[arg(long, global = true)]
    pub iso: Option<PathBuf>,
    /// Curvature parameter K.
    #[arg(long = "K", global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Dimension parameter N.
    #[arg(long = "N", global = true)]
    pub n: Option<f64>,
    /// Curvature of the model functions (coeff).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Concavity bound of the field (semiconcave).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Distance argument of a coefficient or the scalar MCP test.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Number of uniform steps, or a comma-separated list of times.
    #[arg(long = "t-grid", global = true)]
    pub t_grid: Option<String>,
    /// Overrides the check's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for report and artifact files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a model function or distortion coefficient.
    Coeff {
        /// cos, sin, md, pi, sigma or tau.
        #[arg(long)]
        kind: String,
        /// Argument of cos/sin/md.
        #[arg(long)]
        x: Option<f64>,
        /// Time parameter of sigma/tau, in [0, 1].
        #[arg(long)]
        t: Option<f64>,
    },
    /// Glue two spaces along a boundary isometry.
    Glue {
        /// Connectivity radius of the boundary neighbour graphs.
        #[arg(long = "r-nn")]
        r_nn: Option<f64>,
    },
    /// Double a space along its boundary.
    Double,
    /// Check the CD or CD* entropy inequality between two measures.
    CheckCd {
        /// Source measure: id→mass object.
        #[arg(long)]
        mu0: PathBuf,
        /// Target measure: id→mass object.
        #[arg(long)]
        mu1: PathBuf,
        /// full (τ coefficients) or reduced (σ coefficients).
        #[arg(long, default_value = "full")]
        variant: String,
    },
    /// Scalar MCP test at --theta, or the threshold when --theta is absent.
    CheckMcp {
        /// Bisection precision of the threshold.
        #[arg(long, default_value_t = 1e-10)]
        precision: f64,
    },
    /// Needle decomposition and density check for one or more guides.
    Needle {
        /// Guide values: an id→value object or a list of them.
        #[arg(long)]
        guide: PathBuf,
    },
    /// Double-semiconcavity of a field, both routes.
    Semiconcave {
        /// Field values: id→value object.
        #[arg(long)]
        field: PathBuf,
        /// Normal chains: list of id lists starting at boundary points.
        #[arg(long)]
        normals: PathBuf,
        /// Geodesics for the concavity check; defaults to sampled shortest chains.
        #[arg(long)]
        geodesics: Option<PathBuf>,
        /// Cap on seam-crossing geodesics of the double.
        #[arg(long = "max-crossings", default_value_t = 400)]
        max_crossings: usize,
    },
    /// The capped-cylinder MCP counterexample.
    ExampleCylinder {
        /// Ring radius; must lie in (0, ε/16].
        #[arg(long, default_value_t = 0.02)]
        delta: f64,
        /// Points along the cylinder axis.
        #[arg(long = "arc-points", default_value_t = crate::cylinder::DEFAULT_ARC_POINTS)]
        arc_points: usize,
        /// Points on each cross-section ring.
        #[arg(long = "ring-points", default_value_t = crate::cylinder::DEFAULT_RING_POINTS)]
        ring_points: usize,
    },
    /// Validate a space.
    Validate,
}

/// Where a space comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSource {
    File(PathBuf),
    Generator { name: String, args: Vec<f64> },
}

impl SpaceSource {
    pub fn parse(text: &str) -> Result<Self> {
        let Some(rest) = text.strip_prefix("gen:") else {
            return Ok(SpaceSource::File(PathBuf::from(text)));
        };
        let mut parts = rest.split(':');
        let name = parts.next().unwrap_or_default().to_string();
        let args = parts
            .map(|p| p.parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad generator argument `{p}`"))))
            .collect::<Result<Vec<_>>>()?;
        let arity = match name.as_str() {
            "segment" | "circle" | "tripod" => 2,
            "disc" => 3,
            _ => return Err(Error::InvalidInput(format!("unknown generator `{name}`"))),
        };
        if args.len() != arity {
            return Err(Error::InvalidInput(format!("generator `{name}` takes {arity} arguments")));
        }
        Ok(SpaceSource::Generator { name, args })
    }

    pub fn load(&self) -> Result<MetricMeasureSpace> {
        match self {
            SpaceSource::File(p) => io::read_space(p),
            SpaceSource::Generator { name, args } => {
                let count = |x: f64| -> Result<usize> {
                    if x >= 1.0 && x.fract() == 0.0 {
                        Ok(x as usize)
                    } else {
                        Err(Error::InvalidInput(format!("point count must be a positive integer, got {x}")))
                    }
                };
                Ok(match name.as_str() {
                    "segment" => generators::segment(count(args[0])?, args[1]),
                    "circle" => generators::circle(count(args[0])?, args[1]),
                    "tripod" => generators::tripod(count(args[0])?, args[1]),
                    _ => generators::disc(count(args[0])?, count(args[1])?, args[2]),
                })
            }
        }
    }
}

/// Inputs of one run, checked before anything is computed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub spaces: Vec<SpaceSource>,
    pub files: Vec<PathBuf>,
    pub k: Option<f64>,
    pub n: Option<f64>,
    pub kappa: Option<f64>,
    pub lambda: Option<f64>,
    pub theta: Option<f64>,
    pub t_grid: Vec<f64>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub checks: Vec<String>,
}

pub fn parse_t_grid(text: &str) -> Result<Vec<f64>> {
    if let Ok(steps) = text.trim().parse::<usize>() {
        if steps == 0 {
            return Err(Error::InvalidInput("t-grid needs at least one step".into()));
        }
        return Ok(uniform_t_grid(steps));
    }
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad time `{p}`"))))
        .collect()
}

impl Scenario {
    pub fn from_common(name: &str, common: &Common, checks: &[&str]) -> Result<Self> {
        let spaces = [&common.space, &common.space2]
            .into_iter()
            .flatten()
            .map(|s| SpaceSource::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let t_grid = match &common.t_grid {
            Some(t) => parse_t_grid(t)?,
            None => default_t_grid(),
        };
        Ok(Scenario {
            name: name.to_string(),
            spaces,
            files: common.iso.iter().cloned().collect(),
            k: common.k,
            n: common.n,
            kappa: common.kappa,
            lambda: common.lambda,
            theta: common.theta,
            t_grid,
            tol: common.tol,
            seed: common.seed,
            checks: checks.iter().map(|c| c.to_string()).collect(),
        })
    }

    pub fn with_file(mut self, p: &Path) -> Self {
        self.files.push(p.to_path_buf());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let paths = self.spaces.iter().filter_map(|s| match s {
            SpaceSource::File(p) => Some(p),
            SpaceSource::Generator { .. } => None,
        });
        for p in paths.chain(&self.files) {
            if !p.is_file() {
                return Err(Error::InvalidInput(format!("file `{}` does not exist", p.display())));
            }
        }
        if let Some(n) = self.n {
            if !(n >= 1.0) {
                return Err(Error::InvalidInput(format!("N must be at least 1, got {n}")));
            }
        }
        for (name, v) in [("K", self.k), ("kappa", self.kappa), ("lambda", self.lambda)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("{name} must be finite")));
                }
            }
        }
        if let Some(th) = self.theta {
            if !(th >= 0.0) {
                return Err(Error::InvalidInput(format!("theta must be nonnegative, got {th}")));
            }
        }
        if let Some(tol) = self.tol {
            if !(tol >= 0.0) {
                return Err(Error::InvalidInput(format!("tolerance must be nonnegative, got {tol}")));
            }
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::InvalidInput("t-grid values must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn space(&self, i: usize) -> Result<MetricMeasureSpace> {
        let flag = if i == 0 { "--space" } else { "--space2" };
        self.spaces.get(i).ok_or_else(|| Error::InvalidInput(format!("{flag} is required")))?.load()
    }

    fn require(v: Option<f64>, flag: &str) -> Result<f64> {
        v.ok_or_else(|| Error::InvalidInput(format!("{flag} is required")))
    }
}

/// What a subcommand produced: JSON documents to print and artifacts to write.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<CheckReport>,
    pub values: Vec<(String, Value)>,
    pub artifacts: Vec<(String, String)>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

fn json_text<T: serde::Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn default_geodesics(s: &MetricMeasureSpace, cap: usize, seed: u64) -> Vec<DiscreteGeodesic> {
    let mut pairs: Vec<(usize, usize)> = (0..s.len()).flat_map(|i| ((i + 1)..s.len()).map(move |j| (i, j))).collect();
    if pairs.len() > cap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(cap);
        pairs.sort_unstable();
    }
    pairs.into_iter().map(|(i, j)| DiscreteGeodesic::between(s, i, j)).collect()
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    let mut out = Outcome::default();
    match &cli.command {
        Command::Coeff { kind, x, t } => {
            let sc = Scenario::from_common("coeff", c, &[])?;
            sc.validate()?;
            let value = match kind.as_str() {
                "sigma" | "tau" => {
                    let (k, n) = (Scenario::require(sc.k, "--K")?, Scenario::require(sc.n, "--N")?);
                    let t = t.ok_or_else(|| Error::InvalidInput("--t is required".into()))?;
                    let th = Scenario::require(sc.theta, "--theta")?;
                    if !(0.0..=1.0).contains(&t) {
                        return Err(Error::InvalidInput(format!("t must lie in [0, 1], got {t}")));
                    }
                    if kind == "sigma" {
                        sigma_coeff(k, n, t, th)
                    } else {
                        CurvatureDimension::new(k, n)?;
                        tau_coeff(k, n, t, th)
                    }
                }
                other => {
                    let f: ModelFn = other.parse()?;
                    let kappa = Scenario::require(sc.kappa, "--kappa")?;
                    let x = x.unwrap_or(0.0);
                    if x < 0.0 {
                        return Err(Error::InvalidInput(format!("x must be nonnegative, got {x}")));
                    }
                    kappa_model(f, kappa, x)
                }
            };
            out.values.push(("coeff".into(), json!({"kind": kind, "value": value})));
        }
        Command::Validate => {
            let sc = Scenario::from_common("validate", c, &["validate_space"])?;
            sc.validate()?;
            out.reports.push(validate_space(&sc.space(0)?));
        }
        Command::Glue { r_nn } => {
            let sc = Scenario::from_common("glue", c, &["boundary_isometry"])?;
            sc.validate()?;
            let (x0, x1) = (sc.space(0)?, sc.space(1)?);
            let iso_path = c.iso.as_ref().ok_or_else(|| Error::InvalidInput("--iso is required".into()))?;
            let iso = io::read_isometry(iso_path)?;
            let r = r_nn.unwrap_or_else(|| x0.mesh_size().max(x1.mesh_size()) * (1.0 + 1e-9));
            let report = validate_boundary_isometry(&x0, &x1, &iso, r)?;
            let pass = report.pass;
            out.reports.push(report);
            if pass {
                let g = glue_spaces(&x0, &x1, &iso, r)?;
                out.reports.push(validate_space(g.space()));
                out.artifacts.push(("glued.json".into(), json_text(&SpaceFile::from_glued(&g))?));
            }
        }
        Command::Double => {
            let sc = Scenario::from_common("double", c, &["validate_space"])?;
            sc.validate()?;
            let g = double_space(&sc.space(0)?)?;
            out.reports.push(validate_space(g.space()));
            out.artifacts.push(("double.json".into(), json_text(&SpaceFile::from_glued(&g))?));
        }
        Command::CheckCd { mu0, mu1, variant } => {
            let sc = Scenario::from_common("check-cd", c, &["cd"])?.with_file(mu0).with_file(mu1);
            sc.validate()?;
            let s = sc.space(0)?;
            let cd = CurvatureDimension::new(Scenario::require(sc.k, "--K")?, Scenario::require(sc.n, "--N")?)?;
            let variant: CdVariant = variant.parse()?;
            let (m0, m1) = (io::read_measure(mu0, &s)?, io::read_measure(mu1, &s)?);
            let opts = CdOptions { tolerance: sc.tol, ..Default::default() };
            let o = check_cd_detailed(&s, cd, &m0, &m1, &sc.t_grid, variant, opts)?;
            out.artifacts.push(("cd_slices.json".into(), json_text(&json!({"w2": o.w2, "slices": o.slices}))?));
            out.reports.push(o.report);
        }
        Command::CheckMcp { precision } => {
            let sc = Scenario::from_common("check-mcp", c, &["mcp_scalar"])?;
            sc.validate()?;
            let n = Scenario::require(sc.n, "--N")?;
            match sc.theta {
                Some(theta) => out.reports.push(mcp_scalar_test(n, theta, &sc.t_grid)),
                None => {
                    let grid = match &c.t_grid {
                        Some(_) => sc.t_grid.clone(),
                        None => uniform_t_grid(DENSE_T_STEPS),
                    };
                    let thr = mcp_threshold_on(n, *precision, &grid)?;
                    out.values.push(("mcp_threshold".into(), json!({"N": n, "threshold": thr, "grid_points": grid.len()})));
                }
            }
        }
        Command::Needle { guide } => {
            let sc = Scenario::from_common("needle", c, &["cd1"])?.with_file(guide);
            sc.validate()?;
            let s = sc.space(0)?;
            let guides = io::read_fields(guide, &s)?
                .into_iter()
                .map(|v| GuideFunction::new(&s, v))
                .collect::<Result<Vec<_>>>()?;
            let (k, n) = (Scenario::require(sc.k, "--K")?, Scenario::require(sc.n, "--N")?);
            out.reports.push(verify_cd1(&s, &guides, k, n)?);
            for (g, u) in guides.iter().enumerate() {
                let set = extract_chains(&s, u);
                let needles = disintegrate(&s, u, &set.chains)?;
                let mut buf = Vec::new();
                write_needles_csv(&mut buf, &s, &needles)?;
                out.artifacts.push((format!("needles_{g}.csv"), String::from_utf8(buf).expect("csv is utf-8")));
            }
        }
        Command::Semiconcave { field, normals, geodesics, max_crossings } => {
            let mut sc = Scenario::from_common("semiconcave", c, &["double_semiconcave"])?.with_file(field).with_file(normals);
            if let Some(g) = geodesics {
                sc = sc.with_file(g);
            }
            sc.validate()?;
            let s = sc.space(0)?;
            let lambda = Scenario::require(sc.lambda, "--lambda")?;
            let phi = ScalarField::new(&s, io::read_field(field, &s)?)?;
            let normal_chains = io::read_chains(normals, &s)?
                .into_iter()
                .map(|c| DiscreteGeodesic::new(&s, c))
                .collect::<Result<Vec<_>>>()?;
            let geos = match geodesics {
                Some(p) => io::read_chains(p, &s)?.into_iter().map(|c| DiscreteGeodesic::new(&s, c)).collect::<Result<Vec<_>>>()?,
                None => default_geodesics(&s, *max_crossings, sc.seed),
            };
            let opts = DoubleOptions { max_crossings: *max_crossings, seed: sc.seed };
            out.reports.push(check_double_semiconcave(&s, &phi, lambda, &geos, &normal_chains, opts)?.report);
        }
        Command::ExampleCylinder { delta, arc_points, ring_points } => {
            let sc = Scenario::from_common("example-cylinder", c, &["cylinder_example"])?;
            sc.validate()?;
            let n = Scenario::require(sc.n, "--N")?;
            if n.fract() != 0.0 {
                return Err(Error::InvalidInput(format!("the cylinder example needs an integer N, got {n}")));
            }
            let opts = CylinderOptions { arc_points: *arc_points, ring_points: *ring_points };
            let o = run_cylinder_example(n as usize, *delta, opts)?;
            out.values.push(("cylinder".into(), json!({"threshold": o.threshold, "epsilon": o.epsilon})));
            out.reports.push(o.report);
        }
    }
    Ok(out)
}

fn emit(out: &Outcome, dir: Option<&Path>) -> Result<()> {
    for (_, v) in &out.values {
        print!("{}", json_text(v)?);
    }
    for r in &out.reports {
        print!("{}", json_text(r)?);
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        for (name, v) in &out.values {
            fs::write(dir.join(format!("{name}.json")), json_text(v)?)?;
        }
        for r in &out.reports {
            fs::write(dir.join(format!("{}.json", r.check)), json_text(r)?)?;
        }
        for (name, text) in &out.artifacts {
            fs::write(dir.join(name), text)?;
        }
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs it and returns the exit code.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(&out, cli.common.out.as_deref())?;
        Ok(out.pass())
    });
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_grid_forms() {
        assert_eq!(parse_t_grid("4").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_t_grid("0.1, 0.9").unwrap(), vec![0.1, 0.9]);
        assert!(parse_t_grid("x").is_err());
    }

    #[test]
    fn generator_sources() {
        let s = SpaceSource::parse("gen:segment:5:2.0").unwrap().load().unwrap();
        assert_eq!(s.len(), 5);
        assert!(SpaceSource::parse("gen:blob:1").is_err());
        assert!(SpaceSource::parse("gen:segment:1").is_err());
        assert_eq!(SpaceSource::parse("a.json").unwrap(), SpaceSource::File("a.json".into()));
    }

    #[test]
    fn scenario_rejects_bad_parameters() {
        let mut c = Common { n: Some(0.5), ..Default::default() };
        c.t_grid = Some("4".into());
        assert!(Scenario::from_common("x", &c, &[]).unwrap().validate().is_err());
        let c = Common { space: Some("/nonexistent.json".into()), ..Default::default() };
        assert!(Scenario::from_common("x", &c, &[]).unwrap().validate().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(cli_main(["glued-cd", "check-mcp", "--N", "4", "--theta", "0.4", "--t-grid", "2048"]), EXIT_PASS);
        assert_eq!(cli_main(["glued-cd", "check-mcp", "--N", "4", "--theta", "3.1"]), EXIT_CHECK_FAILED);
        assert_eq!(cli_main(["glued-cd", "frobnicate"]), EXIT_USAGE);
        assert_eq!(cli_main(["glued-cd", "validate"]), EXIT_INPUT);
    }
}
