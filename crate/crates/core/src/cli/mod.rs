//! Command-line front end.
//!
//! Every subcommand writes one JSON document (`params`, `results`,
//! `diagnostics`) or a CSV table. Floats carry at most 15 significant digits,
//! so identical inputs give byte-identical output.
//!
//! Exit codes: 0 success, 1 computation or I/O failure, 2 invalid input, and
//! 10 and up for a failed check (see [`Check`]).

mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::confinement::{
    confinement_scalar, criterion_residual, is_confining, is_selfadjoint_regime, CouplingSpec, LambdaSpec, DEFAULT_TOL,
};
use crate::eigen::{
    admissible_interval, condition_residual, construct_eigendensity, isospectral_partner, mode_block, solve_lambda,
    trace_curve, EigenQuery, CONDITION_TOL,
};
use crate::harmonics::Sign;
use crate::modes::{min_p, mode_table, p_lower_bound, riesz_constants, scan_question, DEFAULT_J2_MAX};
use crate::operators::{assemble_c, detect, jump_residual, riesz_witness};
use crate::surface::{make_ellipsoid, make_sphere, SurfacePatchization};
use crate::{Error, SpectralParams};

pub use output::{float_cell, round_sig, Table};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Checks whose failure sets the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum Check {
    CurveResidual = 10,
    EigenCondition = 11,
    RieszWitness = 12,
    QuestionScan = 13,
    ConfinementResidual = 14,
    JumpResidual = 15,
}

/// Tolerance on curve residuals.
const CURVE_TOL: f64 = 1e-10;
/// Relative tolerance of the Riesz witness against 1/2.
const RIESZ_REL_TOL: f64 = 0.02;
/// Jump-identity residual accepted by `surface`.
const JUMP_TOL: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "dirac-shell", version, about = "Dirac operators with shell potentials on closed surfaces")]
pub struct Cli {
    /// Output format (default: csv for `curve`, json otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: logical cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sphere mode coefficients d and |p| up to j_max
    Modes {
        #[command(flatten)]
        point: Point,
        /// 2 j_max
        #[arg(long, default_value_t = 1)]
        jmax: u32,
    },
    /// Positive eigenvalue curve lambda(a) for one mode
    Curve {
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// 2 j
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, default_value = "plus")]
        sign: Sign,
        /// lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        a_grid: String,
    },
    /// Admissible coupling intervals (closure of the curve range)
    Intervals {
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Both signs when omitted
        #[arg(long)]
        sign: Option<Sign>,
    },
    /// Roots of the sphere eigenvalue condition at one (a, j, sign)
    Eigen {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, default_value = "plus")]
        sign: Sign,
        /// Check this coupling against the condition
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
    },
    /// Kernel detection for 1/lambda + C on a discretized surface
    Surface {
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Confinement test for electrostatic plus Lorentz-scalar couplings
    Confine {
        #[arg(long, allow_hyphen_values = true)]
        lambda_e: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda_s: f64,
        /// Also measure the discrete criterion on this surface
        #[arg(long)]
        check_surface: bool,
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Smallest singular value of the massless W on the sphere
    Riesz {
        #[arg(long, default_value_t = 32)]
        n_theta: usize,
    },
    /// Scan of d_{j+1/2} d_{j-1/2} < d_1 d_0 over a kappa grid
    ScanQues {
        #[arg(long, default_value = "0.1:5:0.1")]
        kappa_grid: String,
        #[arg(long, default_value_t = DEFAULT_J2_MAX)]
        jmax: u32,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Point {
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceKind {
    Sphere,
    Ellipsoid,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long, value_enum, default_value = "sphere")]
    pub surface: SurfaceKind,
    /// Ellipsoid semi-axes a,b,c
    #[arg(long, default_value = "1,1,1.5")]
    pub axes: String,
    #[arg(long, default_value_t = 32)]
    pub n_theta: usize,
}

impl SurfaceArgs {
    fn build(&self) -> Result<SurfacePatchization, Error> {
        match self.surface {
            SurfaceKind::Sphere => make_sphere(self.n_theta),
            SurfaceKind::Ellipsoid => make_ellipsoid(parse_axes(&self.axes)?, self.n_theta),
        }
    }

    fn describe(&self) -> Value {
        match self.surface {
            SurfaceKind::Sphere => json!({"kind": "sphere", "n_theta": self.n_theta}),
            SurfaceKind::Ellipsoid => json!({"kind": "ellipsoid", "axes": self.axes, "n_theta": self.n_theta}),
        }
    }
}

fn parse_axes(s: &str) -> Result<[f64; 3], Error> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::InvalidGrid(format!("axes {s:?}: {e}")))?;
    v.try_into().map_err(|_| Error::InvalidGrid(format!("axes {s:?}: expected three values")))
}

/// `lo:hi:step`, inclusive of `hi` up to rounding.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(Error::InvalidGrid(format!("{s:?} is not lo:hi:step")));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| Error::InvalidGrid(format!("{s:?}: {e}")));
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 {
        return Err(Error::InvalidGrid(format!("{s:?}: need finite bounds and step > 0")));
    }
    if hi < lo {
        return Err(Error::EmptyGrid);
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| round_sig(lo + step * i as f64)).collect())
}

/// Result of one invocation, before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub message: Option<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidMass(_)
        | Error::OutsideGap { .. }
        | Error::NotInterior { .. }
        | Error::NegativeKappa(_)
        | Error::InvalidMode { .. }
        | Error::InvalidLambda { .. }
        | Error::EmptyGrid
        | Error::InvalidGrid(_)
        | Error::Resolution(_)
        | Error::DegenerateSurface(_)
        | Error::CriticalCoupling { .. }
        | Error::EmptyScan(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

struct Report {
    params: Value,
    results: Value,
    diagnostics: Value,
    table: Table,
    failed: Option<Check>,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => output::document(self.params.clone(), self.results.clone(), self.diagnostics.clone()),
            Format::Csv => self.table.to_csv(),
        }
    }
}

fn f(x: f64) -> String {
    float_cell(x)
}

fn cmd_modes(p: Point, jmax: u32) -> Result<Report, Error> {
    let sp = SpectralParams::interior(p.m, p.a)?;
    if jmax % 2 == 0 {
        return Err(Error::InvalidMode { j2: jmax, mj2: 1 });
    }
    let table = mode_table(jmax, sp.kappa)?;
    let k2 = sp.kappa * sp.kappa;
    let mut csv = Table::new(&["j", "d_minus", "d_plus", "p_abs"]);
    let mut rows = vec![];
    let mut identity = 0.0f64;
    for c in &table {
        identity = identity.max((c.p_abs * c.p_abs + k2 * c.d_minus * c.d_plus - 0.25).abs());
        csv.push(vec![f(c.j()), f(c.d_minus), f(c.d_plus), f(c.p_abs)]);
        rows.push(json!({"j": c.j(), "d_minus": c.d_minus, "d_plus": c.d_plus, "p_abs": c.p_abs}));
    }
    let mp = min_p(sp.kappa, jmax)?;
    Ok(Report {
        params: json!({"m": p.m, "a": p.a, "kappa": sp.kappa, "jmax": jmax as f64 / 2.0}),
        results: Value::Array(rows),
        diagnostics: json!({
            "identity_residual": identity,
            "p_lower_bound": p_lower_bound(sp.kappa),
            "min_p": mp.value,
            "min_p_j": mp.j2_argmin as f64 / 2.0,
        }),
        table: csv,
        failed: None,
    })
}

fn cmd_curve(m: f64, j2: u32, sign: Sign, grid: &str) -> Result<Report, Error> {
    let grid = parse_grid(grid)?;
    let curve = trace_curve(m, j2, sign, &grid)?;
    let mut csv = Table::new(&["a", "lambda", "residual"]);
    let mut worst = 0.0f64;
    for s in &curve.samples {
        worst = worst.max(s.residual.abs());
        csv.push(vec![f(s.a), f(s.lambda), f(s.residual)]);
    }
    let ok = worst < CURVE_TOL;
    Ok(Report {
        params: json!({"m": m, "j": j2 as f64 / 2.0, "sign": sign, "points": grid.len()}),
        results: serde_json::to_value(&curve.samples).expect("serializable"),
        diagnostics: json!({"max_residual": worst, "tolerance": CURVE_TOL, "pass": ok}),
        table: csv,
        failed: (!ok).then_some(Check::CurveResidual),
    })
}

fn cmd_intervals(m: f64, j2: u32, sign: Option<Sign>) -> Result<Report, Error> {
    let signs = sign.map_or(vec![Sign::Plus, Sign::Minus], |s| vec![s]);
    let mut csv = Table::new(&["sign", "lo", "hi"]);
    let mut rows = vec![];
    for s in signs {
        let (lo, hi) = admissible_interval(m, j2, s)?;
        csv.push(vec![s.to_string(), f(lo), f(hi)]);
        rows.push(json!({"sign": s, "lo": lo, "hi": hi}));
    }
    Ok(Report {
        params: json!({"m": m, "j": j2 as f64 / 2.0}),
        results: Value::Array(rows),
        diagnostics: json!({}),
        table: csv,
        failed: None,
    })
}

fn cmd_eigen(p: Point, j2: u32, sign: Sign, lambda: Option<f64>) -> Result<Report, Error> {
    let sp = SpectralParams::interior(p.m, p.a)?;
    let (pos, neg) = solve_lambda(p.m, p.a, j2, sign)?;
    let res = |l: f64| condition_residual(&EigenQuery { m: p.m, a: p.a, lambda: l, j2, sign });
    let (r_pos, r_neg) = (res(pos)?, res(neg)?);
    let density = construct_eigendensity(j2, 1, sign, &sp, pos)?;
    let block = mode_block(j2, sign, &sp)?;
    let mut csv = Table::new(&["root", "lambda", "residual"]);
    csv.push(vec!["positive".into(), f(pos), f(r_pos)]);
    csv.push(vec!["negative".into(), f(neg), f(r_neg)]);
    let mut diagnostics = json!({
        "root_product": pos * neg,
        "partner_of_positive": isospectral_partner(pos)?,
        "density_f": [density.f_coeff.re, density.f_coeff.im],
        "mode_residual": density.mode_residual()?,
        "block_trace": block.trace().re,
        "block_det": block.determinant().re,
    });
    let mut failed = None;
    if let Some(l) = lambda {
        if l == 0.0 {
            return Err(Error::InvalidLambda { expected: "nonzero", got: l });
        }
        let r = res(l)?;
        // the quadratic's residual scales like lambda^2
        let ok = r.abs() <= CONDITION_TOL * (1.0 + l * l);
        diagnostics["query"] = json!({"lambda": l, "residual": r, "satisfied": ok});
        csv.push(vec!["query".into(), f(l), f(r)]);
        if !ok {
            failed = Some(Check::EigenCondition);
        }
    }
    Ok(Report {
        params: json!({"m": p.m, "a": p.a, "kappa": sp.kappa, "j": j2 as f64 / 2.0, "sign": sign}),
        results: json!({"lambda_pos": pos, "lambda_neg": neg, "residual_pos": r_pos, "residual_neg": r_neg}),
        diagnostics,
        table: csv,
        failed,
    })
}

fn cmd_surface(p: Point, lambda: f64, s: &SurfaceArgs) -> Result<Report, Error> {
    let sp = SpectralParams::new(p.m, p.a)?;
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidLambda { expected: "nonzero", got: lambda });
    }
    let surf = s.build()?;
    let c = assemble_c(&sp, &surf)?;
    let d = detect(&c, lambda)?;
    let verdict = if d.candidate { "eigenvalue candidate" } else { "no eigenvalue indicated" };
    let ok = d.jump_residual < JUMP_TOL;
    let mut csv = Table::new(&["sigma_min", "jump_residual", "norm", "threshold", "candidate"]);
    csv.push(vec![f(d.sigma_min), f(d.jump_residual), f(d.norm), f(d.threshold), d.candidate.to_string()]);
    Ok(Report {
        params: json!({"m": p.m, "a": p.a, "lambda": lambda, "surface": s.describe()}),
        results: json!({
            "sigma_min": d.sigma_min,
            "jump_residual": d.jump_residual,
            "norm": d.norm,
            "verdict": verdict,
        }),
        diagnostics: json!({
            "threshold": d.threshold,
            "candidate": d.candidate,
            "dimension": c.dim(),
            "degree": c.degree,
            "area": surf.area(),
            "jump_tolerance": JUMP_TOL,
        }),
        table: csv,
        failed: (!ok).then_some(Check::JumpResidual),
    })
}

fn cmd_confine(le: f64, ls: f64, check: bool, p: Point, s: &SurfaceArgs) -> Result<Report, Error> {
    let c = CouplingSpec::new(le, ls)?;
    let scalar = confinement_scalar(&c)?;
    let confining = is_confining(&c, DEFAULT_TOL)?;
    let selfadjoint = is_selfadjoint_regime(&c);
    let mut results = json!({"scalar": scalar, "confining": confining, "selfadjoint": selfadjoint});
    let mut diagnostics = json!({"discriminant": c.discriminant(), "tolerance": DEFAULT_TOL});
    let mut csv_row = vec![f(scalar), confining.to_string(), selfadjoint.to_string(), String::new()];
    let mut failed = None;
    if check {
        let sp = SpectralParams::new(p.m, p.a)?;
        let op = assemble_c(&sp, &s.build()?)?;
        let r = criterion_residual(&op, &LambdaSpec::Coupling(c))?;
        let jump = jump_residual(&op)?;
        // both residuals stem from the jump identity; this one is about a quarter of it
        let tol = jump.max(1e-10);
        results["residual"] = json!(r);
        diagnostics["jump_residual"] = json!(jump);
        diagnostics["residual_tolerance"] = json!(tol);
        diagnostics["surface"] = s.describe();
        csv_row[3] = f(r);
        if r > tol {
            failed = Some(Check::ConfinementResidual);
        }
    }
    let mut csv = Table::new(&["scalar", "confining", "selfadjoint", "residual"]);
    csv.push(csv_row);
    Ok(Report {
        params: json!({"lambda_e": le, "lambda_s": ls, "m": p.m, "a": p.a}),
        results,
        diagnostics,
        table: csv,
        failed,
    })
}

fn cmd_riesz(n_theta: usize) -> Result<Report, Error> {
    let surf = make_sphere(n_theta)?;
    let w = riesz_witness(&surf)?;
    let rel = (w - 0.5).abs() / 0.5;
    let ok = rel < RIESZ_REL_TOL;
    let (c1, c2) = riesz_constants();
    let mut csv = Table::new(&["n_theta", "witness", "relative_error"]);
    csv.push(vec![n_theta.to_string(), f(w), f(rel)]);
    Ok(Report {
        params: json!({"n_theta": n_theta}),
        results: json!({"witness": w, "constant_w": c1, "constant_r": c2}),
        diagnostics: json!({"relative_error": rel, "tolerance": RIESZ_REL_TOL, "pass": ok}),
        table: csv,
        failed: (!ok).then_some(Check::RieszWitness),
    })
}

fn cmd_scan(grid: &str, jmax: u32) -> Result<Report, Error> {
    let kappas = parse_grid(grid)?;
    let report = scan_question(&kappas, jmax)?;
    let mut csv = Table::new(&["kappa", "d0_d1", "max_ratio", "violations", "m_scan", "j_argmin", "m_formula"]);
    for e in &report.entries {
        csv.push(vec![
            f(e.kappa),
            f(e.d0_d1),
            f(e.max_ratio),
            e.violations.len().to_string(),
            f(e.m_scan),
            f(e.j2_argmin as f64 / 2.0),
            f(e.m_formula),
        ]);
    }
    let total = report.total_violations();
    let formula_gap =
        report.entries.iter().filter(|e| e.j2_argmin == 1).map(|e| (e.m_scan - e.m_formula).abs()).fold(0.0, f64::max);
    Ok(Report {
        params: json!({"kappa_grid": grid, "jmax": report.j2_max as f64 / 2.0}),
        results: serde_json::to_value(&report.entries).expect("serializable"),
        diagnostics: json!({"total_violations": total, "max_formula_gap": formula_gap}),
        table: csv,
        failed: (total > 0).then_some(Check::QuestionScan),
    })
}

fn dispatch(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Modes { point, jmax } => cmd_modes(*point, *jmax),
        Command::Curve { m, j, sign, a_grid } => cmd_curve(*m, *j, *sign, a_grid),
        Command::Intervals { m, j, sign } => cmd_intervals(*m, *j, *sign),
        Command::Eigen { point, j, sign, lambda } => cmd_eigen(*point, *j, *sign, *lambda),
        Command::Surface { point, lambda, surface } => cmd_surface(*point, *lambda, surface),
        Command::Confine { lambda_e, lambda_s, check_surface, point, surface } => {
            cmd_confine(*lambda_e, *lambda_s, *check_surface, *point, surface)
        }
        Command::Riesz { n_theta } => cmd_riesz(*n_theta),
        Command::ScanQues { kappa_grid, jmax } => cmd_scan(kappa_grid, *jmax),
    }
}

/// Run a parsed command line without touching stdout.
pub fn execute(cli: &Cli) -> Outcome {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Curve { .. } => Format::Csv,
        _ => Format::Json,
    });
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => return Outcome { code: exit_code(&e), output: String::new(), message: Some(format!("error: {e}")) },
    };
    let output = report.render(format);
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, &output) {
            return Outcome {
                code: EXIT_FAILURE,
                output: String::new(),
                message: Some(format!("error: cannot write {}: {e}", path.display())),
            };
        }
    }
    let (code, message) = match report.failed {
        Some(c) => (c as i32, Some(format!("check failed: {c:?}"))),
        None => (0, None),
    };
    Outcome { code, output: if cli.out.is_some() { String::new() } else { output }, message }
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return EXIT_USAGE;
        }
        // only fails if a pool already exists, which is harmless here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = execute(&cli);
    print!("{}", outcome.output);
    if let Some(m) = &outcome.message {
        eprintln!("{m}");
    }
    outcome.code
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
