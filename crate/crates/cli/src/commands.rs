//! Subcommand definitions and their implementations.
//!
//! Every command parses and solves before touching the output directory, so
//! an input or solver error leaves no files behind. Standard output carries
//! exactly one value per command; diagnostics go to standard error.

use std::path::{Path, PathBuf};

use cheeger_core::cheeger_grid::{cheeger_grid_polygon, GridOptions};
use cheeger_core::shape_derivative::{derivative_report, DerivativeReport, QuadratureRule};
use cheeger_core::validation::{validate_derivative, Backend, FDConfig, ValidationReport};
use cheeger_core::{cheeger_convex, CheegerResult, Point2, Polygon, PolynomialVectorField};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{exit, CliError};
use crate::output::{format_significant, write_csv};
use crate::spec::{DomainSpec, FieldSpec};
use crate::svg;

#[derive(Debug, Parser)]
#[command(
    name = "cheeger",
    version,
    about = "Cheeger constants and their shape derivatives"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cheeger constant and Cheeger set of a domain.
    Cheeger(CheegerArgs),
    /// Shape derivative of the Cheeger constant along a vector field.
    ShapeDeriv(ShapeDerivArgs),
    /// Finite-difference check of the shape derivative.
    Validate(ValidateArgs),
    /// Derivative of the constant of a polygonal disk along divergence-free fields.
    BallCriticality(BallArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Exact,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormulaKind {
    General,
    Smooth,
    Both,
}

impl FormulaKind {
    fn name(self) -> &'static str {
        match self {
            FormulaKind::General => "general",
            FormulaKind::Smooth => "smooth",
            FormulaKind::Both => "both",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct OutDir {
    /// Directory for output files (created if missing).
    #[arg(long, env = "CHEEGER_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct GridArgs {
    /// Grid spacing of the raster solver.
    #[arg(long, default_value_t = 1.0 / 128.0)]
    pub h: f64,
    /// Dinkelbach iterations of the raster solver.
    #[arg(long, default_value_t = 40)]
    pub max_outer: usize,
    /// Primal-dual iterations per Dinkelbach step.
    #[arg(long, default_value_t = 5000)]
    pub max_inner: usize,
    /// Relative duality-gap tolerance of the inner solve.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

impl GridArgs {
    pub fn options(&self) -> GridOptions {
        GridOptions {
            h: self.h,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            tol: self.tol,
            ..GridOptions::default()
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct CheegerArgs {
    /// Domain JSON file.
    pub domain: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub solver: SolverKind,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Clone, Debug, Args)]
pub struct ShapeDerivArgs {
    /// Domain JSON file.
    pub domain: PathBuf,
    /// Field JSON file.
    pub field: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub formula: FormulaKind,
    #[arg(long, value_enum, default_value = "exact")]
    pub solver: SolverKind,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Clone, Debug, Args)]
pub struct ValidateArgs {
    /// Domain JSON file.
    pub domain: PathBuf,
    /// Field JSON file.
    pub field: PathBuf,
    /// Largest finite-difference step.
    #[arg(long, default_value_t = 1e-2)]
    pub t0: f64,
    /// Number of halvings of the step (Richardson levels).
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: SolverKind,
    /// Boundary points before mapping by a non-affine field.
    #[arg(long, default_value_t = 2048)]
    pub resample: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Clone, Debug, Args)]
pub struct BallArgs {
    /// Number of vertices of the polygonal unit disk.
    #[arg(long, default_value_t = 256)]
    pub ngon: usize,
    /// Additional divergence-free field (JSON file).
    #[arg(long)]
    pub field: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutDir,
}

/// What a successful (or cleanly failing) command prints and exits with.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            code: exit::SUCCESS,
        }
    }

    fn verdict(pass: bool) -> Self {
        if pass {
            Self::ok("PASS".into())
        } else {
            Self {
                stdout: "FAIL".into(),
                code: exit::FAIL,
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Cheeger(args) => cmd_cheeger(&args),
        Command::ShapeDeriv(args) => cmd_shape_deriv(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::BallCriticality(args) => cmd_ball_criticality(&args),
    }
}

fn solve(
    polygon: &Polygon,
    solver: SolverKind,
    grid: &GridArgs,
) -> Result<CheegerResult, CliError> {
    match solver {
        SolverKind::Exact => Ok(cheeger_convex(polygon)?),
        SolverKind::Grid => Ok(cheeger_grid_polygon(polygon, &grid.options())?.result),
    }
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(e, &dir.display().to_string()))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::write(dir.join(name), contents).map_err(|e| CliError::io(e, name))
}

/// Shortest decimal that parses back to the same `f64`; scientific
/// notation for very small or large magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn cmd_cheeger(args: &CheegerArgs) -> Result<Outcome, CliError> {
    let polygon = DomainSpec::load(&args.domain)?.to_polygon()?;
    let res = solve(&polygon, args.solver, &args.grid)?;
    if res.diagnostics.possible_non_uniqueness {
        eprintln!(
            "note: two level sets reach nearly the same ratio; the Cheeger set may not be unique"
        );
    }

    let dir = &args.out.out_dir;
    prepare_dir(dir)?;
    let rows = vec![vec![
        num(res.lambda),
        num(res.radius),
        num(res.set_area),
        num(res.set_perimeter),
        res.solver_tag.as_str().to_string(),
        res.diagnostics.iterations.to_string(),
    ]];
    write_csv(
        &dir.join("result.csv"),
        &[
            "lambda",
            "radius",
            "set_area",
            "set_perimeter",
            "solver",
            "iterations",
        ],
        &rows,
    )?;
    write_file(dir, "set.svg", &svg::render(&polygon, &res.cheeger_set))?;
    Ok(Outcome::ok(format_significant(res.lambda, 12)))
}

pub fn cmd_shape_deriv(args: &ShapeDerivArgs) -> Result<Outcome, CliError> {
    let polygon = DomainSpec::load(&args.domain)?.to_polygon()?;
    let field = FieldSpec::load(&args.field)?.to_field()?;
    let res = solve(&polygon, args.solver, &args.grid)?;
    let report: DerivativeReport = derivative_report(
        &res.cheeger_set,
        res.lambda,
        &field,
        &QuadratureRule::default(),
    )?;

    let primary = match (args.formula, report.value_smooth) {
        (FormulaKind::Smooth, None) => {
            // Reproduce the precondition error of the smooth formula.
            let (piece, angle) = res
                .cheeger_set
                .first_corner(1e-9)
                .expect("smooth value is missing only on regions with corners");
            return Err(cheeger_core::Error::Corner { piece, angle }.into());
        }
        (FormulaKind::Smooth, Some(v)) => v,
        (_, _) => report.value_general,
    };
    if args.formula == FormulaKind::Both && report.value_smooth.is_none() {
        eprintln!("note: the Cheeger set has corners; the curvature formula does not apply and value_smooth is left empty");
    }
    let (general, smooth) = match args.formula {
        FormulaKind::General => (Some(report.value_general), None),
        FormulaKind::Smooth => (None, report.value_smooth),
        FormulaKind::Both => (Some(report.value_general), report.value_smooth),
    };

    let dir = &args.out.out_dir;
    prepare_dir(dir)?;
    write_csv(
        &dir.join("deriv.csv"),
        &[
            "formula",
            "value_general",
            "value_smooth",
            "lambda",
            "set_area",
        ],
        &[vec![
            args.formula.name().to_string(),
            opt_num(general),
            opt_num(smooth),
            num(report.lambda),
            num(report.area),
        ]],
    )?;
    Ok(Outcome::ok(num(primary)))
}

fn backend(kind: SolverKind, grid: &GridArgs) -> Backend {
    match kind {
        SolverKind::Exact => Backend::Exact,
        SolverKind::Grid => Backend::Grid(grid.options()),
    }
}

/// Rows of `validate.csv`: one per evaluated step, then a summary row at
/// `t = 0` holding the base value and the extrapolated comparison.
pub fn validation_rows(report: &ValidationReport) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = report
        .samples
        .iter()
        .map(|s| {
            let slope = report
                .central_slopes
                .iter()
                .find(|c| c.t == s.t.abs())
                .map(|c| c.slope);
            vec![
                num(s.t),
                num(s.lambda),
                opt_num(slope),
                String::new(),
                String::new(),
                num((s.lambda - report.base_lambda).abs()),
            ]
        })
        .collect();
    rows.push(vec![
        num(0.0),
        num(report.base_lambda),
        num(report.fd_slope),
        num(report.richardson_slope),
        num(report.formula_value),
        num(report.continuity_gap),
    ]);
    rows
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<Outcome, CliError> {
    let polygon = DomainSpec::load(&args.domain)?.to_polygon()?;
    let field = FieldSpec::load(&args.field)?.to_field()?;
    let cfg = FDConfig {
        t0: args.t0,
        levels: args.levels,
        resample_n: args.resample,
        backend: backend(args.backend, &args.grid),
    };
    let report = validate_derivative(&polygon, &field, &cfg)?;
    eprintln!(
        "formula {} richardson {} |diff| {:.3e} tolerance {:.3e}",
        report.formula_value,
        report.richardson_slope,
        (report.richardson_slope - report.formula_value).abs(),
        report.tolerance
    );

    let dir = &args.out.out_dir;
    prepare_dir(dir)?;
    write_csv(
        &dir.join("validate.csv"),
        &[
            "t",
            "lambda_t",
            "slope_level",
            "richardson",
            "formula",
            "gap",
        ],
        &validation_rows(&report),
    )?;
    Ok(Outcome::verdict(report.pass))
}

/// Built-in divergence-free battery: rotation, `(y, x)` and `(y^2, x^2)`.
pub fn criticality_battery() -> Vec<(String, PolynomialVectorField)> {
    let swap =
        PolynomialVectorField::from_terms(&[(0, 1, 1.0)], &[(1, 0, 1.0)]).expect("static field");
    let squares =
        PolynomialVectorField::from_terms(&[(0, 2, 1.0)], &[(2, 0, 1.0)]).expect("static field");
    vec![
        ("rotation".into(), PolynomialVectorField::rotation()),
        ("swap".into(), swap),
        ("squares".into(), squares),
    ]
}

/// Magnitude bound on formula values and finite-difference slopes.
pub const CRITICALITY_TOL: f64 = 1e-3;

/// One row of the ball-criticality report.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalityRow {
    pub field: String,
    pub formula: f64,
    pub fd_slope: f64,
}

impl CriticalityRow {
    pub fn pass(&self) -> bool {
        self.formula.abs() <= CRITICALITY_TOL && self.fd_slope.abs() <= CRITICALITY_TOL
    }
}

/// Formula values and extrapolated finite-difference slopes on the
/// `ngon`-gon inscribed in the unit circle. Only the vertices are mapped,
/// so images under nonlinear fields stay convex.
pub fn ball_criticality(
    ngon: usize,
    fields: &[(String, PolynomialVectorField)],
) -> Result<Vec<CriticalityRow>, CliError> {
    if ngon < 3 {
        return Err(CliError::input("--ngon must be at least 3"));
    }
    let disk = Polygon::regular(ngon, 1.0, Point2::ORIGIN)?;
    let cfg = FDConfig {
        resample_n: ngon.max(64),
        ..FDConfig::default()
    };
    fields
        .iter()
        .map(|(name, field)| {
            let report = validate_derivative(&disk, field, &cfg)?;
            Ok(CriticalityRow {
                field: name.clone(),
                formula: report.formula_value,
                fd_slope: report.richardson_slope,
            })
        })
        .collect()
}

pub fn cmd_ball_criticality(args: &BallArgs) -> Result<Outcome, CliError> {
    let mut fields = criticality_battery();
    if let Some(path) = &args.field {
        let field = FieldSpec::load(path)?.to_field()?;
        if !field.is_divergence_free() {
            return Err(CliError::input("the supplied field is not divergence-free"));
        }
        fields.push(("user".into(), field));
    }
    let rows = ball_criticality(args.ngon, &fields)?;
    let pass = rows.iter().all(CriticalityRow::pass);

    let dir = &args.out.out_dir;
    prepare_dir(dir)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.field.clone(),
                num(r.formula),
                num(r.fd_slope),
                if r.pass() { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("criticality.csv"),
        &["field", "formula", "fd_slope", "status"],
        &table,
    )?;
    Ok(Outcome::verdict(pass))
}
