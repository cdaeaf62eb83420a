//! `twostep`: load or select homogeneous spaces, run structural and geodesic
//! verification, and emit traces and machine-readable reports.
//!
//! Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
//! 2 = bad input, 3 = numerical breakdown.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twostep_core::catalog::CatalogError;
use twostep_core::geodesic::GeodesicError;
use twostep_core::lie::{AlgebraVector, LieError};
use twostep_core::preset;
use twostep_core::report::{CheckEntry, ReportConfig, VerificationReport};
use twostep_core::schema::{self, SchemaError};
use twostep_core::space::SpaceError;
use twostep_core::{
    coset_distance, integrate_geodesic, linspace, verify_two_step, HomogeneousSpace, Tolerances,
    TwoStepCurve, VerifyConfig, DEFAULT_RK_STEP,
};

#[derive(Parser)]
#[command(
    name = "twostep",
    about = "Homogeneous spaces, deformed invariant metrics and two-step geodesic verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArgs {
    /// Preset string (see `twostep catalog`) or path to a JSON space file.
    #[arg(long)]
    space: String,
    /// Override the deformation parameter λ of the last split member.
    #[arg(long)]
    lambda: Option<f64>,
    /// Tolerance for algebraic identities.
    #[arg(long, env = "TWOSTEP_TOL_ALG", default_value_t = 1e-9)]
    tol_alg: f64,
    /// Tolerance for coset-level oracle comparisons.
    #[arg(long, env = "TWOSTEP_TOL_ODE", default_value_t = 1e-6)]
    tol_ode: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (json for reports, csv for traces).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List the named presets and their parameter grammars.
    Catalog,
    /// Print the structural summary of a space, including the documented
    /// m-basis ordering used by --Xa/--Xb/--v0.
    Describe {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Run the structural checks and write a JSON report.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the randomized two-step verification battery.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Number of random curves.
        #[arg(long, default_value_t = 20)]
        trials: u32,
        /// Time samples per curve in [0, 2π].
        #[arg(long = "samples", default_value_t = 50)]
        t_samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// RK4 oracle step.
        #[arg(long, default_value_t = DEFAULT_RK_STEP)]
        step: f64,
    },
    /// Sample the closed-form curve and its geodesic defect along a time
    /// grid; CSV columns: t, defect components over the m-basis, coset_error.
    Trace {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Coefficients of X_a over the first split member's basis.
        #[arg(long = "Xa", value_name = "C1,C2,...")]
        xa: String,
        /// Coefficients of X_b over the second split member's basis.
        #[arg(long = "Xb", value_name = "C1,C2,...")]
        xb: String,
        /// Time grid start:end:count.
        #[arg(long = "t", default_value = "0:6.283185307179586:100")]
        t_grid: String,
        /// Also integrate the RK4 oracle and fill the coset_error column.
        #[arg(long)]
        with_oracle: bool,
        #[arg(long, default_value_t = DEFAULT_RK_STEP)]
        step: f64,
    },
    /// Integrate the geodesic ODE and write the trajectory; CSV columns:
    /// t, body-velocity components over the m-basis, then the group element
    /// entries (re, im) in row-major order.
    Oracle {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Coefficients of the initial velocity over the m-basis.
        #[arg(long)]
        v0: String,
        #[arg(long = "t-end", default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = DEFAULT_RK_STEP)]
        step: f64,
        /// Emit every n-th step.
        #[arg(long, default_value_t = 100)]
        stride: usize,
    },
}

enum CliError {
    Input(String),
    MathCheck(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::MathCheck(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::MathCheck(m) | CliError::Numerical(m) => m,
        }
    }
}

fn lie_error(e: &LieError) -> CliError {
    match e {
        LieError::OutOfLogWindow { .. } | LieError::NotInAlgebra { .. } => {
            CliError::Numerical(e.to_string())
        }
        _ => CliError::Input(e.to_string()),
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match &e {
            CatalogError::ConditionViolated { .. } => CliError::MathCheck(e.to_string()),
            CatalogError::Root(twostep_core::root::RootError::InconsistentRealization {
                ..
            }) => CliError::MathCheck(e.to_string()),
            CatalogError::Lie(le) => lie_error(le),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        match &e {
            SchemaError::Lie(le) => lie_error(le),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GeodesicError> for CliError {
    fn from(e: GeodesicError) -> Self {
        match &e {
            GeodesicError::ConditionViolated { .. } | GeodesicError::DegenerateSplit => {
                CliError::MathCheck(e.to_string())
            }
            GeodesicError::StepTooLarge { .. } => CliError::Numerical(e.to_string()),
            GeodesicError::Lie(le) => lie_error(le),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn looks_like_path(text: &str) -> bool {
    text.contains('/') || text.ends_with(".json") || Path::new(text).exists()
}

fn resolve_space(args: &SpaceArgs) -> Result<HomogeneousSpace, CliError> {
    if let Some(lambda) = args.lambda {
        if !(lambda > 0.0) {
            return Err(CliError::Input(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
    }
    if looks_like_path(&args.space) {
        let space = schema::load_space(Path::new(&args.space))?;
        match args.lambda {
            None => Ok(space),
            Some(lambda) => {
                let mut lambdas = space.lambdas.clone();
                *lambdas.last_mut().expect("split is nonempty") = lambda;
                Ok(HomogeneousSpace::new(
                    space.algebra.clone(),
                    space.k.clone(),
                    space.split.clone(),
                    lambdas,
                    &space.name,
                )?)
            }
        }
    } else {
        let mut p = preset::parse(&args.space)?;
        if let Some(lambda) = args.lambda {
            p = p.with_lambda(lambda);
        }
        Ok(p.build()?)
    }
}

fn write_output(output: &OutputArgs, default_format: &str, content: &str) -> Result<(), CliError> {
    if let Some(format) = &output.format {
        if format != default_format {
            return Err(CliError::Input(format!(
                "this command writes {default_format}, not '{format}'"
            )));
        }
    }
    match &output.out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_coeffs(text: &str, expected: usize, what: &str) -> Result<AlgebraVector, CliError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let values =
        values.map_err(|_| CliError::Input(format!("{what} = '{text}' is not a list of reals")))?;
    if values.len() != expected {
        return Err(CliError::Input(format!(
            "{what} has {} coefficients, expected {expected}",
            values.len()
        )));
    }
    Ok(AlgebraVector::from_slice(&values))
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!(
            "time grid '{text}' must be start:end:count"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Input(format!("bad grid start '{}'", parts[0])))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Input(format!("bad grid end '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Input(format!("bad grid count '{}'", parts[2])))?;
    if count == 0 {
        return Err(CliError::Input("grid count must be ≥ 1".into()));
    }
    Ok(linspace(start, end, count))
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Catalog => {
            println!("available presets:");
            for (name, grammar) in preset::listing() {
                println!("  {name:<12} {grammar}");
            }
            Ok(0)
        }
        Command::Describe { space } => {
            let s = resolve_space(&space)?;
            print!("{}", describe(&s, space.tol_alg));
            Ok(0)
        }
        Command::Check { space, output } => {
            let s = resolve_space(&space)?;
            let checks = s.structural_checks(space.tol_alg);
            let report = check_report(&s, checks.clone(), &space);
            write_output(&output, "json", &(report.to_json() + "\n"))?;
            for c in &checks {
                eprintln!(
                    "{:<28} residual {:>12.3e}  tol {:>8.1e}  {}",
                    c.name,
                    c.max_residual,
                    c.tolerance,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            if s.is_degenerate() {
                eprintln!("degenerate split: single member, no deformation axis");
                return Ok(1);
            }
            Ok(if checks.iter().all(|c| c.pass) { 0 } else { 1 })
        }
        Command::Verify {
            space,
            output,
            trials,
            t_samples,
            seed,
            step,
        } => {
            let s = resolve_space(&space)?;
            let cfg = VerifyConfig {
                trials,
                t_samples,
                seed,
                pair: (0, 1),
                rk_step: step,
                tol: Tolerances::default()
                    .with_tol_alg(space.tol_alg)
                    .with_tol_ode(space.tol_ode),
            };
            let report = verify_two_step(&s, &cfg)?;
            write_output(&output, "json", &(report.to_json() + "\n"))?;
            for c in &report.checks {
                eprintln!(
                    "{:<28} residual {:>12.3e}  tol {:>8.1e}  {}",
                    c.name,
                    c.max_residual,
                    c.tolerance,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Trace {
            space,
            output,
            xa,
            xb,
            t_grid,
            with_oracle,
            step,
        } => {
            let s = resolve_space(&space)?;
            if s.is_degenerate() {
                return Err(CliError::MathCheck(
                    "degenerate split: nothing to trace".into(),
                ));
            }
            let xa_local = parse_coeffs(&xa, s.split[0].dim(), "--Xa")?;
            let xb_local = parse_coeffs(&xb, s.split[1].dim(), "--Xb")?;
            let mut x_a = AlgebraVector::zeros(s.algebra.dim());
            for i in 0..s.split[0].dim() {
                x_a = &x_a + &s.split[0].basis_vector(i).scale(xa_local.coeffs[i]);
            }
            let mut x_b = AlgebraVector::zeros(s.algebra.dim());
            for i in 0..s.split[1].dim() {
                x_b = &x_b + &s.split[1].basis_vector(i).scale(xb_local.coeffs[i]);
            }
            let curve = TwoStepCurve::new(&s, 0, 1, x_a, x_b, space.tol_alg)?;
            let ts = parse_grid(&t_grid)?;
            let csv = trace_csv(&s, &curve, &ts, with_oracle, step, space.tol_alg)?;
            write_output(&output, "csv", &csv)?;
            Ok(0)
        }
        Command::Oracle {
            space,
            output,
            v0,
            t_end,
            step,
            stride,
        } => {
            let s = resolve_space(&space)?;
            if !(t_end > 0.0) || !(step > 0.0) {
                return Err(CliError::Input("t-end and step must be positive".into()));
            }
            let v_local = parse_coeffs(&v0, s.dim_m(), "--v0")?;
            let v = s.from_m_coeffs(&v_local.coeffs);
            let samples = integrate_geodesic(&s, &v, t_end, step, stride, space.tol_ode)?;
            let mut csv = String::from("t");
            for i in 0..s.dim_m() {
                write!(csv, ",x{i}").unwrap();
            }
            let n = s.algebra.ambient_dim();
            for r in 0..n {
                for c in 0..n {
                    write!(csv, ",g{r}{c}_re,g{r}{c}_im").unwrap();
                }
            }
            csv.push('\n');
            for sample in &samples {
                write!(csv, "{:.15e}", sample.t).unwrap();
                let xc = s.m_coeffs(&sample.velocity);
                for value in xc.iter() {
                    write!(csv, ",{value:.15e}").unwrap();
                }
                for z in sample.g.matrix.transpose().iter() {
                    write!(csv, ",{:.15e},{:.15e}", z.re, z.im).unwrap();
                }
                csv.push('\n');
            }
            write_output(&output, "csv", &csv)?;
            Ok(0)
        }
    }
}

fn check_report(s: &HomogeneousSpace, checks: Vec<CheckEntry>, args: &SpaceArgs) -> VerificationReport {
    VerificationReport {
        space: s.name.clone(),
        seed: 0,
        trials: 0,
        assumed_connected: true,
        config: ReportConfig {
            lambdas: s.lambdas.clone(),
            pair: [0, if s.split.len() > 1 { 1 } else { 0 }],
            t_samples: 0,
            rk_step: 0.0,
            tol_alg: args.tol_alg,
            tol_ode: args.tol_ode,
            tol_defect: Tolerances::default().tol_defect,
        },
        checks,
    }
}

fn describe(s: &HomogeneousSpace, tol_alg: f64) -> String {
    let mut out = String::new();
    writeln!(out, "space: {}", s.name).unwrap();
    writeln!(
        out,
        "algebra: dim g = {}, ambient {n}×{n}, form {:?}",
        s.algebra.dim(),
        s.algebra.form(),
        n = s.algebra.ambient_dim()
    )
    .unwrap();
    writeln!(out, "isotropy: dim k = {}", s.dim_k()).unwrap();
    let split_dims = s
        .split
        .iter()
        .map(|m| m.dim().to_string())
        .collect::<Vec<_>>()
        .join(",");
    let lambdas = s
        .lambdas
        .iter()
        .map(|l| format!("{l}"))
        .collect::<Vec<_>>()
        .join(",");
    writeln!(
        out,
        "tangent: dim m = {}, split ({split_dims}), λ = ({lambdas})",
        s.dim_m()
    )
    .unwrap();
    writeln!(out, "degenerate: {}", s.is_degenerate()).unwrap();
    writeln!(out, "structural checks:").unwrap();
    for c in s.structural_checks(tol_alg) {
        writeln!(
            out,
            "  {:<28} residual {:>12.3e}  tol {:>8.1e}  {}",
            c.name,
            c.max_residual,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(out, "m-basis (coefficients over the algebra basis):").unwrap();
    let mut index = 0usize;
    for (b, member) in s.split.iter().enumerate() {
        for i in 0..member.dim() {
            let v = member.basis_vector(i);
            let coeffs = v
                .coeffs
                .iter()
                .map(|c| format!("{c:.4}"))
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(out, "  [{index:>2}] m{} {:<16} [{coeffs}]", b + 1, member.label()).unwrap();
            index += 1;
        }
    }
    out
}

fn trace_csv(
    s: &HomogeneousSpace,
    curve: &TwoStepCurve,
    ts: &[f64],
    with_oracle: bool,
    step: f64,
    tol_alg: f64,
) -> Result<String, CliError> {
    let oracle_samples = if with_oracle {
        let t_end = ts.iter().cloned().fold(0.0_f64, f64::max).max(step);
        Some(integrate_geodesic(
            s,
            &curve.initial_velocity(),
            t_end,
            step,
            1,
            Tolerances::default().tol_ode,
        )?)
    } else {
        None
    };
    let mut csv = String::from("t");
    for i in 0..s.dim_m() {
        write!(csv, ",d{i}").unwrap();
    }
    csv.push_str(",coset_error\n");
    for &t in ts {
        write!(csv, "{t:.15e}").unwrap();
        let defect = curve.geodesic_defect(t);
        for value in s.m_coeffs(&defect).iter() {
            write!(csv, ",{value:.15e}").unwrap();
        }
        match &oracle_samples {
            None => csv.push(','),
            Some(samples) => {
                let nearest = samples
                    .iter()
                    .min_by(|p, q| {
                        (p.t - t).abs().partial_cmp(&(q.t - t).abs()).unwrap()
                    })
                    .expect("oracle samples are nonempty");
                let err = coset_distance(s, &curve.point(nearest.t), &nearest.g, tol_alg)?;
                write!(csv, ",{err:.15e}").unwrap();
            }
        }
        csv.push('\n');
    }
    Ok(csv)
}
