//! Command-line surface: invariant scans, reconstruction from curvature,
//! extremality checks, classification against the constant-curvature
//! catalogs, and graph recovery through the Abel reductions.
//!
//! Exit codes: 0 success, 1 usage errors, 2 domain errors (with a JSON error
//! report on stdout), 3 integrator failures.

mod svg;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gacurves::abel::{abel_solve, AbelProblem, Reduction};
use gacurves::classify::{
    classify_plane_constant, classify_projective_constant, classify_space_constant,
    verify_catalog,
};
use gacurves::curve::{uniform_grid, CurveSpec, SampleGrid};
use gacurves::error::Error;
use gacurves::expr::{Bindings, Expr};
use gacurves::extremal::{
    equiaffine_space_extremal_check, ga_plane_general_residual, ga_plane_residual,
    ga_space_residuals, linear_complex_extremal_check, projective_plane_residual,
    projective_space_residuals, CurvatureFunctionalSpec, ResidualReport,
};
use gacurves::plane::{records_to_csv as plane_csv, scan_plane, EventKind};
use gacurves::reconstruct::{reconstruct, CurvatureProfile, ProfileFn, ProfileKind};
use gacurves::space::{records_to_csv as space_csv, scan_space};

use svg::{project3, MarkKind, SvgFigure};

#[derive(Parser)]
#[command(
    name = "gacurves",
    about = "General-affine, equiaffine and projective invariants of plane and space curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a curve and export its invariant records and events.
    Invariants(InvariantsArgs),
    /// Integrate a curve from prescribed curvature data.
    Reconstruct(ReconstructArgs),
    /// Evaluate an extremality equation on a curvature profile.
    Extremal(ExtremalArgs),
    /// Match constant curvature data against the catalogs.
    Classify(ClassifyArgs),
    /// Recover a graph immersion through an Abel reduction.
    Abel(AbelArgs),
    /// Run the catalog self-verification.
    VerifyCatalog(OutputArgs),
}

#[derive(Args, Clone)]
struct CurveSource {
    /// Builtin curve name (see the README for the catalog).
    #[arg(long)]
    builtin: Option<String>,
    /// Parametric coordinates, e.g. "(cos(t), sin(t))".
    #[arg(long)]
    expr: Option<String>,
    /// First coordinate expression (alternative to --expr).
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<String>,
    /// Second coordinate expression.
    #[arg(long, allow_hyphen_values = true)]
    x2: Option<String>,
    /// Third coordinate expression (space curves).
    #[arg(long, allow_hyphen_values = true)]
    x3: Option<String>,
    /// CSV file of samples with header t,x1,x2[,x3].
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Parameter bindings name=value (repeatable).
    #[arg(long = "param", value_parser = parse_binding)]
    params: Vec<(String, f64)>,
    /// Expected dimension (validated against the source).
    #[arg(long)]
    dim: Option<usize>,
    /// Reverse the curve orientation (the parameter substitution u = -t).
    #[arg(long)]
    reverse: bool,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path (stdout when omitted; resolved against GACURVES_OUT_DIR
    /// if that variable is set and the path is relative).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantsArgs {
    #[command(flatten)]
    source: CurveSource,
    /// Evaluation grid lo:hi:n (defaults to the curve interval with n=200).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
    /// View azimuth in degrees for the SVG projection of space curves.
    #[arg(long, default_value_t = 30.0)]
    view_azimuth: f64,
    /// View elevation in degrees for the SVG projection of space curves.
    #[arg(long, default_value_t = 25.0)]
    view_elevation: f64,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Plane reconstruction from (k, eps).
    #[arg(long, conflicts_with = "space")]
    plane: bool,
    /// Space reconstruction from (k, M, eps).
    #[arg(long)]
    space: bool,
    /// Curvature k as an expression in t (the GA arc length).
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    /// Second curvature M (space only).
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<String>,
    /// Sign eps (+1 or -1).
    #[arg(long, allow_hyphen_values = true)]
    eps: i8,
    /// Arc-length window and sample count lo:hi:n.
    #[arg(long, default_value = "0:2:200", allow_hyphen_values = true)]
    grid: String,
    /// Roundtrip tolerance override (defaults to the module value:
    /// 1e-6 plane / 1e-5 space, 1e-4 for sampled profiles).
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, default_value_t = 30.0)]
    view_azimuth: f64,
    #[arg(long, default_value_t = 25.0)]
    view_elevation: f64,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Equation: ga-plane | ga-plane-general | ga-space | linear-complex |
    /// equiaffine-space | proj-plane | proj-space.
    #[arg(long)]
    equation: String,
    /// Curvature profile k (expression in t).
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Second curvature M (ga-space).
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<String>,
    /// Second projective curvature (proj-space).
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<String>,
    /// Functional integrand f(k) (ga-plane-general).
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    eps: i8,
    /// Evaluation grid lo:hi:n.
    #[arg(long, default_value = "0:2:101", allow_hyphen_values = true)]
    grid: String,
    /// Verdict tolerance override (defaults to the scaled module tolerance).
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    source: CurveSource,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, conflicts_with_all = ["space", "projective"])]
    plane: bool,
    #[arg(long, conflicts_with = "projective")]
    space: bool,
    #[arg(long)]
    projective: bool,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<i8>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct AbelArgs {
    /// Curvature as an expression in the variable t = mu (or a constant).
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    #[arg(long, allow_hyphen_values = true)]
    eps: i8,
    /// Reduction: first | second.
    #[arg(long, default_value = "first")]
    reduction: String,
    #[arg(long)]
    x0: f64,
    #[arg(long, allow_hyphen_values = true)]
    s0: f64,
    /// Integration window lo:hi in x (x > 0).
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Number of output samples.
    #[arg(long, default_value_t = 201)]
    n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("bad numeric value in `{s}`"))?;
    Ok((name.trim().to_string(), v))
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::EmptyInput(format!("grid must be lo:hi:n, got `{s}`")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::EmptyInput(format!("bad grid bound `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::EmptyInput(format!("bad grid bound `{}`", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::EmptyInput(format!("bad grid count `{}`", parts[2])))?;
    if n < 2 || hi <= lo {
        return Err(Error::EmptyInput("grid needs n >= 2 and hi > lo".to_string()));
    }
    Ok((lo, hi, n))
}

fn parse_window(s: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::EmptyInput(format!("window must be lo:hi, got `{s}`")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::EmptyInput("bad window bound".into()))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::EmptyInput("bad window bound".into()))?;
    Ok((lo, hi))
}

fn bindings_of(params: &[(String, f64)]) -> Bindings {
    params.iter().cloned().collect::<BTreeMap<_, _>>()
}

impl CurveSource {
    fn build(&self) -> Result<CurveSpec, Error> {
        let mut spec = if let Some(name) = &self.builtin {
            CurveSpec::builtin(name, &bindings_of(&self.params))?
        } else if let Some(src) = &self.expr {
            let exprs = Expr::parse_coordinates(src)?;
            CurveSpec::from_exprs_with_params(
                exprs,
                bindings_of(&self.params),
                (0.0, 2.0 * std::f64::consts::PI),
            )?
        } else if self.x1.is_some() || self.x2.is_some() {
            let mut exprs = Vec::new();
            for coord in [&self.x1, &self.x2, &self.x3].into_iter().flatten() {
                exprs.push(Expr::parse(coord)?);
            }
            if self.x1.is_none() || self.x2.is_none() {
                return Err(Error::EmptyInput(
                    "per-coordinate input needs at least --x1 and --x2".into(),
                ));
            }
            CurveSpec::from_exprs_with_params(
                exprs,
                bindings_of(&self.params),
                (0.0, 2.0 * std::f64::consts::PI),
            )?
        } else if let Some(path) = &self.samples {
            let text = std::fs::read_to_string(path)?;
            CurveSpec::from_samples(SampleGrid::from_csv(&text)?)?
        } else {
            return Err(Error::EmptyInput(
                "one of --builtin, --expr or --samples is required".into(),
            ));
        };
        if let Some(dim) = self.dim {
            if dim != spec.dim {
                return Err(Error::EmptyInput(format!(
                    "--dim {dim} does not match the {}-coordinate source",
                    spec.dim
                )));
            }
        }
        if self.reverse {
            spec = spec.reverse_orientation();
        }
        Ok(spec)
    }
}

/// Usage mistakes exit 1, integration failures 3, other domain errors 2.
fn exit_code_of(err: &Error) -> u8 {
    match err {
        Error::EmptyInput(_)
        | Error::Lex { .. }
        | Error::Parse { .. }
        | Error::UnknownFunction { .. }
        | Error::UnboundSymbol(_)
        | Error::Io(_) => 1,
        Error::IntegratorFailure { .. } | Error::AbelSingular { .. } => 3,
        _ => 2,
    }
}

fn write_output(out: &OutputArgs, content: &str) -> Result<(), Error> {
    match &out.output {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
        Some(path) => {
            let resolved = match std::env::var_os("GACURVES_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(resolved, content)?;
            Ok(())
        }
    }
}

fn residual_json(r: &ResidualReport) -> Value {
    json!({
        "equation": r.equation,
        "sup_norm": r.sup_norm,
        "l2_norm": r.l2_norm,
        "verdict": r.extremal,
        "tolerance": r.tolerance,
    })
}

fn override_tolerance(r: &mut ResidualReport, tol: Option<f64>) {
    if let Some(t) = tol {
        r.tolerance = t;
        r.extremal = r.sup_norm <= t;
    }
}

fn cmd_invariants(args: &InvariantsArgs) -> Result<(), Error> {
    let mut spec = args.source.build()?;
    let grid = match &args.grid {
        Some(g) => {
            let (lo, hi, n) = parse_grid(g)?;
            // analytic sources carry no inherent domain: honor the grid
            if !spec.is_sampled() {
                spec.interval = (spec.interval.0.min(lo), spec.interval.1.max(hi));
            }
            uniform_grid(lo, hi, n)
        }
        // sampled curves evaluate on their own nodes; stay clear of the
        // finite-difference stencil reach at the ends
        None => match &spec.source {
            gacurves::Source::Samples(s) => s.ts[3..s.ts.len() - 3].to_vec(),
            _ => spec.grid(200),
        },
    };
    let label = args
        .source
        .builtin
        .clone()
        .or(args.source.expr.clone())
        .unwrap_or_else(|| "samples".into());

    if spec.dim == 2 {
        let scan = scan_plane(&spec, &grid)?;
        match args.out.format.as_str() {
            "csv" => write_output(&args.out, &plane_csv(&scan.records)),
            "json" => {
                let doc = json!({
                    "curve": label,
                    "dim": 2,
                    "records": scan.records,
                    "events": scan.events,
                    "total_curvature": scan.total_curvature,
                    "segment_curvatures": scan.segment_curvatures,
                    "closed": scan.closed,
                });
                write_output(&args.out, &format!("{doc:#}\n"))
            }
            "svg" => {
                let mut points = Vec::new();
                let mut dotted = vec![false];
                for (i, &t) in grid.iter().enumerate() {
                    let jets = spec.eval(t, 1)?;
                    points.push((jets[0].value(), jets[1].value()));
                    if i > 0 {
                        // the elliptic-sign (eps = +1) regions are dotted
                        let eps = scan.records.get(i).map(|r| r.eps).unwrap_or(0);
                        dotted.push(eps == 1);
                    }
                }
                let mut marks = Vec::new();
                for e in &scan.events {
                    let jets = spec.eval(e.t, 1)?;
                    let kind = match e.kind {
                        EventKind::AffineInflection => MarkKind::Inflection,
                        EventKind::FlatPoint => MarkKind::FlatPoint,
                        EventKind::Vertex => MarkKind::Vertex,
                    };
                    marks.push((jets[0].value(), jets[1].value(), kind));
                }
                let fig = SvgFigure {
                    points,
                    dotted,
                    marks,
                };
                write_output(&args.out, &fig.render(640, 480)?)
            }
            other => Err(Error::EmptyInput(format!("unknown format `{other}`"))),
        }
    } else {
        let scan = scan_space(&spec, &grid)?;
        match args.out.format.as_str() {
            "csv" => write_output(&args.out, &space_csv(&scan.records)),
            "json" => {
                let doc = json!({
                    "curve": label,
                    "dim": 3,
                    "records": scan.records,
                    "events": scan.events,
                    "linear_complex": scan.linear_complex,
                    "sup_theta3": scan.sup_theta3,
                });
                write_output(&args.out, &format!("{doc:#}\n"))
            }
            "svg" => {
                let mut points = Vec::new();
                let mut dotted = vec![false];
                for (i, &t) in grid.iter().enumerate() {
                    let jets = spec.eval(t, 1)?;
                    let p: Vec<f64> = jets.iter().map(|j| j.value()).collect();
                    points.push(project3(&p, args.view_azimuth, args.view_elevation));
                    if i > 0 {
                        let eps = scan.records.get(i).map(|r| r.eps).unwrap_or(0);
                        dotted.push(eps == 1);
                    }
                }
                let mut marks = Vec::new();
                for e in &scan.events {
                    let jets = spec.eval(e.t, 1)?;
                    let p: Vec<f64> = jets.iter().map(|j| j.value()).collect();
                    let kind = match e.kind {
                        EventKind::AffineInflection => MarkKind::Inflection,
                        EventKind::FlatPoint => MarkKind::FlatPoint,
                        EventKind::Vertex => MarkKind::Vertex,
                    };
                    let (u, v) = project3(&p, args.view_azimuth, args.view_elevation);
                    marks.push((u, v, kind));
                }
                let fig = SvgFigure {
                    points,
                    dotted,
                    marks,
                };
                write_output(&args.out, &fig.render(640, 480)?)
            }
            other => Err(Error::EmptyInput(format!("unknown format `{other}`"))),
        }
    }
}

fn cmd_reconstruct(args: &ReconstructArgs) -> Result<(), Error> {
    if !args.plane && !args.space {
        return Err(Error::EmptyInput("choose --plane or --space".into()));
    }
    let (lo, hi, n) = parse_grid(&args.grid)?;
    let k = ProfileFn::parse(&args.k)?;
    let kind = if args.space {
        let m_src = args
            .m
            .as_ref()
            .ok_or_else(|| Error::EmptyInput("--space needs --M".into()))?;
        ProfileKind::Space {
            k,
            m: ProfileFn::parse(m_src)?,
            eps: args.eps,
        }
    } else {
        ProfileKind::Plane { k, eps: args.eps }
    };
    let profile = CurvatureProfile {
        kind,
        interval: (lo, hi),
        initial_frame: None,
    };
    let mut result = reconstruct(&profile, n)?;
    if let Some(tol) = args.tolerance {
        result.roundtrip.tolerance = tol;
        result.roundtrip.within_tolerance = result.roundtrip.k_sup_error <= tol
            && result.roundtrip.m_sup_error.map(|m| m <= tol).unwrap_or(true);
    }

    // extremality of the input profile, and the linear-complex flag for
    // space data (theta_3 = (M - eps k)/4 vanishing over the window)
    let (extremal, linear_complex) = match &profile.kind {
        ProfileKind::Plane { k, eps } => {
            let r = ga_plane_residual(k, *eps, &result.ts)?;
            (r.extremal, Value::Null)
        }
        ProfileKind::Space { k, m, eps } => {
            let (r1, r2) = ga_space_residuals(k, m, *eps, &result.ts)?;
            let mut sup_theta3 = 0.0f64;
            for &t in &result.ts {
                let th = 0.25 * (m.value(t)? - *eps as f64 * k.value(t)?);
                sup_theta3 = sup_theta3.max(th.abs());
            }
            (
                r1.extremal && r2.extremal,
                Value::Bool(sup_theta3 <= gacurves::tol::LINEAR_COMPLEX),
            )
        }
    };

    match args.out.format.as_str() {
        "csv" => write_output(&args.out, &result.to_csv()),
        "json" => {
            let samples: Vec<Value> = result
                .ts
                .iter()
                .zip(&result.states)
                .map(|(t, s)| {
                    json!({
                        "t": t,
                        "x": s[0..result.dim],
                        "frame": (1..=result.dim)
                            .map(|d| s[result.dim * d..result.dim * (d + 1)].to_vec())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({
                "dim": result.dim,
                "eps": result.eps,
                "segments": result.segments,
                "stats": result.stats,
                "roundtrip": result.roundtrip,
                "extremal": extremal,
                "linear_complex": linear_complex,
                "samples": samples,
            });
            write_output(&args.out, &format!("{doc:#}\n"))
        }
        "svg" => {
            let points: Vec<(f64, f64)> = if result.dim == 2 {
                result.states.iter().map(|s| (s[0], s[1])).collect()
            } else {
                result
                    .states
                    .iter()
                    .map(|s| project3(&s[0..3], args.view_azimuth, args.view_elevation))
                    .collect()
            };
            let n = points.len();
            let fig = SvgFigure {
                points,
                dotted: vec![false; n],
                marks: Vec::new(),
            };
            write_output(&args.out, &fig.render(640, 480)?)
        }
        other => Err(Error::EmptyInput(format!("unknown format `{other}`"))),
    }
}

fn cmd_extremal(args: &ExtremalArgs) -> Result<(), Error> {
    let (lo, hi, n) = parse_grid(&args.grid)?;
    let grid = uniform_grid(lo, hi, n);
    let need_k = || -> Result<ProfileFn, Error> {
        args.k
            .as_ref()
            .map(|s| ProfileFn::parse(s))
            .transpose()?
            .ok_or_else(|| Error::EmptyInput("this equation needs --k".into()))
    };
    let doc = match args.equation.as_str() {
        "ga-plane" => {
            let mut r = ga_plane_residual(&need_k()?, args.eps, &grid)?;
            override_tolerance(&mut r, args.tolerance);
            residual_json(&r)
        }
        "ga-plane-general" => {
            let f_src = args
                .f
                .as_ref()
                .ok_or_else(|| Error::EmptyInput("ga-plane-general needs --f".into()))?;
            let f = CurvatureFunctionalSpec::parse(f_src)?;
            let mut rep = ga_plane_general_residual(&need_k()?, args.eps, &f, &grid)?;
            override_tolerance(&mut rep.report, args.tolerance);
            residual_json(&rep.report)
        }
        "ga-space" => {
            let m_src = args
                .m
                .as_ref()
                .ok_or_else(|| Error::EmptyInput("ga-space needs --M".into()))?;
            let (mut r1, mut r2) =
                ga_space_residuals(&need_k()?, &ProfileFn::parse(m_src)?, args.eps, &grid)?;
            override_tolerance(&mut r1, args.tolerance);
            override_tolerance(&mut r2, args.tolerance);
            json!({
                "equations": [residual_json(&r1), residual_json(&r2)],
                "verdict": r1.extremal && r2.extremal,
            })
        }
        "linear-complex" => {
            let rep = linear_complex_extremal_check(&need_k()?, args.eps, &grid)?;
            json!({
                "plane": residual_json(&rep.plane),
                "space": [residual_json(&rep.space_first), residual_json(&rep.space_second)],
                "reduction_holds": rep.reduction_holds,
                "verdict": rep.plane.extremal,
            })
        }
        "equiaffine-space" => {
            let spec = args.source.build()?;
            let rep = equiaffine_space_extremal_check(&spec, &grid)?;
            serde_json::to_value(&rep).unwrap()
        }
        "proj-plane" => {
            let mut r = projective_plane_residual(&need_k()?, &grid)?;
            override_tolerance(&mut r, args.tolerance);
            residual_json(&r)
        }
        "proj-space" => {
            let k2_src = args
                .k2
                .as_ref()
                .ok_or_else(|| Error::EmptyInput("proj-space needs --k2".into()))?;
            let mut rep =
                projective_space_residuals(&need_k()?, &ProfileFn::parse(k2_src)?, &grid)?;
            override_tolerance(&mut rep.first, args.tolerance);
            override_tolerance(&mut rep.second, args.tolerance);
            json!({
                "equations": [residual_json(&rep.first), residual_json(&rep.second)],
                "verdict": rep.first.extremal && rep.second.extremal,
                "curvatures_constant": rep.curvatures_constant,
            })
        }
        other => return Err(Error::EmptyInput(format!("unknown equation `{other}`"))),
    };
    match args.out.format.as_str() {
        "json" => write_output(&args.out, &format!("{doc:#}\n")),
        "csv" => {
            // pointwise residuals for single-equation reports
            let r = match args.equation.as_str() {
                "ga-plane" => ga_plane_residual(&need_k()?, args.eps, &grid)?,
                "proj-plane" => projective_plane_residual(&need_k()?, &grid)?,
                _ => {
                    return Err(Error::EmptyInput(
                        "csv export covers single-equation reports only".into(),
                    ))
                }
            };
            write_output(&args.out, &r.residuals_csv())
        }
        other => Err(Error::EmptyInput(format!("unknown format `{other}`"))),
    }
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), Error> {
    let cls = if args.projective {
        let (a, b, c) = match (args.a, args.b, args.c) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(Error::EmptyInput(
                    "--projective needs --a, --b and --c".into(),
                ))
            }
        };
        classify_projective_constant(a, b, c)?
    } else if args.space {
        let (k, m, eps) = match (args.k, args.m, args.eps) {
            (Some(k), Some(m), Some(e)) => (k, m, e),
            _ => {
                return Err(Error::EmptyInput(
                    "--space needs --k, --M and --eps".into(),
                ))
            }
        };
        classify_space_constant(k, m, eps)?
    } else {
        let (k, eps) = match (args.k, args.eps) {
            (Some(k), Some(e)) => (k, e),
            _ => return Err(Error::EmptyInput("--plane needs --k and --eps".into())),
        };
        classify_plane_constant(k, eps)?
    };
    let doc = serde_json::to_value(&cls).unwrap();
    write_output(&args.out, &format!("{doc:#}\n"))
}

fn cmd_abel(args: &AbelArgs) -> Result<(), Error> {
    let reduction = match args.reduction.as_str() {
        "first" => Reduction::FirstKind,
        "second" => Reduction::SecondKind,
        other => {
            return Err(Error::EmptyInput(format!(
                "reduction must be first or second, got `{other}`"
            )))
        }
    };
    let window = parse_window(&args.window)?;
    let problem = AbelProblem {
        k: ProfileFn::parse(&args.k)?,
        eps: args.eps,
        reduction,
        x0: args.x0,
        s0: args.s0,
        window,
    };
    let sol = abel_solve(&problem, args.n)?;
    match args.out.format.as_str() {
        "csv" => write_output(&args.out, &sol.to_csv()),
        "json" => {
            let samples: Vec<Value> = sol
                .xs
                .iter()
                .zip(&sol.s)
                .zip(sol.ts.iter().zip(&sol.fs))
                .map(|((x, s), (t, f))| json!({"x": x, "s": s, "t": t, "f": f}))
                .collect();
            let doc = json!({
                "reduction": problem.reduction,
                "eps": problem.eps,
                "roundtrip": sol.roundtrip,
                "samples": samples,
            });
            write_output(&args.out, &format!("{doc:#}\n"))
        }
        other => Err(Error::EmptyInput(format!("unknown format `{other}`"))),
    }
}

fn cmd_verify_catalog(out: &OutputArgs) -> Result<(), Error> {
    let rep = verify_catalog()?;
    let doc = serde_json::to_value(&rep).unwrap();
    write_output(out, &format!("{doc:#}\n"))?;
    if !rep.ok() {
        return Err(Error::CatalogInconsistency(format!(
            "{} of {} checks failed",
            rep.failures.len(),
            rep.checks
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own usage/help text; keep exit 0 for --help
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Invariants(args) => cmd_invariants(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Extremal(args) => cmd_extremal(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Abel(args) => cmd_abel(args),
        Command::VerifyCatalog(out) => cmd_verify_catalog(out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code_of(&err);
            if code == 1 {
                eprintln!("usage error: {err}");
            } else {
                // machine-readable error report on stdout
                let doc = json!({
                    "error": err.to_string(),
                    "exit_code": code,
                });
                println!("{doc:#}");
            }
            ExitCode::from(code)
        }
    }
}
