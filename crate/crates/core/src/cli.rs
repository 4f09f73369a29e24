//! The `ncur` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde::Serialize;

use crate::contextuality::{
    build_scenario, nc_max, nc_polytope, saturating_model, violation_report, OnticModel, Route,
};
use crate::error::Error;
use crate::orbit::{check, Mode};
use crate::polytope::{hull_facets, project_points, Body, Point};
use crate::rational::{dot, fmt_rational, parse_rational, rat, to_f64, Rational};
use crate::report::{default_eta, report_json};
use crate::selftest::{run_selftest, SelftestOptions, Status};
use crate::surd::Surd;
use crate::theories::{make_theory, octahedron_vertices, Axis, RepVector, TheorySpec, COORD_NAMES};
use crate::uncertainty::{convert_form, parse_axes, ur_boundary, BoundaryCurve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ncur", version, about = "Predictability tradeoffs and noncontextual bounds, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Gnuplot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Support samples of a theory's projected state space, plus the NC overlay.
    Boundary {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value = "xz")]
        axes: String,
        #[arg(short = 'n', default_value_t = 360)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// All four forms of the uncertainty relation at one state.
    Forms {
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long, default_value = "xyz")]
        axes: String,
    },
    /// Orbit realizability witness or refutation certificate.
    OrbitCheck {
        #[arg(long)]
        theory: String,
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long, default_value = "a12")]
        group: String,
        /// Allow A₁³ questions without a Y measurement.
        #[arg(long)]
        geometric: bool,
    },
    /// Noncontextual bound and facets.
    NcBound {
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "lp")]
        route: String,
        /// A single sign pattern, e.g. "1,-1".
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
    },
    /// Maximal predictability sum over orbit-realizable states.
    Violate {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value = "a12")]
        group: String,
    },
    /// The saturating family at one `u`, or a 101-point sweep.
    Saturate {
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Summary of all theories under both groups.
    Report {
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the acceptance criteria.
    Selftest {
        #[arg(long)]
        no_fm: bool,
        /// Theory JSON replacing the built-in stabilizer theory.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Lib(
            Error::UnknownTheory(_)
            | Error::InvalidParameter(_)
            | Error::Parse(_)
            | Error::DimensionMismatch { .. }
            | Error::StateOutsideTheory
            | Error::YUnavailable(_)
            | Error::MalformedEquivalence(_)
            | Error::Unsupported(_),
        ) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let msg = match &e {
                CliError::Lib(e) => e.to_string(),
                CliError::Io(m) => m.clone(),
            };
            let _ = writeln!(err, "error: {msg}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Boundary { theory, axes, n, output } => boundary(&theory, &axes, n, &output, out),
        Command::Forms { state, axes } => {
            let s = RepVector::parse_state(&state)?;
            let t: Vec<Rational> = parse_axes(&axes)?.iter().map(|a| s.coord(*a).clone()).collect();
            emit_json(&convert_form(&t)?, out)
        }
        Command::OrbitCheck { theory, state, group, geometric } => {
            let theory = make_theory(&theory, None)?;
            let s = RepVector::parse_state(&state)?;
            let mode = if geometric { Mode::Geometric } else { Mode::Operational };
            emit_json(&check(&theory, &s, group.parse()?, mode)?, out)
        }
        Command::NcBound { n, route, signs } => {
            let scenario = build_scenario(n)?;
            let route: Route = route.parse()?;
            match signs {
                Some(text) => {
                    let signs = parse_signs(&text)?;
                    if route != Route::AnalyticLp {
                        return Err(Error::InvalidParameter("--signs needs --route lp".into()).into());
                    }
                    emit_json(&nc_max(&scenario, &signs)?, out)
                }
                None => emit_json(&nc_polytope(&scenario, route)?, out),
            }
        }
        Command::Violate { theory, group } => {
            let theory = make_theory(&theory, None)?;
            emit_json(&violation_report(&theory, group.parse()?)?, out)
        }
        Command::Saturate { u, output } => saturate(u.as_deref(), &output, out),
        Command::Report { eta, out: path } => {
            let eta = match eta {
                Some(text) => parse_rational(&text)?,
                None => default_eta(),
            };
            let text = report_json(&eta)?;
            write_to(path.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Selftest { no_fm, fixture } => {
            let stabilizer = match fixture {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    Some(TheorySpec::from_json(&text)?)
                }
                None => None,
            };
            let results = run_selftest(&SelftestOptions { skip_fm: no_fm, stabilizer });
            let mut failed = 0;
            for r in &results {
                writeln!(out, "{}", r.line())?;
                failed += usize::from(r.status == Status::Fail);
            }
            writeln!(out, "{} passed, {failed} failed", results.len() - failed)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn parse_signs(text: &str) -> CliResult<Vec<i8>> {
    text.split(',')
        .map(|s| match s.trim() {
            "1" | "+1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            other => Err(Error::Parse(format!("sign `{other}` (expected 1 or -1)")).into()),
        })
        .collect()
}

fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> CliResult<i32> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn write_to(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `<dir>/<stem>_nc.<ext>` next to `path`.
pub fn overlay_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_nc.{}", ext.to_string_lossy()),
        None => format!("{stem}_nc"),
    };
    path.with_file_name(name)
}

/// Largest `r` with `r·d` in the projection of the theory's body onto
/// `axes`, for a unit direction `d`.
pub fn radial_extent(theory: &TheorySpec, axes: &[Axis], d: &[Rational]) -> crate::error::Result<Surd> {
    let coords: Vec<usize> = axes.iter().map(|a| a.coord()).collect();
    match &theory.body {
        Body::Ball { center, radius } => {
            let c: Vec<Rational> = coords.iter().map(|&i| center[i].clone()).collect();
            let dc = dot(d, &c);
            let disc = &dc * &dc - dot(&c, &c) + radius * radius;
            Surd::sqrt(&disc)?.checked_add(&Surd::rational(dc))
        }
        Body::Polytope(p) => {
            let names: Vec<&str> = axes.iter().map(|a| COORD_NAMES[a.coord()]).collect();
            let facets = hull_facets(&project_points(&p.vertices()?, &coords), &names)?;
            facets
                .rows
                .iter()
                .filter_map(|r| {
                    let ad = dot(&r.a, d);
                    ad.is_positive().then(|| &r.b / ad)
                })
                .min()
                .map(Surd::rational)
                .ok_or(Error::Unbounded)
        }
    }
}

/// Closed polyline(s) of the noncontextual diamond or octahedron edges.
fn nc_overlay(dim: usize) -> Vec<Vec<Point>> {
    if dim == 2 {
        let v = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)];
        return vec![v.iter().map(|&(x, z)| vec![rat(x, 1), rat(z, 1)]).collect()];
    }
    let verts = octahedron_vertices();
    let mut edges = Vec::new();
    for (i, a) in verts.iter().enumerate() {
        for b in &verts[i + 1..] {
            if dot(a, b) == rat(0, 1) {
                edges.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    edges
}

fn boundary(theory: &str, axes: &str, n: usize, output: &Output, out: &mut dyn Write) -> CliResult<i32> {
    let theory = make_theory(theory, None)?;
    let axes = parse_axes(axes)?;
    let curve = ur_boundary(&theory, &axes, n)?;
    let radial = curve
        .points
        .iter()
        .map(|p| {
            let r = radial_extent(&theory, &axes, &p.direction)?;
            Ok(p.direction.iter().map(|c| r.scale(c)).collect::<Vec<Surd>>())
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    let overlay = nc_overlay(axes.len());
    let format = output.format.unwrap_or(Format::Csv);
    let names: Vec<&str> = axes.iter().map(|a| ["x", "y", "z"][a.coord()]).collect();
    let (main, side) = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                curve: &'a BoundaryCurve,
                boundary: &'a [Vec<Surd>],
                #[serde(with = "crate::rational::serde_rational_mat")]
                nc_vertices: Vec<Point>,
            }
            let nc_vertices = if axes.len() == 2 { overlay[0][..4].to_vec() } else { octahedron_vertices() };
            let doc = Doc { curve: &curve, boundary: &radial, nc_vertices };
            (serde_json::to_string_pretty(&doc).expect("serializable") + "\n", None)
        }
        Format::Csv => (boundary_csv(&curve, &radial, &names)?, Some(overlay_csv(&overlay, &names)?)),
        Format::Gnuplot => (boundary_gnuplot(&curve, &radial, &names), Some(overlay_gnuplot(&overlay, &names))),
    };
    match (&output.out, side) {
        (Some(path), Some(side)) => {
            write_to(Some(path), &main, out)?;
            write_to(Some(&overlay_path(path)), &side, out)?;
        }
        (path, side) => {
            write_to(path.as_deref(), &main, out)?;
            if let (None, Some(side), Format::Gnuplot) = (path, side, format) {
                out.write_all(b"\n\n")?;
                out.write_all(side.as_bytes())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn boundary_csv(curve: &BoundaryCurve, radial: &[Vec<Surd>], names: &[&str]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = names.iter().map(|n| format!("dir_{n}")).collect();
    header.extend(["support".into(), "support_float".into()]);
    header.extend(names.iter().map(|n| format!("boundary_{n}")));
    header.extend(names.iter().map(|n| format!("boundary_{n}_float")));
    w.write_record(&header)?;
    for (p, b) in curve.points.iter().zip(radial) {
        let mut rec: Vec<String> = p.direction.iter().map(fmt_rational).collect();
        rec.push(p.support.to_string());
        rec.push(format!("{:.6}", p.support.to_f64()));
        rec.extend(b.iter().map(Surd::to_string));
        rec.extend(b.iter().map(|s| format!("{:.6}", s.to_f64())));
        w.write_record(&rec)?;
    }
    into_string(w)
}

fn overlay_csv(overlay: &[Vec<Point>], names: &[&str]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["segment".to_string()];
    header.extend(names.iter().map(|n| n.to_string()));
    w.write_record(&header)?;
    for (i, line) in overlay.iter().enumerate() {
        for p in line {
            let mut rec = vec![i.to_string()];
            rec.extend(p.iter().map(fmt_rational));
            w.write_record(&rec)?;
        }
    }
    into_string(w)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn boundary_gnuplot(curve: &BoundaryCurve, radial: &[Vec<Surd>], names: &[&str]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# theory {} axes {}", curve.theory, names.join(""));
    if curve.geometric_only {
        let _ = writeln!(s, "# geometric comparison only");
    }
    let dirs: Vec<String> = names.iter().map(|n| format!("dir_{n}")).collect();
    let bounds: Vec<String> = names.iter().map(|n| format!("boundary_{n}")).collect();
    let _ = writeln!(s, "# {} support {}", dirs.join(" "), bounds.join(" "));
    for (p, b) in curve.points.iter().zip(radial) {
        let mut cols: Vec<String> = p.direction.iter().map(|c| format!("{:.6}", to_f64(c))).collect();
        cols.push(format!("{:.6}", p.support.to_f64()));
        cols.extend(b.iter().map(|c| format!("{:.6}", c.to_f64())));
        let _ = writeln!(s, "{}", cols.join(" "));
    }
    s
}

fn overlay_gnuplot(overlay: &[Vec<Point>], names: &[&str]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# noncontextual bound {}", if names.len() == 2 { "diamond" } else { "octahedron edges" });
    let _ = writeln!(s, "# {}", names.join(" "));
    for (i, line) in overlay.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        for p in line {
            let cols: Vec<String> = p.iter().map(|c| format!("{:.6}", to_f64(c))).collect();
            let _ = writeln!(s, "{}", cols.join(" "));
        }
    }
    s
}

#[derive(Serialize)]
struct SaturationRow {
    #[serde(with = "crate::rational::serde_rational")]
    u: Rational,
    model: OnticModel,
    #[serde(with = "crate::rational::serde_rational_vec")]
    expectations: Vec<Rational>,
}

fn saturation_row(u: Rational) -> crate::error::Result<SaturationRow> {
    let model = saturating_model(&u)?;
    let expectations = model.expectations(0);
    Ok(SaturationRow { u, model, expectations })
}

fn saturate(u: Option<&str>, output: &Output, out: &mut dyn Write) -> CliResult<i32> {
    let rows = match u {
        Some(text) => vec![saturation_row(parse_rational(text)?)?],
        None => (0..=100).map(|k| saturation_row(rat(-1, 4) + rat(k, 200))).collect::<crate::error::Result<_>>()?,
    };
    let default = if u.is_some() { Format::Json } else { Format::Csv };
    let text = match output.format.unwrap_or(default) {
        Format::Json if u.is_some() => serde_json::to_string_pretty(&rows[0]).expect("serializable") + "\n",
        Format::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["u".to_string()];
            header.extend((1..=4).flat_map(|i| (1..=4).map(move |l| format!("mu{i}_{l}"))));
            header.extend(["X".into(), "Z".into()]);
            w.write_record(&header)?;
            for r in &rows {
                let mut rec = vec![fmt_rational(&r.u)];
                rec.extend(r.model.mus.iter().flatten().map(fmt_rational));
                rec.extend(r.expectations.iter().map(fmt_rational));
                w.write_record(&rec)?;
            }
            into_string(w)?
        }
        Format::Gnuplot => {
            let mut s = String::from("# u X Z\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:.6} {:.6} {:.6}",
                    to_f64(&r.u),
                    to_f64(&r.expectations[0]),
                    to_f64(&r.expectations[1])
                );
            }
            s
        }
    };
    write_to(output.out.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}
