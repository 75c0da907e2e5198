use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use deficit_atlas::boundaries::{
    find_triple_point, residual, sign_table, solve_boundary, trace_faces, Axis, BoundaryKind,
    DEFAULT_STEP,
};
use deficit_atlas::correlations::{deficit_branch_0, deficit_branch_pi2};
use deficit_atlas::diagram::{classify_grid, emit, format_g12, AreasReport, CurveSummary, Format};
use deficit_atlas::verify::{self, Check, Model};
use deficit_atlas::{deficit, discord, DeficitResult, DomainError, Error, XxzState};

const THREADS_ENV: &str = "DEFICIT_ATLAS_THREADS";
const SIGN_TABLE_ROWS: usize = 21;

#[derive(Debug, Parser)]
#[command(
    name = "deficit-atlas",
    version,
    about = "One-way deficit and discord of symmetric XXZ states: evaluation, phase diagrams and boundaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the optimised deficit and discord of one state.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long, value_parser = finite)]
        s1: f64,
        #[arg(long, value_parser = finite)]
        c1: f64,
        #[arg(long, value_parser = finite)]
        c3: f64,
        #[arg(long, value_enum, default_value_t = Units::Nats)]
        units: Units,
        #[arg(long)]
        json: bool,
    },
    /// Classify a c3 = const cross-section and write CSV, SVG and area files.
    #[command(allow_negative_numbers = true)]
    Slice {
        #[arg(long, value_parser = finite)]
        c3: f64,
        /// Cells per axis.
        #[arg(long, default_value_t = 256)]
        res: usize,
        /// Output path prefix.
        #[arg(long, default_value = "slice")]
        out: PathBuf,
        /// Continuation step for the boundary overlays.
        #[arg(long, value_parser = finite, default_value_t = DEFAULT_STEP)]
        step: f64,
    },
    /// Solve for one point of a boundary by bisection.
    #[command(allow_negative_numbers = true)]
    Boundary {
        /// zero | pi2 | zeroprime | equal (or 0, 1, 0', 2).
        #[arg(long)]
        kind: BoundaryKind,
        #[arg(long, value_parser = finite)]
        c3: f64,
        /// Fixed coordinate, as s1=VALUE or c1=VALUE.
        #[arg(long, value_parser = parse_fix)]
        fix: (Axis, f64),
        #[arg(long, value_parser = finite)]
        lo: f64,
        #[arg(long, value_parser = finite)]
        hi: f64,
        #[arg(long)]
        json: bool,
    },
    /// Trace the boundaries on the two faces and locate the face landmarks.
    Faces {
        #[arg(long, value_parser = finite, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long)]
        json: bool,
    },
    /// Locate the triple point of a cross-section.
    #[command(allow_negative_numbers = true)]
    Triple {
        #[arg(long, value_parser = finite)]
        c3: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in acceptance checks.
    Verify {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Nats,
    Bits,
}

impl Units {
    fn scale(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

fn parse_fix(s: &str) -> Result<(Axis, f64), String> {
    let (axis, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected AXIS=VALUE, got {s:?}"))?;
    let axis = Axis::from_str(axis.trim()).map_err(|e| e.to_string())?;
    Ok((axis, finite(value.trim())?))
}

/// Failure of a subcommand, carrying its exit code.
enum Failure {
    Lib(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Self {
        Failure::Lib(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::SingularInput(_) | Error::NegativeEigenvalue { .. } => 2,
        Error::Io(_) => 3,
        Error::Convergence { .. }
        | Error::Bracket { .. }
        | Error::NoInteriorMinimum
        | Error::EmptyCurve { .. }
        | Error::NotFound { .. } => 4,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} = {raw:?} is not a thread count"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn print_json(v: &Value) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)
}

fn result_json(r: &DeficitResult, units: Units) -> Value {
    json!({
        "value": units.scale(r.value),
        "phase": r.phase.as_str(),
        "theta_opt": r.theta_opt,
        "branch_values": {
            "0": units.scale(r.branch_values.zero),
            "pi2": units.scale(r.branch_values.pi_half),
            "theta": r.branch_values.theta.map(|v| units.scale(v)),
        },
    })
}

fn run_eval(s1: f64, c1: f64, c3: f64, units: Units, as_json: bool) -> Result<(), Failure> {
    let x = XxzState::new(s1, c1, c3)?;
    let d = deficit(&x)?;
    let q = discord(&x)?;
    if as_json {
        let mut v = json!({ "s1": s1, "c1": c1, "c3": c3, "units": units.name() });
        let obj = v.as_object_mut().expect("object literal");
        let dj = result_json(&d, units);
        obj.insert("deficit".into(), dj["value"].clone());
        obj.insert("phase".into(), dj["phase"].clone());
        obj.insert("theta_opt".into(), dj["theta_opt"].clone());
        obj.insert("branch_values".into(), dj["branch_values"].clone());
        let qj = result_json(&q, units);
        obj.insert("discord".into(), qj["value"].clone());
        obj.insert("discord_phase".into(), qj["phase"].clone());
        obj.insert("discord_theta_opt".into(), qj["theta_opt"].clone());
        print_json(&v)?;
        return Ok(());
    }
    let u = units.name();
    let g = |v: f64| format_g12(units.scale(v));
    println!("state     s1 = {s1}, c1 = {c1}, c3 = {c3}");
    println!(
        "deficit   {} {u}  phase {}  theta_opt {} rad",
        g(d.value),
        d.phase,
        format_g12(d.theta_opt)
    );
    let theta = d.branch_values.theta.map_or("-".to_string(), g);
    println!(
        "branches  0: {} {u}  pi2: {} {u}  theta: {theta}",
        g(d.branch_values.zero),
        g(d.branch_values.pi_half)
    );
    println!(
        "discord   {} {u}  phase {}  theta_opt {} rad",
        g(q.value),
        q.phase,
        format_g12(q.theta_opt)
    );
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes through a temporary file in the target directory, then renames it
/// into place.
fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> Result<(), Failure>,
) -> Result<(), Failure> {
    let tmp = with_suffix(path, &format!(".tmp{}", std::process::id()));
    let result = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        body(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&tmp, path)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn run_slice(c3: f64, res: usize, out: &Path, step: f64) -> Result<(), Failure> {
    let d = classify_grid(c3, res)?.with_curves(step)?;
    let report = AreasReport::from(&d);
    for (suffix, format) in [(".csv", Format::Csv), (".svg", Format::Svg)] {
        write_atomic(&with_suffix(out, suffix), |w| Ok(emit(&d, format, w)?))?;
    }
    let areas = with_suffix(out, ".areas.json");
    write_atomic(&areas, |w| {
        serde_json::to_writer_pretty(&mut *w, &report).map_err(io::Error::from)?;
        writeln!(w)?;
        Ok(())
    })?;
    println!("slice c3 = {c3}, {res} x {res} cells");
    for (name, a) in [
        ("0", d.areas.zero),
        ("pi2", d.areas.pi_half),
        ("theta", d.areas.theta),
    ] {
        println!(
            "  {name:<6} area {:<16} fraction {}",
            format_g12(a.absolute),
            format_g12(a.fraction)
        );
    }
    for c in &report.curves {
        println!(
            "  curve {:<10} {:>5} points  ({}, {}) -> ({}, {})",
            c.kind.name(),
            c.points,
            format_g12(c.start[0]),
            format_g12(c.start[1]),
            format_g12(c.end[0]),
            format_g12(c.end[1])
        );
    }
    println!("wrote {}.{{csv,svg,areas.json}}", out.display());
    Ok(())
}

fn run_boundary(
    kind: BoundaryKind,
    c3: f64,
    fix: (Axis, f64),
    lo: f64,
    hi: f64,
    as_json: bool,
) -> Result<(), Failure> {
    let free = fix.0.other();
    let root = match solve_boundary(kind, c3, fix, lo, hi) {
        Ok(r) => r,
        Err(e @ (Error::Bracket { .. } | Error::Convergence { .. })) => {
            eprintln!("{:>18}  residual", free.name());
            for (t, r) in sign_table(kind, c3, fix, lo, hi, SIGN_TABLE_ROWS) {
                let r = r.map_or("undefined".to_string(), format_g12);
                eprintln!("{:>18}  {r}", format_g12(t));
            }
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    let x = match fix.0 {
        Axis::S1 => XxzState::new(fix.1, root, c3)?,
        Axis::C1 => XxzState::new(root, fix.1, c3)?,
    };
    let r = residual(kind, &x)?;
    if as_json {
        print_json(&json!({
            "kind": kind.name(),
            "c3": c3,
            "fixed": { "axis": fix.0.name(), "value": fix.1 },
            "axis": free.name(),
            "root": root,
            "residual": r,
        }))?;
    } else {
        println!(
            "{} boundary at c3 = {c3}, {} = {}",
            kind.name(),
            fix.0.name(),
            fix.1
        );
        println!("{} = {}", free.name(), format_g12(root));
        println!("residual = {}", format_g12(r));
    }
    Ok(())
}

fn run_faces(step: f64, as_json: bool) -> Result<(), Failure> {
    let f = trace_faces(step)?;
    let curves: Vec<CurveSummary> = f.curves.iter().map(CurveSummary::from).collect();
    if as_json {
        print_json(&json!({ "landmarks": f.landmarks, "curves": curves }))?;
        return Ok(());
    }
    let l = f.landmarks;
    for (name, p) in [("a", l.a), ("b", l.b), ("c", l.c)] {
        println!(
            "landmark {name}: s1 = {}, c1 = {}, c3 = {}",
            format_g12(p.s1()),
            format_g12(p.c1()),
            format_g12(p.c3())
        );
    }
    for c in &curves {
        println!(
            "{:<10} on {:<16} {:>5} points  c3 {} -> {}",
            c.kind.name(),
            c.section.to_string(),
            c.points,
            format_g12(c.start[2]),
            format_g12(c.end[2])
        );
    }
    Ok(())
}

fn run_triple(c3: f64, as_json: bool) -> Result<(), Failure> {
    let x = find_triple_point(c3)?;
    let (d0, dp) = (deficit_branch_0(&x), deficit_branch_pi2(&x));
    if as_json {
        print_json(&json!({
            "c3": c3,
            "s1": x.s1(),
            "c1": x.c1(),
            "branch_values": { "0": d0, "pi2": dp },
        }))?;
    } else {
        println!(
            "triple point at c3 = {c3}: s1 = {}, c1 = {}",
            format_g12(x.s1()),
            format_g12(x.c1())
        );
        println!(
            "branch values  0: {}  pi2: {}",
            format_g12(d0),
            format_g12(dp)
        );
    }
    Ok(())
}

fn print_checks(checks: &[Check]) {
    println!(
        "{:>3}  {:<40} {:>16} {:>16} {:>9}  result",
        "#", "check", "expected", "computed", "tol"
    );
    for c in checks {
        println!(
            "{:>3}  {:<40} {:>16} {:>16} {:>9}  {}",
            c.criterion,
            c.name,
            format_g12(c.expected),
            format_g12(c.computed),
            format!("{:.0e}", c.tolerance),
            if c.pass { "pass" } else { "FAIL" }
        );
        if let Some(e) = &c.error {
            println!("     error: {e}");
        }
    }
}

fn run_verify(as_json: bool) -> Result<(), Failure> {
    let checks = verify::run(&Model::default());
    if as_json {
        print_json(&serde_json::to_value(&checks).map_err(io::Error::from)?)?;
    } else {
        print_checks(&checks);
        let failed = checks.iter().filter(|c| !c.pass).count();
        println!("{} checks, {failed} failed", checks.len());
    }
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Eval {
            s1,
            c1,
            c3,
            units,
            json,
        } => run_eval(s1, c1, c3, units, json),
        Command::Slice { c3, res, out, step } => run_slice(c3, res, &out, step),
        Command::Boundary {
            kind,
            c3,
            fix,
            lo,
            hi,
            json,
        } => run_boundary(kind, c3, fix, lo, hi, json),
        Command::Faces { step, json } => run_faces(step, json),
        Command::Triple { c3, json } => run_triple(c3, json),
        Command::Verify { json } => run_verify(json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
