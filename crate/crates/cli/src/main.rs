use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use semitoric::cartography::{image_boundary, polygon_representative};
use semitoric::height::{height, Method};
use semitoric::model::ModelParams;
use semitoric::singularity::{check_semitoric, classify_fixed_points, discriminant_e, n_ff, SingularityKind};
use semitoric::Error;

const SCHEMA: &str = "semitoric-invariants/1";
/// Grid size for the rank-1 scan behind the semitoric verdict.
const VERDICT_GRID: usize = 100;
const MIN_SAMPLES: usize = 16;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Args(String),
    #[error("{0}")]
    Math(Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Args(_) => 2,
            CliError::Math(Error::InvalidParams(_) | Error::Domain(_)) => 2,
            CliError::Math(Error::Degenerate { .. } | Error::NoFocusFocus { .. }) => 3,
            CliError::Math(_) => 1,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Symplectic invariants of coupled angular momenta on S^2 x S^2.
#[derive(Parser)]
#[command(name = "semitoric", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the four fixed points and decide whether the system is semitoric
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Height invariants of the focus-focus points
    Height {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Tolerance of the quadrature oracle
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Report heights in units of min(R1, R2)
        #[arg(long)]
        scaled: bool,
        #[arg(long)]
        json: bool,
    },
    /// Vertices of a polygon-invariant representative
    Polygon {
        #[command(flatten)]
        params: ParamArgs,
        /// Cut directions, one sign per focus-focus point
        #[arg(long, default_value = "++", allow_hyphen_values = true)]
        cuts: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled boundary of the momentum image
    Image {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Report L in units of R1
        #[arg(long)]
        scaled: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a quantity over a grid of (s1, s2)
    Sweep {
        #[arg(long = "R1", alias = "r1")]
        r1: f64,
        #[arg(long = "R2", alias = "r2")]
        r2: f64,
        /// Axis as start:stop:count
        #[arg(long)]
        s1: Axis,
        /// Axis as start:stop:count
        #[arg(long)]
        s2: Axis,
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[arg(long)]
        scaled: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long = "R1", alias = "r1")]
    r1: f64,
    #[arg(long = "R2", alias = "r2")]
    r2: f64,
    #[arg(long)]
    s1: f64,
    #[arg(long)]
    s2: f64,
}

impl ParamArgs {
    fn model(self) -> CliResult<ModelParams> {
        ModelParams::new(self.r1, self.r2, self.s1, self.s2).map_err(|e| CliError::Args(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Quadrature,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => Method::ClosedForm,
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Nff,
    Height,
    #[value(name = "E", alias = "e")]
    E,
}

#[derive(Clone, Copy, Debug)]
struct Axis {
    start: f64,
    stop: f64,
    count: usize,
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("axis must be start:stop:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let axis = Axis {
            start: num(start)?,
            stop: num(stop)?,
            count: count.trim().parse().map_err(|e| format!("{count:?}: {e}"))?,
        };
        if axis.count < 2 {
            return Err(format!("axis needs at least 2 points, got {}", axis.count));
        }
        let inside = |x: f64| (0.0..=1.0).contains(&x);
        if !inside(axis.start) || !inside(axis.stop) {
            return Err(format!("axis range must lie in [0, 1], got {}..{}", axis.start, axis.stop));
        }
        Ok(axis)
    }
}

impl Axis {
    fn values(self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

fn parse_cuts(s: &str) -> CliResult<(i8, i8)> {
    let sign = |c: char| match c {
        '+' => Ok(1),
        '-' => Ok(-1),
        _ => Err(CliError::Args(format!("cut signs must be '+' or '-', got {c:?}"))),
    };
    let chars: Vec<char> = s.trim().chars().collect();
    match chars[..] {
        [a, b] => Ok((sign(a)?, sign(b)?)),
        _ => Err(CliError::Args(format!("--cuts needs two signs such as \"+-\", got {s:?}"))),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn params_json(p: &ModelParams) -> Value {
    json!({ "R1": p.r1(), "R2": p.r2(), "s1": p.s1(), "s2": p.s2() })
}

fn classify(args: ParamArgs, as_json: bool) -> CliResult<()> {
    let params = args.model()?;
    let e = discriminant_e(&params);
    let reports = classify_fixed_points(&params);
    let verdict = check_semitoric(&params, VERDICT_GRID)?;
    if verdict.degenerate {
        return Err(n_ff(&params).expect_err("degenerate parameters have no focus-focus count").into());
    }
    let text = if as_json {
        to_json(&json!({
            "schema": SCHEMA,
            "command": "classify",
            "params": params_json(&params),
            "E": e,
            "n_ff": verdict.n_ff,
            "points": reports,
            "semitoric": verdict.is_semitoric,
            "rank1_margin_max": verdict.rank1_margin_min,
        }))
    } else {
        let mut s = format!("E = {e}\nn_FF = {}\n", verdict.n_ff);
        for r in &reports {
            let _ = writeln!(s, "{}: rank {}, {}", r.point_id.as_str(), r.rank, r.kind.as_str());
        }
        let _ = writeln!(s, "semitoric: {}", if verdict.is_semitoric { "yes" } else { "no" });
        s
    };
    emit(&text, None)
}

fn height_cmd(args: ParamArgs, method: MethodArg, tol: f64, scaled: bool, as_json: bool) -> CliResult<()> {
    let params = args.model()?;
    if !(tol > 0.0) {
        return Err(CliError::Args(format!("--tol must be positive, got {tol}")));
    }
    let h = height(&params, method.into(), tol)?;
    let unit = if scaled { 1.0 } else { params.r1().min(params.r2()) };
    let (h1, h2) = (unit * h.h1, unit * h.h2);
    let text = if as_json {
        to_json(&json!({
            "schema": SCHEMA,
            "command": "height",
            "params": params_json(&params),
            "units": if scaled { "min(R1,R2)" } else { "unscaled" },
            "h1": h1,
            "h2": h2,
            "case": h.case_ns.as_str(),
            "method": h.method,
            "closed_vs_oracle": h.closed_vs_oracle,
            "branch_gap": h.branch_gap,
            "ill_conditioned": h.ill_conditioned,
        }))
    } else {
        let mut s = format!("h1 = {h1}\nh2 = {h2}\ncase = {}\n", h.case_ns.as_str());
        if let Some(gap) = h.closed_vs_oracle {
            let _ = writeln!(s, "|closed - oracle| = {gap:e}");
        }
        if h.ill_conditioned {
            s.push_str("warning: ill-conditioned (E is within 1e-6 of zero)\n");
        }
        s
    };
    emit(&text, None)
}

fn polygon_cmd(args: ParamArgs, cuts: &str, as_json: bool, out: Option<&PathBuf>) -> CliResult<()> {
    let params = args.model()?;
    let cuts = parse_cuts(cuts)?;
    let poly = polygon_representative(&params, cuts)?;
    let unscaled = poly.unscaled_vertices();
    let text = if as_json {
        let vertices: Vec<Value> = poly
            .vertices
            .iter()
            .zip(&unscaled)
            .map(|(s, u)| json!({ "scaled": [s.0, s.1], "unscaled": [u.0, u.1] }))
            .collect();
        to_json(&json!({
            "schema": SCHEMA,
            "command": "polygon",
            "params": params_json(&params),
            "cuts": poly.cuts,
            "ff_l": poly.ff_l,
            "ratio": poly.r,
            "unit": poly.unit,
            "shear": poly.shear,
            "vertices": vertices,
        }))
    } else {
        let cut_str: String = poly.cuts.iter().map(|&c| if c > 0 { '+' } else { '-' }).collect();
        let mut s = String::from("index,l,y,l_scaled,y_scaled,cuts\n");
        for (i, (v, u)) in poly.vertices.iter().zip(&unscaled).enumerate() {
            let _ = writeln!(s, "{i},{},{},{},{},{cut_str}", u.0, u.1, v.0, v.1);
        }
        s
    };
    emit(&text, out)
}

fn image_cmd(args: ParamArgs, samples: usize, scaled: bool, out: Option<&PathBuf>) -> CliResult<()> {
    let params = args.model()?;
    if samples < MIN_SAMPLES {
        return Err(CliError::Args(format!("--samples must be at least {MIN_SAMPLES}, got {samples}")));
    }
    let img = image_boundary(&params, samples)?;
    let l_unit = if scaled { params.r1() } else { 1.0 };
    let mut s = String::from("l,h_min,h_max,kind,point\n");
    for b in &img.samples {
        let _ = writeln!(s, "{},{},{},boundary,", b.l / l_unit, b.h_min, b.h_max);
    }
    let reports = classify_fixed_points(&params);
    for (r, &(l, h)) in reports.iter().zip(&img.corner_values) {
        let kind = if r.kind == SingularityKind::FocusFocus { "ff" } else { "corner" };
        let _ = writeln!(s, "{},{h},{h},{kind},{}", l / l_unit, r.point_id.as_str());
    }
    emit(&s, out)
}

struct SweepCell {
    s1: f64,
    s2: f64,
    row: String,
}

fn sweep_row(r1: f64, r2: f64, s1: f64, s2: f64, quantity: Quantity, method: Method, scaled: bool) -> CliResult<String> {
    let params = ModelParams::new(r1, r2, s1, s2).map_err(|e| CliError::Args(e.to_string()))?;
    Ok(match quantity {
        Quantity::E => format!("{}", discriminant_e(&params)),
        Quantity::Nff => match n_ff(&params) {
            Ok(n) => format!("{n},"),
            Err(Error::Degenerate { .. }) => ",degenerate".into(),
            Err(e) => return Err(e.into()),
        },
        Quantity::Height => {
            let unit = if scaled { 1.0 } else { r1.min(r2) };
            match height(&params, method, semitoric::height::ORACLE_TOL) {
                Ok(h) => {
                    let flag = if h.ill_conditioned { "ill-conditioned" } else { "" };
                    format!("{},{},{flag}", unit * h.h1, unit * h.h2)
                }
                Err(Error::Degenerate { .. }) => ",,degenerate".into(),
                Err(Error::NoFocusFocus { .. }) => ",,no-focus-focus".into(),
                Err(e) => return Err(e.into()),
            }
        }
    })
}

fn thread_count(parallel: bool) -> CliResult<usize> {
    match std::env::var("SEMITORIC_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Args(format!("SEMITORIC_THREADS must be a positive integer, got {v:?}"))),
        Err(_) if parallel => Ok(0),
        Err(_) => Ok(1),
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep_cmd(
    r1: f64,
    r2: f64,
    s1: Axis,
    s2: Axis,
    quantity: Quantity,
    method: MethodArg,
    scaled: bool,
    parallel: bool,
    out: Option<&PathBuf>,
) -> CliResult<()> {
    ModelParams::new(r1, r2, 0.0, 0.0).map_err(|e| CliError::Args(e.to_string()))?;
    let cells: Vec<(f64, f64)> = s1
        .values()
        .into_iter()
        .flat_map(|a| s2.values().into_iter().map(move |b| (a, b)))
        .collect();
    let method = Method::from(method);
    let eval = |&(a, b): &(f64, f64)| -> CliResult<SweepCell> {
        Ok(SweepCell {
            s1: a,
            s2: b,
            row: sweep_row(r1, r2, a, b, quantity, method, scaled)?,
        })
    };
    let threads = thread_count(parallel)?;
    let rows: Vec<SweepCell> = if threads == 1 {
        cells.iter().map(eval).collect::<CliResult<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Args(format!("cannot start the thread pool: {e}")))?;
        // collect() on an indexed parallel iterator keeps the input order
        pool.install(|| cells.par_iter().map(eval).collect::<CliResult<_>>())?
    };
    let header = match quantity {
        Quantity::E => "s1,s2,E",
        Quantity::Nff => "s1,s2,n_ff,flag",
        Quantity::Height => "s1,s2,h1,h2,flag",
    };
    let mut s = format!("{header}\n");
    for c in &rows {
        let _ = writeln!(s, "{},{},{}", c.s1, c.s2, c.row);
    }
    emit(&s, out)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Classify { params, json } => classify(params, json),
        Command::Height {
            params,
            method,
            tol,
            scaled,
            json,
        } => height_cmd(params, method, tol, scaled, json),
        Command::Polygon {
            params,
            cuts,
            json,
            out,
        } => polygon_cmd(params, &cuts, json, out.as_ref()),
        Command::Image {
            params,
            samples,
            scaled,
            out,
        } => image_cmd(params, samples, scaled, out.as_ref()),
        Command::Sweep {
            r1,
            r2,
            s1,
            s2,
            quantity,
            method,
            scaled,
            parallel,
            out,
        } => sweep_cmd(r1, r2, s1, s2, quantity, method, scaled, parallel, out.as_ref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
