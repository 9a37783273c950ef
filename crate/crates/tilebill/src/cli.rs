//! `tilebill` command line.
//!
//! Exit codes: 0 success (for `verify`: every suite passed), 1 a suite
//! failed or an IO error, 2 invalid arguments / tiling spec / start,
//! 3 infeasible construction.

use std::ffi::OsString;
use std::io::{BufReader, Read, Write};
use std::net::TcpListener;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tilebill_core::classify::{classify, EPS_MATCH};
use tilebill_core::construct::{construct, ConstructionError, ConstructionResult, Expected};
use tilebill_core::sim::{trace, Trajectory, TrajectoryState};
use tilebill_core::tiling::{Tiling, TilingSpec};
use tilebill_core::verify::{scan, verify_theorem, GridConfig, ScanGrid, THEOREM_IDS};

use crate::io::{self, InputError, RenderInput, SimulateOutput, StartSpec};
use crate::render::{render_svg, Style, Viewport};
use crate::session::Session;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tilebill", version, about = "Tiling billiards: simulate, classify, verify, scan and render")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace one trajectory and classify it; prints JSON.
    Simulate(SimulateArgs),
    /// Build a named construction and report its traced classification.
    Construct {
        name: String,
        /// Parameters as `--key value` or `key=value`; lists are comma-separated.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Run a theorem-check suite (or `all`); writes JSON and text reports.
    Verify(VerifyArgs),
    /// Classify a grid of starts and list the distinct orbits found.
    Scan(ScanArgs),
    /// Draw a tiling and trajectory as SVG.
    Render(RenderArgs),
    /// Serve the line-delimited JSON session protocol.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
pub struct StartArgs {
    /// Start edge as `cx,cy,slot` (slot by name or index).
    #[arg(long, allow_hyphen_values = true)]
    pub edge: Option<String>,
    /// Position along the start edge.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Start direction in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub dir: Option<f64>,
    /// Start point `x,y` on an edge (with --dir).
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Far start for line arrangements, at angle θ (radians).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Start as JSON (any session-protocol start, or a state from a report).
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Tiling: inline JSON, a JSON file, or a preset (`square`, `two_lines_88deg`, …).
    #[arg(long)]
    pub tiling: Option<String>,
    #[command(flatten)]
    pub start: StartArgs,
    /// Use a named construction's tiling and start instead.
    #[arg(long)]
    pub construct: Option<String>,
    /// Construction parameter `key=value` (repeatable).
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    /// Recurrence tolerance.
    #[arg(long, default_value_t = EPS_MATCH)]
    pub eps: f64,
    /// Indent the JSON output.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite id, or `all`.
    pub id: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Directory for `<id>.json` and `<id>.txt`.
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub tiling: String,
    /// Positions per edge.
    #[arg(long, default_value_t = 20)]
    pub positions: usize,
    /// Directions per position.
    #[arg(long, default_value_t = 36)]
    pub directions: usize,
    /// Comma-separated slots to start on (default: all).
    #[arg(long)]
    pub slots: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// `simulate` output or a bare trajectory (`-` for stdin).
    #[arg(long)]
    pub input: Option<String>,
    /// Tiling for a bare trajectory input.
    #[arg(long)]
    pub tiling: Option<String>,
    #[arg(long)]
    pub construct: Option<String>,
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Crossings to draw for constructions not known to be periodic.
    #[arg(long, default_value_t = 200)]
    pub max_steps: usize,
    /// Style JSON file; missing fields take their defaults.
    #[arg(long)]
    pub style: Option<PathBuf>,
    /// `min_x,min_y,max_x,max_y`; default fits the trajectory.
    #[arg(long, allow_hyphen_values = true)]
    pub viewport: Option<String>,
    /// SVG output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 7878)]
    pub port: u16,
    /// Speak the protocol on stdin/stdout instead of TCP.
    #[arg(long)]
    pub stdio: bool,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        let code = match e {
            InputError::Io(_) => EXIT_FAIL,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(EXIT_FAIL, e.to_string())
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Failure {
        match e {
            ConstructionError::Infeasible(_) => Failure::new(EXIT_INFEASIBLE, e.to_string()),
            ConstructionError::InvalidParams(_) => Failure::new(EXIT_INVALID, e.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let r = match cli.command {
        Command::Simulate(a) => simulate(a, out),
        Command::Construct { name, params } => construct_cmd(&name, &params, out),
        Command::Verify(a) => verify(a, out, err),
        Command::Scan(a) => scan_cmd(a, out),
        Command::Render(a) => render(a, out),
        Command::Serve(a) => serve(a, err),
    };
    match r {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T, pretty: bool) -> CmdResult {
    let s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .map_err(|e| Failure::new(EXIT_FAIL, e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(EXIT_OK)
}

fn build_construction(name: &str, params: &[String]) -> Result<ConstructionResult, Failure> {
    let p = io::parse_params(params)?;
    Ok(construct(name, &p)?)
}

fn start_spec(a: &StartArgs) -> Result<StartSpec, Failure> {
    let given = [a.edge.is_some(), a.point.is_some(), a.theta.is_some(), a.start.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(Failure::new(
            EXIT_INVALID,
            "give exactly one of --edge (with --t, --dir), --point (with --dir), --theta, --start",
        ));
    }
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::new(EXIT_INVALID, format!("missing --{flag}")));
    if let Some(e) = &a.edge {
        let (cell, slot) = io::parse_edge_arg(e)?;
        return Ok(StartSpec::Named {
            cell,
            slot: slot.into(),
            t: need(a.t, "t")?,
            dir: need(a.dir, "dir")?,
        });
    }
    if let Some(p) = &a.point {
        let v = io::parse_floats(p, 2).map_err(|m| Failure::new(EXIT_INVALID, m))?;
        return Ok(StartSpec::Point {
            point: [v[0], v[1]],
            dir: need(a.dir, "dir")?,
        });
    }
    if let Some(theta) = a.theta {
        return Ok(StartSpec::Theta { theta });
    }
    let json = a.start.as_deref().expect("one start form");
    serde_json::from_str(json).map_err(|e| Failure::new(EXIT_INVALID, format!("invalid --start: {e}")))
}

/// Tiling, start and (for constructions) the construction itself.
fn simulate_setup(a: &SimulateArgs) -> Result<(TilingSpec, Tiling, TrajectoryState, Option<ConstructionResult>), Failure> {
    if let Some(name) = &a.construct {
        if a.tiling.is_some() {
            return Err(Failure::new(EXIT_INVALID, "--construct and --tiling are exclusive"));
        }
        let r = build_construction(name, &a.params)?;
        let t = Tiling::new(&r.spec).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
        return Ok((r.spec.clone(), t, r.start, Some(r)));
    }
    let arg = a
        .tiling
        .as_deref()
        .ok_or_else(|| Failure::new(EXIT_INVALID, "need --tiling or --construct"))?;
    let (spec, t) = io::parse_tiling(arg)?;
    let st = start_spec(&a.start)?.resolve(&t)?;
    Ok((spec, t, st, None))
}

pub fn simulate_output(a: &SimulateArgs) -> Result<SimulateOutput, Failure> {
    let (spec, t, start, construction) = simulate_setup(a)?;
    let trajectory = trace(&t, start, a.max_steps);
    let classification = classify(&t, start, a.max_steps, a.eps);
    Ok(SimulateOutput {
        tiling: spec,
        start,
        max_steps: a.max_steps,
        trajectory,
        classification,
        construction,
    })
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let o = simulate_output(&a)?;
    write_json(out, &o, a.pretty)
}

fn construct_cmd(name: &str, params: &[String], out: &mut dyn Write) -> CmdResult {
    let r = build_construction(name, params)?;
    let t = Tiling::new(&r.spec).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let cl = classify(&t, r.start, 10_000, EPS_MATCH);
    let matches = r.expected.matches(&cl.kind);
    write_json(
        out,
        &serde_json::json!({"construction": r, "classification": cl, "matches_expected": matches}),
        true,
    )
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let ids: Vec<&str> = if a.id == "all" {
        THEOREM_IDS.to_vec()
    } else if THEOREM_IDS.contains(&a.id.as_str()) {
        vec![a.id.as_str()]
    } else {
        return Err(Failure::new(
            EXIT_INVALID,
            format!("unknown theorem id `{}` (known: all, {})", a.id, THEOREM_IDS.join(", ")),
        ));
    };
    std::fs::create_dir_all(&a.out)?;
    let grid = GridConfig {
        samples: a.samples,
        max_steps: a.max_steps,
    };
    let mut all_pass = true;
    for id in ids {
        let t0 = Instant::now();
        let report = verify_theorem(id, grid, a.seed).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
        let secs = t0.elapsed().as_secs_f64();
        let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::new(EXIT_FAIL, e.to_string()))?;
        std::fs::write(a.out.join(format!("{id}.json")), json + "\n")?;
        std::fs::write(a.out.join(format!("{id}.txt")), report.to_text())?;
        let passed = report.cases.iter().filter(|c| c.pass).count();
        writeln!(
            out,
            "{} {id}: {passed}/{} cases",
            if report.pass { "PASS" } else { "FAIL" },
            report.cases.len()
        )?;
        for c in report.failures().take(5) {
            writeln!(out, "  #{} {}: expected {}, observed {}", c.index, c.label, c.expected, c.observed)?;
        }
        // wall-clock time stays out of the report files so they are reproducible
        writeln!(err, "{id}: {secs:.3}s")?;
        all_pass &= report.pass;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct CsvRow {
    kind: String,
    period: Option<usize>,
    hits: usize,
    edge: String,
    t: f64,
    dir: f64,
    drift_x: Option<f64>,
    drift_y: Option<f64>,
}

fn scan_cmd(a: ScanArgs, out: &mut dyn Write) -> CmdResult {
    let (spec, _) = io::parse_tiling(&a.tiling)?;
    let slots = a
        .slots
        .as_deref()
        .map(|s| s.split(',').map(|x| x.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(|e| Failure::new(EXIT_INVALID, format!("--slots: {e}")))?;
    let grid = ScanGrid {
        slots,
        positions: a.positions,
        directions: a.directions,
    };
    let report = scan(&spec, &grid, a.max_steps).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let mut buf: Vec<u8> = Vec::new();
    match a.format {
        Format::Json => {
            write_json(&mut buf, &report, true)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            for o in &report.orbits {
                let drift = match o.kind {
                    tilebill_core::classify::Kind::DriftPeriodic { drift, .. } => Some(drift),
                    _ => None,
                };
                w.serialize(CsvRow {
                    kind: o.kind.label(),
                    period: o.kind.period(),
                    hits: o.hits,
                    edge: o.start.edge.to_string(),
                    t: o.start.t,
                    dir: o.start.dir,
                    drift_x: drift.map(|d| d[0]),
                    drift_y: drift.map(|d| d[1]),
                })
                .map_err(|e| Failure::new(EXIT_FAIL, e.to_string()))?;
            }
            w.flush()?;
        }
    }
    match &a.out {
        Some(p) => std::fs::write(p, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(EXIT_OK)
}

/// Trace length used when drawing a construction: exactly one period when
/// the construction is known to close up.
pub fn display_steps(r: &ConstructionResult, fallback: usize) -> usize {
    match r.expected {
        Expected::Periodic { period } => period,
        _ => fallback,
    }
}

fn render(a: RenderArgs, out: &mut dyn Write) -> CmdResult {
    let style: Style = match &a.style {
        Some(p) => {
            let body = std::fs::read_to_string(p)?;
            serde_json::from_str(&body).map_err(|e| Failure::new(EXIT_INVALID, format!("style: {e}")))?
        }
        None => Style::default(),
    };
    let viewport = a
        .viewport
        .as_deref()
        .map(|v| io::parse_floats(v, 4).map(|v| Viewport::new(v[0], v[1], v[2], v[3])))
        .transpose()
        .map_err(|m| Failure::new(EXIT_INVALID, m))?;
    let (tiling, trajectory): (Tiling, Trajectory) = match (&a.input, &a.construct) {
        (Some(path), None) => {
            let mut text = String::new();
            if path == "-" {
                BufReader::new(std::io::stdin()).read_to_string(&mut text)?;
            } else {
                text = std::fs::read_to_string(path)?;
            }
            match io::parse_render_input(&text)? {
                RenderInput::Simulated(s) => {
                    let t = Tiling::new(&s.tiling).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
                    (t, s.trajectory)
                }
                RenderInput::Bare(tr) => {
                    let arg = a
                        .tiling
                        .as_deref()
                        .ok_or_else(|| Failure::new(EXIT_INVALID, "a bare trajectory needs --tiling"))?;
                    (io::parse_tiling(arg)?.1, tr)
                }
            }
        }
        (None, Some(name)) => {
            let r = build_construction(name, &a.params)?;
            let t = Tiling::new(&r.spec).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
            let tr = trace(&t, r.start, display_steps(&r, a.max_steps));
            (t, tr)
        }
        _ => return Err(Failure::new(EXIT_INVALID, "give exactly one of --input and --construct")),
    };
    let svg = render_svg(&tiling, std::slice::from_ref(&trajectory), viewport, &style)
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    match &a.out {
        Some(p) => std::fs::write(p, svg)?,
        None => out.write_all(svg.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn serve(a: ServeArgs, err: &mut dyn Write) -> CmdResult {
    let session = Arc::new(Session::default());
    if a.stdio {
        let stdin = std::io::stdin();
        session.serve_stream(stdin.lock(), std::io::stdout())?;
        return Ok(EXIT_OK);
    }
    let listener = TcpListener::bind(("127.0.0.1", a.port))?;
    writeln!(err, "listening on {}", listener.local_addr()?)?;
    err.flush()?;
    session.serve_tcp(listener)?;
    Ok(EXIT_OK)
}
