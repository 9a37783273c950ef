//! Input formats shared by the CLI and the session server: tiling specs
//! (inline JSON, file or preset name), start specifications and
//! construction parameters.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tilebill_core::classify::Classification;
use tilebill_core::construct::{arrangement_start, ConstructionResult, ParamValue, Params};
use tilebill_core::geom::Point2;
use tilebill_core::sim::{Trajectory, TrajectoryState};
use tilebill_core::tiling::{EdgeRef, Tiling, TilingSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum InputError {
    Spec(String),
    Start(String),
    Params(String),
    Io(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Spec(m) => write!(f, "invalid tiling spec: {m}"),
            InputError::Start(m) => write!(f, "invalid start: {m}"),
            InputError::Params(m) => write!(f, "invalid parameters: {m}"),
            InputError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for InputError {}

/// Named tilings accepted wherever a spec is expected. `two_lines_<d>deg`
/// is the pair of lines through the origin meeting at `d` degrees.
pub fn preset(name: &str) -> Option<TilingSpec> {
    let spec = match name {
        "square" => TilingSpec::Square,
        "regular_hexagon" | "hexagon" => TilingSpec::RegularHexagon,
        "equilateral_triangle" | "equilateral" => TilingSpec::EquilateralTriangle,
        "kaleidoscope_30_60_90" | "kaleidoscope" => TilingSpec::Kaleidoscope,
        "trihexagonal" | "trihex" => TilingSpec::Trihexagonal,
        _ => {
            let deg: f64 = name.strip_prefix("two_lines_")?.strip_suffix("deg")?.parse().ok()?;
            if !(deg > 0.0 && deg < 180.0) {
                return None;
            }
            let a = deg.to_radians();
            TilingSpec::ConcurrentLines { angles: vec![a, PI - a] }
        }
    };
    Some(spec)
}

/// A tiling from inline JSON, a JSON file, or a preset name; compiled to
/// catch invalid parameters early.
pub fn parse_tiling(arg: &str) -> Result<(TilingSpec, Tiling), InputError> {
    let text = arg.trim();
    let spec = if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| InputError::Spec(e.to_string()))?
    } else if let Some(s) = preset(text) {
        s
    } else if Path::new(text).is_file() {
        let body = std::fs::read_to_string(text).map_err(|e| InputError::Io(format!("{text}: {e}")))?;
        serde_json::from_str(&body).map_err(|e| InputError::Spec(format!("{text}: {e}")))?
    } else {
        return Err(InputError::Spec(format!("`{text}` is neither JSON, a file, nor a preset")));
    };
    let tiling = Tiling::new(&spec).map_err(|e| InputError::Spec(e.to_string()))?;
    Ok((spec, tiling))
}

/// A lattice edge slot, by index or by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlotName {
    Index(usize),
    Name(String),
}

impl From<String> for SlotName {
    fn from(s: String) -> SlotName {
        SlotName::Name(s)
    }
}

/// How a trace start is given.
///
/// `{"edge":{"cell":[0,0],"slot":1},"t":0.5,"dir":1.0}` — an edge reference;
/// `{"cell":[0,0],"slot":"bottom","t":0.5,"dir":1.0}` — a named slot;
/// `{"point":[x,y],"dir":1.0}` — a point on an edge;
/// `{"theta":2.9}` — the standard far start for line arrangements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Edge { edge: EdgeRef, t: f64, dir: f64 },
    Named { cell: [i64; 2], slot: SlotName, t: f64, dir: f64 },
    Point { point: [f64; 2], dir: f64 },
    Theta { theta: f64 },
}

impl StartSpec {
    pub fn resolve(&self, tiling: &Tiling) -> Result<TrajectoryState, InputError> {
        let bad = |e: &dyn fmt::Display| InputError::Start(e.to_string());
        match self {
            StartSpec::Edge { edge, t, dir } => TrajectoryState::new(tiling, *edge, *t, *dir).map_err(|e| bad(&e)),
            StartSpec::Named { cell, slot, t, dir } => {
                let s = match slot {
                    SlotName::Index(i) => resolve_slot(tiling, &i.to_string())?,
                    SlotName::Name(n) => resolve_slot(tiling, n)?,
                };
                TrajectoryState::new(tiling, EdgeRef::cell(*cell, s), *t, *dir).map_err(|e| bad(&e))
            }
            StartSpec::Point { point, dir } => {
                TrajectoryState::from_point(tiling, Point2::new(point[0], point[1]), *dir).map_err(|e| bad(&e))
            }
            StartSpec::Theta { theta } => {
                if tiling.arrangement().is_none() {
                    return Err(InputError::Start("`theta` starts need a line arrangement".into()));
                }
                arrangement_start(tiling, *theta).map_err(|e| bad(&e))
            }
        }
    }
}

/// Slot index from a name (`bottom`) or a number (`1`).
pub fn resolve_slot(tiling: &Tiling, slot: &str) -> Result<usize, InputError> {
    let l = tiling
        .lattice()
        .ok_or_else(|| InputError::Start("cell edges need a lattice tiling".into()))?;
    match slot.parse::<usize>() {
        Ok(i) if i < l.edge_count() => Ok(i),
        Ok(i) => Err(InputError::Start(format!("slot {i} out of range (0..{})", l.edge_count()))),
        Err(_) => tiling.slot_by_name(slot).ok_or_else(|| {
            InputError::Start(format!("unknown slot `{slot}` (known: {})", l.edge_names().join(", ")))
        }),
    }
}

/// `cx,cy,slot` as accepted by `--edge`.
pub fn parse_edge_arg(arg: &str) -> Result<([i64; 2], String), InputError> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let bad = || InputError::Start(format!("expected `cx,cy,slot`, got `{arg}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let cx = parts[0].parse().map_err(|_| bad())?;
    let cy = parts[1].parse().map_err(|_| bad())?;
    Ok(([cx, cy], parts[2].to_string()))
}

/// Comma-separated floats of a fixed count.
pub fn parse_floats(arg: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Result<Vec<f64>, _> = arg.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(format!("expected {n} comma-separated numbers, got `{arg}`")),
    }
}

/// A parameter value: a number, or a comma-separated list of numbers.
pub fn parse_param_value(v: &str) -> Result<ParamValue, InputError> {
    let bad = || InputError::Params(format!("`{v}` is not a number or list of numbers"));
    if v.contains(',') {
        let list: Result<Vec<f64>, _> = v.split(',').map(|s| s.trim().parse::<f64>()).collect();
        list.map(ParamValue::List).map_err(|_| bad())
    } else {
        v.trim().parse::<f64>().map(ParamValue::Num).map_err(|_| bad())
    }
}

/// Parameters from `k=v` pairs and/or `--k v` / `--k=v` flag pairs.
pub fn parse_params<S: AsRef<str>>(args: &[S]) -> Result<Params, InputError> {
    let mut out = Params::new();
    let mut it = args.iter().map(AsRef::as_ref);
    while let Some(a) = it.next() {
        let (k, v) = if let Some(flag) = a.strip_prefix("--") {
            match flag.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| InputError::Params(format!("missing value for --{flag}")))?;
                    (flag.to_string(), v.to_string())
                }
            }
        } else if let Some((k, v)) = a.split_once('=') {
            (k.to_string(), v.to_string())
        } else {
            return Err(InputError::Params(format!("expected `key=value`, got `{a}`")));
        };
        out.insert(k.replace('-', "_"), parse_param_value(&v)?);
    }
    Ok(out)
}

/// What `simulate` prints, and what `render --input` reads back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub tiling: TilingSpec,
    pub start: TrajectoryState,
    pub max_steps: usize,
    pub trajectory: Trajectory,
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionResult>,
}

/// Either a full `simulate` output or a bare trajectory.
pub enum RenderInput {
    Simulated(SimulateOutput),
    Bare(Trajectory),
}

pub fn parse_render_input(text: &str) -> Result<RenderInput, InputError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| InputError::Io(e.to_string()))?;
    let parsed = if v.get("trajectory").is_some() {
        serde_json::from_value(v).map(RenderInput::Simulated)
    } else {
        serde_json::from_value(v).map(RenderInput::Bare)
    };
    let mut input = parsed.map_err(|e| InputError::Io(format!("not a simulate output or trajectory: {e}")))?;
    match &mut input {
        RenderInput::Simulated(s) => s.trajectory.renumber(),
        RenderInput::Bare(t) => t.renumber(),
    }
    Ok(input)
}
