//! Session protocol v1: one JSON request per line, one JSON response per
//! line, over TCP (a thread per connection) or stdio.
//!
//! ```text
//! {"v":1,"id":7,"op":"trace","tiling":{"variant":"square"},"start":{"cell":[0,0],"slot":"bottom","t":0.5,"dir":1.0},"max_steps":100}
//! {"v":1,"op":"construct","name":"trihex_period24","params":{}}
//! {"v":1,"op":"classify","tiling":…,"start":…}          (or "trajectory":… instead of "start")
//! ```
//!
//! Success: `{"v":1,"id":…,"ok":true,…}`; failure:
//! `{"v":1,"id":…,"ok":false,"error":{"code":…,"message":…}}`. Errors are
//! always responses, never a process exit.

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;
use serde::Deserialize;
use serde_json::{json, Value};
use tilebill_core::classify::{classify, classify_trajectory, EPS_MATCH};
use tilebill_core::construct::{construct, ConstructionError, Expected, Params};
use tilebill_core::sim::{trace, Trajectory};
use tilebill_core::tiling::{Tiling, TilingSpec};

use crate::io::StartSpec;

pub const VERSION: u64 = 1;
/// Hard cap on `max_steps` for a single request.
pub const MAX_STEPS_LIMIT: usize = 1_000_000;
pub const DEFAULT_MAX_STEPS: usize = 10_000;
/// Trace length shown for constructions not known to close up.
pub const CONSTRUCT_DISPLAY_STEPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    BadRequest,
    UnsupportedVersion,
    InvalidSpec,
    InvalidStart,
    Infeasible,
    UnknownConstruction,
    LimitExceeded,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::BadRequest => "bad_request",
            ErrorCode::UnsupportedVersion => "unsupported_version",
            ErrorCode::InvalidSpec => "invalid_spec",
            ErrorCode::InvalidStart => "invalid_start",
            ErrorCode::Infeasible => "infeasible",
            ErrorCode::UnknownConstruction => "unknown_construction",
            ErrorCode::LimitExceeded => "limit_exceeded",
        }
    }
}

struct Failure(ErrorCode, String);

type Reply = Result<serde_json::Map<String, Value>, Failure>;

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum Request {
    Trace {
        tiling: TilingSpec,
        start: StartSpec,
        #[serde(default)]
        max_steps: Option<usize>,
        #[serde(default)]
        eps: Option<f64>,
    },
    Construct {
        name: String,
        #[serde(default)]
        params: Params,
        #[serde(default)]
        max_steps: Option<usize>,
    },
    Classify {
        tiling: TilingSpec,
        #[serde(default)]
        start: Option<StartSpec>,
        #[serde(default)]
        trajectory: Option<Trajectory>,
        #[serde(default)]
        max_steps: Option<usize>,
        #[serde(default)]
        eps: Option<f64>,
    },
}

/// Request handler with a small cache of compiled tilings.
pub struct Session {
    cache: Mutex<LruCache<String, Arc<Tiling>>>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(64)
    }
}

impl Session {
    pub fn new(capacity: usize) -> Session {
        let cap = NonZeroUsize::new(capacity.max(1)).expect("nonzero");
        Session {
            cache: Mutex::new(LruCache::new(cap)),
        }
    }

    /// Number of compiled tilings currently cached.
    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    fn tiling(&self, spec: &TilingSpec) -> Result<Arc<Tiling>, Failure> {
        let key = serde_json::to_string(spec).map_err(|e| Failure(ErrorCode::InvalidSpec, e.to_string()))?;
        if let Some(t) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(t.clone());
        }
        // compile outside the lock; a racing duplicate compile is harmless
        let t = Arc::new(Tiling::new(spec).map_err(|e| Failure(ErrorCode::InvalidSpec, e.to_string()))?);
        self.cache.lock().expect("cache lock").put(key, t.clone());
        Ok(t)
    }

    /// Handle one request line; always returns one response line (no newline).
    pub fn handle_line(&self, line: &str) -> String {
        let value: Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(e) => return respond(&Value::Null, Err(Failure(ErrorCode::BadRequest, e.to_string()))),
        };
        let id = value.get("id").cloned().unwrap_or(Value::Null);
        respond(&id, self.dispatch(value))
    }

    fn dispatch(&self, mut value: Value) -> Reply {
        let Some(obj) = value.as_object_mut() else {
            return Err(Failure(ErrorCode::BadRequest, "request must be a JSON object".into()));
        };
        match obj.remove("v") {
            Some(v) if v.as_u64() == Some(VERSION) => {}
            Some(v) => return Err(Failure(ErrorCode::UnsupportedVersion, format!("unsupported version {v}; this server speaks v1"))),
            None => return Err(Failure(ErrorCode::BadRequest, "missing \"v\"".into())),
        }
        obj.remove("id");
        // malformed specs get their own code
        if let Some(spec) = obj.get("tiling") {
            if let Err(e) = serde_json::from_value::<TilingSpec>(spec.clone()) {
                return Err(Failure(ErrorCode::InvalidSpec, e.to_string()));
            }
        }
        if let Some(start) = obj.get("start") {
            if let Err(e) = serde_json::from_value::<StartSpec>(start.clone()) {
                return Err(Failure(ErrorCode::InvalidStart, format!("unrecognised start: {e}")));
            }
        }
        let req: Request = serde_json::from_value(value).map_err(|e| Failure(ErrorCode::BadRequest, e.to_string()))?;
        match req {
            Request::Trace {
                tiling,
                start,
                max_steps,
                eps,
            } => {
                let max_steps = limit(max_steps.unwrap_or(DEFAULT_MAX_STEPS))?;
                let t = self.tiling(&tiling)?;
                let st = start.resolve(&t).map_err(|e| Failure(ErrorCode::InvalidStart, e.to_string()))?;
                let traj = trace(&t, st, max_steps);
                let cl = classify(&t, st, max_steps, eps.unwrap_or(EPS_MATCH));
                Ok(fields(json!({"start": st, "trajectory": traj, "classification": cl})))
            }
            Request::Construct { name, params, max_steps } => {
                let max_steps = max_steps.map(limit).transpose()?;
                let r = construct(&name, &params).map_err(|e| match e {
                    ConstructionError::Infeasible(m) => Failure(ErrorCode::Infeasible, m),
                    ConstructionError::InvalidParams(m) if m.starts_with("unknown construction") => {
                        Failure(ErrorCode::UnknownConstruction, m)
                    }
                    ConstructionError::InvalidParams(m) => Failure(ErrorCode::BadRequest, m),
                })?;
                let t = self.tiling(&r.spec)?;
                let shown = max_steps.unwrap_or(match r.expected {
                    Expected::Periodic { period } => period,
                    _ => CONSTRUCT_DISPLAY_STEPS,
                });
                let traj = trace(&t, r.start, shown);
                let cl = classify(&t, r.start, max_steps.unwrap_or(DEFAULT_MAX_STEPS).max(shown), EPS_MATCH);
                Ok(fields(json!({"construction": r, "trajectory": traj, "classification": cl})))
            }
            Request::Classify {
                tiling,
                start,
                trajectory,
                max_steps,
                eps,
            } => {
                let max_steps = limit(max_steps.unwrap_or(DEFAULT_MAX_STEPS))?;
                let eps = eps.unwrap_or(EPS_MATCH);
                let t = self.tiling(&tiling)?;
                let cl = match (start, trajectory) {
                    (Some(s), None) => {
                        let st = s.resolve(&t).map_err(|e| Failure(ErrorCode::InvalidStart, e.to_string()))?;
                        classify(&t, st, max_steps, eps)
                    }
                    (None, Some(mut tr)) => {
                        if tr.records.is_empty() {
                            return Err(Failure(ErrorCode::InvalidStart, "empty trajectory".into()));
                        }
                        tr.renumber();
                        classify_trajectory(&t, &tr, eps)
                    }
                    _ => {
                        return Err(Failure(
                            ErrorCode::BadRequest,
                            "classify needs exactly one of \"start\" and \"trajectory\"".into(),
                        ))
                    }
                };
                Ok(fields(json!({ "classification": cl })))
            }
        }
    }

    /// Serve line-delimited requests until EOF.
    pub fn serve_stream<R: BufRead, W: Write>(&self, input: R, mut output: W) -> std::io::Result<()> {
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            writeln!(output, "{}", self.handle_line(&line))?;
            output.flush()?;
        }
        Ok(())
    }

    /// Accept connections forever, one thread each.
    pub fn serve_tcp(self: Arc<Self>, listener: TcpListener) -> std::io::Result<()> {
        for conn in listener.incoming() {
            let conn = conn?;
            let me = self.clone();
            std::thread::spawn(move || {
                let _ = me.serve_connection(conn);
            });
        }
        Ok(())
    }

    fn serve_connection(&self, conn: TcpStream) -> std::io::Result<()> {
        let reader = BufReader::new(conn.try_clone()?);
        self.serve_stream(reader, conn)
    }
}

fn limit(n: usize) -> Result<usize, Failure> {
    if n > MAX_STEPS_LIMIT {
        Err(Failure(
            ErrorCode::LimitExceeded,
            format!("max_steps {n} exceeds the limit of {MAX_STEPS_LIMIT}"),
        ))
    } else {
        Ok(n)
    }
}

fn fields(v: Value) -> serde_json::Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("response bodies are objects"),
    }
}

fn respond(id: &Value, r: Reply) -> String {
    let mut out = serde_json::Map::new();
    out.insert("v".into(), json!(VERSION));
    if !id.is_null() {
        out.insert("id".into(), id.clone());
    }
    match r {
        Ok(body) => {
            out.insert("ok".into(), json!(true));
            out.extend(body);
        }
        Err(Failure(code, message)) => {
            out.insert("ok".into(), json!(false));
            out.insert("error".into(), json!({"code": code.as_str(), "message": message}));
        }
    }
    Value::Object(out).to_string()
}
