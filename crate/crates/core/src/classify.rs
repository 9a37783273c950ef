//! Asymptotic type of a trajectory: periodic, drift-periodic, escaped,
//! spiraling, corner hit, or an honest "unknown".

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geom::{angle_between, circular_distance, Point2};
use crate::sim::{CrossingRecord, Termination, Trajectory, TrajectoryState, Walker};
use crate::tiling::arrangement::in_convex;
use crate::tiling::{EdgeRef, Tiling, TilingSpec};

/// Default state-matching tolerance on `(t, dir)`.
pub const EPS_MATCH: f64 = 1e-7;
/// Tolerance on the displacement between corresponding drift points.
pub const EPS_WITNESS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    Periodic {
        period: usize,
    },
    DriftPeriodic {
        period: usize,
        drift: [f64; 2],
        /// drift in lattice-generator coordinates
        cells: [i64; 2],
    },
    Escaped,
    Spiraling {
        per_cycle_angle_delta: f64,
    },
    CornerHit,
    Unknown,
}

impl Kind {
    pub fn period(&self) -> Option<usize> {
        match *self {
            Kind::Periodic { period } | Kind::DriftPeriodic { period, .. } => Some(period),
            _ => None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Kind::Periodic { .. })
    }

    pub fn is_drift(&self) -> bool {
        matches!(self, Kind::DriftPeriodic { .. })
    }

    /// Short label such as `periodic(6)` or `drift_periodic(2)`.
    pub fn label(&self) -> alloc::string::String {
        use alloc::format;
        match self {
            Kind::Periodic { period } => format!("periodic({period})"),
            Kind::DriftPeriodic { period, .. } => format!("drift_periodic({period})"),
            Kind::Escaped => "escaped".into(),
            Kind::Spiraling { .. } => "spiraling".into(),
            Kind::CornerHit => "corner_hit".into(),
            Kind::Unknown => "unknown".into(),
        }
    }
}

/// Per-revolution angle changes of a good arrangement trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralWitness {
    /// θ_n − θ_0
    pub block_delta: f64,
    /// θ_{2n} − θ_0, one full revolution
    pub return_delta: f64,
    /// θ_{(k+1)n} − θ_{kn} for every complete block of the good prefix
    pub block_deltas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// index of the first matching state (always the start)
    pub first: usize,
    pub repeat: Option<usize>,
    pub epsilon: f64,
    /// worst mismatch at the confirming repeat
    pub residual: Option<f64>,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spiral: Option<SpiralWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub kind: Kind,
    pub witness: Witness,
}

fn state_gap(a: &TrajectoryState, b: &TrajectoryState) -> f64 {
    (a.t - b.t).abs().max(circular_distance(a.dir, b.dir))
}

/// Candidate recurrence found at `period`, awaiting confirmation.
#[derive(Clone, Copy)]
enum Candidate {
    Periodic(usize),
    Drift(usize, [i64; 2]),
}

struct Matcher<'a> {
    tiling: &'a Tiling,
    eps: f64,
    lattice: Option<(Point2, Point2)>,
}

impl Matcher<'_> {
    fn lattice_vec(&self, c: [i64; 2]) -> Point2 {
        let (a, b) = self.lattice.unwrap_or((Point2::ORIGIN, Point2::ORIGIN));
        a * c[0] as f64 + b * c[1] as f64
    }

    /// Compare record `j` against record `i` (i < j).
    fn test(&self, r: &[CrossingRecord], i: usize, j: usize) -> Option<Candidate> {
        let (a, b) = (&r[i].state, &r[j].state);
        if state_gap(a, b) >= self.eps {
            return None;
        }
        if a.edge == b.edge {
            return Some(Candidate::Periodic(j - i));
        }
        self.lattice?;
        let (ra, ca) = a.edge.reduced();
        let (rb, cb) = b.edge.reduced();
        if ra != rb {
            return None;
        }
        let dc = [cb[0] - ca[0], cb[1] - ca[1]];
        let disp = r[j].point - r[i].point;
        if (disp - self.lattice_vec(dc)).norm() < EPS_WITNESS {
            Some(Candidate::Drift(j - i, dc))
        } else {
            None
        }
    }

    fn confirm(&self, r: &[CrossingRecord], c: Candidate) -> Option<Classification> {
        let p = match c {
            Candidate::Periodic(p) | Candidate::Drift(p, _) => p,
        };
        let again = self.test(r, p, 2 * p)?;
        let residual = state_gap(&r[0].state, &r[2 * p].state);
        let kind = match (c, again) {
            (Candidate::Periodic(_), Candidate::Periodic(q)) if q == p => Kind::Periodic { period: p },
            (Candidate::Drift(_, d), Candidate::Drift(q, d2)) if q == p && d == d2 => {
                let v = self.lattice_vec(d);
                Kind::DriftPeriodic {
                    period: p,
                    drift: [v.x, v.y],
                    cells: d,
                }
            }
            _ => return None,
        };
        Some(Classification {
            kind,
            witness: Witness {
                first: 0,
                repeat: Some(p),
                epsilon: self.eps,
                residual: Some(residual),
                steps: 2 * p,
                spiral: None,
            },
        })
    }
}

/// Trace from `start` and classify, stopping as soon as a recurrence is
/// confirmed by a second period.
pub fn classify(tiling: &Tiling, start: TrajectoryState, max_steps: usize, eps: f64) -> Classification {
    classify_with_trace(tiling, start, max_steps, eps).0
}

/// [`classify`], also returning the records walked.
pub fn classify_with_trace(
    tiling: &Tiling,
    start: TrajectoryState,
    max_steps: usize,
    eps: f64,
) -> (Classification, Trajectory) {
    let m = Matcher {
        tiling,
        eps,
        lattice: tiling.translation_lattice(),
    };
    let mut walker = Walker::new(tiling, start);
    let mut records: Vec<CrossingRecord> = Vec::new();
    let mut scan = 1usize;
    let mut cand: Option<Candidate> = None;
    for rec in walker.by_ref().take(max_steps + 1) {
        records.push(rec);
        loop {
            if let Some(c) = cand {
                let p = match c {
                    Candidate::Periodic(p) | Candidate::Drift(p, _) => p,
                };
                if records.len() <= 2 * p {
                    break;
                }
                if let Some(cl) = m.confirm(&records, c) {
                    let traj = Trajectory {
                        records,
                        termination: Termination::MaxSteps,
                    };
                    return (cl, traj);
                }
                cand = None;
                scan = p + 1;
            } else if scan < records.len() {
                cand = m.test(&records, 0, scan);
                scan += 1;
            } else {
                break;
            }
        }
    }
    let termination = if records.len() == max_steps + 1 {
        Termination::MaxSteps
    } else {
        walker.stop.unwrap_or(Termination::MaxSteps)
    };
    let traj = Trajectory { records, termination };
    let cl = classify_open(m.tiling, &traj, eps);
    (cl, traj)
}

/// Classification of a trace that showed no confirmed recurrence.
fn classify_open(tiling: &Tiling, traj: &Trajectory, eps: f64) -> Classification {
    let spiral = detect_spiral(tiling, traj).ok().flatten();
    let kind = match traj.termination {
        Termination::CornerHit => Kind::CornerHit,
        Termination::EscapedArrangement => Kind::Escaped,
        Termination::MaxSteps => {
            if let Some(s) = &spiral {
                Kind::Spiraling {
                    per_cycle_angle_delta: s.per_cycle(),
                }
            } else if matches!(tiling.spec(), TilingSpec::RightTriangle { .. })
                && traj.records.len() > 2
                && escape_certificate_right_triangle(tiling, traj)
            {
                Kind::Escaped
            } else {
                Kind::Unknown
            }
        }
    };
    Classification {
        kind,
        witness: Witness {
            first: 0,
            repeat: None,
            epsilon: eps,
            residual: None,
            steps: traj.records.len().saturating_sub(1),
            spiral,
        },
    }
}

/// Classify an already traced trajectory (used when replaying stored traces).
pub fn classify_trajectory(tiling: &Tiling, traj: &Trajectory, eps: f64) -> Classification {
    let m = Matcher {
        tiling,
        eps,
        lattice: tiling.translation_lattice(),
    };
    let r = &traj.records;
    let mut j = 1;
    while j < r.len() {
        if let Some(c) = m.test(r, 0, j) {
            if 2 * j < r.len() {
                if let Some(cl) = m.confirm(r, c) {
                    return cl;
                }
            }
        }
        j += 1;
    }
    classify_open(tiling, traj, eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpiralError {
    NotArrangement,
    /// Fewer than 2n good crossings.
    NotGood,
}

/// θ_i for the good prefix of an arrangement trajectory: the angle between
/// the outgoing direction and the crossed line, measured on the side facing
/// the central zone.
pub fn theta_sequence(tiling: &Tiling, traj: &Trajectory) -> Result<Vec<f64>, SpiralError> {
    let arr = tiling.arrangement().ok_or(SpiralError::NotArrangement)?;
    let n = arr.len();
    let zone = arr.central_zone();
    let r = &traj.records;
    let mut out = Vec::new();
    let mut orientation = 0i64;
    for (i, rec) in r.iter().enumerate() {
        let Some(line) = rec.state.edge.line_index() else { break };
        if in_convex(&zone, rec.point, 1e-9) {
            break;
        }
        if i > 0 {
            let prev = r[i - 1].state.edge.line_index().unwrap_or(usize::MAX);
            let step = if (prev + 1) % n == line {
                1
            } else if (line + 1) % n == prev {
                -1
            } else {
                break;
            };
            // with two lines both neighbours coincide; any order is cyclic
            if n > 2 {
                if orientation == 0 {
                    orientation = step;
                } else if orientation != step {
                    break;
                }
            }
        }
        out.push(angle_between(arr.inward(line, rec.point), Point2::from_angle(rec.state.dir)));
    }
    Ok(out)
}

impl SpiralWitness {
    /// The revolution delta, or the block delta when revolutions cancel
    /// (odd line counts).
    pub fn per_cycle(&self) -> f64 {
        if self.return_delta.abs() > 1e-9 {
            self.return_delta
        } else {
            self.block_delta
        }
    }
}

/// Block and revolution angle deltas when they are consistent and nonzero.
pub fn detect_spiral(tiling: &Tiling, traj: &Trajectory) -> Result<Option<SpiralWitness>, SpiralError> {
    let n = tiling.arrangement().ok_or(SpiralError::NotArrangement)?.len();
    let th = theta_sequence(tiling, traj)?;
    if th.len() < 2 * n + 1 {
        return Err(SpiralError::NotGood);
    }
    let blocks: Vec<f64> = (0..)
        .map(|k| k * n)
        .take_while(|&i| i + n < th.len())
        .map(|i| th[i + n] - th[i])
        .collect();
    let returns: Vec<f64> = (0..)
        .map(|k| 2 * k * n)
        .take_while(|&i| i + 2 * n < th.len())
        .map(|i| th[i + 2 * n] - th[i])
        .collect();
    let tol = 1e-9;
    let r0 = returns[0];
    let b0 = blocks[0];
    let steady_returns = r0.abs() > tol && returns.iter().all(|r| (r - r0).abs() < tol);
    // odd line counts alternate the sign of the block delta
    let alternating = b0.abs() > tol
        && blocks
            .iter()
            .enumerate()
            .all(|(k, b)| (b - if k % 2 == 0 { b0 } else { -b0 }).abs() < tol);
    if steady_returns || alternating {
        Ok(Some(SpiralWitness {
            block_delta: b0,
            return_delta: r0,
            block_deltas: blocks,
        }))
    } else {
        Ok(None)
    }
}

/// Leg edges (the two perpendicular sides) of a right-triangle tiling.
pub fn is_leg(tiling: &Tiling, e: &EdgeRef) -> bool {
    match (tiling.lattice(), e.slot()) {
        (Some(l), Some(s)) => l.edge_names()[s] != "hypotenuse",
        _ => false,
    }
}

/// True when no two consecutive crossings are both on legs, which forces
/// the trajectory to keep moving up-right (or down-left) forever.
pub fn escape_certificate_right_triangle(tiling: &Tiling, traj: &Trajectory) -> bool {
    traj.records
        .windows(2)
        .all(|w| !(is_leg(tiling, &w[0].state.edge) && is_leg(tiling, &w[1].state.edge)))
}
