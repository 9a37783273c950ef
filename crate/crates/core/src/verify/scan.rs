//! Grid scans: classify many starts, histogram the outcomes and keep one
//! representative per distinct orbit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::round;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_with_trace, Kind, EPS_MATCH};
use crate::geom::normalize_dir;
use crate::sim::{Trajectory, TrajectoryState};
use crate::tiling::{EdgeRef, Tiling, TilingError, TilingSpec};

/// Starts at `positions` evenly spaced points of each listed cell-(0,0)
/// edge (all of them by default), in `directions` evenly spaced directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    #[serde(default)]
    pub slots: Option<Vec<usize>>,
    pub positions: usize,
    pub directions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub kind: Kind,
    /// The first grid start that found this orbit.
    pub start: TrajectoryState,
    /// How many grid starts landed on it.
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub spec: TilingSpec,
    pub max_steps: usize,
    pub starts: usize,
    pub histogram: BTreeMap<String, usize>,
    pub orbits: Vec<OrbitEntry>,
    pub unknown: usize,
    /// Whether every periodic period is 2 mod 4 (triangle tilings only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods_2_mod_4: Option<bool>,
}

impl ScanReport {
    pub fn has_period(&self, p: usize) -> bool {
        self.orbits.iter().any(|o| o.kind == Kind::Periodic { period: p })
    }
}

type Key = (String, i64, i64);

fn key(edge: &EdgeRef, t: f64, dir: f64) -> Key {
    let (e, _) = edge.reduced();
    (format!("{e}"), round(t * 1e6) as i64, round(normalize_dir(dir) * 1e6) as i64)
}

/// Smallest key over the orbit traversed both ways; identical for every
/// start on the same orbit (and its translates).
fn canonical(traj: &Trajectory, period: usize) -> Key {
    let r = &traj.records[..=period];
    (0..period)
        .flat_map(|i| {
            let back = r[if i == 0 { period - 1 } else { i - 1 }].state.dir + PI;
            [key(&r[i].state.edge, r[i].state.t, r[i].state.dir), key(&r[i].state.edge, r[i].state.t, back)]
        })
        .min()
        .expect("nonempty orbit")
}

pub fn scan(spec: &TilingSpec, grid: &ScanGrid, max_steps: usize) -> Result<ScanReport, TilingError> {
    let t = Tiling::new(spec)?;
    let slots: Vec<usize> = match (&grid.slots, t.lattice()) {
        (Some(s), _) => s.clone(),
        (None, Some(l)) => (0..l.edge_count()).collect(),
        (None, None) => Vec::from([0]),
    };
    let mut histogram = BTreeMap::new();
    let mut orbits: Vec<OrbitEntry> = Vec::new();
    let mut index: BTreeMap<(String, Key), usize> = BTreeMap::new();
    let mut unknown = 0;
    let mut starts = 0;
    let mut periods = BTreeSet::new();
    for &slot in &slots {
        let edge = EdgeRef::cell([0, 0], slot);
        for i in 0..grid.positions {
            let pos = (i as f64 + 0.5) / grid.positions as f64;
            for j in 0..grid.directions {
                let dir = TAU * (j as f64 + 0.5) / grid.directions as f64;
                let Ok(st) = TrajectoryState::new(&t, edge, pos, dir) else {
                    continue;
                };
                starts += 1;
                let (c, traj) = classify_with_trace(&t, st, max_steps, EPS_MATCH);
                *histogram.entry(c.kind.label()).or_insert(0) += 1;
                let Some(p) = c.kind.period() else {
                    unknown += matches!(c.kind, Kind::Unknown) as usize;
                    continue;
                };
                if c.kind.is_periodic() {
                    periods.insert(p);
                }
                let k = (c.kind.label(), canonical(&traj, p));
                match index.get(&k) {
                    Some(&o) => orbits[o].hits += 1,
                    None => {
                        index.insert(k, orbits.len());
                        orbits.push(OrbitEntry {
                            kind: c.kind,
                            start: st,
                            hits: 1,
                        });
                    }
                }
            }
        }
    }
    let periods_2_mod_4 = spec.triangle_angles().map(|_| periods.iter().all(|p| p % 4 == 2));
    Ok(ScanReport {
        spec: spec.clone(),
        max_steps,
        starts,
        histogram,
        orbits,
        unknown,
        periods_2_mod_4,
    })
}
