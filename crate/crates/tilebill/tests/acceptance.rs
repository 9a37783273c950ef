//! Acceptance criteria 1–11, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output;
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic;
use std::path::PathBuf;
use std::time::Instant;

use tilebill::render::{render_svg, Style};
use tilebill_core::classify::{classify, escape_certificate_right_triangle, is_leg, theta_sequence, Kind, EPS_MATCH};
use tilebill_core::construct::*;
use tilebill_core::sim::{trace, TrajectoryState};
use tilebill_core::tiling::{EdgeRef, Tiling, TilingSpec};
use tilebill_core::verify::{scan, verify_theorem, GridConfig, ScanGrid, VerificationReport, THEOREM_IDS};

const SEED: u64 = 42;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Run a suite with default grid; fail with its first counterexample.
fn suite(id: &str) -> Result<VerificationReport, String> {
    let r = verify_theorem(id, GridConfig::default(), SEED).map_err(|e| e.to_string())?;
    if !r.pass {
        let first = r
            .failures()
            .next()
            .map(|c| format!("#{} {}: expected {}, observed {}", c.index, c.label, c.expected, c.observed))
            .unwrap_or_else(|| "no cases".into());
        return Err(format!("{id} failed: {first}"));
    }
    Ok(r)
}

fn count_prefix(r: &VerificationReport, prefix: &str) -> usize {
    r.cases.iter().filter(|c| c.label.starts_with(prefix)).count()
}

fn max_residual(r: &VerificationReport, key: &str) -> f64 {
    r.cases
        .iter()
        .filter_map(|c| c.residuals.get(key))
        .fold(0.0, |a: f64, &b| a.max(b))
}

fn regular_tilings() -> Outcome {
    let r = suite("mf_regular_tilings")?;
    for name in ["equilateral_triangle", "square", "regular_hexagon", "kaleidoscope_30_60_90"] {
        let n = count_prefix(&r, &format!("{name} start"));
        ensure(n == 100, || format!("{name}: {n} starts, want 100"))?;
    }
    Ok(format!("{} seeded starts over 4 tilings", r.cases.len()))
}

fn two_line_arrangements() -> Outcome {
    let r = suite("ek_two_lines")?;
    let right: Vec<_> = r.cases.iter().filter(|c| c.label.starts_with("alpha=1.570796 ")).collect();
    ensure(right.len() == 50 && right.iter().all(|c| c.observed == "periodic(4)"), || {
        format!("perpendicular: {} good starts", right.len())
    })?;

    // 88°: the return angle drops by 8° per revolution (four crossings)
    let c = two_lines(88f64.to_radians(), 1.55).map_err(|e| e.to_string())?;
    let t = Tiling::new(&c.spec).map_err(|e| e.to_string())?;
    let tr = trace(&t, c.start, 10_000);
    let th = theta_sequence(&t, &tr).map_err(|e| format!("{e:?}"))?;
    ensure(th.len() > 40, || format!("only {} good crossings", th.len()))?;
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let delta = (th[4 * k] - th[0]).to_degrees();
        let err = (delta + 8.0 * k as f64).abs();
        ensure(err <= 1e-9 * k as f64, || format!("return {k}: delta {delta}°"))?;
        worst = worst.max(err / k as f64);
    }
    let kind = classify(&t, c.start, 10_000, EPS_MATCH).kind;
    ensure(!kind.is_periodic(), || format!("88° classified {}", kind.label()))?;
    Ok(format!(
        "perpendicular 50/50 periodic(4); 88°: {} over 10 returns, worst |Δ+8°k|/k = {worst:.1e}°",
        kind.label()
    ))
}

fn odd_arrangements() -> Outcome {
    let three = suite("ek_three_lines")?;
    let odd = suite("odd_lines_2n")?;
    for n in [3, 5, 7] {
        let k = count_prefix(&odd, &format!("n={n} "));
        ensure(k == 10, || format!("n={n}: {k} arrangements"))?;
    }
    let res = max_residual(&odd, "return").max(max_residual(&three, "return"));
    ensure(res < 1e-7, || format!("return residual {res:e}"))?;
    Ok(format!("three lines {} cases; n ∈ {{3,5,7}} × 10 periodic(2n); max return residual {res:.1e}", three.cases.len()))
}

fn even_arrangements() -> Outcome {
    let r = suite("even_lines_condition")?;
    let satisfying = r.cases.iter().filter(|c| c.label.contains("satisfying") && c.label.ends_with("T^2")).count();
    let violating = r.cases.iter().filter(|c| c.label.contains("violating") && c.label.ends_with("T^2")).count();
    ensure(satisfying == 10 && violating == 10, || format!("{satisfying} satisfying, {violating} violating"))?;
    Ok(format!("{satisfying} satisfying all periodic(2n); {violating} violating: none periodic, T² a rotation"))
}

fn spiraling() -> Outcome {
    let r = suite("spiral_odd_perturbation")?;
    for eps in ["eps=1e-3", "eps=-1e-3", "eps=1e-5", "eps=-1e-5"] {
        ensure(r.cases.iter().any(|c| c.label.ends_with(eps)), || format!("no case for {eps}"))?;
    }
    let res = max_residual(&r, "block_delta");
    ensure(res < 1e-9, || format!("θ_3 − θ_0 off by {res:e}"))?;
    Ok(format!("{} perturbed starts, |θ_3 − θ_0 + 2ε| ≤ {res:.1e}", r.cases.len()))
}

fn isosceles() -> Outcome {
    let class = suite("iso_classification")?;
    let bounds = suite("iso_period_bounds")?;
    for v in [PI / 5.0, PI / 7.0, 0.4] {
        let prefix = format!("vertex={v:.6} ");
        ensure(count_prefix(&class, &prefix) == 100 && count_prefix(&bounds, &prefix) == 100, || {
            format!("vertex {v}: wrong sample count")
        })?;
    }
    Ok("3 vertex angles × 100 starts: all periodic or drift-periodic, within 2n+4".into())
}

fn right_triangles() -> Outcome {
    suite("right_bisect_escape")?;
    suite("right_drift_pi_over_2n")?;
    let mut worst_mid: f64 = 0.0;
    for alpha in [PI / 8.0, 0.3, 1.0] {
        let r = right_triangle_bisecting_escape(alpha).map_err(|e| e.to_string())?;
        let t = Tiling::new(&r.spec).map_err(|e| e.to_string())?;
        let tr = trace(&t, r.start, 10_000);
        ensure(tr.records.len() == 10_001, || format!("alpha={alpha}: trace stopped early"))?;
        ensure(escape_certificate_right_triangle(&t, &tr), || format!("alpha={alpha}: no certificate"))?;
        for rec in tr.records.iter().filter(|r| !is_leg(&t, &r.state.edge)) {
            worst_mid = worst_mid.max((rec.state.t - 0.5).abs());
        }
    }
    ensure(worst_mid < 1e-9, || format!("hypotenuse crossing off the midpoint by {worst_mid:e}"))?;
    let mut worst_drift: f64 = 0.0;
    for n in [2, 3, 5] {
        let r = right_triangle_drift(n).map_err(|e| e.to_string())?;
        let t = Tiling::new(&r.spec).map_err(|e| e.to_string())?;
        let c = classify(&t, r.start, 100_000, EPS_MATCH);
        let Kind::DriftPeriodic { period, drift, .. } = c.kind else {
            return Err(format!("n={n}: {}", c.kind.label()));
        };
        let tr = trace(&t, r.start, 11 * period);
        for i in 0..=10 * period {
            let d = tr.records[i + period].point - tr.records[i].point;
            worst_drift = worst_drift.max((d.x - drift[0]).abs().max((d.y - drift[1]).abs()));
        }
    }
    ensure(worst_drift < 1e-9, || format!("drift vector varies by {worst_drift:e}"))?;
    Ok(format!(
        "escape certificates over 10^4 steps, midpoint error {worst_mid:.1e}; drift n ∈ {{2,3,5}} residual {worst_drift:.1e}"
    ))
}

fn period_ten() -> Outcome {
    suite("triangle_period10_region")?;
    let r = triangle_period10(PI / 5.0, 0.3 * PI, 0.3 * PI, 0.19).map_err(|e| e.to_string())?;
    let t = Tiling::new(&r.spec).map_err(|e| e.to_string())?;
    let k = classify(&t, r.start, 10_000, EPS_MATCH).kind;
    ensure(k == Kind::Periodic { period: 10 }, || format!("construction traced {}", k.label()))?;
    let third = PI / 3.0;
    ensure(
        matches!(triangle_period10(third, third, 0.3 * PI, 0.1), Err(ConstructionError::Infeasible(_))),
        || "equilateral not rejected".into(),
    )?;
    for vertex in [third, third + 0.1, 1.5, 2.0] {
        let base = (PI - vertex) / 2.0;
        ensure(period10_labeling([vertex, base, base]).is_none(), || format!("isosceles {vertex} accepted"))?;
        ensure(
            matches!(triangle_period10(base, base, 0.3 * PI, 0.1), Err(ConstructionError::Infeasible(_))),
            || format!("isosceles {vertex} not rejected"),
        )?;
    }
    let spec = TilingSpec::Triangle {
        alpha: 8f64.to_radians(),
        beta: 79f64.to_radians(),
    };
    let grid = ScanGrid {
        slots: None,
        positions: 20,
        directions: 72,
    };
    let s = scan(&spec, &grid, 20_000).map_err(|e| e.to_string())?;
    ensure(s.has_period(34), || format!("no period 34 in {:?}", s.histogram))?;
    Ok(format!(
        "periodic(10); infeasibility raised; 8°/79°/93° scan: {} orbits incl. period 34 ({} starts)",
        s.orbits.len(),
        s.starts
    ))
}

fn trihex_lemmas() -> Outcome {
    let mut parts = Vec::new();
    for id in ["trihex_lemma_turner", "trihex_lemma_quadrilateral", "trihex_lemma_quad_triangle", "trihex_lemma_pentagon"] {
        let r = suite(id)?;
        ensure(r.samples == 1000, || format!("{id}: {} samples", r.samples))?;
        let res = max_residual(&r, "x").max(max_residual(&r, "alpha"));
        ensure(res < 1e-9, || format!("{id}: residual {res:e}"))?;
        parts.push(format!("{res:.0e}"));
    }
    Ok(format!("4 lemmas × 1000 samples, max residuals {}", parts.join(" / ")))
}

fn trihex_orbits() -> Outcome {
    for id in ["trihex_period6", "trihex_period12", "trihex_period24", "trihex_drift_6n", "trihex_drift_12n_minus_6"] {
        suite(id)?;
    }
    let dense = suite("dense_spacing")?;
    let t = Tiling::new(&TilingSpec::Trihexagonal).map_err(|e| e.to_string())?;
    let kind = |r: Result<ConstructionResult, ConstructionError>| -> Result<(Expected, Kind), String> {
        let r = r.map_err(|e| e.to_string())?;
        Ok((r.expected.clone(), classify(&t, r.start, 100_000, EPS_MATCH).kind))
    };
    let mut checked = BTreeMap::new();
    for x in [0.2, 0.5, 0.8] {
        checked.insert(format!("p6 x1={x}"), kind(trihex_period6(x))?);
    }
    for x in [0.1, 0.25, 0.4] {
        checked.insert(format!("p12 x1={x}"), kind(trihex_period12(x))?);
    }
    checked.insert("p24".into(), kind(trihex_period24())?);
    for n in [1, 2, 4] {
        checked.insert(format!("6n n={n}"), kind(trihex_drift_6n(n))?);
    }
    for n in [2, 3, 4] {
        checked.insert(format!("12n-6 n={n}"), kind(trihex_drift_12n_minus_6(n))?);
    }
    for (name, (want, got)) in &checked {
        ensure(want.matches(got) && got.period().is_some(), || format!("{name}: {} vs {}", want.label(), got.label()))?;
    }
    let spacing = max_residual(&dense, "spacing");
    ensure(spacing < 1e-9, || format!("spacing residual {spacing:e}"))?;
    Ok(format!("{} constructions matched; same-edge spacing 1/(2n−1) within {spacing:.1e}", checked.len()))
}

fn golden(name: &str) -> Result<String, String> {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.svg"));
    std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))
}

fn determinism() -> Outcome {
    for id in THEOREM_IDS {
        let a = verify_theorem(id, GridConfig::default(), SEED).map_err(|e| e.to_string())?;
        let b = verify_theorem(id, GridConfig::default(), SEED).map_err(|e| e.to_string())?;
        let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        ensure(ja == jb && a.to_text() == b.to_text(), || format!("{id} differs between runs"))?;
    }
    let style = Style::default();
    let t = Tiling::new(&TilingSpec::EquilateralTriangle).map_err(|e| e.to_string())?;
    let st = TrajectoryState::new(&t, EdgeRef::cell([0, 0], 0), 0.37, 1.0).map_err(|e| e.to_string())?;
    let svg = render_svg(&t, &[trace(&t, st, 6)], None, &style).map_err(|e| e.to_string())?;
    ensure(svg == golden("equilateral_period6")?, || "equilateral_period6.svg changed".into())?;
    let r = trihex_period24().map_err(|e| e.to_string())?;
    let t = Tiling::new(&r.spec).map_err(|e| e.to_string())?;
    let svg = render_svg(&t, &[trace(&t, r.start, 24)], None, &style).map_err(|e| e.to_string())?;
    ensure(svg == golden("trihex_period24")?, || "trihex_period24.svg changed".into())?;
    Ok(format!("{} suites byte-identical across runs; SVG goldens unchanged", THEOREM_IDS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("regular tilings", regular_tilings),
        ("two lines", two_line_arrangements),
        ("three lines and odd arrangements", odd_arrangements),
        ("even arrangements", even_arrangements),
        ("spiraling", spiraling),
        ("isosceles triangles", isosceles),
        ("right triangles", right_triangles),
        ("period 10", period_ten),
        ("trihexagonal lemmas", trihex_lemmas),
        ("trihexagonal orbits", trihex_orbits),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
