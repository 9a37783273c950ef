use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use tilebill_core::classify::{classify, Kind, EPS_MATCH};
use tilebill_core::construct::*;
use tilebill_core::tiling::{Tiling, TilingSpec};

fn traced(r: &ConstructionResult) -> Kind {
    let t = Tiling::new(&r.spec).unwrap();
    classify(&t, r.start, 20_000, EPS_MATCH).kind
}

fn assert_expected(r: &ConstructionResult) {
    let k = traced(r);
    assert!(r.expected.matches(&k), "{}: expected {:?}, traced {:?}", r.name, r.expected, k);
}

fn params(pairs: &[(&str, ParamValue)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

use ParamValue::{List, Num};

#[test]
fn every_named_construction_yields_its_expected_kind() {
    let cases: Vec<(&str, Params)> = vec![
        ("two_lines", params(&[("alpha", Num(FRAC_PI_2)), ("theta", Num(1.0))])),
        ("two_lines", params(&[("alpha", Num(88f64.to_radians())), ("theta", Num(2.9))])),
        ("three_lines_periodic", params(&[("alpha", Num(0.5)), ("beta", Num(1.0)), ("gamma", Num(PI - 1.5))])),
        ("odd_lines_periodic", params(&[("angles", List(vec![0.3, 0.5, 0.7, 0.6, PI - 2.1]))])),
        (
            "odd_lines_periodic",
            params(&[("angles", List(vec![0.9, 1.0, PI - 1.9])), ("eps", Num(1e-3))]),
        ),
        ("triangle_period6", params(&[("alpha", Num(0.8)), ("beta", Num(1.1))])),
        (
            "triangle_period10",
            params(&[
                ("alpha", Num(PI / 5.0)),
                ("beta", Num(0.3 * PI)),
                ("theta", Num(0.3 * PI)),
                ("l", Num(0.19)),
            ]),
        ),
        ("right_triangle_bisecting_escape", params(&[("alpha", Num(0.3))])),
        ("right_triangle_drift", params(&[("n", Num(3.0))])),
        ("trihex_period6", Params::new()),
        ("trihex_period12", params(&[("x1", Num(0.1))])),
        ("trihex_period24", Params::new()),
        ("trihex_drift_6n", params(&[("n", Num(2.0))])),
        ("trihex_drift_12n_minus_6", params(&[("n", Num(3.0))])),
    ];
    let mut seen: Vec<&str> = cases.iter().map(|c| c.0).collect();
    seen.dedup();
    assert_eq!(seen, NAMES, "every name is exercised");
    for (name, p) in &cases {
        assert_expected(&construct(name, p).unwrap_or_else(|e| panic!("{name}: {e}")));
    }
}

#[test]
fn bad_names_and_parameters_are_rejected() {
    assert!(matches!(construct("nope", &Params::new()), Err(ConstructionError::InvalidParams(_))));
    assert!(matches!(construct("trihex_drift_6n", &Params::new()), Err(ConstructionError::InvalidParams(_))));
    let p = params(&[("n", Num(2.5))]);
    assert!(matches!(construct("right_triangle_drift", &p), Err(ConstructionError::InvalidParams(_))));
}

#[test]
fn period_ten_needs_a_scalene_triangle() {
    let third = PI / 3.0;
    assert!(matches!(
        triangle_period10(third, third, 0.3 * PI, 0.1),
        Err(ConstructionError::Infeasible(_))
    ));
    // isosceles with vertex angle at least π/3, under every labelling
    for vertex in [third, third + 0.1, 1.5, 2.2] {
        let base = (PI - vertex) / 2.0;
        assert_eq!(period10_labeling([vertex, base, base]), None, "vertex {vertex}");
    }
}

#[test]
fn trihex_family_angles_are_monotone_with_the_stated_limits() {
    let six: Vec<f64> = (1..=40).map(trihex_drift_6n_angle).collect();
    assert!(six.windows(2).all(|w| w[0] < w[1]));
    assert!((six[0] - (PI - (3.0 * 3f64.sqrt()).atan())).abs() < 1e-15);
    assert!(2.0 * PI / 3.0 - trihex_drift_6n_angle(1_000_000) < 1e-5);
    let twelve: Vec<f64> = (2..=40).map(trihex_drift_12n_minus_6_angle).collect();
    assert!(twelve.windows(2).all(|w| w[0] < w[1] && w[1] < FRAC_PI_2));
    assert!(FRAC_PI_2 - trihex_drift_12n_minus_6_angle(1_000_000) < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trihex_short_orbits(x in 0.01..0.99f64) {
        prop_assert_eq!(traced(&trihex_period6(x).unwrap()), Kind::Periodic { period: 6 });
        let half = x / 2.0;
        prop_assert_eq!(traced(&trihex_period12(half).unwrap()), Kind::Periodic { period: 12 });
    }

    #[test]
    fn three_line_and_odd_arrangements_close(w in prop::collection::vec(0.1..1.0f64, 7), n in prop::sample::select(vec![3usize, 5, 7])) {
        let total: f64 = w[..n].iter().sum();
        let gaps: Vec<f64> = w[..n].iter().map(|x| PI * x / total).collect();
        let r = odd_lines_periodic(&gaps).unwrap();
        prop_assert!(r.expected.matches(&traced(&r)));
        if n == 3 {
            let r = three_lines_periodic(gaps[0], gaps[1], gaps[2]).unwrap();
            prop_assert_eq!(traced(&r), Kind::Periodic { period: 6 });
        }
    }

    #[test]
    fn triangle_six_cycles(alpha in 0.2..1.4f64, beta in 0.2..1.4f64) {
        prop_assume!(alpha + beta < PI - 0.2);
        let spec = TilingSpec::Triangle { alpha, beta };
        let r = triangle_period6(&spec, [0, 0]).unwrap();
        prop_assert_eq!(traced(&r), Kind::Periodic { period: 6 });
    }

    #[test]
    fn perpendicular_leg_bisectors_drift(n in 2u32..9) {
        let r = right_triangle_drift(n).unwrap();
        prop_assert!(traced(&r).is_drift());
    }
}
