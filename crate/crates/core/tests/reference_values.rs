//! Family values and log-canonical coefficients at fixed points, checked
//! against values computed once by an independent symbolic implementation
//! (symbolic derivatives, projection onto d± by solving a linear system).

use double_cluster::exact::{parse_scalar, Mat, Scalar};
use double_cluster::family::{rng_from_seed, DoublePoint};
use double_cluster::harness::seed_for;
use double_cluster::poisson::{log_canonical_check, sample_points, BracketKind, Evaluator, LogCanonical};

mod common;

fn q(s: &str) -> Scalar {
    parse_scalar(s).unwrap()
}

fn point(x: &[&[i64]], y: &[&[i64]]) -> DoublePoint {
    let m = |r: &[&[i64]]| Mat::from_ints(&r.iter().map(|v| v.to_vec()).collect::<Vec<_>>());
    DoublePoint::new(m(x), m(y)).unwrap()
}

fn point_n2() -> DoublePoint {
    point(&[&[2, 1], &[1, 3]], &[&[1, -2], &[3, 1]])
}

fn point_n3() -> DoublePoint {
    point(&[&[2, 1, -1], &[1, 3, 1], &[2, 1, 4]], &[&[1, -2, 1], &[3, 1, 2], &[2, 1, 5]])
}

const VALUES_N2: &[(&str, &str)] = &[
    ("g_1_1", "5"),
    ("g_2_1", "1"),
    ("g_2_2", "3"),
    ("h_1_1", "7"),
    ("h_1_2", "-2"),
    ("h_2_2", "1"),
    ("phi_1_1", "7"),
    ("c_1", "-4"),
];

const OMEGA_N2: &[(&str, &[&str])] = &[
    ("g_1_1", &["0", "0", "0", "0", "0", "0", "0", "0"]),
    ("g_2_1", &["0", "0", "1/2", "0", "0", "1/2", "1/2", "0"]),
    ("g_2_2", &["0", "-1/2", "0", "0", "-1/2", "0", "-1/2", "0"]),
    ("h_1_1", &["0", "0", "0", "0", "0", "0", "0", "0"]),
    ("h_1_2", &["0", "0", "1/2", "0", "0", "1/2", "1/2", "0"]),
    ("h_2_2", &["0", "-1/2", "0", "0", "-1/2", "0", "1/2", "0"]),
    ("phi_1_1", &["0", "-1/2", "1/2", "0", "-1/2", "-1/2", "0", "0"]),
    ("c_1", &["0", "0", "0", "0", "0", "0", "0", "0"]),
];

const VALUES_N3: &[(&str, &str)] = &[
    ("g_1_1", "25"),
    ("g_2_1", "-5"),
    ("g_2_2", "11"),
    ("g_3_1", "2"),
    ("g_3_2", "1"),
    ("g_3_3", "4"),
    ("h_1_1", "26"),
    ("h_1_2", "-5"),
    ("h_1_3", "1"),
    ("h_2_2", "3"),
    ("h_2_3", "2"),
    ("h_3_3", "5"),
    ("f_1_1", "-3"),
    ("phi_1_1", "-414"),
    ("phi_1_2", "-12"),
    ("phi_2_1", "21"),
    ("c_1", "35"),
    ("c_2", "28"),
];

const OMEGA_N3: &[(&str, &[&str])] = &[
    ("g_1_1", &["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"]),
    ("g_2_1", &["0", "0", "1/2", "0", "0", "1/2", "0", "0", "0", "1/2", "1/2", "1/2", "1", "1", "1/2", "1/2", "0", "0"]),
    ("g_2_2", &["0", "-1/2", "0", "-1/2", "0", "0", "0", "-1/2", "-1/2", "0", "0", "0", "0", "-1/2", "-1/2", "-1/2", "0", "0"]),
    ("g_3_1", &["0", "0", "1/2", "0", "1/2", "1/2", "0", "0", "0", "1/2", "0", "1/2", "1/2", "1/2", "1/2", "1/2", "0", "0"]),
    ("g_3_2", &["0", "0", "0", "-1/2", "0", "1/2", "0", "-1/2", "0", "0", "0", "1/2", "1/2", "1/2", "0", "0", "0", "0"]),
    ("g_3_3", &["0", "-1/2", "0", "-1/2", "-1/2", "0", "0", "-1/2", "-1/2", "0", "-1/2", "0", "-1/2", "-1", "-1/2", "-1/2", "0", "0"]),
    ("h_1_1", &["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"]),
    ("h_1_2", &["0", "0", "1/2", "0", "1/2", "1/2", "0", "0", "0", "1/2", "0", "1/2", "1/2", "1/2", "1/2", "1/2", "0", "0"]),
    ("h_1_3", &["0", "0", "1/2", "0", "0", "1/2", "0", "0", "0", "1/2", "1/2", "1/2", "1", "1", "1/2", "1/2", "0", "0"]),
    ("h_2_2", &["0", "-1/2", "0", "-1/2", "0", "0", "0", "-1/2", "-1/2", "0", "0", "0", "0", "1/2", "1/2", "1/2", "0", "0"]),
    ("h_2_3", &["0", "-1/2", "0", "0", "0", "1/2", "0", "0", "-1/2", "0", "0", "1/2", "1/2", "1", "1/2", "1/2", "0", "0"]),
    ("h_3_3", &["0", "-1/2", "0", "-1/2", "-1/2", "0", "0", "-1/2", "-1/2", "0", "-1/2", "0", "1/2", "1", "1/2", "1/2", "0", "0"]),
    ("f_1_1", &["0", "-1", "0", "-1/2", "-1/2", "1/2", "0", "-1/2", "-1", "0", "-1/2", "-1/2", "0", "0", "0", "0", "0", "0"]),
    ("phi_1_1", &["0", "-1", "1/2", "-1/2", "-1/2", "1", "0", "-1/2", "-1", "-1/2", "-1", "-1", "0", "0", "1/2", "-1/2", "0", "0"]),
    ("phi_1_2", &["0", "-1/2", "1/2", "-1/2", "0", "1/2", "0", "-1/2", "-1/2", "-1/2", "-1/2", "-1/2", "0", "-1/2", "0", "0", "0", "0"]),
    ("phi_2_1", &["0", "-1/2", "1/2", "-1/2", "0", "1/2", "0", "-1/2", "-1/2", "-1/2", "-1/2", "-1/2", "0", "1/2", "0", "0", "0", "0"]),
    ("c_1", &["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"]),
    ("c_2", &["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"]),
];

fn check_values(n: usize, p: &DoublePoint, expected: &[(&str, &str)]) {
    let seed = seed_for(BracketKind::Double, n).unwrap();
    let labels = seed.labels();
    let values = seed.eval(&p.x, &p.y).unwrap();
    assert_eq!(labels.len(), expected.len());
    for (name, v) in expected {
        let k = labels.iter().position(|l| l == name).unwrap_or_else(|| panic!("missing {name}"));
        assert_eq!(values[k], q(v), "{name}");
        let reference = common::by_name(&common::dense(&p.x), &common::dense(&p.y), name);
        assert_eq!(reference, q(v), "laplace reference for {name}");
    }
}

fn check_omega(n: usize, expected: &[(&str, &[&str])]) {
    let seed = seed_for(BracketKind::Double, n).unwrap();
    let mut rng = rng_from_seed(11);
    let points = sample_points(&seed, BracketKind::Double, n, 3, &mut rng, 7).unwrap();
    let LogCanonical::Constant(omega) = log_canonical_check(&seed, &points, BracketKind::Double).unwrap() else {
        panic!("not log-canonical at n = {n}");
    };
    let names: Vec<&str> = expected.iter().map(|(k, _)| *k).collect();
    for (a, row) in expected {
        let i = omega.index_of(a).unwrap();
        for (b, w) in names.iter().zip(row.iter()) {
            let j = omega.index_of(b).unwrap();
            assert_eq!(omega.get(i, j), &q(w), "omega({a}, {b})");
        }
    }
}

#[test]
fn values_n2() {
    check_values(2, &point_n2(), VALUES_N2);
}

#[test]
fn values_n3() {
    check_values(3, &point_n3(), VALUES_N3);
}

#[test]
fn omega_n2() {
    check_omega(2, OMEGA_N2);
}

#[test]
fn omega_n3() {
    check_omega(3, OMEGA_N3);
}

#[test]
fn casimir_ends_are_determinants() {
    let p = point_n3();
    let (x, y) = (common::dense(&p.x), common::dense(&p.y));
    // c_0 = det X = g_1_1 and c_n = det Y = h_1_1
    assert_eq!(common::laplace_det(&x), common::g(&x, 1, 1));
    assert_eq!(common::laplace_det(&y), common::h(&y, 1, 1));
    assert_eq!(p.x.det().unwrap(), q("25"));
    assert_eq!(p.y.det().unwrap(), q("26"));
}
