use std::collections::BTreeMap;

use double_cluster::seedcore::{build_dual_seed, build_initial_seed, build_qn, diagonal_reduce, to_dot, QuiverDoc, VertexKind};

type Multiset = BTreeMap<(String, String), u32>;

fn fixture_q4() -> Multiset {
    let text = include_str!("fixtures/q4_arrows.txt");
    let mut out = Multiset::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut it = line.split_whitespace();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        *out.entry((a.to_string(), b.to_string())).or_default() += 1;
    }
    out
}

fn built(n: usize) -> Multiset {
    build_qn(n)
        .unwrap()
        .named_arrows()
        .into_iter()
        .map(|(a, b, m)| ((a, b), m))
        .collect()
}

/// Parses `"a" -> "b";` lines of a DOT file into a multiset.
fn dot_edges(dot: &str) -> Multiset {
    let mut out = Multiset::new();
    for line in dot.lines().filter(|l| l.contains("->")) {
        let names: Vec<&str> = line.split('"').filter(|s| !s.trim().is_empty() && !s.contains("->") && !s.contains(';')).collect();
        *out.entry((names[0].to_string(), names[1].to_string())).or_default() += 1;
    }
    out
}

/// Arrow total implied by the triangle and path rules.
fn rule_arrow_count(n: usize) -> u32 {
    let n = n as u32;
    let tri = |k: u32| 3 * k;
    let h = tri((n - 1) * (n - 2) / 2);
    let g = tri(n * (n - 1) / 2);
    let f = if n >= 3 { tri((n - 2) * (n - 3) / 2) } else { 0 };
    let paths = if n > 2 {
        (2 * n - 3) + (n - 1) + 2 * (n - 2) + 2 * (n - 1) + (n - 1) + n
    } else {
        2 * (n - 1) + (n - 1) + n
    };
    h + g + 2 * f + paths
}

#[test]
fn q4_matches_fixture() {
    let fixture = fixture_q4();
    assert_eq!(fixture.values().sum::<u32>(), 58);
    assert_eq!(built(4), fixture);
}

#[test]
fn q4_dot_export_matches_fixture() {
    assert_eq!(dot_edges(&to_dot(&build_qn(4).unwrap())), fixture_q4());
}

#[test]
fn q2_json_matches_hand_fixture() {
    let expected: QuiverDoc = serde_json::from_str(include_str!("fixtures/q2.json")).unwrap();
    assert_eq!(QuiverDoc::from_quiver(&build_qn(2).unwrap()), expected);
}

#[test]
fn counts_follow_the_rules() {
    for n in 2..=6 {
        let q = build_qn(n).unwrap();
        assert_eq!(q.vertex_count() - q.count_kind(VertexKind::Isolated), 2 * n * n - n + 1, "n = {n}");
        assert_eq!(q.count_kind(VertexKind::Isolated), n - 1);
        assert_eq!(q.count_kind(VertexKind::Stable), 2 * n);
        assert_eq!(q.arrow_count(), rule_arrow_count(n), "n = {n}");
        let special: Vec<_> = q.vertices.iter().filter(|v| v.is_special()).collect();
        assert_eq!(special.len(), 1);
        assert_eq!(special[0].name(), "phi_1_1");
        assert_eq!(special[0].order as usize, n);
    }
}

#[test]
fn single_double_arrow_from_n4() {
    for n in 2..=6 {
        let doubles: Vec<_> = build_qn(n)
            .unwrap()
            .named_arrows()
            .into_iter()
            .filter(|a| a.2 > 1)
            .collect();
        if n > 3 {
            assert_eq!(doubles, vec![("phi_2_1".to_string(), "phi_1_2".to_string(), 2)], "n = {n}");
        } else {
            assert!(doubles.is_empty(), "n = {n}");
        }
    }
}

#[test]
fn diagonal_reduction_erases_f_and_phi() {
    for n in 2..=5 {
        let d = diagonal_reduce(&build_initial_seed(n).unwrap()).unwrap();
        assert!(d.labels().iter().all(|l| l.starts_with("g_") || l.starts_with("h_")));
        assert_eq!(d.quiver.vertex_count(), n * n);
    }
}

#[test]
fn dual_quiver_counts() {
    for n in 2..=5 {
        let q = build_dual_seed(n).unwrap().quiver;
        let live = q.vertex_count() - q.count_kind(VertexKind::Isolated);
        assert_eq!(live, n * n - n + 1, "n = {n}");
        assert_eq!(q.count_kind(VertexKind::Stable), n);
    }
}
