//! Engine-level tests: contraction structure, history replay, balance.

use std::sync::Arc;

use crate::error::Error;
use crate::forest::{Dsu, Forest};
use crate::treegen::bounded_degree_forest;

use super::*;

fn build_i64(edges: &[(usize, usize, i64)], n: usize, config: RcConfig) -> RcForest<i64> {
    let f = Forest::new(n, edges.iter().copied()).unwrap();
    RcForest::build(&f, config).unwrap()
}

fn configs() -> Vec<RcConfig> {
    vec![
        RcConfig { scheme: Scheme::Randomized, seed: 12, ..Default::default() },
        RcConfig::deterministic(),
    ]
}

#[test]
fn single_vertex_is_one_round() {
    let rc = build_i64(&[], 1, RcConfig::default());
    assert_eq!(rc.rounds(), 1);
    assert_eq!(rc.round_live_counts(), vec![1]);
    assert_eq!(rc.find_representative(0), 0);
    rc.audit_structure();
}

#[test]
fn forced_schedule_reproduces_known_contraction() {
    // path a(0) - b(1) - c(2) - d(3): round 0 compresses b and rakes d into
    // c; round 1 rakes c into a carrying the b-binary as its edge; round 2
    // finalizes a.
    let edges = [(0, 1, 1i64), (1, 2, 1), (2, 3, 1)];
    let schedule = Arc::new(vec![vec![1usize, 3], vec![2], vec![0]]);
    let config = RcConfig { scheme: Scheme::Forced(schedule), ..Default::default() };
    let rc = build_i64(&edges, 4, config);
    rc.audit_structure();
    rc.audit_aggregates();

    assert_eq!(rc.rounds(), 3);
    assert_eq!(rc.round_live_counts(), vec![4, 2, 1]);
    assert_eq!(rc.clusters[1].kind, ClusterKind::Binary);
    assert_eq!(rc.clusters[3].kind, ClusterKind::Unary);
    assert_eq!(rc.clusters[2].kind, ClusterKind::Unary);
    assert_eq!(rc.clusters[0].kind, ClusterKind::Nullary);
    // the binary formed by b and the unary formed by d merge when c rakes
    assert_eq!(rc.clusters[1].parent, 2);
    assert_eq!(rc.clusters[3].parent, 2);
    assert_eq!(rc.clusters[2].parent, 0);
    assert_eq!(rc.clusters[0].parent, NONE32);
    // golden history dump
    let dump = rc.dump_history();
    let expected = "\
level 0: 0[L] -> 1
level 0: 1[B] -> 0 2
level 0: 2[L] -> 1 3
level 0: 3[U] -> 2
level 1: 0[L] -> 2
level 1: 2[U] -> 0
level 2: 0[N] ->
";
    assert_eq!(dump, expected);
}

#[test]
fn random_builds_pass_structure_and_aggregate_audits() {
    for config in configs() {
        for seed in 0..5 {
            let edges = bounded_degree_forest(60, 17, seed);
            let rc = build_i64(&edges, 60, config.clone());
            rc.audit_structure();
            rc.audit_aggregates();
        }
    }
}

#[test]
fn every_vertex_contracts_exactly_once_and_heights_hold() {
    let edges = bounded_degree_forest(500, 0, 7);
    for config in configs() {
        let rc = build_i64(&edges, 500, config);
        // one-to-one representative/internal-cluster mapping
        for v in 0..500 {
            assert_ne!(rc.clusters[v].kind, ClusterKind::Vacant);
            assert_ne!(rc.clusters[v].kind, ClusterKind::BaseEdge);
        }
        // parent/child links form a forest of height <= rounds
        let rounds = rc.rounds();
        for v in 0..500usize {
            let mut depth = 0;
            let mut c = v as u32;
            while rc.clusters[c as usize].parent != NONE32 {
                c = rc.clusters[c as usize].parent;
                depth += 1;
                assert!(depth <= rounds + 1, "parent chain too deep at {v}");
            }
            assert_eq!(rc.clusters[c as usize].kind, ClusterKind::Nullary);
        }
    }
}

#[test]
fn connectivity_matches_union_find_after_build() {
    let edges = bounded_degree_forest(300, 41, 3);
    let mut dsu = Dsu::new(300);
    for &(u, v, _) in &edges {
        dsu.union(u, v);
    }
    for config in configs() {
        let rc = build_i64(&edges, 300, config);
        for u in 0..300 {
            for v in (u..300).step_by(7) {
                assert_eq!(
                    rc.find_representative(u) == rc.find_representative(v),
                    dsu.same(u, v),
                    "pair ({u},{v})"
                );
            }
        }
    }
}

#[test]
fn empty_batches_touch_nothing() {
    let mut rc = build_i64(&[(0, 1, 5)], 2, RcConfig::default());
    let stats = rc.batch_link(&[]).unwrap();
    assert_eq!(stats.touched_nodes, 0);
    let stats = rc.batch_cut(&[]).unwrap();
    assert_eq!(stats.touched_nodes, 0);
}

#[test]
fn smallest_link_and_cut() {
    let mut rc = build_i64(&[], 2, RcConfig::default());
    assert_ne!(rc.find_representative(0), rc.find_representative(1));
    rc.batch_link(&[(0, 1, 7)]).unwrap();
    rc.audit_structure();
    assert_eq!(rc.find_representative(0), rc.find_representative(1));

    rc.batch_cut(&[(0, 1)]).unwrap();
    rc.audit_structure();
    assert_ne!(rc.find_representative(0), rc.find_representative(1));
    assert_eq!(rc.clusters[0].kind, ClusterKind::Nullary);
    assert_eq!(rc.clusters[1].kind, ClusterKind::Nullary);
}

#[test]
fn update_validation_errors_leave_state_unchanged() {
    let mut rc = build_i64(&[(0, 1, 1), (1, 2, 1)], 4, RcConfig::default());
    let before = rc.dump_history();
    assert_eq!(rc.batch_link(&[(0, 2, 1)]).unwrap_err(), Error::Cycle(0, 2));
    assert_eq!(rc.batch_link(&[(0, 1, 1)]).unwrap_err(), Error::DuplicateEdge(0, 1));
    assert_eq!(rc.batch_cut(&[(0, 3)]).unwrap_err(), Error::NotAnEdge(0, 3));
    assert_eq!(rc.batch_cut(&[(0, 1), (1, 0)]).unwrap_err(), Error::NotAnEdge(0, 1));
    assert_eq!(
        rc.batch_link(&[(3, 9, 1)]).unwrap_err(),
        Error::VertexOutOfRange(9, 4)
    );
    assert_eq!(before, rc.dump_history(), "failed batches must not mutate");

    // degree bound: vertex 1 already has degree 2
    let mut rc = build_i64(&[(0, 1, 1), (1, 2, 1)], 5, RcConfig::default());
    rc.batch_link(&[(1, 3, 1)]).unwrap();
    assert_eq!(rc.batch_link(&[(1, 4, 1)]).unwrap_err(), Error::DegreeExceeded(1, 3));
}

#[test]
fn interleaved_churn_keeps_structure_valid() {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let n = 120;
    for config in configs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut rc = RcForest::<i64>::new(n, config);
        rc.insert_vertices(0..n);
        let mut live: Vec<(usize, usize, i64)> = Vec::new();
        let mut dsu_check = |live: &Vec<(usize, usize, i64)>, rc: &RcForest<i64>| {
            let mut dsu = Dsu::new(n);
            for &(u, v, _) in live {
                dsu.union(u, v);
            }
            for u in (0..n).step_by(3) {
                for v in (u..n).step_by(5) {
                    assert_eq!(
                        rc.find_representative(u) == rc.find_representative(v),
                        dsu.same(u, v)
                    );
                }
            }
        };

        for round in 0..15 {
            // random cuts
            let mut cuts = Vec::new();
            let ncuts = rng.gen_range(0..=live.len().min(8));
            for _ in 0..ncuts {
                let i = rng.gen_range(0..live.len());
                let (u, v, _) = live.swap_remove(i);
                cuts.push((u, v));
            }
            if !cuts.is_empty() {
                rc.batch_cut(&cuts).unwrap();
            }

            // random links among distinct components, respecting degree
            let mut deg = vec![0usize; n];
            let mut dsu = Dsu::new(n);
            for &(u, v, _) in &live {
                deg[u] += 1;
                deg[v] += 1;
                dsu.union(u, v);
            }
            let mut links = Vec::new();
            for _ in 0..rng.gen_range(0..12) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && deg[u] < 3 && deg[v] < 3 && !dsu.same(u, v) {
                    dsu.union(u, v);
                    deg[u] += 1;
                    deg[v] += 1;
                    let w = rng.gen_range(1..100);
                    links.push((u, v, w));
                    live.push((u, v, w));
                }
            }
            if !links.is_empty() {
                rc.batch_link(&links).unwrap();
            }

            rc.audit_structure();
            rc.audit_aggregates();
            dsu_check(&live, &rc);
            let _ = round;
        }
    }
}

#[test]
fn cut_then_relink_restores_connectivity() {
    let edges = bounded_degree_forest(80, 0, 21);
    for config in configs() {
        let mut rc = build_i64(&edges, 80, config);
        let (u, v, w) = edges[17];
        rc.batch_cut(&[(u, v)]).unwrap();
        assert_ne!(rc.find_representative(u), rc.find_representative(v));
        rc.batch_link(&[(u, v, w)]).unwrap();
        rc.audit_structure();
        rc.audit_aggregates();
        let mut dsu = Dsu::new(80);
        for &(a, b, _) in &edges {
            dsu.union(a, b);
        }
        for x in 0..80 {
            assert_eq!(
                rc.find_representative(0) == rc.find_representative(x),
                dsu.same(0, x)
            );
        }
    }
}

#[test]
fn cuts_split_into_expected_component_counts() {
    let edges = bounded_degree_forest(200, 0, 5);
    let mut rc = build_i64(&edges, 200, RcConfig::default());
    let count_roots = |rc: &RcForest<i64>| {
        (0..200)
            .filter(|&v| rc.clusters[v].parent == NONE32)
            .count()
    };
    let before = count_roots(&rc);
    let cuts: Vec<(usize, usize)> = edges.iter().step_by(4).map(|&(u, v, _)| (u, v)).collect();
    rc.batch_cut(&cuts).unwrap();
    rc.audit_structure();
    assert_eq!(count_roots(&rc), before + cuts.len(), "each tree-edge cut adds a component");
}

#[test]
fn deterministic_scheme_is_bit_reproducible() {
    let edges = bounded_degree_forest(150, 13, 2);
    let a = build_i64(&edges, 150, RcConfig::deterministic());
    let b = build_i64(&edges, 150, RcConfig::deterministic());
    assert_eq!(a.dump_history(), b.dump_history());

    let c = build_i64(&edges, 150, RcConfig { scheme: Scheme::Randomized, seed: 5, ..Default::default() });
    let d = build_i64(&edges, 150, RcConfig { scheme: Scheme::Randomized, seed: 5, ..Default::default() });
    assert_eq!(c.dump_history(), d.dump_history(), "same seed, same structure");
}

#[test]
fn touched_nodes_scale_with_batch_not_forest() {
    let edges = bounded_degree_forest(4000, 0, 8);
    let mut rc = build_i64(&edges, 4000, RcConfig::default());
    let (u, v, w) = edges[100];
    rc.batch_cut(&[(u, v)]).unwrap();
    let small = rc.touched_nodes_last_batch();
    rc.batch_link(&[(u, v, w)]).unwrap();
    // a single-edge update replays a few nodes per level, nowhere near n
    assert!(small > 0);
    assert!(small < 1200, "single cut touched {small} nodes");
}

#[test]
fn balance_randomized_and_deterministic() {
    // geometric-mean survival per round and the round bound
    let n = 1000;
    let mut ratios = Vec::new();
    for seed in 0..20 {
        let edges = bounded_degree_forest(n, 0, seed + 100);
        let rc = build_i64(
            &edges,
            n,
            RcConfig { scheme: Scheme::Randomized, seed, ..Default::default() },
        );
        let counts = rc.round_live_counts();
        assert!(
            counts.len() <= 4 * (n as f64).log2() as usize,
            "rounds {} exceed 4 log2 n",
            counts.len()
        );
        for w in counts.windows(2) {
            ratios.push(w[1] as f64 / w[0] as f64);
        }
    }
    let geo = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    assert!(geo <= 7.0 / 8.0 + 0.02, "randomized mean survival {geo}");

    for seed in 0..20 {
        let edges = bounded_degree_forest(n, 0, seed + 100);
        let rc = build_i64(&edges, n, RcConfig::deterministic());
        let counts = rc.round_live_counts();
        for w in counts.windows(2) {
            assert!(
                (w[1] as f64) <= (w[0] as f64) * 5.0 / 6.0 + 1e-9,
                "deterministic round survival {} -> {}",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn insert_vertices_are_isolated_roots() {
    let mut rc = RcForest::<i64>::new(10, RcConfig::default());
    rc.insert_vertices([3, 7]);
    assert!(rc.is_present(3) && rc.is_present(7) && !rc.is_present(0));
    assert_eq!(rc.find_representative(3), 3);
    rc.audit_structure();
}
