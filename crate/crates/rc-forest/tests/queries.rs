//! Query families against the brute-force oracles, on degree-3 forests.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use rc_forest::oracle::*;
use rc_forest::rc::{DecompPart, RcConfig, RcForest, Scheme};
use rc_forest::treegen::bounded_degree_forest;
use rc_forest::{AggKind, Error, Forest, SubtreeContent};

fn schemes(seed: u64) -> Vec<RcConfig> {
    vec![
        RcConfig { scheme: Scheme::Randomized, seed, ..Default::default() },
        RcConfig::deterministic(),
    ]
}

fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n)
}

#[test]
fn connectivity_matches_oracle() {
    let n = 500;
    let edges = bounded_degree_forest(n, 83, 11);
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    for config in schemes(1) {
        let rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pairs: Vec<(usize, usize)> =
            (0..200).map(|_| (pick(&mut rng, n), pick(&mut rng, n))).collect();
        let got = rc.batch_connected(&pairs);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            assert_eq!(got[i], oracle_connected(&forest, u, v).unwrap(), "({u},{v})");
        }
        assert!(rc.batch_connected(&[(3, 3)])[0], "self connectivity");
    }
}

#[test]
fn subtree_weights_match_oracle_all_aggregates() {
    let n = 1000;
    let edges = bounded_degree_forest(n, 171, 23);
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    for config in schemes(2) {
        let rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut pairs = Vec::new();
        while pairs.len() < 150 {
            let u = pick(&mut rng, n);
            if let Some(&(p, _)) = forest.neighbors(u).first() {
                pairs.push((u, p));
            }
        }
        for agg in [AggKind::Sum, AggKind::Min, AggKind::Max] {
            let got = rc.batch_subtree_weight(&pairs, agg).unwrap();
            for (i, &(u, p)) in pairs.iter().enumerate() {
                let want =
                    oracle_subtree_aggregate(&forest, u, p, SubtreeContent::Edges, agg).unwrap();
                assert_eq!(*got[i].as_ref().unwrap(), want, "{agg:?} ({u},{p})");
                // batched equals single
                assert_eq!(rc.subtree_query(u, p, agg).unwrap(), want, "single {agg:?}");
            }
        }
    }
}

#[test]
fn subtree_vertex_mode_matches_oracle() {
    let n = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let edges = bounded_degree_forest(n, 0, 31);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..50)).collect();
    let forest = Forest::new(n, edges.iter().copied())
        .unwrap()
        .with_vertex_weights(weights)
        .unwrap();
    let config = RcConfig {
        subtree_content: SubtreeContent::EdgesAndVertices,
        ..RcConfig::deterministic()
    };
    let rc = RcForest::build(&forest, config).unwrap();
    for _ in 0..100 {
        let u = pick(&mut rng, n);
        let Some(&(p, _)) = forest.neighbors(u).first() else { continue };
        for agg in [AggKind::Sum, AggKind::Min, AggKind::Max] {
            let want =
                oracle_subtree_aggregate(&forest, u, p, SubtreeContent::EdgesAndVertices, agg)
                    .unwrap();
            let got = &rc.batch_subtree_weight(&[(u, p)], agg).unwrap()[0];
            assert_eq!(*got.as_ref().unwrap(), want, "{agg:?} ({u},{p})");
        }
    }
}

#[test]
fn subtree_errors_are_per_item() {
    let forest = Forest::new(3, [(0, 1, 5i64)]).unwrap();
    let rc = RcForest::build(&forest, RcConfig::default()).unwrap();
    let got = rc
        .batch_subtree_weight(&[(0, 1), (0, 2), (1, 0)], AggKind::Sum)
        .unwrap();
    assert!(got[0].is_ok());
    assert_eq!(got[1], Err(Error::NotAnEdge(0, 2)));
    assert!(got[2].is_ok());
    // leaf away from its parent: empty contents
    assert_eq!(got[0], Ok(Some(0)));
    assert_eq!(
        rc.batch_subtree_weight(&[(0, 1)], AggKind::Min).unwrap()[0],
        Ok(None)
    );
}

#[test]
fn lca_matches_oracle_including_cross_component() {
    let n = 400;
    let edges = bounded_degree_forest(n, 57, 3);
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    for config in schemes(4) {
        let rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let triples: Vec<(usize, usize, usize)> = (0..300)
            .map(|_| (pick(&mut rng, n), pick(&mut rng, n), pick(&mut rng, n)))
            .collect();
        let got = rc.batch_lca(&triples);
        for (i, &(u, v, r)) in triples.iter().enumerate() {
            assert_eq!(got[i], oracle_lca(&forest, u, v, r).unwrap(), "({u},{v},{r})");
        }
        // trivial identities
        assert_eq!(rc.batch_lca(&[(7, 7, rc.find_representative(7))])[0], Some(7));
        assert_eq!(rc.batch_lca(&[(7, 9, 7)])[0], oracle_lca(&forest, 7, 9, 7).unwrap());
    }
}

#[test]
fn fixed_root_lca_matches_oracle() {
    let n = 300;
    let edges = bounded_degree_forest(n, 0, 9); // one component
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    for config in schemes(5) {
        let rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for root in [rc.find_representative(0), 5, 250] {
            let pairs: Vec<(usize, usize)> =
                (0..200).map(|_| (pick(&mut rng, n), pick(&mut rng, n))).collect();
            let got = rc.batch_fixed_lca(root, &pairs).unwrap();
            for (i, &(u, v)) in pairs.iter().enumerate() {
                assert_eq!(
                    Some(got[i]),
                    oracle_lca(&forest, u, v, root).unwrap(),
                    "root {root} pair ({u},{v})"
                );
            }
            // a pair with an ancestor answers the ancestor
            assert_eq!(rc.batch_fixed_lca(root, &[(root, 42)]).unwrap()[0], root);
        }
    }

    // outside-component pairs are contract violations
    let split = Forest::new(4, [(0, 1, 1i64), (2, 3, 1)]).unwrap();
    let rc = RcForest::build(&split, RcConfig::default()).unwrap();
    assert_eq!(
        rc.batch_fixed_lca(0, &[(2, 3)]).unwrap_err(),
        Error::OutsideComponent(2, 3)
    );
}

#[test]
fn path_sums_match_oracle() {
    let n = 800;
    let edges = bounded_degree_forest(n, 133, 6);
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    for config in schemes(6) {
        let rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let pairs: Vec<(usize, usize)> =
            (0..250).map(|_| (pick(&mut rng, n), pick(&mut rng, n))).collect();
        let got = rc.batch_path_sum(&pairs).unwrap();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            assert_eq!(got[i], oracle_path_sum(&forest, u, v).unwrap(), "({u},{v})");
            assert_eq!(rc.path_query(u, v).unwrap(), got[i], "single ({u},{v})");
        }
    }
}

#[test]
fn path_sum_trivia() {
    let forest = Forest::new(3, [(0, 1, 5i64), (1, 2, 3)]).unwrap();
    let rc = RcForest::build(&forest, RcConfig::default()).unwrap();
    assert_eq!(rc.batch_path_sum(&[(0, 0)]).unwrap()[0], Some(0));
    assert_eq!(rc.batch_path_sum(&[(0, 2)]).unwrap()[0], Some(8));
    assert_eq!(rc.path_query(2, 0).unwrap(), Some(8));
}

#[test]
fn path_decomposition_partitions_the_path() {
    for seed in 0..20 {
        let n = 60;
        let edges = bounded_degree_forest(n, 29, seed);
        let forest = Forest::new(n, edges.iter().copied()).unwrap();
        let config = if seed % 2 == 0 {
            RcConfig { scheme: Scheme::Randomized, seed, ..Default::default() }
        } else {
            RcConfig::deterministic()
        };
        let rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        let mut checked = 0;
        while checked < 100 {
            let (u, v) = (pick(&mut rng, n), pick(&mut rng, n));
            let Some((total, parts)) = rc.path_decomposition(u, v).unwrap() else {
                continue;
            };
            checked += 1;
            // the cluster paths are disjoint and union to exactly the path
            let mut union = std::collections::BTreeSet::new();
            for &c in &parts {
                for e in rc.cluster_path_edges(c) {
                    assert!(union.insert(e), "cluster paths overlap at {e:?}");
                }
            }
            let mut expected = std::collections::BTreeSet::new();
            let mut x = v;
            let mut acc = 0i64;
            // reconstruct the path by oracle parents
            let parent_path = {
                let mut prev = vec![usize::MAX; n];
                prev[u] = u;
                let mut stack = vec![u];
                while let Some(a) = stack.pop() {
                    for &(b, _) in forest.neighbors(a) {
                        if prev[b] == usize::MAX {
                            prev[b] = a;
                            stack.push(b);
                        }
                    }
                }
                prev
            };
            while x != u {
                let p = parent_path[x];
                expected.insert((p.min(x), p.max(x)));
                acc += forest.edge_weight(p, x).unwrap();
                x = p;
            }
            assert_eq!(union, expected, "({u},{v}) decomposition mismatch");
            assert_eq!(total, acc, "({u},{v}) decomposition weight");
        }
    }
}

#[test]
fn subtree_decomposition_partitions_the_subtree() {
    for seed in 0..20 {
        let n = 60;
        let edges = bounded_degree_forest(n, 0, seed + 500);
        let forest = Forest::new(n, edges.iter().copied()).unwrap();
        let rc = RcForest::build(&forest, RcConfig::deterministic()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let u = pick(&mut rng, n);
            let Some(&(p, _)) = forest.neighbors(u).first() else { continue };
            let parts = rc.subtree_decomposition(u, p).unwrap();
            // disjoint union of contents == subtree vertices and edges
            let mut vs = std::collections::BTreeSet::new();
            let mut es = std::collections::BTreeSet::new();
            for part in &parts {
                match *part {
                    DecompPart::Vertex(x) => assert!(vs.insert(x), "vertex {x} repeated"),
                    DecompPart::Cluster(c) => {
                        let contents = rc.cluster_contents(c);
                        for &x in &contents.vertices {
                            assert!(vs.insert(x), "vertex {x} repeated");
                        }
                        for &e in &contents.edges {
                            assert!(es.insert(e), "edge {e:?} repeated");
                        }
                    }
                }
            }
            // expected subtree from the oracle side
            let mut evs = std::collections::BTreeSet::from([u]);
            let mut ees = std::collections::BTreeSet::new();
            let mut stack = vec![(u, p)];
            while let Some((x, from)) = stack.pop() {
                for &(y, _) in forest.neighbors(x) {
                    if y != from {
                        evs.insert(y);
                        ees.insert((x.min(y), x.max(y)));
                        stack.push((y, x));
                    }
                }
            }
            assert_eq!(vs, evs, "subtree vertices ({u},{p})");
            assert_eq!(es, ees, "subtree edges ({u},{p})");
        }
    }
}

#[test]
fn nearest_marked_matches_dijkstra() {
    let n = 700;
    let edges = bounded_degree_forest(n, 101, 77);
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    for config in schemes(7) {
        let mut rc = RcForest::build(&forest, config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let marks: Vec<usize> = (0..100).map(|_| pick(&mut rng, n)).collect();
        rc.batch_mark(&marks).unwrap();
        let queries: Vec<usize> = (0..150).map(|_| pick(&mut rng, n)).collect();
        let got = rc.batch_nearest_marked(&queries).unwrap();
        for (i, &v) in queries.iter().enumerate() {
            let want = oracle_nearest_marked(&forest, &marks, v).unwrap();
            assert_eq!(got[i], want, "query {v}");
        }
        // marked vertex answers itself at distance zero
        rc.batch_mark(&[queries[0]]).unwrap();
        assert_eq!(
            rc.batch_nearest_marked(&[queries[0]]).unwrap()[0],
            Some((queries[0], 0))
        );
    }
}

#[test]
fn mark_then_unmark_restores_everything() {
    let n = 80;
    let edges = bounded_degree_forest(n, 0, 2);
    let forest = Forest::new(n, edges.iter().copied()).unwrap();
    let mut rc = RcForest::build(&forest, RcConfig::deterministic()).unwrap();
    let marks: Vec<usize> = (0..20).map(|v| v * 3).collect();
    rc.batch_mark(&marks).unwrap();
    rc.audit_aggregates();
    rc.batch_unmark(&marks).unwrap();
    rc.audit_aggregates();
    let all: Vec<usize> = (0..n).collect();
    let got = rc.batch_nearest_marked(&all).unwrap();
    assert!(got.iter().all(Option::is_none), "no marks left");

    // mark everything: every vertex answers itself
    rc.batch_mark(&all).unwrap();
    rc.audit_aggregates();
    let got = rc.batch_nearest_marked(&all).unwrap();
    for (v, g) in got.iter().enumerate() {
        assert_eq!(*g, Some((v, 0)));
    }
}

#[test]
fn no_marks_in_component_answers_none() {
    let forest = Forest::new(5, [(0, 1, 1i64), (2, 3, 1)]).unwrap();
    let mut rc = RcForest::build(&forest, RcConfig::default()).unwrap();
    rc.batch_mark(&[2]).unwrap();
    let got = rc.batch_nearest_marked(&[0, 1, 2, 3, 4]).unwrap();
    assert_eq!(got[0], None);
    assert_eq!(got[1], None);
    assert_eq!(got[2], Some((2, 0)));
    assert_eq!(got[3], Some((2, 1)));
    assert_eq!(got[4], None);
}

#[test]
fn queries_agree_with_oracles_after_updates() {
    let n = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(321);
    for config in schemes(8) {
        let edges = bounded_degree_forest(n, 61, 15);
        let forest = Forest::new(n, edges.iter().copied()).unwrap();
        let mut rc = RcForest::build(&forest, config).unwrap();
        let mut live: Vec<(usize, usize, i64)> = edges.clone();

        for _ in 0..5 {
            // cut a few, link a few fresh ones
            let mut cuts = Vec::new();
            for _ in 0..6 {
                let i = rng.gen_range(0..live.len());
                let (u, v, _) = live.swap_remove(i);
                cuts.push((u, v));
            }
            rc.batch_cut(&cuts).unwrap();
            let mut deg = vec![0usize; n];
            let mut dsu = rc_forest::forest::Dsu::new(n);
            for &(u, v, _) in &live {
                deg[u] += 1;
                deg[v] += 1;
                dsu.union(u, v);
            }
            let mut links = Vec::new();
            for _ in 0..10 {
                let (u, v) = (pick(&mut rng, n), pick(&mut rng, n));
                if u != v && deg[u] < 3 && deg[v] < 3 && !dsu.same(u, v) {
                    let w = rng.gen_range(1..1000);
                    dsu.union(u, v);
                    deg[u] += 1;
                    deg[v] += 1;
                    links.push((u, v, w));
                    live.push((u, v, w));
                }
            }
            rc.batch_link(&links).unwrap();

            let forest = Forest::new(n, live.iter().copied()).unwrap();
            for _ in 0..60 {
                let (u, v, r) = (pick(&mut rng, n), pick(&mut rng, n), pick(&mut rng, n));
                assert_eq!(
                    rc.batch_connected(&[(u, v)])[0],
                    oracle_connected(&forest, u, v).unwrap()
                );
                assert_eq!(
                    rc.batch_path_sum(&[(u, v)]).unwrap()[0],
                    oracle_path_sum(&forest, u, v).unwrap()
                );
                assert_eq!(
                    rc.batch_lca(&[(u, v, r)])[0],
                    oracle_lca(&forest, u, v, r).unwrap()
                );
                if !forest.neighbors(u).is_empty() {
                    let (p, _) = forest.neighbors(u)[0];
                    assert_eq!(
                        rc.batch_subtree_weight(&[(u, p)], AggKind::Sum).unwrap()[0],
                        Ok(oracle_subtree_aggregate(
                            &forest,
                            u,
                            p,
                            SubtreeContent::Edges,
                            AggKind::Sum
                        )
                        .unwrap())
                    );
                }
            }
        }
    }
}

#[test]
fn disabled_aggregates_error() {
    use rc_forest::rc::StoreConfig;
    let forest = Forest::new(3, [(0, 1, 1i64), (1, 2, 1)]).unwrap();
    let rc = RcForest::build(
        &forest,
        RcConfig { store: StoreConfig::none(), ..Default::default() },
    )
    .unwrap();
    assert_eq!(
        rc.batch_subtree_weight(&[(0, 1)], AggKind::Sum).unwrap_err(),
        Error::AggregateDisabled("subtree")
    );
    assert!(matches!(
        rc.batch_path_sum(&[(0, 2)]).unwrap_err(),
        Error::SemigroupPathQuery
    ));
    // connectivity and LCA need no aggregates
    assert!(rc.batch_connected(&[(0, 2)])[0]);
    assert_eq!(rc.batch_lca(&[(0, 2, 1)])[0], Some(1));
}
