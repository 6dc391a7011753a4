//! Subtree aggregates: batched and single queries, three aggregate kinds.
//!
//! Run with: cargo run --example subtree_queries

use rc_forest::rc::{RcConfig, RcForest};
use rc_forest::{AggKind, Forest};

fn main() -> rc_forest::Result<()> {
    //        0
    //      /   \
    //     1     2
    //    / \     \
    //   3   4     5
    let edges = [(0, 1, 10i64), (0, 2, 20), (1, 3, 5), (1, 4, 7), (2, 5, 1)];
    let forest = Forest::new(6, edges)?;
    let rc = RcForest::build(&forest, RcConfig::default())?;

    // subtree rooted at 1 when the tree hangs from 0: edges (1,3), (1,4)
    let queries = [(1, 0), (2, 0), (0, 1)];
    for agg in [AggKind::Sum, AggKind::Min, AggKind::Max] {
        let batched = rc.batch_subtree_weight(&queries, agg)?;
        print!("{agg:?}:");
        for (&(u, p), b) in queries.iter().zip(&batched) {
            let value = b.as_ref().expect("live edges").map(|w| w.to_string());
            print!("  subtree({u} away from {p}) = {}", value.unwrap_or("-".into()));
            // the single-query ascent always agrees with the batch
            assert_eq!(rc.subtree_query(u, p, agg)?, *b.as_ref().unwrap());
        }
        println!();
    }
    Ok(())
}
