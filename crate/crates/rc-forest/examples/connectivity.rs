//! Batch connectivity on a dynamic forest.
//!
//! Run with: cargo run --example connectivity

use rc_forest::rc::{RcConfig, RcForest};
use rc_forest::Forest;

fn main() -> rc_forest::Result<()> {
    // a path 0-1-2-3 and an isolated pair 4-5
    let forest = Forest::new(6, [(0, 1, 1i64), (1, 2, 1), (2, 3, 1), (4, 5, 1)])?;
    let mut rc = RcForest::build(&forest, RcConfig::default())?;

    let pairs = [(0, 3), (0, 4), (4, 5), (2, 2)];
    let answers = rc.batch_connected(&pairs);
    for (&(u, v), a) in pairs.iter().zip(&answers) {
        println!("connected({u}, {v}) = {a}");
    }

    // cut the middle edge, link the two halves to the pair instead
    rc.batch_cut(&[(1, 2)])?;
    rc.batch_link(&[(1, 4, 1), (2, 5, 1)])?;
    println!("after cut(1,2), link(1,4), link(2,5):");
    for (u, v) in [(0, 3), (0, 5), (3, 4)] {
        println!("connected({u}, {v}) = {}", rc.batch_connected(&[(u, v)])[0]);
    }
    println!("touched {} history nodes in the last batch", rc.touched_nodes_last_batch());
    Ok(())
}
