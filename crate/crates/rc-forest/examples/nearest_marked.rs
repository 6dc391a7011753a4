//! Marking vertices and finding the nearest marked vertex by weighted
//! distance.
//!
//! Run with: cargo run --example nearest_marked

use rc_forest::rc::{RcConfig, RcForest};
use rc_forest::Forest;

fn main() -> rc_forest::Result<()> {
    // chain with weights: 0 -2- 1 -1- 2 -4- 3 -1- 4
    let edges = [(0, 1, 2i64), (1, 2, 1), (2, 3, 4), (3, 4, 1)];
    let forest = Forest::new(5, edges)?;
    let mut rc = RcForest::build(&forest, RcConfig::default())?;

    rc.batch_mark(&[0, 4])?;
    let queries = [0, 1, 2, 3, 4];
    for (v, a) in queries.iter().zip(rc.batch_nearest_marked(&queries)?) {
        let (m, d) = a.expect("component has marks");
        println!("nearest mark to {v}: vertex {m} at distance {d}");
    }

    rc.batch_unmark(&[0])?;
    println!("after unmarking 0:");
    for (v, a) in queries.iter().zip(rc.batch_nearest_marked(&queries)?) {
        let (m, d) = a.expect("component has marks");
        println!("nearest mark to {v}: vertex {m} at distance {d}");
    }
    Ok(())
}
