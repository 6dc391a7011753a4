//! Path sums (group algebra) and path minima/maxima (bottleneck edges).
//!
//! Run with: cargo run --example path_queries

use rc_forest::rc::{RcConfig, RcForest};
use rc_forest::Forest;

fn main() -> rc_forest::Result<()> {
    // a weighted path plus a branch
    let edges = [(0, 1, 5i64), (1, 2, 3), (2, 3, 8), (2, 4, 2)];
    let forest = Forest::new(6, edges)?;
    let rc = RcForest::build(&forest, RcConfig::default())?;

    let pairs = [(0, 3), (0, 4), (3, 4), (0, 0), (0, 5)];
    let sums = rc.batch_path_sum(&pairs)?;
    let mins = rc.batch_path_min(&pairs)?;
    let maxs = rc.batch_path_max(&pairs)?;
    for (i, &(u, v)) in pairs.iter().enumerate() {
        match (sums[i], mins[i], maxs[i]) {
            (Some(s), Some(min), Some(max)) => println!(
                "path {u}..{v}: sum={s}, lightest edge ({},{})={}, heaviest edge ({},{})={}",
                min.u, min.v, min.weight, max.u, max.v, max.weight
            ),
            (Some(s), ..) => println!("path {u}..{v}: sum={s}, empty path has no bottleneck"),
            _ => println!("path {u}..{v}: disconnected"),
        }
    }
    Ok(())
}
