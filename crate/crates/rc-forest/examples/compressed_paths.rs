//! Compressed path trees: a forest shrunk to the marked vertices plus
//! branch points, preserving every pairwise path bottleneck.
//!
//! Run with: cargo run --example compressed_paths

use rc_forest::rc::{ExtremeMode, RcConfig, RcForest};
use rc_forest::Forest;

fn main() -> rc_forest::Result<()> {
    //      0 -9- 1 -2- 2 -7- 3
    //             \
    //              4 (weight 3)
    let edges = [(0, 1, 9i64), (1, 2, 2), (2, 3, 7), (1, 4, 3)];
    let forest = Forest::new(5, edges)?;
    let rc = RcForest::build(&forest, RcConfig::default())?;

    for mode in [ExtremeMode::Min, ExtremeMode::Max] {
        let tree = rc.compressed_path_tree(&[0, 3, 4], mode)?;
        println!("{mode:?} compressed tree over marks {{0, 3, 4}}:");
        println!("  vertices: {:?} (vertex 1 appears as a branch point)", tree.vertices);
        for e in &tree.edges {
            let x = e.extremal.expect("real edges on every segment");
            println!(
                "  segment {} .. {} carries edge ({},{}) of weight {}",
                e.a, e.b, x.u, x.v, x.weight
            );
        }
    }
    Ok(())
}
