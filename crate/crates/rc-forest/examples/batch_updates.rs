//! Batch links and cuts replay only the disturbed part of the
//! contraction: the touched-node counter grows with the batch, not with
//! the forest.
//!
//! Run with: cargo run --example batch_updates

use rc_forest::rc::{RcConfig, RcForest};
use rc_forest::treegen::bounded_degree_forest;
use rc_forest::Forest;

fn main() -> rc_forest::Result<()> {
    let n = 100_000;
    let edges = bounded_degree_forest(n, 0, 7);
    let forest = Forest::new(n, edges.iter().copied())?;
    let mut rc = RcForest::build(&forest, RcConfig::default())?;
    println!(
        "built {n} vertices in {} rounds; build touched {} history nodes",
        rc.rounds(),
        rc.touched_nodes_last_batch()
    );

    for k in [1usize, 10, 100, 1000] {
        let cuts: Vec<(usize, usize)> =
            edges.iter().step_by(edges.len() / k).take(k).map(|&(u, v, _)| (u, v)).collect();
        let links: Vec<(usize, usize, i64)> = cuts
            .iter()
            .zip(edges.iter().step_by(edges.len() / k))
            .map(|(&(u, v), &(_, _, w))| (u, v, w))
            .collect();
        rc.batch_cut(&cuts)?;
        let cut_touched = rc.touched_nodes_last_batch();
        rc.batch_link(&links)?;
        let link_touched = rc.touched_nodes_last_batch();
        println!(
            "k={k:>5}: cut touched {cut_touched:>7} nodes, relink touched {link_touched:>7} \
             (forest has {} history nodes in total)",
            rc.round_live_counts().iter().sum::<usize>()
        );
    }
    Ok(())
}
