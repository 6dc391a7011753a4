//! Batched lowest common ancestors with per-query roots.
//!
//! Run with: cargo run --example lca

use rc_forest::rc::{RcConfig, RcForest};
use rc_forest::Forest;

fn main() -> rc_forest::Result<()> {
    //       0
    //      / \
    //     1   2
    //    / \   \
    //   3   4   5
    let edges = [(0, 1, 1i64), (0, 2, 1), (1, 3, 1), (1, 4, 1), (2, 5, 1)];
    let forest = Forest::new(7, edges)?;
    let rc = RcForest::build(&forest, RcConfig::default())?;

    // (u, v, root): the root is part of the query, no re-rooting needed
    let triples = [(3, 4, 0), (3, 5, 0), (3, 5, 3), (0, 2, 5), (3, 6, 0)];
    let answers = rc.batch_lca(&triples);
    for (&(u, v, r), a) in triples.iter().zip(&answers) {
        match a {
            Some(l) => println!("lca({u}, {v} | root {r}) = {l}"),
            None => println!("lca({u}, {v} | root {r}) : not in one tree"),
        }
    }

    // fixed-root form: every pair interpreted relative to root 0
    let fixed = rc.batch_fixed_lca(0, &[(3, 4), (4, 5), (3, 3)])?;
    println!("fixed root 0: lca(3,4)={} lca(4,5)={} lca(3,3)={}", fixed[0], fixed[1], fixed[2]);
    Ok(())
}
