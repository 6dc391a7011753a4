//! The streaming random-forest generator: chunked linked lists chained by
//! a locality parameter, with a bijective label shuffle.
//!
//! Run with: cargo run --example forest_generation

use rc_forest::rc::RcConfig;
use rc_forest::treegen::{generate_forest, ChunkDist, ForestGenConfig};
use rc_forest::TernaryForest;

fn main() -> rc_forest::Result<()> {
    for (label, dist, local_prob) in [
        ("deep (local attach)", ChunkDist::Constant, 1.0),
        ("shallow (random attach)", ChunkDist::Constant, 0.0),
        ("geometric chunks", ChunkDist::Geometric, 0.5),
        ("exponential chunks", ChunkDist::Exponential, 0.5),
    ] {
        let cfg = ForestGenConfig {
            n: 20_000,
            mean: 10.0,
            dist,
            local_prob,
            seed: 11,
            ..Default::default()
        };
        let stream = generate_forest(&cfg)?;
        let mut tf = TernaryForest::<i64>::new(cfg.n, RcConfig::default());
        tf.batch_link(&stream.adds)?;
        println!(
            "{label:<26} {} edges, {} delete candidates, contraction rounds = {}",
            stream.adds.len(),
            stream.delete_candidates.len(),
            tf.rc().rounds()
        );
    }
    Ok(())
}
