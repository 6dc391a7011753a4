//! Incremental minimum spanning forests: stream edge batches, keep the
//! forest minimal, watch displaced edges get evicted.
//!
//! Run with: cargo run --example incremental_msf

use rc_forest::msf::IncrementalMsf;
use rc_forest::rc::RcConfig;

fn main() -> rc_forest::Result<()> {
    let mut msf = IncrementalMsf::<i64>::new(6, RcConfig::default())?;

    let batches: Vec<Vec<(usize, usize, i64)>> = vec![
        vec![(0, 1, 4), (1, 2, 6), (3, 4, 2)],
        vec![(2, 3, 5), (0, 2, 3)], // (0,2,3) displaces (1,2,6)? no: it closes 0-1-2
        vec![(1, 2, 1), (4, 5, 9), (0, 4, 8)],
    ];
    for (i, batch) in batches.iter().enumerate() {
        let report = msf.insert_batch(batch)?;
        println!("batch {i}: inserted {:?}", batch);
        println!("  accepted: {:?}", report.added);
        println!("  evicted:  {:?}", report.evicted);
        println!(
            "  compressed tree had {} vertices / {} edges; {} history nodes touched",
            report.compressed_vertices, report.compressed_edges, report.touched_nodes
        );
    }
    println!("final spanning forest: {:?}", msf.edges());
    Ok(())
}
