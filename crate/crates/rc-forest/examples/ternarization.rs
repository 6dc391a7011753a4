//! Arbitrary-degree forests: updates translate onto a degree-3 shadow
//! forest built from chains of identity-weight dummies.
//!
//! Run with: cargo run --example ternarization

use rc_forest::rc::RcConfig;
use rc_forest::{AggKind, TernaryForest};

fn main() -> rc_forest::Result<()> {
    let n = 8;
    let mut tf = TernaryForest::<i64>::new(n, RcConfig::default());

    // a degree-6 star at vertex 0
    let spokes: Vec<(usize, usize, i64)> = (1..7).map(|leaf| (0, leaf, leaf as i64)).collect();
    tf.batch_link(&spokes)?;

    println!("real vertex 0 has degree 6; shadow chains:");
    print!("{}", tf.ternarizer().dump_chains());
    let worst = (0..tf.ternarizer().shadow_capacity())
        .map(|x| tf.ternarizer().shadow_degree(x))
        .max()
        .unwrap();
    println!("maximum shadow degree = {worst}");

    // queries speak real ids; subtree queries enter via the carrier dummies
    let d = tf.entry_dummy(0, 3)?;
    println!("edge (0,3) is carried by dummy {d}, owned by {}", tf.owner(d)?);
    let away_from_3 = tf.batch_subtree_weight(&[(0, 3)], AggKind::Sum)?;
    println!(
        "subtree at 0 away from 3 sums the other spokes: {:?}",
        away_from_3[0].as_ref().unwrap()
    );

    // cutting spokes frees the dummies again
    tf.batch_cut(&[(0, 3), (0, 4)])?;
    println!("after cutting (0,3) and (0,4):");
    print!("{}", tf.ternarizer().dump_chains());
    let (alloc, free, never) = tf.ternarizer().dummy_accounting();
    println!("dummies: {alloc} allocated, {free} recycled, {never} never used");
    Ok(())
}
