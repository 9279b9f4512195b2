//! Extinction values of the minima of an attribute along a chain of nested
//! components, and the resulting filters for a few thresholds.

use shapespace::shape_space::{
    base_tree, extinction_values, filter_shape_space, make_shape_space, second_tree,
    SecondAttribute, Strategy,
};
use shapespace::{AttributeMap, Connectivity, Image, Orientation, TreeKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a 1x7 ramp has a chain min-tree: node i sits at depth i
    let ramp = Image::from_fn(7, 1, |x, _| (6 - x) as u8)?;
    let t = base_tree(&ramp, TreeKind::MinTree, Connectivity::C4)?;
    let profile = vec![5.0, 1.0, 4.0, 0.0, 3.0, 2.0, 6.0];
    let a = AttributeMap::custom(&t, Orientation::RelevantIsLow, profile.clone())?;
    let s = make_shape_space(&t, &a)?;
    let tt = second_tree(&s)?;

    println!("attribute along the chain: {profile:?}");
    for m in extinction_values(&tt, &s) {
        println!(
            "minimum at altitude {} (rank {}): merges at {}, extinction {}",
            m.altitude, m.rank, m.merge_level, m.extinction
        );
    }

    for eps in [0.5, 2.0, 10.0] {
        let out = filter_shape_space(&s, &tt, Strategy::Extinction(eps))?;
        println!(
            "extinction >= {eps}: filtered {:?}, blobs {:?}",
            out.filtered, out.blobs
        );
    }
    let out = filter_shape_space(
        &s,
        &tt,
        Strategy::Closing {
            attribute: SecondAttribute::Height,
            lambda: 2.0,
        },
    )?;
    println!("height closing at 2: blobs {:?}", out.blobs);
    let out = filter_shape_space(&s, &tt, Strategy::Threshold(2.0))?;
    println!("threshold at 2: kept {:?}", out.blobs[0]);
    Ok(())
}
