//! Tree of shapes of a nested scene: each node is a hole-free shape and the
//! tree is the same for an image and its negative.

use shapespace::synth::{fill_disk, fill_rect};
use shapespace::tos::build_tree_of_shapes_with_origins;
use shapespace::{build_tree_of_shapes, reconstruct, Image};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut img = Image::filled(24, 16, 100)?;
    fill_rect(&mut img, 2, 2, 12, 12, 30);
    fill_disk(&mut img, 7.5, 7.5, 3.5, 200);
    fill_rect(&mut img, 7, 7, 1, 1, 100);
    fill_rect(&mut img, 17, 4, 4, 8, 160);

    let (t, origins) = build_tree_of_shapes_with_origins(&img);
    let areas = t.areas();
    for n in 0..t.len() {
        println!(
            "node {n:>2} parent {:>2} level {:>5} area {:>3} {:?}",
            t.parent(n),
            t.level(n),
            areas[n],
            origins[n]
        );
    }

    let back = Image::from_levels(img.dims(), &reconstruct(&t, |_| true))?;
    assert_eq!(back, img);

    let neg = build_tree_of_shapes(&img.complement());
    assert_eq!(neg.parents(), t.parents());
    println!("negative image: same {} shapes, levels mirrored", neg.len());
    Ok(())
}
