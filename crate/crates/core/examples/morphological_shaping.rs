//! Self-dual filtering with the tree of shapes: a shaping treats bright and
//! dark objects alike, and commutes with taking the negative on
//! well-composed images.

use shapespace::attributes::AttributeKind;
use shapespace::shape_space::{FilterSpec, Strategy};
use shapespace::synth::{rng, well_composed_image};
use shapespace::{shape_filter, Image, TreeKind};

fn show(label: &str, img: &Image) {
    println!("{label}:");
    for y in 0..img.height() {
        let row: Vec<String> = (0..img.width())
            .map(|x| format!("{:>3}", img.get(x, y)))
            .collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = well_composed_image(&mut rng(21), 14, 10);
    // keep only the most compact shapes
    let spec = FilterSpec::new(
        TreeKind::TreeOfShapes,
        AttributeKind::InertiaOverArea2,
        Strategy::Extinction(0.02),
    );
    let g = shape_filter(&f, &spec)?;
    show("input", &f);
    show("shaping", &g);

    let g_neg = shape_filter(&f.complement(), &spec)?;
    assert_eq!(g_neg, g.complement());
    println!("filtering the negative gives the negative of the result");
    Ok(())
}
