//! Classical area opening and closing recovered as threshold filters in
//! shape space, next to a shape-based variant on the same tree.

use shapespace::attributes::AttributeKind;
use shapespace::shape_space::{FilterSpec, Strategy};
use shapespace::synth::{random_image, rng};
use shapespace::{shape_filter, Image, Orientation, TreeKind};

fn show(label: &str, img: &Image) {
    println!("{label}:");
    for y in 0..img.height() {
        let row: Vec<String> = (0..img.width())
            .map(|x| format!("{:>2}", img.get(x, y)))
            .collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = random_image(&mut rng(3), 10, 6, 9);
    show("input", &f);

    // keep nodes with at least 4 pixels: area >= 4 <=> -area <= -4
    let area = |tree| {
        FilterSpec::new(tree, AttributeKind::Area, Strategy::Threshold(-4.0))
            .orientation(Orientation::RelevantIsHigh)
    };
    show(
        "area opening (max-tree)",
        &shape_filter(&f, &area(TreeKind::MaxTree))?,
    );
    show(
        "area closing (min-tree)",
        &shape_filter(&f, &area(TreeKind::MinTree))?,
    );

    let compact = FilterSpec::new(
        TreeKind::MaxTree,
        AttributeKind::Elongation,
        Strategy::Extinction(0.5),
    );
    show("elongation minima (max-tree)", &shape_filter(&f, &compact)?);
    Ok(())
}
