//! Shape attributes on the tree of shapes of a few reference shapes.

use shapespace::attributes::{attribute, AttributeKind};
use shapespace::synth::{fill_disk, fill_ellipse, fill_plus, fill_rect};
use shapespace::{build_tree_of_shapes, Image};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut img = Image::filled(96, 32, 0)?;
    fill_disk(&mut img, 14.0, 15.0, 11.0, 200);
    fill_rect(&mut img, 30, 8, 22, 14, 150);
    fill_ellipse(&mut img, 66.0, 15.0, 10.0, 4.0, 90);
    fill_plus(&mut img, 86, 15, 15, 3, 250);

    let t = build_tree_of_shapes(&img);
    let names = ["disk", "rectangle", "ellipse", "plus"];
    let centers = [(14, 15), (31, 9), (66, 15), (86, 15)];

    print!("{:<10}", "");
    for k in AttributeKind::ALL {
        print!("{:>20}", k.name());
    }
    println!();
    let maps: Vec<_> = AttributeKind::ALL
        .iter()
        .map(|&k| attribute(&t, k))
        .collect::<Result<_, _>>()?;
    for (name, (x, y)) in names.iter().zip(centers) {
        let n = t.node_of_vertex(y * img.width() + x);
        print!("{name:<10}");
        for m in &maps {
            print!("{:>20.4}", m.value(n));
        }
        println!();
    }
    Ok(())
}
