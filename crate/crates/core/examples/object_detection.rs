//! Detecting round objects as significant minima of circularity over the
//! tree of shapes. A single threshold cannot separate the two nested
//! targets from the rectangles; extinction values can.

use shapespace::attributes::AttributeKind;
use shapespace::image::RgbImage;
use shapespace::pnm::write_ppm;
use shapespace::shape_space::detect_objects_with_tree;
use shapespace::synth::nested_targets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scene = nested_targets();
    let f = &scene.image;
    let (tree, found) = detect_objects_with_tree(
        f,
        &[AttributeKind::Circularity, AttributeKind::Elongation],
        0.15,
    )?;

    let mut overlay = RgbImage::from_gray(f);
    for d in &found {
        println!(
            "{:<12} node {:>3} level {:>3} area {:>5} centroid ({:.1}, {:.1}) value {:.3} extinction {:.3}",
            d.kind.name(),
            d.node,
            d.level,
            d.area,
            d.centroid.0,
            d.centroid.1,
            d.attribute,
            d.extinction
        );
        let color = if d.kind == AttributeKind::Circularity {
            [255, 0, 0]
        } else {
            [0, 255, 0]
        };
        for p in tree.vertices_of(d.node) {
            overlay.pixels[p] = color;
        }
    }
    let path = std::env::temp_dir().join("shapespace_detections.ppm");
    std::fs::write(&path, write_ppm(&overlay))?;
    println!("wrote {}", path.display());
    Ok(())
}
