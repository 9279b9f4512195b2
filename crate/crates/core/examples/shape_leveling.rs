//! Shape-based leveling on a min-tree: keep the dark components whose
//! elongation is a significant minimum, flatten the rest, and extract the
//! removed detail as a top-hat.

use shapespace::attributes::AttributeKind;
use shapespace::shape_space::{run_pipeline, FilterSpec, Mode, SecondAttribute, Strategy};
use shapespace::synth::tools_image;
use shapespace::{is_leveling, top_hat, write_pnm, Connectivity, TopHat, TreeKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = tools_image(7, 160, 120);
    let spec = FilterSpec::new(
        TreeKind::MinTree,
        AttributeKind::Elongation,
        Strategy::Closing {
            attribute: SecondAttribute::Height,
            lambda: 1.5,
        },
    )
    .mode(Mode::Preserve);
    let p = run_pipeline(&f, &spec)?;
    let g = &p.output;
    println!(
        "min-tree: {} nodes, second tree: {} nodes, {} minima kept",
        p.tree.len(),
        p.second_tree.len(),
        p.filter.survivors.len()
    );
    println!(
        "{} of {} nodes kept",
        p.keep.iter().filter(|&&k| k).count(),
        p.keep.len()
    );
    assert!(is_leveling(&f, g, Connectivity::C4)?);

    let th = top_hat(&f, g, TopHat::FilteredMinusInput)?;
    let restored: Vec<u8> = g
        .values()
        .iter()
        .zip(th.values())
        .map(|(a, b)| a - b)
        .collect();
    assert_eq!(restored, f.values());

    let dir = std::env::temp_dir();
    for (name, img) in [("input", &f), ("leveling", g), ("tophat", &th)] {
        let path = dir.join(format!("shapespace_{name}.pgm"));
        std::fs::write(&path, write_pnm(img, false))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
