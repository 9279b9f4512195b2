//! Min- and max-trees of a small image, and of an arbitrary node-weighted
//! graph, with the union-find builder checked against the reference sweep.

use shapespace::tree::brute_force_tree;
use shapespace::{
    build_component_tree, grid_graph, Connectivity, Image, NodeWeightedGraph, Polarity,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let img = Image::new(4, 1, vec![0, 3, 1, 2])?;
    let g = grid_graph(&img, Connectivity::C4);

    for pol in [Polarity::Min, Polarity::Max] {
        let t = build_component_tree(&g, pol)?;
        println!("{pol:?}-tree, one line per node (id parent level):");
        print!("{}", t.dump());
        for n in 0..t.len() {
            println!("  node {n}: pixels {:?}", t.vertices_of(n));
        }
        println!("  leaves {}, depth {}", t.leaf_count(), t.depth());
        assert_eq!(t, brute_force_tree(&g, pol)?);
    }

    // any connected graph works, e.g. a star
    let star = NodeWeightedGraph::from_edges(vec![5.0, 1.0, 2.0, 1.0], &[(0, 1), (0, 2), (0, 3)]);
    let t = build_component_tree(&star, Polarity::Min)?;
    println!("star min-tree:\n{}", t.dump());

    let split = NodeWeightedGraph::from_edges(vec![1.0, 2.0], &[]);
    println!(
        "disconnected graph: {}",
        build_component_tree(&split, Polarity::Min).unwrap_err()
    );
    Ok(())
}
