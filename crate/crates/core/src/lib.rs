//! Connected filtering in the shape space of component trees.
//!
//! An image is represented by a component tree (min-tree, max-tree or tree
//! of shapes). Weighting every node with a shape attribute turns the tree
//! into a node-weighted graph, the *shape space*. Filtering that graph with
//! ordinary connected operators, then mapping the surviving nodes back to
//! the image, yields shape-based levelings (min/max trees), self-dual
//! morphological shapings (tree of shapes) and extinction-based object
//! detection.
//!
//! The same tree builder ([`tree::build_component_tree`]) runs on the pixel
//! grid and on the shape space.

pub mod attributes;
pub mod cli;
pub mod error;
pub mod graph;
pub mod image;
pub mod pnm;
pub mod shape_space;
pub mod synth;
pub mod tos;
pub mod tree;

pub use attributes::{attribute, AttributeKind, AttributeMap, Orientation};
pub use error::{Error, PnmError, Result};
pub use graph::{GridDims, NodeWeightedGraph};
pub use image::{grid_graph, is_leveling, top_hat, Connectivity, Image, TopHat};
pub use pnm::{read_pnm, write_pnm};
pub use shape_space::{
    detect_objects, shape_filter, FilterSpec, Mode, SecondAttribute, ShapeSpace, Strategy,
};
pub use tos::build_tree_of_shapes;
pub use tree::{build_component_tree, reconstruct, ComponentTree, Polarity, TreeKind};
