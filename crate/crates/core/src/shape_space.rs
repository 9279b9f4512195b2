//! Filtering in shape space.
//!
//! A component tree weighted by an attribute is itself a node-weighted
//! graph: vertices are tree nodes and edges are parent/child links. Its
//! min-tree (the *second tree*) has the regional minima of the attribute as
//! leaves. Connected filters applied to that graph select nodes of the
//! original tree, and reconstruction maps the selection back to the image.
//!
//! Attributes are oriented before filtering so that relevant components are
//! always minima: attributes where high values are relevant are negated.

use crate::attributes::{accumulate_moments, attribute, AttributeKind, AttributeMap, Orientation};
use crate::error::{Error, Result};
use crate::graph::NodeWeightedGraph;
use crate::image::{grid_graph, Connectivity, Image};
use crate::tos::build_tree_of_shapes;
use crate::tree::{build_component_tree, reconstruct, ComponentTree, Polarity, TreeId, TreeKind};

/// The nodes of a component tree as a node-weighted graph.
#[derive(Debug, Clone)]
pub struct ShapeSpace {
    graph: NodeWeightedGraph,
    tree: TreeId,
    pixel_area: Vec<f64>,
    negated: bool,
}

impl ShapeSpace {
    pub fn graph(&self) -> &NodeWeightedGraph {
        &self.graph
    }

    /// Oriented attribute value of a node.
    pub fn weight(&self, n: usize) -> f64 {
        self.graph.weight(n)
    }

    pub fn weights(&self) -> &[f64] {
        self.graph.weights()
    }

    pub fn len(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tree_id(&self) -> TreeId {
        self.tree
    }

    /// Whether attribute values were negated to make relevant nodes minima.
    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// Pixel count of a node of the base tree.
    pub fn pixel_area(&self, n: usize) -> f64 {
        self.pixel_area[n]
    }
}

/// Builds the shape space of `t` weighted by `a`.
pub fn make_shape_space(t: &ComponentTree, a: &AttributeMap) -> Result<ShapeSpace> {
    if a.tree_id() != t.id() || a.values().len() != t.len() {
        return Err(Error::TreeMismatch);
    }
    let negated = a.orientation() == Orientation::RelevantIsHigh;
    let weights: Vec<f64> = a
        .values()
        .iter()
        .map(|&v| if negated { -v + 0.0 } else { v })
        .collect();
    let edges: Vec<(usize, usize)> = (1..t.len()).map(|n| (t.parent(n), n)).collect();
    Ok(ShapeSpace {
        graph: NodeWeightedGraph::from_edges(weights, &edges),
        tree: t.id(),
        pixel_area: t.areas().into_iter().map(|a| a as f64).collect(),
        negated,
    })
}

/// Min-tree of the shape space. Its leaves are the regional minima of the
/// oriented attribute.
pub fn second_tree(s: &ShapeSpace) -> Result<ComponentTree> {
    build_component_tree(&s.graph, Polarity::Min)
}

/// Increasing attributes of second-tree components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SecondAttribute {
    /// Level of the component minus the lowest weight inside it.
    Height,
    /// Number of base-tree nodes in the component.
    NodeCount,
    /// Pixels covered by the component in the image.
    PixelArea,
}

impl std::str::FromStr for SecondAttribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "height" => Ok(SecondAttribute::Height),
            "node_count" => Ok(SecondAttribute::NodeCount),
            "pixel_area" => Ok(SecondAttribute::PixelArea),
            other => Err(Error::UnknownAttribute(other.to_string())),
        }
    }
}

/// Lowest shape-space weight inside each second-tree component.
fn component_minima(tt: &ComponentTree, s: &ShapeSpace) -> Vec<f64> {
    let mut lowest: Vec<f64> = (0..tt.len())
        .map(|n| {
            tt.own_vertices(n)
                .iter()
                .map(|&v| s.weight(v))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    for n in (1..tt.len()).rev() {
        let p = tt.parent(n);
        lowest[p] = lowest[p].min(lowest[n]);
    }
    lowest
}

/// Evaluates a second-level attribute on every component of `tt`.
pub fn second_attribute(tt: &ComponentTree, s: &ShapeSpace, kind: SecondAttribute) -> Vec<f64> {
    match kind {
        SecondAttribute::Height => component_minima(tt, s)
            .iter()
            .enumerate()
            .map(|(n, &lo)| tt.level(n) - lo)
            .collect(),
        SecondAttribute::NodeCount => tt.areas().into_iter().map(|a| a as f64).collect(),
        SecondAttribute::PixelArea => {
            // a component is a connected set of base nodes; its topmost node
            // carries the smallest id and contains all the others
            let mut top: Vec<usize> = (0..tt.len())
                .map(|n| {
                    tt.own_vertices(n)
                        .iter()
                        .copied()
                        .min()
                        .unwrap_or(usize::MAX)
                })
                .collect();
            for n in (1..tt.len()).rev() {
                let p = tt.parent(n);
                top[p] = top[p].min(top[n]);
            }
            top.iter().map(|&v| s.pixel_area(v)).collect()
        }
    }
}

/// A regional minimum of the shape space and its extinction value.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimumRecord {
    /// Second-tree leaf holding the minimum's plateau.
    pub leaf: usize,
    pub altitude: f64,
    /// Position in the strict total order on minima.
    pub rank: usize,
    /// Level of the lowest component joining this minimum to an earlier one;
    /// infinite for the first minimum.
    pub merge_level: f64,
    pub extinction: f64,
}

/// For every second-tree node, the first minimum (lowest altitude, then
/// smallest leaf id) inside it, plus the merge level of each leaf.
fn dominant_minima(tt: &ComponentTree) -> (Vec<usize>, Vec<f64>) {
    let mut dominant = vec![usize::MAX; tt.len()];
    let mut merge = vec![f64::INFINITY; tt.len()];
    let precedes = |a: usize, b: usize| tt.level(a).total_cmp(&tt.level(b)).then(a.cmp(&b)).is_lt();
    for n in (0..tt.len()).rev() {
        let kids = tt.children(n);
        if kids.is_empty() {
            dominant[n] = n;
            continue;
        }
        let mut best = dominant[kids[0]];
        for &c in &kids[1..] {
            if precedes(dominant[c], best) {
                best = dominant[c];
            }
        }
        for &c in kids {
            if dominant[c] != best {
                merge[dominant[c]] = tt.level(n);
            }
        }
        dominant[n] = best;
    }
    (dominant, merge)
}

/// Extinction values of all regional minima, in rank order.
pub fn extinction_values(tt: &ComponentTree, _s: &ShapeSpace) -> Vec<MinimumRecord> {
    let (_, merge) = dominant_minima(tt);
    let mut leaves: Vec<usize> = (0..tt.len()).filter(|&n| tt.is_leaf(n)).collect();
    leaves.sort_by(|&a, &b| tt.level(a).total_cmp(&tt.level(b)).then(a.cmp(&b)));
    leaves
        .into_iter()
        .enumerate()
        .map(|(rank, leaf)| {
            let altitude = tt.level(leaf);
            MinimumRecord {
                leaf,
                altitude,
                rank,
                merge_level: merge[leaf],
                extinction: merge[leaf] - altitude,
            }
        })
        .collect()
}

/// How the shape space is simplified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Keep nodes whose oriented attribute is `<= lambda`.
    Threshold(f64),
    /// Attribute closing on the second tree: keep components whose second
    /// attribute reaches `lambda`.
    Closing {
        attribute: SecondAttribute,
        lambda: f64,
    },
    /// Keep the minima whose extinction value is `>= epsilon`.
    Extinction(f64),
}

impl Strategy {
    fn validate(&self) -> Result<()> {
        match *self {
            Strategy::Threshold(l) if l.is_nan() => {
                Err(Error::InvalidParameter("threshold is NaN".into()))
            }
            Strategy::Closing { lambda: l, .. } | Strategy::Extinction(l)
                if l.is_nan() || l < 0.0 =>
            {
                Err(Error::InvalidParameter(format!(
                    "parameter must be non-negative, got {l}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Result of filtering a shape space.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    /// Filtered oriented attribute on base-tree nodes.
    pub filtered: Vec<f64>,
    /// Second-tree leaves of the surviving minima, in rank order. Empty for
    /// the threshold strategy.
    pub survivors: Vec<usize>,
    /// Base-tree nodes attached to each survivor (sorted). The threshold
    /// strategy yields a single blob, the kept node set.
    pub blobs: Vec<Vec<usize>>,
}

/// Whether each second-tree component is kept by the closing: a component
/// survives if, at some threshold during its lifetime (from its own level up
/// to its parent's), its attribute reaches `lambda`. The height of a
/// component grows over that interval, so its lifetime value is the parent
/// level minus its lowest weight; set attributes are constant over it.
fn closing_keep(
    tt: &ComponentTree,
    s: &ShapeSpace,
    kind: SecondAttribute,
    lambda: f64,
) -> Vec<bool> {
    let lifetime: Vec<f64> = match kind {
        SecondAttribute::Height => {
            let lowest = component_minima(tt, s);
            (0..tt.len())
                .map(|n| {
                    if n == tt.root() {
                        f64::INFINITY
                    } else {
                        tt.level(tt.parent(n)) - lowest[n]
                    }
                })
                .collect()
        }
        _ => second_attribute(tt, s, kind),
    };
    let mut keep: Vec<bool> = lifetime.iter().map(|&v| v >= lambda).collect();
    keep[tt.root()] = true;
    keep
}

/// Applies `strategy` to the shape space `s` whose second tree is `tt`.
pub fn filter_shape_space(
    s: &ShapeSpace,
    tt: &ComponentTree,
    strategy: Strategy,
) -> Result<FilterOutput> {
    strategy.validate()?;
    if tt.vertex_count() != s.len() {
        return Err(Error::TreeMismatch);
    }
    match strategy {
        Strategy::Threshold(lambda) => {
            let kept: Vec<usize> = (0..s.len()).filter(|&n| s.weight(n) <= lambda).collect();
            Ok(FilterOutput {
                filtered: s.weights().to_vec(),
                survivors: Vec::new(),
                blobs: vec![kept],
            })
        }
        Strategy::Closing { attribute, lambda } => {
            let keep = closing_keep(tt, s, attribute, lambda);
            let filtered = reconstruct(tt, |n| keep[n]);
            let (dominant, _) = dominant_minima(tt);
            let pruned_leaves: Vec<usize> = (0..tt.len())
                .filter(|&n| keep[n] && tt.children(n).iter().all(|&c| !keep[c]))
                .collect();
            let mut leaf_count = vec![0usize; tt.len()];
            for &k in &pruned_leaves {
                leaf_count[k] = 1;
            }
            for n in (1..tt.len()).rev() {
                leaf_count[tt.parent(n)] += leaf_count[n];
            }
            let ranks = rank_of_leaves(tt);
            let mut found: Vec<(usize, usize, Vec<usize>)> = pruned_leaves
                .iter()
                .map(|&k| {
                    let mut top = k;
                    while top != tt.root() && leaf_count[tt.parent(top)] == 1 {
                        top = tt.parent(top);
                    }
                    let m = dominant[k];
                    (ranks[m], m, tt.vertices_of(top))
                })
                .collect();
            found.sort_by_key(|f| f.0);
            Ok(FilterOutput {
                filtered,
                survivors: found.iter().map(|f| f.1).collect(),
                blobs: found.into_iter().map(|f| f.2).collect(),
            })
        }
        Strategy::Extinction(epsilon) => {
            let keep = closing_keep(tt, s, SecondAttribute::Height, epsilon);
            let filtered = reconstruct(tt, |n| keep[n]);
            let records = extinction_values(tt, s);
            let mut survivors = Vec::new();
            let mut blobs = Vec::new();
            let mut stamp = vec![usize::MAX; s.len()];
            for (id, r) in records
                .iter()
                .filter(|r| r.extinction >= epsilon)
                .enumerate()
            {
                survivors.push(r.leaf);
                blobs.push(extinction_blob(
                    s,
                    tt,
                    &filtered,
                    r.leaf,
                    r.altitude + epsilon,
                    &mut stamp,
                    id,
                ));
            }
            Ok(FilterOutput {
                filtered,
                survivors,
                blobs,
            })
        }
    }
}

fn rank_of_leaves(tt: &ComponentTree) -> Vec<usize> {
    let mut leaves: Vec<usize> = (0..tt.len()).filter(|&n| tt.is_leaf(n)).collect();
    leaves.sort_by(|&a, &b| tt.level(a).total_cmp(&tt.level(b)).then(a.cmp(&b)));
    let mut rank = vec![usize::MAX; tt.len()];
    for (r, &l) in leaves.iter().enumerate() {
        rank[l] = r;
    }
    rank
}

/// Connected component of `{filtered < bound}` around a minimum's plateau.
/// `stamp` is shared between calls; `id` must be fresh for each call.
fn extinction_blob(
    s: &ShapeSpace,
    tt: &ComponentTree,
    filtered: &[f64],
    leaf: usize,
    bound: f64,
    stamp: &mut [usize],
    id: usize,
) -> Vec<usize> {
    let mut blob: Vec<usize> = tt.own_vertices(leaf).to_vec();
    for &v in &blob {
        stamp[v] = id;
    }
    let mut head = 0;
    while head < blob.len() {
        let v = blob[head];
        head += 1;
        for &u in s.graph.neighbors(v) {
            if stamp[u] != id && filtered[u] < bound {
                stamp[u] = id;
                blob.push(u);
            }
        }
    }
    blob.sort_unstable();
    blob
}

/// What to do with the blobs selected in shape space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Keep the blobs (and every node containing one); drop the rest.
    #[default]
    Preserve,
    /// Drop the blobs (and every node inside one); keep the rest.
    Remove,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "preserve" => Ok(Mode::Preserve),
            "remove" => Ok(Mode::Remove),
            other => Err(Error::InvalidParameter(format!("mode `{other}`"))),
        }
    }
}

/// Full configuration of one shape-space filtering run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub tree: TreeKind,
    /// Pixel connectivity for min/max trees; the tree of shapes always pairs
    /// 4-connected upper sets with 8-connected lower sets.
    pub connectivity: Connectivity,
    pub attribute: AttributeKind,
    pub orientation: Orientation,
    pub strategy: Strategy,
    pub mode: Mode,
}

impl FilterSpec {
    pub fn new(tree: TreeKind, attribute: AttributeKind, strategy: Strategy) -> Self {
        FilterSpec {
            tree,
            connectivity: Connectivity::C4,
            attribute,
            orientation: attribute.default_orientation(),
            strategy,
            mode: Mode::Preserve,
        }
    }

    pub fn connectivity(mut self, conn: Connectivity) -> Self {
        self.connectivity = conn;
        self
    }

    pub fn orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

/// Builds the base tree of `f` for a tree kind.
pub fn base_tree(f: &Image, kind: TreeKind, conn: Connectivity) -> Result<ComponentTree> {
    match kind {
        TreeKind::MinTree => build_component_tree(&grid_graph(f, conn), Polarity::Min),
        TreeKind::MaxTree => build_component_tree(&grid_graph(f, conn), Polarity::Max),
        TreeKind::TreeOfShapes => Ok(build_tree_of_shapes(f)),
    }
}

/// Turns the selected blobs into the set of base-tree nodes kept by
/// reconstruction. The result always contains the root and every ancestor
/// of a kept node, which makes reconstruction from a min- or max-tree a
/// leveling.
pub fn kept_nodes(t: &ComponentTree, blobs: &[Vec<usize>], mode: Mode) -> Vec<bool> {
    let mut in_blob = vec![false; t.len()];
    for &n in blobs.iter().flatten() {
        in_blob[n] = true;
    }
    match mode {
        Mode::Preserve => {
            let mut keep = in_blob;
            for n in (1..t.len()).rev() {
                if keep[n] {
                    keep[t.parent(n)] = true;
                }
            }
            keep[t.root()] = true;
            keep
        }
        Mode::Remove => {
            let mut removed = in_blob;
            removed[t.root()] = false;
            for n in 1..t.len() {
                if removed[t.parent(n)] {
                    removed[n] = true;
                }
            }
            removed.into_iter().map(|r| !r).collect()
        }
    }
}

/// Every intermediate product of one filtering run.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub tree: ComponentTree,
    pub attribute: AttributeMap,
    pub space: ShapeSpace,
    pub second_tree: ComponentTree,
    pub filter: FilterOutput,
    pub keep: Vec<bool>,
    pub output: Image,
}

/// Runs the shape-space pipeline: base tree, attribute, shape space, second
/// tree, strategy, node selection and reconstruction.
pub fn run_pipeline(f: &Image, spec: &FilterSpec) -> Result<Pipeline> {
    spec.strategy.validate()?;
    let tree = base_tree(f, spec.tree, spec.connectivity)?;
    let attr = attribute(&tree, spec.attribute)?.with_orientation(spec.orientation);
    run_pipeline_on(f, tree, attr, spec)
}

/// Same as [`run_pipeline`] with a precomputed tree and attribute (e.g. a
/// combination of attributes).
pub fn run_pipeline_on(
    f: &Image,
    tree: ComponentTree,
    attr: AttributeMap,
    spec: &FilterSpec,
) -> Result<Pipeline> {
    let space = make_shape_space(&tree, &attr)?;
    let tt = second_tree(&space)?;
    let filter = filter_shape_space(&space, &tt, spec.strategy)?;
    let keep = kept_nodes(&tree, &filter.blobs, spec.mode);
    let output = Image::from_levels(f.dims(), &reconstruct(&tree, |n| keep[n]))?;
    Ok(Pipeline {
        tree,
        attribute: attr,
        space,
        second_tree: tt,
        filter,
        keep,
        output,
    })
}

/// Filters `f` in shape space. With a min- or max-tree the result is a
/// leveling of `f`; with the tree of shapes it is a self-dual shaping.
pub fn shape_filter(f: &Image, spec: &FilterSpec) -> Result<Image> {
    Ok(run_pipeline(f, spec)?.output)
}

/// A component selected as a significant minimum of an attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedObject {
    pub kind: AttributeKind,
    /// Node of the tree of shapes.
    pub node: usize,
    pub level: f64,
    pub area: usize,
    /// `(x, y)` in pixels.
    pub centroid: (f64, f64),
    /// Raw (unoriented) attribute value of the node.
    pub attribute: f64,
    pub extinction: f64,
}

/// Detects objects as the minima of each attribute, over the tree of shapes,
/// whose extinction value is at least `epsilon`. Attributes are processed
/// independently; results come grouped by attribute in the order given, each
/// group in rank order. The tree is returned for rendering.
pub fn detect_objects_with_tree(
    f: &Image,
    kinds: &[AttributeKind],
    epsilon: f64,
) -> Result<(ComponentTree, Vec<DetectedObject>)> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    let tree = build_tree_of_shapes(f);
    let moments = accumulate_moments(&tree)?;
    let depth = tree.depths();
    let mut out = Vec::new();
    for &kind in kinds {
        let attr = attribute(&tree, kind)?;
        let space = make_shape_space(&tree, &attr)?;
        let tt = second_tree(&space)?;
        for r in extinction_values(&tt, &space) {
            if r.extinction < epsilon {
                continue;
            }
            let node = tt
                .own_vertices(r.leaf)
                .iter()
                .copied()
                .max_by(|&a, &b| depth[a].cmp(&depth[b]).then(b.cmp(&a)))
                .expect("a minimum has at least one node");
            out.push(DetectedObject {
                kind,
                node,
                level: tree.level(node),
                area: moments[node].n as usize,
                centroid: moments[node].centroid(),
                attribute: attr.value(node),
                extinction: r.extinction,
            });
        }
    }
    Ok((tree, out))
}

pub fn detect_objects(
    f: &Image,
    kinds: &[AttributeKind],
    epsilon: f64,
) -> Result<Vec<DetectedObject>> {
    Ok(detect_objects_with_tree(f, kinds, epsilon)?.1)
}
