//! Component trees over node-weighted graphs.
//!
//! A [`ComponentTree`] stores one node per connected component of the
//! threshold sets of a graph (lower sets for a min-tree, upper sets for a
//! max-tree), in canonical form: a component that does not change between two
//! consecutive thresholds is a single node.
//!
//! Node ids are canonical and reproducible. The root is node 0 and every
//! parent has a smaller id than its children. Min/max trees order their
//! nodes root-first by level, then by the smallest vertex id they contain;
//! trees of shapes order by decreasing area, then smallest vertex id.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::graph::{GridDims, NodeWeightedGraph};

/// Which threshold sets a tree is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Lower sets `{w <= t}`; levels increase towards the root.
    Min,
    /// Upper sets `{w >= t}`; levels decrease towards the root.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeKind {
    MinTree,
    MaxTree,
    /// Self-dual tree of saturated level-set components. Levels are not
    /// monotone along branches.
    TreeOfShapes,
}

impl std::str::FromStr for TreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(TreeKind::MinTree),
            "max" => Ok(TreeKind::MaxTree),
            "tos" => Ok(TreeKind::TreeOfShapes),
            other => Err(Error::InvalidParameter(format!("tree kind `{other}`"))),
        }
    }
}

/// Identity of a built tree, used to check that attribute maps are applied
/// to the tree they were computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeId(u64);

static NEXT_TREE_ID: AtomicU64 = AtomicU64::new(1);
static ROOT_OVERRIDES: AtomicUsize = AtomicUsize::new(0);

/// Number of times [`reconstruct`] was asked to drop a root and kept it.
pub fn root_override_count() -> usize {
    ROOT_OVERRIDES.load(Ordering::Relaxed)
}

#[derive(Debug, Clone)]
pub struct ComponentTree {
    id: TreeId,
    kind: TreeKind,
    grid: Option<GridDims>,
    parent: Vec<usize>,
    level: Vec<f64>,
    node_of_vertex: Vec<usize>,
    child_offsets: Vec<usize>,
    children: Vec<usize>,
    own_offsets: Vec<usize>,
    own: Vec<usize>,
}

/// Structural equality: same kind, parents, levels and vertex mapping. Tree
/// identity is ignored.
impl PartialEq for ComponentTree {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.parent == other.parent
            && self.level == other.level
            && self.node_of_vertex == other.node_of_vertex
    }
}

impl ComponentTree {
    /// Canonicalizes a tree given with arbitrary node numbering. `raw_parent`
    /// maps the root to itself.
    pub(crate) fn from_raw(
        kind: TreeKind,
        grid: Option<GridDims>,
        raw_parent: &[usize],
        raw_level: &[f64],
        raw_node_of_vertex: &[usize],
    ) -> ComponentTree {
        let m = raw_parent.len();
        let root = (0..m)
            .find(|&n| raw_parent[n] == n)
            .expect("tree has a root");

        // breadth-first order from the root: parents before children
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); m];
        for n in 0..m {
            if n != root {
                kids[raw_parent[n]].push(n);
            }
        }
        let mut bfs = Vec::with_capacity(m);
        bfs.push(root);
        let mut i = 0;
        while i < bfs.len() {
            bfs.extend_from_slice(&kids[bfs[i]]);
            i += 1;
        }
        assert_eq!(bfs.len(), m, "parent relation must form a single tree");

        let mut area = vec![0usize; m];
        let mut min_vertex = vec![usize::MAX; m];
        for (v, &n) in raw_node_of_vertex.iter().enumerate() {
            area[n] += 1;
            min_vertex[n] = min_vertex[n].min(v);
        }
        for &n in bfs.iter().rev() {
            if n != root {
                let p = raw_parent[n];
                area[p] += area[n];
                min_vertex[p] = min_vertex[p].min(min_vertex[n]);
            }
        }

        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            let primary = match kind {
                TreeKind::MinTree => raw_level[b].total_cmp(&raw_level[a]),
                TreeKind::MaxTree => raw_level[a].total_cmp(&raw_level[b]),
                TreeKind::TreeOfShapes => area[b].cmp(&area[a]),
            };
            primary.then(min_vertex[a].cmp(&min_vertex[b]))
        });
        let mut new_id = vec![0usize; m];
        for (i, &n) in order.iter().enumerate() {
            new_id[n] = i;
        }
        let parent: Vec<usize> = order.iter().map(|&n| new_id[raw_parent[n]]).collect();
        let level: Vec<f64> = order.iter().map(|&n| raw_level[n]).collect();
        let node_of_vertex: Vec<usize> = raw_node_of_vertex.iter().map(|&n| new_id[n]).collect();
        for (n, &p) in parent.iter().enumerate().skip(1) {
            assert!(p < n, "canonical order must list parents first");
        }
        ComponentTree::assemble(kind, grid, parent, level, node_of_vertex)
    }

    fn assemble(
        kind: TreeKind,
        grid: Option<GridDims>,
        parent: Vec<usize>,
        level: Vec<f64>,
        node_of_vertex: Vec<usize>,
    ) -> ComponentTree {
        let m = parent.len();
        let (child_offsets, children) = bucket(m, (1..m).map(|n| (parent[n], n)));
        let (own_offsets, own) = bucket(
            m,
            node_of_vertex
                .iter()
                .copied()
                .enumerate()
                .map(|(v, n)| (n, v)),
        );
        ComponentTree {
            id: TreeId(NEXT_TREE_ID.fetch_add(1, Ordering::Relaxed)),
            kind,
            grid,
            parent,
            level,
            node_of_vertex,
            child_offsets,
            children,
            own_offsets,
            own,
        }
    }

    pub fn id(&self) -> TreeId {
        self.id
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    /// Polarity of the threshold sets. A tree of shapes reports `Min` so the
    /// shape-space machinery treats all trees alike; check [`Self::kind`]
    /// before relying on level monotonicity.
    pub fn polarity(&self) -> Polarity {
        match self.kind {
            TreeKind::MaxTree => Polarity::Max,
            TreeKind::MinTree | TreeKind::TreeOfShapes => Polarity::Min,
        }
    }

    pub fn grid(&self) -> Option<GridDims> {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn parent(&self, n: usize) -> usize {
        self.parent[n]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn level(&self, n: usize) -> f64 {
        self.level[n]
    }

    pub fn levels(&self) -> &[f64] {
        &self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.node_of_vertex.len()
    }

    /// Smallest node containing vertex `v`.
    pub fn node_of_vertex(&self, v: usize) -> usize {
        self.node_of_vertex[v]
    }

    pub fn node_of_vertex_map(&self) -> &[usize] {
        &self.node_of_vertex
    }

    /// Children of `n` in increasing id order.
    pub fn children(&self, n: usize) -> &[usize] {
        &self.children[self.child_offsets[n]..self.child_offsets[n + 1]]
    }

    /// Vertices whose smallest node is `n`.
    pub fn own_vertices(&self, n: usize) -> &[usize] {
        &self.own[self.own_offsets[n]..self.own_offsets[n + 1]]
    }

    pub fn is_leaf(&self, n: usize) -> bool {
        self.children(n).is_empty()
    }

    /// Number of vertices contained in each node, accumulated leaves to root.
    pub fn areas(&self) -> Vec<usize> {
        let mut area: Vec<usize> = (0..self.len())
            .map(|n| self.own_vertices(n).len())
            .collect();
        for n in (1..self.len()).rev() {
            area[self.parent[n]] += area[n];
        }
        area
    }

    /// All vertices contained in node `n` (its own and its descendants'), in
    /// increasing order.
    pub fn vertices_of(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            out.extend_from_slice(self.own_vertices(m));
            stack.extend_from_slice(self.children(m));
        }
        out.sort_unstable();
        out
    }

    /// Depth of every node, counting the root as 1.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![1usize; self.len()];
        for n in 1..self.len() {
            depth[n] = depth[self.parent[n]] + 1;
        }
        depth
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.len()).filter(|&n| self.is_leaf(n)).count()
    }

    /// Whether `a` is an ancestor of `n` or `n` itself.
    pub fn is_ancestor_or_self(&self, a: usize, mut n: usize) -> bool {
        while n > a {
            n = self.parent[n];
        }
        n == a
    }

    /// Lowest common ancestor of two nodes.
    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        // parents always carry smaller ids, so the larger id can safely move up
        while a != b {
            if a > b {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        a
    }

    /// Text dump with one `node parent level` line per node.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for n in 0..self.len() {
            writeln!(s, "{} {} {}", n, self.parent[n], self.level[n]).unwrap();
        }
        s
    }
}

fn bucket(
    m: usize,
    pairs: impl Iterator<Item = (usize, usize)> + Clone,
) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; m + 1];
    for (k, _) in pairs.clone() {
        offsets[k + 1] += 1;
    }
    for i in 0..m {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut items = vec![0usize; offsets[m]];
    for (k, v) in pairs {
        items[fill[k]] = v;
        fill[k] += 1;
    }
    (offsets, items)
}

/// Weight seen through the polarity: min-trees sweep `w` upwards, max-trees
/// sweep `-w` upwards. Adding 0.0 folds -0.0 into 0.0.
fn oriented(w: f64, polarity: Polarity) -> f64 {
    match polarity {
        Polarity::Min => w + 0.0,
        Polarity::Max => -w + 0.0,
    }
}

fn check_weights(g: &NodeWeightedGraph) -> Result<()> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if let Some(v) = g.weights().iter().position(|w| !w.is_finite()) {
        return Err(Error::NonFiniteWeight { vertex: v });
    }
    Ok(())
}

fn tree_kind(polarity: Polarity) -> TreeKind {
    match polarity {
        Polarity::Min => TreeKind::MinTree,
        Polarity::Max => TreeKind::MaxTree,
    }
}

fn find_root(zpar: &mut [usize], mut v: usize) -> usize {
    let mut root = v;
    while zpar[root] != root {
        root = zpar[root];
    }
    while zpar[v] != root {
        let next = zpar[v];
        zpar[v] = root;
        v = next;
    }
    root
}

/// Builds the min- or max-tree of a connected node-weighted graph.
///
/// Vertices are processed from the leaves' end of the sweep (lowest weight
/// first for a min-tree), ties broken by ascending vertex id. Each vertex
/// becomes the parent of the roots of its already-processed neighbors'
/// sets; a final pass collapses equal-level parent chains onto one canonical
/// vertex per component.
pub fn build_component_tree(g: &NodeWeightedGraph, polarity: Polarity) -> Result<ComponentTree> {
    check_weights(g)?;
    let n = g.vertex_count();
    let key: Vec<f64> = g.weights().iter().map(|&w| oriented(w, polarity)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));

    const UNSEEN: usize = usize::MAX;
    let mut parent = vec![UNSEEN; n];
    let mut zpar = vec![UNSEEN; n];
    for &p in &order {
        parent[p] = p;
        zpar[p] = p;
        for &q in g.neighbors(p) {
            if zpar[q] != UNSEEN {
                let r = find_root(&mut zpar, q);
                if r != p {
                    parent[r] = p;
                    zpar[r] = p;
                }
            }
        }
    }
    let components = (0..n).filter(|&p| parent[p] == p).count();
    if components > 1 {
        return Err(Error::DisconnectedGraph { components });
    }

    for &p in order.iter().rev() {
        let q = parent[p];
        if key[parent[q]] == key[q] {
            parent[p] = parent[q];
        }
    }
    let is_canonical = |p: usize| parent[p] == p || key[parent[p]] != key[p];

    let mut raw_id = vec![UNSEEN; n];
    let mut canon = Vec::new();
    for p in 0..n {
        if is_canonical(p) {
            raw_id[p] = canon.len();
            canon.push(p);
        }
    }
    let raw_parent: Vec<usize> = canon.iter().map(|&c| raw_id[parent[c]]).collect();
    let raw_level: Vec<f64> = canon.iter().map(|&c| g.weight(c)).collect();
    let raw_nov: Vec<usize> = (0..n)
        .map(|v| {
            if is_canonical(v) {
                raw_id[v]
            } else {
                raw_id[parent[v]]
            }
        })
        .collect();
    Ok(ComponentTree::from_raw(
        tree_kind(polarity),
        g.grid(),
        &raw_parent,
        &raw_level,
        &raw_nov,
    ))
}

/// Reference construction by explicit threshold sweep: label the components
/// of every threshold set by breadth-first flooding and link each component
/// to the first strictly larger component containing it. Quadratic; meant
/// for cross-checking [`build_component_tree`] on small graphs.
pub fn brute_force_tree(g: &NodeWeightedGraph, polarity: Polarity) -> Result<ComponentTree> {
    check_weights(g)?;
    let n = g.vertex_count();
    let key: Vec<f64> = g.weights().iter().map(|&w| oriented(w, polarity)).collect();
    let mut levels = key.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    const NONE: usize = usize::MAX;
    // labels[i][v]: component of v in the threshold set at levels[i]
    let mut labels: Vec<Vec<usize>> = Vec::with_capacity(levels.len());
    let mut sizes: Vec<Vec<usize>> = Vec::with_capacity(levels.len());
    let mut tops: Vec<Vec<f64>> = Vec::with_capacity(levels.len());
    for &t in &levels {
        let mut label = vec![NONE; n];
        let mut size = Vec::new();
        let mut top = Vec::new();
        for s in 0..n {
            if key[s] > t || label[s] != NONE {
                continue;
            }
            let c = size.len();
            let mut count = 0;
            let mut highest = f64::NEG_INFINITY;
            let mut queue = VecDeque::from([s]);
            label[s] = c;
            while let Some(v) = queue.pop_front() {
                count += 1;
                highest = highest.max(key[v]);
                for &u in g.neighbors(v) {
                    if key[u] <= t && label[u] == NONE {
                        label[u] = c;
                        queue.push_back(u);
                    }
                }
            }
            size.push(count);
            top.push(highest);
        }
        labels.push(label);
        sizes.push(size);
        tops.push(top);
    }
    let last = levels.len() - 1;
    if sizes[last].len() > 1 {
        return Err(Error::DisconnectedGraph {
            components: sizes[last].len(),
        });
    }

    // a component is a node at the level equal to its highest member
    let mut node_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    for (i, &t) in levels.iter().enumerate() {
        for c in 0..sizes[i].len() {
            if tops[i][c] == t {
                node_index.insert((i, c), nodes.len());
                nodes.push((i, c));
            }
        }
    }
    let level_of = |v: usize| levels.binary_search_by(|l| l.total_cmp(&key[v])).unwrap();
    let node_of_vertex: Vec<usize> = (0..n)
        .map(|v| {
            let i = level_of(v);
            node_index[&(i, labels[i][v])]
        })
        .collect();
    let mut representative = vec![NONE; nodes.len()];
    for v in 0..n {
        let i = level_of(v);
        let node = node_index[&(i, labels[i][v])];
        if representative[node] == NONE {
            representative[node] = v;
        }
        // a vertex also represents every node it belongs to at higher levels
        for j in i + 1..levels.len() {
            if let Some(&m) = node_index.get(&(j, labels[j][v])) {
                if representative[m] == NONE {
                    representative[m] = v;
                }
            }
        }
    }

    let parent: Vec<usize> = nodes
        .iter()
        .enumerate()
        .map(|(id, &(i, c))| {
            let r = representative[id];
            for j in i + 1..levels.len() {
                let cj = labels[j][r];
                if sizes[j][cj] > sizes[i][c] {
                    return node_index[&(j, cj)];
                }
            }
            id
        })
        .collect();
    let level: Vec<f64> = nodes
        .iter()
        .map(|&(i, _)| oriented(levels[i], polarity))
        .collect();
    Ok(ComponentTree::from_raw(
        tree_kind(polarity),
        g.grid(),
        &parent,
        &level,
        &node_of_vertex,
    ))
}

/// Per-node output of the direct reconstruction rule: each node takes the
/// level of its lowest kept ancestor-or-self. The root is always kept.
pub fn reconstruct_nodes(t: &ComponentTree, keep: impl Fn(usize) -> bool) -> Vec<f64> {
    let mut value = vec![0.0; t.len()];
    if t.is_empty() {
        return value;
    }
    if !keep(0) {
        ROOT_OVERRIDES.fetch_add(1, Ordering::Relaxed);
    }
    value[0] = t.level[0];
    for n in 1..t.len() {
        value[n] = if keep(n) {
            t.level[n]
        } else {
            value[t.parent[n]]
        };
    }
    value
}

/// Direct-rule reconstruction: every vertex receives the level of the lowest
/// kept ancestor-or-self of its smallest node.
pub fn reconstruct(t: &ComponentTree, keep: impl Fn(usize) -> bool) -> Vec<f64> {
    let node_value = reconstruct_nodes(t, keep);
    t.node_of_vertex.iter().map(|&n| node_value[n]).collect()
}
