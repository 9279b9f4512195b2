//! Node-weighted undirected graphs in compressed adjacency form.
//!
//! The same type carries the pixel grid (weights = gray values) and the
//! shape space of a component tree (weights = attribute values), so every
//! tree algorithm in this crate runs on both.

/// Size of the pixel grid a graph was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridDims {
    pub width: usize,
    pub height: usize,
}

impl GridDims {
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(x, y)` coordinates of a pixel id.
    pub fn coords(&self, p: usize) -> (usize, usize) {
        (p % self.width, p / self.width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    grid: Option<GridDims>,
}

impl NodeWeightedGraph {
    /// Builds a graph from adjacency in CSR form. The neighbors of `v` are
    /// `targets[offsets[v]..offsets[v + 1]]`.
    ///
    /// # Panics
    /// If the offset array does not match the weights and targets. Symmetry is
    /// the caller's responsibility (see [`NodeWeightedGraph::is_symmetric`]).
    pub fn from_csr(offsets: Vec<usize>, targets: Vec<usize>, weights: Vec<f64>) -> Self {
        assert_eq!(
            offsets.len(),
            weights.len() + 1,
            "one offset per vertex plus one"
        );
        assert_eq!(*offsets.last().unwrap(), targets.len());
        NodeWeightedGraph {
            offsets,
            targets,
            weights,
            grid: None,
        }
    }

    /// Builds a graph from an undirected edge list.
    pub fn from_edges(weights: Vec<f64>, edges: &[(usize, usize)]) -> Self {
        let n = weights.len();
        let mut degree = vec![0usize; n];
        for &(a, b) in edges {
            assert!(a != b, "self-loop on vertex {a}");
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(a, b) in edges {
            targets[fill[a]] = b;
            fill[a] += 1;
            targets[fill[b]] = a;
            fill[b] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        NodeWeightedGraph::from_csr(offsets, targets, weights)
    }

    pub(crate) fn with_grid(mut self, dims: GridDims) -> Self {
        assert_eq!(dims.len(), self.vertex_count());
        self.grid = Some(dims);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The pixel grid this graph was built from, if any.
    pub fn grid(&self) -> Option<GridDims> {
        self.grid
    }

    /// Adjacency is symmetric and free of self-loops.
    pub fn is_symmetric(&self) -> bool {
        (0..self.vertex_count()).all(|v| {
            self.neighbors(v)
                .iter()
                .all(|&u| u != v && self.neighbors(u).contains(&v))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = NodeWeightedGraph::from_edges(vec![1.0, 2.0, 3.0], &[(0, 1), (2, 1)]);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.neighbors(2), &[1]);
        assert_eq!(g.grid(), None);
    }

    #[test]
    #[should_panic]
    fn self_loops_rejected() {
        NodeWeightedGraph::from_edges(vec![0.0], &[(0, 0)]);
    }
}
