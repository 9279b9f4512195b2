//! Tree of shapes: the inclusion tree of saturated (hole-filled) connected
//! components of upper and lower threshold sets.
//!
//! Upper sets `{f >= t}` use 4-connectivity and lower sets `{f <= t}` use
//! 8-connectivity; holes are the complement components in the dual
//! connectivity. The image is surrounded by a virtual one-pixel ring whose
//! value is the lower median of the border pixels. Components containing the
//! ring saturate to the whole domain, which is the root shape.
//!
//! Construction sweeps every gray level. At each level the components of the
//! set and of its complement form an adjacency tree rooted at the ring's
//! component; the saturation of a component is the component plus every
//! region it encloses in that tree. Shapes are deduplicated by an area and
//! pixel-hash fingerprint, only first occurrences are materialized, and the
//! tree is linked by painting shapes in decreasing area order.

use std::collections::HashSet;

use crate::graph::GridDims;
use crate::image::{for_each_neighbor, Connectivity, Image};
use crate::tree::{ComponentTree, TreeKind};

/// Which family of threshold sets a shape comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeOrigin {
    /// Saturated component of a lower set, 8-connected.
    Lower,
    /// Saturated component of an upper set, 4-connected.
    Upper,
    /// The whole domain.
    Border,
}

impl ShapeOrigin {
    /// Connectivity of the shape's generating component.
    pub fn connectivity(self) -> Connectivity {
        match self {
            ShapeOrigin::Upper => Connectivity::C4,
            ShapeOrigin::Lower | ShapeOrigin::Border => Connectivity::C8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    /// Pixel ids in increasing order.
    pub pixels: Vec<usize>,
    pub level: f64,
    pub origin: ShapeOrigin,
}

/// Fills the holes of a pixel set: adds every complement component (under
/// `conn_complement`) that does not reach the image border.
pub fn saturate(pixels: &[usize], dims: GridDims, conn_complement: Connectivity) -> Vec<usize> {
    let (w, h) = (dims.width, dims.height);
    let mut inside = vec![false; dims.len()];
    for &p in pixels {
        inside[p] = true;
    }
    let mut exterior = vec![false; dims.len()];
    let mut stack = Vec::new();
    for p in 0..dims.len() {
        let (x, y) = dims.coords(p);
        let on_border = x == 0 || y == 0 || x + 1 == w || y + 1 == h;
        if on_border && !inside[p] && !exterior[p] {
            exterior[p] = true;
            stack.push(p);
        }
    }
    while let Some(p) = stack.pop() {
        for_each_neighbor(p, w, h, conn_complement, |q| {
            if !inside[q] && !exterior[q] {
                exterior[q] = true;
                stack.push(q);
            }
        });
    }
    (0..dims.len()).filter(|&p| !exterior[p]).collect()
}

/// Lower median of the border pixel values: the level of the virtual ring
/// and of the root shape.
pub fn border_median(img: &Image) -> u8 {
    let (w, h) = (img.width(), img.height());
    let mut border: Vec<u8> = (0..img.len())
        .filter(|&p| {
            let (x, y) = (p % w, p / w);
            x == 0 || y == 0 || x + 1 == w || y + 1 == h
        })
        .map(|p| img.values()[p])
        .collect();
    border.sort_unstable();
    border[(border.len() - 1) / 2]
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

type Fingerprint = (usize, u64, u64);

/// The image padded with the virtual ring.
struct Extended {
    width: usize,
    height: usize,
    values: Vec<u8>,
    /// original pixel id, or `usize::MAX` for ring pixels
    original: Vec<usize>,
}

impl Extended {
    fn new(img: &Image, ring: u8) -> Self {
        let (w, h) = (img.width() + 2, img.height() + 2);
        let mut values = vec![ring; w * h];
        let mut original = vec![usize::MAX; w * h];
        for y in 0..img.height() {
            for x in 0..img.width() {
                let e = (y + 1) * w + x + 1;
                values[e] = img.get(x, y);
                original[e] = y * img.width() + x;
            }
        }
        Extended {
            width: w,
            height: h,
            values,
            original,
        }
    }
}

/// Components of a binary partition of the extended grid, with the set
/// labeled under `set_conn` and the complement under its dual.
struct Partition {
    label: Vec<usize>,
    in_set: Vec<bool>,
    count: usize,
}

fn label_partition(
    ext: &Extended,
    member: impl Fn(u8) -> bool,
    set_conn: Connectivity,
) -> Partition {
    let n = ext.values.len();
    let mut label = vec![usize::MAX; n];
    let mut in_set = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let c = in_set.len();
        let side = member(ext.values[s]);
        let conn = if side { set_conn } else { set_conn.dual() };
        in_set.push(side);
        label[s] = c;
        stack.push(s);
        while let Some(p) = stack.pop() {
            for_each_neighbor(p, ext.width, ext.height, conn, |q| {
                if label[q] == usize::MAX && member(ext.values[q]) == side {
                    label[q] = c;
                    stack.push(q);
                }
            });
        }
    }
    Partition {
        label,
        count: in_set.len(),
        in_set,
    }
}

struct Sweep<'a> {
    ext: &'a Extended,
    hash_a: Vec<u64>,
    hash_b: Vec<u64>,
    seen: HashSet<Fingerprint>,
    shapes: Vec<Shape>,
}

impl Sweep<'_> {
    fn level(
        &mut self,
        member: impl Fn(u8) -> bool,
        set_conn: Connectivity,
        level: f64,
        origin: ShapeOrigin,
    ) {
        let ext = self.ext;
        let part = label_partition(ext, &member, set_conn);
        let m = part.count;

        // component adjacency through 4-adjacent pixel pairs
        let mut edges = Vec::new();
        for p in 0..ext.values.len() {
            let (x, y) = (p % ext.width, p / ext.width);
            for q in [
                (x + 1 < ext.width).then_some(p + 1),
                (y + 1 < ext.height).then_some(p + ext.width),
            ]
            .into_iter()
            .flatten()
            {
                let (a, b) = (part.label[p], part.label[q]);
                if a != b {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }

        // enclosure tree rooted at the ring's component (pixel 0 is a ring corner)
        let root = part.label[0];
        let mut parent = vec![usize::MAX; m];
        parent[root] = root;
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for &d in &adj[c] {
                if parent[d] == usize::MAX {
                    parent[d] = c;
                    order.push(d);
                }
            }
            i += 1;
        }

        let mut area = vec![0usize; m];
        let mut ha = vec![0u64; m];
        let mut hb = vec![0u64; m];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (e, &c) in part.label.iter().enumerate() {
            let o = ext.original[e];
            if o != usize::MAX {
                area[c] += 1;
                ha[c] = ha[c].wrapping_add(self.hash_a[o]);
                hb[c] = hb[c].wrapping_add(self.hash_b[o]);
                members[c].push(o);
            }
        }
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); m];
        for &c in order.iter().skip(1).rev() {
            let p = parent[c];
            area[p] += area[c];
            ha[p] = ha[p].wrapping_add(ha[c]);
            hb[p] = hb[p].wrapping_add(hb[c]);
            kids[p].push(c);
        }

        for &c in order.iter().skip(1) {
            if !part.in_set[c] {
                continue;
            }
            if !self.seen.insert((area[c], ha[c], hb[c])) {
                continue;
            }
            let mut pixels = Vec::with_capacity(area[c]);
            let mut stack = vec![c];
            while let Some(d) = stack.pop() {
                pixels.extend_from_slice(&members[d]);
                stack.extend_from_slice(&kids[d]);
            }
            pixels.sort_unstable();
            self.shapes.push(Shape {
                pixels,
                level,
                origin,
            });
        }
    }
}

/// Enumerates the distinct shapes of `img`, the whole domain first.
///
/// A shape generated by several thresholds keeps the level closest to its
/// interior (highest for upper sets, lowest for lower sets); a pixel set
/// produced by both families keeps the upper-set level.
pub fn enumerate_shapes(img: &Image) -> Vec<Shape> {
    let ring = border_median(img);
    let ext = Extended::new(img, ring);
    let n = img.len();
    let hash_a: Vec<u64> = (0..n as u64).map(splitmix64).collect();
    let hash_b: Vec<u64> = (0..n as u64)
        .map(|p| splitmix64(p ^ 0x5851_f42d_4c95_7f2d))
        .collect();
    let full = (
        n,
        hash_a.iter().fold(0u64, |s, &h| s.wrapping_add(h)),
        hash_b.iter().fold(0u64, |s, &h| s.wrapping_add(h)),
    );
    let mut sweep = Sweep {
        ext: &ext,
        hash_a,
        hash_b,
        seen: HashSet::from([full]),
        shapes: vec![Shape {
            pixels: (0..n).collect(),
            level: f64::from(ring),
            origin: ShapeOrigin::Border,
        }],
    };

    let mut levels: Vec<u8> = img.values().to_vec();
    levels.push(ring);
    levels.sort_unstable();
    levels.dedup();
    for &t in levels.iter().rev() {
        sweep.level(
            |v| v >= t,
            Connectivity::C4,
            f64::from(t),
            ShapeOrigin::Upper,
        );
    }
    for &t in &levels {
        sweep.level(
            |v| v <= t,
            Connectivity::C8,
            f64::from(t),
            ShapeOrigin::Lower,
        );
    }
    sweep.shapes
}

/// Builds the tree of shapes, also returning the origin of every node.
pub fn build_tree_of_shapes_with_origins(img: &Image) -> (ComponentTree, Vec<ShapeOrigin>) {
    let mut shapes = enumerate_shapes(img);
    shapes.sort_by(|a, b| {
        b.pixels
            .len()
            .cmp(&a.pixels.len())
            .then(a.pixels[0].cmp(&b.pixels[0]))
    });
    debug_assert_eq!(shapes[0].origin, ShapeOrigin::Border);

    let mut label = vec![0usize; img.len()];
    let mut parent = vec![0usize; shapes.len()];
    for (s, shape) in shapes.iter().enumerate().skip(1) {
        let p = label[shape.pixels[0]];
        debug_assert!(
            shape.pixels.iter().all(|&q| label[q] == p),
            "shapes must be nested or disjoint"
        );
        parent[s] = p;
        for &q in &shape.pixels {
            label[q] = s;
        }
    }
    let level: Vec<f64> = shapes.iter().map(|s| s.level).collect();
    let tree = ComponentTree::from_raw(
        TreeKind::TreeOfShapes,
        Some(img.dims()),
        &parent,
        &level,
        &label,
    );
    debug_assert_eq!(tree.parents(), &parent[..]);
    let origins = shapes.iter().map(|s| s.origin).collect();
    (tree, origins)
}

/// Builds the tree of shapes of `img`. Node 0 is the whole domain at the
/// border median level; every pixel maps to the smallest shape containing
/// it, whose level is the pixel's gray value.
pub fn build_tree_of_shapes(img: &Image) -> ComponentTree {
    build_tree_of_shapes_with_origins(img).0
}
