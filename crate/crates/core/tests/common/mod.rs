//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::Rng;
use shapespace::attributes::{attribute, AttributeKind};
use shapespace::shape_space::{base_tree, FilterSpec, Mode, SecondAttribute, Strategy};
use shapespace::{Connectivity, Image, NodeWeightedGraph, Orientation, TreeKind};

/// Pixels of the component of `p` in `{q : inside(f(q))}` (empty if `p` is
/// outside the set).
pub fn pixel_component(
    f: &Image,
    conn: Connectivity,
    p: usize,
    inside: impl Fn(u8) -> bool,
) -> Vec<usize> {
    let (w, h) = (f.width() as isize, f.height() as isize);
    let v = f.values();
    if !inside(v[p]) {
        return Vec::new();
    }
    let mut seen = vec![false; v.len()];
    let mut queue = VecDeque::from([p]);
    seen[p] = true;
    let mut out = Vec::new();
    while let Some(q) = queue.pop_front() {
        out.push(q);
        let (x, y) = ((q as isize) % w, (q as isize) / w);
        for &(dx, dy) in conn.offsets() {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= w || ny >= h {
                continue;
            }
            let r = (ny * w + nx) as usize;
            if !seen[r] && inside(v[r]) {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    out
}

fn distinct_values(f: &Image) -> Vec<u8> {
    let mut vals = f.values().to_vec();
    vals.sort_unstable();
    vals.dedup();
    vals
}

/// Area closing by definition: the lowest level at which the pixel's lower
/// threshold component holds at least `k` pixels.
pub fn area_closing(f: &Image, conn: Connectivity, k: usize) -> Image {
    let vals = distinct_values(f);
    let out: Vec<u8> = (0..f.len())
        .map(|p| {
            *vals
                .iter()
                .filter(|&&l| l >= f.values()[p])
                .find(|&&l| pixel_component(f, conn, p, |v| v <= l).len() >= k)
                .expect("the whole image is one component")
        })
        .collect();
    Image::new(f.width(), f.height(), out).unwrap()
}

/// Area opening by definition, dual of [`area_closing`].
pub fn area_opening(f: &Image, conn: Connectivity, k: usize) -> Image {
    let vals = distinct_values(f);
    let out: Vec<u8> = (0..f.len())
        .map(|p| {
            *vals
                .iter()
                .rev()
                .filter(|&&l| l <= f.values()[p])
                .find(|&&l| pixel_component(f, conn, p, |v| v >= l).len() >= k)
                .expect("the whole image is one component")
        })
        .collect();
    Image::new(f.width(), f.height(), out).unwrap()
}

/// Vertices of the component of `start` in `{v : weight(v) <= level}`.
pub fn graph_component(g: &NodeWeightedGraph, start: usize, level: f64) -> Vec<bool> {
    let mut inside = vec![false; g.vertex_count()];
    if g.weight(start) > level {
        return inside;
    }
    inside[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if !inside[u] && g.weight(u) <= level {
                inside[u] = true;
                queue.push_back(u);
            }
        }
    }
    inside
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMinimum {
    /// Sorted vertices of the flat zone.
    pub plateau: Vec<usize>,
    pub altitude: f64,
    pub extinction: f64,
}

/// Regional minima of a graph in precedence order (altitude, then smallest
/// vertex), each with its extinction value from an explicit threshold sweep:
/// the smallest level at which its component reaches an earlier minimum,
/// minus its altitude.
pub fn extinction_oracle(g: &NodeWeightedGraph) -> Vec<OracleMinimum> {
    let n = g.vertex_count();
    let mut zone = vec![usize::MAX; n];
    let mut minima: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if zone[s] != usize::MAX {
            continue;
        }
        let w = g.weight(s);
        let mut flat = vec![s];
        zone[s] = s;
        let mut i = 0;
        let mut is_min = true;
        while i < flat.len() {
            let v = flat[i];
            i += 1;
            for &u in g.neighbors(v) {
                if g.weight(u) < w {
                    is_min = false;
                } else if g.weight(u) == w && zone[u] == usize::MAX {
                    zone[u] = s;
                    flat.push(u);
                }
            }
        }
        if is_min {
            flat.sort_unstable();
            minima.push(flat);
        }
    }
    minima.sort_by(|a, b| {
        g.weight(a[0])
            .total_cmp(&g.weight(b[0]))
            .then(a[0].cmp(&b[0]))
    });

    let mut levels = g.weights().to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    minima
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let alt = g.weight(m[0]);
            let extinction = if i == 0 {
                f64::INFINITY
            } else {
                let merge = levels
                    .iter()
                    .filter(|&&l| l >= alt)
                    .find(|&&l| {
                        let comp = graph_component(g, m[0], l);
                        minima[..i].iter().any(|earlier| comp[earlier[0]])
                    })
                    .copied()
                    .expect("the graph is connected");
                merge - alt
            };
            OracleMinimum {
                plateau: m.clone(),
                altitude: alt,
                extinction,
            }
        })
        .collect()
}

/// A random filtering configuration on a min- or max-tree of `f`, with
/// parameters drawn from the range of the chosen attribute.
pub fn random_leveling_spec(rng: &mut impl Rng, f: &Image) -> FilterSpec {
    let tree = if rng.gen_bool(0.5) {
        TreeKind::MinTree
    } else {
        TreeKind::MaxTree
    };
    let conn = if rng.gen_bool(0.5) {
        Connectivity::C4
    } else {
        Connectivity::C8
    };
    let kind = AttributeKind::ALL[rng.gen_range(0..AttributeKind::ALL.len())];
    let orientation = if rng.gen_bool(0.8) {
        kind.default_orientation()
    } else if kind.default_orientation() == Orientation::RelevantIsLow {
        Orientation::RelevantIsHigh
    } else {
        Orientation::RelevantIsLow
    };
    let t = base_tree(f, tree, conn).unwrap();
    let values: Vec<f64> = attribute(&t, kind)
        .unwrap()
        .values()
        .iter()
        .map(|&v| {
            if orientation == Orientation::RelevantIsHigh {
                -v
            } else {
                v
            }
        })
        .collect();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let span = (hi - lo).max(1e-9);
    let strategy = match rng.gen_range(0..3) {
        0 => Strategy::Threshold(values[rng.gen_range(0..values.len())]),
        1 => {
            let (attribute, top) = match rng.gen_range(0..3) {
                0 => (SecondAttribute::Height, span),
                1 => (SecondAttribute::NodeCount, t.len() as f64),
                _ => (SecondAttribute::PixelArea, f.len() as f64),
            };
            Strategy::Closing {
                attribute,
                lambda: rng.gen_range(0.0..=top),
            }
        }
        _ => Strategy::Extinction(rng.gen_range(0.0..=span)),
    };
    let mode = if rng.gen_bool(0.5) {
        Mode::Preserve
    } else {
        Mode::Remove
    };
    FilterSpec::new(tree, kind, strategy)
        .connectivity(conn)
        .orientation(orientation)
        .mode(mode)
}

/// Random image whose size and gray range vary with the draw.
pub fn random_small_image(rng: &mut impl Rng, max_side: usize) -> Image {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let max = [1u8, 3, 7, 15, 255][rng.gen_range(0..5)];
    shapespace::synth::random_image(rng, w, h, max)
}
