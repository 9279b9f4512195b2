//! Shape attributes of tree nodes.
//!
//! Second-order moments include the pixel-spread term `n/12` per axis, so a
//! node made of `n` unit squares has the inertia of the union of squares
//! rather than of `n` points. Circularity is `A^2 / (2 pi I)`, which is 1
//! for an ideal disk and the reciprocal of `2 pi I/A^2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tree::{ComponentTree, TreeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttributeKind {
    Area,
    ContourLength,
    Inertia,
    InertiaOverArea2,
    Circularity,
    Elongation,
    /// Caller-supplied values, e.g. a combination of attributes or an energy.
    Custom,
}

impl AttributeKind {
    pub const ALL: [AttributeKind; 6] = [
        AttributeKind::Area,
        AttributeKind::ContourLength,
        AttributeKind::Inertia,
        AttributeKind::InertiaOverArea2,
        AttributeKind::Circularity,
        AttributeKind::Elongation,
    ];

    /// Which end of the value range marks the components of interest.
    pub fn default_orientation(self) -> Orientation {
        match self {
            AttributeKind::Area | AttributeKind::Circularity | AttributeKind::Inertia => {
                Orientation::RelevantIsHigh
            }
            AttributeKind::InertiaOverArea2
            | AttributeKind::Elongation
            | AttributeKind::ContourLength
            | AttributeKind::Custom => Orientation::RelevantIsLow,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AttributeKind::Area => "area",
            AttributeKind::ContourLength => "contour",
            AttributeKind::Inertia => "inertia",
            AttributeKind::InertiaOverArea2 => "inertia_over_area2",
            AttributeKind::Circularity => "circularity",
            AttributeKind::Elongation => "elongation",
            AttributeKind::Custom => "custom",
        }
    }
}

impl std::fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AttributeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "area" => Ok(AttributeKind::Area),
            "contour" | "contour_length" => Ok(AttributeKind::ContourLength),
            "inertia" => Ok(AttributeKind::Inertia),
            "inertia_over_area2" => Ok(AttributeKind::InertiaOverArea2),
            "circularity" => Ok(AttributeKind::Circularity),
            "elongation" => Ok(AttributeKind::Elongation),
            other => Err(Error::UnknownAttribute(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    RelevantIsLow,
    RelevantIsHigh,
}

/// Attribute values for every node of one tree.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeMap {
    tree: TreeId,
    kind: AttributeKind,
    orientation: Orientation,
    values: Vec<f64>,
}

impl AttributeMap {
    /// Wraps caller-computed values. `values` must hold one entry per node.
    pub fn new(
        tree: &ComponentTree,
        kind: AttributeKind,
        orientation: Orientation,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != tree.len() {
            return Err(Error::InvalidParameter(format!(
                "{} attribute values for a tree of {} nodes",
                values.len(),
                tree.len()
            )));
        }
        Ok(AttributeMap {
            tree: tree.id(),
            kind,
            orientation,
            values,
        })
    }

    pub fn custom(
        tree: &ComponentTree,
        orientation: Orientation,
        values: Vec<f64>,
    ) -> Result<Self> {
        AttributeMap::new(tree, AttributeKind::Custom, orientation, values)
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn tree_id(&self) -> TreeId {
        self.tree
    }

    pub fn kind(&self) -> AttributeKind {
        self.kind
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// `(min, max)` over all nodes.
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Raw first- and second-order coordinate sums of a pixel set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: f64,
    pub sx: f64,
    pub sy: f64,
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

impl Moments {
    pub fn of_pixel(x: usize, y: usize) -> Moments {
        let (x, y) = (x as f64, y as f64);
        Moments {
            n: 1.0,
            sx: x,
            sy: y,
            sxx: x * x,
            syy: y * y,
            sxy: x * y,
        }
    }

    pub fn add(&mut self, o: &Moments) {
        self.n += o.n;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.syy += o.syy;
        self.sxy += o.sxy;
    }

    pub fn centroid(&self) -> (f64, f64) {
        (self.sx / self.n, self.sy / self.n)
    }

    /// Central moments `(mu20, mu02, mu11)` with the pixel-spread term.
    pub fn central(&self) -> (f64, f64, f64) {
        let n = self.n;
        let mu20 = self.sxx - self.sx * self.sx / n + n / 12.0;
        let mu02 = self.syy - self.sy * self.sy / n + n / 12.0;
        let mu11 = self.sxy - self.sx * self.sy / n;
        (mu20, mu02, mu11)
    }

    pub fn inertia(&self) -> f64 {
        let (a, b, _) = self.central();
        a + b
    }

    pub fn inertia_over_area2(&self) -> f64 {
        self.inertia() / (self.n * self.n)
    }

    pub fn circularity(&self) -> f64 {
        (self.n * self.n / (2.0 * PI * self.inertia())).min(1.0)
    }

    pub fn elongation(&self) -> f64 {
        let (a, b, c) = self.central();
        let mean = 0.5 * (a + b);
        let spread = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        ((mean + spread) / (mean - spread)).sqrt()
    }
}

/// Moments of every node, accumulated in one pass from the leaves up;
/// children are added in increasing node-id order.
pub fn accumulate_moments(t: &ComponentTree) -> Result<Vec<Moments>> {
    let dims = t.grid().ok_or(Error::NotAGrid)?;
    let mut m = vec![Moments::default(); t.len()];
    for n in (0..t.len()).rev() {
        let mut acc = Moments::default();
        for &p in t.own_vertices(n) {
            let (x, y) = dims.coords(p);
            acc.add(&Moments::of_pixel(x, y));
        }
        for &c in t.children(n) {
            let child = m[c];
            acc.add(&child);
        }
        m[n] = acc;
    }
    Ok(m)
}

/// Number of unit pixel sides separating each node from its complement
/// (the image border counts as complement).
///
/// Every node has `4 * area` pixel sides; a 4-adjacent pixel pair hides two
/// of them in exactly the nodes containing both pixels, i.e. in the lowest
/// common ancestor of their smallest nodes and above.
pub fn contour_lengths(t: &ComponentTree) -> Result<Vec<f64>> {
    let dims = t.grid().ok_or(Error::NotAGrid)?;
    let mut inner = vec![0usize; t.len()];
    for p in 0..dims.len() {
        let (x, y) = dims.coords(p);
        let np = t.node_of_vertex(p);
        if x + 1 < dims.width {
            inner[t.lca(np, t.node_of_vertex(p + 1))] += 1;
        }
        if y + 1 < dims.height {
            inner[t.lca(np, t.node_of_vertex(p + dims.width))] += 1;
        }
    }
    for n in (1..t.len()).rev() {
        inner[t.parent(n)] += inner[n];
    }
    Ok(t.areas()
        .iter()
        .zip(&inner)
        .map(|(&a, &i)| (4 * a - 2 * i) as f64)
        .collect())
}

/// Computes attribute `kind` on every node of a tree built over a pixel
/// grid, with the kind's default orientation.
pub fn attribute(t: &ComponentTree, kind: AttributeKind) -> Result<AttributeMap> {
    let values = match kind {
        AttributeKind::Custom => {
            return Err(Error::UnknownAttribute("custom".into()));
        }
        AttributeKind::ContourLength => contour_lengths(t)?,
        AttributeKind::Area => {
            t.grid().ok_or(Error::NotAGrid)?;
            t.areas().into_iter().map(|a| a as f64).collect()
        }
        _ => {
            let f: fn(&Moments) -> f64 = match kind {
                AttributeKind::Inertia => Moments::inertia,
                AttributeKind::InertiaOverArea2 => Moments::inertia_over_area2,
                AttributeKind::Circularity => Moments::circularity,
                _ => Moments::elongation,
            };
            accumulate_moments(t)?.iter().map(f).collect()
        }
    };
    AttributeMap::new(t, kind, kind.default_orientation(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments_of(pixels: &[(usize, usize)]) -> Moments {
        let mut m = Moments::default();
        for &(x, y) in pixels {
            m.add(&Moments::of_pixel(x, y));
        }
        m
    }

    #[test]
    fn single_pixel_sums() {
        let m = Moments::of_pixel(3, 4);
        assert_eq!(
            (m.n, m.sx, m.sy, m.sxx, m.syy, m.sxy),
            (1.0, 3.0, 4.0, 9.0, 16.0, 12.0)
        );
    }

    #[test]
    fn square_5x5() {
        let px: Vec<_> = (0..5).flat_map(|y| (0..5).map(move |x| (x, y))).collect();
        let m = moments_of(&px);
        assert_eq!(
            (m.n, m.sx, m.sy, m.sxx, m.syy, m.sxy),
            (25.0, 50.0, 50.0, 150.0, 150.0, 100.0)
        );
        assert!((m.inertia() - (100.0 + 25.0 / 6.0)).abs() < 1e-12);
        assert!((m.inertia_over_area2() - 1.0 / 6.0).abs() < 1e-12);
        assert!((m.circularity() - 3.0 / PI).abs() < 1e-12);
        assert!((m.circularity() - 0.955).abs() < 5e-4);
        assert!((m.elongation() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plus_shape() {
        let m = moments_of(&[(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]);
        assert!((m.inertia() - (4.0 + 5.0 / 6.0)).abs() < 1e-12);
        assert!((m.circularity() - 0.823).abs() < 5e-4);
    }

    #[test]
    fn segment_elongation() {
        let m = moments_of(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
        let (a, b, c) = m.central();
        assert!((a - (10.0 + 5.0 / 12.0)).abs() < 1e-12);
        assert!((b - 5.0 / 12.0).abs() < 1e-12);
        assert_eq!(c, 0.0);
        assert!((m.elongation() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            "contour".parse::<AttributeKind>().unwrap(),
            AttributeKind::ContourLength
        );
        for k in AttributeKind::ALL {
            assert_eq!(k.name().parse::<AttributeKind>().unwrap(), k);
        }
        assert!(matches!(
            "roundness".parse::<AttributeKind>(),
            Err(Error::UnknownAttribute(_))
        ));
    }
}
