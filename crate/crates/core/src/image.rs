//! Gray-level images on a rectangular grid and the pixel-level predicates
//! used to check filter outputs.
//!
//! Pixels are stored row-major. A pixel id is `y * width + x` with `(x, y)` =
//! (column, row) and the origin at the top-left corner.

use crate::error::{Error, Result};
use crate::graph::{GridDims, NodeWeightedGraph};

/// Pixel adjacency on the square grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connectivity {
    C4,
    C8,
}

const C4_OFFSETS: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
const C8_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

impl Connectivity {
    pub fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::C4 => &C4_OFFSETS,
            Connectivity::C8 => &C8_OFFSETS,
        }
    }

    /// The connectivity paired with this one for complements (4 <-> 8).
    pub fn dual(self) -> Self {
        match self {
            Connectivity::C4 => Connectivity::C8,
            Connectivity::C8 => Connectivity::C4,
        }
    }
}

impl std::str::FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4" | "c4" | "C4" => Ok(Connectivity::C4),
            "8" | "c8" | "C8" => Ok(Connectivity::C8),
            other => Err(Error::InvalidParameter(format!("connectivity `{other}`"))),
        }
    }
}

/// Calls `visit(q)` for every in-bounds neighbor `q` of pixel `p`.
#[inline]
pub(crate) fn for_each_neighbor(
    p: usize,
    width: usize,
    height: usize,
    conn: Connectivity,
    mut visit: impl FnMut(usize),
) {
    let x = (p % width) as isize;
    let y = (p / width) as isize;
    for &(dx, dy) in conn.offsets() {
        let nx = x + dx;
        let ny = y + dy;
        if nx >= 0 && ny >= 0 && (nx as usize) < width && (ny as usize) < height {
            visit(ny as usize * width + nx as usize);
        }
    }
}

/// An 8-bit gray-level image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    values: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, values: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} image needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(Image {
            width,
            height,
            values,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Image::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Image::new(width, height, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> GridDims {
        GridDims {
            width: self.width,
            height: self.height,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u8> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.values[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.values[y * self.width + x] = value;
    }

    /// The complemented image `255 - f`.
    pub fn complement(&self) -> Image {
        Image {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|&v| 255 - v).collect(),
        }
    }

    /// Builds an image from real-valued samples (as produced by
    /// reconstruction), rounding to the nearest gray level.
    pub fn from_levels(dims: GridDims, levels: &[f64]) -> Result<Image> {
        let values = levels
            .iter()
            .map(|&l| l.round().clamp(0.0, 255.0) as u8)
            .collect();
        Image::new(dims.width, dims.height, values)
    }

    fn check_same_dims(&self, other: &Image) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// An 8-bit RGB image, only ever written (overlay rendering).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn from_gray(img: &Image) -> RgbImage {
        RgbImage {
            width: img.width(),
            height: img.height(),
            pixels: img.values().iter().map(|&v| [v, v, v]).collect(),
        }
    }
}

/// The pixel grid as a node-weighted graph: one vertex per pixel weighted by
/// its gray value, edges between `conn`-neighbors.
pub fn grid_graph(img: &Image, conn: Connectivity) -> NodeWeightedGraph {
    let (w, h) = (img.width, img.height);
    let mut offsets = Vec::with_capacity(img.len() + 1);
    let mut targets = Vec::with_capacity(img.len() * conn.offsets().len());
    offsets.push(0);
    for p in 0..img.len() {
        for_each_neighbor(p, w, h, conn, |q| targets.push(q));
        offsets.push(targets.len());
    }
    let weights = img.values.iter().map(|&v| f64::from(v)).collect();
    NodeWeightedGraph::from_csr(offsets, targets, weights).with_grid(img.dims())
}

/// Whether `g` is a leveling of `f`: every transition `g(p) > g(q)` between
/// neighbors satisfies `f(p) >= g(p)` and `g(q) >= f(q)`.
pub fn is_leveling(f: &Image, g: &Image, conn: Connectivity) -> Result<bool> {
    f.check_same_dims(g)?;
    let (w, h) = (f.width, f.height);
    for p in 0..f.len() {
        let gp = g.values[p];
        let mut ok = true;
        for_each_neighbor(p, w, h, conn, |q| {
            let gq = g.values[q];
            if gp > gq && !(f.values[p] >= gp && gq >= f.values[q]) {
                ok = false;
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether no threshold set of `img` contains a diagonal-only configuration
/// in any 2x2 block. On such images 4- and 8-connected components of every
/// level set coincide.
pub fn is_well_composed(img: &Image) -> bool {
    let (w, h) = (img.width, img.height);
    for y in 0..h.saturating_sub(1) {
        for x in 0..w.saturating_sub(1) {
            let a = img.get(x, y);
            let b = img.get(x + 1, y);
            let c = img.get(x, y + 1);
            let d = img.get(x + 1, y + 1);
            // diagonals (a, d) and (b, c)
            if a.min(d) > b.max(c) || b.min(c) > a.max(d) {
                return false;
            }
        }
    }
    true
}

/// Which residue [`top_hat`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TopHat {
    /// `|f - g|`
    #[default]
    Absolute,
    /// `f - g`, saturating at 0 (max-tree levelings satisfy `g <= f`).
    InputMinusFiltered,
    /// `g - f`, saturating at 0 (min-tree levelings satisfy `g >= f`).
    FilteredMinusInput,
}

/// Residue between the input `f` and a filtered image `g`.
pub fn top_hat(f: &Image, g: &Image, kind: TopHat) -> Result<Image> {
    f.check_same_dims(g)?;
    let values = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(&a, &b)| match kind {
            TopHat::Absolute => a.abs_diff(b),
            TopHat::InputMinusFiltered => a.saturating_sub(b),
            TopHat::FilteredMinusInput => b.saturating_sub(a),
        })
        .collect();
    Image::new(f.width, f.height, values)
}
