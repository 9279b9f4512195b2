//! Deterministic synthetic images for tests, examples and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::{is_well_composed, Image};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent uniform pixels in `0..=max`.
pub fn random_image(rng: &mut impl Rng, width: usize, height: usize, max: u8) -> Image {
    Image::from_fn(width, height, |_, _| rng.gen_range(0..=max)).expect("non-empty size")
}

/// Paints an axis-aligned rectangle `[x0, x0 + w) x [y0, y0 + h)`, clipped.
pub fn fill_rect(img: &mut Image, x0: usize, y0: usize, w: usize, h: usize, value: u8) {
    for y in y0..(y0 + h).min(img.height()) {
        for x in x0..(x0 + w).min(img.width()) {
            img.set(x, y, value);
        }
    }
}

/// Paints the pixels whose centers fall in the axis-aligned ellipse with
/// semi-axes `a` (x) and `b` (y).
pub fn fill_ellipse(img: &mut Image, cx: f64, cy: f64, a: f64, b: f64, value: u8) {
    for y in 0..img.height() {
        for x in 0..img.width() {
            let dx = (x as f64 - cx) / a;
            let dy = (y as f64 - cy) / b;
            if dx * dx + dy * dy <= 1.0 {
                img.set(x, y, value);
            }
        }
    }
}

pub fn fill_disk(img: &mut Image, cx: f64, cy: f64, r: f64, value: u8) {
    fill_ellipse(img, cx, cy, r, r, value);
}

/// Paints a plus sign centered on `(cx, cy)`: two bars of the given span and
/// arm width.
pub fn fill_plus(img: &mut Image, cx: usize, cy: usize, span: usize, arm: usize, value: u8) {
    fill_rect(img, cx - span / 2, cy - arm / 2, span, arm, value);
    fill_rect(img, cx - arm / 2, cy - span / 2, arm, span, value);
}

/// Piecewise-constant image with a constant border: random rectangles and
/// disks on a flat background, redrawn until the image is well-composed.
pub fn well_composed_image(rng: &mut impl Rng, width: usize, height: usize) -> Image {
    assert!(width >= 6 && height >= 6);
    loop {
        let background = rng.gen_range(0..=255u8);
        let mut img = Image::filled(width, height, background).expect("non-empty size");
        for _ in 0..rng.gen_range(1..=6) {
            let value = rng.gen_range(0..=255u8);
            if rng.gen_bool(0.5) {
                let w = rng.gen_range(1..=width - 2);
                let h = rng.gen_range(1..=height - 2);
                let x0 = rng.gen_range(1..=width - 1 - w);
                let y0 = rng.gen_range(1..=height - 1 - h);
                fill_rect(&mut img, x0, y0, w, h, value);
            } else {
                let r = rng.gen_range(1.0..(width.min(height) as f64 / 2.0 - 1.0).max(1.5));
                let cx = rng.gen_range(r + 1.0..width as f64 - 1.0 - r).max(1.0);
                let cy = rng.gen_range(r + 1.0..height as f64 - 1.0 - r).max(1.0);
                fill_disk(&mut img, cx, cy, r, value);
            }
        }
        // shapes may have reached the border when clipped; restore it
        for x in 0..width {
            img.set(x, 0, background);
            img.set(x, height - 1, background);
        }
        for y in 0..height {
            img.set(0, y, background);
            img.set(width - 1, y, background);
        }
        if is_well_composed(&img) {
            return img;
        }
    }
}

/// Dark tools on a lit table: washers, handles and bars on a bright,
/// slowly varying background with mild sensor noise.
pub fn tools_image(seed: u64, width: usize, height: usize) -> Image {
    let mut rng = rng(seed);
    let mut img = Image::from_fn(width, height, |x, y| {
        (190 + (x + y) * 30 / (width + height)) as u8
    })
    .expect("non-empty size");
    for _ in 0..rng.gen_range(4..=7) {
        let cx = rng.gen_range(0.15..0.85) * width as f64;
        let cy = rng.gen_range(0.15..0.85) * height as f64;
        let dark = rng.gen_range(20..90u8);
        match rng.gen_range(0..3) {
            0 => {
                let r = rng.gen_range(0.05..0.12) * width.min(height) as f64;
                fill_disk(&mut img, cx, cy, r, dark);
                fill_disk(&mut img, cx, cy, r * 0.4, 200);
            }
            1 => {
                let w = rng.gen_range(0.2..0.4) * width as f64;
                let h = rng.gen_range(0.04..0.08) * height as f64;
                fill_rect(
                    &mut img,
                    (cx - w / 2.0).max(0.0) as usize,
                    cy as usize,
                    w as usize,
                    h as usize + 1,
                    dark,
                );
            }
            _ => {
                let a = rng.gen_range(0.08..0.2) * width as f64;
                fill_ellipse(&mut img, cx, cy, a, a * rng.gen_range(0.25..0.6), dark);
            }
        }
    }
    let noisy: Vec<u8> = img
        .values()
        .iter()
        .map(|&v| (v as i16 + rng.gen_range(-3..=3)).clamp(0, 255) as u8)
        .collect();
    Image::new(width, height, noisy).expect("same size")
}

/// A small corpus of tools-like images with consecutive seeds.
pub fn tools_corpus(count: usize, width: usize, height: usize) -> Vec<Image> {
    (0..count as u64)
        .map(|s| tools_image(1000 + s, width, height))
        .collect()
}

/// Two disks of opposite contrast on a gray background.
pub fn two_disks(size: usize) -> Image {
    let mut img = Image::filled(size, size, 128).expect("non-empty size");
    let s = size as f64;
    fill_disk(&mut img, 0.3 * s, 0.3 * s, 0.15 * s, 230);
    fill_disk(&mut img, 0.7 * s, 0.65 * s, 0.17 * s, 30);
    img
}

/// Scene with two round targets on one branch of the tree of shapes and
/// rectangular distractors of intermediate roundness.
#[derive(Debug, Clone)]
pub struct NestedTargets {
    pub image: Image,
    /// A pixel inside the dark disk but outside the nested shapes.
    pub dark_pixel: (usize, usize),
    /// A pixel of the light ellipse.
    pub light_pixel: (usize, usize),
    /// One pixel inside each distractor.
    pub distractor_pixels: Vec<(usize, usize)>,
}

/// 128x128 scene: a dark disk containing a plus sign, itself containing an
/// elongated light ellipse. The ellipse is less round than every distractor,
/// so no roundness threshold isolates both targets. Two distractors hold a
/// slightly rounder inner rectangle, creating shallow minima.
pub fn nested_targets() -> NestedTargets {
    let mut img = Image::filled(128, 128, 128).expect("non-empty size");
    fill_disk(&mut img, 40.0, 40.0, 27.0, 40);
    fill_plus(&mut img, 40, 40, 50, 8, 90);
    fill_ellipse(&mut img, 40.0, 40.0, 6.5, 3.2, 220);

    // (x, y, w, h, value) with aspect ratios between 1.3 and 1.6
    let rects = [
        (82, 10, 30, 20, 70),
        (84, 50, 26, 18, 180),
        (80, 88, 32, 21, 60),
        (20, 90, 24, 17, 200),
        (52, 100, 21, 15, 100),
    ];
    let mut distractor_pixels = Vec::new();
    for &(x, y, w, h, v) in &rects {
        fill_rect(&mut img, x, y, w, h, v);
        distractor_pixels.push((x + 1, y + 1));
    }
    // inner rectangles, aspect 1.2 and 1.25
    fill_rect(&mut img, 91, 15, 12, 10, 30);
    fill_rect(&mut img, 89, 95, 15, 12, 240);

    NestedTargets {
        image: img,
        dark_pixel: (25, 25),
        light_pixel: (40, 40),
        distractor_pixels,
    }
}
