//! Binary rasters and Moore-neighbour boundary tracing.

use std::collections::VecDeque;

use crate::boundary::SampledBoundary;
use crate::error::{Result, ShapeError};
use crate::geometry::Point;

/// Row-major binary image; `true` is foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRaster {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

// Clockwise on screen (y grows downward), starting west.
const MOORE: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

impl BinaryRaster {
    pub fn new(width: usize, height: usize, pixels: Vec<bool>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(ShapeError::InvalidArgument(format!(
                "raster of {width}x{height} needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    /// Decodes a PGM (P2 or P5) image; foreground is a gray value above 127.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Pnm)
            .map_err(|e| ShapeError::Parse {
                line: 0,
                message: format!("PGM decode failed: {e}"),
            })?
            .to_luma8();
        let (w, h) = img.dimensions();
        Ok(Self::from_fn(w as usize, h as usize, |x, y| {
            img.get_pixel(x as u32, y as u32).0[0] > 127
        }))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.pixels[y as usize * self.width + x as usize]
    }

    /// Number of 4-connected foreground components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.pixels.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.pixels.len() {
            if !self.pixels[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                let (x, y) = ((i % self.width) as i64, (i / self.width) as i64);
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let (nx, ny) = (x + dx, y + dy);
                    if self.get(nx, ny) {
                        let j = ny as usize * self.width + nx as usize;
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        count
    }
}

/// Traces the outer contour of the single foreground region with the
/// Moore-neighbour algorithm (Jacob's stopping criterion).
///
/// Emits one point per visited boundary pixel centre, in `(column, row)`
/// coordinates, oriented counter-clockwise.
pub fn trace_raster_boundary(image: &BinaryRaster) -> Result<SampledBoundary> {
    let components = image.component_count();
    if components == 0 {
        return Err(ShapeError::Trace("empty image: no foreground pixels".into()));
    }
    if components > 1 {
        return Err(ShapeError::Trace(format!(
            "{components} foreground components; exactly one is required"
        )));
    }
    let start_index = image.pixels.iter().position(|&p| p).expect("non-empty");
    let start = (
        (start_index % image.width) as i64,
        (start_index / image.width) as i64,
    );
    // The pixel left of the first foreground pixel in scan order is background.
    let start_back = (start.0 - 1, start.1);

    let mut contour = vec![start];
    let (mut cur, mut back) = (start, start_back);
    let limit = 4 * image.width * image.height + 8;
    for _ in 0..limit {
        let d = direction(cur, back);
        let mut moved = false;
        for k in 1..=8 {
            let (dx, dy) = MOORE[(d + k) % 8];
            let cand = (cur.0 + dx, cur.1 + dy);
            if image.get(cand.0, cand.1) {
                let (bx, by) = MOORE[(d + k - 1) % 8];
                back = (cur.0 + bx, cur.1 + by);
                cur = cand;
                moved = true;
                break;
            }
        }
        if !moved || (cur == start && back == start_back) {
            break;
        }
        contour.push(cur);
    }

    let pts = contour
        .into_iter()
        .map(|(x, y)| Point::new(x as f64, y as f64))
        .collect();
    SampledBoundary::from_points(pts)
}

fn direction(from: (i64, i64), to: (i64, i64)) -> usize {
    let delta = (to.0 - from.0, to.1 - from.1);
    MOORE
        .iter()
        .position(|&m| m == delta)
        .expect("backtrack pixel is a Moore neighbour")
}
