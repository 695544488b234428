//! Independent validation of partitions: covering checks by low-discrepancy
//! sampling, apex coverage, and piece construction by uniform grid growth.
//!
//! Nothing here reuses the construction's own arithmetic beyond the disk
//! data itself, so a bug in the recurrences shows up as uncovered samples or
//! stalled growth instead of being reproduced.

use rayon::prelude::*;

use crate::construct::{KgonFrame, Partition};
use crate::error::{Error, Result};
use crate::geom::{circle_circle_intersection, disk_contains, CoverPair, Point2, Tolerance};

/// Two indisks may overlap by at most this much before the pair is reported.
const DISJOINTNESS_BAND: f64 = 1e-8;

/// Sampling verdict for one partition.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub samples_total: usize,
    pub samples_uncovered: usize,
    /// Uncovered sample farthest from every outcircle, if any.
    pub worst_point: Option<Point2>,
    /// Index pairs (document order) of indisks that overlap.
    pub disjointness_violations: Vec<(usize, usize)>,
}

/// Labels for every grid cell: piece id, or -1 outside the polygon.
#[derive(Debug, Clone)]
pub struct PieceGrid {
    pub resolution: f64,
    pub width: usize,
    pub height: usize,
    pub labels: Vec<i32>,
    pub bounds: (Point2, Point2),
}

impl PieceGrid {
    pub fn label(&self, ix: usize, iy: usize) -> i32 {
        self.labels[iy * self.width + ix]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.bounds.0.x + (ix as f64 + 0.5) * self.resolution,
            self.bounds.0.y + (iy as f64 + 0.5) * self.resolution,
        )
    }
}

/// Intersection point of the two outcircles nearer the segment's line.
///
/// This is the deepest point of the curved triangle between the pairs; the
/// next gap disk must cover it for the covering to make progress.
pub fn apex_point(
    left: &CoverPair,
    right: &CoverPair,
    segment: (Point2, Point2),
) -> Result<Point2> {
    let points = match circle_circle_intersection(&left.outcircle, &right.outcircle, Tolerance::default()) {
        Ok(points) if points.is_empty() => {
            return Err(Error::Infeasible("no apex: outcircles disjoint".into()))
        }
        Ok(points) => points,
        Err(e) => return Err(e),
    };
    let dx = segment.1.x - segment.0.x;
    let dy = segment.1.y - segment.0.y;
    let length = (dx * dx + dy * dy).sqrt();
    let line_distance = |p: &Point2| {
        ((p.x - segment.0.x) * dy - (p.y - segment.0.y) * dx).abs() / length
    };
    Ok(points
        .iter()
        .min_by(|p, q| line_distance(p).partial_cmp(&line_distance(q)).unwrap())
        .copied()
        .unwrap())
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_from_bits(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

fn radical_inverse(base: u64, mut index: u64) -> f64 {
    let mut fraction = 1.0;
    let mut value = 0.0;
    while index > 0 {
        fraction /= base as f64;
        value += fraction * (index % base) as f64;
        index /= base;
    }
    value
}

/// Closed point-in-convex-polygon test; vertices are counterclockwise.
fn inside_polygon(frame: &KgonFrame, p: Point2) -> bool {
    let k = frame.vertices.len();
    let slack = 1e-12 / frame.theta.sin();
    for i in 0..k {
        let a = frame.vertices[i];
        let b = frame.vertices[(i + 1) % k];
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if cross < -slack {
            return false;
        }
    }
    true
}

fn polygon_bounds(frame: &KgonFrame) -> (Point2, Point2) {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in &frame.vertices {
        min_x = min_x.min(v.x);
        min_y = min_y.min(v.y);
        max_x = max_x.max(v.x);
        max_y = max_y.max(v.y);
    }
    (Point2::new(min_x, min_y), Point2::new(max_x, max_y))
}

/// All cover pairs in document order: central, corners, then gap disks
/// edge-major in recursion preorder.
pub fn document_pairs(partition: &Partition) -> Vec<CoverPair> {
    let mut pairs = Vec::with_capacity(
        1 + partition.corners.len()
            + partition
                .gap_covers
                .iter()
                .map(|c| c.pairs.len() - 2)
                .sum::<usize>(),
    );
    pairs.push(partition.central);
    pairs.extend(partition.corners.iter().copied());
    for cover in &partition.gap_covers {
        pairs.extend(cover.pairs[2..].iter().copied());
    }
    pairs
}

/// Quasi-random points inside the polygon (Halton sequence in bases 2 and 3
/// with a seeded rotation), rejected against the polygon.
fn sample_points(frame: &KgonFrame, n_samples: usize, seed: u64) -> Vec<Point2> {
    let mut state = seed;
    let shift_x = unit_from_bits(splitmix64(&mut state));
    let shift_y = unit_from_bits(splitmix64(&mut state));
    let (min, max) = polygon_bounds(frame);
    let mut points = Vec::with_capacity(n_samples);
    let mut index = 1u64;
    while points.len() < n_samples {
        let ux = (radical_inverse(2, index) + shift_x).fract();
        let uy = (radical_inverse(3, index) + shift_y).fract();
        let p = Point2::new(min.x + ux * (max.x - min.x), min.y + uy * (max.y - min.y));
        if inside_polygon(frame, p) {
            points.push(p);
        }
        index += 1;
    }
    points
}

/// Sample the polygon and test that every point lies in at least one
/// outcircle and that no two indisks overlap.  Failures are reported, not
/// raised.
///
/// Requires a terminated partition; a partial covering is knowingly full of
/// holes.
pub fn check_covering(partition: &Partition, n_samples: usize, seed: u64) -> CoverageReport {
    assert!(
        partition.terminated,
        "covering check requires a terminated partition"
    );
    let frame = KgonFrame::new(partition.k).expect("partition carries a valid k");
    let pairs = document_pairs(partition);
    let tol = Tolerance::default();
    let points = sample_points(&frame, n_samples, seed);

    // (depth into the nearest gap, sample index); both reductions commute.
    let uncovered: Vec<(f64, usize)> = points
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            if pairs.iter().any(|pair| disk_contains(&pair.outcircle, *p, tol)) {
                return None;
            }
            let depth = pairs
                .iter()
                .map(|pair| p.distance(pair.outcircle.center) - pair.outcircle.radius)
                .fold(f64::INFINITY, f64::min);
            Some((depth, i))
        })
        .collect();
    let worst_point = uncovered
        .iter()
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.cmp(&a.1)))
        .map(|&(_, i)| points[i]);

    let disjointness_violations: Vec<(usize, usize)> = (0..pairs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let pairs = &pairs;
            (i + 1..pairs.len()).filter_map(move |j| {
                let a = pairs[i].indisk;
                let b = pairs[j].indisk;
                let overlap = a.radius + b.radius - a.center.distance(b.center);
                (overlap > DISJOINTNESS_BAND).then_some((i, j))
            })
        })
        .collect();

    CoverageReport {
        samples_total: points.len(),
        samples_uncovered: uncovered.len(),
        worst_point,
        disjointness_violations,
    }
}

/// Grow pieces synchronously on a grid: cells covered by exactly one
/// outcircle seed their piece, then each round every unassigned in-polygon
/// cell adjacent (4-connectivity) to a piece joins it if the cell lies in
/// that piece's outcircle; the lowest piece id wins ties.
pub fn grow_pieces(partition: &Partition, resolution: f64) -> Result<PieceGrid> {
    assert!(
        partition.terminated,
        "piece growth requires a terminated partition"
    );
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let frame = KgonFrame::new(partition.k).expect("partition carries a valid k");
    let pairs = document_pairs(partition);
    let tol = Tolerance::default();
    let (min, max) = polygon_bounds(&frame);
    let width = ((max.x - min.x) / resolution).ceil() as usize + 1;
    let height = ((max.y - min.y) / resolution).ceil() as usize + 1;
    let bounds = (min, max);

    const OUTSIDE: i32 = -1;
    const UNASSIGNED: i32 = -2;
    let grid = PieceGrid {
        resolution,
        width,
        height,
        labels: vec![UNASSIGNED; width * height],
        bounds,
    };

    let mut labels: Vec<i32> = (0..width * height)
        .into_par_iter()
        .map(|cell| {
            let p = grid.cell_center(cell % width, cell / width);
            if inside_polygon(&frame, p) {
                UNASSIGNED
            } else {
                OUTSIDE
            }
        })
        .collect();

    // Rasterize each outcircle over its bounding box; cells covered exactly
    // once seed their piece.  Work is proportional to covered area, not to
    // cells times pieces.
    let mut cover_count = vec![0u8; width * height];
    let mut owner = vec![UNASSIGNED; width * height];
    for (id, pair) in pairs.iter().enumerate() {
        let out = pair.outcircle;
        let ix_lo = (((out.center.x - out.radius - min.x) / resolution - 0.5).floor()).max(0.0) as usize;
        let iy_lo = (((out.center.y - out.radius - min.y) / resolution - 0.5).floor()).max(0.0) as usize;
        let ix_hi = ((((out.center.x + out.radius - min.x) / resolution).ceil()) as usize).min(width - 1);
        let iy_hi = ((((out.center.y + out.radius - min.y) / resolution).ceil()) as usize).min(height - 1);
        for iy in iy_lo..=iy_hi {
            for ix in ix_lo..=ix_hi {
                let cell = iy * width + ix;
                if disk_contains(&out, grid.cell_center(ix, iy), tol) {
                    cover_count[cell] = cover_count[cell].saturating_add(1);
                    owner[cell] = id as i32;
                }
            }
        }
    }
    labels
        .par_iter_mut()
        .enumerate()
        .for_each(|(cell, label)| {
            if *label == UNASSIGNED && cover_count[cell] == 1 {
                *label = owner[cell];
            }
        });

    let mut active: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter_map(|(cell, &label)| (label == UNASSIGNED).then_some(cell))
        .collect();

    while !active.is_empty() {
        let claims: Vec<(usize, i32)> = active
            .par_iter()
            .filter_map(|&cell| {
                let (ix, iy) = (cell % width, cell / width);
                let p = grid.cell_center(ix, iy);
                let mut best: Option<i32> = None;
                let mut consider = |neighbor: usize| {
                    let id = labels[neighbor];
                    if id >= 0
                        && best.is_none_or(|b| id < b)
                        && disk_contains(&pairs[id as usize].outcircle, p, tol)
                    {
                        best = Some(id);
                    }
                };
                if ix > 0 {
                    consider(cell - 1);
                }
                if ix + 1 < width {
                    consider(cell + 1);
                }
                if iy > 0 {
                    consider(cell - width);
                }
                if iy + 1 < height {
                    consider(cell + width);
                }
                best.map(|id| (cell, id))
            })
            .collect();
        if claims.is_empty() {
            return Err(Error::GrowthStalled("growth stalled".into()));
        }
        for &(cell, id) in &claims {
            labels[cell] = id;
        }
        active.retain(|&cell| labels[cell] == UNASSIGNED);
    }

    Ok(PieceGrid { labels, ..grid })
}

/// Number of 4-connected regions per label, ignoring cells labeled -1.
/// Returns (label, region count) sorted by label.
pub fn connected_regions(grid: &PieceGrid) -> Vec<(i32, usize)> {
    let mut seen = vec![false; grid.labels.len()];
    let mut counts: std::collections::BTreeMap<i32, usize> = std::collections::BTreeMap::new();
    for start in 0..grid.labels.len() {
        let label = grid.labels[start];
        if label < 0 || seen[start] {
            continue;
        }
        *counts.entry(label).or_insert(0) += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(cell) = stack.pop() {
            let (ix, iy) = (cell % grid.width, cell / grid.width);
            let mut visit = |neighbor: usize| {
                if !seen[neighbor] && grid.labels[neighbor] == label {
                    seen[neighbor] = true;
                    stack.push(neighbor);
                }
            };
            if ix > 0 {
                visit(cell - 1);
            }
            if ix + 1 < grid.width {
                visit(cell + 1);
            }
            if iy > 0 {
                visit(cell - grid.width);
            }
            if iy + 1 < grid.height {
                visit(cell + grid.width);
            }
        }
    }
    counts.into_iter().collect()
}
