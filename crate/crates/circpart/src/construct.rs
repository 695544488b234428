//! Full partitions of regular k-gons and the search for the best ratio.
//!
//! Everything is built in a unit-inradius frame with the incenter at the
//! origin.  A partition is one central cover pair, one corner pair per
//! vertex, and one gap covering per half-edge (2k of them).  The canonical
//! half-edge covering is computed once and mapped onto the other 2k - 1
//! congruent gaps, so congruent disks have bit-identical radii.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::bounds::{gamma_one, gamma_theta, interior_angle};
use crate::edgecover::{
    cover_edge, rescaled_map, rescaled_map_derivative, EdgeCoverInput, EdgeCovering,
    DEFAULT_MAX_STEPS,
};
use crate::error::{Error, Result};
use crate::geom::{disk_contains, CoverPair, Disk, Point2, Tolerance};

/// Requested ratios this far below the corner-capture bound are accepted and
/// snapped up to it; the bound itself rarely survives rounding exactly.
const CORNER_CAPTURE_BAND: f64 = 1e-4;

/// Bracket endpoints move inward by this much so the search never evaluates
/// exactly at the degenerate corner-tangency ratio.
const BRACKET_INFLATION: f64 = 1e-12;

/// Absolute tolerance of the ratio bisection.
const BISECTION_TOL: f64 = 1e-7;

/// Rigid placement of half-edge-local coordinates into the world frame.
///
/// Local coordinates put the near vertex at the origin with x running along
/// the edge and y pointing into the polygon; maps for the two halves of an
/// edge are mirror images, so one covering instantiates both.
#[derive(Debug, Clone, Copy)]
pub struct EdgeMap {
    origin: Point2,
    tangent: (f64, f64),
    normal: (f64, f64),
}

impl EdgeMap {
    fn new(start: Point2, end: Point2) -> Self {
        let length = start.distance(end);
        let tangent = ((end.x - start.x) / length, (end.y - start.y) / length);
        let mut normal = (-tangent.1, tangent.0);
        // Inward means toward the incenter at the origin.
        if -(start.x * normal.0 + start.y * normal.1) < 0.0 {
            normal = (-normal.0, -normal.1);
        }
        EdgeMap { origin: start, tangent, normal }
    }

    pub fn to_world(&self, p: Point2) -> Point2 {
        Point2::new(
            self.origin.x + p.x * self.tangent.0 + p.y * self.normal.0,
            self.origin.y + p.x * self.tangent.1 + p.y * self.normal.1,
        )
    }

    pub fn map_disk(&self, d: &Disk) -> Disk {
        Disk::new(self.to_world(d.center), d.radius)
    }

    pub fn map_pair(&self, p: &CoverPair) -> CoverPair {
        CoverPair::new(self.map_disk(&p.indisk), self.map_disk(&p.outcircle), p.gamma)
    }
}

/// A regular k-gon with unit inradius, incenter at the origin, and one edge
/// horizontal at the bottom.  `theta` is the corner half-angle `pi/2 - pi/k`.
#[derive(Debug, Clone)]
pub struct KgonFrame {
    pub k: u32,
    pub theta: f64,
    pub inradius: f64,
    pub vertices: Vec<Point2>,
    pub edge_frame: EdgeMap,
}

impl KgonFrame {
    pub fn new(k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygon needs at least 3 vertices, got {k}"
            )));
        }
        let theta = FRAC_PI_2 - PI / k as f64;
        let circumradius = 1.0 / theta.sin();
        let vertices: Vec<Point2> = (0..k)
            .map(|i| {
                let angle = -FRAC_PI_2 - PI / k as f64 + TAU * i as f64 / k as f64;
                Point2::new(circumradius * angle.cos(), circumradius * angle.sin())
            })
            .collect();
        for i in 0..k as usize {
            let map = EdgeMap::new(vertices[i], vertices[(i + 1) % k as usize]);
            let apothem = -(vertices[i].x * map.normal.0 + vertices[i].y * map.normal.1);
            assert!((apothem.abs() - 1.0).abs() < 1e-9, "apothem must be 1");
        }
        let edge_frame = EdgeMap::new(vertices[0], vertices[1]);
        Ok(KgonFrame { k, theta, inradius: 1.0, vertices, edge_frame })
    }

    /// Cotangent of the corner half-angle; also half the edge length and the
    /// x-coordinate of the edge midpoint in edge-local coordinates.
    pub fn half_edge(&self) -> f64 {
        self.theta.cos() / self.theta.sin()
    }

    /// Placement map for one half of an edge: `reversed = false` starts at
    /// the edge's first vertex, `reversed = true` at its second (mirrored).
    pub fn half_edge_map(&self, edge: usize, reversed: bool) -> EdgeMap {
        let k = self.k as usize;
        let a = self.vertices[edge % k];
        let b = self.vertices[(edge + 1) % k];
        if reversed {
            EdgeMap::new(b, a)
        } else {
            EdgeMap::new(a, b)
        }
    }
}

/// A complete partition: central pair, k corner pairs, 2k gap coverings, and
/// the derived counts.  `piece_count` counts the disks actually materialized;
/// for a terminated partition of uniform gap depth d it equals
/// `1 + k (2^(d+1) - 1)`.
#[derive(Debug, Clone)]
pub struct Partition {
    pub k: u32,
    pub gamma: f64,
    pub central: CoverPair,
    pub corners: Vec<CoverPair>,
    pub gap_covers: Vec<EdgeCovering>,
    pub piece_count: u64,
    pub achieved_ratio: f64,
    pub terminated: bool,
    pub depth: u32,
}

/// Central cover pair (inscribed disk inflated concentrically) and the
/// edge-local coordinate `b0` where its outcircle cuts the edge nearer the
/// corner: `cot(theta) - sqrt(gamma^2 - 1)`.
pub fn central_pair(frame: &KgonFrame, gamma: f64) -> Result<(CoverPair, f64)> {
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "central pair requires gamma >= 1, got {gamma}"
        )));
    }
    let b0 = frame.half_edge() - (gamma * gamma - 1.0).sqrt();
    if b0 <= 0.0 {
        return Err(Error::Infeasible("central outcircle swallows corner".into()));
    }
    let incenter = Point2::new(0.0, 0.0);
    let pair = CoverPair::new(Disk::new(incenter, 1.0), Disk::new(incenter, gamma), gamma);
    Ok((pair, b0))
}

fn corner_radius(theta: f64) -> f64 {
    (1.0 - theta.sin()) / (1.0 + theta.sin())
}

/// Corner pair in half-edge-local coordinates: indisk tangent to both corner
/// edges and to the central indisk, outcircle centered on the bisector and
/// passing through the vertex.
fn local_corner_pair(theta: f64, gamma_eff: f64) -> CoverPair {
    let r1 = corner_radius(theta);
    let indisk = Disk::new(Point2::new(r1 * theta.cos() / theta.sin(), r1), r1);
    let outcircle = Disk::new(
        Point2::new(gamma_eff * r1 * theta.cos(), gamma_eff * r1 * theta.sin()),
        gamma_eff * r1,
    );
    CoverPair::new(indisk, outcircle, gamma_eff)
}

fn local_central_pair(frame: &KgonFrame, gamma: f64) -> CoverPair {
    let center = Point2::new(frame.half_edge(), 1.0);
    CoverPair::new(Disk::new(center, 1.0), Disk::new(center, gamma), gamma)
}

/// Corner cover pair at vertex 0 (world coordinates) plus the edge-local
/// tangency coordinate `a1 = r1 cot(theta)` and far chord end
/// `b1 = 2 gamma r1 cos(theta)` of its outcircle.
///
/// Ratios below the vertex bound minus [`CORNER_CAPTURE_BAND`] are rejected;
/// within the band the outcircle is inflated to the bound so it still reaches
/// the vertex.
pub fn corner_pair(frame: &KgonFrame, gamma: f64) -> Result<(CoverPair, f64, f64)> {
    let vertex_bound = gamma_theta(2.0 * frame.theta)?.value;
    if gamma < vertex_bound - CORNER_CAPTURE_BAND {
        return Err(Error::Infeasible("corner not capturable".into()));
    }
    let gamma_eff = gamma.max(vertex_bound);
    let local = local_corner_pair(frame.theta, gamma_eff);
    let r1 = local.indisk.radius;
    let a1 = r1 * frame.theta.cos() / frame.theta.sin();
    let b1 = 2.0 * gamma_eff * r1 * frame.theta.cos();
    let world = frame.half_edge_map(0, false).map_pair(&local);
    Ok((world, a1, b1))
}

/// Scaled width of the first uncovered gap, by the closed form
/// `(1+sin)/(1-sin) (cot - sqrt(gamma^2-1)) - cot`; identical to
/// `(b0 - a1)/r1`.
pub fn scaled_initial_gap(frame: &KgonFrame, gamma: f64) -> Result<f64> {
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "scaled gap requires gamma >= 1, got {gamma}"
        )));
    }
    let sin = frame.theta.sin();
    let cot = frame.theta.cos() / sin;
    Ok((1.0 + sin) / (1.0 - sin) * (cot - (gamma * gamma - 1.0).sqrt()) - cot)
}

fn map_covering(covering: &EdgeCovering, map: &EdgeMap) -> EdgeCovering {
    EdgeCovering {
        pairs: covering.pairs.iter().map(|p| map.map_pair(p)).collect(),
        depth: covering.depth,
        terminated: covering.terminated,
        recursion: covering.recursion.clone(),
        root: covering.root,
    }
}

/// Build the full partition of the regular k-gon at the given ratio.
///
/// The gap covering is computed once for the canonical half-edge and mapped
/// to all 2k congruent gaps (edge-major, near-vertex half first).  If the
/// gap recursion does not terminate the partition carries the partial
/// covering with `terminated = false`.
pub fn build_partition(k: u32, gamma: f64) -> Result<Partition> {
    let frame = KgonFrame::new(k)?;
    if !gamma.is_finite() || gamma <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "partition requires gamma > 1, got {gamma}"
        )));
    }
    let (central, _b0) = central_pair(&frame, gamma)?;
    let (_, a1, _b1) = corner_pair(&frame, gamma)?;
    let vertex_bound = gamma_theta(2.0 * frame.theta)?.value;
    let gamma_eff = gamma.max(vertex_bound);

    let local_corner = local_corner_pair(frame.theta, gamma_eff);
    let local_central = local_central_pair(&frame, gamma);
    let input = EdgeCoverInput::new(
        (Point2::new(a1, 0.0), Point2::new(frame.half_edge(), 0.0)),
        local_corner,
        local_central,
        gamma,
        DEFAULT_MAX_STEPS,
    )?;
    let canonical = cover_edge(&input)?;

    let corners: Vec<CoverPair> = (0..frame.k)
        .map(|i| frame.half_edge_map(i as usize, false).map_pair(&local_corner))
        .collect();
    let mut gap_covers = Vec::with_capacity(2 * frame.k as usize);
    for edge in 0..frame.k as usize {
        for reversed in [false, true] {
            gap_covers.push(map_covering(&canonical, &frame.half_edge_map(edge, reversed)));
        }
    }

    let gap_disks: u64 = gap_covers.iter().map(|c| (c.pairs.len() - 2) as u64).sum();
    Ok(Partition {
        k,
        gamma,
        central,
        corners,
        piece_count: 1 + k as u64 + gap_disks,
        achieved_ratio: gamma.max(gamma_eff),
        terminated: canonical.terminated,
        depth: canonical.depth,
        gap_covers,
    })
}

/// The three-part covering condition at the heart of the ratio search:
/// the scaled gap must shrink (`F(a0') < a0'`), sit on the rising branch
/// (`F'(a0') > 0`), and the first gap disk must cover the apex where the
/// central and corner outcircles cross.
///
/// Evaluates the raw closed forms, so it is defined even where the full
/// construction would reject the ratio.
pub fn kopt_predicate(k: u32, gamma: f64) -> Result<bool> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "predicate needs k >= 3, got {k}"
        )));
    }
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "predicate needs gamma >= 1, got {gamma}"
        )));
    }
    let theta = FRAC_PI_2 - PI / k as f64;
    let cot = theta.cos() / theta.sin();
    let b0 = cot - (gamma * gamma - 1.0).sqrt();
    let r1 = corner_radius(theta);
    let a1 = r1 * cot;
    let b1 = 2.0 * gamma * r1 * theta.cos();
    let a0_scaled = (b0 - a1) / r1;

    let shrinks = rescaled_map(a0_scaled, gamma)? < a0_scaled;
    let rising = rescaled_map_derivative(a0_scaled, gamma)? > 0.0;

    let a2 = 0.5 * (b0 + b1);
    let r2 = (a1 - a2) * (a1 - a2) / (4.0 * r1);
    if !(r2.is_finite() && r2 > 0.0) {
        return Err(Error::Degenerate(
            "degenerate: first gap disk has zero radius".into(),
        ));
    }
    let central_out = Disk::new(Point2::new(cot, 1.0), gamma);
    let corner_out = Disk::new(
        Point2::new(gamma * r1 * theta.cos(), gamma * r1 * theta.sin()),
        gamma * r1,
    );
    let tol = Tolerance::default();
    let d = central_out.center.distance(corner_out.center);
    let band = tol.band(central_out.radius);
    let apex_covered = if d <= (central_out.radius - corner_out.radius).abs() + band {
        // One outcircle swallows the other; there is no apex to cover.
        true
    } else if d >= central_out.radius + corner_out.radius - band {
        false
    } else {
        let points = crate::geom::circle_circle_intersection(&central_out, &corner_out, tol)?;
        let apex = points
            .iter()
            .min_by(|p, q| p.y.abs().partial_cmp(&q.y.abs()).unwrap())
            .copied()
            .ok_or_else(|| Error::Degenerate("degenerate: outcircles do not meet".into()))?;
        disk_contains(&Disk::new(Point2::new(a2, r2), r2), apex, tol)
    };

    Ok(shrinks && rising && apex_covered)
}

/// Smallest ratio in the k-gon's bracket `[vertex bound, one-piece bound]`
/// whose covering condition holds, located by a 100-point scan and bisection
/// of the first false-to-true transition to 1e-7.
pub fn optimal_gamma(k: u32) -> Result<f64> {
    if k < 5 {
        return Err(Error::InvalidArgument(format!(
            "optimal ratio search requires k >= 5, got {k}"
        )));
    }
    let lo = gamma_theta(interior_angle(k))?.value + BRACKET_INFLATION;
    let hi = gamma_one(k)?.value - BRACKET_INFLATION;
    if kopt_predicate(k, lo)? {
        return Ok(lo);
    }
    const GRID: usize = 100;
    let gamma_at = |i: usize| lo + (hi - lo) * i as f64 / (GRID - 1) as f64;
    let mut first_true = None;
    for i in 1..GRID {
        if kopt_predicate(k, gamma_at(i))? {
            first_true = Some(i);
            break;
        }
    }
    let Some(i) = first_true else {
        return Err(Error::Infeasible("no covering in bracket".into()));
    };
    let (mut bad, mut good) = (gamma_at(i - 1), gamma_at(i));
    while good - bad > BISECTION_TOL {
        let mid = 0.5 * (bad + good);
        if kopt_predicate(k, mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgecover::{steps_to_cover, StepsOutcome};
    use crate::fixedpoint;

    #[test]
    fn frame_has_unit_apothem_and_one_piece_circumradius() {
        for k in 3..=12 {
            let frame = KgonFrame::new(k).unwrap();
            assert_eq!(frame.vertices.len(), k as usize);
            assert!((frame.theta - (FRAC_PI_2 - PI / k as f64)).abs() < 1e-15);
            let circumradius = gamma_one(k).unwrap().value;
            for v in &frame.vertices {
                assert!((v.distance(Point2::new(0.0, 0.0)) - circumradius).abs() < 1e-12);
            }
        }
        assert!(KgonFrame::new(2).is_err());
    }

    #[test]
    fn central_pair_cut_positions() {
        let square = KgonFrame::new(4).unwrap();
        let (pair, b0) = central_pair(&square, 1.2071067811865475).unwrap();
        assert!((b0 - 0.32390327527302165).abs() < 1e-12);
        assert_eq!(pair.indisk.radius, 1.0);

        let (_, tangent_cut) = central_pair(&square, 1.0).unwrap();
        assert!((tangent_cut - square.half_edge()).abs() < 1e-12);

        let hexagon = KgonFrame::new(6).unwrap();
        let (_, b0_hex) = central_pair(&hexagon, 1.10418).unwrap();
        assert!((b0_hex - 0.10914788517177393).abs() < 1e-12);

        let err = central_pair(&square, 1.5).unwrap_err();
        assert_eq!(err.to_string(), "central outcircle swallows corner");
    }

    #[test]
    fn corner_pair_geometry() {
        let square = KgonFrame::new(4).unwrap();
        let (pair, a1, _) = corner_pair(&square, 1.21).unwrap();
        assert!((pair.indisk.radius - 0.17157287525381).abs() < 1e-9);
        assert!((a1 - 0.17157287525381).abs() < 1e-9);

        let triangle = KgonFrame::new(3).unwrap();
        let (tri_pair, _, _) = corner_pair(&triangle, 1.5).unwrap();
        assert!((tri_pair.indisk.radius - 1.0 / 3.0).abs() < 1e-12);

        // Above the vertex bound, so no snap to the capture ratio.
        let pentagon = KgonFrame::new(5).unwrap();
        let gamma = 1.12;
        let (pent_pair, a1, b1) = corner_pair(&pentagon, gamma).unwrap();
        let r1 = corner_radius(pentagon.theta);
        assert!((b1 - 2.0 * r1 * gamma * pentagon.theta.cos()).abs() < 1e-12);
        assert!(b1 > a1);
        // Outcircle passes through the vertex it captures.
        let vertex = pentagon.vertices[0];
        assert!(
            (pent_pair.outcircle.center.distance(vertex) - pent_pair.outcircle.radius).abs()
                < 1e-12
        );

        let hexagon = KgonFrame::new(6).unwrap();
        let err = corner_pair(&hexagon, 1.05).unwrap_err();
        assert_eq!(err.to_string(), "corner not capturable");
    }

    #[test]
    fn corner_and_central_indisks_touch() {
        for k in [3, 4, 5, 6, 8] {
            let frame = KgonFrame::new(k).unwrap();
            let gamma = gamma_theta(interior_angle(k)).unwrap().value + 0.01;
            let (central, _) = central_pair(&frame, gamma).unwrap();
            let (corner, _, _) = corner_pair(&frame, gamma).unwrap();
            assert!(crate::geom::is_externally_tangent(
                &central.indisk,
                &corner.indisk,
                Tolerance::default()
            ));
        }
    }

    #[test]
    fn scaled_gap_matches_direct_computation() {
        for k in [4, 5, 6, 7, 8] {
            let frame = KgonFrame::new(k).unwrap();
            for offset in [0.0005, 0.01, 0.03] {
                let gamma = gamma_theta(interior_angle(k)).unwrap().value + offset;
                let formula = scaled_initial_gap(&frame, gamma).unwrap();
                let (_, b0) = central_pair(&frame, gamma).unwrap();
                let (pair, a1, _) = corner_pair(&frame, gamma).unwrap();
                let direct = (b0 - a1) / pair.indisk.radius;
                assert!((formula - direct).abs() < 1e-12, "k={k} gamma={gamma}");
            }
        }
    }

    #[test]
    fn hexagon_gap_exceeds_lower_fixed_point_at_vertex_bound() {
        let frame = KgonFrame::new(6).unwrap();
        let gamma = gamma_theta(interior_angle(6)).unwrap().value;
        let gap = scaled_initial_gap(&frame, gamma).unwrap();
        let roots = fixedpoint::fixed_points(gamma).unwrap();
        let lower_positive = roots.roots[1];
        assert!(gap > lower_positive);
    }

    #[test]
    fn pentagon_idealized_gap_needs_nine_steps() {
        let frame = KgonFrame::new(5).unwrap();
        let gamma = gamma_theta(interior_angle(5)).unwrap().value;
        let gap = scaled_initial_gap(&frame, gamma).unwrap();
        assert!((gap - 1.419_299_096_850_717).abs() < 1e-12);
        assert_eq!(steps_to_cover(gap, gamma, 64), StepsOutcome::Covered(9));
    }

    #[test]
    fn triangle_partition_has_four_pieces() {
        let partition = build_partition(3, 1.5).unwrap();
        assert!(partition.terminated);
        assert_eq!(partition.piece_count, 4);
        assert_eq!(partition.depth, 0);
        assert_eq!(partition.corners.len(), 3);
        assert_eq!(partition.gap_covers.len(), 6);
        for cover in &partition.gap_covers {
            assert_eq!(cover.pairs.len(), 2);
        }
    }

    #[test]
    fn square_partition_has_thirteen_pieces() {
        let gamma = gamma_theta(interior_angle(4)).unwrap().value;
        let partition = build_partition(4, gamma).unwrap();
        assert!(partition.terminated);
        assert_eq!(partition.piece_count, 13);
        assert_eq!(partition.depth, 1);
        assert_eq!(
            partition.piece_count,
            1 + 4 * (2u64.pow(partition.depth + 1) - 1)
        );
    }

    #[test]
    fn pentagon_partition_has_20476_pieces() {
        let gamma = gamma_theta(interior_angle(5)).unwrap().value;
        let partition = build_partition(5, gamma).unwrap();
        assert!(partition.terminated);
        assert_eq!(partition.depth, 11);
        assert_eq!(partition.piece_count, 20476);
        assert_eq!(
            partition.piece_count,
            1 + 5 * (2u64.pow(partition.depth + 1) - 1)
        );
        // Explicit enumeration agrees with the closed form.
        let enumerated: u64 = 1
            + partition.corners.len() as u64
            + partition
                .gap_covers
                .iter()
                .map(|c| (c.pairs.len() - 2) as u64)
                .sum::<u64>();
        assert_eq!(enumerated, partition.piece_count);
    }

    #[test]
    fn hexagon_at_vertex_bound_does_not_terminate() {
        let gamma = gamma_theta(interior_angle(6)).unwrap().value;
        let partition = build_partition(6, gamma).unwrap();
        assert!(!partition.terminated);
        assert_eq!(partition.depth, 1);
        // Partial covering: one seed disk per gap.
        assert_eq!(partition.piece_count, 1 + 6 + 12);
    }

    #[test]
    fn partition_ratio_bookkeeping() {
        let gamma = 1.115;
        let partition = build_partition(6, gamma).unwrap();
        assert!(partition.terminated);
        assert_eq!(partition.depth, 1);
        assert_eq!(partition.piece_count, 19);
        assert!((partition.achieved_ratio - gamma).abs() < 1e-12);
        for pair in partition.corners.iter().chain([&partition.central]) {
            assert!((pair.outcircle.radius / pair.indisk.radius - gamma).abs() < 1e-9);
        }
    }

    #[test]
    fn partition_rejects_bad_arguments() {
        assert!(build_partition(2, 1.5).is_err());
        assert!(build_partition(4, 1.0).is_err());
        assert!(build_partition(6, 1.05).is_err());
    }

    #[test]
    fn covering_condition_examples() {
        assert!(kopt_predicate(6, 1.10418).unwrap());
        assert!(!kopt_predicate(6, 1.10418 - 1e-3).unwrap());
        assert!(kopt_predicate(8, gamma_one(8).unwrap().value).unwrap());
        assert!(kopt_predicate(5, 1.118_033_988_749_895).unwrap());
    }

    #[test]
    fn optimal_ratios_for_small_k() {
        assert!((optimal_gamma(5).unwrap() - 1.118_033_988_749_895).abs() < 1e-4);
        assert!((optimal_gamma(6).unwrap() - 1.1041781).abs() < 1e-4);
        assert!((optimal_gamma(7).unwrap() - 1.0838231).abs() < 1e-4);
        assert!((optimal_gamma(8).unwrap() - 1.0674059).abs() < 1e-4);
        assert!(optimal_gamma(4).is_err());
    }

    #[test]
    fn pentagon_search_returns_bracket_floor() {
        let lo = gamma_theta(interior_angle(5)).unwrap().value + BRACKET_INFLATION;
        assert_eq!(optimal_gamma(5).unwrap(), lo);
    }
}
