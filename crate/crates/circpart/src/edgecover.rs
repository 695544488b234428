//! Recursive covering of an edge segment by tangent disks.
//!
//! The input is a segment S with a disk tangent to it at each endpoint and
//! their two outcircles cutting chords out of S.  The uncovered gap between
//! the chords is filled by growing a disk tangent to S at the gap midpoint
//! until it touches the smaller neighbor, inflating it into an outcircle,
//! and recursing on the two residual subgaps.  Both subgaps of a placed disk
//! carry the same scaled width, so the whole recursion tree is driven by the
//! one-dimensional map [`rescaled_map`]; its fixed points (module
//! [`fixedpoint`](crate::fixedpoint)) decide whether the recursion ever
//! closes the gap.

use crate::error::{Error, Result};
use crate::fixedpoint;
use crate::geom::{
    gap_chord_half_width, gap_outcircle, is_externally_tangent, CoverPair, Disk, Point2,
    Tolerance,
};

/// Default recursion cap for edge coverings.
pub const DEFAULT_MAX_STEPS: u32 = 64;

/// Absolute slack on the scaled stopping test `a' <= 2 sqrt(gamma - 1)`,
/// absorbing rounding at exact-cover boundaries.
pub const TERMINATION_SLACK: f64 = 1e-12;

/// Ratios within this band of the critical ratio are treated as supercritical;
/// the classification boundary itself has measure zero and must be assigned
/// deterministically.
const CRITICAL_RATIO_BAND: f64 = 1e-9;

/// Most disks a single covering is allowed to materialize.  The tree doubles
/// per level, so this bounds the depth near termination thresholds where the
/// piece count genuinely explodes.
const PAIR_BUDGET: usize = 1 << 20;

/// State of the leftmost uncovered gap after one disk placement: the tangency
/// offset `a` of the reference disk measured from the far cut, its radius
/// `r`, and the scale-free width `a / r` that drives the recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapState {
    pub a: f64,
    pub r: f64,
    pub a_scaled: f64,
    pub step: u32,
}

impl GapState {
    pub fn new(a: f64, r: f64, step: u32) -> Self {
        assert!(a.is_finite() && a > 0.0, "gap tangency offset must be positive");
        assert!(r.is_finite() && r > 0.0, "gap disk radius must be positive");
        assert!(step >= 1, "gap steps are counted from 1");
        GapState { a, r, a_scaled: a / r, step }
    }
}

/// Half-width of the chord an outcircle cuts from the tangent line:
/// `2 r sqrt(gamma - 1)`.
pub fn chord_half_width(r: f64, gamma: f64) -> Result<f64> {
    assert!(r > 0.0, "radius must be positive");
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "chord half-width requires gamma >= 1, got {gamma}"
        )));
    }
    Ok(gap_chord_half_width(r, gamma))
}

/// One step of the unscaled gap recurrence: the next disk sits at the cut-gap
/// midpoint `a/2 - r sqrt(gamma - 1)` and grows until tangent to the current
/// disk, giving radius `(a - a')^2 / (4 r)`.
pub fn next_gap_state(state: &GapState, gamma: f64) -> Result<GapState> {
    let delta = chord_half_width(state.r, gamma)?;
    if state.a <= delta + TERMINATION_SLACK * state.r {
        return Err(Error::AlreadyTerminated);
    }
    let a_next = state.a / 2.0 - state.r * (gamma - 1.0).sqrt();
    let r_next = (state.a - a_next) * (state.a - a_next) / (4.0 * state.r);
    Ok(GapState::new(a_next, r_next, state.step + 1))
}

fn pole_guard(x: f64, s: f64) -> Result<()> {
    if (x + 2.0 * s).abs() <= 1e-12 * (1.0 + x.abs()) {
        return Err(Error::InvalidArgument(format!(
            "rescaled map has a pole at {}",
            -2.0 * s
        )));
    }
    Ok(())
}

/// The rescaled gap map `F(x) = 8 (x - 2s) / (x + 2s)^2` with
/// `s = sqrt(gamma - 1)`; the scaled width of both subgaps left by a placed
/// disk whose parent gap had scaled width `x`.
pub fn rescaled_map(x: f64, gamma: f64) -> Result<f64> {
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "rescaled map requires gamma >= 1, got {gamma}"
        )));
    }
    let s = (gamma - 1.0).sqrt();
    pole_guard(x, s)?;
    let denom = x + 2.0 * s;
    Ok(8.0 * (x - 2.0 * s) / (denom * denom))
}

/// Analytic derivative of [`rescaled_map`]: `8 (6s - x) / (x + 2s)^3`.
pub fn rescaled_map_derivative(x: f64, gamma: f64) -> Result<f64> {
    if gamma < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "rescaled map requires gamma >= 1, got {gamma}"
        )));
    }
    let s = (gamma - 1.0).sqrt();
    pole_guard(x, s)?;
    let denom = x + 2.0 * s;
    Ok(8.0 * (6.0 * s - x) / (denom * denom * denom))
}

/// True once the scaled gap width has dropped to the outcircle chord width
/// `2 sqrt(gamma - 1)`, i.e. the two neighboring chords already cover the gap.
pub fn is_gap_closed(a_scaled: f64, gamma: f64) -> bool {
    a_scaled <= 2.0 * (gamma - 1.0).sqrt() + TERMINATION_SLACK
}

/// Termination regions of the scaled iteration, named by where the initial
/// width sits relative to the positive fixed points of [`rescaled_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Above the upper fixed point: the iteration sinks toward it and never
    /// reaches the stopping width.
    AboveUpperRoot,
    /// Between the fixed points: the iteration climbs toward the upper one.
    BetweenRoots,
    /// Below the lower fixed point: strictly decreasing, terminates.
    BelowLowerRoot,
    /// Ratio above the critical value: no positive fixed points remain, every
    /// start terminates.
    Supercritical,
}

impl Region {
    /// Roman-numeral label used in reports: I, II, III, IV.
    pub fn label(self) -> &'static str {
        match self {
            Region::AboveUpperRoot => "I",
            Region::BetweenRoots => "II",
            Region::BelowLowerRoot => "III",
            Region::Supercritical => "IV",
        }
    }
}

/// Verdict of [`classify`]: the region, whether the iteration terminates, and
/// the positive fixed points when they exist (descending).
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationClass {
    pub region: Region,
    pub terminates: bool,
    pub fixed_points: Vec<f64>,
}

/// Classify an initial scaled gap width against the fixed points of the map.
///
/// Ratios within `1e-9` of the critical ratio resolve to
/// [`Region::Supercritical`].  Widths equal to either fixed point count as
/// [`Region::BetweenRoots`]: they are stationary or drawn to the upper root
/// either way, so they never terminate.
pub fn classify(a1_scaled: f64, gamma: f64) -> Result<TerminationClass> {
    if !(gamma.is_finite() && gamma > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "classification requires gamma > 1, got {gamma}"
        )));
    }
    assert!(a1_scaled > 0.0, "scaled gap width must be positive");

    let positive: Vec<f64> = fixedpoint::fixed_points(gamma)?
        .roots
        .into_iter()
        .filter(|&r| r > 0.0)
        .collect();

    if gamma >= fixedpoint::gamma_star() - CRITICAL_RATIO_BAND {
        return Ok(TerminationClass {
            region: Region::Supercritical,
            terminates: true,
            fixed_points: positive,
        });
    }

    let upper = positive[0];
    let lower = positive[1];
    let region = if a1_scaled > upper {
        Region::AboveUpperRoot
    } else if a1_scaled < lower {
        Region::BelowLowerRoot
    } else {
        Region::BetweenRoots
    };
    Ok(TerminationClass {
        region,
        terminates: region == Region::BelowLowerRoot,
        fixed_points: positive,
    })
}

/// Result of iterating the scaled map: the step count that closed the gap, or
/// the finding that it never closes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepsOutcome {
    Covered(u32),
    NonTerminating,
}

impl StepsOutcome {
    pub fn steps(self) -> Option<u32> {
        match self {
            StepsOutcome::Covered(n) => Some(n),
            StepsOutcome::NonTerminating => None,
        }
    }
}

/// Smallest n with the n-th iterate of the scaled width at or below the
/// stopping width; [`StepsOutcome::NonTerminating`] if the classification
/// rules it out or the cap is reached first.
pub fn steps_to_cover(a1_scaled: f64, gamma: f64, cap: u32) -> StepsOutcome {
    assert!(cap >= 1, "step cap must be at least 1");
    assert!(gamma > 1.0, "steps require gamma > 1");
    if is_gap_closed(a1_scaled, gamma) {
        return StepsOutcome::Covered(0);
    }
    let class = classify(a1_scaled, gamma).expect("gamma > 1 checked above");
    if !class.terminates {
        return StepsOutcome::NonTerminating;
    }
    let mut x = a1_scaled;
    for n in 1..=cap {
        x = rescaled_map(x, gamma).expect("open gap widths stay clear of the pole");
        if is_gap_closed(x, gamma) {
            return StepsOutcome::Covered(n);
        }
    }
    StepsOutcome::NonTerminating
}

/// Scaled width of the reference gap between two unit disks tangent to each
/// other and to the segment: `2 - 2 sqrt(gamma - 1)`.
pub fn canonical_scaled_gap(gamma: f64) -> f64 {
    2.0 - 2.0 * (gamma - 1.0).sqrt()
}

/// An edge segment with its two boundary cover pairs, ready for gap filling.
///
/// The boundary indisks must be tangent to the segment's line at the segment
/// endpoints, on a common side, and externally tangent to each other.
#[derive(Debug, Clone)]
pub struct EdgeCoverInput {
    pub segment: (Point2, Point2),
    pub left: CoverPair,
    pub right: CoverPair,
    pub gamma: f64,
    pub max_steps: u32,
}

impl EdgeCoverInput {
    pub fn new(
        segment: (Point2, Point2),
        left: CoverPair,
        right: CoverPair,
        gamma: f64,
        max_steps: u32,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "edge covering requires gamma > 1, got {gamma}"
            )));
        }
        let tol = Tolerance::default();
        let length = segment.0.distance(segment.1);
        if length <= tol.band(1.0) {
            return Err(Error::Degenerate("degenerate: zero-length segment".into()));
        }
        let frame = Frame::from_segment(segment, left.indisk.center)?;
        for (pair, endpoint, side) in [(&left, 0.0, "left"), (&right, length, "right")] {
            let (xi, eta) = frame.to_local(pair.indisk.center);
            let r = pair.indisk.radius;
            if (xi - endpoint).abs() > tol.band(length.max(r)) || (eta - r).abs() > tol.band(r.max(1.0)) {
                return Err(Error::InvalidArgument(format!(
                    "{side} disk must be tangent to the segment at its {side} endpoint"
                )));
            }
        }
        if !is_externally_tangent(&left.indisk, &right.indisk, tol) {
            return Err(Error::InvalidArgument(
                "boundary disks must be externally tangent to each other".into(),
            ));
        }
        Ok(EdgeCoverInput { segment, left, right, gamma, max_steps })
    }

    /// The reference configuration: two unit disks tangent to each other and
    /// to the x-axis at (0,0) and (2,0), with standard gap outcircles.
    pub fn two_unit_disks(gamma: f64, max_steps: u32) -> Result<Self> {
        let left_in = Disk::new(Point2::new(0.0, 1.0), 1.0);
        let right_in = Disk::new(Point2::new(2.0, 1.0), 1.0);
        let left = CoverPair::new(left_in, gap_outcircle(&left_in, gamma)?, gamma);
        let right = CoverPair::new(right_in, gap_outcircle(&right_in, gamma)?, gamma);
        EdgeCoverInput::new(
            (Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)),
            left,
            right,
            gamma,
            max_steps,
        )
    }
}

/// One node of the covering's recursion tree, indexing into
/// [`EdgeCovering::pairs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecursionNode {
    pub pair: usize,
    pub level: u32,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// A produced covering: all cover pairs (the two boundary pairs first, then
/// gap disks in preorder), the recursion depth in levels, and whether every
/// leaf gap closed within the step cap.
#[derive(Debug, Clone)]
pub struct EdgeCovering {
    pub pairs: Vec<CoverPair>,
    pub depth: u32,
    pub terminated: bool,
    pub recursion: Vec<RecursionNode>,
    pub root: Option<usize>,
}

/// Local frame along a segment: `xi` runs from the first endpoint toward the
/// second, `eta` toward the side the boundary disks lie on.
struct Frame {
    origin: Point2,
    tangent: (f64, f64),
    normal: (f64, f64),
}

impl Frame {
    fn from_segment(segment: (Point2, Point2), side_hint: Point2) -> Result<Frame> {
        let length = segment.0.distance(segment.1);
        if length == 0.0 {
            return Err(Error::Degenerate("degenerate: zero-length segment".into()));
        }
        let tangent = (
            (segment.1.x - segment.0.x) / length,
            (segment.1.y - segment.0.y) / length,
        );
        let mut normal = (-tangent.1, tangent.0);
        let hint = (side_hint.x - segment.0.x) * normal.0 + (side_hint.y - segment.0.y) * normal.1;
        if hint < 0.0 {
            normal = (-normal.0, -normal.1);
        }
        Ok(Frame { origin: segment.0, tangent, normal })
    }

    fn to_local(&self, p: Point2) -> (f64, f64) {
        let dx = p.x - self.origin.x;
        let dy = p.y - self.origin.y;
        (
            dx * self.tangent.0 + dy * self.tangent.1,
            dx * self.normal.0 + dy * self.normal.1,
        )
    }

    fn to_world(&self, xi: f64, eta: f64) -> Point2 {
        Point2::new(
            self.origin.x + xi * self.tangent.0 + eta * self.normal.0,
            self.origin.y + xi * self.tangent.1 + eta * self.normal.1,
        )
    }

    /// Chord `[lo, hi]` a disk cuts from the xi-axis, if any.
    fn chord(&self, d: &Disk) -> Option<(f64, f64)> {
        let (xi, eta) = self.to_local(d.center);
        let half_sq = d.radius * d.radius - eta * eta;
        if half_sq < 0.0 {
            return None;
        }
        let half = half_sq.sqrt();
        Some((xi - half, xi + half))
    }
}

/// A gap neighbor in local coordinates: tangency offset and radius.
#[derive(Clone, Copy)]
struct Neighbor {
    tangency: f64,
    radius: f64,
}

struct GapFill<'a> {
    gamma: f64,
    frame: &'a Frame,
    max_level: u32,
    pairs: Vec<CoverPair>,
    nodes: Vec<RecursionNode>,
    truncated: bool,
    deepest: u32,
}

impl GapFill<'_> {
    /// Radius of the disk tangent to the xi-axis at `mid` and grown until it
    /// touches the given axis-tangent neighbor.
    fn grown_radius(mid: f64, nb: Neighbor) -> f64 {
        let d = mid - nb.tangency;
        d * d / (4.0 * nb.radius)
    }

    fn fill(
        &mut self,
        cuts: (f64, f64),
        left: Neighbor,
        right: Neighbor,
        closed_scale: f64,
        level: u32,
    ) -> Result<Option<usize>> {
        if cuts.1 - cuts.0 <= TERMINATION_SLACK * closed_scale {
            return Ok(None);
        }
        if level > self.max_level {
            self.truncated = true;
            return Ok(None);
        }
        if self.pairs.len() >= PAIR_BUDGET {
            return Err(Error::Infeasible(
                "edge covering exceeds the disk budget; the piece count is exponential this close to the termination threshold".into(),
            ));
        }

        let mid = 0.5 * (cuts.0 + cuts.1);
        let from_left = Self::grown_radius(mid, left);
        let from_right = Self::grown_radius(mid, right);
        let radius = from_left.min(from_right);
        // The smaller neighbor always wins the growth race.
        let band = 1e-9 * from_left.max(from_right);
        if (from_left < from_right - band) || (from_right < from_left - band) {
            let (binding, other) = if from_left < from_right { (left, right) } else { (right, left) };
            assert!(
                binding.radius <= other.radius * (1.0 + 1e-9) + 1e-12,
                "growth must stop at the smaller neighbor"
            );
        }

        let indisk = Disk::new(self.frame.to_world(mid, radius), radius);
        let local_out = gap_outcircle(&Disk::new(Point2::new(mid, radius), radius), self.gamma)?;
        let outcircle = Disk::new(
            self.frame.to_world(mid, local_out.center.y),
            local_out.radius,
        );
        let pair_index = self.pairs.len();
        self.pairs.push(CoverPair::new(indisk, outcircle, self.gamma));
        let node_index = self.nodes.len();
        self.nodes.push(RecursionNode { pair: pair_index, level, left: None, right: None });
        self.deepest = self.deepest.max(level);

        let half_chord = gap_chord_half_width(radius, self.gamma);
        let placed = Neighbor { tangency: mid, radius };
        let left_child = self.fill((cuts.0, mid - half_chord), left, placed, radius, level + 1)?;
        let right_child = self.fill((mid + half_chord, cuts.1), placed, right, radius, level + 1)?;
        self.nodes[node_index].left = left_child;
        self.nodes[node_index].right = right_child;
        Ok(Some(node_index))
    }
}

/// Run the gap-filling recursion over the input's uncovered segment.
///
/// The returned covering always contains the two boundary pairs.  When the
/// scaled iteration is nonterminating (or the step cap cuts it off) only the
/// first gap disk is placed and `terminated` is false.
pub fn cover_edge(input: &EdgeCoverInput) -> Result<EdgeCovering> {
    let frame = Frame::from_segment(input.segment, input.left.indisk.center)?;
    let length = input.segment.0.distance(input.segment.1);

    let left_chord = frame
        .chord(&input.left.outcircle)
        .ok_or_else(|| Error::Degenerate("degenerate: left outcircle misses the segment".into()))?;
    let right_chord = frame
        .chord(&input.right.outcircle)
        .ok_or_else(|| Error::Degenerate("degenerate: right outcircle misses the segment".into()))?;
    let cuts = (left_chord.1, right_chord.0);

    let left_nb = Neighbor { tangency: 0.0, radius: input.left.indisk.radius };
    let right_nb = Neighbor { tangency: length, radius: input.right.indisk.radius };
    let reference_radius = left_nb.radius.min(right_nb.radius);

    let mut covering = EdgeCovering {
        pairs: vec![input.left, input.right],
        depth: 0,
        terminated: true,
        recursion: Vec::new(),
        root: None,
    };
    if cuts.1 - cuts.0 <= TERMINATION_SLACK * reference_radius {
        return Ok(covering);
    }

    // Probe the scalar orbit of the seed's subgap width to size the tree
    // before materializing it.
    let mid = 0.5 * (cuts.0 + cuts.1);
    let seed_radius = GapFill::grown_radius(mid, left_nb).min(GapFill::grown_radius(mid, right_nb));
    let seed_subgap_scaled = 0.5 * (cuts.1 - cuts.0) / seed_radius;
    let max_level = if is_gap_closed(seed_subgap_scaled, input.gamma) {
        input.max_steps.max(1)
    } else if input.max_steps <= 1 {
        input.max_steps
    } else {
        match steps_to_cover(seed_subgap_scaled, input.gamma, input.max_steps - 1) {
            StepsOutcome::Covered(n) => {
                let levels = n + 1;
                if levels > PAIR_BUDGET.trailing_zeros() {
                    return Err(Error::Infeasible(format!(
                        "edge covering needs 2^{levels} disks, over the disk budget"
                    )));
                }
                input.max_steps
            }
            StepsOutcome::NonTerminating => 1,
        }
    };

    let mut fill = GapFill {
        gamma: input.gamma,
        frame: &frame,
        max_level,
        pairs: covering.pairs,
        nodes: Vec::new(),
        truncated: false,
        deepest: 0,
    };
    let root = fill.fill(cuts, left_nb, right_nb, reference_radius, 1)?;

    covering.pairs = fill.pairs;
    covering.recursion = fill.nodes;
    covering.root = root;
    covering.depth = fill.deepest;
    covering.terminated = !fill.truncated;
    Ok(covering)
}
