//! Pattern synthesis: turning interaction state into electrode lattices.
//!
//! Three display families share the 6x6 lattice:
//! - feature patterns grow outward from the centre while approaching —
//!   concentric rings for faces, lengthening lines for edges, a fixed
//!   centre block for corners;
//! - contact patterns shift the settled feature pattern sideways by the
//!   quantized contact orientation;
//! - texture patterns scroll the settled feature pattern opposite the
//!   slide direction, stepping one event per unit of texture phase and
//!   `k` cells per event, so coarser surfaces step less often but
//!   further.
//!
//! Pattern growth and scroll cadence are driven by two phase
//! accumulators. Both integrate velocity over time against the 2 mm
//! electrode spacing; their integer parts are the ring index and the
//! shift count. Phases are floored through a small positive guard so a
//! velocity profile that should land exactly on an integer does, even
//! after hundreds of accumulation steps.

use crate::array::{Lattice, ELECTRODE_SPACING_MM, GRID_SIDE};
use crate::context::{InteractionState, KinematicsSample, Mode, MoveDirection, OrientationLevel};
use crate::geometry::{ContactSample, EdgeOrientation, Feature};
use crate::math::phase_floor;

/// Tuning for pattern synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisParams {
    /// Gain on the approach-phase integrator.
    pub alpha: f64,
    /// Texture scroll polarity: +1 scrolls opposite the slide direction,
    /// -1 scrolls with it. Must be +1 or -1.
    pub beta: i32,
    /// Feature patterns stop growing at this ring index.
    pub max_ring_radius: u32,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        SynthesisParams { alpha: 1.0, beta: 1, max_ring_radius: 2 }
    }
}

impl SynthesisParams {
    pub fn validate(&self) -> Result<(), SynthesisError> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) || self.beta.abs() != 1 {
            return Err(SynthesisError::InvalidParams);
        }
        Ok(())
    }
}

/// Phase accumulators for pattern growth and texture scrolling.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PatternClock {
    approach_phase: f64,
    texture_phase: f64,
}

impl PatternClock {
    /// Integrate approach speed: phase advances by
    /// `alpha * v * dt / spacing`, one ring per 2 mm of closing distance
    /// at the default gain. Negative speeds are ignored.
    pub fn advance_approach(&mut self, v_approach_mm_s: f64, dt_s: f64, params: &SynthesisParams) {
        if v_approach_mm_s > 0.0 && dt_s > 0.0 {
            self.approach_phase += params.alpha * v_approach_mm_s * dt_s / ELECTRODE_SPACING_MM;
        }
    }

    /// Integrate slide speed against the surface's texture level: phase
    /// advances by `v * dt / (spacing * k)`. Smooth surfaces (`k = 0`)
    /// accumulate nothing.
    pub fn advance_texture(&mut self, v_slide_mm_s: f64, dt_s: f64, k_texture: u8) {
        if k_texture > 0 && v_slide_mm_s > 0.0 && dt_s > 0.0 {
            self.texture_phase +=
                v_slide_mm_s * dt_s / (ELECTRODE_SPACING_MM * k_texture as f64);
        }
    }

    pub fn reset(&mut self) {
        *self = PatternClock::default();
    }

    /// Ring index before saturation: the integer part of the approach
    /// phase.
    pub fn ring_index(&self) -> u32 {
        phase_floor(self.approach_phase)
    }

    /// Number of completed texture shift events.
    pub fn shift_count(&self) -> u32 {
        phase_floor(self.texture_phase)
    }

    pub fn approach_phase(&self) -> f64 {
        self.approach_phase
    }

    pub fn texture_phase(&self) -> f64 {
        self.texture_phase
    }
}

/// What produced a frame, for logs and inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// All electrodes off.
    Off,
    /// Concentric square ring while approaching a face.
    FaceRing { ring: u32 },
    /// Lengthening line along an edge's quantized direction.
    EdgeLine { bin: EdgeOrientation, ring: u32 },
    /// Fixed centre block over a corner.
    CornerPoint { ring: u32 },
    /// Feature pattern shifted sideways by contact orientation.
    ContactShifted { level: OrientationLevel },
    /// Feature pattern scrolled by texture motion.
    TextureShifted { d_row: i32, d_col: i32 },
}

/// A synthesized frame: the raw lattice plus its provenance. The lattice
/// keeps all 36 cells so shifts compose exactly; corner cells are dropped
/// at readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternFrame {
    pub lattice: Lattice,
    pub kind: PatternKind,
}

impl PatternFrame {
    pub fn off() -> PatternFrame {
        PatternFrame { lattice: Lattice::EMPTY, kind: PatternKind::Off }
    }

    /// The lattice restricted to physical electrodes.
    pub fn masked_lattice(&self) -> Lattice {
        self.lattice.masked()
    }

    /// Per-electrode on/off flags in electrode-id order.
    pub fn activation(&self) -> [bool; 32] {
        self.lattice.electrode_activation()
    }

    /// 36-character row-major grid, `#` for active cells, `.` otherwise.
    pub fn grid_string(&self) -> alloc::string::String {
        self.lattice.grid_string()
    }
}

/// The centre 2x2 block (the even grid has no single centre cell).
fn centre_block() -> Lattice {
    let mut l = Lattice::EMPTY;
    for r in 2..=3 {
        for c in 2..=3 {
            l.insert(r, c);
        }
    }
    l
}

/// Square ring at Chebyshev distance `ring` from the centre block:
/// ring 0 is the block itself, ring 1 the 12 cells around it, ring 2 the
/// grid boundary.
fn face_ring(ring: u32) -> Lattice {
    let n = ring.min(2) as i32;
    let (lo, hi) = (2 - n, 3 + n);
    let mut l = Lattice::EMPTY;
    for r in lo..=hi {
        for c in lo..=hi {
            if r == lo || r == hi || c == lo || c == hi {
                l.insert(r as usize, c as usize);
            }
        }
    }
    l
}

/// Line along the edge's quantized direction, growing from 2 cells at
/// ring 0 by a cell on each end per ring, saturating at the full
/// 6-cell span.
fn edge_line(bin: EdgeOrientation, ring: u32) -> Lattice {
    let n = ring.min(2);
    let len = (2 + 2 * n).min(GRID_SIDE as u32) as usize;
    let mut l = Lattice::EMPTY;
    match bin {
        EdgeOrientation::H => {
            let lo = 2 - n.min(2) as i32;
            let hi = 3 + n.min(2) as i32;
            for c in lo.max(0)..=hi.min(5) {
                l.insert(2, c as usize);
            }
        }
        EdgeOrientation::V => {
            let lo = 2 - n.min(2) as i32;
            let hi = 3 + n.min(2) as i32;
            for r in lo.max(0)..=hi.min(5) {
                l.insert(r as usize, 2);
            }
        }
        EdgeOrientation::D1 => {
            // Anti-diagonal (rising to the right), centre outward.
            const ORDER: [(usize, usize); 6] = [(3, 2), (2, 3), (4, 1), (1, 4), (5, 0), (0, 5)];
            for &(r, c) in ORDER.iter().take(len) {
                l.insert(r, c);
            }
        }
        EdgeOrientation::D2 => {
            // Main diagonal (falling to the right), centre outward.
            const ORDER: [(usize, usize); 6] = [(2, 2), (3, 3), (1, 1), (4, 4), (0, 0), (5, 5)];
            for &(r, c) in ORDER.iter().take(len) {
                l.insert(r, c);
            }
        }
    }
    l
}

/// Base feature pattern for a feature class at a given ring index.
/// Edges with no usable orientation bin fall back to horizontal.
pub fn base_pattern(
    feature: Feature,
    edge_bin: Option<EdgeOrientation>,
    ring: u32,
) -> PatternFrame {
    match feature {
        Feature::Face => {
            PatternFrame { lattice: face_ring(ring), kind: PatternKind::FaceRing { ring } }
        }
        Feature::Edge => {
            let bin = edge_bin.unwrap_or(EdgeOrientation::H);
            PatternFrame { lattice: edge_line(bin, ring), kind: PatternKind::EdgeLine { bin, ring } }
        }
        Feature::Corner => PatternFrame {
            lattice: centre_block(),
            kind: PatternKind::CornerPoint { ring },
        },
    }
}

/// Shift a settled feature pattern sideways by the orientation level's
/// column offset. Cells pushed off the grid are dropped.
pub fn contact_pattern(base: &PatternFrame, level: OrientationLevel) -> PatternFrame {
    PatternFrame {
        lattice: base.lattice.shift_clip(0, level.column_shift()),
        kind: PatternKind::ContactShifted { level },
    }
}

/// Lattice translation for a texture state: `shift_count` events of `k`
/// cells each along the slide direction, negated when `beta` is +1 so
/// the pattern scrolls opposite the motion.
pub fn texture_translation(
    direction: MoveDirection,
    shift_count: u32,
    k_texture: u8,
    beta: i32,
) -> (i32, i32) {
    let (dr, dc) = direction.cell_vector();
    let step = (shift_count as i32) * (k_texture as i32);
    (-beta * dr * step, -beta * dc * step)
}

/// Scroll a settled feature pattern by the texture translation, wrapping
/// toroidally on the full 36-cell lattice.
pub fn texture_pattern(
    base: &PatternFrame,
    direction: MoveDirection,
    shift_count: u32,
    k_texture: u8,
    params: &SynthesisParams,
) -> PatternFrame {
    let (d_row, d_col) = texture_translation(direction, shift_count, k_texture, params.beta);
    PatternFrame {
        lattice: base.lattice.shift_wrap(d_row, d_col),
        kind: PatternKind::TextureShifted { d_row, d_col },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisError {
    /// Interacting with no committed feature to render.
    MissingStableFeature,
    /// Parameters outside their documented domain.
    InvalidParams,
}

impl core::fmt::Display for SynthesisError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SynthesisError::MissingStableFeature => {
                write!(f, "interacting state has no committed feature")
            }
            SynthesisError::InvalidParams => write!(f, "synthesis parameters out of range"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SynthesisError {}

/// Synthesize the frame for the current tick.
///
/// - Idle renders all-off.
/// - Approaching renders the growing feature pattern for the contact
///   observed this tick (stabilization has not committed yet).
/// - Interacting renders the committed feature: scrolled by texture
///   state while sliding on a textured surface (`k > 0`), held static
///   while sliding on a smooth one, and shifted by the committed
///   orientation while stationary.
pub fn synthesize(
    state: &InteractionState,
    contact: &ContactSample,
    kin: &KinematicsSample,
    params: &SynthesisParams,
) -> Result<PatternFrame, SynthesisError> {
    params.validate()?;
    let ring = state.pattern_clock.ring_index().min(params.max_ring_radius);
    match state.mode {
        Mode::Idle => Ok(PatternFrame::off()),
        Mode::Approaching => {
            Ok(base_pattern(contact.feature, contact.edge_orientation_bin, ring))
        }
        Mode::Interacting => {
            let stable = state.stable_feature.ok_or(SynthesisError::MissingStableFeature)?;
            let base = base_pattern(stable.feature, stable.edge_bin, ring);
            let sliding = kin.v_slide > 0.0;
            match (sliding, kin.direction, contact.k_texture) {
                (true, Some(direction), k) if k > 0 => Ok(texture_pattern(
                    &base,
                    direction,
                    state.pattern_clock.shift_count(),
                    k,
                    params,
                )),
                (true, _, _) => Ok(base),
                (false, _, _) => match state.stable_orientation {
                    Some(level) => Ok(contact_pattern(&base, level)),
                    None => Ok(base),
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextConfig, InteractionState};
    use crate::geometry::Feature;
    use crate::math::Vec3;

    fn cells(l: Lattice) -> alloc::vec::Vec<(usize, usize)> {
        l.cells().collect()
    }

    #[test]
    fn face_ring_zero_is_the_centre_block() {
        let l = face_ring(0);
        assert_eq!(cells(l), alloc::vec![(2, 2), (2, 3), (3, 2), (3, 3)]);
    }

    #[test]
    fn face_ring_one_is_the_12_cell_annulus() {
        let l = face_ring(1);
        assert_eq!(l.count(), 12);
        for r in 1..=4usize {
            for c in 1..=4usize {
                let boundary = r == 1 || r == 4 || c == 1 || c == 4;
                assert_eq!(l.contains(r, c), boundary, "({r},{c})");
            }
        }
        assert!(!l.contains(0, 0));
        assert!(!l.contains(2, 2));
    }

    #[test]
    fn face_ring_two_is_the_grid_boundary_minus_corners_after_masking() {
        let l = face_ring(2);
        assert_eq!(l.count(), 20);
        assert_eq!(l.masked().count(), 16);
        assert!(l.contains(0, 0));
        assert!(!l.masked().contains(0, 0));
        // Growth saturates at the boundary.
        assert_eq!(face_ring(7), l);
    }

    #[test]
    fn horizontal_edge_line_grows_symmetrically_to_the_full_row() {
        assert_eq!(cells(edge_line(EdgeOrientation::H, 0)), alloc::vec![(2, 2), (2, 3)]);
        assert_eq!(
            cells(edge_line(EdgeOrientation::H, 1)),
            alloc::vec![(2, 1), (2, 2), (2, 3), (2, 4)]
        );
        let full = edge_line(EdgeOrientation::H, 2);
        assert_eq!(full.count(), 6);
        assert_eq!(full.masked().count(), 6, "row 2 holds no corner cells");
        assert_eq!(edge_line(EdgeOrientation::H, 9), full);
    }

    #[test]
    fn vertical_edge_line_mirrors_the_horizontal_one() {
        assert_eq!(cells(edge_line(EdgeOrientation::V, 0)), alloc::vec![(2, 2), (3, 2)]);
        assert_eq!(edge_line(EdgeOrientation::V, 2).count(), 6);
    }

    #[test]
    fn diagonal_lines_grow_outward_and_lose_their_corner_cells_to_masking() {
        assert_eq!(cells(edge_line(EdgeOrientation::D1, 0)), alloc::vec![(2, 3), (3, 2)]);
        let d1 = edge_line(EdgeOrientation::D1, 2);
        assert_eq!(d1.count(), 6);
        assert_eq!(d1.masked().count(), 4);
        assert!(d1.contains(5, 0) && d1.contains(0, 5));

        assert_eq!(cells(edge_line(EdgeOrientation::D2, 0)), alloc::vec![(2, 2), (3, 3)]);
        let d2 = edge_line(EdgeOrientation::D2, 1);
        assert_eq!(cells(d2), alloc::vec![(1, 1), (2, 2), (3, 3), (4, 4)]);
    }

    #[test]
    fn corner_pattern_is_the_centre_block_at_every_ring() {
        for ring in 0..4 {
            let f = base_pattern(Feature::Corner, None, ring);
            assert_eq!(f.lattice, centre_block());
        }
    }

    #[test]
    fn approach_phase_advances_one_ring_per_2mm() {
        let params = SynthesisParams::default();
        let mut clock = PatternClock::default();
        clock.advance_approach(20.0, 0.1, &params);
        assert!((clock.approach_phase() - 1.0).abs() < 1e-12);
        assert_eq!(clock.ring_index(), 1);
    }

    #[test]
    fn ring_index_tracks_integrated_displacement_exactly() {
        // Piecewise profile totalling 7 mm; an independent accumulator
        // of raw displacement must agree with the clock at every step.
        let params = SynthesisParams::default();
        let profile = [(5.0, 0.3), (20.0, 0.2), (0.0, 0.1), (15.0, 0.1)];
        let mut clock = PatternClock::default();
        let mut displacement = 0.0f64;
        for &(v, total) in &profile {
            let steps = (total / 0.001f64).round() as usize;
            for _ in 0..steps {
                clock.advance_approach(v, 0.001, &params);
                displacement += v * 0.001;
                let expected = phase_floor(displacement / ELECTRODE_SPACING_MM);
                assert_eq!(clock.ring_index(), expected);
            }
        }
        assert!((displacement - 7.0).abs() < 1e-9);
        assert_eq!(clock.ring_index(), 3);
    }

    #[test]
    fn texture_phase_scales_inversely_with_texture_level() {
        let mut clock = PatternClock::default();
        clock.advance_texture(20.0, 0.05, 1);
        assert!((clock.texture_phase() - 0.5).abs() < 1e-12);
        clock.reset();
        clock.advance_texture(20.0, 0.05, 2);
        assert!((clock.texture_phase() - 0.25).abs() < 1e-12);
        clock.reset();
        clock.advance_texture(20.0, 0.05, 0);
        assert_eq!(clock.texture_phase(), 0.0);
    }

    #[test]
    fn one_second_at_20mm_s_counts_exactly_ten_shifts() {
        // 72 ticks of 1/72 s each; the guard absorbs accumulation error.
        let mut clock = PatternClock::default();
        for i in 1..=72 {
            let dt = i as f64 / 72.0 - (i - 1) as f64 / 72.0;
            clock.advance_texture(20.0, dt, 1);
        }
        assert_eq!(clock.shift_count(), 10);
    }

    #[test]
    fn contact_shift_moves_the_centre_block_by_the_level_offset() {
        let base = base_pattern(Feature::Corner, None, 0);
        let right1 = contact_pattern(&base, OrientationLevel::ShallowRight);
        assert_eq!(cells(right1.lattice), alloc::vec![(2, 3), (2, 4), (3, 3), (3, 4)]);
        let right2 = contact_pattern(&base, OrientationLevel::SteepRight);
        assert_eq!(cells(right2.lattice), alloc::vec![(2, 4), (2, 5), (3, 4), (3, 5)]);
        let left2 = contact_pattern(&base, OrientationLevel::SteepLeft);
        assert_eq!(cells(left2.lattice), alloc::vec![(2, 0), (2, 1), (3, 0), (3, 1)]);
    }

    #[test]
    fn contact_shift_clips_at_the_grid_border() {
        let base = base_pattern(Feature::Face, None, 2); // touches cols 0 and 5
        let shifted = contact_pattern(&base, OrientationLevel::SteepRight);
        assert!(shifted.lattice.count() < base.lattice.count());
        for (_, c) in shifted.lattice.cells() {
            assert!(c >= 2);
        }
    }

    #[test]
    fn vertical_edge_shifted_hard_left_lands_on_column_zero() {
        let base = base_pattern(Feature::Edge, Some(EdgeOrientation::V), 2);
        let shifted = contact_pattern(&base, OrientationLevel::SteepLeft);
        assert!(shifted.lattice.cells().all(|(_, c)| c == 0));
        assert_eq!(shifted.lattice.count(), 6);
        assert_eq!(shifted.masked_lattice().count(), 4, "corner cells drop at readout");
    }

    #[test]
    fn texture_scroll_opposes_the_slide_direction() {
        let params = SynthesisParams::default();
        let base = base_pattern(Feature::Corner, None, 0);
        // Sliding right with k = 1 after one event: one column left, wrapped.
        let f = texture_pattern(&base, MoveDirection::Right, 1, 1, &params);
        assert_eq!(f.kind, PatternKind::TextureShifted { d_row: 0, d_col: -1 });
        assert_eq!(cells(f.lattice), alloc::vec![(2, 1), (2, 2), (3, 1), (3, 2)]);
        // Sliding forward with k = 2 after one event: two rows down.
        let f = texture_pattern(&base, MoveDirection::Forward, 1, 2, &params);
        assert_eq!(f.kind, PatternKind::TextureShifted { d_row: 2, d_col: 0 });
        assert_eq!(cells(f.lattice), alloc::vec![(4, 2), (4, 3), (5, 2), (5, 3)]);
    }

    #[test]
    fn texture_scroll_wraps_toroidally_before_masking() {
        let params = SynthesisParams::default();
        let base = base_pattern(Feature::Corner, None, 0);
        // Four left-steps from columns {2,3}: wraps through the border.
        let f = texture_pattern(&base, MoveDirection::Right, 4, 1, &params);
        assert_eq!(cells(f.lattice), alloc::vec![(2, 4), (2, 5), (3, 4), (3, 5)]);
        // Six steps is a full cycle.
        let f = texture_pattern(&base, MoveDirection::Right, 6, 1, &params);
        assert_eq!(f.lattice, base.lattice);
    }

    #[test]
    fn texture_events_compose_like_single_translations() {
        let params = SynthesisParams::default();
        for direction in MoveDirection::ALL {
            for k in 1..=2u8 {
                let base = base_pattern(Feature::Face, None, 1);
                let two = texture_pattern(&base, direction, 2, k, &params);
                let (dr, dc) = texture_translation(direction, 1, k, params.beta);
                let one = texture_pattern(&base, direction, 1, k, &params);
                assert_eq!(two.lattice, one.lattice.shift_wrap(dr, dc));
            }
        }
    }

    #[test]
    fn flipping_beta_negates_the_translation() {
        for direction in MoveDirection::ALL {
            let (r1, c1) = texture_translation(direction, 3, 2, 1);
            let (r2, c2) = texture_translation(direction, 3, 2, -1);
            assert_eq!((r1, c1), (-r2, -c2));
            let (dr, dc) = direction.cell_vector();
            assert_eq!((r1, c1), (-dr * 6, -dc * 6));
        }
    }

    fn flat_contact(feature: Feature) -> ContactSample {
        ContactSample {
            closest_point: Vec3::ZERO,
            signed_distance: 0.5,
            surface_normal: Vec3::new(0.0, 0.0, 1.0),
            surface_tangent: Vec3::new(0.0, 1.0, 0.0),
            feature,
            edge_orientation_bin: if feature == Feature::Edge {
                Some(EdgeOrientation::H)
            } else {
                None
            },
            degenerate_projection: false,
            k_texture: 1,
            triangle: 0,
        }
    }

    #[test]
    fn idle_synthesizes_all_off() {
        let state = InteractionState::new();
        let frame = synthesize(
            &state,
            &flat_contact(Feature::Face),
            &KinematicsSample::stationary(1.0 / 72.0),
            &SynthesisParams::default(),
        )
        .unwrap();
        assert_eq!(frame.kind, PatternKind::Off);
        assert!(frame.activation().iter().all(|&a| !a));
    }

    #[test]
    fn approaching_renders_the_ring_for_the_integrated_displacement() {
        // 4 mm of approach: phase 2.0, ring 2.
        let mut state = InteractionState::new();
        state.mode = Mode::Approaching;
        let params = SynthesisParams::default();
        state.pattern_clock.advance_approach(40.0, 0.1, &params);
        let frame = synthesize(
            &state,
            &flat_contact(Feature::Face),
            &KinematicsSample::stationary(1.0 / 72.0),
            &params,
        )
        .unwrap();
        assert_eq!(frame.kind, PatternKind::FaceRing { ring: 2 });
        assert_eq!(frame.lattice, face_ring(2));
    }

    #[test]
    fn ring_growth_saturates_at_the_maximum_radius() {
        let mut state = InteractionState::new();
        state.mode = Mode::Approaching;
        let params = SynthesisParams::default();
        state.pattern_clock.advance_approach(20.0, 0.73, &params); // phase 7.3
        let frame = synthesize(
            &state,
            &flat_contact(Feature::Face),
            &KinematicsSample::stationary(1.0 / 72.0),
            &params,
        )
        .unwrap();
        assert_eq!(frame.kind, PatternKind::FaceRing { ring: 2 });
    }

    fn interacting_state(feature: Feature) -> InteractionState {
        let cfg = ContextConfig::default();
        let mut state = InteractionState::new();
        let contact = flat_contact(feature);
        let kin = KinematicsSample::stationary(1.0 / 72.0);
        for _ in 0..cfg.stability_window_ticks {
            state = crate::context::step_fsm(
                &state,
                &contact,
                &kin,
                Some(crate::context::ContactOrientation {
                    theta_deg: 10.0,
                    level: OrientationLevel::ShallowRight,
                }),
                &cfg,
            );
        }
        assert_eq!(state.mode, Mode::Interacting);
        state
    }

    #[test]
    fn stationary_interaction_renders_the_orientation_shift() {
        let state = interacting_state(Feature::Corner);
        let frame = synthesize(
            &state,
            &flat_contact(Feature::Corner),
            &KinematicsSample::stationary(1.0 / 72.0),
            &SynthesisParams::default(),
        )
        .unwrap();
        assert_eq!(frame.kind, PatternKind::ContactShifted {
            level: OrientationLevel::ShallowRight
        });
        assert_eq!(cells(frame.lattice), alloc::vec![(2, 3), (2, 4), (3, 3), (3, 4)]);
    }

    #[test]
    fn sliding_on_texture_renders_the_scrolled_pattern() {
        let mut state = interacting_state(Feature::Corner);
        state.pattern_clock.advance_texture(20.0, 0.1, 1); // one event
        let kin = KinematicsSample {
            v_approach: 0.0,
            v_slide: 20.0,
            direction: Some(MoveDirection::Right),
            dt: 1.0 / 72.0,
        };
        let frame = synthesize(
            &state,
            &flat_contact(Feature::Corner),
            &kin,
            &SynthesisParams::default(),
        )
        .unwrap();
        assert_eq!(frame.kind, PatternKind::TextureShifted { d_row: 0, d_col: -1 });
    }

    #[test]
    fn sliding_on_a_smooth_surface_holds_the_base_pattern() {
        let state = interacting_state(Feature::Corner);
        let mut contact = flat_contact(Feature::Corner);
        contact.k_texture = 0;
        let kin = KinematicsSample {
            v_approach: 0.0,
            v_slide: 20.0,
            direction: Some(MoveDirection::Right),
            dt: 1.0 / 72.0,
        };
        let frame =
            synthesize(&state, &contact, &kin, &SynthesisParams::default()).unwrap();
        assert_eq!(frame.kind, PatternKind::CornerPoint { ring: 0 });
        assert_eq!(frame.lattice, centre_block());
    }

    #[test]
    fn interacting_without_a_committed_feature_is_an_error() {
        let mut state = InteractionState::new();
        state.mode = Mode::Interacting;
        let err = synthesize(
            &state,
            &flat_contact(Feature::Face),
            &KinematicsSample::stationary(1.0 / 72.0),
            &SynthesisParams::default(),
        )
        .unwrap_err();
        assert_eq!(err, SynthesisError::MissingStableFeature);
    }

    #[test]
    fn synthesized_frames_never_activate_corner_cells() {
        // Pseudo-random walk over directions, shifts and features.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut rand = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let direction = MoveDirection::ALL[(rand() % 8) as usize];
            let k = 1 + (rand() % 2) as u8;
            let s = (rand() % 12) as u32;
            let ring = (rand() % 3) as u32;
            let base = base_pattern(
                [Feature::Face, Feature::Edge, Feature::Corner][(rand() % 3) as usize],
                Some(EdgeOrientation::ALL[(rand() % 4) as usize]),
                ring,
            );
            let frame = texture_pattern(&base, direction, s, k, &SynthesisParams::default());
            let act = frame.activation();
            assert_eq!(act.len(), 32);
            assert!(!frame.masked_lattice().contains(0, 0));
            assert!(!frame.masked_lattice().contains(0, 5));
            assert!(!frame.masked_lattice().contains(5, 0));
            assert!(!frame.masked_lattice().contains(5, 5));
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = SynthesisParams { beta: 0, ..SynthesisParams::default() };
        assert_eq!(p.validate(), Err(SynthesisError::InvalidParams));
        let state = InteractionState::new();
        assert!(synthesize(
            &state,
            &flat_contact(Feature::Face),
            &KinematicsSample::stationary(1.0 / 72.0),
            &p,
        )
        .is_err());
    }
}
