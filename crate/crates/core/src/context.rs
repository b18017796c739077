//! Interaction context: finger kinematics, contact orientation, and the
//! idle / approaching / interacting state machine.
//!
//! Poses arrive at the 72 Hz tick rate. Each tick the estimator turns the
//! pose pair into approach and slide velocities (exponentially smoothed),
//! the slide direction is quantized to 8 compass bins, the contact
//! orientation angle to 4 levels, and the state machine advances. All
//! quantizers round boundary values towards the lower bin so repeated
//! boundary inputs cannot flicker between bins.

use alloc::vec::Vec;

use crate::geometry::{ContactSample, EdgeOrientation, Feature};
use crate::math::{acos, atan2, fabs, floor, Basis, Vec3, DEG_PER_RAD};
use crate::patterns::PatternClock;

/// Finger-pad pose at a point in time. Lengths in millimetres, time in
/// seconds. `pad_normal` points out of the pad towards the surface it
/// faces; `pad_forward` points towards the fingertip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingerPose {
    pub t: f64,
    pub position: Vec3,
    pub pad_normal: Vec3,
    pub pad_forward: Vec3,
}

impl FingerPose {
    pub fn new(t: f64, position: Vec3, pad_normal: Vec3, pad_forward: Vec3) -> FingerPose {
        FingerPose { t, position, pad_normal, pad_forward }
    }

    /// Full orthonormal pad frame (right = normal x forward).
    pub fn basis(&self) -> Basis {
        Basis::from_pad_axes(self.pad_normal, self.pad_forward)
    }

    /// Largest deviation of the stored axes from an orthonormal frame.
    pub fn orthonormality_error(&self) -> f64 {
        self.basis().orthonormality_error()
    }
}

/// Movement direction in the pad plane, quantized to 8 compass bins.
/// Azimuth 0 is `forward` (towards the fingertip), 90 degrees is `right`,
/// increasing clockwise when viewed through the pad.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveDirection {
    Forward,
    ForwardRight,
    Right,
    BackRight,
    Backward,
    BackLeft,
    Left,
    ForwardLeft,
}

impl MoveDirection {
    pub const ALL: [MoveDirection; 8] = [
        MoveDirection::Forward,
        MoveDirection::ForwardRight,
        MoveDirection::Right,
        MoveDirection::BackRight,
        MoveDirection::Backward,
        MoveDirection::BackLeft,
        MoveDirection::Left,
        MoveDirection::ForwardLeft,
    ];

    /// Bin centre azimuth in degrees.
    pub fn azimuth_deg(self) -> f64 {
        45.0 * self.index() as f64
    }

    pub fn index(self) -> usize {
        MoveDirection::ALL.iter().position(|&d| d == self).unwrap()
    }

    /// Unit step on the electrode lattice `(d_row, d_col)`: forward is
    /// towards row 0 (distal), right is towards higher columns.
    pub fn cell_vector(self) -> (i32, i32) {
        match self {
            MoveDirection::Forward => (-1, 0),
            MoveDirection::ForwardRight => (-1, 1),
            MoveDirection::Right => (0, 1),
            MoveDirection::BackRight => (1, 1),
            MoveDirection::Backward => (1, 0),
            MoveDirection::BackLeft => (1, -1),
            MoveDirection::Left => (0, -1),
            MoveDirection::ForwardLeft => (-1, -1),
        }
    }
}

impl core::fmt::Display for MoveDirection {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            MoveDirection::Forward => "Forward",
            MoveDirection::ForwardRight => "ForwardRight",
            MoveDirection::Right => "Right",
            MoveDirection::BackRight => "BackRight",
            MoveDirection::Backward => "Backward",
            MoveDirection::BackLeft => "BackLeft",
            MoveDirection::Left => "Left",
            MoveDirection::ForwardLeft => "ForwardLeft",
        })
    }
}

/// Quantize an azimuth (degrees, any range) to the nearest compass bin.
/// Boundary azimuths (22.5 + n*45) round towards the lower bin centre:
/// 67.5 maps to ForwardRight, not Right.
pub fn quantize_direction_deg(azimuth_deg: f64) -> MoveDirection {
    let mut a = azimuth_deg % 360.0;
    if a < 0.0 {
        a += 360.0;
    }
    let t = (a + 22.5) / 45.0;
    let f = floor(t);
    let k = if t == f { f - 1.0 } else { f } as i64;
    MoveDirection::ALL[k.rem_euclid(8) as usize]
}

/// Quantize an in-plane displacement to a compass bin. Returns `None`
/// when the displacement has no in-plane component.
pub fn quantize_direction(displacement: Vec3, pad: &Basis) -> Option<MoveDirection> {
    let f = displacement.dot(pad.forward);
    let r = displacement.dot(pad.right);
    if f * f + r * r < 1e-18 {
        return None;
    }
    Some(quantize_direction_deg(atan2(r, f) * DEG_PER_RAD))
}

/// Contact orientation level: which way, and how steeply, the contact
/// point is biased relative to the surface tangent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationLevel {
    SteepLeft,
    ShallowLeft,
    ShallowRight,
    SteepRight,
}

impl OrientationLevel {
    /// Column shift applied to the base pattern for this level.
    pub fn column_shift(self) -> i32 {
        match self {
            OrientationLevel::SteepLeft => -2,
            OrientationLevel::ShallowLeft => -1,
            OrientationLevel::ShallowRight => 1,
            OrientationLevel::SteepRight => 2,
        }
    }
}

impl core::fmt::Display for OrientationLevel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            OrientationLevel::SteepLeft => "SteepLeft",
            OrientationLevel::ShallowLeft => "ShallowLeft",
            OrientationLevel::ShallowRight => "ShallowRight",
            OrientationLevel::SteepRight => "SteepRight",
        })
    }
}

/// Orientation angle plus its quantized level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactOrientation {
    pub theta_deg: f64,
    pub level: OrientationLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationError {
    /// Angle outside [-90, 90] degrees.
    OutOfRange,
}

impl core::fmt::Display for OrientationError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "orientation angle outside [-90, 90] degrees")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OrientationError {}

/// Quantize an orientation angle to its level.
///
/// Intervals: SteepLeft [-90, -30), ShallowLeft [-30, 0),
/// ShallowRight [0, 30), SteepRight [30, 90].
pub fn quantize_orientation(theta_deg: f64) -> Result<OrientationLevel, OrientationError> {
    if !(-90.0..=90.0).contains(&theta_deg) {
        return Err(OrientationError::OutOfRange);
    }
    Ok(if theta_deg < -30.0 {
        OrientationLevel::SteepLeft
    } else if theta_deg < 0.0 {
        OrientationLevel::ShallowLeft
    } else if theta_deg < 30.0 {
        OrientationLevel::ShallowRight
    } else {
        OrientationLevel::SteepRight
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaError {
    /// Pad centre coincides with the contact point.
    DegenerateRay,
}

impl core::fmt::Display for ThetaError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "pad centre coincides with the contact point")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ThetaError {}

/// Orientation angle of a contact in degrees, in [-90, 90].
///
/// The ray from the pad centre to the contact point and the surface
/// tangent are both projected onto the horizontal plane (z dropped);
/// theta is the angle between the projected ray and the projected tangent
/// line, negative when the ray points to the left of `pad_forward`.
/// A ray with no horizontal component (finger directly above the contact)
/// has no lateral bias and yields 0.
pub fn compute_theta(pose: &FingerPose, contact: &ContactSample) -> Result<f64, ThetaError> {
    let ray = contact.closest_point - pose.position;
    if ray.norm() < 1e-9 {
        return Err(ThetaError::DegenerateRay);
    }
    let ray_h = ray.flattened();
    if ray_h.norm_sq() < 1e-18 {
        return Ok(0.0);
    }
    let basis = pose.basis();
    // A vertical tangent projects to nothing; fall back to the pad's own
    // forward axis as the reference line.
    let tangent_h = match contact.surface_tangent.flattened().normalized() {
        Some(t) => t,
        None => match basis.forward.flattened().normalized() {
            Some(t) => t,
            None => return Ok(0.0),
        },
    };
    let ray_unit = match ray_h.normalized() {
        Some(r) => r,
        None => return Ok(0.0),
    };
    // Angle to the undirected tangent line, in [0, 90].
    let magnitude = acos(fabs(ray_unit.dot(tangent_h)).clamp(0.0, 1.0)) * DEG_PER_RAD;
    let side = ray_h.dot(basis.right.flattened());
    Ok(if side < 0.0 { -magnitude } else { magnitude })
}

/// Compute and quantize the contact orientation in one step.
pub fn contact_orientation(
    pose: &FingerPose,
    contact: &ContactSample,
) -> Result<ContactOrientation, ThetaError> {
    let theta_deg = compute_theta(pose, contact)?;
    // compute_theta clamps into [-90, 90] by construction.
    let level = quantize_orientation(theta_deg).unwrap_or(OrientationLevel::ShallowRight);
    Ok(ContactOrientation { theta_deg, level })
}

/// Per-tick kinematics derived from a pose pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicsSample {
    /// Smoothed closing speed towards the surface, mm/s, never negative.
    pub v_approach: f64,
    /// Smoothed tangential speed, mm/s, never negative.
    pub v_slide: f64,
    /// Slide direction bin; present exactly when `v_slide > 0`.
    pub direction: Option<MoveDirection>,
    /// Tick duration in seconds.
    pub dt: f64,
}

impl KinematicsSample {
    pub fn stationary(dt: f64) -> KinematicsSample {
        KinematicsSample { v_approach: 0.0, v_slide: 0.0, direction: None, dt }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KinematicsError {
    /// Pose timestamps are not strictly increasing.
    ZeroDt,
}

impl core::fmt::Display for KinematicsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "pose timestamps must be strictly increasing")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KinematicsError {}

/// Turns consecutive (pose, contact) pairs into smoothed kinematics.
///
/// Velocities are smoothed with a per-tick exponential moving average:
/// `v = lambda * raw + (1 - lambda) * previous`. The first update after
/// priming initialises the average with the raw value, so a trace that
/// starts mid-motion reports its full speed from the first tick.
/// Approach speed is the decrease rate of the signed surface distance.
#[derive(Debug, Clone)]
pub struct KinematicsEstimator {
    lambda: f64,
    prev: Option<PrevTick>,
}

#[derive(Debug, Clone)]
struct PrevTick {
    t: f64,
    position: Vec3,
    signed_distance: f64,
    sample: Option<KinematicsSample>,
}

impl KinematicsEstimator {
    /// `lambda` in (0, 1]; 1 disables smoothing.
    pub fn new(lambda: f64) -> KinematicsEstimator {
        KinematicsEstimator { lambda: lambda.clamp(1e-6, 1.0), prev: None }
    }

    /// Set the reference pose without producing a sample.
    pub fn prime(&mut self, pose: &FingerPose, contact: &ContactSample) {
        self.prev = Some(PrevTick {
            t: pose.t,
            position: pose.position,
            signed_distance: contact.signed_distance,
            sample: None,
        });
    }

    /// Advance one tick. Must be primed first.
    pub fn update(
        &mut self,
        pose: &FingerPose,
        contact: &ContactSample,
    ) -> Result<KinematicsSample, KinematicsError> {
        let prev = match &self.prev {
            Some(p) => p.clone(),
            None => {
                self.prime(pose, contact);
                return Ok(KinematicsSample::stationary(0.0));
            }
        };
        let dt = pose.t - prev.t;
        if dt <= 0.0 {
            return Err(KinematicsError::ZeroDt);
        }

        let raw_approach = (-(contact.signed_distance - prev.signed_distance) / dt).max(0.0);
        let displacement = pose.position - prev.position;
        let tangential = crate::geometry::mesh::reject(displacement, contact.surface_normal);
        let raw_slide = tangential.norm() / dt;

        let (v_approach, v_slide, prev_direction) = match prev.sample {
            Some(s) => (
                self.lambda * raw_approach + (1.0 - self.lambda) * s.v_approach,
                self.lambda * raw_slide + (1.0 - self.lambda) * s.v_slide,
                s.direction,
            ),
            None => (raw_approach, raw_slide, None),
        };

        let basis = pose.basis();
        let direction = quantize_direction(tangential, &basis).or(prev_direction);
        // The bin accompanies a positive slide speed and nothing else.
        let (v_slide, direction) = match direction {
            Some(d) if v_slide > 0.0 => (v_slide, Some(d)),
            _ => (0.0, None),
        };

        let sample = KinematicsSample { v_approach, v_slide, direction, dt };
        self.prev = Some(PrevTick {
            t: pose.t,
            position: pose.position,
            signed_distance: contact.signed_distance,
            sample: Some(sample),
        });
        Ok(sample)
    }
}

/// Interaction mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Idle,
    Approaching,
    Interacting,
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Mode::Idle => "Idle",
            Mode::Approaching => "Approaching",
            Mode::Interacting => "Interacting",
        })
    }
}

/// Thresholds and windows for the state machine and smoothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextConfig {
    /// Contact begins when the signed distance drops to this (mm).
    pub contact_threshold_mm: f64,
    /// Contact ends when the signed distance exceeds this (mm); the gap
    /// between the two thresholds is the release hysteresis.
    pub release_threshold_mm: f64,
    /// Consecutive qualifying ticks required before a parameter change
    /// (or the approaching -> interacting transition) takes effect.
    pub stability_window_ticks: u32,
    /// Approach speeds at or below this (mm/s) count as settled; the
    /// approaching -> interacting transition requires settled contact.
    pub stillness_threshold_mm_s: f64,
    /// Per-tick exponential smoothing factor for velocities, in (0, 1].
    pub smoothing_lambda: f64,
}

impl Default for ContextConfig {
    fn default() -> Self {
        ContextConfig {
            contact_threshold_mm: 1.0,
            release_threshold_mm: 8.0,
            stability_window_ticks: 3,
            stillness_threshold_mm_s: 2.0,
            smoothing_lambda: 0.5,
        }
    }
}

/// Feature class plus the edge bin it was observed with; stabilized as a
/// unit so an edge rotating under the finger re-stabilizes like any other
/// feature change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StableFeature {
    pub feature: Feature,
    pub edge_bin: Option<EdgeOrientation>,
}

/// Full interaction state carried tick to tick.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionState {
    pub mode: Mode,
    /// Feature the patterns are currently rendering (committed).
    pub stable_feature: Option<StableFeature>,
    /// Orientation level the contact patterns are rendering (committed).
    pub stable_orientation: Option<OrientationLevel>,
    /// Consecutive qualifying ticks towards the next feature commit,
    /// saturating at the stability window.
    pub stability_counter: u32,
    /// Approach and texture phase accumulators.
    pub pattern_clock: PatternClock,
    /// Most recent in-contact sample; cleared in Idle.
    pub last_contact: Option<ContactSample>,
    candidate_feature: Option<StableFeature>,
    candidate_orientation: Option<(OrientationLevel, u32)>,
}

impl InteractionState {
    pub fn new() -> InteractionState {
        InteractionState {
            mode: Mode::Idle,
            stable_feature: None,
            stable_orientation: None,
            stability_counter: 0,
            pattern_clock: PatternClock::default(),
            last_contact: None,
            candidate_feature: None,
            candidate_orientation: None,
        }
    }
}

impl Default for InteractionState {
    fn default() -> Self {
        InteractionState::new()
    }
}

/// Advance the state machine by one tick.
///
/// Transitions:
/// - any mode -> Idle when the signed distance exceeds the release
///   threshold (pattern clock and stabilized parameters reset);
/// - Idle -> Approaching when the signed distance reaches the contact
///   threshold;
/// - Approaching -> Interacting once the observed feature has been
///   unchanged and the approach speed settled for a full stability window.
///
/// While interacting, feature and orientation changes commit only after
/// the same stability window, so single-tick flicker never reaches the
/// patterns. Pure: the input state is not modified.
pub fn step_fsm(
    state: &InteractionState,
    contact: &ContactSample,
    kin: &KinematicsSample,
    orientation: Option<ContactOrientation>,
    config: &ContextConfig,
) -> InteractionState {
    let mut next = state.clone();
    let window = config.stability_window_ticks.max(1);

    if contact.signed_distance > config.release_threshold_mm {
        return InteractionState::new();
    }

    let observed = StableFeature {
        feature: contact.feature,
        edge_bin: contact.edge_orientation_bin,
    };

    match state.mode {
        Mode::Idle => {
            next.pattern_clock = PatternClock::default();
            if contact.signed_distance <= config.contact_threshold_mm {
                next.mode = Mode::Approaching;
                next.candidate_feature = Some(observed);
                next.stability_counter =
                    if kin.v_approach <= config.stillness_threshold_mm_s { 1 } else { 0 };
                next.last_contact = Some(contact.clone());
            } else {
                next.last_contact = None;
                next.stability_counter = 0;
                next.candidate_feature = None;
            }
        }
        Mode::Approaching => {
            next.last_contact = Some(contact.clone());
            if next.candidate_feature == Some(observed) {
                if kin.v_approach <= config.stillness_threshold_mm_s {
                    next.stability_counter = (next.stability_counter + 1).min(window);
                } else {
                    next.stability_counter = 0;
                }
            } else {
                next.candidate_feature = Some(observed);
                next.stability_counter =
                    if kin.v_approach <= config.stillness_threshold_mm_s { 1 } else { 0 };
            }
            if next.stability_counter >= window {
                next.mode = Mode::Interacting;
                next.stable_feature = next.candidate_feature;
                next.stable_orientation = orientation.map(|o| o.level);
                next.candidate_feature = None;
                next.candidate_orientation = None;
                next.stability_counter = 0;
            }
        }
        Mode::Interacting => {
            next.last_contact = Some(contact.clone());
            if next.stable_feature == Some(observed) {
                next.candidate_feature = None;
                next.stability_counter = 0;
            } else if next.candidate_feature == Some(observed) {
                next.stability_counter = (next.stability_counter + 1).min(window);
                if next.stability_counter >= window {
                    next.stable_feature = next.candidate_feature;
                    next.candidate_feature = None;
                    next.stability_counter = 0;
                }
            } else {
                next.candidate_feature = Some(observed);
                next.stability_counter = 1;
                if next.stability_counter >= window {
                    next.stable_feature = next.candidate_feature;
                    next.candidate_feature = None;
                    next.stability_counter = 0;
                }
            }

            if let Some(o) = orientation {
                if next.stable_orientation == Some(o.level) {
                    next.candidate_orientation = None;
                } else {
                    let streak = match next.candidate_orientation {
                        Some((level, n)) if level == o.level => n + 1,
                        _ => 1,
                    };
                    if streak >= window {
                        next.stable_orientation = Some(o.level);
                        next.candidate_orientation = None;
                    } else {
                        next.candidate_orientation = Some((o.level, streak));
                    }
                }
            }
        }
    }
    next
}

/// All mode names, for exhaustive transition checks.
pub fn all_modes() -> Vec<Mode> {
    alloc::vec![Mode::Idle, Mode::Approaching, Mode::Interacting]
}
