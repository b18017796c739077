//! Stimulation scheduling and the device wire format.
//!
//! A synthesized frame names which electrodes are on; this module turns
//! that into one stimulation cycle — per-electrode pulses with
//! calibrated amplitudes, sequenced so no two pulses overlap and every
//! pulse is followed by a discharge gap — and packs amplitudes into the
//! 35-byte serial frame the driver hardware consumes.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::array::{region_of_electrode, ACTIVE_ELECTRODES, CALIBRATION_REGIONS, CENTER_REGION};
use crate::math::floor;
use crate::patterns::PatternFrame;

/// Width of every stimulation pulse, microseconds.
pub const PULSE_WIDTH_US: u32 = 200;
/// Minimum discharge interval between consecutive pulses, microseconds.
pub const DISCHARGE_GAP_US: u32 = 45;
/// One sequencing slot: pulse plus discharge gap.
pub const SLOT_PERIOD_US: u32 = PULSE_WIDTH_US + DISCHARGE_GAP_US;
/// Stimulation cycle period (125 Hz refresh), microseconds.
pub const CYCLE_PERIOD_US: u32 = 8_000;
/// Amplitudes are programmed in steps of this many microamps.
pub const AMPLITUDE_STEP_UA: u32 = 10;
/// Largest programmable amplitude, microamps.
pub const AMPLITUDE_MAX_UA: u32 = 10_000;
/// Amplitude resolution on the wire (one byte spans the full range).
pub const WIRE_AMPLITUDE_STEP_UA: u32 = 40;
/// Serial link speed for the device frames, bits per second.
pub const BAUD_RATE: u32 = 921_600;
/// First byte of every device frame.
pub const SYNC_BYTE: u8 = 0xA5;
/// Device frame length: sync + sequence + 32 amplitudes + CRC.
pub const FRAME_LEN: usize = 35;
/// Default depth of the outgoing frame queue.
pub const QUEUE_DEPTH: usize = 4;

/// Per-region comfortable amplitudes plus a global scale.
///
/// The grid splits into a 3x3 arrangement of 2x2 regions; each region
/// carries one calibrated amplitude. Scaling happens at compile time and
/// re-quantizes to the 10 uA step, clamped to the programmable range.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationProfile {
    pub region_amplitude_ua: [u32; CALIBRATION_REGIONS],
    pub global_scale: f64,
}

impl Default for CalibrationProfile {
    fn default() -> Self {
        CalibrationProfile { region_amplitude_ua: [2_000; CALIBRATION_REGIONS], global_scale: 1.0 }
    }
}

impl CalibrationProfile {
    pub fn validate(&self) -> Result<(), CalibrationError> {
        for &a in &self.region_amplitude_ua {
            if a > AMPLITUDE_MAX_UA {
                return Err(CalibrationError::AmplitudeOutOfRange { amplitude_ua: a });
            }
            if a % AMPLITUDE_STEP_UA != 0 {
                return Err(CalibrationError::AmplitudeNotOnStep { amplitude_ua: a });
            }
        }
        if !(self.global_scale.is_finite() && self.global_scale >= 0.0) {
            return Err(CalibrationError::InvalidScale);
        }
        Ok(())
    }

    /// Scaled, step-quantized amplitude for a region.
    pub fn effective_amplitude_ua(&self, region: usize) -> u32 {
        let raw = self.region_amplitude_ua[region] as f64 * self.global_scale;
        let clamped = raw.clamp(0.0, AMPLITUDE_MAX_UA as f64);
        (floor(clamped / AMPLITUDE_STEP_UA as f64) as u32) * AMPLITUDE_STEP_UA
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationError {
    RegionOutOfRange { region: u8 },
    AmplitudeNotOnStep { amplitude_ua: u32 },
    AmplitudeOutOfRange { amplitude_ua: u32 },
    /// A session must open by calibrating the centre region.
    CentreRegionNotFirst,
    EmptySession,
    InvalidScale,
}

impl core::fmt::Display for CalibrationError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CalibrationError::RegionOutOfRange { region } => {
                write!(f, "region {region} out of range (0..{CALIBRATION_REGIONS})")
            }
            CalibrationError::AmplitudeNotOnStep { amplitude_ua } => {
                write!(f, "amplitude {amplitude_ua} uA is not a multiple of {AMPLITUDE_STEP_UA}")
            }
            CalibrationError::AmplitudeOutOfRange { amplitude_ua } => {
                write!(f, "amplitude {amplitude_ua} uA exceeds {AMPLITUDE_MAX_UA}")
            }
            CalibrationError::CentreRegionNotFirst => {
                write!(f, "calibration must start with the centre region ({CENTER_REGION})")
            }
            CalibrationError::EmptySession => write!(f, "calibration session has no steps"),
            CalibrationError::InvalidScale => write!(f, "global scale must be finite and >= 0"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CalibrationError {}

/// One operator adjustment: a region set to an amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CalibrationStep {
    pub region: u8,
    pub amplitude_ua: u32,
}

/// Replay a calibration session into a profile.
///
/// The first step must target the centre region — it anchors the
/// operator's reference sensation before the outer regions are matched
/// against it. Later steps for the same region override earlier ones;
/// regions never visited keep the default amplitude.
pub fn run_calibration_session(
    steps: &[CalibrationStep],
) -> Result<CalibrationProfile, CalibrationError> {
    let first = steps.first().ok_or(CalibrationError::EmptySession)?;
    if first.region as usize != CENTER_REGION {
        return Err(CalibrationError::CentreRegionNotFirst);
    }
    let mut profile = CalibrationProfile::default();
    for step in steps {
        if step.region as usize >= CALIBRATION_REGIONS {
            return Err(CalibrationError::RegionOutOfRange { region: step.region });
        }
        if step.amplitude_ua > AMPLITUDE_MAX_UA {
            return Err(CalibrationError::AmplitudeOutOfRange {
                amplitude_ua: step.amplitude_ua,
            });
        }
        if step.amplitude_ua % AMPLITUDE_STEP_UA != 0 {
            return Err(CalibrationError::AmplitudeNotOnStep {
                amplitude_ua: step.amplitude_ua,
            });
        }
        profile.region_amplitude_ua[step.region as usize] = step.amplitude_ua;
    }
    Ok(profile)
}

/// One pulse inside a stimulation cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PulseEvent {
    pub electrode: u8,
    pub start_us: u32,
    pub width_us: u32,
    pub amplitude_ua: u32,
}

impl PulseEvent {
    pub fn end_us(&self) -> u32 {
        self.start_us + self.width_us
    }
}

/// A compiled stimulation cycle: non-overlapping pulses in time order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StimulationSchedule {
    pub events: Vec<PulseEvent>,
}

impl StimulationSchedule {
    pub fn cycle_period_us(&self) -> u32 {
        CYCLE_PERIOD_US
    }

    /// Check sequencing invariants: time order, the discharge gap
    /// between consecutive pulses, and containment in one cycle.
    pub fn validate(&self) -> bool {
        let mut prev_end: Option<u32> = None;
        for e in &self.events {
            if e.end_us() > CYCLE_PERIOD_US || e.amplitude_ua > AMPLITUDE_MAX_UA {
                return false;
            }
            if let Some(end) = prev_end {
                if e.start_us < end + DISCHARGE_GAP_US {
                    return false;
                }
            }
            prev_end = Some(e.end_us());
        }
        true
    }
}

/// How electrodes map to time slots within the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompileMode {
    /// Active electrodes pack into consecutive slots from the cycle
    /// start; inactive ones consume no time.
    #[default]
    SkipInactive,
    /// Every electrode owns the slot matching its id, active or not, so
    /// a given electrode always fires at the same cycle offset.
    FixedSlots,
}

/// Compile a synthesized frame into one stimulation cycle.
///
/// Slots are `SLOT_PERIOD_US` apart, which keeps the discharge gap
/// exactly between back-to-back pulses; even all 32 electrodes fit in a
/// cycle with room to spare.
pub fn compile_schedule(
    frame: &PatternFrame,
    calibration: &CalibrationProfile,
    mode: CompileMode,
) -> Result<StimulationSchedule, CalibrationError> {
    calibration.validate()?;
    let activation = frame.activation();
    let mut events = Vec::new();
    let mut next_slot = 0u32;
    for (id, &on) in activation.iter().enumerate() {
        if !on {
            continue;
        }
        let slot = match mode {
            CompileMode::SkipInactive => {
                let s = next_slot;
                next_slot += 1;
                s
            }
            CompileMode::FixedSlots => id as u32,
        };
        let region = region_of_electrode(id as u8).expect("activation index is a valid electrode");
        events.push(PulseEvent {
            electrode: id as u8,
            start_us: slot * SLOT_PERIOD_US,
            width_us: PULSE_WIDTH_US,
            amplitude_ua: calibration.effective_amplitude_ua(region),
        });
    }
    debug_assert!(events.len() <= ACTIVE_ELECTRODES);
    Ok(StimulationSchedule { events })
}

/// CRC-8, polynomial 0x07, initial value 0, most significant bit first.
pub fn crc8(data: &[u8]) -> u8 {
    let mut crc = 0u8;
    for &byte in data {
        crc ^= byte;
        for _ in 0..8 {
            crc = if crc & 0x80 != 0 { (crc << 1) ^ 0x07 } else { crc << 1 };
        }
    }
    crc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireError {
    /// Amplitude exceeds what one wire byte can carry.
    AmplitudeOverflow { electrode: u8, amplitude_ua: u32 },
    BadLength { got: usize },
    BadSync { got: u8 },
    BadCrc { expected: u8, got: u8 },
}

impl core::fmt::Display for WireError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            WireError::AmplitudeOverflow { electrode, amplitude_ua } => {
                write!(f, "electrode {electrode}: amplitude {amplitude_ua} uA exceeds the wire range")
            }
            WireError::BadLength { got } => {
                write!(f, "frame length {got}, expected {FRAME_LEN}")
            }
            WireError::BadSync { got } => {
                write!(f, "sync byte {got:#04x}, expected {SYNC_BYTE:#04x}")
            }
            WireError::BadCrc { expected, got } => {
                write!(f, "crc {got:#04x}, expected {expected:#04x}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WireError {}

/// Pack per-electrode amplitudes into a device frame: sync byte,
/// sequence number, 32 amplitude bytes at 40 uA per count, CRC-8 over
/// everything before it.
pub fn encode_frame(
    amplitudes_ua: &[u32; ACTIVE_ELECTRODES],
    sequence: u8,
) -> Result<[u8; FRAME_LEN], WireError> {
    let mut frame = [0u8; FRAME_LEN];
    frame[0] = SYNC_BYTE;
    frame[1] = sequence;
    for (i, &a) in amplitudes_ua.iter().enumerate() {
        if a > AMPLITUDE_MAX_UA {
            return Err(WireError::AmplitudeOverflow { electrode: i as u8, amplitude_ua: a });
        }
        frame[2 + i] = (a / WIRE_AMPLITUDE_STEP_UA) as u8;
    }
    frame[FRAME_LEN - 1] = crc8(&frame[..FRAME_LEN - 1]);
    Ok(frame)
}

/// Amplitudes recovered from a device frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedFrame {
    pub sequence: u8,
    pub amplitudes_ua: [u32; ACTIVE_ELECTRODES],
}

/// Decode and verify a device frame. Amplitudes come back quantized to
/// the wire step, so a round trip may read up to one wire step below
/// what was sent.
pub fn decode_frame(bytes: &[u8]) -> Result<DecodedFrame, WireError> {
    if bytes.len() != FRAME_LEN {
        return Err(WireError::BadLength { got: bytes.len() });
    }
    if bytes[0] != SYNC_BYTE {
        return Err(WireError::BadSync { got: bytes[0] });
    }
    let expected = crc8(&bytes[..FRAME_LEN - 1]);
    if bytes[FRAME_LEN - 1] != expected {
        return Err(WireError::BadCrc { expected, got: bytes[FRAME_LEN - 1] });
    }
    let mut amplitudes_ua = [0u32; ACTIVE_ELECTRODES];
    for (i, a) in amplitudes_ua.iter_mut().enumerate() {
        *a = bytes[2 + i] as u32 * WIRE_AMPLITUDE_STEP_UA;
    }
    Ok(DecodedFrame { sequence: bytes[1], amplitudes_ua })
}

/// Per-electrode amplitudes of a compiled schedule, for framing.
pub fn schedule_amplitudes(schedule: &StimulationSchedule) -> [u32; ACTIVE_ELECTRODES] {
    let mut amps = [0u32; ACTIVE_ELECTRODES];
    for e in &schedule.events {
        amps[e.electrode as usize] = e.amplitude_ua;
    }
    amps
}

/// Bounded FIFO between synthesis and the output stage. When full, the
/// oldest entry is dropped to make room — fresher frames win.
#[derive(Debug, Clone)]
pub struct FrameQueue<T> {
    items: VecDeque<T>,
    capacity: usize,
}

impl<T> FrameQueue<T> {
    pub fn new(capacity: usize) -> FrameQueue<T> {
        FrameQueue { items: VecDeque::with_capacity(capacity.max(1)), capacity: capacity.max(1) }
    }

    /// Enqueue, returning the dropped oldest entry if the queue was full.
    pub fn push(&mut self, item: T) -> Option<T> {
        let dropped =
            if self.items.len() == self.capacity { self.items.pop_front() } else { None };
        self.items.push_back(item);
        dropped
    }

    pub fn pop(&mut self) -> Option<T> {
        self.items.pop_front()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

impl<T> Default for FrameQueue<T> {
    fn default() -> Self {
        FrameQueue::new(QUEUE_DEPTH)
    }
}
