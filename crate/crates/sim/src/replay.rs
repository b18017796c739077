//! Offline replay: drive the full pipeline over a recorded pose trace.
//!
//! Each tick samples the trace, queries the scene for the contact,
//! updates the kinematics estimate and the interaction state machine,
//! advances the pattern clocks, synthesizes one frame per motion
//! substep, and compiles every queued frame into a stimulation
//! schedule. The tick loop also keeps per-tick timing so a run can be
//! checked against the realtime budget.

use std::time::Instant;

use tactile_core::context::{
    contact_orientation, step_fsm, InteractionState, KinematicsEstimator, Mode,
};
use tactile_core::geometry::{query_contact, Feature, SceneModel};
use tactile_core::patterns::{synthesize, PatternFrame};
use tactile_core::stimulus::{compile_schedule, CalibrationProfile, FrameQueue};
use tactile_core::Vec3;

use crate::error::{Result, SimError};
use crate::formats::config::SimConfig;
use crate::formats::logs::{append_schedule_csv, FrameRecord, SCHEDULE_HEADER};
use crate::formats::trace::Trace;

/// Per-tick replay record.
#[derive(Debug, Clone)]
pub struct TickReport {
    pub tick: u64,
    pub t: f64,
    pub mode: Mode,
    /// Feature rendered this tick (absent while idle).
    pub feature: Option<Feature>,
    /// Ring radius rendered this tick (after clamping).
    pub ring: u32,
    /// Cumulative texture shift count at the end of the tick.
    pub shift_count: u32,
    pub frames_emitted: u32,
    pub events_scheduled: u32,
    /// Pipeline work only: contact query through schedule compilation.
    pub compute_us: u64,
    /// Whole tick including log formatting.
    pub total_us: u64,
}

/// Everything a replay produces.
#[derive(Debug)]
pub struct ReplayOutput {
    pub ticks: Vec<TickReport>,
    pub records: Vec<FrameRecord>,
    /// CSV of every compiled stimulation cycle.
    pub schedule_csv: String,
    pub summary: Vec<(String, String)>,
}

fn percentile_us(sorted: &[u64], pct: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (pct / 100.0 * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Run the pipeline over `trace` against `scene`.
pub fn run_replay(
    scene: &SceneModel,
    trace: &Trace,
    config: &SimConfig,
    calibration: &CalibrationProfile,
) -> Result<ReplayOutput> {
    let mut calibration = calibration.clone();
    calibration.global_scale *= config.global_scale;
    calibration
        .validate()
        .map_err(|e| SimError::Validation(format!("calibration: {e}")))?;

    let rate = config.replay.rate_hz;
    let start = trace.start_time();
    // Every multiple of the tick period inside the trace, both ends
    // inclusive.
    let tick_count = (trace.duration() * rate + 1e-9).floor() as u64 + 1;

    let mut estimator = KinematicsEstimator::new(config.context.smoothing_lambda);
    let mut state = InteractionState::new();
    let mut queue: FrameQueue<(PatternFrame, FrameRecord)> =
        FrameQueue::new(config.replay.queue_depth);
    let compile_mode = config.compile_mode();

    let mut ticks = Vec::with_capacity(tick_count as usize);
    let mut records = Vec::new();
    let mut schedule_csv = String::from(SCHEDULE_HEADER);
    schedule_csv.push('\n');
    let mut cycle = 0u64;
    let mut dropped_frames = 0u64;
    let mut shift_events = 0u64;
    let mut prev_position: Option<Vec3> = None;
    let mut prev_shift_count = 0u32;

    for tick in 0..tick_count {
        let tick_start = Instant::now();
        let t = start + tick as f64 / rate;
        let pose = trace.sample(t);

        let compute_start = Instant::now();
        let contact = query_contact(scene, pose.position, &pose.basis());
        let kin = estimator
            .update(&pose, &contact)
            .map_err(|e| SimError::Pipeline(format!("tick {tick}: {e}")))?;
        let orientation = contact_orientation(&pose, &contact).ok();
        state = step_fsm(&state, &contact, &kin, orientation, &config.context);

        // Subdivide fast motion so scrolling cannot skip cells.
        let travel = prev_position.map_or(0.0, |p| (pose.position - p).norm());
        let substeps = if state.mode == Mode::Idle {
            1
        } else {
            ((travel / config.replay.substep_mm).ceil() as u32).max(1)
        };

        let rendered_feature = match state.mode {
            Mode::Idle => None,
            Mode::Approaching => Some(contact.feature),
            Mode::Interacting => state.stable_feature.map(|s| s.feature),
        };

        for _ in 0..substeps {
            let sub_dt = kin.dt / substeps as f64;
            if state.mode == Mode::Approaching {
                state.pattern_clock.advance_approach(kin.v_approach, sub_dt, &config.synthesis);
            }
            if state.mode != Mode::Idle {
                state.pattern_clock.advance_texture(kin.v_slide, sub_dt, contact.k_texture);
            }
            let frame = synthesize(&state, &contact, &kin, &config.synthesis)
                .map_err(|e| SimError::Pipeline(format!("tick {tick}: {e}")))?;
            let record = FrameRecord {
                tick,
                mode: state.mode,
                feature: rendered_feature,
                ring: state.pattern_clock.ring_index().min(config.synthesis.max_ring_radius),
                shift_count: state.pattern_clock.shift_count(),
                grid: frame.grid_string(),
            };
            if queue.push((frame, record)).is_some() {
                dropped_frames += 1;
            }
        }

        let mut frames_emitted = 0u32;
        let mut events_scheduled = 0u32;
        let mut compiled = Vec::new();
        while let Some((frame, record)) = queue.pop() {
            let schedule = compile_schedule(&frame, &calibration, compile_mode)
                .map_err(|e| SimError::Pipeline(format!("tick {tick}: {e}")))?;
            frames_emitted += 1;
            events_scheduled += schedule.events.len() as u32;
            compiled.push((schedule, record));
        }
        let compute_us = compute_start.elapsed().as_micros() as u64;

        for (schedule, record) in compiled {
            append_schedule_csv(&mut schedule_csv, cycle, &schedule);
            cycle += 1;
            records.push(record);
        }

        let shift_now = state.pattern_clock.shift_count();
        shift_events += shift_now.saturating_sub(prev_shift_count) as u64;
        prev_shift_count = shift_now;
        prev_position = Some(pose.position);

        ticks.push(TickReport {
            tick,
            t,
            mode: state.mode,
            feature: rendered_feature,
            ring: state.pattern_clock.ring_index().min(config.synthesis.max_ring_radius),
            shift_count: shift_now,
            frames_emitted,
            events_scheduled,
            compute_us,
            total_us: tick_start.elapsed().as_micros() as u64,
        });
    }

    let summary = summarize(&ticks, dropped_frames, shift_events, config.replay.budget_us);
    Ok(ReplayOutput { ticks, records, schedule_csv, summary })
}

fn summarize(
    ticks: &[TickReport],
    dropped_frames: u64,
    shift_events: u64,
    budget_us: u64,
) -> Vec<(String, String)> {
    let mut compute: Vec<u64> = ticks.iter().map(|t| t.compute_us).collect();
    let mut total: Vec<u64> = ticks.iter().map(|t| t.total_us).collect();
    compute.sort_unstable();
    total.sort_unstable();
    let frames: u64 = ticks.iter().map(|t| t.frames_emitted as u64).sum();
    let events: u64 = ticks.iter().map(|t| t.events_scheduled as u64).sum();
    let count_mode = |m: Mode| ticks.iter().filter(|t| t.mode == m).count().to_string();
    vec![
        ("ticks".to_string(), ticks.len().to_string()),
        ("frames".to_string(), frames.to_string()),
        ("frames_dropped".to_string(), dropped_frames.to_string()),
        ("events_scheduled".to_string(), events.to_string()),
        ("shift_events".to_string(), shift_events.to_string()),
        ("idle_ticks".to_string(), count_mode(Mode::Idle)),
        ("approaching_ticks".to_string(), count_mode(Mode::Approaching)),
        ("interacting_ticks".to_string(), count_mode(Mode::Interacting)),
        ("compute_us_p50".to_string(), percentile_us(&compute, 50.0).to_string()),
        ("compute_us_p95".to_string(), percentile_us(&compute, 95.0).to_string()),
        ("compute_us_max".to_string(), compute.last().copied().unwrap_or(0).to_string()),
        ("total_us_p50".to_string(), percentile_us(&total, 50.0).to_string()),
        ("total_us_p95".to_string(), percentile_us(&total, 95.0).to_string()),
        ("total_us_max".to_string(), total.last().copied().unwrap_or(0).to_string()),
        ("budget_us".to_string(), budget_us.to_string()),
        (
            "budget_violations".to_string(),
            ticks.iter().filter(|t| t.total_us > budget_us).count().to_string(),
        ),
    ]
}
