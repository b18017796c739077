//! Dense sweeps of the three circular quantizers against independent
//! nearest-centre oracles.
//!
//! Each oracle measures the circular distance to every bin centre and
//! picks the closest, breaking exact ties towards the bin whose centre
//! lies below the input — the same downward convention the quantizers
//! promise. The sweeps cross every boundary several times from both
//! sides.

use tactile_core::context::{quantize_direction_deg, quantize_orientation, OrientationLevel};
use tactile_core::geometry::{quantize_edge_angle_deg, EdgeOrientation};

/// Nearest centre on a circle of the given period, ties downward.
fn nearest_centre(value: f64, centres: &[f64], period: f64) -> usize {
    let v = value.rem_euclid(period);
    let mut best = 0usize;
    let mut best_dist = f64::INFINITY;
    let mut best_forward = f64::INFINITY;
    for (i, &c) in centres.iter().enumerate() {
        let diff = (v - c).rem_euclid(period);
        let dist = diff.min(period - diff);
        // `diff` is how far the input sits above this centre going
        // forward around the circle; the downward tie-break prefers the
        // centre the input is ahead of.
        if dist < best_dist - 1e-12
            || ((dist - best_dist).abs() <= 1e-12 && diff < best_forward)
        {
            best = i;
            best_dist = dist;
            best_forward = diff;
        }
    }
    best
}

#[test]
fn edge_orientation_sweep_matches_the_nearest_centre_oracle() {
    let centres = [0.0, 45.0, 90.0, 135.0];
    let mut i = 0;
    let mut angle = -180.0;
    while angle <= 360.0 {
        let got = quantize_edge_angle_deg(angle);
        let expected = EdgeOrientation::ALL[nearest_centre(angle, &centres, 180.0)];
        assert_eq!(got, expected, "angle {angle}");
        i += 1;
        angle = -180.0 + i as f64 * 0.25;
    }
}

#[test]
fn edge_orientation_boundaries_round_down() {
    assert_eq!(quantize_edge_angle_deg(22.5), EdgeOrientation::H);
    assert_eq!(quantize_edge_angle_deg(67.5), EdgeOrientation::D1);
    assert_eq!(quantize_edge_angle_deg(112.5), EdgeOrientation::V);
    assert_eq!(quantize_edge_angle_deg(157.5), EdgeOrientation::D2);
    // And just past each boundary the next bin takes over.
    assert_eq!(quantize_edge_angle_deg(22.5001), EdgeOrientation::D1);
    assert_eq!(quantize_edge_angle_deg(157.5001), EdgeOrientation::H);
}

#[test]
fn direction_sweep_matches_the_nearest_centre_oracle() {
    let centres: Vec<f64> = (0..8).map(|i| 45.0 * i as f64).collect();
    let mut i = 0;
    let mut az = -360.0;
    while az <= 720.0 {
        let got = quantize_direction_deg(az);
        let expected = nearest_centre(az, &centres, 360.0);
        assert_eq!(got.index(), expected, "azimuth {az}");
        i += 1;
        az = -360.0 + i as f64 * 0.25;
    }
}

#[test]
fn orientation_sweep_matches_an_interval_oracle() {
    // Levels partition [-90, 90] into four fixed intervals; unlike the
    // circular quantizers the angle axis does not wrap.
    let oracle = |theta: f64| {
        if theta < -30.0 {
            OrientationLevel::SteepLeft
        } else if theta < 0.0 {
            OrientationLevel::ShallowLeft
        } else if theta < 30.0 {
            OrientationLevel::ShallowRight
        } else {
            OrientationLevel::SteepRight
        }
    };
    for i in -900..=900 {
        let theta = i as f64 / 10.0;
        assert_eq!(quantize_orientation(theta), Ok(oracle(theta)), "theta {theta}");
    }
}
