//! Reference point ensembles and matrices for the two degree-2 examples.
#![allow(dead_code)]

use monogenic::sphere_quad::SpherePoint;

pub const HARMONIC_POINTS: [[f64; 3]; 5] = [
    [-0.9578, 0.1971, 0.2092],
    [0.5136, -0.7161, 0.4726],
    [0.2730, -0.7662, -0.5817],
    [-0.6364, -0.2018, -0.7445],
    [0.2471, 0.1207, -0.9614],
];

pub const HARMONIC_A: [[f64; 5]; 5] = [
    [0.4830, 0.0473, 0.0473, 0.0786, 0.0786],
    [0.0473, 0.4830, 0.0786, 0.0473, 0.0786],
    [0.0473, 0.0786, 0.4830, 0.0786, 0.0473],
    [0.0786, 0.0473, 0.0786, 0.4830, 0.0473],
    [0.0786, 0.0786, 0.0473, 0.0473, 0.4830],
];

pub const HARMONIC_OBJECTIVE: f64 = 0.3209;

pub const MONOGENIC_POINTS: [[f64; 3]; 3] = [[0.4407, -0.1155, 0.8902], [-0.3322, -0.7521, 0.5692], [0.5407, -0.2516, -0.8027]];

pub const MONOGENIC_A11: f64 = 0.9123;
pub const MONOGENIC_OBJECTIVE: f64 = 5.3999;
pub const MONOGENIC_DEVIATION: f64 = 0.8409;

/// Points are given to four digits; normalized on load.
pub fn points(raw: &[[f64; 3]]) -> Vec<SpherePoint<f64>> {
    raw.iter().map(|&v| SpherePoint::from_cartesian(v).unwrap()).collect()
}
