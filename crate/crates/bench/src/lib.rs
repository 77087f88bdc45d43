//! Shared fixtures for the criterion benches.

use qfp_core::{make_affine, make_ball, FeasibilityProblem, Point};

/// Unit disc intersected with `x₁ ≤ 0`.
pub fn disc_and_halfplane() -> FeasibilityProblem {
    FeasibilityProblem::new(vec![
        make_ball(Point::zeros(2).expect("dim 2"), 1.0).expect("positive radius"),
        make_affine(Point::from_slice(&[1.0, 0.0]).expect("finite"), 0.0).expect("nonzero"),
    ])
    .expect("same dimension")
}

/// `m` balls in ℝⁿ whose centers sit on a small circle around the origin,
/// all containing the origin.
pub fn ball_ring(n: usize, m: usize) -> FeasibilityProblem {
    let functions = (0..m)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / m as f64;
            let mut c = vec![0.0; n];
            c[0] = 0.5 * angle.cos();
            if n > 1 {
                c[1] = 0.5 * angle.sin();
            }
            make_ball(Point::new(c).expect("finite"), 1.0).expect("positive radius")
        })
        .collect();
    FeasibilityProblem::new(functions).expect("same dimension")
}
