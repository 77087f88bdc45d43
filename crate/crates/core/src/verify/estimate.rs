use serde::Serialize;

use super::{SampleRegion, VerifyError};
use crate::oracle::QcOracle;
use crate::point::Point;

/// Safety factor applied to the empirical Hölder modulus.
pub const HOLDER_SAFETY: f64 = 1.1;

/// Empirical Hölder data for an oracle on a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderEstimate {
    /// Inflated empirical modulus.
    pub modulus: f64,
    pub order: f64,
    /// All sampled quotients were zero; `modulus` is 0 and unusable.
    pub degenerate: bool,
}

/// Estimates `(L, δ)` from `|f(x) − f(q)| / ‖x − q‖^δ` over sampled pairs
/// with `q` feasible. For each candidate order the empirical maximum is
/// taken; the order with the smallest maximum wins and its maximum,
/// multiplied by [`HOLDER_SAFETY`], is the modulus.
pub fn estimate_holder(
    f: &QcOracle,
    region: &SampleRegion,
    delta_grid: &[f64],
) -> Result<HolderEstimate, VerifyError> {
    if delta_grid.is_empty() || delta_grid.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(VerifyError::InvalidDeltaGrid);
    }
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let feasible = region.pool(f, &mut rng, |v| v <= 0.0);
    if feasible.is_empty() {
        return Err(VerifyError::NoFeasibleSamples);
    }
    let mut pairs = Vec::with_capacity(region.sample_count());
    for i in 0..region.sample_count() {
        let (q, fq) = &feasible[i % feasible.len()];
        let x = region.uniform(&mut rng);
        let dist = x.distance(q);
        if dist == 0.0 {
            continue;
        }
        if let Ok(fx) = f.evaluate(&x) {
            pairs.push(((fx - fq).abs(), dist));
        }
    }
    let (order, sup) = delta_grid
        .iter()
        .map(|&delta| {
            let sup = pairs
                .iter()
                .map(|(df, d)| df / d.powf(delta))
                .fold(0.0_f64, f64::max);
            (delta, sup)
        })
        .fold((f64::NAN, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        });
    Ok(HolderEstimate {
        modulus: HOLDER_SAFETY * sup,
        order,
        degenerate: sup == 0.0,
    })
}

/// Points per axis of the distance grid: the largest `k` with
/// `k^dim ≤ sample_count`.
fn per_axis(region: &SampleRegion) -> usize {
    let dim = region.dim() as u32;
    let mut k = 1usize;
    while (k + 1)
        .checked_pow(dim)
        .is_some_and(|n| n <= region.sample_count())
    {
        k += 1;
    }
    k
}

/// Largest grid spacing used by [`dist_to_sublevel`] on this region.
pub fn grid_resolution(region: &SampleRegion) -> f64 {
    let k = per_axis(region);
    if k < 2 {
        return region.lower().distance(region.upper());
    }
    region
        .lower()
        .coords()
        .iter()
        .zip(region.upper().coords())
        .map(|(l, u)| (u - l) / (k - 1) as f64)
        .fold(0.0, f64::max)
}

/// Brute-force `dist(x, {f ≤ 0} ∩ region)` over a uniform grid of about
/// `sample_count` points. The result is an upper bound on the true distance
/// to the sublevel set; grids with `(k − 1) | (k' − 1)` nest, so refining
/// that way never increases it.
pub fn dist_to_sublevel(f: &QcOracle, x: &Point, region: &SampleRegion) -> Result<f64, VerifyError> {
    region.ensure_matches(f)?;
    x.ensure_dim(region.dim())?;
    let k = per_axis(region);
    let (lo, hi) = (region.lower().coords(), region.upper().coords());
    let coord = |axis: usize, j: usize| {
        if k == 1 {
            lo[axis]
        } else {
            lo[axis] + (hi[axis] - lo[axis]) * (j as f64 / (k - 1) as f64)
        }
    };
    let mut index = vec![0usize; region.dim()];
    let mut best = f64::INFINITY;
    loop {
        let q = Point::new(index.iter().enumerate().map(|(a, &j)| coord(a, j)).collect())?;
        if f.accepts(&q) && f.evaluate(&q).is_ok_and(|v| v <= 0.0) {
            best = best.min(x.distance(&q));
        }
        let Some(axis) = index.iter().position(|&j| j + 1 < k) else {
            break;
        };
        index[axis] += 1;
        index[..axis].iter_mut().for_each(|j| *j = 0);
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(VerifyError::NoFeasibleSamples)
    }
}
