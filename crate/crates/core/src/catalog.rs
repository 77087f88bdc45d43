//! Reference instances of every built-in family with the box on which each
//! is validated.

use crate::functions::{
    make_affine, make_ball, make_linear_fractional, make_monotone_composition, make_paper_floor,
    make_sqrt_abs_shift, floor_example,
};
use crate::oracle::{Holder, QcOracle};
use crate::point::Point;
use crate::verify::SampleRegion;

pub struct CatalogEntry {
    pub name: &'static str,
    pub oracle: QcOracle,
    pub region: SampleRegion,
}

fn pt(c: &[f64]) -> Point {
    Point::from_slice(c).expect("finite literal")
}

fn boxed(lo: &[f64], hi: &[f64], samples: usize, seed: u64) -> SampleRegion {
    SampleRegion::new(pt(lo), pt(hi), samples, seed).expect("valid literal box")
}

/// One oracle per family:
///
/// - affine `x₁ − 2` on `[−5, 5]²`
/// - unit ball on `[−3, 3]²`
/// - `(x₁ − 2)/(x₂ + 1)` with `L = 6` on `[−3, 6] × [0, 4]` (the largest
///   gradient norm there is √26 ≈ 5.1)
/// - `√|x| − 1` on `[−10, 10]`
/// - the floor example on `[−5, 5]`
/// - `φ(x₁ + x₂)` with `φ` the floor example, `L = √2`, on `[−3, 3]²`
pub fn builtin_suite(samples: usize, seed: u64) -> Vec<CatalogEntry> {
    let floor_of_sum = make_monotone_composition(
        2,
        |x| x[0] + x[1],
        |_| vec![1.0, 1.0],
        floor_example,
        Holder::lipschitz(std::f64::consts::SQRT_2).expect("positive"),
    )
    .with_label("monotone_composition");
    vec![
        CatalogEntry {
            name: "affine",
            oracle: make_affine(pt(&[1.0, 0.0]), -2.0).expect("nonzero slope"),
            region: boxed(&[-5.0, -5.0], &[5.0, 5.0], samples, seed),
        },
        CatalogEntry {
            name: "ball",
            oracle: make_ball(pt(&[0.0, 0.0]), 1.0).expect("positive radius"),
            region: boxed(&[-3.0, -3.0], &[3.0, 3.0], samples, seed),
        },
        CatalogEntry {
            name: "linear_fractional",
            oracle: make_linear_fractional(
                pt(&[1.0, 0.0]),
                -2.0,
                pt(&[0.0, 1.0]),
                1.0,
                Holder::lipschitz(6.0).expect("positive"),
            )
            .expect("nonzero denominator"),
            region: boxed(&[-3.0, 0.0], &[6.0, 4.0], samples, seed),
        },
        CatalogEntry {
            name: "sqrt_abs_shift",
            oracle: make_sqrt_abs_shift(1.0).expect("positive shift"),
            region: boxed(&[-10.0], &[10.0], samples, seed),
        },
        CatalogEntry {
            name: "paper_floor",
            oracle: make_paper_floor(),
            region: boxed(&[-5.0], &[5.0], samples, seed),
        },
        CatalogEntry {
            name: "monotone_composition",
            oracle: floor_of_sum,
            region: boxed(&[-3.0, -3.0], &[3.0, 3.0], samples, seed),
        },
    ]
}
