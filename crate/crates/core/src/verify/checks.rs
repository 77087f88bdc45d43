use rand::Rng;

use super::{SampleRegion, Tally, ValidationReport, VerifyError};
use crate::error::QcError;
use crate::oracle::{FeasibilityProblem, QcOracle};
use crate::solver::compose_operator;
use crate::point::Point;
use crate::projection::positive_part;

fn axpby(lambda: f64, x: &Point, y: &Point) -> Point {
    let coords = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
        .collect();
    Point::new(coords).expect("convex combination of finite points")
}

fn unit(g: &Point) -> Point {
    let n = g.norm();
    Point::new(g.coords().iter().map(|c| c / n).collect()).expect("nonzero finite vector")
}

/// `f(λx + (1−λ)y) ≤ max(f(x), f(y))` on random triples. Points outside the
/// domain are skipped.
pub fn check_quasiconvex(f: &QcOracle, region: &SampleRegion, tol: f64) -> Result<ValidationReport, VerifyError> {
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let mut tally = Tally::new("quasiconvex", f, tol);
    for _ in 0..region.sample_count() {
        let x = region.uniform(&mut rng);
        let y = region.uniform(&mut rng);
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let z = axpby(lambda, &x, &y);
        match (f.evaluate(&x), f.evaluate(&y), f.evaluate(&z)) {
            (Ok(fx), Ok(fy), Ok(fz)) => tally.record(fz - fx.max(fy), &[&x, &y, &z]),
            _ => tally.skip(),
        }
    }
    Ok(tally.finish())
}

/// `⟨g/‖g‖, y − x⟩ ≤ 0` for infeasible `x`, `g` its selected star
/// subgradient, and `y` with `f(y) < f(x)`. A zero subgradient at an
/// infeasible point is a violation.
pub fn check_star_inequality(f: &QcOracle, region: &SampleRegion, tol: f64) -> Result<ValidationReport, VerifyError> {
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let mut tally = Tally::new("star_inequality", f, tol);
    let xs = region.pool(f, &mut rng, |v| v > 0.0);
    if xs.is_empty() {
        tally.mark_vacuous();
    }
    for (x, fx) in &xs {
        let g = match f.star_subgradient(x) {
            Ok(g) => unit(&g),
            Err(_) => {
                tally.record_with(f64::INFINITY, true, &[x]);
                continue;
            }
        };
        let lower = (0..super::REJECTION_FACTOR)
            .map(|_| region.uniform(&mut rng))
            .find(|y| f.accepts(y) && f.evaluate(y).is_ok_and(|fy| fy < *fx));
        match lower {
            Some(y) => tally.record(g.dot(&y.sub(x)), &[x, &y]),
            None => tally.skip(),
        }
    }
    Ok(tally.finish())
}

/// `|f(x) − f(q)| ≤ L‖x − q‖^δ` for feasible `q` and arbitrary `x`, using
/// the oracle's own `(L, δ)`.
pub fn check_sholder(f: &QcOracle, region: &SampleRegion, tol: f64) -> Result<ValidationReport, VerifyError> {
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let mut tally = Tally::new("sholder", f, tol);
    let feasible = region.pool(f, &mut rng, |v| v <= 0.0);
    if feasible.is_empty() {
        tally.mark_vacuous();
        return Ok(tally.finish());
    }
    let h = f.holder();
    for i in 0..region.sample_count() {
        let (q, fq) = &feasible[i % feasible.len()];
        let x = region.uniform(&mut rng);
        match f.evaluate(&x) {
            Ok(fx) => {
                let bound = h.modulus() * x.distance(q).powf(h.order());
                tally.record((fx - fq).abs() - bound, &[&x, q]);
            }
            Err(_) => tally.skip(),
        }
    }
    Ok(tally.finish())
}

/// `f₊(x) ≤ L⟨c/‖c‖, x − q⟩^δ` for infeasible `x`, nonzero star subgradient
/// `c` at `x`, and feasible `q`. A non-positive inner product is always a
/// violation, whatever the tolerance.
pub fn check_konnov(f: &QcOracle, region: &SampleRegion, tol: f64) -> Result<ValidationReport, VerifyError> {
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let mut tally = Tally::new("konnov", f, tol);
    let feasible = region.pool(f, &mut rng, |v| v <= 0.0);
    let infeasible = region.pool(f, &mut rng, |v| v > 0.0);
    if feasible.is_empty() || infeasible.is_empty() {
        tally.mark_vacuous();
        return Ok(tally.finish());
    }
    let h = f.holder();
    for i in 0..region.sample_count() {
        let (x, fx) = &infeasible[i % infeasible.len()];
        let (q, _) = &feasible[rng.gen_range(0..feasible.len())];
        let c = match f.star_subgradient(x) {
            Ok(c) => unit(&c),
            Err(_) => {
                tally.record_with(f64::INFINITY, true, &[x, q]);
                continue;
            }
        };
        let t = c.dot(&x.sub(q));
        let lhs = positive_part(*fx);
        if t <= 0.0 {
            tally.record_with(lhs, true, &[x, q]);
        } else {
            tally.record(lhs - h.modulus() * t.powf(h.order()), &[x, q]);
        }
    }
    Ok(tally.finish())
}

fn projection_pairs(
    f: &QcOracle,
    region: &SampleRegion,
    tol: f64,
    property: &'static str,
    excess: impl Fn(&Point, &Point, &Point) -> f64,
) -> Result<ValidationReport, VerifyError> {
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let mut tally = Tally::new(property, f, tol);
    let feasible = region.pool(f, &mut rng, |v| v <= 0.0);
    if feasible.is_empty() {
        tally.mark_vacuous();
        return Ok(tally.finish());
    }
    for i in 0..region.sample_count() {
        let (y, _) = &feasible[i % feasible.len()];
        let x = region.uniform(&mut rng);
        if !f.accepts(&x) {
            tally.skip();
            continue;
        }
        match f.project(&x) {
            Ok(px) => tally.record(excess(&x, &px, y), &[&x, y]),
            Err(_) => tally.record_with(f64::INFINITY, true, &[&x, y]),
        }
    }
    Ok(tally.finish())
}

/// Cutter inequality `⟨Px − x, Px − y⟩ ≤ 0` for feasible `y`.
pub fn check_cutter(f: &QcOracle, region: &SampleRegion, tol: f64) -> Result<ValidationReport, VerifyError> {
    projection_pairs(f, region, tol, "cutter", |x, px, y| px.sub(x).dot(&px.sub(y)))
}

/// Strong quasi-nonexpansiveness with constant 1:
/// `‖Px − y‖² ≤ ‖x − y‖² − ‖Px − x‖²` for feasible `y`.
pub fn check_sqne(f: &QcOracle, region: &SampleRegion, tol: f64) -> Result<ValidationReport, VerifyError> {
    projection_pairs(f, region, tol, "sqne", |x, px, y| {
        let sq = |a: &Point, b: &Point| {
            let d = a.sub(b);
            d.dot(&d)
        };
        sq(px, y) - sq(x, y) + sq(px, x)
    })
}

/// `P(x) == x` exactly if and only if `f(x) ≤ 0`. Tolerance-free; each
/// mismatch is a violation of size 1.
pub fn check_fixed_point_identity(f: &QcOracle, region: &SampleRegion) -> Result<ValidationReport, VerifyError> {
    region.ensure_matches(f)?;
    let mut rng = region.rng();
    let mut tally = Tally::new("fixed_point_identity", f, 0.0);
    for _ in 0..region.sample_count() {
        let x = region.uniform(&mut rng);
        if !f.accepts(&x) {
            tally.skip();
            continue;
        }
        match (f.evaluate(&x), f.project(&x)) {
            (Ok(v), Ok(px)) => {
                let mismatch = (px == x) != (v <= 0.0);
                tally.record_with(if mismatch { 1.0 } else { 0.0 }, mismatch, &[&x]);
            }
            _ => tally.record_with(1.0, true, &[&x]),
        }
    }
    Ok(tally.finish())
}

/// Quasi-nonexpansiveness of the sweep operator `T = P_{f_m} ∘ ⋯ ∘ P_{f_1}`:
/// `‖T x − z‖ ≤ ‖x − z‖` for points `z` feasible for every function.
pub fn check_composition_qne(
    p: &FeasibilityProblem,
    region: &SampleRegion,
    tol: f64,
) -> Result<ValidationReport, VerifyError> {
    if region.dim() != p.dimension() {
        return Err(QcError::DimensionMismatch {
            expected: p.dimension(),
            found: region.dim(),
        }
        .into());
    }
    let mut rng = region.rng();
    let mut tally = Tally::labelled("composition_qne", "T", tol);
    let accepted = |x: &Point| p.functions().iter().all(|f| f.accepts(x));
    let feasible: Vec<Point> = (0..super::REJECTION_FACTOR * region.sample_count())
        .map(|_| region.uniform(&mut rng))
        .filter(|z| accepted(z) && p.residual(z).is_ok_and(|r| r <= 0.0))
        .take(region.sample_count())
        .collect();
    if feasible.is_empty() {
        tally.mark_vacuous();
        return Ok(tally.finish());
    }
    let t = compose_operator(p);
    for i in 0..region.sample_count() {
        let z = &feasible[i % feasible.len()];
        let x = region.uniform(&mut rng);
        if !accepted(&x) {
            tally.skip();
            continue;
        }
        match t(&x) {
            Ok(tx) => tally.record(tx.distance(z) - x.distance(z), &[&x, z]),
            Err(_) => tally.record_with(f64::INFINITY, true, &[&x, z]),
        }
    }
    Ok(tally.finish())
}

/// Fixed-point closedness along a supplied sequence.
///
/// The sequence must settle: its last step and the displacement
/// `‖P x_N − x_N‖` of its last point must both be at most `tol`, otherwise
/// the input is rejected as non-convergent. The last point then stands in
/// for the limit and must satisfy `f(x_N) ≤ tol`.
pub fn check_fixed_point_closed(f: &QcOracle, seq: &[Point], tol: f64) -> Result<ValidationReport, VerifyError> {
    let last = seq
        .last()
        .ok_or_else(|| VerifyError::NonConvergentInput("empty sequence".into()))?;
    last.ensure_dim(f.dimension())?;
    if let [.., prev, _] = seq {
        let gap = last.distance(prev);
        if gap > tol {
            return Err(VerifyError::NonConvergentInput(format!(
                "last step {gap:e} exceeds tolerance {tol:e}"
            )));
        }
    }
    let displacement = f.project(last)?.distance(last);
    if displacement > tol {
        return Err(VerifyError::NonConvergentInput(format!(
            "displacement {displacement:e} exceeds tolerance {tol:e}"
        )));
    }
    let mut tally = Tally::new("fixed_point_closed", f, tol);
    for x in seq {
        if !f.accepts(x) {
            return Err(QcError::DomainViolation {
                label: f.label().to_owned(),
            }
            .into());
        }
    }
    let value = f.evaluate(last)?;
    tally.record(value, &[last]);
    let mut report = tally.finish();
    report.samples_tested = seq.len();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{make_affine, make_ball, make_linear_fractional, make_paper_floor, make_sqrt_abs_shift};
    use crate::oracle::Holder;
    use crate::point::norm;

    fn pt(c: &[f64]) -> Point {
        Point::from_slice(c).unwrap()
    }

    fn square(half: f64, n: usize) -> SampleRegion {
        SampleRegion::cube(2, -half, half, n, 7).unwrap()
    }

    #[test]
    fn quasiconvex_examples() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        assert!(check_quasiconvex(&ball, &square(3.0, 2000), 1e-9).unwrap().passed);

        let concave = crate::oracle::QcOracle::from_fns(2, |x| -norm(x), |x| x.to_vec(), Holder::lipschitz(1.0).unwrap());
        let r = check_quasiconvex(&concave, &square(1.0, 2000), 1e-9).unwrap();
        assert!(!r.passed && r.violations > 0);

        let single = SampleRegion::new(pt(&[0.3, -0.7]), pt(&[0.3, -0.7]), 100, 1).unwrap();
        let r = check_quasiconvex(&concave, &single, 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!(r.samples_tested, 100);
    }

    #[test]
    fn star_inequality_examples() {
        let affine = make_affine(pt(&[1.0, 0.0]), -2.0).unwrap();
        assert!(check_star_inequality(&affine, &square(5.0, 2000), 1e-9).unwrap().passed);

        let lf = make_linear_fractional(pt(&[1.0, 0.0]), -2.0, pt(&[0.0, 1.0]), 1.0, Holder::lipschitz(10.0).unwrap()).unwrap();
        let region = SampleRegion::new(pt(&[-3.0, 0.0]), pt(&[6.0, 4.0]), 2000, 3).unwrap();
        assert!(check_star_inequality(&lf, &region, 1e-9).unwrap().passed);

        let flipped = crate::oracle::QcOracle::from_fns(2, |x| x[0] - 2.0, |_| vec![-1.0, 0.0], Holder::lipschitz(1.0).unwrap());
        assert!(!check_star_inequality(&flipped, &square(5.0, 2000), 1e-9).unwrap().passed);
    }

    #[test]
    fn zero_subgradient_is_flagged() {
        let zero = crate::oracle::QcOracle::from_fns(1, |x| x[0], |_| vec![0.0], Holder::lipschitz(1.0).unwrap());
        let r = check_star_inequality(&zero, &SampleRegion::cube(1, -1.0, 1.0, 100, 0).unwrap(), 1e-9).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn sholder_examples() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        assert!(check_sholder(&ball, &square(3.0, 2000), 1e-9).unwrap().passed);
        let sq = make_sqrt_abs_shift(1.0).unwrap();
        let line = SampleRegion::cube(1, -10.0, 10.0, 2000, 5).unwrap();
        assert!(check_sholder(&sq, &line, 1e-9).unwrap().passed);
        let understated = ball.clone().with_holder(Holder::lipschitz(0.5).unwrap());
        assert!(!check_sholder(&understated, &square(3.0, 2000), 1e-9).unwrap().passed);
        // Witness pair for the understated modulus.
        let (x, q) = (pt(&[3.0, 0.0]), pt(&[1.0, 0.0]));
        let lhs = (ball.evaluate(&x).unwrap() - ball.evaluate(&q).unwrap()).abs();
        assert!(lhs > 0.5 * x.distance(&q));
    }

    #[test]
    fn sholder_without_feasible_points_is_vacuous() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        let far = SampleRegion::new(pt(&[10.0, 10.0]), pt(&[11.0, 11.0]), 50, 0).unwrap();
        let r = check_sholder(&ball, &far, 1e-9).unwrap();
        assert!(r.vacuous && r.passed);
        assert_eq!(r.samples_tested, 0);
    }

    #[test]
    fn konnov_examples() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        assert!(check_konnov(&ball, &square(3.0, 2000), 1e-9).unwrap().passed);
        let doubled = ball.clone().with_holder(Holder::new(1.0, 2.0).unwrap());
        assert!(!check_konnov(&doubled, &square(3.0, 2000), 1e-9).unwrap().passed);
        let floor = make_paper_floor();
        assert!(check_konnov(&floor, &SampleRegion::cube(1, -5.0, 5.0, 2000, 2).unwrap(), 1e-9).unwrap().passed);
    }

    #[test]
    fn cutter_and_sqne_pass_on_builtins() {
        let ball = make_ball(pt(&[0.5, -0.5]), 1.5).unwrap();
        assert!(check_cutter(&ball, &square(4.0, 2000), 1e-9).unwrap().passed);
        assert!(check_sqne(&ball, &square(4.0, 2000), 1e-9).unwrap().passed);
        let sq = make_sqrt_abs_shift(1.0).unwrap();
        let line = SampleRegion::cube(1, -10.0, 10.0, 2000, 5).unwrap();
        assert!(check_cutter(&sq, &line, 1e-9).unwrap().passed);
        assert!(check_sqne(&sq, &line, 1e-9).unwrap().passed);
    }

    #[test]
    fn fixed_point_identity_holds() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        let r = check_fixed_point_identity(&ball, &square(3.0, 2000)).unwrap();
        assert!(r.passed);
        assert_eq!(r.samples_tested, 2000);
    }

    #[test]
    fn fixed_point_closed_examples() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        let seq: Vec<Point> = (0..=14).map(|j| pt(&[1.0 + 10f64.powi(-j), 0.0])).collect();
        assert!(check_fixed_point_closed(&ball, &seq, 1e-12).unwrap().passed);

        let constant = vec![pt(&[0.2, 0.1]); 5];
        assert!(check_fixed_point_closed(&ball, &constant, 1e-12).unwrap().passed);

        let floor = make_paper_floor();
        let seq: Vec<Point> = (0..=14).map(|j| pt(&[10f64.powi(-j)])).collect();
        assert!(check_fixed_point_closed(&floor, &seq, 1e-12).unwrap().passed);

        let short: Vec<Point> = (1..=10).map(|k| pt(&[1.0 + 1.0 / k as f64, 0.0])).collect();
        assert!(matches!(
            check_fixed_point_closed(&ball, &short, 1e-12),
            Err(VerifyError::NonConvergentInput(_))
        ));
        assert!(check_fixed_point_closed(&ball, &[], 1e-12).is_err());
    }

    #[test]
    fn composition_is_quasi_nonexpansive() {
        let p = FeasibilityProblem::new(vec![
            make_ball(pt(&[0.0, 0.0]), 1.0).unwrap(),
            make_affine(pt(&[1.0, 0.0]), 0.0).unwrap(),
        ])
        .unwrap();
        assert!(check_composition_qne(&p, &square(4.0, 2000), 1e-9).unwrap().passed);
        let far = SampleRegion::new(pt(&[5.0, 5.0]), pt(&[6.0, 6.0]), 10, 0).unwrap();
        assert!(check_composition_qne(&p, &far, 1e-9).unwrap().vacuous);
    }

    #[test]
    fn validators_are_deterministic() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        let a = check_konnov(&ball, &square(3.0, 500), 1e-9).unwrap();
        let b = check_konnov(&ball, &square(3.0, 500), 1e-9).unwrap();
        assert_eq!(a, b);
        let c = check_konnov(&ball, &square(3.0, 500).with_seed(99), 1e-9).unwrap();
        assert_ne!(a.worst_counterexample, c.worst_counterexample);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let ball = make_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        let line = SampleRegion::cube(1, -1.0, 1.0, 10, 0).unwrap();
        assert!(matches!(check_cutter(&ball, &line, 1e-9), Err(VerifyError::Oracle(_))));
    }
}
