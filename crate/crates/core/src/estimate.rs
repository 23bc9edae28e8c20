//! Sampling-based estimators: empirical Lipschitz constants, sup norms,
//! modulus-of-continuity curves, large-distance Lipschitz constants and
//! dominance ratios.
//!
//! Every estimator is a maximum over the pairs of a [`SamplingPlan`], so
//! the result is a certified lower bound of the true quantity, realized by
//! the recorded extremal pair. Pair indices are partitioned across threads;
//! the reduction keeps the smallest index on ties, so results do not depend
//! on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::sampling::SamplingPlan;
use crate::space::{Point, Space};

/// Result of an estimator run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    /// max |f(x) − f(y)| / d(x, y) over sampled pairs with x ≠ y.
    pub empirical_lip: f64,
    /// max |f| over sampled points.
    pub empirical_sup: f64,
    /// (δ, ω(δ)) with ω(δ) = max |f(x) − f(y)| over pairs at distance ≤ δ.
    pub modulus_curve: Vec<(f64, f64)>,
    /// The pair realizing `empirical_lip`.
    pub extremal_pair: (Point, Point),
    /// (ε, max quotient over pairs at distance ≥ ε), when requested.
    pub large_distance_lip: Option<(f64, f64)>,
}

/// Outcome of a single verified inequality or identity.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    /// Smallest slack observed (bound − value); negative on failure.
    pub margin: f64,
    /// The extremal (or violating) pair with both sides of the comparison.
    pub witness: Option<PairWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairWitness {
    pub x: Point,
    pub y: Point,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone)]
struct MaxCandidate {
    value: f64,
    index: u64,
    pair: Option<(Point, Point)>,
}

impl MaxCandidate {
    fn empty() -> Self {
        MaxCandidate {
            value: f64::NEG_INFINITY,
            index: u64::MAX,
            pair: None,
        }
    }

    fn better_than(&self, other: &Self) -> bool {
        self.value > other.value || (self.value == other.value && self.index < other.index)
    }

    fn merge(self, other: Self) -> Self {
        if other.better_than(&self) {
            other
        } else {
            self
        }
    }
}

/// Empirical Lipschitz constant and sup norm of `f` over the plan's pairs.
pub fn estimate_lip(f: &RealFunction, space: &Space, plan: &SamplingPlan) -> Result<EstimateReport> {
    plan.validate_for(space)?;
    let (lip, sup) = (0..plan.num_pairs())
        .into_par_iter()
        .map(|i| -> Result<(MaxCandidate, MaxCandidate)> {
            let (x, y) = plan.pair(space, i)?;
            let fx = f.eval(&x)?;
            let fy = f.eval(&y)?;
            let d = space.distance(&x, &y);
            let lip = if d > 0.0 {
                MaxCandidate {
                    value: (fx - fy).abs() / d,
                    index: i,
                    pair: Some((x.clone(), y.clone())),
                }
            } else {
                MaxCandidate::empty()
            };
            let (v, p) = if fx.abs() >= fy.abs() { (fx, x) } else { (fy, y) };
            let sup = MaxCandidate {
                value: v.abs(),
                index: i,
                pair: Some((p.clone(), p)),
            };
            Ok((lip, sup))
        })
        .try_reduce(
            || (MaxCandidate::empty(), MaxCandidate::empty()),
            |(l1, s1), (l2, s2)| Ok((l1.merge(l2), s1.merge(s2))),
        )?;

    let extremal_pair = lip.pair.ok_or(Error::InsufficientSample { min_distance: 0.0 })?;
    Ok(EstimateReport {
        empirical_lip: lip.value,
        empirical_sup: sup.value,
        modulus_curve: Vec::new(),
        extremal_pair,
        large_distance_lip: None,
    })
}

/// Empirical sup norm: max |f| over the plan's sampled points.
pub fn estimate_sup(f: &RealFunction, space: &Space, plan: &SamplingPlan) -> Result<f64> {
    Ok(estimate_lip(f, space, plan)?.empirical_sup)
}

/// Empirical modulus of continuity at the given thresholds.
///
/// `deltas` must be strictly decreasing; the returned curve is listed in
/// increasing δ and is nondecreasing by construction.
pub fn estimate_modulus(
    f: &RealFunction,
    space: &Space,
    plan: &SamplingPlan,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    plan.validate_for(space)?;
    if deltas.is_empty() {
        return Err(Error::InvalidParameter("deltas must be nonempty".into()));
    }
    if !deltas.windows(2).all(|w| w[0] > w[1]) || !deltas.iter().all(|d| *d > 0.0) {
        return Err(Error::InvalidParameter(
            "deltas must be strictly decreasing and positive".into(),
        ));
    }
    let mut ascending: Vec<f64> = deltas.to_vec();
    ascending.reverse();

    let omegas = (0..plan.num_pairs())
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let (x, y) = plan.pair(space, i)?;
            let d = space.distance(&x, &y);
            let diff = (f.eval(&x)? - f.eval(&y)?).abs();
            Ok(ascending
                .iter()
                .map(|&delta| if d <= delta { diff } else { f64::NEG_INFINITY })
                .collect())
        })
        .try_reduce(
            || vec![f64::NEG_INFINITY; ascending.len()],
            |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect()),
        )?;

    Ok(ascending
        .into_iter()
        .zip(omegas)
        .map(|(d, o)| (d, o.max(0.0)))
        .collect())
}

/// max |f(x) − f(y)| / d(x, y) over sampled pairs at distance ≥ `eps`.
pub fn estimate_large_distance_lip(
    f: &RealFunction,
    space: &Space,
    plan: &SamplingPlan,
    eps: f64,
) -> Result<f64> {
    plan.validate_for(space)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let best = (0..plan.num_pairs())
        .into_par_iter()
        .map(|i| -> Result<MaxCandidate> {
            let (x, y) = plan.pair(space, i)?;
            let d = space.distance(&x, &y);
            if d < eps {
                return Ok(MaxCandidate::empty());
            }
            let q = (f.eval(&x)? - f.eval(&y)?).abs() / d;
            Ok(MaxCandidate { value: q, index: i, pair: None })
        })
        .try_reduce(MaxCandidate::empty, |a, b| Ok(a.merge(b)))?;
    if best.index == u64::MAX {
        return Err(Error::InsufficientSample { min_distance: eps });
    }
    Ok(best.value)
}

/// max |f(x)| / delta(x) over sampled points; `delta` must be strictly
/// positive at every sample.
pub fn dominance_ratio(
    f: &RealFunction,
    delta: &RealFunction,
    space: &Space,
    plan: &SamplingPlan,
) -> Result<f64> {
    plan.validate_for(space)?;
    let best = (0..plan.num_pairs())
        .into_par_iter()
        .map(|i| -> Result<MaxCandidate> {
            let (x, y) = plan.pair(space, i)?;
            let mut value = f64::NEG_INFINITY;
            for p in [&x, &y] {
                let den = delta.eval(p)?;
                if den <= 0.0 {
                    return Err(Error::Domain {
                        label: delta.label().into(),
                        point: p.clone(),
                        detail: format!("value {den} is not strictly positive"),
                    });
                }
                value = value.max(f.eval(p)?.abs() / den);
            }
            Ok(MaxCandidate { value, index: i, pair: None })
        })
        .try_reduce(MaxCandidate::empty, |a, b| Ok(a.merge(b)))?;
    Ok(best.value)
}

/// Check the metric axioms on sampled triples: symmetry (exact),
/// nonnegativity, identity of indiscernibles at x = y, and the triangle
/// inequality (within a few ulp).
pub fn check_metric_axioms(space: &Space, plan: &SamplingPlan) -> Result<VerifyReport> {
    plan.validate_for(space)?;
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for i in 0..plan.num_pairs() {
        let (x, y) = plan.pair(space, i)?;
        // Third vertex from the neighbouring stream keeps the triple seeded.
        let (z, _) = plan.pair(space, (i + 1) % plan.num_pairs())?;
        let dxy = space.distance(&x, &y);
        let dyx = space.distance(&y, &x);
        let dxz = space.distance(&x, &z);
        let dzy = space.distance(&z, &y);
        let fail = |lhs: f64, rhs: f64, x: &Point, y: &Point| VerifyReport {
            passed: false,
            margin: rhs - lhs,
            witness: Some(PairWitness {
                x: x.clone(),
                y: y.clone(),
                lhs,
                rhs,
            }),
        };
        if dxy != dyx {
            return Ok(fail(dxy, dyx, &x, &y));
        }
        if !(dxy >= 0.0) || space.distance(&x, &x) != 0.0 {
            return Ok(fail(dxy, 0.0, &x, &y));
        }
        if x == y && dxy != 0.0 {
            return Ok(fail(dxy, 0.0, &x, &y));
        }
        let slack = 4.0 * f64::EPSILON * (1.0 + dxz + dzy);
        let m = dxz + dzy + slack - dxy;
        if m < 0.0 {
            return Ok(fail(dxy, dxz + dzy, &x, &y));
        }
        if m < margin {
            margin = m;
            witness = Some(PairWitness {
                x: x.clone(),
                y: y.clone(),
                lhs: dxy,
                rhs: dxz + dzy,
            });
        }
    }
    Ok(VerifyReport {
        passed: true,
        margin,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Strategy;

    fn line() -> Space {
        Space::euclidean(1).unwrap()
    }

    #[test]
    fn linear_function_has_unit_quotients() {
        let space = line();
        let id = RealFunction::coordinate(0);
        for strategy in [
            Strategy::UniformPairs,
            Strategy::NearPairs { delta: 0.1 },
            Strategy::RadialPairs,
        ] {
            let plan = SamplingPlan::new(2, 2000, 10.0, strategy);
            let report = estimate_lip(&id, &space, &plan).unwrap();
            assert!(report.empirical_lip > 1.0 - 1e-9 && report.empirical_lip <= 1.0);
        }
    }

    #[test]
    fn weight_is_one_lipschitz_in_r3() {
        let space = Space::euclidean(3).unwrap();
        let w = RealFunction::base_weight(&space);
        let plan = SamplingPlan::uniform(3, 20_000, 10.0);
        let report = estimate_lip(&w, &space, &plan).unwrap();
        assert!(report.empirical_lip <= 1.0 + 1e-12);
    }

    #[test]
    fn capped_transverse_coordinate_lip_near_one() {
        let space = Space::euclidean(2).unwrap();
        let f = crate::counterexamples::blowup_function();
        let plan = SamplingPlan::uniform(7, 200_000, 10.0);
        let report = estimate_lip(&f, &space, &plan).unwrap();
        assert!(report.empirical_lip <= 1.0 + 1e-12, "lip = {}", report.empirical_lip);
        assert!(report.empirical_lip >= 0.95, "lip = {}", report.empirical_lip);
    }

    #[test]
    fn sup_examples() {
        let space = line();
        let plan = SamplingPlan::uniform(5, 5000, 10.0);
        assert_eq!(
            estimate_sup(&RealFunction::constant(1.0), &space, &plan).unwrap(),
            1.0
        );

        // Monotone function on the half-line peaks at the boundary sample.
        let h = Space::half_line();
        let f = RealFunction::new("1-exp(-t)", |p| 1.0 - (-p.first_coord()).exp());
        let sup = estimate_sup(&f, &h, &plan).unwrap();
        assert!(sup >= 1.0 - (-10.0f64).exp() - 1e-15 && sup < 1.0, "sup = {sup}");

        let plane = Space::euclidean(2).unwrap();
        let cap = crate::counterexamples::blowup_function();
        let sup = estimate_sup(&cap, &plane, &plan).unwrap();
        assert_eq!(sup, 1.0);
    }

    #[test]
    fn modulus_of_lipschitz_function_is_dominated() {
        let space = line();
        let id = RealFunction::coordinate(0);
        let plan = SamplingPlan::uniform(11, 5000, 10.0);
        let deltas = [2.0, 1.0, 0.5, 0.25];
        let curve = estimate_modulus(&id, &space, &plan, &deltas).unwrap();
        assert_eq!(curve.len(), 4);
        for (d, o) in &curve {
            assert!(*o <= *d * (1.0 + 1e-12));
        }
        for w in curve.windows(2) {
            assert!(w[0].1 <= w[1].1, "curve must be nondecreasing");
        }
        let flat = estimate_modulus(&RealFunction::constant(3.0), &space, &plan, &deltas).unwrap();
        assert!(flat.iter().all(|(_, o)| *o == 0.0));
    }

    #[test]
    fn deltas_must_strictly_decrease() {
        let space = line();
        let plan = SamplingPlan::uniform(1, 10, 1.0);
        let err = estimate_modulus(&RealFunction::constant(0.0), &space, &plan, &[0.5, 1.0]);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn large_distance_lip_examples() {
        let space = line();
        let plan = SamplingPlan::uniform(13, 20_000, 10.0);
        let id = RealFunction::coordinate(0);
        let l = estimate_large_distance_lip(&id, &space, &plan, 1.0).unwrap();
        assert!((l - 1.0).abs() <= 1e-12);

        // sqrt is not Lipschitz near 0 but has quotients <= 1 at distance >= 1.
        let h = Space::half_line();
        let sqrt = RealFunction::new("sqrt", |p| p.first_coord().sqrt());
        let l = estimate_large_distance_lip(&sqrt, &h, &plan, 1.0).unwrap();
        assert!(l <= 1.0 && l > 0.0);

        let plane = Space::euclidean(2).unwrap();
        let w = RealFunction::base_weight(&plane);
        let l = estimate_large_distance_lip(&w, &plane, &plan, 0.5).unwrap();
        assert!(l <= 1.0 + 1e-12);
    }

    #[test]
    fn large_distance_lip_needs_far_pairs() {
        let space = line();
        let plan = SamplingPlan::new(1, 100, 10.0, Strategy::NearPairs { delta: 0.1 });
        let id = RealFunction::coordinate(0);
        let err = estimate_large_distance_lip(&id, &space, &plan, 1.0);
        assert!(matches!(err, Err(Error::InsufficientSample { .. })));
    }

    #[test]
    fn dominance_ratio_examples() {
        let space = line();
        let w = RealFunction::base_weight(&space);
        let plan = SamplingPlan::uniform(17, 5000, 10.0);
        let r = dominance_ratio(&w, &w, &space, &plan).unwrap();
        assert_eq!(r, 1.0);

        // 2|x|/(1+|x|) climbs to 2 as the region grows.
        let double = RealFunction::coordinate(0).scale(2.0);
        let big = SamplingPlan::uniform(17, 5000, 1e9);
        let r = dominance_ratio(&double, &w, &space, &big).unwrap();
        assert!((2.0 - 1e-8..2.0).contains(&r), "ratio = {r}");

        let bounded = RealFunction::new("sin", |p| p.first_coord().sin());
        let r = dominance_ratio(&bounded, &w, &space, &plan).unwrap();
        assert!(r <= 1.0);
    }

    #[test]
    fn estimate_is_monotone_in_num_pairs() {
        let space = Space::euclidean(2).unwrap();
        let f = RealFunction::new("sin(x1)", |p| p.first_coord().sin());
        let small = SamplingPlan::uniform(23, 1000, 10.0);
        let large = SamplingPlan::uniform(23, 4000, 10.0);
        let a = estimate_lip(&f, &space, &small).unwrap().empirical_lip;
        let b = estimate_lip(&f, &space, &large).unwrap().empirical_lip;
        assert!(b >= a);
    }

    #[test]
    fn reports_are_deterministic() {
        let space = Space::euclidean(3).unwrap();
        let f = RealFunction::new("sin(x1)", |p| p.first_coord().sin());
        let plan = SamplingPlan::uniform(29, 50_000, 10.0);
        let a = estimate_lip(&f, &space, &plan).unwrap();
        let b = estimate_lip(&f, &space, &plan).unwrap();
        assert_eq!(a.empirical_lip.to_bits(), b.empirical_lip.to_bits());
        assert_eq!(a.empirical_sup.to_bits(), b.empirical_sup.to_bits());
        assert_eq!(a.extremal_pair, b.extremal_pair);
    }

    #[test]
    fn evaluation_errors_carry_the_offending_point() {
        let space = line();
        let f = RealFunction::new("bad", |p| {
            if p.first_coord() > 0.0 {
                f64::NAN
            } else {
                0.0
            }
        });
        let plan = SamplingPlan::uniform(31, 100, 10.0);
        let err = estimate_lip(&f, &space, &plan).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn metric_axioms_hold_on_all_kinds() {
        let plans = |s: &Space| match s.geometry() {
            Space::IntervalFibers => {
                SamplingPlan::new(37, 3000, 1.0, Strategy::FiberPairs { max_fiber: 16 })
            }
            _ => SamplingPlan::uniform(37, 3000, 10.0),
        };
        for space in [
            Space::euclidean(1).unwrap(),
            Space::euclidean(3).unwrap(),
            Space::half_line(),
            Space::interval_fibers(),
            Space::bounded_remetrized(Space::euclidean(2).unwrap()),
        ] {
            let report = check_metric_axioms(&space, &plans(&space)).unwrap();
            assert!(report.passed, "metric axioms failed on {}", space.name());
        }
    }
}
