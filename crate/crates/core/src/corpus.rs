//! Fixed test-function families with analytically known certificates.
//!
//! Verification needs trusted Lipschitz constants and sup norms; these
//! corpora ship them as code. Families: distance-based, trigonometric,
//! polynomial-capped and piecewise-linear.

use crate::function::RealFunction;
use crate::space::{Point, Space};

/// Maximum of |d/dr 1/(1+r²)| = 3√3/8, attained at r = 1/√3.
const BUMP_LIP: f64 = 0.649519052838329;

/// Bounded Lipschitz functions (both certificates present) on a normed
/// space or the interval fibers.
pub fn bounded_lipschitz(space: &Space) -> Vec<RealFunction> {
    match space.geometry() {
        Space::Euclidean { .. } | Space::HalfLine => {
            let sin = sin_first_coordinate().with_lip(1.0).with_sup(1.0);
            let mut family = vec![
                RealFunction::constant(1.0),
                sin.clone(),
                sin.scale(0.5),
                radial(space, "min(1,|x|)", |r| r.min(1.0)).with_lip(1.0).with_sup(1.0),
                radial(space, "(1-|x|)+", |r| (1.0 - r).max(0.0)).with_lip(1.0).with_sup(1.0),
                radial(space, "1/(1+|x|^2)", |r| 1.0 / (1.0 + r * r))
                    .with_lip(BUMP_LIP)
                    .with_sup(1.0),
            ];
            if matches!(space.geometry(), Space::HalfLine) {
                family.push(
                    RealFunction::new("1-exp(-t)", |p| 1.0 - (-p.first_coord()).exp())
                        .with_lip(1.0)
                        .with_sup(1.0),
                );
            }
            family
        }
        Space::IntervalFibers => vec![
            RealFunction::constant(1.0),
            // |t - s| <= d on a fiber and <= 1 = d across fibers.
            RealFunction::coordinate(0).with_sup(1.0),
            RealFunction::new("sin(2 pi t)", |p| {
                (2.0 * std::f64::consts::PI * p.first_coord()).sin()
            })
            .with_lip(2.0 * std::f64::consts::PI)
            .with_sup(1.0),
        ],
        Space::BoundedRemetrized { .. } => unreachable!("geometry() strips remetrization"),
    }
}

/// Lipschitz functions, bounded or not.
pub fn lipschitz(space: &Space) -> Vec<RealFunction> {
    let mut family = vec![RealFunction::base_weight(space), RealFunction::coordinate(0)];
    family.extend(bounded_lipschitz(space));
    family
}

/// Strictly positive uniformly continuous units dominating the lattice:
/// the base weight, twice the base weight, and the base weight plus a
/// bounded smooth perturbation.
pub fn positive_units(space: &Space) -> Vec<RealFunction> {
    let w = RealFunction::base_weight(space);
    let perturbed = match space.geometry() {
        Space::IntervalFibers => {
            let sp = space.clone();
            RealFunction::new("1+d+cos(2 pi t)/4", move |p: &Point| {
                1.0 + sp.distance(p, &sp.base_point())
                    + 0.25 * (2.0 * std::f64::consts::PI * p.first_coord()).cos()
            })
        }
        _ => {
            let sp = space.clone();
            RealFunction::new("1+d+cos(d)/4", move |p: &Point| {
                let d = sp.distance(p, &sp.base_point());
                1.0 + d + 0.25 * d.cos()
            })
        }
    };
    vec![w.clone(), w.scale(2.0), perturbed]
}

fn sin_first_coordinate() -> RealFunction {
    RealFunction::new("sin(x1)", |p: &Point| p.first_coord().sin())
}

fn radial(space: &Space, label: &str, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFunction {
    RealFunction::radial(space, label, g).expect("normed geometry")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::verify_certificates;
    use crate::sampling::{SamplingPlan, Strategy};

    #[test]
    fn certificates_hold_on_samples() {
        for space in [
            Space::euclidean(1).unwrap(),
            Space::euclidean(2).unwrap(),
            Space::euclidean(3).unwrap(),
            Space::half_line(),
        ] {
            let plan = SamplingPlan::uniform(97, 3000, 10.0);
            for f in lipschitz(&space) {
                verify_certificates(&f, &space, &plan)
                    .unwrap_or_else(|e| panic!("{} on {}: {e}", f.label(), space.name()));
            }
        }
        let fibers = Space::interval_fibers();
        let plan = SamplingPlan::new(97, 3000, 1.0, Strategy::FiberPairs { max_fiber: 32 });
        for f in lipschitz(&fibers) {
            verify_certificates(&f, &fibers, &plan)
                .unwrap_or_else(|e| panic!("{}: {e}", f.label()));
        }
    }

    #[test]
    fn units_are_strictly_positive() {
        let fibers = Space::interval_fibers();
        let plan = SamplingPlan::new(101, 2000, 1.0, Strategy::FiberPairs { max_fiber: 64 });
        for u in positive_units(&fibers) {
            for pair in plan.pairs(&fibers) {
                let (x, y) = pair.unwrap();
                assert!(u.eval(&x).unwrap() > 0.0);
                assert!(u.eval(&y).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn bump_lip_constant_is_the_true_maximum() {
        // Finite-difference oracle for d/dr 1/(1+r^2) on a fine grid.
        let g = |r: f64| 1.0 / (1.0 + r * r);
        let mut max_slope = 0.0f64;
        let mut r = 0.0;
        while r < 10.0 {
            let h = 1e-6;
            max_slope = max_slope.max(((g(r + h) - g(r)) / h).abs());
            r += 1e-3;
        }
        assert!(max_slope <= BUMP_LIP + 1e-6);
        assert!(max_slope >= BUMP_LIP - 1e-3);
    }
}
