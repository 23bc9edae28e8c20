//! Constructive witnesses for the negative results.
//!
//! * In dimension ≥ 2, `expand` does not preserve Lipschitzness: for
//!   f = min(1, |x₂|) the tangential difference quotients of expand(f)
//!   grow like (1 + r)·log(1 + r)/r along the first axis.
//! * On the interval fibers, no strictly positive unit u makes
//!   f·g/u uniformly continuous for f(t, n) = t, g(t, n) = n·u(1, n):
//!   every fiber n contains a pair at distance ≤ 1/n with gap ≥ 1/2.
//! * The dyadic sawtooth on the half-line vanishes at even powers of two
//!   and matches 1 + t at odd powers, with Lipschitz constant 3.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fring::FRingProduct;
use crate::function::RealFunction;
use crate::space::{Point, Space};
use crate::transforms::expand;

/// f(x₁, x₂) = min(1, |x₂|): bounded and 1-Lipschitz on the plane, yet its
/// expansion is not Lipschitz.
pub fn blowup_function() -> RealFunction {
    RealFunction::try_new("min(1,|x2|)", |p| match p.coords() {
        Some(c) if c.len() >= 2 => Ok(c[1].abs().min(1.0)),
        _ => Err(Error::Domain {
            label: "min(1,|x2|)".into(),
            point: p.clone(),
            detail: "needs a vector point of dimension >= 2".into(),
        }),
    })
    .with_lip(1.0)
    .with_sup(1.0)
}

/// A tangential pair near the first axis at radius `radius` witnessing a
/// large difference quotient of the expanded blow-up function.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupWitness {
    pub radius: f64,
    pub pair: (Point, Point),
    /// |expand(f)(y) − expand(f)(y′)| / ‖y − y′‖ at the best pair found.
    pub ratio: f64,
    /// (1 + r)·log(1 + r)/r, the limiting quotient as the angle shrinks.
    pub predicted_ratio: f64,
}

/// Search, for each radius, a geometric grid of angles θ ∈ [1e-6, 1e-1]
/// for the pair (r, 0), (r·cos θ, r·sin θ) maximizing the difference
/// quotient of the expanded blow-up function. Radii must exceed 1; a best
/// ratio below 1 is a search failure.
pub fn blowup_witnesses(radii: &[f64]) -> Result<Vec<BlowupWitness>> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radii must be nonempty".into()));
    }
    if !radii.iter().all(|r| *r > 1.0) {
        return Err(Error::InvalidParameter("radii must all exceed 1".into()));
    }
    let plane = Space::euclidean(2).expect("dim 2");
    let expanded = expand(&plane, &blowup_function())?;
    let mut witnesses = Vec::with_capacity(radii.len());
    for &r in radii {
        let on_axis = Point::vector([r, 0.0]);
        let base_value = expanded.eval(&on_axis)?;
        let mut best: Option<BlowupWitness> = None;
        let mut theta = 1e-6f64;
        while theta <= 1e-1 {
            let off_axis = Point::vector([r * theta.cos(), r * theta.sin()]);
            let distance = plane.distance(&on_axis, &off_axis);
            if distance > 0.0 {
                let ratio = (expanded.eval(&off_axis)? - base_value).abs() / distance;
                if best.as_ref().map_or(true, |b| ratio > b.ratio) {
                    best = Some(BlowupWitness {
                        radius: r,
                        pair: (on_axis.clone(), off_axis),
                        ratio,
                        predicted_ratio: (1.0 + r) * r.ln_1p() / r,
                    });
                }
            }
            theta *= 1.05;
        }
        let best = best.expect("grid is nonempty");
        if best.ratio < 1.0 {
            return Err(Error::SearchFailure(format!(
                "tangential ratio {} at radius {r} is below 1",
                best.ratio
            )));
        }
        witnesses.push(best);
    }
    Ok(witnesses)
}

/// A same-fiber pair witnessing the failure of equicontinuity of
/// t ↦ M(f, g)(t, n) across fibers.
#[derive(Debug, Clone, Serialize)]
pub struct EquicontinuityWitness {
    pub fiber: u32,
    pub pair: (Point, Point),
    /// |M(f,g)(s, n) − M(f,g)(t, n)| at the pair.
    pub gap: f64,
    pub pair_distance: f64,
}

/// The counterexample data for one candidate unit u: the functions
/// f(t, n) = t and g(t, n) = n·u(1, n), and one witness per fiber.
pub struct FiberCounterexample {
    pub f: RealFunction,
    pub g: RealFunction,
    pub product: RealFunction,
    pub witnesses: Vec<EquicontinuityWitness>,
}

/// Subdivisions per 1/n window in the pigeonhole search.
const PIGEONHOLE_K: u32 = 64;

/// The pair f(t, n) = t and g(t, n) = n·u(1, n) used against the
/// candidate unit u.
pub fn fiber_functions(u: &RealFunction) -> (RealFunction, RealFunction) {
    let f = RealFunction::new("t", |p: &Point| p.first_coord())
        .with_lip(1.0)
        .with_sup(1.0);
    let u_inner = u.clone();
    let g = RealFunction::try_new(format!("n*{}(1,n)", u.label()), move |p| match p {
        Point::Fiber { fiber, .. } => {
            Ok(*fiber as f64 * u_inner.eval(&Point::fiber(*fiber, 1.0))?)
        }
        _ => Err(Error::Domain {
            label: "n*u(1,n)".into(),
            point: p.clone(),
            detail: "needs a fiber point".into(),
        }),
    });
    (f, g)
}

/// Build f(t, n) = t, g(t, n) = n·u(1, n) and M(f, g) = f·g/u on the
/// interval fibers, check M(f, g)(0, n) = 0 and M(f, g)(1, n) = n, and
/// search each fiber n ≤ max_fiber for a pair of width ≤ 1/n whose
/// M(f, g) gap is at least 1/2.
///
/// M(f, g)(·, n) climbs from 0 to n over [0, 1], so some window of width
/// 1/n carries an increment ≥ 1; the grid search recovers at least half
/// of it for any uniformly continuous unit.
pub fn fiber_counterexample(u: &RealFunction, max_fiber: u32) -> Result<FiberCounterexample> {
    if max_fiber == 0 {
        return Err(Error::InvalidParameter("max_fiber must be >= 1".into()));
    }
    let (f, g) = fiber_functions(u);
    let m = FRingProduct::with_unit_unchecked(u.clone()).apply(&f, &g);

    let mut witnesses = Vec::with_capacity(max_fiber as usize);
    for n in 1..=max_fiber {
        // Positivity of the unit along this fiber, with witness on failure.
        for j in 0..=8 {
            let p = Point::fiber(n, j as f64 / 8.0);
            let v = u.eval(&p)?;
            if v <= 0.0 {
                return Err(Error::Domain {
                    label: u.label().into(),
                    point: p,
                    detail: format!("unit value {v} is not strictly positive"),
                });
            }
        }
        let at_zero = m.eval(&Point::fiber(n, 0.0))?;
        let at_one = m.eval(&Point::fiber(n, 1.0))?;
        if at_zero != 0.0 {
            return Err(Error::SearchFailure(format!(
                "M(f,g)(0,{n}) = {at_zero}, expected 0"
            )));
        }
        if (at_one - n as f64).abs() > 1e-9 * n as f64 {
            return Err(Error::SearchFailure(format!(
                "M(f,g)(1,{n}) = {at_one}, expected {n}"
            )));
        }

        let steps = n * PIGEONHOLE_K;
        let values: Vec<f64> = (0..=steps)
            .map(|j| m.eval(&Point::fiber(n, j as f64 / steps as f64)))
            .collect::<Result<_>>()?;
        let mut best_j = 0;
        let mut best_gap = f64::NEG_INFINITY;
        for j in 0..=(steps - PIGEONHOLE_K) {
            let gap = (values[(j + PIGEONHOLE_K) as usize] - values[j as usize]).abs();
            if gap > best_gap {
                best_gap = gap;
                best_j = j;
            }
        }
        if best_gap < 0.5 {
            return Err(Error::SearchFailure(format!(
                "no window of width 1/{n} with gap >= 1/2 (best {best_gap}); increase the grid"
            )));
        }
        let x = Point::fiber(n, best_j as f64 / steps as f64);
        let y = Point::fiber(n, (best_j + PIGEONHOLE_K) as f64 / steps as f64);
        let pair_distance = Space::interval_fibers().distance(&x, &y);
        witnesses.push(EquicontinuityWitness {
            fiber: n,
            pair: (x, y),
            gap: best_gap,
            pair_distance,
        });
    }

    Ok(FiberCounterexample { f, g, product: m, witnesses })
}

/// The piecewise linear function on the half-line with knots at 0 and the
/// powers of two, vanishing at 0 and at 2^k for even k and equal to
/// 1 + 2^k at 2^k for odd k. The steepest segment is [1, 2] with slope 3.
pub fn dyadic_sawtooth() -> RealFunction {
    RealFunction::try_new("dyadic sawtooth", |p| {
        let t = match p {
            Point::HalfLine(t) => *t,
            _ => {
                return Err(Error::Domain {
                    label: "dyadic sawtooth".into(),
                    point: p.clone(),
                    detail: "needs a half-line point".into(),
                })
            }
        };
        Ok(sawtooth_value(t))
    })
    .with_lip(3.0)
}

fn knot_value(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        0.0
    } else {
        1.0 + 2f64.powi(k)
    }
}

fn sawtooth_value(t: f64) -> f64 {
    if t <= 1.0 {
        // Knots 0 and 1 = 2^0 both carry the value 0.
        return 0.0;
    }
    // Exponent of the segment [2^k, 2^{k+1}] containing t.
    let k = ((t.to_bits() >> 52) & 0x7ff) as i32 - 1023;
    let a = 2f64.powi(k);
    if t == a {
        return knot_value(k);
    }
    let va = knot_value(k);
    let vb = knot_value(k + 1);
    // The slope (vb - va)/2^k is a dyadic rational, exact in binary;
    // t - a is exact by Sterbenz since t <= 2a.
    let slope = (vb - va) / a;
    va + (t - a) * slope
}
