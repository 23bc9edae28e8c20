//! The mutually inverse radial transforms between the lattice of Lipschitz
//! functions and its sublattice of bounded functions on a normed space.
//!
//! `compress` sends g to x ↦ e^{−‖x‖} g(stretch(x)) where stretch(x)
//! rescales x to norm e^{‖x‖} − 1; it maps Lipschitz functions to bounded
//! Lipschitz functions. `expand` is its inverse,
//! y ↦ (1 + ‖y‖) f(shrink(y)) with shrink(y) of norm log(1 + ‖y‖).
//! On the line `expand` maps bounded Lipschitz functions back into
//! Lipschitz functions, so the two lattices are isomorphic there; in
//! dimension ≥ 2 this fails (see [`crate::counterexamples`]).

use crate::error::{Error, Result};
use crate::estimate::{estimate_lip, PairWitness, VerifyReport};
use crate::function::RealFunction;
use crate::sampling::SamplingPlan;
use crate::space::{Point, Space};

/// The radial stretch factor a(t) = (e^t − 1)/t, with a(0) = 1.
///
/// Computed through `exp_m1`; below 1e-8 the series 1 + t/2 + t²/6 is
/// used so the quotient stays fully accurate.
pub fn stretch_factor(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stretch_factor needs t >= 0, got {t}"
        )));
    }
    if t < 1e-8 {
        Ok(1.0 + t / 2.0 + t * t / 6.0)
    } else {
        Ok(t.exp_m1() / t)
    }
}

/// Derivative of the stretch factor, from the identity a(t) + t a′(t) = e^t,
/// i.e. a′(t) = (e^t (t − 1) + 1)/t². Below 1e-3 the series
/// 1/2 + t/3 + t²/8 + t³/30 avoids the cancellation in the closed form.
pub fn stretch_factor_deriv(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stretch_factor_deriv needs t >= 0, got {t}"
        )));
    }
    if t < 1e-3 {
        Ok(0.5 + t / 3.0 + t * t / 8.0 + t * t * t / 30.0)
    } else {
        Ok((t.exp() - stretch_factor(t)?) / t)
    }
}

/// The radial shrink factor log(1 + r)/r, with value 1 at r = 0.
///
/// Computed through `ln_1p`; below 1e-8 the series 1 − r/2 + r²/3 is used.
pub fn shrink_factor(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shrink_factor needs r >= 0, got {r}"
        )));
    }
    if r < 1e-8 {
        Ok(1.0 - r / 2.0 + r * r / 3.0)
    } else {
        Ok(r.ln_1p() / r)
    }
}

/// stretch(y) = a(‖y‖) · y, the point of norm e^{‖y‖} − 1 on the ray of y.
pub fn stretch_point(space: &Space, y: &Point) -> Result<Point> {
    require_normed(space, "stretch_point")?;
    space.scale(stretch_factor(space.norm(y)?)?, y)
}

/// shrink(y) = log(1 + ‖y‖)/‖y‖ · y, the point of norm log(1 + ‖y‖) on
/// the ray of y.
pub fn shrink_point(space: &Space, y: &Point) -> Result<Point> {
    require_normed(space, "shrink_point")?;
    space.scale(shrink_factor(space.norm(y)?)?, y)
}

/// compress(g)(x) = e^{−‖x‖} g(stretch(x)); fixes the value at the origin.
///
/// When g carries a Lipschitz certificate L, the result carries
/// sup ≤ |g(0)| + L and Lipschitz ≤ L + sup, the constants that make the
/// image bounded Lipschitz.
pub fn compress(space: &Space, g: &RealFunction) -> Result<RealFunction> {
    require_normed(space, "compress")?;
    let sp = space.clone();
    let inner = g.clone();
    let mut out = RealFunction::try_new(format!("compress({})", g.label()), move |x| {
        let r = sp.norm(x)?;
        let stretched = sp.scale(stretch_factor(r)?, x)?;
        Ok((-r).exp() * inner.eval(&stretched)?)
    });
    if let Some(lip) = g.claimed_lip() {
        let at_origin = g.eval(&space.base_point())?.abs();
        let sup_bound = match g.claimed_sup() {
            Some(s) => s.min(at_origin + lip),
            None => at_origin + lip,
        };
        out = out.with_sup(sup_bound).with_lip(lip + sup_bound);
    }
    Ok(out)
}

/// expand(f)(y) = (1 + ‖y‖) f(shrink(y)); fixes the value at the origin.
///
/// On the line, a bounded Lipschitz certificate (L, S) yields the
/// Lipschitz certificate S + L for the image; no certificate is attached
/// in dimension ≥ 2, where the bound fails.
pub fn expand(space: &Space, f: &RealFunction) -> Result<RealFunction> {
    require_normed(space, "expand")?;
    let sp = space.clone();
    let inner = f.clone();
    let mut out = RealFunction::try_new(format!("expand({})", f.label()), move |y| {
        let r = sp.norm(y)?;
        let shrunk = sp.scale(shrink_factor(r)?, y)?;
        Ok((1.0 + r) * inner.eval(&shrunk)?)
    });
    let one_dimensional = matches!(space, Space::HalfLine) || space.dim() == Some(1);
    if one_dimensional {
        if let (Some(lip), Some(sup)) = (f.claimed_lip(), f.claimed_sup()) {
            out = out.with_lip(sup + lip);
        }
    }
    Ok(out)
}

/// Worst relative round-trip error over the plan's sampled points:
/// the larger of max |expand(compress g) − g| and max |compress(expand g) − g|,
/// each scaled by max(1, |g|).
pub fn round_trip_error(space: &Space, g: &RealFunction, plan: &SamplingPlan) -> Result<f64> {
    plan.validate_for(space)?;
    let there_and_back = expand(space, &compress(space, g)?)?;
    let back_and_there = compress(space, &expand(space, g)?)?;
    let mut worst: f64 = 0.0;
    for pair in plan.pairs(space) {
        let (x, y) = pair?;
        for p in [x, y] {
            let v = g.eval(&p)?;
            let scale = v.abs().max(1.0);
            worst = worst.max((there_and_back.eval(&p)? - v).abs() / scale);
            worst = worst.max((back_and_there.eval(&p)? - v).abs() / scale);
        }
    }
    Ok(worst)
}

/// Margins of the two bounds that make `compress` land in the bounded
/// Lipschitz functions: sup |compress g| ≤ |g(0)| + L(g) and
/// L(compress g) ≤ L(g) + sup |compress g|.
#[derive(Debug, Clone)]
pub struct CompressBoundsReport {
    pub sup_check: VerifyReport,
    pub lip_check: VerifyReport,
}

impl CompressBoundsReport {
    pub fn passed(&self) -> bool {
        self.sup_check.passed && self.lip_check.passed
    }
}

/// Verify the bounds above for a function with a Lipschitz certificate;
/// `tol` is the additive tolerance on each inequality.
pub fn verify_compress_bounds(
    space: &Space,
    g: &RealFunction,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<CompressBoundsReport> {
    let lip = g.claimed_lip().ok_or_else(|| {
        Error::InvalidParameter(format!("`{}` carries no Lipschitz certificate", g.label()))
    })?;
    let compressed = compress(space, g)?;
    let report = estimate_lip(&compressed, space, plan)?;
    let sup_bound = g.eval(&space.base_point())?.abs() + lip;
    let lip_bound = lip + report.empirical_sup;
    let witness = Some(PairWitness {
        x: report.extremal_pair.0.clone(),
        y: report.extremal_pair.1.clone(),
        lhs: report.empirical_lip,
        rhs: lip_bound,
    });
    Ok(CompressBoundsReport {
        sup_check: VerifyReport {
            passed: report.empirical_sup <= sup_bound + tol,
            margin: sup_bound + tol - report.empirical_sup,
            witness: None,
        },
        lip_check: VerifyReport {
            passed: report.empirical_lip <= lip_bound + tol,
            margin: lip_bound + tol - report.empirical_lip,
            witness,
        },
    })
}

/// Verify on the line that `expand` keeps bounded Lipschitz functions
/// Lipschitz: L(expand f) ≤ sup |f| + L(f) + tol.
pub fn verify_expand_bound_on_line(
    f: &RealFunction,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<VerifyReport> {
    let (lip, sup) = match (f.claimed_lip(), f.claimed_sup()) {
        (Some(l), Some(s)) => (l, s),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "`{}` needs both Lipschitz and sup certificates",
                f.label()
            )))
        }
    };
    let line = Space::euclidean(1).expect("dim 1");
    let expanded = expand(&line, f)?;
    let report = estimate_lip(&expanded, &line, plan)?;
    let bound = sup + lip;
    Ok(VerifyReport {
        passed: report.empirical_lip <= bound + tol,
        margin: bound + tol - report.empirical_lip,
        witness: Some(PairWitness {
            x: report.extremal_pair.0,
            y: report.extremal_pair.1,
            lhs: report.empirical_lip,
            rhs: bound,
        }),
    })
}

/// Worst relative error of compress(f g / w0) = compress(f) · compress(g)
/// over the plan's sampled points, where w0 = 1 + ‖·‖.
pub fn verify_compress_multiplicative(
    space: &Space,
    f: &RealFunction,
    g: &RealFunction,
    plan: &SamplingPlan,
) -> Result<f64> {
    plan.validate_for(space)?;
    let weight = RealFunction::base_weight(space);
    let lhs = compress(space, &f.product(g).quotient(&weight))?;
    let rhs = compress(space, f)?.product(&compress(space, g)?);
    let mut worst: f64 = 0.0;
    for pair in plan.pairs(space) {
        let (x, y) = pair?;
        for p in [x, y] {
            let a = lhs.eval(&p)?;
            let b = rhs.eval(&p)?;
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Verify the expansion bound ‖stretch(y) − stretch(x)‖ ≤
/// e^{max(‖x‖, ‖y‖)} ‖y − x‖ on every sampled pair.
pub fn verify_stretch_expansion(
    space: &Space,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<VerifyReport> {
    plan.validate_for(space)?;
    require_normed(space, "verify_stretch_expansion")?;
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for pair in plan.pairs(space) {
        let (x, y) = pair?;
        let lhs = space.distance(&stretch_point(space, &x)?, &stretch_point(space, &y)?);
        let rhs = space.norm(&x)?.max(space.norm(&y)?).exp() * space.distance(&x, &y);
        let m = rhs * (1.0 + tol) - lhs;
        if m < margin {
            margin = m;
            witness = Some(PairWitness { x: x.clone(), y: y.clone(), lhs, rhs });
        }
        if m < 0.0 {
            return Ok(VerifyReport { passed: false, margin: m, witness });
        }
    }
    Ok(VerifyReport { passed: true, margin, witness })
}

fn require_normed(space: &Space, op: &'static str) -> Result<()> {
    if space.is_normed() {
        Ok(())
    } else {
        Err(Error::UnsupportedSpace {
            op,
            space: space.name(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line() -> Space {
        Space::euclidean(1).unwrap()
    }

    #[test]
    fn stretch_factor_values() {
        assert_eq!(stretch_factor(0.0).unwrap(), 1.0);
        assert_relative_eq!(
            stretch_factor(1.0).unwrap(),
            std::f64::consts::E - 1.0,
            max_relative = 1e-15
        );
        // Series oracle near zero.
        let t = 1e-12;
        assert!((stretch_factor(t).unwrap() - (1.0 + 5e-13)).abs() < 1e-15);
        assert!(stretch_factor(-1.0).is_err());
    }

    #[test]
    fn stretch_factor_deriv_matches_series_and_identity() {
        // Series vs closed form agree around the switch point.
        for t in [5e-4f64, 1e-3, 2e-3, 0.1, 1.0, 5.0] {
            let closed = (t.exp() * (t - 1.0) + 1.0) / (t * t);
            let got = stretch_factor_deriv(t).unwrap();
            assert_relative_eq!(got, closed, max_relative = 1e-9);
        }
        assert_eq!(stretch_factor_deriv(0.0).unwrap(), 0.5);
    }

    #[test]
    fn shrink_factor_values() {
        assert_eq!(shrink_factor(0.0).unwrap(), 1.0);
        assert_relative_eq!(shrink_factor(1.0).unwrap(), 2f64.ln(), max_relative = 1e-15);
        let r = 1e-12;
        assert!((shrink_factor(r).unwrap() - (1.0 - 5e-13)).abs() < 1e-15);
    }

    #[test]
    fn stretch_point_norm_is_expm1() {
        let space = Space::euclidean(2).unwrap();
        for (a, b) in [(0.5, 1.0), (3.0, -4.0), (0.0, 0.0), (1e-9, 0.0)] {
            let y = Point::vector([a, b]);
            let stretched = stretch_point(&space, &y).unwrap();
            let r = space.norm(&y).unwrap();
            assert_relative_eq!(
                space.norm(&stretched).unwrap(),
                r.exp_m1(),
                max_relative = 1e-12,
                epsilon = 1e-300
            );
        }
        // Fixed point at the origin.
        assert_eq!(
            stretch_point(&space, &space.base_point()).unwrap(),
            space.base_point()
        );
        // On the line: stretch(1) = e - 1.
        let l = line();
        let p = stretch_point(&l, &Point::vector([1.0])).unwrap();
        assert_relative_eq!(
            p.first_coord(),
            std::f64::consts::E - 1.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn shrink_inverts_stretch() {
        let space = Space::euclidean(3).unwrap();
        let y = Point::vector([1.0, -2.0, 0.5]);
        let back = shrink_point(&space, &stretch_point(&space, &y).unwrap()).unwrap();
        let err = space.distance(&back, &y);
        assert!(err <= 1e-12 * space.norm(&y).unwrap());
    }

    #[test]
    fn transforms_reject_non_normed_spaces() {
        let fibers = Space::interval_fibers();
        assert!(stretch_point(&fibers, &Point::fiber(1, 0.0)).is_err());
        assert!(compress(&fibers, &RealFunction::constant(1.0)).is_err());
        let rem = Space::bounded_remetrized(line());
        assert!(expand(&rem, &RealFunction::constant(1.0)).is_err());
    }

    #[test]
    fn compress_of_weight_is_constant_one() {
        let space = Space::euclidean(2).unwrap();
        let w = RealFunction::base_weight(&space);
        let c = compress(&space, &w).unwrap();
        for p in [
            Point::vector([0.0, 0.0]),
            Point::vector([1.0, 1.0]),
            Point::vector([-5.0, 2.0]),
        ] {
            assert_relative_eq!(c.eval(&p).unwrap(), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn compress_fixes_origin_value() {
        let space = line();
        let g = RealFunction::new("x+5", |p| p.first_coord() + 5.0).with_lip(1.0);
        let c = compress(&space, &g).unwrap();
        assert_eq!(c.eval(&space.base_point()).unwrap(), 5.0);
    }

    #[test]
    fn compress_of_identity_on_half_line() {
        let h = Space::half_line();
        let g = RealFunction::coordinate(0);
        let c = compress(&h, &g).unwrap();
        for t in [0.0, 0.3, 1.0, 4.0] {
            assert_relative_eq!(
                c.eval(&Point::half_line(t)).unwrap(),
                1.0 - (-t).exp(),
                max_relative = 1e-13,
                epsilon = 1e-300
            );
        }
    }

    #[test]
    fn expand_of_constant_is_weight() {
        let space = Space::euclidean(2).unwrap();
        let e = expand(&space, &RealFunction::constant(1.0)).unwrap();
        let w = RealFunction::base_weight(&space);
        for p in [Point::vector([0.0, 0.0]), Point::vector([3.0, 4.0])] {
            assert_relative_eq!(
                e.eval(&p).unwrap(),
                w.eval(&p).unwrap(),
                max_relative = 1e-13
            );
        }
        assert_eq!(e.eval(&space.base_point()).unwrap(), 1.0);
    }

    #[test]
    fn expand_inverts_compress_of_identity_on_half_line() {
        let h = Space::half_line();
        let f = RealFunction::new("1-exp(-s)", |p| 1.0 - (-p.first_coord()).exp());
        let e = expand(&h, &f).unwrap();
        for t in [0.0, 0.5, 2.0, 9.0] {
            assert_relative_eq!(
                e.eval(&Point::half_line(t)).unwrap(),
                t,
                max_relative = 1e-12,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn round_trips_are_tight() {
        let plan = SamplingPlan::uniform(41, 5000, 10.0);
        let space = line();
        let w = RealFunction::base_weight(&space);
        assert!(round_trip_error(&space, &w, &plan).unwrap() <= 1e-9 * 11.0);

        let sin = RealFunction::new("sin", |p| p.first_coord().sin());
        assert!(round_trip_error(&space, &sin, &plan).unwrap() <= 1e-9);

        let plane = Space::euclidean(2).unwrap();
        let capped = RealFunction::radial(&plane, "min(1,|x|)", |r| r.min(1.0)).unwrap();
        assert!(round_trip_error(&plane, &capped, &plan).unwrap() <= 1e-9);
    }

    #[test]
    fn compress_bounds_hold_for_certified_functions() {
        let space = line();
        let plan = SamplingPlan::uniform(43, 20_000, 10.0);
        let w = RealFunction::base_weight(&space);
        let report = verify_compress_bounds(&space, &w, &plan, 1e-6).unwrap();
        assert!(report.passed());
        // compress(weight) is constant, so both sides are slack.
        assert!(report.sup_check.margin >= 1.0);

        let id = RealFunction::coordinate(0);
        let report = verify_compress_bounds(&space, &id, &plan, 1e-6).unwrap();
        assert!(report.passed());

        let sin = RealFunction::new("sin", |p| p.first_coord().sin())
            .with_lip(1.0)
            .with_sup(1.0);
        let report = verify_compress_bounds(&space, &sin, &plan, 1e-6).unwrap();
        assert!(report.passed());
        assert!(report.sup_check.margin >= 0.0 && report.lip_check.margin >= 0.0);
    }

    #[test]
    fn expand_bound_on_line_holds() {
        let plan = SamplingPlan::uniform(47, 50_000, 10.0);
        let one = RealFunction::constant(1.0);
        let report = verify_expand_bound_on_line(&one, &plan, 1e-6).unwrap();
        assert!(report.passed);

        let sin = RealFunction::new("sin", |p| p.first_coord().sin())
            .with_lip(1.0)
            .with_sup(1.0);
        let report = verify_expand_bound_on_line(&sin, &plan, 1e-6).unwrap();
        assert!(report.passed);

        let half = sin.scale(0.5);
        let report = verify_expand_bound_on_line(&half, &plan, 1e-6).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn transforms_attach_certified_constants() {
        let space = line();
        let plan = SamplingPlan::uniform(67, 20_000, 10.0);
        let sin = RealFunction::new("sin", |p| p.first_coord().sin())
            .with_lip(1.0)
            .with_sup(1.0);

        // sup bound min(S, |g(0)| + L) = 1, Lipschitz bound L + sup = 2.
        let c = compress(&space, &sin).unwrap();
        assert_eq!(c.claimed_sup(), Some(1.0));
        assert_eq!(c.claimed_lip(), Some(2.0));
        crate::function::verify_certificates(&c, &space, &plan).unwrap();

        // Expansion bound sup + L, attached in dimension 1 only.
        let e = expand(&space, &sin).unwrap();
        assert_eq!(e.claimed_lip(), Some(2.0));
        crate::function::verify_certificates(&e, &space, &plan).unwrap();

        let h = Space::half_line();
        let capped = RealFunction::new("min(1,t)", |p| p.first_coord().min(1.0))
            .with_lip(1.0)
            .with_sup(1.0);
        assert_eq!(expand(&h, &capped).unwrap().claimed_lip(), Some(2.0));

        let plane = Space::euclidean(2).unwrap();
        let planar = RealFunction::radial(&plane, "min(1,|x|)", |r| r.min(1.0))
            .unwrap()
            .with_lip(1.0)
            .with_sup(1.0);
        assert_eq!(expand(&plane, &planar).unwrap().claimed_lip(), None);
    }

    #[test]
    fn multiplicativity_examples() {
        let space = line();
        let plan = SamplingPlan::uniform(53, 5000, 10.0);
        let w = RealFunction::base_weight(&space);
        let err = verify_compress_multiplicative(&space, &w, &w, &plan).unwrap();
        assert!(err <= 1e-12);

        let g = RealFunction::new("sin", |p| p.first_coord().sin());
        let err = verify_compress_multiplicative(&space, &w, &g, &plan).unwrap();
        assert!(err <= 1e-12, "unit slot should be exact up to rounding, got {err}");

        let id = RealFunction::coordinate(0);
        let err = verify_compress_multiplicative(&space, &id, &g, &plan).unwrap();
        assert!(err <= 1e-9);
    }

    #[test]
    fn compress_is_a_lattice_homomorphism_pointwise() {
        let space = Space::euclidean(2).unwrap();
        let f = RealFunction::new("sin(x1)", |p| p.first_coord().sin());
        let g = RealFunction::radial(&space, "1-|x|", |r| 1.0 - r).unwrap();
        let lhs = compress(&space, &f.join(&g)).unwrap();
        let rhs = compress(&space, &f).unwrap().join(&compress(&space, &g).unwrap());
        let plan = SamplingPlan::uniform(59, 2000, 10.0);
        for pair in plan.pairs(&space) {
            let (x, y) = pair.unwrap();
            for p in [x, y] {
                assert_eq!(
                    lhs.eval(&p).unwrap().to_bits(),
                    rhs.eval(&p).unwrap().to_bits()
                );
            }
        }
    }

    #[test]
    fn stretch_expansion_inequality_holds() {
        for dim in [1, 2, 3] {
            let space = Space::euclidean(dim).unwrap();
            let plan = SamplingPlan::uniform(61, 5000, 5.0);
            let report = verify_stretch_expansion(&space, &plan, 1e-6).unwrap();
            assert!(report.passed, "failed in dimension {dim}");
        }
    }
}
