//! The fixed registry of verification checks.
//!
//! Each check verifies one named identity or inequality (its anchor) and
//! reports a pass/fail status with the observed margin and a witness.
//! Report record order is registry order, independent of execution order.

use serde_json::{json, Value};

use lattice_lab_core::counterexamples::{
    blowup_function, blowup_witnesses, dyadic_sawtooth, fiber_counterexample, fiber_functions,
};
use lattice_lab_core::fring::{
    check_fring_axioms, check_homomorphism, find_approximating_point, verify_intertwining,
    verify_uc_of_product, ApproxSearch, FRingProduct, PointEvaluation,
};
use lattice_lab_core::function::ABS_SLACK;
use lattice_lab_core::transforms::{
    compress, expand, round_trip_error, shrink_factor, stretch_factor, stretch_factor_deriv,
    verify_compress_bounds, verify_compress_multiplicative, verify_expand_bound_on_line,
    verify_stretch_expansion,
};
use lattice_lab_core::{
    check_metric_axioms, corpus, dominance_ratio, estimate_lip, Point, RealFunction, Result,
    SamplingPlan, Space, Strategy,
};

use crate::config::{ResolvedConfig, Suite};
use crate::report::Curve;

/// What one check produced.
pub struct CheckOutcome {
    pub passed: bool,
    pub margin: f64,
    pub witness: Option<Value>,
    pub curves: Vec<Curve>,
}

impl CheckOutcome {
    fn simple(passed: bool, margin: f64) -> Self {
        CheckOutcome {
            passed,
            margin,
            witness: None,
            curves: Vec::new(),
        }
    }
}

pub struct CheckDef {
    pub name: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
    pub run: fn(&ResolvedConfig) -> Result<CheckOutcome>,
}

impl CheckDef {
    pub fn in_suite(&self, suite: Suite) -> bool {
        suite == Suite::All || self.suite == suite
    }
}

pub const REGISTRY: &[CheckDef] = &[
    // ---- transforms ----------------------------------------------------
    CheckDef {
        name: "metric-axioms",
        anchor: "d(x,y) = d(y,x) >= 0, d(x,x) = 0, d(x,z) <= d(x,y) + d(z,y) on sampled triples of every space kind",
        suite: Suite::Transforms,
        run: metric_axioms,
    },
    CheckDef {
        name: "stretch-factor-shape",
        anchor: "a(t) = (e^t - 1)/t: a(0) = 1, increasing; a(t) - a(s) <= a'(t)(t - s) with a'(t) = (e^t(t-1)+1)/t^2",
        suite: Suite::Transforms,
        run: stretch_factor_shape,
    },
    CheckDef {
        name: "stretch-consistency",
        anchor: "a(log(1+r)) log(1+r) = r and |stretch(y) - stretch(x)| <= e^max(|x|,|y|) |y - x|",
        suite: Suite::Transforms,
        run: stretch_consistency,
    },
    CheckDef {
        name: "round-trip",
        anchor: "expand(compress(g)) = g = compress(expand(g)) pointwise on R^1, R^2, R^3",
        suite: Suite::Transforms,
        run: round_trip,
    },
    CheckDef {
        name: "compress-bounds",
        anchor: "sup|compress(g)| <= |g(0)| + L(g) and L(compress(g)) <= L(g) + sup|compress(g)|",
        suite: Suite::Transforms,
        run: compress_bounds,
    },
    CheckDef {
        name: "compress-lattice-homomorphism",
        anchor: "compress(f v g) = compress(f) v compress(g) pointwise, bitwise",
        suite: Suite::Transforms,
        run: compress_lattice_homomorphism,
    },
    CheckDef {
        name: "expand-bound-on-line",
        anchor: "L(expand(f)) <= sup|f| + L(f) for bounded Lipschitz f on the line",
        suite: Suite::Transforms,
        run: expand_bound_on_line,
    },
    CheckDef {
        name: "compress-multiplicative",
        anchor: "compress(f g / w) = compress(f) compress(g) with w = 1 + |.|",
        suite: Suite::Transforms,
        run: compress_multiplicative,
    },
    CheckDef {
        name: "remetrized-equivalence",
        anchor: "d' = d/(1+d) is a metric, bounded by 1, uniformly equivalent to d; bounded Lipschitz transfers with L' <= max(2L, 4 sup)",
        suite: Suite::Transforms,
        run: remetrized_equivalence,
    },
    // ---- fring ---------------------------------------------------------
    CheckDef {
        name: "fring-axioms-euclidean",
        anchor: "M(f,g) = f g / u: commutative, associative, distributive, |M(f,g)| = M(|f|,|g|), for u = 1+|.| and a perturbed dominant unit",
        suite: Suite::Fring,
        run: fring_axioms_euclidean,
    },
    CheckDef {
        name: "fring-axioms-fibers",
        anchor: "the same f-ring axioms for M(f,g) = f g / u on the interval fibers",
        suite: Suite::Fring,
        run: fring_axioms_fibers,
    },
    CheckDef {
        name: "fring-unit-law",
        anchor: "M(f, u) = M(u, f) = f pointwise",
        suite: Suite::Fring,
        run: fring_unit_law,
    },
    CheckDef {
        name: "product-uc-bound",
        anchor: "|M(f,g)(x) - M(f,g)(y)| <= |f(x)-f(y)||g(y)|/u(y) + |g(x)-g(y)||f(x)|/u(x) + |f(x) g(y)||u(x)-u(y)|/min(u)^2",
        suite: Suite::Fring,
        run: product_uc_bound,
    },
    CheckDef {
        name: "dominance",
        anchor: "|f| <= max(|f(0)|, L(f)) (1 + d): dominance ratios stay bounded across radii 10, 100, 1000",
        suite: Suite::Fring,
        run: dominance,
    },
    CheckDef {
        name: "intertwining",
        anchor: "M_y(Psi f, Psi g) = Psi(M_z(f, g)) with Psi f = w_y f / w_z, for sampled centers y, z",
        suite: Suite::Fring,
        run: intertwining,
    },
    CheckDef {
        name: "compress-links-products",
        anchor: "compress(M_w(f, g)) = compress(f) compress(g) on Euclidean spaces",
        suite: Suite::Fring,
        run: compress_links_products,
    },
    CheckDef {
        name: "point-evaluation-homomorphism",
        anchor: "phi(f) = c f(x) with c >= 0 is additive, homogeneous and join-preserving",
        suite: Suite::Fring,
        run: point_evaluation_homomorphism,
    },
    CheckDef {
        name: "evaluation-density-search",
        anchor: "realized targets admit a sampled x with |target_i - f_i(x)/h(x)| < eps; unreachable targets report the best error",
        suite: Suite::Fring,
        run: evaluation_density_search,
    },
    // ---- phi-blowup ------------------------------------------------------
    CheckDef {
        name: "blowup-ratios",
        anchor: "tangential quotients of expand(min(1,|x2|)) at radius r reach at least (1+r) log(1+r) / (2r)",
        suite: Suite::PhiBlowup,
        run: blowup_ratios,
    },
    CheckDef {
        name: "blowup-growth",
        anchor: "the found tangential ratios increase strictly along the radii and exceed 3 at the largest",
        suite: Suite::PhiBlowup,
        run: blowup_growth,
    },
    CheckDef {
        name: "blowup-line-contrast",
        anchor: "the transverse profile min(1,|s|) on the line expands with L <= sup + L: the blow-up is a dimension >= 2 effect",
        suite: Suite::PhiBlowup,
        run: blowup_line_contrast,
    },
    CheckDef {
        name: "dyadic-sawtooth",
        anchor: "h(2^k) = 0 for even k and 1 + 2^k for odd k, exactly; L(h) = 3",
        suite: Suite::PhiBlowup,
        run: dyadic_sawtooth_check,
    },
    // ---- fiber -----------------------------------------------------------
    CheckDef {
        name: "fiber-exact-values",
        anchor: "M(f,g)(0,n) = 0 and M(f,g)(1,n) = n for f = t, g = n u(1,n), M(f,g) = f g / u",
        suite: Suite::Fiber,
        run: fiber_exact_values,
    },
    CheckDef {
        name: "fiber-gap-witnesses",
        anchor: "for every candidate unit, every fiber n has a pair at distance <= 1/n with |M(f,g)| gap >= 1/2: no unit makes the product uniformly continuous",
        suite: Suite::Fiber,
        run: fiber_gap_witnesses,
    },
    CheckDef {
        name: "fiber-exact-witness",
        anchor: "with u = 1 + d(., (0,1)) the pair ((0,n), (1/n,n)) has gap 1 for n >= 2",
        suite: Suite::Fiber,
        run: fiber_exact_witness,
    },
];

// ---- shared helpers ------------------------------------------------------

fn euclidean(dim: usize) -> Space {
    Space::euclidean(dim).expect("dim >= 1")
}

fn plan(cfg: &ResolvedConfig) -> SamplingPlan {
    SamplingPlan::uniform(cfg.seed, cfg.num_pairs, cfg.radius_bound)
}

/// A reduced plan for pointwise identity sweeps over function tuples.
fn small_plan(cfg: &ResolvedConfig) -> SamplingPlan {
    SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(500), cfg.radius_bound)
}

fn fiber_plan(cfg: &ResolvedConfig) -> SamplingPlan {
    SamplingPlan::new(
        cfg.seed,
        cfg.num_pairs.min(2000),
        1.0,
        Strategy::FiberPairs {
            max_fiber: cfg.max_fiber,
        },
    )
}

fn witness_value(w: &lattice_lab_core::PairWitness) -> Value {
    serde_json::to_value(w).expect("witness serializes")
}

/// Fold a relative-error style result into an outcome: pass iff the worst
/// error stays within the identity tolerance.
fn identity_outcome(worst: f64, tol: f64, witness: Option<Value>) -> CheckOutcome {
    CheckOutcome {
        passed: worst <= tol,
        margin: tol - worst,
        witness,
        curves: Vec::new(),
    }
}

// ---- transforms checks -----------------------------------------------------

fn metric_axioms(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut margin = f64::INFINITY;
    let mut passed = true;
    let mut witness = None;
    let spaces = vec![
        euclidean(1),
        euclidean(cfg.dimension.max(2)),
        Space::half_line(),
        Space::interval_fibers(),
        Space::bounded_remetrized(euclidean(cfg.dimension)),
    ];
    for space in spaces {
        let plan = match space.geometry() {
            Space::IntervalFibers => fiber_plan(cfg),
            _ => SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(5000), cfg.radius_bound),
        };
        let report = check_metric_axioms(&space, &plan)?;
        if report.margin < margin {
            margin = report.margin;
            witness = report.witness.as_ref().map(witness_value);
        }
        passed &= report.passed;
    }
    Ok(CheckOutcome {
        passed,
        margin,
        witness,
        curves: Vec::new(),
    })
}

fn stretch_factor_shape(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = Space::half_line();
    let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(5000), cfg.radius_bound);
    if stretch_factor(0.0)? != 1.0 {
        return Ok(CheckOutcome::simple(false, -1.0));
    }
    let mut margin = f64::INFINITY;
    for pair in plan.pairs(&space) {
        let (x, y) = pair?;
        let (s, t) = (x.first_coord().min(y.first_coord()), x.first_coord().max(y.first_coord()));
        let (a_s, a_t) = (stretch_factor(s)?, stretch_factor(t)?);
        // Increasing, with values >= 1.
        let monotone = (a_t - a_s) + 1e-12 * a_t;
        // Convex: a(t) - a(s) <= a'(t)(t - s).
        let bound = stretch_factor_deriv(t)? * (t - s);
        let convex = bound * (1.0 + cfg.tolerance.inequality) + ABS_SLACK - (a_t - a_s);
        margin = margin.min(monotone.min(convex).min(a_s - 1.0 + 1e-12));
    }
    Ok(CheckOutcome::simple(margin >= 0.0, margin))
}

fn stretch_consistency(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    // Composition identity along sampled radii.
    let space = Space::half_line();
    let line_plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(5000), cfg.radius_bound);
    let mut worst = 0.0f64;
    for pair in line_plan.pairs(&space) {
        let (x, y) = pair?;
        for r in [x.first_coord(), y.first_coord()] {
            let t = r.ln_1p();
            let back = stretch_factor(t)? * t;
            worst = worst.max((back - r).abs() / r.max(1.0));
            // shrink and stretch factors are mutually consistent too.
            let s = shrink_factor(r)? * r; // = log(1+r)
            worst = worst.max((stretch_factor(s)? * s - r).abs() / r.max(1.0));
        }
    }
    if worst > cfg.tolerance.identity {
        return Ok(CheckOutcome::simple(false, cfg.tolerance.identity - worst));
    }
    // Expansion inequality for the stretch map on the plane.
    let plane = euclidean(cfg.dimension.max(2));
    let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(5000), cfg.radius_bound.min(20.0));
    let report = verify_stretch_expansion(&plane, &plan, cfg.tolerance.inequality)?;
    Ok(CheckOutcome {
        passed: report.passed,
        margin: report.margin.min(cfg.tolerance.identity - worst),
        witness: report.witness.as_ref().map(witness_value),
        curves: Vec::new(),
    })
}

fn round_trip(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    for dim in [1, 2, 3] {
        let space = euclidean(dim);
        let plan = plan(cfg);
        for g in corpus::lipschitz(&space) {
            let err = round_trip_error(&space, &g, &plan)?;
            if err > worst {
                worst = err;
                worst_label = format!("{} on R^{dim}", g.label());
            }
        }
    }
    Ok(identity_outcome(
        worst,
        cfg.tolerance.identity,
        Some(json!({ "worst_function": worst_label })),
    ))
}

fn compress_bounds(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut margin = f64::INFINITY;
    let mut passed = true;
    let mut witness = None;
    for dim in [1, cfg.dimension.max(2)] {
        let space = euclidean(dim);
        for g in corpus::lipschitz(&space) {
            let report = verify_compress_bounds(&space, &g, &plan(cfg), cfg.tolerance.inequality)?;
            for check in [&report.sup_check, &report.lip_check] {
                if check.margin < margin {
                    margin = check.margin;
                    witness = check.witness.as_ref().map(witness_value);
                }
                passed &= check.passed;
            }
        }
    }
    Ok(CheckOutcome {
        passed,
        margin,
        witness,
        curves: Vec::new(),
    })
}

fn compress_lattice_homomorphism(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = euclidean(cfg.dimension);
    let family = corpus::lipschitz(&space);
    let plan = small_plan(cfg);
    let mut worst = 0.0f64;
    for f in &family {
        for g in &family {
            let lhs = compress(&space, &f.join(g))?;
            let rhs = compress(&space, f)?.join(&compress(&space, g)?);
            for pair in plan.pairs(&space) {
                let (x, y) = pair?;
                for p in [x, y] {
                    let a = lhs.eval(&p)?;
                    let b = rhs.eval(&p)?;
                    worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
                }
            }
        }
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, None))
}

fn expand_bound_on_line(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let line = euclidean(1);
    let mut margin = f64::INFINITY;
    let mut passed = true;
    let mut witness = None;
    for f in corpus::bounded_lipschitz(&line) {
        let report = verify_expand_bound_on_line(&f, &plan(cfg), cfg.tolerance.inequality)?;
        if report.margin < margin {
            margin = report.margin;
            witness = report.witness.as_ref().map(witness_value);
        }
        passed &= report.passed;
    }
    Ok(CheckOutcome {
        passed,
        margin,
        witness,
        curves: Vec::new(),
    })
}

fn compress_multiplicative(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for dim in [1, cfg.dimension.max(2)] {
        let space = euclidean(dim);
        let family = corpus::lipschitz(&space);
        let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(2000), cfg.radius_bound);
        for f in &family {
            for g in &family {
                worst = worst.max(verify_compress_multiplicative(&space, f, g, &plan)?);
            }
        }
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, None))
}

fn remetrized_equivalence(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let base = euclidean(cfg.dimension);
    let space = Space::bounded_remetrized(base.clone());
    let plan = plan(cfg);
    let axioms = check_metric_axioms(&space, &plan)?;
    if !axioms.passed {
        return Ok(CheckOutcome {
            passed: false,
            margin: axioms.margin,
            witness: axioms.witness.as_ref().map(witness_value),
            curves: Vec::new(),
        });
    }
    let mut margin = axioms.margin;
    for pair in plan.pairs(&space) {
        let (x, y) = pair?;
        let d_new = space.distance(&x, &y);
        let d_base = base.distance(&x, &y);
        // Bounded by 1, below the base metric, and equivalent on small scales.
        margin = margin.min(1.0 - d_new);
        margin = margin.min(d_base + ABS_SLACK - d_new);
        if d_new < 0.5 {
            margin = margin.min(2.0 * d_new + ABS_SLACK - d_base);
        }
        if margin < 0.0 {
            return Ok(CheckOutcome::simple(false, margin));
        }
    }
    // Bounded Lipschitz functions stay Lipschitz for the new metric.
    for f in corpus::bounded_lipschitz(&space) {
        let (lip, sup) = (f.claimed_lip().unwrap_or(0.0), f.claimed_sup().unwrap_or(0.0));
        let bound = (2.0 * lip).max(4.0 * sup);
        let report = estimate_lip(&f, &space, &plan)?;
        margin = margin.min(bound * (1.0 + cfg.tolerance.inequality) - report.empirical_lip);
    }
    Ok(CheckOutcome::simple(margin >= 0.0, margin))
}

// ---- fring checks ----------------------------------------------------------

fn axiom_family(space: &Space) -> Vec<RealFunction> {
    match space.geometry() {
        Space::IntervalFibers => corpus::lipschitz(space).into_iter().take(4).collect(),
        _ => vec![
            RealFunction::base_weight(space),
            RealFunction::constant(1.0),
            RealFunction::coordinate(0),
            RealFunction::new("sin(x1)", |p: &Point| p.first_coord().sin()),
        ],
    }
}

fn fring_axioms_euclidean(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = euclidean(cfg.dimension);
    let plan = small_plan(cfg);
    let family = axiom_family(&space);
    let mut worst = 0.0f64;
    let mut witness = None;
    for unit in corpus::positive_units(&space) {
        let product = FRingProduct::with_unit(unit, &space, &plan)?;
        let report = check_fring_axioms(&product, &family, &space, &plan, cfg.tolerance.identity)?;
        if !report.passed() || report.worst_error() > worst {
            worst = worst.max(report.worst_error());
            witness = report
                .records
                .iter()
                .max_by(|a, b| a.error.total_cmp(&b.error))
                .and_then(|r| r.witness.as_ref().map(witness_value));
        }
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, witness))
}

fn fring_axioms_fibers(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = Space::interval_fibers();
    let plan = SamplingPlan::new(
        cfg.seed,
        cfg.num_pairs.min(500),
        1.0,
        Strategy::FiberPairs {
            max_fiber: cfg.max_fiber,
        },
    );
    let family = axiom_family(&space);
    let mut worst = 0.0f64;
    for unit in corpus::positive_units(&space) {
        let product = FRingProduct::with_unit(unit, &space, &plan)?;
        let report = check_fring_axioms(&product, &family, &space, &plan, cfg.tolerance.identity)?;
        worst = worst.max(report.worst_error());
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, None))
}

fn fring_unit_law(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for space in [euclidean(cfg.dimension), Space::interval_fibers()] {
        let plan = match space.geometry() {
            Space::IntervalFibers => fiber_plan(cfg),
            _ => SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(5000), cfg.radius_bound),
        };
        for unit in corpus::positive_units(&space) {
            let product = FRingProduct::with_unit(unit.clone(), &space, &plan)?;
            for f in corpus::lipschitz(&space) {
                let left = product.apply(&f, &unit);
                let right = product.apply(&unit, &f);
                for pair in plan.pairs(&space) {
                    let (x, y) = pair?;
                    for p in [x, y] {
                        let v = f.eval(&p)?;
                        let scale = v.abs().max(1.0);
                        worst = worst.max((left.eval(&p)? - v).abs() / scale);
                        worst = worst.max((right.eval(&p)? - v).abs() / scale);
                    }
                }
            }
        }
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, None))
}

fn product_uc_bound(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = euclidean(cfg.dimension);
    let plan = plan(cfg);
    let unit = RealFunction::base_weight(&space);
    let product = FRingProduct::with_unit(unit, &space, &plan)?;
    let family = corpus::bounded_lipschitz(&space);
    let mut margin = f64::INFINITY;
    let mut passed = true;
    let mut witness = None;
    let mut curves = Vec::new();
    for (i, f) in family.iter().enumerate() {
        for g in &family[i..] {
            let report = verify_uc_of_product(
                &product,
                f,
                g,
                &space,
                &plan,
                &cfg.deltas,
                cfg.tolerance.identity,
            )?;
            if report.bound_check.margin < margin {
                margin = report.bound_check.margin;
                witness = report.bound_check.witness.as_ref().map(witness_value);
            }
            passed &= report.bound_check.passed;
            if curves.is_empty() {
                curves.push(Curve {
                    file_name: "uc_product_modulus.csv".into(),
                    header: "delta,omega",
                    rows: report.modulus.iter().map(|(d, o)| vec![*d, *o]).collect(),
                });
            }
        }
    }
    Ok(CheckOutcome {
        passed,
        margin,
        witness,
        curves,
    })
}

fn dominance(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut margin = f64::INFINITY;
    for dim in [1, cfg.dimension.max(2)] {
        let space = euclidean(dim);
        let weight = RealFunction::base_weight(&space);
        for f in corpus::lipschitz(&space) {
            let lip = f.claimed_lip().unwrap_or(0.0);
            let at_zero = f.eval(&space.base_point())?.abs();
            let constant = at_zero.max(lip);
            for radius in [10.0, 100.0, 1000.0] {
                let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(5000), radius);
                let ratio = dominance_ratio(&f, &weight, &space, &plan)?;
                margin = margin
                    .min(constant * (1.0 + cfg.tolerance.inequality) + ABS_SLACK - ratio);
            }
        }
    }
    Ok(CheckOutcome::simple(margin >= 0.0, margin))
}

fn intertwining(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for space in [euclidean(cfg.dimension), Space::interval_fibers()] {
        let plan = match space.geometry() {
            Space::IntervalFibers => fiber_plan(cfg),
            _ => SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(2000), cfg.radius_bound),
        };
        // Random sampled centers.
        let (y, z) = plan.pair(&space, 1)?;
        let family = corpus::lipschitz(&space);
        for f in &family {
            for g in &family {
                worst = worst.max(verify_intertwining(&space, &y, &z, f, g, &plan)?);
            }
        }
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, None))
}

fn compress_links_products(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for dim in [1, cfg.dimension.max(2)] {
        let space = euclidean(dim);
        let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(2000), cfg.radius_bound);
        let product = FRingProduct::with_unit(RealFunction::base_weight(&space), &space, &plan)?;
        let family = corpus::lipschitz(&space);
        for f in &family {
            for g in &family {
                let lhs = compress(&space, &product.apply(f, g))?;
                let rhs = compress(&space, f)?.product(&compress(&space, g)?);
                for pair in plan.pairs(&space) {
                    let (x, y) = pair?;
                    for p in [x, y] {
                        let a = lhs.eval(&p)?;
                        let b = rhs.eval(&p)?;
                        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
                    }
                }
            }
        }
    }
    Ok(identity_outcome(worst, cfg.tolerance.identity, None))
}

fn point_evaluation_homomorphism(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = euclidean(cfg.dimension);
    let plan = small_plan(cfg);
    let family = corpus::lipschitz(&space);
    let weight = RealFunction::base_weight(&space);
    let (at, _) = plan.pair(&space, 2)?;
    let scales = [0.0, 2.0, 1.0 / weight.eval(&at)?];
    let mut margin = f64::INFINITY;
    let mut passed = true;
    for c in scales {
        let phi = PointEvaluation::new(c, at.clone())?;
        let report = check_homomorphism(&phi, &family, &plan)?;
        margin = margin.min(report.margin);
        passed &= report.passed;
    }
    Ok(CheckOutcome::simple(passed, margin))
}

fn evaluation_density_search(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = euclidean(cfg.dimension);
    let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs.min(10_000), cfg.radius_bound);
    let weight = RealFunction::base_weight(&space);
    let funcs = vec![
        RealFunction::coordinate(0),
        RealFunction::new("sin(x1)", |p: &Point| p.first_coord().sin()),
    ];
    let eps = 1e-6;
    let (x0, _) = plan.pair(&space, 5)?;
    let hv = weight.eval(&x0)?;
    let targets: Vec<f64> = funcs
        .iter()
        .map(|f| f.eval(&x0).map(|v| v / hv))
        .collect::<Result<_>>()?;
    let found = find_approximating_point(&targets, &funcs, &weight, eps, &space, &plan)?;
    let margin = match &found {
        ApproxSearch::Found { error, .. } => eps - error,
        ApproxSearch::NotFound { best_error, .. } => eps - best_error,
    };
    // A target beyond sup |x1|/(1+|x|) must be reported as unreachable.
    let unreachable =
        find_approximating_point(&[5.0], &funcs[..1], &weight, eps, &space, &plan)?;
    let passed = margin >= 0.0 && matches!(unreachable, ApproxSearch::NotFound { .. });
    Ok(CheckOutcome {
        passed,
        margin,
        witness: Some(serde_json::to_value(&found).expect("serializes")),
        curves: Vec::new(),
    })
}

// ---- blow-up checks --------------------------------------------------------

fn blowup_ratios(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let witnesses = blowup_witnesses(&cfg.radii)?;
    let mut margin = f64::INFINITY;
    let mut rows = Vec::new();
    for w in &witnesses {
        margin = margin.min(w.ratio - 0.5 * w.predicted_ratio);
        rows.push(vec![w.radius, w.ratio, w.predicted_ratio]);
    }
    let witness = witnesses
        .iter()
        .min_by(|a, b| (a.ratio - 0.5 * a.predicted_ratio).total_cmp(&(b.ratio - 0.5 * b.predicted_ratio)))
        .map(|w| serde_json::to_value(w).expect("serializes"));
    Ok(CheckOutcome {
        passed: margin >= 0.0,
        margin,
        witness,
        curves: vec![Curve {
            file_name: "blowup_ratios.csv".into(),
            header: "radius,ratio,predicted",
            rows,
        }],
    })
}

fn blowup_growth(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let witnesses = blowup_witnesses(&cfg.radii)?;
    let mut margin = f64::INFINITY;
    for pair in witnesses.windows(2) {
        margin = margin.min(pair[1].ratio - pair[0].ratio);
    }
    let last = witnesses.last().expect("radii nonempty");
    margin = margin.min(last.ratio - 3.0);
    // The sampled Lipschitz estimate of the expansion clears 3 as well.
    let plane = euclidean(2);
    let expanded = expand(&plane, &blowup_function())?;
    let plan = SamplingPlan::new(
        cfg.seed,
        cfg.num_pairs.min(20_000),
        last.radius * 1.5,
        Strategy::TangentialPairs {
            radius: last.radius,
        },
    );
    let report = estimate_lip(&expanded, &plane, &plan)?;
    margin = margin.min(report.empirical_lip - 3.0);
    Ok(CheckOutcome::simple(margin > 0.0, margin))
}

fn blowup_line_contrast(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let profile = RealFunction::new("min(1,|s|)", |p: &Point| p.first_coord().abs().min(1.0))
        .with_lip(1.0)
        .with_sup(1.0);
    let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs, cfg.radius_bound.max(100.0));
    let report = verify_expand_bound_on_line(&profile, &plan, cfg.tolerance.inequality)?;
    Ok(CheckOutcome {
        passed: report.passed,
        margin: report.margin,
        witness: report.witness.as_ref().map(witness_value),
        curves: Vec::new(),
    })
}

fn dyadic_sawtooth_check(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let h = dyadic_sawtooth();
    for k in 0..=10u32 {
        let t = 2f64.powi(k as i32);
        let expected = if k % 2 == 0 { 0.0 } else { 1.0 + t };
        let got = h.eval(&Point::half_line(t))?;
        if got != expected {
            return Ok(CheckOutcome {
                passed: false,
                margin: -(got - expected).abs(),
                witness: Some(json!({ "knot": t, "value": got, "expected": expected })),
                curves: Vec::new(),
            });
        }
    }
    let space = Space::half_line();
    let plan = SamplingPlan::uniform(cfg.seed, cfg.num_pairs, 2048.0);
    let report = estimate_lip(&h, &space, &plan)?;
    let margin = 3.0 + cfg.tolerance.inequality - report.empirical_lip;
    Ok(CheckOutcome::simple(margin >= 0.0, margin))
}

// ---- fiber checks ----------------------------------------------------------

fn fiber_exact_values(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = Space::interval_fibers();
    let mut margin = f64::INFINITY;
    for unit in corpus::positive_units(&space) {
        let (f, g) = fiber_functions(&unit);
        let m = FRingProduct::with_unit_unchecked(unit).apply(&f, &g);
        for n in 1..=cfg.max_fiber {
            let zero = m.eval(&Point::fiber(n, 0.0))?;
            if zero != 0.0 {
                return Ok(CheckOutcome {
                    passed: false,
                    margin: -zero.abs(),
                    witness: Some(json!({ "fiber": n, "value_at_zero": zero })),
                    curves: Vec::new(),
                });
            }
            let at_one = m.eval(&Point::fiber(n, 1.0))?;
            margin = margin
                .min(cfg.tolerance.identity * n as f64 + ABS_SLACK - (at_one - n as f64).abs());
        }
    }
    Ok(CheckOutcome::simple(margin >= 0.0, margin))
}

fn fiber_gap_witnesses(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = Space::interval_fibers();
    let mut margin = f64::INFINITY;
    let mut curves = Vec::new();
    let names = ["weight", "double_weight", "perturbed_weight"];
    for (unit, name) in corpus::positive_units(&space).into_iter().zip(names) {
        let cx = fiber_counterexample(&unit, cfg.max_fiber)?;
        let mut rows = Vec::new();
        for w in &cx.witnesses {
            margin = margin.min(w.gap - 0.5);
            margin = margin.min(1.0 / w.fiber as f64 + 1e-12 - w.pair_distance);
            rows.push(vec![w.pair_distance, w.gap]);
        }
        curves.push(Curve {
            file_name: format!("fiber_gap_{name}.csv"),
            header: "delta,omega",
            rows,
        });
    }
    Ok(CheckOutcome {
        passed: margin >= 0.0,
        margin,
        witness: None,
        curves,
    })
}

fn fiber_exact_witness(cfg: &ResolvedConfig) -> Result<CheckOutcome> {
    let space = Space::interval_fibers();
    let unit = RealFunction::base_weight(&space);
    let (f, g) = fiber_functions(&unit);
    let m = FRingProduct::with_unit_unchecked(unit).apply(&f, &g);
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for n in 2..=cfg.max_fiber {
        let x = Point::fiber(n, 0.0);
        let y = Point::fiber(n, 1.0 / n as f64);
        let gap = (m.eval(&x)? - m.eval(&y)?).abs();
        let m_here = cfg.tolerance.identity + ABS_SLACK - (gap - 1.0).abs();
        if m_here < margin {
            margin = m_here;
            witness = Some(json!({ "fiber": n, "gap": gap }));
        }
        if margin < 0.0 {
            break;
        }
    }
    Ok(CheckOutcome {
        passed: margin >= 0.0,
        margin,
        witness,
        curves: Vec::new(),
    })
}

