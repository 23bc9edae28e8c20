//! Real-valued functions on a space, closed under the pointwise vector
//! lattice operations and pointwise products/quotients.
//!
//! A [`RealFunction`] is an evaluation closure plus optional certificates:
//! a claimed Lipschitz constant and a claimed sup norm. Certificates are
//! carried, never trusted — [`verify_certificates`] checks them against
//! sampled difference quotients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sampling::SamplingPlan;
use crate::space::{Point, Space};

type EvalFn = dyn Fn(&Point) -> Result<f64> + Send + Sync;

/// An evaluable real-valued map on a space.
///
/// Evaluation is pure and thread-safe; cloning is cheap (shared closure).
#[derive(Clone)]
pub struct RealFunction {
    eval_fn: Arc<EvalFn>,
    label: String,
    claimed_lip: Option<f64>,
    claimed_sup: Option<f64>,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("label", &self.label)
            .field("claimed_lip", &self.claimed_lip)
            .field("claimed_sup", &self.claimed_sup)
            .finish()
    }
}

impl RealFunction {
    /// An infallible pointwise map.
    pub fn new(label: impl Into<String>, f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Self::try_new(label, move |p| Ok(f(p)))
    }

    /// A pointwise map that may reject points (domain errors).
    pub fn try_new(
        label: impl Into<String>,
        f: impl Fn(&Point) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        RealFunction {
            eval_fn: Arc::new(f),
            label: label.into(),
            claimed_lip: None,
            claimed_sup: None,
        }
    }

    pub fn with_lip(mut self, lip: f64) -> Self {
        debug_assert!(lip >= 0.0);
        self.claimed_lip = Some(lip);
        self
    }

    pub fn with_sup(mut self, sup: f64) -> Self {
        debug_assert!(sup >= 0.0);
        self.claimed_sup = Some(sup);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn claimed_lip(&self) -> Option<f64> {
        self.claimed_lip
    }

    pub fn claimed_sup(&self) -> Option<f64> {
        self.claimed_sup
    }

    /// Evaluate at a point. Non-finite results become errors carrying the
    /// offending point.
    pub fn eval(&self, p: &Point) -> Result<f64> {
        let v = (self.eval_fn)(p)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                label: self.label.clone(),
                point: p.clone(),
            })
        }
    }

    // ---- constructors for common functions ----------------------------

    pub fn constant(c: f64) -> Self {
        RealFunction::new(format!("{c}"), move |_| c).with_lip(0.0).with_sup(c.abs())
    }

    /// The weight w_z(x) = 1 + d(x, z) with z the base point of the space.
    /// Always 1-Lipschitz, never bounded.
    pub fn base_weight(space: &Space) -> Self {
        Self::weight_at(space, &space.base_point())
    }

    /// The weight w_z(x) = 1 + d(x, z) for an arbitrary center z.
    pub fn weight_at(space: &Space, z: &Point) -> Self {
        let space = space.clone();
        let z = z.clone();
        RealFunction::new("1+d(.,z)", move |p| 1.0 + space.distance(p, &z)).with_lip(1.0)
    }

    /// Coordinate projection: x_i on R^n, t on the half-line and on fibers.
    pub fn coordinate(i: usize) -> Self {
        RealFunction::try_new(format!("x{}", i + 1), move |p| match p {
            Point::Vector(c) if i < c.len() => Ok(c[i]),
            Point::Vector(_) => Err(Error::Domain {
                label: format!("x{}", i + 1),
                point: p.clone(),
                detail: "coordinate index out of range".into(),
            }),
            Point::HalfLine(t) | Point::Fiber { t, .. } if i == 0 => Ok(*t),
            _ => Err(Error::Domain {
                label: format!("x{}", i + 1),
                point: p.clone(),
                detail: "coordinate index out of range".into(),
            }),
        })
        .with_lip(1.0)
    }

    /// A radial function g(‖x‖) on a normed space.
    pub fn radial(
        space: &Space,
        label: impl Into<String>,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !space.geometry().is_normed() {
            return Err(Error::UnsupportedSpace {
                op: "radial function",
                space: space.name(),
            });
        }
        let space = space.geometry().clone();
        Ok(RealFunction::new(label, move |p| {
            g(space.norm(p).expect("normed kind"))
        }))
    }

    // ---- pointwise lattice algebra -------------------------------------

    pub fn add(&self, other: &RealFunction) -> RealFunction {
        let (f, g) = (self.clone(), other.clone());
        let mut out = RealFunction::try_new(
            format!("({} + {})", self.label, other.label),
            move |p| Ok(f.eval(p)? + g.eval(p)?),
        );
        out.claimed_lip = sum_opt(self.claimed_lip, other.claimed_lip);
        out.claimed_sup = sum_opt(self.claimed_sup, other.claimed_sup);
        out
    }

    pub fn scale(&self, c: f64) -> RealFunction {
        let f = self.clone();
        let mut out = RealFunction::try_new(format!("{c}*{}", self.label), move |p| {
            Ok(c * f.eval(p)?)
        });
        out.claimed_lip = self.claimed_lip.map(|l| c.abs() * l);
        out.claimed_sup = self.claimed_sup.map(|s| c.abs() * s);
        out
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &RealFunction) -> RealFunction {
        let (f, g) = (self.clone(), other.clone());
        let mut out = RealFunction::try_new(
            format!("({} v {})", self.label, other.label),
            move |p| Ok(f.eval(p)?.max(g.eval(p)?)),
        );
        out.claimed_lip = max_opt(self.claimed_lip, other.claimed_lip);
        out.claimed_sup = max_opt(self.claimed_sup, other.claimed_sup);
        out
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &RealFunction) -> RealFunction {
        let (f, g) = (self.clone(), other.clone());
        let mut out = RealFunction::try_new(
            format!("({} ^ {})", self.label, other.label),
            move |p| Ok(f.eval(p)?.min(g.eval(p)?)),
        );
        out.claimed_lip = max_opt(self.claimed_lip, other.claimed_lip);
        out.claimed_sup = max_opt(self.claimed_sup, other.claimed_sup);
        out
    }

    pub fn abs(&self) -> RealFunction {
        let f = self.clone();
        let mut out = RealFunction::try_new(format!("|{}|", self.label), move |p| {
            Ok(f.eval(p)?.abs())
        });
        out.claimed_lip = self.claimed_lip;
        out.claimed_sup = self.claimed_sup;
        out
    }

    pub fn product(&self, other: &RealFunction) -> RealFunction {
        let (f, g) = (self.clone(), other.clone());
        let mut out = RealFunction::try_new(
            format!("({} * {})", self.label, other.label),
            move |p| Ok(f.eval(p)? * g.eval(p)?),
        );
        // L(fg) <= L(f) sup|g| + L(g) sup|f| needs both functions bounded.
        out.claimed_lip = match (
            self.claimed_lip,
            self.claimed_sup,
            other.claimed_lip,
            other.claimed_sup,
        ) {
            (Some(lf), Some(sf), Some(lg), Some(sg)) => Some(lf * sg + lg * sf),
            _ => None,
        };
        out.claimed_sup = match (self.claimed_sup, other.claimed_sup) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        out
    }

    /// Pointwise quotient f/g; evaluation fails with a domain error at any
    /// point where g is not strictly positive.
    pub fn quotient(&self, other: &RealFunction) -> RealFunction {
        let (f, g) = (self.clone(), other.clone());
        let label = format!("({} / {})", self.label, other.label);
        let err_label = label.clone();
        RealFunction::try_new(label, move |p| {
            let den = g.eval(p)?;
            if den <= 0.0 {
                return Err(Error::Domain {
                    label: err_label.clone(),
                    point: p.clone(),
                    detail: format!("denominator `{}` = {den} is not strictly positive", g.label),
                });
            }
            Ok(f.eval(p)? / den)
        })
    }
}

fn sum_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        _ => None,
    }
}

/// Slack added on top of relative tolerances when comparing values that
/// were produced by floating-point evaluation; absorbs rounding on pairs
/// at very small distances.
pub const ABS_SLACK: f64 = 1e-12;

/// Check the claimed certificates of `f` against every sampled pair of the
/// plan: difference quotients against `claimed_lip`, absolute values
/// against `claimed_sup`.
pub fn verify_certificates(f: &RealFunction, space: &Space, plan: &SamplingPlan) -> Result<()> {
    plan.validate_for(space)?;
    let lip = f.claimed_lip();
    let sup = f.claimed_sup();
    for i in 0..plan.num_pairs() {
        let (x, y) = plan.pair(space, i)?;
        let (fx, fy) = (f.eval(&x)?, f.eval(&y)?);
        if let Some(sup) = sup {
            for (v, p) in [(fx, &x), (fy, &y)] {
                if v.abs() > sup * (1.0 + 1e-9) + ABS_SLACK {
                    return Err(Error::Domain {
                        label: f.label().into(),
                        point: p.clone(),
                        detail: format!("|{v}| exceeds claimed sup {sup}"),
                    });
                }
            }
        }
        if let Some(lip) = lip {
            let d = space.distance(&x, &y);
            if (fx - fy).abs() > lip * d * (1.0 + 1e-9) + ABS_SLACK {
                return Err(Error::Domain {
                    label: f.label().into(),
                    point: x.clone(),
                    detail: format!(
                        "difference quotient {} exceeds claimed Lipschitz constant {lip}",
                        (fx - fy).abs() / d
                    ),
                });
            }
        }
    }
    Ok(())
}
