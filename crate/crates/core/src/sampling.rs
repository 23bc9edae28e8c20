//! Deterministic, seeded pair sampling.
//!
//! Pair `i` of a plan is a pure function of `(seed, i)`: each index gets
//! its own ChaCha stream keyed by seed and index, so estimators can
//! partition indices across threads and still reduce to bit-identical
//! results in any order.

use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Point, Space};

/// How point pairs are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Both points uniform in the ball of radius `radius_bound`. Pair 0 is
    /// the deterministic pair (base point, boundary point), so the sample
    /// always reaches the edge of the region.
    UniformPairs,
    /// First point uniform in the ball, second a perturbation of norm at
    /// most `delta`.
    NearPairs { delta: f64 },
    /// Collinear pairs through the origin.
    RadialPairs,
    /// Pairs on the sphere of the given radius with small angular
    /// separation; needs dimension >= 2.
    TangentialPairs { radius: f64 },
    /// Pairs on the interval fibers, mixing same-fiber and cross-fiber
    /// draws over fibers `1..=max_fiber`. Pair 0 is ((0,1), (1,1)).
    FiberPairs { max_fiber: u32 },
}

impl Strategy {
    fn name(&self) -> &'static str {
        match self {
            Strategy::UniformPairs => "uniform_pairs",
            Strategy::NearPairs { .. } => "near_pairs",
            Strategy::RadialPairs => "radial_pairs",
            Strategy::TangentialPairs { .. } => "tangential_pairs",
            Strategy::FiberPairs { .. } => "fiber_pairs",
        }
    }
}

/// A deterministic, seeded description of which point pairs estimators
/// visit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub seed: u64,
    pub num_pairs: u64,
    pub radius_bound: f64,
    pub strategy: Strategy,
}

impl SamplingPlan {
    pub fn new(seed: u64, num_pairs: u64, radius_bound: f64, strategy: Strategy) -> Self {
        SamplingPlan {
            seed,
            num_pairs,
            radius_bound,
            strategy,
        }
    }

    /// Uniform pairs in the ball of the given radius.
    pub fn uniform(seed: u64, num_pairs: u64, radius_bound: f64) -> Self {
        Self::new(seed, num_pairs, radius_bound, Strategy::UniformPairs)
    }

    pub fn num_pairs(&self) -> u64 {
        self.num_pairs
    }

    /// Validate plan parameters and compatibility with the space.
    pub fn validate_for(&self, space: &Space) -> Result<()> {
        if self.num_pairs == 0 {
            return Err(Error::InvalidParameter("num_pairs must be positive".into()));
        }
        if !(self.radius_bound > 0.0) {
            return Err(Error::InvalidParameter(
                "radius_bound must be positive".into(),
            ));
        }
        let geometry = space.geometry();
        let mismatch = || {
            Err(Error::UnsupportedStrategy {
                strategy: self.strategy.name().into(),
                space: space.name(),
            })
        };
        match &self.strategy {
            Strategy::FiberPairs { max_fiber } => {
                if *max_fiber == 0 {
                    return Err(Error::InvalidParameter("max_fiber must be >= 1".into()));
                }
                if !matches!(geometry, Space::IntervalFibers) {
                    return mismatch();
                }
            }
            Strategy::NearPairs { delta } => {
                if !(*delta > 0.0) {
                    return Err(Error::InvalidParameter("near-pair delta must be positive".into()));
                }
                if !geometry.is_normed() {
                    return mismatch();
                }
            }
            Strategy::TangentialPairs { radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidParameter(
                        "tangential radius must be positive".into(),
                    ));
                }
                match geometry.dim() {
                    Some(dim) if dim >= 2 => {}
                    _ => return mismatch(),
                }
            }
            Strategy::UniformPairs | Strategy::RadialPairs => {
                if !geometry.is_normed() {
                    return mismatch();
                }
            }
        }
        Ok(())
    }

    /// The `index`-th pair. Pure in `(seed, index)`.
    pub fn pair(&self, space: &Space, index: u64) -> Result<(Point, Point)> {
        let geometry = space.geometry();
        let mut rng = stream(self.seed, index);
        let r = self.radius_bound;
        match &self.strategy {
            Strategy::UniformPairs => {
                if index == 0 {
                    return Ok((geometry.base_point(), boundary_point(geometry, r)));
                }
                Ok((
                    uniform_in_ball(geometry, r, &mut rng),
                    uniform_in_ball(geometry, r, &mut rng),
                ))
            }
            Strategy::NearPairs { delta } => {
                let x = uniform_in_ball(geometry, r, &mut rng);
                let y = perturb(geometry, &x, *delta, &mut rng);
                Ok((x, y))
            }
            Strategy::RadialPairs => {
                let dir = unit_direction(geometry, &mut rng);
                let r1: f64 = rng.sample(Uniform::new_inclusive(0.0, r));
                let r2: f64 = rng.sample(Uniform::new_inclusive(0.0, r));
                Ok((
                    geometry.scale(r1, &dir).expect("normed kind"),
                    geometry.scale(r2, &dir).expect("normed kind"),
                ))
            }
            Strategy::TangentialPairs { radius } => {
                let dim = geometry.dim().expect("validated: Euclidean, dim >= 2");
                Ok(tangential_pair(dim, *radius, &mut rng))
            }
            Strategy::FiberPairs { max_fiber } => {
                if index == 0 {
                    return Ok((Point::fiber(1, 0.0), Point::fiber(1, 1.0)));
                }
                let n: u32 = rng.gen_range(1..=*max_fiber);
                let same_fiber: bool = rng.gen();
                let k: u32 = if same_fiber {
                    n
                } else {
                    rng.gen_range(1..=*max_fiber)
                };
                let s: f64 = rng.gen_range(0.0..=1.0);
                let t: f64 = rng.gen_range(0.0..=1.0);
                Ok((Point::fiber(n, s), Point::fiber(k, t)))
            }
        }
    }

    /// All pairs, in index order.
    pub fn pairs<'a>(
        &'a self,
        space: &'a Space,
    ) -> impl Iterator<Item = Result<(Point, Point)>> + 'a {
        (0..self.num_pairs).map(move |i| self.pair(space, i))
    }
}

/// The independent ChaCha stream for pair `index` of `seed`.
fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn boundary_point(geometry: &Space, radius: f64) -> Point {
    match geometry {
        Space::Euclidean { dim } => {
            let mut coords = vec![0.0; *dim];
            coords[0] = radius;
            Point::Vector(coords)
        }
        Space::HalfLine => Point::HalfLine(radius),
        _ => unreachable!("validated: normed kind"),
    }
}

fn unit_direction(geometry: &Space, rng: &mut ChaCha8Rng) -> Point {
    match geometry {
        Space::Euclidean { dim } => {
            loop {
                let g: Vec<f64> = (0..*dim).map(|_| rng.sample(StandardNormal)).collect();
                let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    return Point::Vector(g.into_iter().map(|v| v / norm).collect());
                }
            }
        }
        Space::HalfLine => Point::HalfLine(1.0),
        _ => unreachable!("validated: normed kind"),
    }
}

fn uniform_in_ball(geometry: &Space, radius: f64, rng: &mut ChaCha8Rng) -> Point {
    match geometry {
        Space::Euclidean { dim } => {
            let dir = unit_direction(geometry, rng);
            let u: f64 = rng.gen_range(0.0..=1.0);
            let r = radius * u.powf(1.0 / *dim as f64);
            geometry.scale(r, &dir).expect("normed kind")
        }
        Space::HalfLine => Point::HalfLine(rng.gen_range(0.0..=radius)),
        _ => unreachable!("validated: normed kind"),
    }
}

fn perturb(geometry: &Space, x: &Point, delta: f64, rng: &mut ChaCha8Rng) -> Point {
    match (geometry, x) {
        (Space::Euclidean { dim }, Point::Vector(c)) => {
            let dir = unit_direction(geometry, rng);
            let step = delta * rng.gen_range(0.0..=1.0f64).powf(1.0 / *dim as f64);
            let dir = dir.coords().expect("euclidean direction");
            Point::Vector(c.iter().zip(dir).map(|(a, d)| a + step * d).collect())
        }
        (Space::HalfLine, Point::HalfLine(t)) => {
            let step: f64 = rng.gen_range(-delta..=delta);
            Point::HalfLine((t + step).max(0.0))
        }
        _ => unreachable!("validated: normed kind"),
    }
}

/// A pair on the sphere of the given radius separated by a small angle:
/// x = r·u and y = r·(cos θ · u + sin θ · v) with v a unit vector
/// orthogonal to u and θ log-uniform in [1e-6, 1e-1].
fn tangential_pair(dim: usize, radius: f64, rng: &mut ChaCha8Rng) -> (Point, Point) {
    let u = gaussian_unit(dim, rng);
    let v = orthogonal_unit(&u, rng);
    let log_theta: f64 = rng.gen_range((1e-6f64).ln()..=(1e-1f64).ln());
    let theta = log_theta.exp();
    let (c, s) = (theta.cos(), theta.sin());
    let x: Vec<f64> = u.iter().map(|ui| radius * ui).collect();
    let y: Vec<f64> = u
        .iter()
        .zip(&v)
        .map(|(ui, vi)| radius * (c * ui + s * vi))
        .collect();
    (Point::Vector(x), Point::Vector(y))
}

fn gaussian_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

fn orthogonal_unit(u: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g = gaussian_unit(u.len(), rng);
        let dot: f64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
        let w: Vec<f64> = g.iter().zip(u).map(|(a, b)| a - dot * b).collect();
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return w.into_iter().map(|v| v / norm).collect();
        }
    }
}
