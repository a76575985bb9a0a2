//! Search for distinct pairs at zero reference distance.
//!
//! A one-parameter family `t ↦ member(t)` is laid out on a grid over
//! `[lo, hi]`. For each grid member `r`, the signed distance `g(s)` to other
//! members is scanned for exact zeros and sign changes on grid intervals
//! that do not touch `r`; a sign change is refined by bisection. The first
//! witness in `(r, s)` grid order is returned, so results are reproducible
//! for a given grid. Not finding one only means none was found at this
//! budget.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{JointDistribution, Schema};
use crate::error::{Error, Result};
use crate::metric::{
    dirac_distance, gaussian_distance, poisson_distance, reference_distance, uniform_distance,
    ClosedForm, GaussianParams, ReferenceMetricSpec,
};
use crate::math::abs;

/// Distances below this count as zero.
pub const WITNESS_TOL: f64 = 1e-10;

const BISECTION_STEPS: usize = 200;

/// One-parameter families of candidate distributions.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchFamily {
    /// Poisson distributions with rate `t ∈ [lo, hi]`; pairs with a Poisson
    /// reference.
    PoissonRates { lo: f64, hi: f64 },
    /// Normals `N(t, std_dev²)` with mean `t ∈ [lo, hi]`; pairs with a
    /// Gaussian or Dirac reference.
    GaussianMeans { std_dev: f64, lo: f64, hi: f64 },
    /// Binary distributions `(1 − t, t)`, `t ∈ [lo, hi] ⊂ (0, 1)`; pairs with a
    /// uniform or empirical (binary) reference.
    Bernoulli { lo: f64, hi: f64 },
    /// Mixtures `(1 − t) a + t b`, `t ∈ [0, 1]`; pairs with a uniform or
    /// empirical reference over the same schema.
    Mixture {
        a: JointDistribution,
        b: JointDistribution,
    },
}

/// Placement of grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grid {
    #[default]
    Even,
    /// Sorted uniform draws from a seeded generator.
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    /// Family parameter of the first member.
    pub r: f64,
    /// Family parameter of the second member, distinct from `r`.
    pub s: f64,
    pub distance: f64,
}

impl SearchFamily {
    fn range(&self) -> (f64, f64) {
        match *self {
            SearchFamily::PoissonRates { lo, hi }
            | SearchFamily::GaussianMeans { lo, hi, .. }
            | SearchFamily::Bernoulli { lo, hi } => (lo, hi),
            SearchFamily::Mixture { .. } => (0.0, 1.0),
        }
    }

    fn check(&self, metric: &ReferenceMetricSpec) -> Result<()> {
        let (lo, hi) = self.range();
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain("search range must satisfy lo < hi"));
        }
        use ReferenceMetricSpec as M;
        let ok = match (self, metric) {
            (SearchFamily::PoissonRates { .. }, M::Poisson { .. }) => lo > 0.0,
            (SearchFamily::GaussianMeans { std_dev, .. }, M::Gaussian(_) | M::DiracDelta { .. }) => {
                *std_dev > 0.0
            }
            (SearchFamily::Bernoulli { .. }, M::UniformDiscrete) => lo > 0.0 && hi < 1.0,
            (SearchFamily::Bernoulli { .. }, M::Empirical(p)) => {
                lo > 0.0 && hi < 1.0 && p.schema().state_count() == 2 && p.len() == 1
            }
            (SearchFamily::Mixture { a, b }, M::UniformDiscrete) => a.schema() == b.schema(),
            (SearchFamily::Mixture { a, b }, M::Empirical(p)) => {
                a.schema() == b.schema() && p.schema() == a.schema()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain("search family is incompatible with the reference"))
        }
    }

    fn member(&self, t: f64) -> Result<JointDistribution> {
        match self {
            SearchFamily::Bernoulli { .. } => {
                JointDistribution::new(Schema::anonymous(&[2])?, alloc::vec![1.0 - t, t])
            }
            SearchFamily::Mixture { a, b } => {
                let probs = a
                    .probs()
                    .iter()
                    .zip(b.probs())
                    .map(|(x, y)| (1.0 - t) * x + t * y)
                    .collect();
                JointDistribution::new(a.schema().clone(), probs)
            }
            _ => Err(Error::Domain("family has no discrete members")),
        }
    }

    /// Signed reference distance between members `t_r` and `t_s`.
    fn signed(&self, metric: &ReferenceMetricSpec, t_r: f64, t_s: f64) -> Result<f64> {
        use ReferenceMetricSpec as M;
        Ok(match (self, metric) {
            (SearchFamily::PoissonRates { .. }, M::Poisson { lambda }) => {
                poisson_distance(*lambda, t_r, t_s)?.signed_inner
            }
            (SearchFamily::GaussianMeans { std_dev, .. }, M::Gaussian(p)) => {
                let r = GaussianParams::new(t_r, *std_dev)?;
                let s = GaussianParams::new(t_s, *std_dev)?;
                gaussian_distance(p, &r, &s, ClosedForm::Integral).signed_inner
            }
            (SearchFamily::GaussianMeans { std_dev, .. }, M::DiracDelta { mu }) => {
                let r = GaussianParams::new(t_r, *std_dev)?;
                let s = GaussianParams::new(t_s, *std_dev)?;
                dirac_distance(*mu, &r, &s, ClosedForm::Integral).signed_inner
            }
            (_, M::UniformDiscrete) => {
                uniform_distance(&self.member(t_r)?, &self.member(t_s)?)?.signed_inner
            }
            (_, M::Empirical(p)) => {
                reference_distance(p, &self.member(t_r)?, &self.member(t_s)?)?.signed_inner
            }
            _ => return Err(Error::Domain("search family is incompatible with the reference")),
        })
    }
}

fn grid_points(lo: f64, hi: f64, budget: usize, grid: Grid) -> Vec<f64> {
    match grid {
        Grid::Even => (0..budget)
            .map(|i| lo + (hi - lo) * i as f64 / (budget - 1) as f64)
            .collect(),
        Grid::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts: Vec<f64> = (0..budget).map(|_| rng.random_range(lo..=hi)).collect();
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            pts
        }
    }
}

/// Looks for `r ≠ s` in `family` with distance below [`WITNESS_TOL`] under
/// `metric`, using `budget` grid points.
pub fn find_pseudometric_witness(
    metric: &ReferenceMetricSpec,
    family: &SearchFamily,
    budget: usize,
    grid: Grid,
) -> Result<Option<Witness>> {
    family.check(metric)?;
    if budget < 3 {
        return Err(Error::Domain("witness search needs a budget of at least 3 grid points"));
    }
    let (lo, hi) = family.range();
    let pts = grid_points(lo, hi, budget, grid);

    for (i, &t_r) in pts.iter().enumerate() {
        let g = |t_s: f64| family.signed(metric, t_r, t_s).ok();
        let values: Vec<Option<f64>> = pts.iter().map(|&t| g(t)).collect();
        for j in 0..pts.len() {
            if j == i {
                continue;
            }
            if let Some(v) = values[j] {
                if abs(v) < WITNESS_TOL {
                    return Ok(Some(Witness {
                        r: t_r,
                        s: pts[j],
                        distance: abs(v),
                    }));
                }
            }
            if j + 1 >= pts.len() || j + 1 == i {
                continue;
            }
            let (Some(a), Some(b)) = (values[j], values[j + 1]) else {
                continue;
            };
            if a.signum() == b.signum() {
                continue;
            }
            if let Some((s, d)) = bisect(&g, pts[j], a, pts[j + 1]) {
                return Ok(Some(Witness { r: t_r, s, distance: d }));
            }
        }
    }
    Ok(None)
}

fn bisect(g: &impl Fn(f64) -> Option<f64>, mut lo: f64, mut g_lo: f64, mut hi: f64) -> Option<(f64, f64)> {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if abs(v) < WITNESS_TOL {
            return Some((mid, abs(v)));
        }
        if v.signum() == g_lo.signum() {
            lo = mid;
            g_lo = v;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * abs(mid) {
            break;
        }
    }
    None
}
