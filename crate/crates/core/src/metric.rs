//! Reference-function distances.
//!
//! For a reference distribution `P`, `𝔇_P(R‖S) = |D(P‖R) − D(P‖S)| =
//! |Σ P log(R/S)|`. It is non-negative, symmetric and obeys the triangle
//! inequality; whether distinct `R ≠ S` can sit at zero distance depends on
//! `P` and the family of `R, S` (see [`crate::witness`]).
//!
//! Discrete distances are reported in bits. The Gaussian, Dirac and Poisson
//! closed forms are computed in nats.

use alloc::vec::Vec;

use crate::distribution::{conditional, JointDistribution};
use crate::error::{Error, Result};
use crate::math::{abs, ln, log2};
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Bits,
    Nats,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Bits => "bits",
            Unit::Nats => "nats",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult {
    /// `|signed_inner|`.
    pub value: f64,
    /// `Σ P log(R/S)` (or its integral) before taking the absolute value.
    pub signed_inner: f64,
    pub unit: Unit,
}

impl DistanceResult {
    pub fn from_signed(signed_inner: f64, unit: Unit) -> Self {
        DistanceResult {
            value: abs(signed_inner),
            signed_inner,
            unit,
        }
    }

    pub fn to_unit(self, unit: Unit) -> Self {
        let factor = match (self.unit, unit) {
            (Unit::Bits, Unit::Nats) => core::f64::consts::LN_2,
            (Unit::Nats, Unit::Bits) => 1.0 / core::f64::consts::LN_2,
            _ => 1.0,
        };
        DistanceResult::from_signed(self.signed_inner * factor, unit)
    }
}

/// Mean and standard deviation of a univariate normal. `σ > 0` is enforced
/// at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    mean: f64,
    std_dev: f64,
}

impl GaussianParams {
    pub fn new(mean: f64, std_dev: f64) -> Result<Self> {
        if !(std_dev > 0.0 && std_dev.is_finite()) {
            return Err(Error::NonPositiveParameter {
                name: "sigma",
                value: std_dev,
            });
        }
        if !mean.is_finite() {
            return Err(Error::Domain("gaussian mean must be finite"));
        }
        Ok(GaussianParams { mean, std_dev })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    /// Natural log of the density at `x`.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std_dev;
        -0.5 * z * z - ln(self.std_dev) - 0.5 * ln(2.0 * core::f64::consts::PI)
    }
}

/// Choice of reference function.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceMetricSpec {
    Empirical(JointDistribution),
    UniformDiscrete,
    Gaussian(GaussianParams),
    DiracDelta { mu: f64 },
    Poisson { lambda: f64 },
}

impl ReferenceMetricSpec {
    pub fn poisson(lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        Ok(ReferenceMetricSpec::Poisson { lambda })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReferenceMetricSpec::Empirical(_) => "empirical",
            ReferenceMetricSpec::UniformDiscrete => "uniform",
            ReferenceMetricSpec::Gaussian(_) => "gaussian",
            ReferenceMetricSpec::DiracDelta { .. } => "dirac",
            ReferenceMetricSpec::Poisson { .. } => "poisson",
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter { name, value })
    }
}

/// `|Σ pref log2(r/s)|` over the support of `pref`.
pub fn reference_distance(
    pref: &JointDistribution,
    r: &JointDistribution,
    s: &JointDistribution,
) -> Result<DistanceResult> {
    if pref.schema() != r.schema() || r.schema() != s.schema() {
        return Err(Error::SchemaMismatch);
    }
    let mut acc = 0.0;
    for (i, ((&w, &a), &b)) in pref.probs().iter().zip(r.probs()).zip(s.probs()).enumerate() {
        if w == 0.0 {
            continue;
        }
        if a == b {
            continue;
        }
        if a == 0.0 || b == 0.0 {
            return Err(Error::SupportViolation {
                state: pref.schema().decode(i),
            });
        }
        acc += w * (log2(a) - log2(b));
    }
    Ok(DistanceResult::from_signed(acc, Unit::Bits))
}

/// `(1/N) |Σ_s log2(r(s)/s(s))|`; both tables must be strictly positive.
pub fn uniform_distance(r: &JointDistribution, s: &JointDistribution) -> Result<DistanceResult> {
    if r.schema() != s.schema() {
        return Err(Error::SchemaMismatch);
    }
    let mut acc = 0.0;
    for (i, (&a, &b)) in r.probs().iter().zip(s.probs()).enumerate() {
        if a == 0.0 || b == 0.0 {
            return Err(Error::SupportViolation {
                state: r.schema().decode(i),
            });
        }
        acc += log2(a) - log2(b);
    }
    let n = r.schema().state_count() as f64;
    Ok(DistanceResult::from_signed(acc / n, Unit::Bits))
}

/// Which closed form to evaluate for Gaussian and Dirac references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedForm {
    /// Direct evaluation of the defining integral `∫ P log(R/S)`.
    #[default]
    Integral,
    /// The commonly quoted variant that drops the `1/2` on the squared-mean
    /// terms (and, for the Gaussian, keeps `σ²/2` on the variance terms).
    /// Kept for comparison; it does not equal the integral.
    Alternate,
}

/// Distance between two normals under a normal reference, nats.
pub fn gaussian_distance(
    reference: &GaussianParams,
    r: &GaussianParams,
    s: &GaussianParams,
    form: ClosedForm,
) -> DistanceResult {
    let var = reference.std_dev * reference.std_dev;
    let (mu, m1, m2) = (reference.mean, r.mean, s.mean);
    let (v1, v2) = (r.std_dev * r.std_dev, s.std_dev * s.std_dev);
    let log_ratio = ln(s.std_dev / r.std_dev);
    let signed = match form {
        ClosedForm::Integral => {
            log_ratio - (var + (mu - m1) * (mu - m1)) / (2.0 * v1)
                + (var + (mu - m2) * (mu - m2)) / (2.0 * v2)
        }
        ClosedForm::Alternate => {
            log_ratio
                - (var / 2.0 * (1.0 / v1 - 1.0 / v2) + (mu - m1) * (mu - m1) / v1
                    - (mu - m2) * (mu - m2) / v2)
        }
    };
    DistanceResult::from_signed(signed, Unit::Nats)
}

/// Distance under a point-mass reference at `mu_ref`: the log-ratio
/// `log(R/S)` evaluated at that point, nats.
pub fn dirac_distance(
    mu_ref: f64,
    r: &GaussianParams,
    s: &GaussianParams,
    form: ClosedForm,
) -> DistanceResult {
    let signed = match form {
        ClosedForm::Integral => r.ln_pdf(mu_ref) - s.ln_pdf(mu_ref),
        ClosedForm::Alternate => {
            let (d1, d2) = (r.mean - mu_ref, s.mean - mu_ref);
            d1 * d1 / (r.std_dev * r.std_dev) - d2 * d2 / (s.std_dev * s.std_dev)
                - ln(s.std_dev / r.std_dev)
        }
    };
    DistanceResult::from_signed(signed, Unit::Nats)
}

/// Signed log-ratios `log(r(x_j)/s(x_j))` at each point, nats. Each
/// component's magnitude is the Dirac distance at that point.
pub fn surprisal_coordinates(r: &GaussianParams, s: &GaussianParams, points: &[f64]) -> Vec<f64> {
    points.iter().map(|&x| r.ln_pdf(x) - s.ln_pdf(x)).collect()
}

/// Distance between Poisson rates `l1, l2` under a Poisson(`lambda`)
/// reference: `|(l1 − λ ln l1) − (l2 − λ ln l2)|`, nats.
pub fn poisson_distance(lambda: f64, l1: f64, l2: f64) -> Result<DistanceResult> {
    positive("lambda", lambda)?;
    positive("lambda1", l1)?;
    positive("lambda2", l2)?;
    // Σ_k P(k;λ) [k ln(l1/l2) − l1 + l2]
    let signed = lambda * ln(l1 / l2) - l1 + l2;
    Ok(DistanceResult::from_signed(signed, Unit::Nats))
}

/// Both forms of the subset-independence distance of `r` and their
/// agreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceDistance {
    /// `𝔇(R(ν') ‖ R(ν' | ν∖ν'))`.
    pub conditional_form: DistanceResult,
    /// `𝔇(R(ν') R(ν∖ν') ‖ R(ν))`.
    pub product_form: DistanceResult,
}

impl IndependenceDistance {
    pub fn value(&self) -> f64 {
        self.product_form.value
    }

    pub fn residual(&self) -> f64 {
        abs(self.conditional_form.signed_inner - self.product_form.signed_inner)
    }
}

/// Tolerance on the agreement of the two independence-distance forms.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

pub fn independence_distance(
    pref: &JointDistribution,
    r: &JointDistribution,
    subset: Subset,
) -> Result<IndependenceDistance> {
    if pref.schema() != r.schema() {
        return Err(Error::SchemaMismatch);
    }
    let schema = r.schema();
    let full = schema.full();
    schema.check_subset(subset)?;
    if subset.is_empty() || subset == full {
        return Err(Error::Domain("independence distance needs a proper non-empty subset"));
    }
    let rest = full.difference(subset);

    let part = r.marginal_table(subset);
    let other = r.marginal_table(rest);
    let part_idx = schema.projection(subset);
    let rest_idx = schema.projection(rest);
    let cond = conditional(r, subset, rest)?;

    let mut conditional_sum = 0.0;
    let mut product_sum = 0.0;
    for (s, &w) in pref.probs().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let (a, b) = (part_idx[s], rest_idx[s]);
        let violation = || Error::SupportViolation {
            state: schema.decode(s),
        };
        let given = cond.get(b, a).ok_or_else(violation)?;
        let joint = r.probs()[s];
        if given == 0.0 || joint == 0.0 || part[a] == 0.0 {
            return Err(violation());
        }
        conditional_sum += w * log2(part[a] / given);
        product_sum += w * log2(part[a] * other[b] / joint);
    }
    let out = IndependenceDistance {
        conditional_form: DistanceResult::from_signed(conditional_sum, Unit::Bits),
        product_form: DistanceResult::from_signed(product_sum, Unit::Bits),
    };
    if out.residual() > INDEPENDENCE_TOL {
        return Err(Error::Inconsistent(out.residual()));
    }
    Ok(out)
}
