//! KL divergence, its expansion by interaction degree, and the factorized
//! approximations obtained by truncating that expansion.
//!
//! With marginal cross-entropies `H'(τ) = −Σ P_τ log Q_τ` and cross
//! interactions `I'(τ)` their Möbius transform, the divergence splits as
//!
//! ```text
//! D(P‖Q) = Σ_m Σ_{|τ|=m} (-1)^{m+1} I'(τ) − H(v)
//! ```
//!
//! Dropping every term above degree `m` and reading the result back as a
//! distribution gives `log P'_m(s) = Σ_k c_k Σ_{|τ|=k} log P(s_τ)` with
//! `c_k = (-1)^{m−k} C(n−k−1, m−k)`. For three variables at `m = 2` that is
//! the Kirkwood superposition `P(xy)P(xz)P(yz) / (P(x)P(y)P(z))`.
//!
//! Truncated products are not normalized in general. Every divergence here is
//! taken against the renormalized product; the raw normalizer and the
//! unnormalized surrogate `A_m − H(v)` are reported next to it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::distribution::{marginal, normalize, product, JointDistribution};
use crate::error::{Error, Result};
use crate::lattice::{conditional_interaction, interaction_information, table_entropy};
use crate::math::{abs, binomial, exp, ln, log2};
use crate::subset::Subset;

/// A divergence-like quantity in bits that may be infinite when the second
/// argument misses part of the first's support.
#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    Finite(f64),
    /// The first state (row-major order) where `p > 0` but `q = 0`.
    Infinite { state: Vec<usize> },
}

impl Divergence {
    pub fn is_finite(&self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Divergence::Finite(v) => Some(*v),
            Divergence::Infinite { .. } => None,
        }
    }

    /// The value, with `f64::INFINITY` standing in for the infinite case.
    pub fn value(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

fn same_schema(p: &JointDistribution, q: &JointDistribution) -> Result<()> {
    if p.schema() != q.schema() {
        return Err(Error::SchemaMismatch);
    }
    Ok(())
}

fn first_support_violation(p: &[f64], q: &[f64]) -> Option<usize> {
    p.iter().zip(q).position(|(&a, &b)| a > 0.0 && b == 0.0)
}

/// `−Σ p log2 q`.
pub fn cross_entropy(p: &JointDistribution, q: &JointDistribution) -> Result<Divergence> {
    same_schema(p, q)?;
    if let Some(i) = first_support_violation(p.probs(), q.probs()) {
        return Ok(Divergence::Infinite {
            state: p.schema().decode(i),
        });
    }
    Ok(Divergence::Finite(table_cross_entropy(p.probs(), q.probs())))
}

fn table_cross_entropy(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| -a * log2(b))
        .sum()
}

/// `Σ p log2(p/q)`.
pub fn kl_divergence(p: &JointDistribution, q: &JointDistribution) -> Result<Divergence> {
    same_schema(p, q)?;
    if let Some(i) = first_support_violation(p.probs(), q.probs()) {
        return Ok(Divergence::Infinite {
            state: p.schema().decode(i),
        });
    }
    let d: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| a * log2(a / b))
        .sum();
    Ok(Divergence::Finite(d.max(0.0)))
}

/// Per-degree decomposition of `D(P‖Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    /// `degree_terms[m-1] = Σ_{|τ|=m} (-1)^{m+1} I'(τ)`, bits. Empty when the
    /// divergence is infinite.
    pub degree_terms: Vec<f64>,
    /// `cumulative[m-1] = A_m`, the running sum of `degree_terms`.
    pub cumulative: Vec<f64>,
    pub true_entropy: f64,
    pub divergence: Divergence,
}

impl ExpansionReport {
    pub fn order(&self) -> usize {
        self.degree_terms.len()
    }

    /// `A_m − H(v)` for `m` in `1..=n`.
    pub fn truncated(&self, m: usize) -> Option<f64> {
        m.checked_sub(1)
            .and_then(|i| self.cumulative.get(i))
            .map(|a| a - self.true_entropy)
    }

    /// `A_n − H(v) − D(P‖Q)`; zero up to rounding.
    pub fn residual(&self) -> Option<f64> {
        let d = self.divergence.finite()?;
        Some(self.truncated(self.order())? - d)
    }
}

pub fn expand_divergence(p: &JointDistribution, q: &JointDistribution) -> Result<ExpansionReport> {
    same_schema(p, q)?;
    let n = p.len();
    let true_entropy = table_entropy(p.probs());
    let divergence = kl_divergence(p, q)?;
    if !divergence.is_finite() {
        return Ok(ExpansionReport {
            degree_terms: Vec::new(),
            cumulative: Vec::new(),
            true_entropy,
            divergence,
        });
    }
    let cross: BTreeMap<Subset, f64> = Subset::all_up_to(n, n)
        .map(|t| {
            let h = table_cross_entropy(&p.marginal_table(t), &q.marginal_table(t));
            (t, h)
        })
        .collect();
    let degree_terms = degree_terms(n, &cross);
    Ok(ExpansionReport {
        cumulative: running_sum(&degree_terms),
        degree_terms,
        true_entropy,
        divergence,
    })
}

/// Degree terms from a full table of (cross-)entropies.
fn degree_terms(n: usize, entropies: &BTreeMap<Subset, f64>) -> Vec<f64> {
    let mut terms = vec![0.0; n];
    for &tau in entropies.keys() {
        let interaction: f64 = tau
            .subsets()
            .map(|eta| eta.mobius_sign() * entropies[&eta])
            .sum();
        terms[tau.len() - 1] += tau.mobius_sign() * interaction;
    }
    terms
}

fn running_sum(terms: &[f64]) -> Vec<f64> {
    terms
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect()
}

/// Exponents `c_k` (subset size → power) of the marginals in the order-`m`
/// truncated factorization of an `n`-variable distribution. Zero exponents
/// are omitted.
pub fn truncation_coefficients(n: usize, m: usize) -> Result<BTreeMap<usize, i64>> {
    if m == 0 || m > n {
        return Err(Error::OrderOutOfRange { m, n });
    }
    let mut out = BTreeMap::new();
    for k in 1..=m {
        let magnitude = if k == n { 1 } else { binomial(n - k - 1, m - k) };
        if magnitude == 0 {
            continue;
        }
        let sign = if (m - k).is_multiple_of(2) { 1 } else { -1 };
        out.insert(k, sign * magnitude as i64);
    }
    Ok(out)
}

/// The normalized order-`m` approximation of a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationFamily {
    pub order: usize,
    pub coefficients: BTreeMap<usize, i64>,
    pub approximation: JointDistribution,
    /// Total mass of the factor product before normalization.
    pub raw_z: f64,
}

pub fn truncated_approximation(p: &JointDistribution, m: usize) -> Result<TruncationFamily> {
    let n = p.len();
    let coefficients = truncation_coefficients(n, m)?;
    if m == n {
        return Ok(TruncationFamily {
            order: m,
            coefficients,
            approximation: p.clone(),
            raw_z: 1.0,
        });
    }
    if m == 1 {
        let singles: Vec<JointDistribution> = (0..n)
            .map(|i| marginal(p, Subset::singleton(i)))
            .collect::<Result<_>>()?;
        return Ok(TruncationFamily {
            order: 1,
            coefficients,
            approximation: product(&singles)?,
            raw_z: 1.0,
        });
    }

    let schema = p.schema();
    let states = schema.state_count();
    let mut log_w = vec![0.0f64; states];
    let mut zero_numerator = vec![false; states];
    let mut zero_denominator = vec![false; states];
    for tau in Subset::all_up_to(n, m) {
        let Some(&c) = coefficients.get(&tau.len()) else {
            continue;
        };
        let table = p.marginal_table(tau);
        let c = c as f64;
        for (s, j) in schema.projection(tau).into_iter().enumerate() {
            let v = table[j];
            if v > 0.0 {
                log_w[s] += c * ln(v);
            } else if c > 0.0 {
                zero_numerator[s] = true;
            } else {
                zero_denominator[s] = true;
            }
        }
    }
    for s in 0..states {
        if zero_numerator[s] {
            log_w[s] = f64::NEG_INFINITY;
        } else if zero_denominator[s] {
            return Err(Error::UndefinedApproximation {
                state: schema.decode(s),
            });
        }
    }

    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::AllZeroWeights);
    }
    let scaled: Vec<f64> = log_w.iter().map(|&l| exp(l - max)).collect();
    let (approximation, z_scaled) = normalize(schema, scaled)?;
    Ok(TruncationFamily {
        order: m,
        coefficients,
        approximation,
        raw_z: exp(max + ln(z_scaled)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationDivergence {
    pub order: usize,
    /// `D(P ‖ normalized P'_m)`, bits.
    pub divergence: f64,
    /// `A_m − H(v)` with `H' = H`, bits.
    pub surrogate: f64,
    pub raw_z: f64,
}

pub fn truncation_divergence(p: &JointDistribution, m: usize) -> Result<TruncationDivergence> {
    let family = truncated_approximation(p, m)?;
    let divergence = match kl_divergence(p, &family.approximation)? {
        Divergence::Finite(d) => d,
        // P'_m is positive wherever every marginal of P is, which covers P's
        // support.
        Divergence::Infinite { state } => return Err(Error::SupportViolation { state }),
    };
    let divergence = if m == p.len() { 0.0 } else { divergence };
    Ok(TruncationDivergence {
        order: m,
        divergence,
        surrogate: self_cumulative(p, m) - table_entropy(p.probs()),
        raw_z: family.raw_z,
    })
}

/// `A_m` computed from `p`'s own subset entropies.
fn self_cumulative(p: &JointDistribution, m: usize) -> f64 {
    let entropies: BTreeMap<Subset, f64> = Subset::all_up_to(p.len(), m)
        .map(|t| (t, table_entropy(&p.marginal_table(t))))
        .collect();
    degree_terms(p.len(), &entropies)[..m].iter().sum()
}

/// `(m, D(P‖P'_m))` for `m = 1..=n`; the last entry is exactly zero.
pub fn convergence_profile(p: &JointDistribution) -> Result<Vec<(usize, f64)>> {
    (1..=p.len())
        .map(|m| truncation_divergence(p, m).map(|t| (m, t.divergence)))
        .collect()
}

/// `|A_{m2} − A_{m1}|` using `p`'s own entropies: the absolute sum of the
/// degree terms in `m1+1..=m2`.
pub fn truncation_distance(p: &JointDistribution, m1: usize, m2: usize) -> Result<f64> {
    let n = p.len();
    if m1 == 0 || m1 >= m2 || m2 > n {
        return Err(Error::OrderOutOfRange { m: m2, n });
    }
    let entropies: BTreeMap<Subset, f64> = Subset::all_up_to(n, m2)
        .map(|t| (t, table_entropy(&p.marginal_table(t))))
        .collect();
    let terms = degree_terms(n, &entropies);
    Ok(abs(terms[m1..m2].iter().sum::<f64>()))
}

/// Checks relating third-order truncation to conditional mutual information
/// and to the interaction recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    /// `A_3 − Σ_i H(X_i)` with `H' = H`.
    pub cumulative_minus_singles: f64,
    /// `−Σ_k Σ_{i>j; i,j≠k} I(X_i X_j | X_k)`.
    pub conditional_pair_sum: f64,
    /// Difference of the two quantities above.
    pub gap: f64,
    /// `I(v)` over the full variable set.
    pub full_interaction: f64,
    /// For each variable `i`: `I(v∖i | X_i) − I(v∖i)`, which must vanish
    /// when `I(v) = 0`.
    pub truncation_residuals: Vec<f64>,
    /// For each variable `i`: `I(v) − I(v∖i) + I(v∖i | X_i)`.
    pub recursion_residuals: Vec<f64>,
}

pub fn delta_relation(p: &JointDistribution) -> Result<DeltaReport> {
    let n = p.len();
    if n < 3 {
        return Err(Error::Domain("delta relation needs at least three variables"));
    }
    let singles: f64 = (0..n)
        .map(|i| table_entropy(&p.marginal_table(Subset::singleton(i))))
        .sum();
    let cumulative_minus_singles = self_cumulative(p, 3) - singles;

    let mut conditional_pair_sum = 0.0;
    for k in 0..n {
        for i in 0..n {
            for j in 0..i {
                if i != k && j != k {
                    let pair = Subset::singleton(i).with(j);
                    conditional_pair_sum -= conditional_interaction(p, pair, k)?;
                }
            }
        }
    }

    let full = p.schema().full();
    let full_interaction = interaction_information(p, full)?;
    let mut truncation_residuals = Vec::with_capacity(n);
    let mut recursion_residuals = Vec::with_capacity(n);
    for i in 0..n {
        let rest = full.without(i);
        let unconditioned = interaction_information(p, rest)?;
        let conditioned = conditional_interaction(p, rest, i)?;
        truncation_residuals.push(conditioned - unconditioned);
        recursion_residuals.push(full_interaction - unconditioned + conditioned);
    }
    Ok(DeltaReport {
        cumulative_minus_singles,
        conditional_pair_sum,
        gap: cumulative_minus_singles - conditional_pair_sum,
        full_interaction,
        truncation_residuals,
        recursion_residuals,
    })
}
