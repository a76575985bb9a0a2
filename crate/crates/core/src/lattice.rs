//! Entropies and interaction informations over the subset lattice.
//!
//! Sign convention: `I(τ) = Σ_{η ⊆ τ} (-1)^{|η|+1} H(η)`, so a single
//! variable's interaction is its entropy, a pair's is mutual information,
//! and the inverse `H(τ) = Σ_{η ⊆ τ} (-1)^{|η|+1} I(η)` has the same shape.
//! All functions return bits unless stated otherwise.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::distribution::{conditional, JointDistribution};
use crate::error::{Error, Result};
use crate::math::plogp_bits;
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    /// Converts a value measured in bits into this base.
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            LogBase::Bits => bits,
            LogBase::Nats => bits * core::f64::consts::LN_2,
        }
    }

    /// Converts a value measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Bits => nats / core::f64::consts::LN_2,
            LogBase::Nats => nats,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Bits => "bits",
            LogBase::Nats => "nats",
        }
    }
}

/// Shannon entropy of a table, bits.
pub(crate) fn table_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| plogp_bits(p)).sum()
}

/// Entropy of the marginal over `subset`; the empty subset has entropy 0.
pub fn entropy(dist: &JointDistribution, subset: Subset) -> Result<f64> {
    dist.schema().check_subset(subset)?;
    if subset.is_empty() {
        return Ok(0.0);
    }
    Ok(table_entropy(&dist.marginal_table(subset)))
}

pub fn interaction_information(dist: &JointDistribution, subset: Subset) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    dist.schema().check_subset(subset)?;
    let mut acc = 0.0;
    for tau in subset.subsets() {
        acc += tau.mobius_sign() * table_entropy(&dist.marginal_table(tau));
    }
    Ok(acc)
}

pub fn mutual_information(dist: &JointDistribution, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::Domain("mutual information needs two distinct variables"));
    }
    let pair = Subset::from_indices(&[i, j], dist.len())?;
    Ok(interaction_information(dist, pair)?.max(0.0))
}

/// `E_x[ I(subset | given = x) ]`, each slice evaluated on the conditional
/// distribution of `subset`. Levels of zero probability carry zero weight.
pub fn conditional_interaction(
    dist: &JointDistribution,
    subset: Subset,
    given: usize,
) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if subset.contains(given) {
        return Err(Error::OverlappingSets);
    }
    let given_set = Subset::from_indices(&[given], dist.len())?;
    let table = conditional(dist, subset, given_set)?;
    let weights = dist.marginal_table(given_set);
    let slice_schema = dist.schema().restrict(subset)?;
    let slice_full = slice_schema.full();
    let mut acc = 0.0;
    for (level, &w) in weights.iter().enumerate() {
        let Some(row) = table.row(level) else { continue };
        if w == 0.0 {
            continue;
        }
        let slice = JointDistribution::new(slice_schema.clone(), row.to_vec())?;
        acc += w * interaction_information(&slice, slice_full)?;
    }
    Ok(acc)
}

/// `Ω = Σ_i H(X_i) − H(subset)`, the total correlation.
pub fn multi_information(dist: &JointDistribution, subset: Subset) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    dist.schema().check_subset(subset)?;
    let singles: f64 = subset
        .indices()
        .map(|i| table_entropy(&dist.marginal_table(Subset::singleton(i))))
        .sum();
    Ok((singles - table_entropy(&dist.marginal_table(subset))).max(0.0))
}

/// Per-degree sums `S_k = Σ_{|τ|=k} I(τ)` and their alternating
/// recombination `Σ_{k≥2} (-1)^k S_k`, which equals Ω exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaDecomposition {
    /// `(k, S_k)` for `k = 2..=|subset|`.
    pub degree_sums: Vec<(usize, f64)>,
    pub recombined: f64,
    pub omega: f64,
}

impl OmegaDecomposition {
    pub fn residual(&self) -> f64 {
        self.recombined - self.omega
    }

    pub fn degree_sum(&self, k: usize) -> Option<f64> {
        self.degree_sums
            .iter()
            .find(|&&(d, _)| d == k)
            .map(|&(_, s)| s)
    }
}

pub fn omega_decomposition(dist: &JointDistribution, subset: Subset) -> Result<OmegaDecomposition> {
    if subset.len() < 2 {
        return Err(Error::Domain("omega decomposition needs at least two variables"));
    }
    dist.schema().check_subset(subset)?;
    let entropies: BTreeMap<Subset, f64> = subset
        .subsets()
        .map(|t| (t, table_entropy(&dist.marginal_table(t))))
        .collect();
    let mut sums = alloc::vec![0.0; subset.len() + 1];
    for tau in subset.subsets() {
        let i: f64 = tau.subsets().map(|eta| eta.mobius_sign() * entropies[&eta]).sum();
        sums[tau.len()] += i;
    }
    let degree_sums: Vec<(usize, f64)> = (2..=subset.len()).map(|k| (k, sums[k])).collect();
    let recombined = degree_sums
        .iter()
        .map(|&(k, s)| if k % 2 == 0 { s } else { -s })
        .sum();
    Ok(OmegaDecomposition {
        degree_sums,
        recombined,
        omega: multi_information(dist, subset)?,
    })
}

/// Entropies and interactions of every subset up to a size cap.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoProfile {
    pub base: LogBase,
    pub entropies: BTreeMap<Subset, f64>,
    pub interactions: BTreeMap<Subset, f64>,
}

impl InfoProfile {
    /// Computes both lattices for all non-empty subsets with at most
    /// `max_len` members. Values are in bits.
    pub fn compute(dist: &JointDistribution, max_len: usize) -> Self {
        let n = dist.len();
        let entropies: BTreeMap<Subset, f64> = Subset::all_up_to(n, max_len)
            .map(|s| (s, table_entropy(&dist.marginal_table(s))))
            .collect();
        let interactions = mobius(&entropies);
        InfoProfile {
            base: LogBase::Bits,
            entropies,
            interactions,
        }
    }

    /// Builds a profile holding only interactions (entropies left empty).
    pub fn from_interactions(base: LogBase, interactions: BTreeMap<Subset, f64>) -> Self {
        InfoProfile {
            base,
            entropies: BTreeMap::new(),
            interactions,
        }
    }

    /// The same profile with every value rescaled to `base`.
    pub fn in_base(&self, base: LogBase) -> InfoProfile {
        let factor = match (self.base, base) {
            (a, b) if a == b => 1.0,
            (LogBase::Bits, LogBase::Nats) => core::f64::consts::LN_2,
            _ => 1.0 / core::f64::consts::LN_2,
        };
        let scale = |m: &BTreeMap<Subset, f64>| m.iter().map(|(&k, &v)| (k, v * factor)).collect();
        InfoProfile {
            base,
            entropies: scale(&self.entropies),
            interactions: scale(&self.interactions),
        }
    }
}

/// `Σ_{η ⊆ τ} (-1)^{|η|+1} f(η)` for every `τ` in the map. Because the
/// transform is an involution this maps entropies to interactions and back.
fn mobius(values: &BTreeMap<Subset, f64>) -> BTreeMap<Subset, f64> {
    values
        .keys()
        .map(|&tau| {
            let v = tau
                .subsets()
                .map(|eta| eta.mobius_sign() * values[&eta])
                .sum();
            (tau, v)
        })
        .collect()
}

/// Reconstructs `H(subset)` from the interactions of its non-empty subsets.
pub fn entropy_from_interactions(profile: &InfoProfile, subset: Subset) -> Result<f64> {
    if subset.is_empty() {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for eta in subset.subsets() {
        let i = profile
            .interactions
            .get(&eta)
            .ok_or_else(|| Error::IncompleteProfile(eta.to_vec()))?;
        acc += eta.mobius_sign() * i;
    }
    Ok(acc)
}
