//! Dense joint distributions over named categorical variables.
//!
//! States are indexed row-major in schema order: the last variable varies
//! fastest. Zero-probability states are stored explicitly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;
use crate::subset::{Subset, MAX_VARIABLES};

/// Default ceiling on the number of joint states a schema may describe.
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

/// Tolerance on the total mass of a table handed to [`JointDistribution::new`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub cardinality: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, cardinality: usize) -> Self {
        Variable {
            name: name.into(),
            cardinality,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schema {
    variables: Vec<Variable>,
    states: usize,
}

impl Schema {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        Self::with_cap(variables, DEFAULT_STATE_CAP)
    }

    /// Like [`Schema::new`] but rejects state spaces larger than `cap`.
    pub fn with_cap(variables: Vec<Variable>, cap: usize) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::EmptySchema);
        }
        if variables.len() > MAX_VARIABLES {
            return Err(Error::StateSpaceTooLarge(variables.len(), cap));
        }
        let mut states: usize = 1;
        for (i, v) in variables.iter().enumerate() {
            if v.cardinality < 2 {
                return Err(Error::DegenerateCardinality(v.name.clone(), v.cardinality));
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::DuplicateName(v.name.clone()));
            }
            states = states
                .checked_mul(v.cardinality)
                .filter(|&s| s <= cap)
                .ok_or(Error::StateSpaceTooLarge(variables.len(), cap))?;
        }
        Ok(Schema { variables, states })
    }

    /// Convenience constructor from `(name, cardinality)` pairs.
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(n, c)| Variable::new(n, c))
                .collect(),
        )
    }

    /// Schema with anonymous variables `X0, X1, ...`.
    pub fn anonymous(cardinalities: &[usize]) -> Result<Self> {
        Self::new(
            cardinalities
                .iter()
                .enumerate()
                .map(|(i, &c)| Variable::new(alloc::format!("X{i}"), c))
                .collect(),
        )
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Total number of joint states.
    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn cardinalities(&self) -> impl Iterator<Item = usize> + '_ {
        self.variables.iter().map(|v| v.cardinality)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub(crate) fn check_subset(&self, subset: Subset) -> Result<()> {
        if !subset.is_subset_of(self.full()) {
            let bad = subset.difference(self.full()).indices().next().unwrap_or(0);
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// The schema restricted to `subset`, in original order.
    pub fn restrict(&self, subset: Subset) -> Result<Schema> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        self.check_subset(subset)?;
        let variables: Vec<Variable> = subset
            .indices()
            .map(|i| self.variables[i].clone())
            .collect();
        let states = variables.iter().map(|v| v.cardinality).product();
        Ok(Schema { variables, states })
    }

    /// Row-major index of a state tuple.
    pub fn encode(&self, state: &[usize]) -> Result<usize> {
        if state.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: state.len(),
            });
        }
        let mut idx = 0usize;
        for (v, &x) in self.variables.iter().zip(state) {
            if x >= v.cardinality {
                return Err(Error::ValueOutOfRange {
                    row: 0,
                    variable: v.name.clone(),
                    value: x,
                    cardinality: v.cardinality,
                });
            }
            idx = idx * v.cardinality + x;
        }
        Ok(idx)
    }

    /// State tuple of a row-major index.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut state = vec![0; self.len()];
        for (slot, v) in state.iter_mut().zip(&self.variables).rev() {
            *slot = index % v.cardinality;
            index /= v.cardinality;
        }
        state
    }

    /// For each full state index, the row-major index of its projection onto
    /// `subset` (in the restricted schema).
    pub(crate) fn projection(&self, subset: Subset) -> Vec<usize> {
        // Stride each variable contributes to the projected index.
        let mut strides = vec![0usize; self.len()];
        let mut stride = 1usize;
        for i in (0..self.len()).rev() {
            if subset.contains(i) {
                strides[i] = stride;
                stride *= self.variables[i].cardinality;
            }
        }
        let mut out = Vec::with_capacity(self.states);
        let mut digits = vec![0usize; self.len()];
        let mut proj = 0usize;
        for _ in 0..self.states {
            out.push(proj);
            // Odometer increment, last variable fastest.
            for i in (0..self.len()).rev() {
                digits[i] += 1;
                proj += strides[i];
                if digits[i] < self.variables[i].cardinality {
                    break;
                }
                proj -= strides[i] * digits[i];
                digits[i] = 0;
            }
        }
        out
    }
}

/// A normalized probability table over a [`Schema`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    schema: Schema,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Validates entries (finite, non-negative, total within 1e-9 of one) and
    /// renormalizes exactly.
    pub fn new(schema: Schema, probs: Vec<f64>) -> Result<Self> {
        let sum = check_table(&schema, &probs)?;
        if abs(sum - 1.0) > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self::renormalized(schema, probs, sum))
    }

    // Tables summing to one within rounding are kept as they are.
    fn renormalized(schema: Schema, mut probs: Vec<f64>, sum: f64) -> Self {
        if abs(sum - 1.0) > probs.len() as f64 * f64::EPSILON {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        JointDistribution { schema, probs }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_parts(self) -> (Schema, Vec<f64>) {
        (self.schema, self.probs)
    }

    pub fn prob(&self, state: &[usize]) -> Result<f64> {
        Ok(self.probs[self.schema.encode(state)?])
    }

    pub fn len(&self) -> usize {
        self.schema.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schema.is_empty()
    }

    /// Marginal table over `subset` as a raw vector (restricted row-major).
    pub(crate) fn marginal_table(&self, subset: Subset) -> Vec<f64> {
        if subset == self.schema.full() {
            return self.probs.clone();
        }
        let restricted_states: usize = subset
            .indices()
            .map(|i| self.schema.variables[i].cardinality)
            .product();
        let mut out = vec![0.0; restricted_states];
        if subset.is_empty() {
            out[0] = 1.0;
            return out;
        }
        for (p, j) in self.probs.iter().zip(self.schema.projection(subset)) {
            out[j] += p;
        }
        out
    }

    /// Whether two distributions agree tablewise within `tol`.
    pub fn approx_eq(&self, other: &JointDistribution, tol: f64) -> bool {
        self.schema == other.schema
            && self
                .probs
                .iter()
                .zip(&other.probs)
                .all(|(a, b)| abs(a - b) <= tol)
    }
}

fn check_table(schema: &Schema, table: &[f64]) -> Result<f64> {
    if table.len() != schema.state_count() {
        return Err(Error::LengthMismatch {
            expected: schema.state_count(),
            found: table.len(),
        });
    }
    let mut sum = 0.0;
    for (index, &value) in table.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidProbability { index, value });
        }
        sum += value;
    }
    Ok(sum)
}

pub fn marginal(dist: &JointDistribution, subset: Subset) -> Result<JointDistribution> {
    let schema = dist.schema.restrict(subset)?;
    let probs = dist.marginal_table(subset);
    let sum = probs.iter().sum();
    Ok(JointDistribution::renormalized(schema, probs, sum))
}

/// `P(targets | givens)` for every given-state of positive probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    pub targets: Subset,
    pub givens: Subset,
    target_states: usize,
    /// Indexed by given-state (restricted row-major, one entry when `givens`
    /// is empty). `None` marks a given-state of zero probability.
    rows: Vec<Option<Vec<f64>>>,
}

impl ConditionalTable {
    pub fn target_states(&self) -> usize {
        self.target_states
    }

    pub fn given_states(&self) -> usize {
        self.rows.len()
    }

    /// Conditional distribution of the targets at one given-state.
    pub fn row(&self, given_state: usize) -> Option<&[f64]> {
        self.rows.get(given_state)?.as_deref()
    }

    pub fn get(&self, given_state: usize, target_state: usize) -> Option<f64> {
        self.row(given_state).map(|r| r[target_state])
    }
}

pub fn conditional(
    dist: &JointDistribution,
    targets: Subset,
    givens: Subset,
) -> Result<ConditionalTable> {
    if targets.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !targets.intersection(givens).is_empty() {
        return Err(Error::OverlappingSets);
    }
    let schema = &dist.schema;
    schema.check_subset(targets)?;
    schema.check_subset(givens)?;

    let target_idx = schema.projection(targets);
    let target_states = schema.restrict(targets)?.state_count();
    let (given_idx, given_states) = if givens.is_empty() {
        (vec![0; schema.state_count()], 1)
    } else {
        (
            schema.projection(givens),
            schema.restrict(givens)?.state_count(),
        )
    };

    let mut joint = vec![vec![0.0; target_states]; given_states];
    for ((&p, &t), &g) in dist.probs.iter().zip(&target_idx).zip(&given_idx) {
        joint[g][t] += p;
    }
    let rows = joint
        .into_iter()
        .map(|mut row| {
            let z: f64 = row.iter().sum();
            if z > 0.0 {
                row.iter_mut().for_each(|p| *p /= z);
                Some(row)
            } else {
                None
            }
        })
        .collect();
    Ok(ConditionalTable {
        targets,
        givens,
        target_states,
        rows,
    })
}

/// Product of distributions over disjoint variable sets; the result's schema
/// concatenates the factors' schemas in order.
pub fn product(factors: &[JointDistribution]) -> Result<JointDistribution> {
    let first = factors.first().ok_or(Error::Domain("product of zero factors"))?;
    let mut variables: Vec<Variable> = Vec::new();
    for f in factors {
        for v in f.schema.variables() {
            if variables.iter().any(|w| w.name == v.name) {
                return Err(Error::NameCollision(v.name.clone()));
            }
            variables.push(v.clone());
        }
    }
    let schema = Schema::new(variables)?;
    let mut probs = first.probs.clone();
    for f in &factors[1..] {
        let mut next = Vec::with_capacity(probs.len() * f.probs.len());
        for &a in &probs {
            next.extend(f.probs.iter().map(|&b| a * b));
        }
        probs = next;
    }
    let sum = probs.iter().sum();
    Ok(JointDistribution::renormalized(schema, probs, sum))
}

pub fn uniform(schema: &Schema) -> JointDistribution {
    let n = schema.state_count();
    JointDistribution {
        schema: schema.clone(),
        probs: vec![1.0 / n as f64; n],
    }
}

/// Divides non-negative weights by their total `Z`, returning both.
pub fn normalize(schema: &Schema, weights: Vec<f64>) -> Result<(JointDistribution, f64)> {
    if weights.len() != schema.state_count() {
        return Err(Error::LengthMismatch {
            expected: schema.state_count(),
            found: weights.len(),
        });
    }
    for (index, &value) in weights.iter().enumerate() {
        if value.is_nan() || value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
        if !value.is_finite() {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let z: f64 = weights.iter().sum();
    if z <= 0.0 {
        return Err(Error::AllZeroWeights);
    }
    Ok((
        JointDistribution::renormalized(schema.clone(), weights, z),
        z,
    ))
}
