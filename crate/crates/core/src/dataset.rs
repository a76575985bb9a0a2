//! Integer-coded samples and the plugin (empirical frequency) estimator.

use alloc::vec;
use alloc::vec::Vec;

use crate::distribution::{JointDistribution, Schema};
use crate::error::{Error, Result};

/// Samples already mapped to integer levels, with a dense count per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetTable {
    schema: Schema,
    rows: Vec<Vec<usize>>,
    counts: Vec<u64>,
}

impl DatasetTable {
    pub fn new(schema: Schema, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut counts = vec![0u64; schema.state_count()];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(Error::RaggedRow {
                    row: r,
                    expected: schema.len(),
                    found: row.len(),
                });
            }
            for (v, &x) in schema.variables().iter().zip(row) {
                if x >= v.cardinality {
                    return Err(Error::ValueOutOfRange {
                        row: r,
                        variable: v.name.clone(),
                        value: x,
                        cardinality: v.cardinality,
                    });
                }
            }
            counts[schema.encode(row)?] += 1;
        }
        Ok(DatasetTable {
            schema,
            rows,
            counts,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Count per row-major state index.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// `probs[s] = count(s) / rows`.
pub fn estimate_joint(data: &DatasetTable) -> Result<JointDistribution> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let total = data.len() as f64;
    let probs = data.counts.iter().map(|&c| c as f64 / total).collect();
    JointDistribution::new(data.schema.clone(), probs)
}
