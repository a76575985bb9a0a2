//! Delimited sample files and token-to-level mapping.

use std::collections::{BTreeSet, HashMap};

use infolattice::{DatasetTable, Schema, Variable};

use crate::error::{CliError, CliResult};

/// A schema whose levels carry the tokens seen in sample files.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSchema {
    pub schema: Schema,
    /// `levels[v][k]` is the token of level `k` of variable `v`.
    pub levels: Vec<Vec<String>>,
}

impl LabeledSchema {
    /// Levels named `0, 1, …` for every variable.
    pub fn integer_coded(schema: Schema) -> Self {
        let levels = schema
            .cardinalities()
            .map(|k| (0..k).map(|l| l.to_string()).collect())
            .collect();
        LabeledSchema { schema, levels }
    }

    pub fn has_default_levels(&self, v: usize) -> bool {
        self.levels[v].iter().enumerate().all(|(k, t)| *t == k.to_string())
    }

    fn lookup(&self) -> Vec<HashMap<&str, usize>> {
        self.levels
            .iter()
            .map(|ls| ls.iter().enumerate().map(|(k, t)| (t.as_str(), k)).collect())
            .collect()
    }
}

/// Header and rows of a sample file, tokens untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// 1-based source line of each row.
    pub lines: Vec<u64>,
}

pub fn read_raw(text: &str, delimiter: u8) -> CliResult<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Parse(format!("header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(CliError::Parse("missing header row".into()));
    }
    let mut seen = BTreeSet::new();
    for name in &header {
        if name.is_empty() || !seen.insert(name.as_str()) {
            return Err(CliError::Parse(format!("header line 1: empty or repeated column name `{name}`")));
        }
    }
    let (mut rows, mut lines) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(CliError::Parse(format!(
                "line {line}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        rows.push(record.iter().map(str::to_string).collect());
        lines.push(line);
    }
    Ok(RawTable { header, rows, lines })
}

/// Sorted token order: numeric when every token is a non-negative integer,
/// byte-lexicographic otherwise.
fn sort_tokens(tokens: BTreeSet<&str>) -> Vec<String> {
    let numeric: Option<Vec<(u128, &str)>> = tokens
        .iter()
        .map(|t| t.parse::<u128>().ok().map(|n| (n, *t)))
        .collect();
    match numeric {
        Some(mut ns) => {
            ns.sort();
            ns.into_iter().map(|(_, t)| t.to_string()).collect()
        }
        None => tokens.into_iter().map(str::to_string).collect(),
    }
}

/// Infers one schema covering every table; variable order follows the first
/// header and levels pool the tokens of all tables.
pub fn infer_schema(tables: &[&RawTable]) -> CliResult<LabeledSchema> {
    let first = tables.first().ok_or_else(|| CliError::Usage("no sample files".into()))?;
    let mut pools: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); first.header.len()];
    for t in tables {
        let cols = column_map(&first.header, t)?;
        for row in &t.rows {
            for (v, &c) in cols.iter().enumerate() {
                pools[v].insert(row[c].as_str());
            }
        }
    }
    let mut vars = Vec::new();
    let mut levels = Vec::new();
    for (name, pool) in first.header.iter().zip(pools) {
        match pool.len() {
            0 => return Err(CliError::Domain("no rows to infer the schema from; supply --schema".into())),
            1 => {
                return Err(CliError::Domain(format!(
                    "variable `{name}` takes a single value; supply --schema to declare its levels"
                )))
            }
            k => vars.push(Variable::new(name.clone(), k)),
        }
        levels.push(sort_tokens(pool));
    }
    let schema = Schema::new(vars).map_err(|e| CliError::parse("inferred schema", e))?;
    Ok(LabeledSchema { schema, levels })
}

/// Position in `table` of each name in `names`.
fn column_map(names: &[String], table: &RawTable) -> CliResult<Vec<usize>> {
    if names.len() != table.header.len() {
        return Err(CliError::Parse(format!(
            "header has {} columns, expected {}",
            table.header.len(),
            names.len()
        )));
    }
    names
        .iter()
        .map(|n| {
            table
                .header
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| CliError::Parse(format!("header lacks variable `{n}`")))
        })
        .collect()
}

/// Maps tokens to levels under `schema`.
pub fn encode(table: &RawTable, schema: &LabeledSchema) -> CliResult<DatasetTable> {
    let names: Vec<String> = schema.schema.variables().iter().map(|v| v.name.clone()).collect();
    let cols = column_map(&names, table)?;
    let lookup = schema.lookup();
    let mut rows = Vec::with_capacity(table.rows.len());
    for (row, line) in table.rows.iter().zip(&table.lines) {
        let coded = cols
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                lookup[v].get(row[c].as_str()).copied().ok_or_else(|| {
                    CliError::Domain(format!("line {line}: variable `{}` has unseen token `{}`", names[v], row[c]))
                })
            })
            .collect::<CliResult<Vec<usize>>>()?;
        rows.push(coded);
    }
    DatasetTable::new(schema.schema.clone(), rows).map_err(|e| CliError::parse("samples", e))
}

/// Reads a sample file, inferring the schema when none is given.
pub fn load_dataset(
    text: &str,
    delimiter: u8,
    schema: Option<&LabeledSchema>,
) -> CliResult<(DatasetTable, LabeledSchema)> {
    let raw = read_raw(text, delimiter)?;
    let schema = match schema {
        Some(s) => s.clone(),
        None => infer_schema(&[&raw])?,
    };
    Ok((encode(&raw, &schema)?, schema))
}
