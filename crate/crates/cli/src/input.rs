//! Resolving input paths into distributions and graphs.

use std::path::{Path, PathBuf};

use infolattice::{estimate_joint, JointDistribution, WeightedGraph};

use crate::docs::{distribution_from_doc, graph_from_doc, is_json, parse_document, Document, SchemaDoc};
use crate::error::{read_file, CliError, CliResult};
use crate::samples::{encode, infer_schema, read_raw, LabeledSchema, RawTable};

/// How sample files are read.
#[derive(Debug, Clone, Default)]
pub struct Parsing {
    pub schema: Option<LabeledSchema>,
    pub delimiter: u8,
}

impl Parsing {
    pub fn new(schema_path: Option<&Path>, tab: bool) -> CliResult<Self> {
        let schema = schema_path.map(load_schema).transpose()?;
        Ok(Parsing {
            schema,
            delimiter: if tab { b'\t' } else { b',' },
        })
    }
}

/// Reads a schema document (a distribution document also qualifies).
pub fn load_schema(path: &Path) -> CliResult<LabeledSchema> {
    let text = read_file(path)?;
    let doc: SchemaDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    crate::docs::schema_from_doc(&doc.schema)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub path: PathBuf,
    pub dist: JointDistribution,
    pub labels: LabeledSchema,
    /// Sample count when the input was a sample file.
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Data(Loaded),
    Graph(WeightedGraph),
}

enum Pending {
    Ready(Input),
    Samples(PathBuf, RawTable),
}

/// Loads every path. Sample files share one schema: `--schema` if given,
/// else the first distribution document's, else one inferred from all
/// sample files together.
pub fn load_inputs(paths: &[&Path], parsing: &Parsing) -> CliResult<Vec<Input>> {
    let mut pending = Vec::with_capacity(paths.len());
    let mut doc_schema = None;
    for &path in paths {
        let text = read_file(path)?;
        let ctx = |e| with_path(path, e);
        if is_json(&text) {
            let input = match parse_document(&text).map_err(ctx)? {
                Document::Distribution(doc) => {
                    let (dist, labels) = distribution_from_doc(doc).map_err(ctx)?;
                    doc_schema.get_or_insert_with(|| labels.clone());
                    Input::Data(Loaded {
                        path: path.to_path_buf(),
                        dist,
                        labels,
                        rows: None,
                    })
                }
                Document::Graph(doc) => Input::Graph(graph_from_doc(doc).map_err(ctx)?),
            };
            pending.push(Pending::Ready(input));
        } else {
            pending.push(Pending::Samples(path.to_path_buf(), read_raw(&text, parsing.delimiter).map_err(ctx)?));
        }
    }
    let raws: Vec<&RawTable> = pending
        .iter()
        .filter_map(|p| match p {
            Pending::Samples(_, raw) => Some(raw),
            Pending::Ready(_) => None,
        })
        .collect();
    let shared = match (&parsing.schema, doc_schema) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(s)) => Some(s),
        (None, None) if !raws.is_empty() => Some(infer_schema(&raws)?),
        (None, None) => None,
    };
    pending
        .into_iter()
        .map(|p| match p {
            Pending::Ready(input) => Ok(input),
            Pending::Samples(path, raw) => {
                let labels = shared.clone().expect("schema resolved for samples");
                let data = encode(&raw, &labels).map_err(|e| with_path(&path, e))?;
                let dist = estimate_joint(&data)
                    .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
                Ok(Input::Data(Loaded {
                    path,
                    dist,
                    labels,
                    rows: Some(data.len()),
                }))
            }
        })
        .collect()
}

fn with_path(path: &Path, err: CliError) -> CliError {
    let at = |m: String| format!("{}: {m}", path.display());
    match err {
        CliError::Parse(m) => CliError::Parse(at(m)),
        CliError::Domain(m) => CliError::Domain(at(m)),
        usage => usage,
    }
}

/// Like [`load_inputs`] but every path must hold data.
pub fn load_distributions(paths: &[&Path], parsing: &Parsing) -> CliResult<Vec<Loaded>> {
    load_inputs(paths, parsing)?
        .into_iter()
        .zip(paths)
        .map(|(input, path)| match input {
            Input::Data(l) => Ok(l),
            Input::Graph(_) => Err(CliError::Usage(format!(
                "{}: expected samples or a distribution, found a graph",
                path.display()
            ))),
        })
        .collect()
}
