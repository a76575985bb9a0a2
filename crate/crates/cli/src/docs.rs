//! JSON documents for schemas, distributions and graphs.

use infolattice::{Edge, JointDistribution, Schema, Variable, WeightedGraph};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::number::to_precise_json;
use crate::samples::LabeledSchema;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableDoc {
    pub name: String,
    pub cardinality: usize,
    /// Token of each level; omitted when levels are `0, 1, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<String>>,
}

/// Anything with a `schema` field, including distribution documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaDoc {
    pub schema: Vec<VariableDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionDoc {
    pub schema: Vec<VariableDoc>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<String>,
    pub cardinalities: Vec<usize>,
    /// `(i, j, weight)` with node indices.
    pub edges: Vec<(usize, usize, f64)>,
    /// Node name to parent name, `null` for roots.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parents: Option<Map<String, Value>>,
}

pub fn schema_to_doc(labeled: &LabeledSchema) -> Vec<VariableDoc> {
    labeled
        .schema
        .variables()
        .iter()
        .enumerate()
        .map(|(v, var)| VariableDoc {
            name: var.name.clone(),
            cardinality: var.cardinality,
            levels: (!labeled.has_default_levels(v)).then(|| labeled.levels[v].clone()),
        })
        .collect()
}

pub fn schema_from_doc(doc: &[VariableDoc]) -> CliResult<LabeledSchema> {
    let vars = doc.iter().map(|v| Variable::new(v.name.clone(), v.cardinality)).collect();
    let schema = Schema::new(vars).map_err(|e| CliError::parse("schema", e))?;
    let mut labeled = LabeledSchema::integer_coded(schema);
    for (v, var) in doc.iter().enumerate() {
        if let Some(levels) = &var.levels {
            if levels.len() != var.cardinality {
                return Err(CliError::Parse(format!(
                    "schema: variable `{}` lists {} levels for cardinality {}",
                    var.name,
                    levels.len(),
                    var.cardinality
                )));
            }
            let mut uniq = levels.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() != levels.len() {
                return Err(CliError::Parse(format!("schema: variable `{}` repeats a level", var.name)));
            }
            labeled.levels[v] = levels.clone();
        }
    }
    Ok(labeled)
}

pub fn distribution_to_doc(dist: &JointDistribution, labels: Option<&LabeledSchema>) -> DistributionDoc {
    let schema = match labels {
        Some(l) => schema_to_doc(l),
        None => schema_to_doc(&LabeledSchema::integer_coded(dist.schema().clone())),
    };
    DistributionDoc {
        schema,
        probs: dist.probs().to_vec(),
    }
}

pub fn distribution_from_doc(doc: DistributionDoc) -> CliResult<(JointDistribution, LabeledSchema)> {
    let labeled = schema_from_doc(&doc.schema)?;
    let dist = JointDistribution::new(labeled.schema.clone(), doc.probs).map_err(|e| CliError::parse("probs", e))?;
    Ok((dist, labeled))
}

pub fn graph_to_doc(graph: &WeightedGraph) -> GraphDoc {
    let names: Vec<String> = graph.node_names().map(str::to_string).collect();
    let parents = graph.parents().map(|ps| {
        names
            .iter()
            .zip(ps)
            .map(|(n, p)| (n.clone(), p.map_or(Value::Null, |p| Value::String(names[p].clone()))))
            .collect()
    });
    GraphDoc {
        cardinalities: graph.schema().cardinalities().collect(),
        nodes: names,
        edges: graph.edges().iter().map(|e| (e.i, e.j, e.weight)).collect(),
        parents,
    }
}

pub fn graph_from_doc(doc: GraphDoc) -> CliResult<WeightedGraph> {
    if doc.nodes.len() != doc.cardinalities.len() {
        return Err(CliError::Parse(format!(
            "graph: {} nodes but {} cardinalities",
            doc.nodes.len(),
            doc.cardinalities.len()
        )));
    }
    let vars = doc
        .nodes
        .iter()
        .zip(&doc.cardinalities)
        .map(|(n, &k)| Variable::new(n.clone(), k))
        .collect();
    let schema = Schema::new(vars).map_err(|e| CliError::parse("graph nodes", e))?;
    let parents = doc
        .parents
        .map(|map| {
            let mut ps = vec![None; doc.nodes.len()];
            let mut seen = vec![false; doc.nodes.len()];
            for (child, parent) in &map {
                let c = schema
                    .index_of(child)
                    .ok_or_else(|| CliError::Parse(format!("graph parents: unknown node `{child}`")))?;
                seen[c] = true;
                ps[c] = match parent {
                    Value::Null => None,
                    Value::String(p) => Some(
                        schema
                            .index_of(p)
                            .ok_or_else(|| CliError::Parse(format!("graph parents: unknown node `{p}`")))?,
                    ),
                    other => return Err(CliError::Parse(format!("graph parents: `{child}` maps to {other}"))),
                };
            }
            if let Some(v) = seen.iter().position(|s| !s) {
                return Err(CliError::Parse(format!("graph parents: node `{}` missing", doc.nodes[v])));
            }
            Ok(ps)
        })
        .transpose()?;
    let edges = doc.edges.into_iter().map(|(i, j, weight)| Edge { i, j, weight }).collect();
    WeightedGraph::new(schema, edges, parents).map_err(|e| CliError::parse("graph", e))
}

/// A parsed input document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Distribution(DistributionDoc),
    Graph(GraphDoc),
}

/// `true` when the text looks like a JSON document rather than samples.
pub fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

pub fn parse_document(text: &str) -> CliResult<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let as_parse = |e: serde_json::Error| CliError::Parse(e.to_string());
    if value.get("nodes").is_some() {
        serde_json::from_value(value).map(Document::Graph).map_err(as_parse)
    } else if value.get("probs").is_some() {
        serde_json::from_value(value).map(Document::Distribution).map_err(as_parse)
    } else {
        Err(CliError::Parse("document has neither `probs` nor `nodes`".into()))
    }
}

pub fn write_distribution(dist: &JointDistribution, labels: Option<&LabeledSchema>) -> String {
    to_precise_json(&distribution_to_doc(dist, labels))
}

pub fn write_graph(graph: &WeightedGraph) -> String {
    to_precise_json(&graph_to_doc(graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use infolattice::{chowliu_tree, mi_weighted_graph};

    fn sample() -> JointDistribution {
        let s = Schema::from_pairs([("X", 2), ("Y", 3)]).unwrap();
        JointDistribution::new(s, vec![0.1, 0.2, 0.05, 0.15, 0.3, 0.2]).unwrap()
    }

    #[test]
    fn distribution_round_trip() {
        let d = sample();
        let text = write_distribution(&d, None);
        assert!(text.contains("0.100000000000000"));
        let Document::Distribution(doc) = parse_document(&text).unwrap() else { panic!() };
        let (back, _) = distribution_from_doc(doc).unwrap();
        assert!(back.approx_eq(&d, 1e-15));
    }

    #[test]
    fn levels_survive_round_trip() {
        let mut l = LabeledSchema::integer_coded(sample().schema().clone());
        l.levels[1] = vec!["lo".into(), "mid".into(), "hi".into()];
        let text = write_distribution(&sample(), Some(&l));
        let Document::Distribution(doc) = parse_document(&text).unwrap() else { panic!() };
        assert_eq!(distribution_from_doc(doc).unwrap().1, l);
    }

    #[test]
    fn graph_round_trip_with_parents() {
        let g = chowliu_tree(&mi_weighted_graph(&sample(), 0.0).unwrap()).unwrap();
        let text = write_graph(&g);
        assert!(text.contains("\"parents\""));
        let Document::Graph(doc) = parse_document(&text).unwrap() else { panic!() };
        assert_eq!(graph_from_doc(doc).unwrap(), g);
    }

    #[test]
    fn rejects_unnormalized() {
        let text = r#"{"schema":[{"name":"X","cardinality":2}],"probs":[0.5,0.6]}"#;
        let Document::Distribution(doc) = parse_document(text).unwrap() else { panic!() };
        assert!(matches!(distribution_from_doc(doc), Err(CliError::Parse(_))));
    }
}
