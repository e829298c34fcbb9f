//! JSON forest documents.
//!
//! ```json
//! {
//!   "n": 1,
//!   "h": 1,
//!   "schema": [{ "kind": "real" }, { "kind": "discrete", "categories": [0.0, 1.0] }],
//!   "trees": [
//!     {
//!       "nodes": { "1": { "kind": "greater", "attr": 1, "threshold": 0.5 } },
//!       "leaves": { "2": 3.0, "3": 7.0 }
//!     }
//!   ]
//! }
//! ```
//!
//! Attribute indices are 1-based. Leaves shallower than `h` are padded on load,
//! so the saved form always lists every node of the full tree. Unknown fields
//! are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AttributeDomain, DecisionTree, Predicate, RandomForest};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForestDoc {
    n: usize,
    h: usize,
    schema: Vec<AttributeDoc>,
    trees: Vec<TreeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    categories: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    nodes: BTreeMap<usize, NodeDoc>,
    leaves: BTreeMap<usize, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    kind: String,
    attr: usize,
    threshold: f64,
}

pub fn load_forest(text: &str) -> Result<RandomForest> {
    let doc: ForestDoc = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;

    if doc.h == 0 || doc.h > 20 {
        return Err(Error::parse("h", format!("height {} out of range [1, 20]", doc.h)));
    }
    if doc.n != doc.trees.len() {
        return Err(Error::parse(
            "n",
            format!("declares {} trees but lists {}", doc.n, doc.trees.len()),
        ));
    }
    let schema = doc
        .schema
        .iter()
        .enumerate()
        .map(|(k, a)| match (a.kind.as_str(), &a.categories) {
            ("real", None) => Ok(AttributeDomain::Real),
            ("discrete", Some(c)) if !c.is_empty() => Ok(AttributeDomain::Discrete {
                categories: c.clone(),
            }),
            _ => Err(Error::parse(
                format!("schema[{k}]"),
                "expected {kind: real} or {kind: discrete, categories: [..]}",
            )),
        })
        .collect::<Result<Vec<_>>>()?;

    let trees = doc
        .trees
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let nodes = t
                .nodes
                .iter()
                .map(|(&j, node)| {
                    let location = || format!("trees[{i}].nodes.{j}");
                    if node.attr == 0 || node.attr > schema.len() {
                        return Err(Error::parse(
                            location(),
                            format!("attribute {} not in schema of {}", node.attr, schema.len()),
                        ));
                    }
                    let predicate = match node.kind.as_str() {
                        "greater" => Predicate::Greater {
                            attribute: node.attr,
                            threshold: node.threshold,
                        },
                        "equals" => Predicate::Equals {
                            attribute: node.attr,
                            value: node.threshold,
                        },
                        other => {
                            return Err(Error::parse(
                                location(),
                                format!("unknown predicate kind {other:?}"),
                            ))
                        }
                    };
                    Ok((j, predicate))
                })
                .collect::<Result<BTreeMap<_, _>>>()?;
            DecisionTree::from_sparse(doc.h, &nodes, &t.leaves).map_err(|e| match e {
                Error::InvalidInput(msg) => Error::parse(format!("trees[{i}]"), msg),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    RandomForest::new(trees, schema).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::parse("trees", msg),
        other => other,
    })
}

/// Canonical pretty-printed JSON: numeric key order, shortest round-trip floats.
pub fn save_forest(forest: &RandomForest) -> String {
    let doc = ForestDoc {
        n: forest.num_trees(),
        h: forest.height(),
        schema: forest
            .schema()
            .iter()
            .map(|a| match a {
                AttributeDomain::Real => AttributeDoc {
                    kind: "real".into(),
                    categories: None,
                },
                AttributeDomain::Discrete { categories } => AttributeDoc {
                    kind: "discrete".into(),
                    categories: Some(categories.clone()),
                },
            })
            .collect(),
        trees: forest
            .trees()
            .iter()
            .map(|t| TreeDoc {
                nodes: t
                    .nodes()
                    .map(|(j, p)| {
                        let node = match *p {
                            Predicate::Greater {
                                attribute,
                                threshold,
                            } => NodeDoc {
                                kind: "greater".into(),
                                attr: attribute,
                                threshold,
                            },
                            Predicate::Equals { attribute, value } => NodeDoc {
                                kind: "equals".into(),
                                attr: attribute,
                                threshold: value,
                            },
                        };
                        (j, node)
                    })
                    .collect(),
                leaves: t.leaves().collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("forest documents serialize");
    text.push('\n');
    text
}
