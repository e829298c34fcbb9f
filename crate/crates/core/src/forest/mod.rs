//! Trained regression trees and forests, and their exact classical evaluation.
//!
//! Trees are stored in heap order: the root is node 1 and the children of node
//! `j` are `2j` (predicate false) and `2j + 1` (predicate true). Every tree in a
//! forest is padded to the same height `h`, so internal nodes occupy
//! `[1, 2^h - 1]`, leaves occupy `[2^h, 2^(h+1) - 1]`, and every walk performs
//! exactly `h` predicate evaluations.

mod generate;
mod io;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate_random_forest, random_input, ForestParams};
pub use io::{load_forest, save_forest};

/// Domain of one input attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum AttributeDomain {
    Real,
    Discrete { categories: Vec<f64> },
}

impl AttributeDomain {
    pub fn binary() -> Self {
        AttributeDomain::Discrete {
            categories: vec![0.0, 1.0],
        }
    }

    fn admits(&self, value: f64) -> bool {
        match self {
            AttributeDomain::Real => value.is_finite(),
            AttributeDomain::Discrete { categories } => categories.contains(&value),
        }
    }
}

/// Node condition. Attribute indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Predicate {
    /// `x[attribute] > threshold`
    Greater { attribute: usize, threshold: f64 },
    /// `x[attribute] == value`
    Equals { attribute: usize, value: f64 },
}

impl Predicate {
    pub fn attribute(&self) -> usize {
        match *self {
            Predicate::Greater { attribute, .. } | Predicate::Equals { attribute, .. } => attribute,
        }
    }

    pub fn evaluate(&self, x: &InputObject) -> Result<bool> {
        let value = x.attribute(self.attribute())?;
        Ok(match *self {
            Predicate::Greater { threshold, .. } => value > threshold,
            Predicate::Equals { value: v, .. } => value == v,
        })
    }
}

/// Leaf reached by a walk: its heap index and label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafHit {
    pub index: usize,
    pub value: f64,
}

/// A full binary decision tree of fixed height in heap layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    height: usize,
    /// `nodes[j - 1]` is the predicate of internal node `j`.
    nodes: Vec<Predicate>,
    /// `leaves[j - 2^h]` is the label of leaf `j`.
    leaves: Vec<f64>,
}

impl DecisionTree {
    /// Builds a full tree from predicates in heap order (`2^h - 1` of them) and
    /// leaf labels in heap order (`2^h` of them).
    pub fn new(height: usize, nodes: Vec<Predicate>, leaves: Vec<f64>) -> Result<Self> {
        if height == 0 {
            return Err(Error::InvalidInput("tree height must be at least 1".into()));
        }
        if height >= usize::BITS as usize - 2 {
            return Err(Error::InvalidInput(format!("tree height {height} is too large")));
        }
        let width = 1usize << height;
        if nodes.len() != width - 1 {
            return Err(Error::InvalidInput(format!(
                "height {height} needs {} internal nodes, got {}",
                width - 1,
                nodes.len()
            )));
        }
        if leaves.len() != width {
            return Err(Error::InvalidInput(format!(
                "height {height} needs {width} leaves, got {}",
                leaves.len()
            )));
        }
        if let Some(bad) = leaves.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite leaf label {bad}")));
        }
        for p in &nodes {
            if p.attribute() == 0 {
                return Err(Error::InvalidInput("attribute indices are 1-based".into()));
            }
        }
        Ok(DecisionTree {
            height,
            nodes,
            leaves,
        })
    }

    /// Builds a tree from sparse heap-indexed maps, padding shallow leaves.
    ///
    /// A leaf at depth `d < height` is pushed down to depth `height` through a
    /// chain of pass-through nodes whose two subtrees carry the same label, so
    /// the walk still takes `height` steps and lands on an equal value.
    pub fn from_sparse(
        height: usize,
        nodes: &BTreeMap<usize, Predicate>,
        leaves: &BTreeMap<usize, f64>,
    ) -> Result<Self> {
        if height == 0 {
            return Err(Error::InvalidInput("tree height must be at least 1".into()));
        }
        let width = 1usize << height;
        let mut full_nodes: Vec<Option<Predicate>> = vec![None; width - 1];
        let mut full_leaves: Vec<Option<f64>> = vec![None; width];
        let mut used_nodes = 0usize;
        let mut used_leaves = 0usize;

        let mut stack = vec![1usize];
        while let Some(j) = stack.pop() {
            let depth = usize::BITS as usize - 1 - j.leading_zeros() as usize;
            if depth > height {
                return Err(Error::InvalidInput(format!(
                    "node {j} lies below the declared height {height}"
                )));
            }
            if let Some(&label) = leaves.get(&j) {
                if nodes.contains_key(&j) {
                    return Err(Error::InvalidInput(format!(
                        "index {j} is both a node and a leaf"
                    )));
                }
                used_leaves += 1;
                pad_leaf(j, depth, height, label, &mut full_nodes, &mut full_leaves);
            } else if let Some(&p) = nodes.get(&j) {
                if depth == height {
                    return Err(Error::InvalidInput(format!(
                        "index {j} at depth {height} must be a leaf"
                    )));
                }
                used_nodes += 1;
                full_nodes[j - 1] = Some(p);
                stack.push(2 * j + 1);
                stack.push(2 * j);
            } else {
                return Err(Error::InvalidInput(format!("missing node or leaf index {j}")));
            }
        }
        if used_nodes != nodes.len() || used_leaves != leaves.len() {
            let stray = nodes
                .keys()
                .chain(leaves.keys())
                .find(|&&j| !is_reachable(j, nodes))
                .copied()
                .unwrap_or(0);
            return Err(Error::InvalidInput(format!("unreachable index {stray}")));
        }
        let nodes = full_nodes.into_iter().map(|p| p.expect("filled")).collect();
        let leaves = full_leaves.into_iter().map(|v| v.expect("filled")).collect();
        DecisionTree::new(height, nodes, leaves)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of internal nodes, `2^h - 1`.
    pub fn num_internal(&self) -> usize {
        self.nodes.len()
    }

    /// First leaf index, `2^h`.
    pub fn first_leaf(&self) -> usize {
        self.leaves.len()
    }

    pub fn node(&self, j: usize) -> Option<&Predicate> {
        j.checked_sub(1).and_then(|k| self.nodes.get(k))
    }

    pub fn leaf(&self, j: usize) -> Option<f64> {
        j.checked_sub(self.first_leaf())
            .and_then(|k| self.leaves.get(k).copied())
    }

    /// Internal nodes as `(index, predicate)` in heap order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, &Predicate)> {
        self.nodes.iter().enumerate().map(|(k, p)| (k + 1, p))
    }

    /// Leaves as `(index, label)` in heap order.
    pub fn leaves(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let first = self.first_leaf();
        self.leaves.iter().enumerate().map(move |(k, &v)| (first + k, v))
    }

    fn max_attribute(&self) -> usize {
        self.nodes.iter().map(Predicate::attribute).max().unwrap_or(0)
    }
}

fn pad_leaf(
    j: usize,
    depth: usize,
    height: usize,
    label: f64,
    nodes: &mut [Option<Predicate>],
    leaves: &mut [Option<f64>],
) {
    // Pass-through nodes: both subtrees carry the same label, so the outcome is irrelevant.
    let pass = Predicate::Greater {
        attribute: 1,
        threshold: 0.0,
    };
    let width = leaves.len();
    let mut lo = j;
    let mut hi = j;
    for _ in depth..height {
        for k in lo..=hi {
            nodes[k - 1] = Some(pass);
        }
        lo *= 2;
        hi = 2 * hi + 1;
    }
    for k in lo..=hi {
        leaves[k - width] = Some(label);
    }
}

fn is_reachable(j: usize, nodes: &BTreeMap<usize, Predicate>) -> bool {
    let mut k = j;
    while k > 1 {
        k /= 2;
        if !nodes.contains_key(&k) {
            return false;
        }
    }
    j >= 1
}

/// Attribute vector `X = (x_1, ..., x_d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputObject {
    pub values: Vec<f64>,
}

impl InputObject {
    pub fn new(values: Vec<f64>) -> Self {
        InputObject { values }
    }

    /// Value of the 1-based attribute `index`.
    pub fn attribute(&self, index: usize) -> Result<f64> {
        index
            .checked_sub(1)
            .and_then(|k| self.values.get(k).copied())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "attribute {index} requested from an object with {} attributes",
                    self.values.len()
                ))
            })
    }

    pub fn validate(&self, schema: &[AttributeDomain]) -> Result<()> {
        if self.values.len() != schema.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} attribute values, got {}",
                schema.len(),
                self.values.len()
            )));
        }
        for (k, (v, domain)) in self.values.iter().zip(schema).enumerate() {
            if !domain.admits(*v) {
                return Err(Error::InvalidInput(format!(
                    "value {v} of attribute {} is outside its domain {domain:?}",
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

/// A `(truth, forecast)` pair for error metrics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionPair {
    pub truth: f64,
    pub forecast: f64,
}

/// An ensemble of equal-height trees over a common attribute schema.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    schema: Vec<AttributeDomain>,
    y_min: f64,
    y_max: f64,
}

impl RandomForest {
    pub fn new(trees: Vec<DecisionTree>, schema: Vec<AttributeDomain>) -> Result<Self> {
        let first = trees
            .first()
            .ok_or_else(|| Error::InvalidInput("a forest needs at least one tree".into()))?;
        let h = first.height();
        for (i, t) in trees.iter().enumerate() {
            if t.height() != h {
                return Err(Error::InvalidInput(format!(
                    "tree {i} has height {} but the forest height is {h}",
                    t.height()
                )));
            }
            if t.max_attribute() > schema.len() {
                return Err(Error::InvalidInput(format!(
                    "tree {i} references attribute {} but the schema has {}",
                    t.max_attribute(),
                    schema.len()
                )));
            }
        }
        let labels = || trees.iter().flat_map(|t| t.leaves.iter().copied());
        let y_min = labels().fold(f64::INFINITY, f64::min);
        let y_max = labels().fold(f64::NEG_INFINITY, f64::max);
        Ok(RandomForest {
            trees,
            schema,
            y_min,
            y_max,
        })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn schema(&self) -> &[AttributeDomain] {
        &self.schema
    }

    pub fn num_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn height(&self) -> usize {
        self.trees[0].height()
    }

    /// Smallest leaf label over all trees.
    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    /// Largest leaf label over all trees.
    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn is_degenerate(&self) -> bool {
        self.y_max <= self.y_min
    }

    /// Normalized label `(y - y_min) / (y_max - y_min)`.
    pub fn normalize(&self, y: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateRange(self.y_min));
        }
        Ok(((y - self.y_min) / (self.y_max - self.y_min)).clamp(0.0, 1.0))
    }
}

/// Walks `tree` from the root, taking the `2j + outcome` child `h` times.
pub fn walk_tree(tree: &DecisionTree, x: &InputObject) -> Result<LeafHit> {
    let mut j = 1usize;
    for _ in 0..tree.height() {
        let outcome = tree.nodes[j - 1].evaluate(x)?;
        j = 2 * j + usize::from(outcome);
    }
    Ok(LeafHit {
        index: j,
        value: tree.leaves[j - tree.first_leaf()],
    })
}

/// Per-tree leaves reached by `x`, after validating it against the schema.
pub fn walk_forest(forest: &RandomForest, x: &InputObject) -> Result<Vec<LeafHit>> {
    x.validate(forest.schema())?;
    forest.trees().iter().map(|t| walk_tree(t, x)).collect()
}

/// Mean of the per-tree forecasts.
pub fn forecast_classical(forest: &RandomForest, x: &InputObject) -> Result<f64> {
    let hits = walk_forest(forest, x)?;
    Ok(hits.iter().map(|h| h.value).sum::<f64>() / hits.len() as f64)
}

/// Mean normalized forecast, the quantity the amplitude-estimation circuit encodes.
pub fn beta_classical(forest: &RandomForest, x: &InputObject) -> Result<f64> {
    if forest.is_degenerate() {
        return Err(Error::DegenerateRange(forest.y_min()));
    }
    let hits = walk_forest(forest, x)?;
    let sum = hits
        .iter()
        .map(|h| forest.normalize(h.value))
        .sum::<Result<f64>>()?;
    Ok((sum / hits.len() as f64).clamp(0.0, 1.0))
}

/// Maps a normalized value back to label units: `beta * (y_max - y_min) + y_min`.
pub fn beta_to_r(beta: f64, y_min: f64, y_max: f64) -> Result<f64> {
    if y_max <= y_min {
        return Err(Error::DegenerateRange(y_min));
    }
    Ok(beta * (y_max - y_min) + y_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stump(threshold: f64, lo: f64, hi: f64) -> DecisionTree {
        DecisionTree::new(
            1,
            vec![Predicate::Greater {
                attribute: 1,
                threshold,
            }],
            vec![lo, hi],
        )
        .unwrap()
    }

    fn real_forest(trees: Vec<DecisionTree>) -> RandomForest {
        RandomForest::new(trees, vec![AttributeDomain::Real]).unwrap()
    }

    #[test]
    fn stump_walks() {
        let t = stump(0.5, 3.0, 7.0);
        let hit = walk_tree(&t, &InputObject::new(vec![0.2])).unwrap();
        assert_eq!((hit.index, hit.value), (2, 3.0));
        let hit = walk_tree(&t, &InputObject::new(vec![0.9])).unwrap();
        assert_eq!((hit.index, hit.value), (3, 7.0));
    }

    #[test]
    fn forecast_is_mean() {
        let f = real_forest(vec![stump(0.5, 3.0, 1.0), stump(0.5, 0.0, 7.0)]);
        let x = InputObject::new(vec![0.9]);
        assert_eq!(forecast_classical(&f, &x).unwrap(), 4.0);
        let x = InputObject::new(vec![0.1]);
        assert_eq!(forecast_classical(&f, &x).unwrap(), 1.5);

        let single = real_forest(vec![stump(0.5, 3.0, 7.0)]);
        let x = InputObject::new(vec![0.2]);
        assert_eq!(forecast_classical(&single, &x).unwrap(), 3.0);
    }

    #[test]
    fn two_trees_mean_five() {
        let f = real_forest(vec![stump(0.5, 3.0, 3.0), stump(0.5, 7.0, 7.0)]);
        assert_eq!(forecast_classical(&f, &InputObject::new(vec![0.0])).unwrap(), 5.0);
    }

    #[test]
    fn beta_endpoints() {
        let f = real_forest(vec![stump(0.5, -2.0, 6.0), stump(0.5, -2.0, 6.0)]);
        assert_eq!(beta_classical(&f, &InputObject::new(vec![0.0])).unwrap(), 0.0);
        assert_eq!(beta_classical(&f, &InputObject::new(vec![1.0])).unwrap(), 1.0);
    }

    #[test]
    fn beta_to_r_endpoints() {
        assert_eq!(beta_to_r(0.0, -2.0, 6.0).unwrap(), -2.0);
        assert_eq!(beta_to_r(1.0, -2.0, 6.0).unwrap(), 6.0);
        assert!(matches!(beta_to_r(0.5, 1.0, 1.0), Err(Error::DegenerateRange(_))));
    }

    #[test]
    fn degenerate_forest_rejects_beta() {
        let f = real_forest(vec![stump(0.5, 2.0, 2.0)]);
        let x = InputObject::new(vec![0.3]);
        assert!(matches!(beta_classical(&f, &x), Err(Error::DegenerateRange(_))));
        assert_eq!(forecast_classical(&f, &x).unwrap(), 2.0);
    }

    #[test]
    fn schema_mismatch() {
        let f = real_forest(vec![stump(0.5, 0.0, 1.0)]);
        let err = forecast_classical(&f, &InputObject::new(vec![0.1, 0.2])).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let f = RandomForest::new(
            vec![stump(0.5, 0.0, 1.0)],
            vec![AttributeDomain::binary()],
        )
        .unwrap();
        assert!(forecast_classical(&f, &InputObject::new(vec![0.5])).is_err());
        assert!(forecast_classical(&f, &InputObject::new(vec![1.0])).is_ok());
    }

    #[test]
    fn forest_rejects_bad_shapes() {
        assert!(RandomForest::new(vec![], vec![]).is_err());
        let t2 = DecisionTree::new(
            2,
            vec![
                Predicate::Greater { attribute: 1, threshold: 0.0 };
                3
            ],
            vec![0.0; 4],
        )
        .unwrap();
        assert!(RandomForest::new(vec![stump(0.0, 0.0, 1.0), t2], vec![AttributeDomain::Real]).is_err());
        assert!(RandomForest::new(vec![stump(0.0, 0.0, 1.0)], vec![]).is_err());
    }

    #[test]
    fn sparse_tree_is_padded() {
        // Root splits on x1; left child is a leaf at depth 1, right child splits on x2.
        let mut nodes = BTreeMap::new();
        nodes.insert(1, Predicate::Greater { attribute: 1, threshold: 0.5 });
        nodes.insert(3, Predicate::Equals { attribute: 2, value: 1.0 });
        let mut leaves = BTreeMap::new();
        leaves.insert(2, 4.0);
        leaves.insert(6, 5.0);
        leaves.insert(7, 6.0);
        let t = DecisionTree::from_sparse(2, &nodes, &leaves).unwrap();
        assert_eq!(t.leaves().map(|(_, v)| v).collect::<Vec<_>>(), vec![4.0, 4.0, 5.0, 6.0]);
        for x1 in [0.0, 1.0] {
            for x2 in [0.0, 1.0] {
                let hit = walk_tree(&t, &InputObject::new(vec![x1, x2])).unwrap();
                let expected = if x1 <= 0.5 { 4.0 } else if x2 == 1.0 { 6.0 } else { 5.0 };
                assert_eq!(hit.value, expected);
                assert!((4..8).contains(&hit.index));
            }
        }
    }

    #[test]
    fn sparse_tree_errors() {
        let mut nodes = BTreeMap::new();
        nodes.insert(1, Predicate::Greater { attribute: 1, threshold: 0.5 });
        let mut leaves = BTreeMap::new();
        leaves.insert(2, 1.0);
        let err = DecisionTree::from_sparse(1, &nodes, &leaves).unwrap_err();
        assert!(err.to_string().contains("missing node or leaf index 3"), "{err}");

        leaves.insert(3, 1.0);
        leaves.insert(9, 1.0);
        let err = DecisionTree::from_sparse(1, &nodes, &leaves).unwrap_err();
        assert!(err.to_string().contains("unreachable index 9"), "{err}");
    }
}
