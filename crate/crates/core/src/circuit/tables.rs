use crate::error::{Error, Result};
use crate::forest::{walk_forest, InputObject, RandomForest};

/// Predicate outcome of every internal node of every tree for one input.
///
/// Each entry costs one attribute query. The circuit branches on node index
/// only and reads the outcome of the node it sits on from this table.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchOutcomeTable {
    height: usize,
    /// `outcomes[i][j - 1]` for tree `i`, internal node `j`.
    outcomes: Vec<Vec<bool>>,
}

impl BranchOutcomeTable {
    pub fn evaluate(forest: &RandomForest, x: &InputObject) -> Result<Self> {
        x.validate(forest.schema())?;
        let outcomes = forest
            .trees()
            .iter()
            .map(|t| t.nodes().map(|(_, p)| p.evaluate(x)).collect())
            .collect::<Result<Vec<Vec<bool>>>>()?;
        Ok(BranchOutcomeTable {
            height: forest.height(),
            outcomes,
        })
    }

    /// Wraps explicit outcomes. Rows may be short; missing nodes surface at compile time.
    pub fn from_rows(height: usize, outcomes: Vec<Vec<bool>>) -> Self {
        BranchOutcomeTable { height, outcomes }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_trees(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome(&self, tree: usize, node: usize) -> Result<bool> {
        if node == 0 || node >= 1usize << self.height {
            return Err(Error::Compile(format!(
                "node {node} is not an internal node of a height-{} tree",
                self.height
            )));
        }
        self.outcomes
            .get(tree)
            .and_then(|row| row.get(node - 1))
            .copied()
            .ok_or_else(|| Error::Compile(format!("no outcome for tree {tree}, node {node}")))
    }
}

/// Rotation angle `α = arcsin √((y - y_min) / (y_max - y_min))` of every leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafAngleTable {
    height: usize,
    /// `angles[i][j - 2^h]` for tree `i`, leaf `j`.
    angles: Vec<Vec<f64>>,
}

impl LeafAngleTable {
    pub fn new(forest: &RandomForest) -> Result<Self> {
        let angles = forest
            .trees()
            .iter()
            .map(|t| {
                t.leaves()
                    .map(|(_, y)| forest.normalize(y).map(|p| p.sqrt().asin()))
                    .collect()
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Ok(LeafAngleTable {
            height: forest.height(),
            angles,
        })
    }

    pub fn angle(&self, tree: usize, leaf: usize) -> Result<f64> {
        let first = 1usize << self.height;
        leaf.checked_sub(first)
            .and_then(|k| self.angles.get(tree).and_then(|row| row.get(k)))
            .copied()
            .ok_or_else(|| Error::Compile(format!("no angle for tree {tree}, leaf {leaf}")))
    }
}

/// Expected `(leaf index, angle)` per tree, from the classical walk. Test helper.
pub fn expected_leaves(forest: &RandomForest, x: &InputObject) -> Result<Vec<(usize, f64)>> {
    let angles = LeafAngleTable::new(forest)?;
    walk_forest(forest, x)?
        .iter()
        .enumerate()
        .map(|(i, hit)| Ok((hit.index, angles.angle(i, hit.index)?)))
        .collect()
}
