use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AttributeDomain, DecisionTree, InputObject, Predicate, RandomForest};
use crate::error::{Error, Result};

/// Shape of a randomly generated forest.
#[derive(Clone, Debug, PartialEq)]
pub struct ForestParams {
    pub num_trees: usize,
    pub height: usize,
    pub schema: Vec<AttributeDomain>,
    /// Leaf labels are drawn uniformly from `[lo, hi)`.
    pub value_range: (f64, f64),
}

impl ForestParams {
    /// Two trees of height 2 over three binary attributes.
    pub fn small_binary(value_range: (f64, f64)) -> Self {
        ForestParams {
            num_trees: 2,
            height: 2,
            schema: vec![AttributeDomain::binary(); 3],
            value_range,
        }
    }
}

/// Generates a full forest deterministically from `seed` (ChaCha8 stream).
///
/// Real attributes get `x > θ` splits with `θ ∈ [0, 1)`. Discrete attributes
/// get `x = c` splits on a random category.
pub fn generate_random_forest(params: &ForestParams, seed: u64) -> Result<RandomForest> {
    let ForestParams {
        num_trees,
        height,
        ref schema,
        value_range: (lo, hi),
    } = *params;
    if num_trees == 0 || height == 0 {
        return Err(Error::InvalidInput(
            "need at least one tree of height at least 1".into(),
        ));
    }
    if height > 20 {
        return Err(Error::InvalidInput(format!("height {height} is too large")));
    }
    if schema.is_empty() {
        return Err(Error::InvalidInput("schema has no attributes".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!("bad value range [{lo}, {hi})")));
    }
    for domain in schema {
        if let AttributeDomain::Discrete { categories } = domain {
            if categories.is_empty() {
                return Err(Error::InvalidInput("discrete attribute without categories".into()));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = 1usize << height;
    let trees = (0..num_trees)
        .map(|_| {
            let nodes = (1..width)
                .map(|_| {
                    let attribute = rng.gen_range(0..schema.len());
                    match &schema[attribute] {
                        AttributeDomain::Real => Predicate::Greater {
                            attribute: attribute + 1,
                            threshold: rng.gen::<f64>(),
                        },
                        AttributeDomain::Discrete { categories } => Predicate::Equals {
                            attribute: attribute + 1,
                            value: *categories.choose(&mut rng).expect("non-empty"),
                        },
                    }
                })
                .collect();
            let leaves = (0..width).map(|_| rng.gen_range(lo..hi)).collect();
            DecisionTree::new(height, nodes, leaves)
        })
        .collect::<Result<Vec<_>>>()?;
    RandomForest::new(trees, schema.clone())
}

/// Draws an input object conforming to `schema`: reals in `[0, 1)`, discrete
/// values uniformly from their categories.
pub fn random_input<R: Rng + ?Sized>(schema: &[AttributeDomain], rng: &mut R) -> InputObject {
    InputObject::new(
        schema
            .iter()
            .map(|domain| match domain {
                AttributeDomain::Real => rng.gen::<f64>(),
                AttributeDomain::Discrete { categories } => {
                    *categories.choose(rng).expect("non-empty")
                }
            })
            .collect(),
    )
}
