//! Walk every tree of a generated forest and average the leaves.

use quantum_forest::forest::{
    beta_classical, forecast_classical, generate_random_forest, walk_forest, ForestParams,
    InputObject,
};

fn main() -> quantum_forest::Result<()> {
    let forest = generate_random_forest(&ForestParams::small_binary((10.0, 20.0)), 7)?;
    let x = InputObject::new(vec![1.0, 0.0, 1.0]);

    for (i, hit) in walk_forest(&forest, &x)?.iter().enumerate() {
        println!("tree {i}: leaf {} label {:.4}", hit.index, hit.value);
    }
    println!("labels span [{:.4}, {:.4}]", forest.y_min(), forest.y_max());
    println!("R    = {:.6}", forecast_classical(&forest, &x)?);
    println!("beta = {:.6}", beta_classical(&forest, &x)?);
    Ok(())
}
