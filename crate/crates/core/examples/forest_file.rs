//! Load a hand-written forest document, pad it, and write the canonical form.

use quantum_forest::forest::{forecast_classical, load_forest, save_forest, InputObject};

// Tree 0 stops at depth 1 on the false side; loading pads it to height 2.
const DOC: &str = r#"{
  "n": 2,
  "h": 2,
  "schema": [{ "kind": "real" }, { "kind": "discrete", "categories": [0, 1, 2] }],
  "trees": [
    {
      "nodes": {
        "1": { "kind": "greater", "attr": 1, "threshold": 0.5 },
        "3": { "kind": "equals", "attr": 2, "threshold": 2 }
      },
      "leaves": { "2": 1.5, "6": 4.0, "7": 9.0 }
    },
    {
      "nodes": {
        "1": { "kind": "equals", "attr": 2, "threshold": 0 },
        "2": { "kind": "greater", "attr": 1, "threshold": 0.25 },
        "3": { "kind": "greater", "attr": 1, "threshold": 0.75 }
      },
      "leaves": { "4": 2.0, "5": 3.0, "6": 5.0, "7": 8.0 }
    }
  ]
}"#;

fn main() -> quantum_forest::Result<()> {
    let forest = load_forest(DOC)?;
    let x = InputObject::new(vec![0.9, 2.0]);
    println!("R = {}", forecast_classical(&forest, &x)?);

    let canonical = save_forest(&forest);
    assert_eq!(save_forest(&load_forest(&canonical)?), canonical);
    print!("{canonical}");

    match load_forest(r#"{"n": 1, "h": 1, "schema": [], "trees": [{"nodes": {}, "leaves": {"3": 1}}]}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
