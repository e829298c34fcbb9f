#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use quantum_forest::forest::{
    generate_random_forest, random_input, AttributeDomain, ForestParams, InputObject, RandomForest,
};
use quantum_forest::statevector::{Control, Gate, Mat2};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_unitary2<R: Rng>(rng: &mut R) -> Mat2 {
    // e^{iγ} [[e^{iα}cos θ, -e^{iβ}sin θ], [e^{-iβ}sin θ, e^{-iα}cos θ]]
    let (a, b, g, th): (f64, f64, f64, f64) = (
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..PI),
    );
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let (c, s) = (th.cos(), th.sin());
    Mat2([
        [e(g + a) * c, -e(g + b) * s],
        [e(g - b) * s, e(g - a) * c],
    ])
}

fn distinct<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut q: Vec<usize> = (0..n).collect();
    q.shuffle(rng);
    q.truncate(k);
    q
}

/// A random gate of any kind on `n >= 2` qubits.
pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let q = distinct(n, n.min(4), rng);
    let angle = rng.gen_range(-2.0 * PI..2.0 * PI);
    match rng.gen_range(0..10) {
        0 => Gate::H(q[0]),
        1 => Gate::X(q[0]),
        2 => Gate::Z(q[0]),
        3 => Gate::Ry { target: q[0], angle },
        4 => Gate::Cnot { control: q[0], target: q[1] },
        5 => Gate::Swap(q[0], q[1]),
        6 => {
            let k = rng.gen_range(0..q.len());
            Gate::Controlled {
                controls: q[1..1 + k.min(q.len() - 1)]
                    .iter()
                    .map(|&c| if rng.gen() { Control::one(c) } else { Control::zero(c) })
                    .collect(),
                target: q[0],
                op: random_unitary2(rng),
            }
        }
        7 => {
            let k = rng.gen_range(0..q.len());
            Gate::Ucg {
                controls: q[1..1 + k].to_vec(),
                target: q[0],
                blocks: (0..1 << k).map(|_| random_unitary2(rng)).collect(),
            }
        }
        8 => {
            let k = rng.gen_range(0..q.len());
            Gate::Ucr {
                controls: q[1..1 + k].to_vec(),
                target: q[0],
                angles: (0..1 << k).map(|_| rng.gen_range(-PI..PI)).collect(),
            }
        }
        _ => Gate::GlobalPhase(angle),
    }
}

/// A random full forest with `n` trees of height `h` over a mixed schema.
pub fn random_forest<R: Rng>(n: usize, h: usize, rng: &mut R) -> (RandomForest, InputObject) {
    let attrs = rng.gen_range(1..=4);
    let schema = (0..attrs)
        .map(|_| match rng.gen_range(0..3) {
            0 => AttributeDomain::Real,
            1 => AttributeDomain::binary(),
            _ => AttributeDomain::Discrete {
                categories: vec![1.0, 2.0, 3.0],
            },
        })
        .collect();
    let lo = rng.gen_range(-50.0..50.0);
    let params = ForestParams {
        num_trees: n,
        height: h,
        schema,
        value_range: (lo, lo + rng.gen_range(0.5..100.0)),
    };
    let forest = generate_random_forest(&params, rng.gen()).expect("valid params");
    let x = random_input(forest.schema(), rng);
    (forest, x)
}
