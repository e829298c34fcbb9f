mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use quantum_forest::statevector::dense::{circuit_matrix, gate_matrix, DenseMatrix};
use quantum_forest::statevector::{
    apply_gate, apply_ucr, swap_as_cnots, Control, Gate, Mat2, Register, RegisterName, StateVector,
};
use quantum_forest::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn primitive_matrices_by_value() {
    let s = FRAC_1_SQRT_2;
    let h = Mat2([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]);
    assert!(Mat2::hadamard().max_abs_diff(&h) < 1e-15);
    // Ry(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]
    let ry = Mat2::ry(PI / 3.0);
    let want = Mat2([
        [c(0.75f64.sqrt(), 0.0), c(-0.5, 0.0)],
        [c(0.5, 0.0), c(0.75f64.sqrt(), 0.0)],
    ]);
    assert!(ry.max_abs_diff(&want) < 1e-15);
}

#[test]
fn qubit_zero_is_most_significant() {
    let mut s = StateVector::new(3).unwrap();
    s.apply(&Gate::X(0)).unwrap();
    assert_eq!(s.amplitudes()[4], c(1.0, 0.0));
    let mut s = StateVector::new(3).unwrap();
    s.apply(&Gate::X(2)).unwrap();
    assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
}

#[test]
fn every_gate_kind_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=6 {
        for _ in 0..60 {
            let gate = if n == 1 {
                [Gate::H(0), Gate::X(0), Gate::Z(0), Gate::Ry { target: 0, angle: rng.gen() }][rng.gen_range(0..4)].clone()
            } else {
                common::random_gate(n, &mut rng)
            };
            let m = gate_matrix(&gate, n).unwrap();
            assert!(m.unitarity_defect() < TOL, "{gate}");
            for _ in 0..100 {
                let s = StateVector::random(n, &mut rng).unwrap();
                let got = apply_gate(&s, &gate).unwrap();
                assert!(max_diff(got.amplitudes(), &m.apply(&s)) < TOL, "{gate}");
            }
        }
    }
}

#[test]
fn extra_controls_match_projector_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let n = 5;
    for _ in 0..200 {
        let gate = common::random_gate(4, &mut rng);
        let on = rng.gen::<bool>();
        // Qubit 4 is free; the gate acts on 0..4. Columns whose control bit
        // matches take the gate's column, the others pass through.
        let m = gate_matrix(&gate, n).unwrap();
        let s = StateVector::random(n, &mut rng).unwrap();
        let dim = 1 << n;
        let mut want = vec![c(0.0, 0.0); dim];
        for col in 0..dim {
            if (col & 1 == 1) == on {
                for (row, w) in want.iter_mut().enumerate() {
                    *w += m.get(row, col) * s.amplitudes()[col];
                }
            } else {
                want[col] += s.amplitudes()[col];
            }
        }
        let mut got = s.clone();
        let ctl = if on { Control::one(4) } else { Control::zero(4) };
        got.apply_controlled(&gate, &[ctl]).unwrap();
        assert!(max_diff(got.amplitudes(), &want) < TOL, "{gate} on={on}");
    }
}

#[test]
fn swap_is_three_cnots() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in 2..=6 {
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                let cnots = swap_as_cnots(a, b).unwrap();
                let d = circuit_matrix(&cnots, n)
                    .unwrap()
                    .max_abs_diff(&gate_matrix(&Gate::Swap(a, b), n).unwrap());
                assert_eq!(d, 0.0);
                let s = StateVector::random(n, &mut rng).unwrap();
                let mut via = s.clone();
                via.apply_all(&cnots).unwrap();
                assert_eq!(via.amplitudes(), apply_gate(&s, &Gate::Swap(a, b)).unwrap().amplitudes());
            }
        }
    }
    assert!(swap_as_cnots(1, 1).is_err());
}

#[test]
fn inverses_undo_gates() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let n = 5;
    let gates: Vec<Gate> = (0..50).map(|_| common::random_gate(n, &mut rng)).collect();
    let s = StateVector::random(n, &mut rng).unwrap();
    let mut t = s.clone();
    t.apply_all(&gates).unwrap();
    let inverse: Vec<Gate> = gates.iter().rev().map(Gate::inverse).collect();
    t.apply_all(&inverse).unwrap();
    assert!(t.max_abs_diff(&s) < TOL);
    for g in [Gate::H(1), Gate::X(0), Gate::Z(3), Gate::Swap(0, 2), Gate::Cnot { control: 1, target: 4 }] {
        let twice = circuit_matrix([&g, &g], n).unwrap();
        assert!(twice.max_abs_diff(&DenseMatrix::identity(1 << n)) < TOL, "{g}");
    }
    let ry = circuit_matrix(&[Gate::Ry { target: 2, angle: 0.7 }, Gate::Ry { target: 2, angle: -0.7 }], n).unwrap();
    assert!(ry.max_abs_diff(&DenseMatrix::identity(1 << n)) < TOL);
}

#[test]
fn uniform_multiplexer_is_plain_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let u = common::random_unitary2(&mut rng);
    let ucg = Gate::Ucg { controls: vec![0, 2], target: 1, blocks: vec![u; 4] };
    let plain = Gate::Controlled { controls: vec![], target: 1, op: u };
    let d = gate_matrix(&ucg, 3).unwrap().max_abs_diff(&gate_matrix(&plain, 3).unwrap());
    assert!(d < 1e-15);
}

#[test]
fn ucr_block_selection() {
    // Controls (2, 0): qubit 2 is the high bit of the block index.
    let s = StateVector::basis(3, 0b001).unwrap();
    let out = apply_ucr(&s, &[2, 0], 1, &[0.0, 0.0, PI, 0.0]).unwrap();
    assert!((out.amplitudes()[0b011].re - 1.0).abs() < TOL);
}

#[test]
fn inverse_qft_matches_dft() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let n = 5;
    let reg = Register::new(RegisterName::Phase, 1, 3);
    let s = StateVector::random(n, &mut rng).unwrap();
    let mut got = s.clone();
    got.apply_inverse_qft(&reg).unwrap();
    let t = 8usize;
    let mut want = vec![c(0.0, 0.0); 1 << n];
    for (i, a) in s.amplitudes().iter().enumerate() {
        let (hi, p, lo) = (i >> 4, (i >> 1) & 7, i & 1);
        for k in 0..t {
            let phase = Complex64::from_polar(1.0 / (t as f64).sqrt(), -2.0 * PI * (p * k) as f64 / t as f64);
            want[(hi << 4) | (k << 1) | lo] += a * phase;
        }
    }
    assert!(max_diff(got.amplitudes(), &want) < TOL);
}

#[test]
fn invalid_gates_are_rejected() {
    let mut s = StateVector::new(3).unwrap();
    for g in [
        Gate::X(3),
        Gate::Cnot { control: 1, target: 1 },
        Gate::Ucr { controls: vec![0], target: 1, angles: vec![0.0] },
        Gate::Ucg { controls: vec![0, 0], target: 1, blocks: vec![Mat2::X; 4] },
    ] {
        assert!(matches!(s.apply(&g), Err(Error::InvalidGate(_))), "{g}");
    }
    assert!(s.apply_controlled(&Gate::X(0), &[Control::one(0)]).is_err());
    assert!(matches!(
        StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
        Err(Error::Unnormalized(_))
    ));
}

#[test]
fn sampling_follows_born_rule() {
    let amps = vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
    let s = StateVector::from_amplitudes(amps).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let hits = (0..20_000).filter(|_| s.sample(&mut rng).unwrap() == 2).count();
    let p = hits as f64 / 20_000.0;
    // 0.64 ± 5 standard errors
    assert!((p - 0.64).abs() < 5.0 * (0.64f64 * 0.36 / 20_000.0).sqrt(), "{p}");
    assert_eq!(s.sample_seeded(9).unwrap(), s.sample_seeded(9).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_preserved(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::random(n, &mut rng).unwrap();
        for _ in 0..200 {
            s.apply(&common::random_gate(n, &mut rng)).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn probabilities_sum_to_one(seed in any::<u64>(), n in 1usize..7, q in 0usize..7) {
        let q = q % n;
        let s = StateVector::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let total = s.probability(q, false).unwrap() + s.probability(q, true).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
