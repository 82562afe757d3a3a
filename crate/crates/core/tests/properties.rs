use std::f64::consts::FRAC_PI_4;

use deloc::canonical::{kraus_cirac_decompose, weyl_fold};
use deloc::classify::{classify_gate, GateClass};
use deloc::gallery::{self, GateSpec};
use deloc::protocol::{simulate_branches, synthesize_protocol};
use deloc::schmidt::schmidt_decompose;
use deloc::tensor::{
    entanglement_entropy, haar_random_unitary, kron, partial_trace, random_pure_state, Gate, PureState, Side,
};
use deloc::tol;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dressed(g: &Gate, seed: u64) -> Gate {
    let mut r = rng(seed);
    let d = g.d();
    let l: Vec<_> = (0..4).map(|_| haar_random_unitary(d, &mut r)).collect();
    g.dressed(&l[0], &l[1], &l[2], &l[3]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let psi = random_pure_state(da * db, &mut rng(seed));
        let rho = psi.density();
        for keep in [Side::A, Side::B] {
            let r = partial_trace(&rho, (da, db), keep).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.trace().im.abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_is_bounded(seed in any::<u64>(), d in 2usize..5) {
        let psi = random_pure_state(d * d, &mut rng(seed));
        let e = entanglement_entropy(&psi, (d, d)).unwrap();
        prop_assert!(e >= 0.0 && e <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn product_inputs_have_no_entanglement(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let a = random_pure_state(d, &mut r);
        let b = random_pure_state(d, &mut r);
        prop_assert!(entanglement_entropy(&a.tensor(&b), (d, d)).unwrap() < 1e-10);
    }

    #[test]
    fn schmidt_invariants(seed in any::<u64>(), d in 2usize..5) {
        let g = gallery::haar(d, seed).unwrap();
        let os = schmidt_decompose(&g, tol::RANK).unwrap();
        let total: f64 = os.coeffs.iter().map(|c| c * c).sum();
        prop_assert!((total - (d * d) as f64).abs() < 1e-8);
        prop_assert!(os.reconstruction_residual(&g) <= 1e-9);
        let moved = schmidt_decompose(&dressed(&g, seed ^ 1), tol::RANK).unwrap();
        for (x, y) in os.coeffs.iter().zip(&moved.coeffs) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn controlled_rank_is_at_most_block_count(seed in any::<u64>(), d in 2usize..5, k in 1usize..5) {
        let n_blocks = k.min(d);
        let g = gallery::controlled_random(d, n_blocks, seed).unwrap();
        prop_assert!(schmidt_decompose(&g, tol::RANK).unwrap().rank <= n_blocks);
    }

    #[test]
    fn canonical_coordinates_lie_in_the_chamber(seed in any::<u64>()) {
        let g = gallery::haar(2, seed).unwrap();
        let form = kraus_cirac_decompose(&g).unwrap();
        let [x, y, z] = form.theta;
        prop_assert!(x <= FRAC_PI_4 + 1e-12 && x + 1e-12 >= y && y + 1e-12 >= z.abs());
        prop_assert!(form.reconstruction_residual(&g) <= 1e-8);
    }

    #[test]
    fn fold_is_idempotent(x in -4.0f64..4.0, y in -4.0f64..4.0, z in -4.0f64..4.0) {
        let once = weyl_fold([x, y, z]);
        let twice = weyl_fold(once);
        for j in 0..3 {
            prop_assert!((once[j] - twice[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn controlled_gates_are_class_one_under_dressing(seed in any::<u64>(), d in 2usize..5, k in 1usize..5) {
        let g = gallery::controlled_random(d, k.min(d), seed).unwrap();
        let c = classify_gate(&dressed(&g, seed.wrapping_add(1)), tol::STRUCTURE).unwrap();
        prop_assert_eq!(c.label, GateClass::Class1);
        prop_assert!(c.controlled_form.is_some());
    }

    #[test]
    fn branch_probabilities_sum_to_one(seed in any::<u64>(), d in 2usize..5) {
        let g = gallery::controlled_random(d, d, seed).unwrap();
        let form = classify_gate(&g, tol::STRUCTURE).unwrap().controlled_form.unwrap();
        let p = synthesize_protocol(&form).unwrap();
        let mut r = rng(seed);
        let a = random_pure_state(d, &mut r);
        let b = random_pure_state(d, &mut r);
        let branches = simulate_branches(&g, &p, &a, &b).unwrap();
        let total: f64 = branches.iter().map(|x| x.probability).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        for x in branches.iter().filter_map(|x| x.bob_fidelity) {
            prop_assert!(x >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn gate_spec_round_trips(alpha in -3.0f64..3.0, seed in any::<u64>()) {
        for spec in [
            GateSpec::new("heisenberg").with("alpha", alpha),
            GateSpec::new("haar").with("d", 3).with("seed", seed),
        ] {
            let text = spec.to_string();
            prop_assert_eq!(text.parse::<GateSpec>().unwrap(), spec);
        }
    }
}

#[test]
fn kron_of_states_matches_tensor() {
    let mut r = rng(3);
    let a = random_pure_state(3, &mut r);
    let b = random_pure_state(2, &mut r);
    let via_kron = kron(&a.density(), &b.density());
    let via_tensor: PureState = a.tensor(&b);
    assert!((via_kron - via_tensor.density()).norm() < 1e-14);
}
