use dfqkd_core::dfvec;
use dfqkd_core::measurement::{distribution, TABLE1};
use dfqkd_core::{
    apply_collective, discriminate, haar_su2, inner, named_state, permute, six_qubit_state,
    tensor, MeasurementSetting, QubitPermutation, StateVector,
};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
        "nonzero",
        move |v| {
            let amps = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
            StateVector::new(n, amps).unwrap().normalized().ok()
        },
    )
}

fn arb_permutation(n: usize) -> impl Strategy<Value = QubitPermutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|m| QubitPermutation::from_zero_based(m).unwrap())
}

fn arb_sized() -> impl Strategy<Value = (StateVector, QubitPermutation, QubitPermutation)> {
    (1usize..=6).prop_flat_map(|n| (arb_state(n), arb_permutation(n), arb_permutation(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permute_round_trip_is_exact((psi, p, _) in arb_sized()) {
        let back = permute(&p.inverse(), &permute(&p, &psi).unwrap()).unwrap();
        prop_assert_eq!(back, psi);
    }

    #[test]
    fn permute_respects_composition((psi, p, q) in arb_sized()) {
        let lhs = permute(&p.compose(&q).unwrap(), &psi).unwrap();
        let rhs = permute(&p, &permute(&q, &psi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpositions_are_involutions(n in 2usize..=8, i in 1usize..=8, j in 1usize..=8) {
        prop_assume!(i <= n && j <= n);
        let t = QubitPermutation::transposition(n, i, j).unwrap();
        prop_assert_eq!(t.compose(&t).unwrap(), QubitPermutation::identity(n));
    }

    #[test]
    fn collective_unitary_commutes_with_permutation((psi, p, _) in arb_sized(), seed in any::<u64>()) {
        let u = haar_su2(seed);
        let a = apply_collective(&u, &permute(&p, &psi).unwrap());
        let b = permute(&p, &apply_collective(&u, &psi)).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn inner_is_invariant_under_collective_unitary(
        (a, b) in (1usize..=6).prop_flat_map(|n| (arb_state(n), arb_state(n))),
        seed in any::<u64>(),
    ) {
        let u = haar_su2(seed);
        let before = inner(&a, &b).unwrap();
        let after = inner(&apply_collective(&u, &a), &apply_collective(&u, &b)).unwrap();
        prop_assert!((before - after).norm() < 1e-12);
        prop_assert!((apply_collective(&u, &a).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_then_block_swap((a, b) in (1usize..=4, 1usize..=4).prop_flat_map(|(na, nb)| (arb_state(na), arb_state(nb)))) {
        let (na, nb) = (a.n_qubits(), b.n_qubits());
        // Block permutation moving the `a` block behind the `b` block.
        let mapping: Vec<usize> = (0..na).map(|i| nb + i).chain(0..nb).collect();
        let p = QubitPermutation::from_zero_based(mapping).unwrap();
        let swapped = permute(&p, &tensor(&a, &b).unwrap()).unwrap();
        let expected = tensor(&b, &a).unwrap();
        prop_assert!(swapped.max_abs_diff(&expected).unwrap() < 1e-15);
        prop_assert!((tensor(&a, &b).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dfvec_round_trip(psi in (1usize..=6).prop_flat_map(arb_state)) {
        let back = dfvec::parse(&dfvec::to_string(&psi)).unwrap();
        prop_assert_eq!(back, psi);
    }

    #[test]
    fn distribution_ignores_global_phase(phase in -3.2f64..3.2, idx in 0usize..5, setting in "[zx]{6}") {
        let psi = six_qubit_state(dfqkd_core::dfstates::SIX_QUBIT_LABELS[idx]).unwrap();
        let s: MeasurementSetting = setting.parse().unwrap();
        let d0 = distribution(&s, &psi).unwrap();
        let d1 = distribution(&s, &psi.scaled(Complex64::from_polar(1.0, phase))).unwrap();
        for (x, y) in d0.probs.iter().zip(&d1.probs) {
            prop_assert!((x - y).abs() < 1e-15);
        }
        prop_assert!((d0.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn every_named_state_round_trips_through_dfvec() {
    for label in dfqkd_core::all_labels() {
        let psi = named_state(label).unwrap();
        let back = dfvec::parse(&dfvec::to_string(&psi)).unwrap();
        let f = dfqkd_core::fidelity(&psi, &back).unwrap();
        assert!((f - 1.0).abs() < 1e-12, "{label}");
    }
}

#[test]
fn discrimination_is_permutation_covariant() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for (la, lb, setting) in TABLE1 {
        let a = six_qubit_state(la).unwrap();
        let b = six_qubit_state(lb).unwrap();
        let s: MeasurementSetting = setting.parse().unwrap();
        let base = discriminate(&s, &a, &b).unwrap().is_success();
        for _ in 0..20 {
            let p = arb_permutation(6).new_tree(&mut runner).unwrap().current();
            let moved = discriminate(
                &s.permuted(&p).unwrap(),
                &permute(&p, &a).unwrap(),
                &permute(&p, &b).unwrap(),
            )
            .unwrap()
            .is_success();
            assert_eq!(base, moved, "{la} {lb} {setting} under {:?}", p.mapping());
        }
    }
}

#[test]
fn discriminator_classifies_sampled_shots_without_error() {
    use dfqkd_core::{measurement::sample, Decision, Discrimination};
    for (la, lb, setting) in TABLE1 {
        let a = six_qubit_state(la).unwrap();
        let b = six_qubit_state(lb).unwrap();
        let s: MeasurementSetting = setting.parse().unwrap();
        let Discrimination::Success(d) = discriminate(&s, &a, &b).unwrap() else {
            panic!("{la} {lb}");
        };
        assert!(sample(&s, &a, 1, 10_000).unwrap().iter().all(|&o| d.decide(o) == Decision::A));
        assert!(sample(&s, &b, 2, 10_000).unwrap().iter().all(|&o| d.decide(o) == Decision::B));
    }
}
