mod common;

use common::*;
use diobound::verifier::{verify_phi, Mode, PhiOptions};
use diobound::{bound_f, enumerate_solutions, satisfies, theorem2_witness, verify_identity_theorem2};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn signature_is_satisfied_by_its_tuple(x in arb_tuple(6, 40)) {
        prop_tautology(&x)?;
    }

    #[test]
    fn satisfaction_is_signature_containment(
        (x, y) in (1usize..=5).prop_flat_map(|n| {
            let v = proptest::collection::vec(1u64..=20, n);
            (v.clone(), v)
        })
    ) {
        prop_characterization(&x, &y)?;
    }

    #[test]
    fn signature_commutes_with_permutation((x, sigma) in arb_permuted_tuple(6, 30)) {
        prop_equivariance(&x, &sigma)?;
    }

    #[test]
    fn encode_decode_round_trip(x in arb_tuple(5, 10)) {
        prop_encode_roundtrip(&x)?;
    }

    #[test]
    fn robinson_identity_random(x in 1u64..=1_000_000, y in 1u64..=1_000_000, z in 1u64..=1_000_000) {
        prop_assert!(robinson_identity_holds(x, y, z));
        prop_assert!(robinson_identity_holds(x, y, x + y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solver_matches_box_enumeration(system in arb_system(4, 5, true)) {
        prop_solver_matches_box(&system)?;
    }

    #[test]
    fn solver_is_independent_of_workers(system in arb_system(4, 5, true)) {
        prop_solver_parallel_matches(&system)?;
    }

    #[test]
    fn lowering_passes_keep_solutions(system in arb_system(4, 4, true)) {
        prop_pass_equivalence(&system)?;
    }
}

#[test]
fn f_is_strictly_increasing() {
    for n in 1..=12 {
        assert!(bound_f(n).unwrap() < bound_f(n + 1).unwrap(), "n={n}");
    }
}

#[test]
fn divisor_system_solutions_stay_below_bound() {
    for n in 1..=2 {
        let w = theorem2_witness(n).unwrap();
        let e = enumerate_solutions(&w.system, 300, None);
        assert!(!e.solutions.is_empty());
        for y in &e.solutions {
            assert!(satisfies(y, &w.system).unwrap());
            assert!(y.values().iter().all(|v| *v <= w.claimed_bound), "({y})");
        }
    }
}

#[test]
fn divisor_identity_small_range() {
    for n in 1..=4 {
        for x in -50..=50 {
            assert!(verify_identity_theorem2(&BigInt::from(x), n).unwrap(), "x={x} n={n}");
        }
    }
}

#[test]
fn gadget_matches_addition_exhaustively() {
    let gadget = addition_gadget();
    for x in 1..=30 {
        for y in 1..=30 {
            for z in 1..=30 {
                assert!(robinson_identity_holds(x, y, z));
                assert!(gadget_agrees(&gadget, x, y, z), "({x}, {y}, {z})");
            }
        }
    }
}

#[test]
fn modes_agree_at_32() {
    let run = |mode| {
        verify_phi(
            32,
            &PhiOptions {
                mode,
                ..PhiOptions::default()
            },
        )
        .unwrap()
    };
    let all = run(Mode::Exhaustive);
    let sorted = run(Mode::Nondecreasing);
    assert!(all.is_confirmed());
    assert_eq!(all.status, sorted.status);
    for (a, s) in all.arities.iter().zip(&sorted.arities) {
        assert_eq!(a.classes, s.classes, "n={}", a.n);
    }
}

#[test]
fn repeated_entries_extend_through_distinct_values() {
    for n in 2..=3 {
        let checked = duplicates_extend_through_distinct(16, n, Mode::Exhaustive).unwrap();
        assert!(checked > 0);
    }
    duplicates_extend_through_distinct(32, 4, Mode::Nondecreasing).unwrap();
}

#[test]
fn decoding_visits_the_direct_enumeration() {
    flowchart_matches_direct(16, 10_000).unwrap();
}

#[test]
fn dominated_quadruples_inherit_family_solutions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 10_000 {
        let mut x: Vec<u64> = (0..4).map(|_| rng.gen_range(1..=256)).collect();
        x.sort_unstable();
        x.dedup();
        if x.len() < 4 || x[3] <= 16 || diobound::derive_signature(&tuple(&x)).is_empty() {
            continue;
        }
        dominance_transfers([x[0], x[1], x[2], x[3]], 5).unwrap();
        checked += 1;
    }
}

#[test]
fn f_table_values_are_exact() {
    let two = BigUint::from(2u32);
    assert_eq!(bound_f(6).unwrap(), BigUint::from(18u32).pow(4));
    assert_eq!(bound_f(7).unwrap(), BigUint::from(258u32).pow(8));
    assert_eq!(bound_f(8).unwrap(), (two.pow(16) + 2u32).pow(16));
}
