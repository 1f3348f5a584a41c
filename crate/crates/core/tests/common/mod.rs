//! Oracles and property checks shared by the property suite and the
//! acceptance runner. Everything here recomputes its answer from first
//! principles (box enumeration, native arithmetic) rather than calling the
//! code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use diobound::verifier::{
    canonical_quadruples, decode_index, encode_tuple, family_catalog, find_extension, for_each_tuple,
    Mode,
};
use diobound::{
    derive_signature, eliminate_additions, eliminate_units, enumerate_from, enumerate_solutions,
    is_subsystem, propagate, satisfies, Propagated, EquationSystem, Exec, PartialAssignment, PosTuple, RelationAtom,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn tuple(v: &[u64]) -> PosTuple {
    PosTuple::from_u64s(v).expect("positive entries")
}

pub fn atom_holds_u64(atom: &RelationAtom, x: &[u64]) -> bool {
    let v = |i: usize| x[i - 1] as u128;
    match *atom {
        RelationAtom::Unit(k) => v(k) == 1,
        RelationAtom::Succ(i, k) => v(i) + 1 == v(k),
        RelationAtom::Add(i, j, k) => v(i) + v(j) == v(k),
        RelationAtom::Prod(i, j, k) => v(i) * v(j) == v(k),
    }
}

/// Every tuple of `[1, edge]^n` solving `system`, in lexicographic order.
pub fn box_solutions(system: &EquationSystem, edge: u64) -> Vec<Vec<u64>> {
    let n = system.n();
    let mut out = Vec::new();
    let mut x = vec![1u64; n];
    loop {
        if system.atoms().iter().all(|a| atom_holds_u64(a, &x)) {
            out.push(x.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < edge {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

pub fn in_box(y: &PosTuple, edge: u64) -> Option<Vec<u64>> {
    y.to_u64s().filter(|v| v.iter().all(|&e| e <= edge))
}

/// The prefixes of length `n` of the solutions of `reduced` whose first `n`
/// entries are pinned to a point of `[1, edge]^n`, found with the solver.
pub fn projected_solutions(reduced: &EquationSystem, n: usize, edge: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let free = EquationSystem::new(n).expect("positive arity");
    for x in box_solutions(&free, edge) {
        let prefix: Vec<BigUint> = x.iter().map(|&v| BigUint::from(v)).collect();
        let start = PartialAssignment::with_prefix(reduced.n(), &prefix);
        let e = enumerate_from(reduced, start, edge, Some(1), Exec::Sequential);
        if !e.solutions.is_empty() {
            out.push(x);
        }
    }
    out
}

pub fn arb_atom(n: usize, general: bool) -> BoxedStrategy<RelationAtom> {
    let idx = 1..=n;
    let mut options: Vec<BoxedStrategy<RelationAtom>> = vec![
        (idx.clone(), idx.clone())
            .prop_map(|(i, k)| RelationAtom::succ(i, k))
            .boxed(),
        (idx.clone(), idx.clone(), idx.clone())
            .prop_map(|(i, j, k)| RelationAtom::prod(i, j, k))
            .boxed(),
    ];
    if general {
        options.push(idx.clone().prop_map(RelationAtom::unit).boxed());
        options.push(
            (idx.clone(), idx.clone(), idx)
                .prop_map(|(i, j, k)| RelationAtom::add(i, j, k))
                .boxed(),
        );
    }
    proptest::strategy::Union::new(options).boxed()
}

pub fn arb_system(max_n: usize, max_atoms: usize, general: bool) -> BoxedStrategy<EquationSystem> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            proptest::collection::vec(arb_atom(n, general), 0..=max_atoms)
                .prop_map(move |atoms| EquationSystem::from_atoms(n, atoms).expect("indices in range"))
        })
        .boxed()
}

/// Tuples with small entries so that relations actually occur.
pub fn arb_tuple(max_n: usize, max_entry: u64) -> BoxedStrategy<Vec<u64>> {
    proptest::collection::vec(1..=max_entry, 1..=max_n).boxed()
}

pub fn arb_permuted_tuple(max_n: usize, max_entry: u64) -> BoxedStrategy<(Vec<u64>, Vec<usize>)> {
    arb_tuple(max_n, max_entry)
        .prop_flat_map(|x| {
            let n = x.len();
            (Just(x), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .boxed()
}

// Properties. Each returns `Err` with a description on violation.

pub fn prop_tautology(x: &[u64]) -> Result<(), TestCaseError> {
    let t = tuple(x);
    prop_assert!(satisfies(&t, &derive_signature(&t)).unwrap());
    Ok(())
}

pub fn prop_characterization(x: &[u64], y: &[u64]) -> Result<(), TestCaseError> {
    let (tx, ty) = (tuple(x), tuple(y));
    let (px, py) = (derive_signature(&tx), derive_signature(&ty));
    prop_assert_eq!(satisfies(&ty, &px).unwrap(), is_subsystem(&px, &py).unwrap());
    Ok(())
}

/// `sigma[i]` is the 0-based source position of entry `i` of the permuted
/// tuple.
pub fn prop_equivariance(x: &[u64], sigma: &[usize]) -> Result<(), TestCaseError> {
    let permuted: Vec<u64> = sigma.iter().map(|&i| x[i]).collect();
    // Variable at old position sigma[i] becomes new variable i.
    let mut new_index = vec![0; x.len()];
    for (i, &s) in sigma.iter().enumerate() {
        new_index[s] = i + 1;
    }
    let relabeled = EquationSystem::from_atoms(
        x.len(),
        derive_signature(&tuple(x))
            .atoms()
            .iter()
            .map(|a| a.relabel(|k| new_index[k - 1])),
    )
    .unwrap();
    prop_assert_eq!(derive_signature(&tuple(&permuted)), relabeled);
    Ok(())
}

pub fn prop_encode_roundtrip(x: &[u64]) -> Result<(), TestCaseError> {
    let t = tuple(x);
    prop_assert_eq!(decode_index(&encode_tuple(&t).unwrap()).unwrap(), t);
    Ok(())
}

pub fn prop_solver_matches_box(system: &EquationSystem) -> Result<(), TestCaseError> {
    let edge = 12;
    let e = enumerate_solutions(system, edge, None);
    for y in &e.solutions {
        prop_assert!(satisfies(y, system).unwrap(), "unsound solution {}", y);
    }
    let from_solver: Vec<Vec<u64>> = e.solutions.iter().filter_map(|y| in_box(y, edge)).collect();
    prop_assert_eq!(from_solver, box_solutions(system, edge), "system:\n{}", system);
    Ok(())
}

pub fn prop_solver_parallel_matches(system: &EquationSystem) -> Result<(), TestCaseError> {
    let start = PartialAssignment::empty(system.n());
    let seq = enumerate_from(system, start.clone(), 12, None, Exec::Sequential);
    let par = enumerate_from(system, start, 12, None, Exec::Parallel);
    prop_assert_eq!(seq, par);
    Ok(())
}

/// Same positive solutions in `[1, 12]^n` before and after each lowering
/// pass, the reduced ones projected to the first `n` variables.
pub fn prop_pass_equivalence(system: &EquationSystem) -> Result<(), TestCaseError> {
    let edge = 12;
    let n = system.n();
    let want = box_solutions(system, edge);
    let units = eliminate_units(system);
    prop_assert_eq!(projected_solutions(&units, n, edge), want.clone(), "units:\n{}", units);
    let adds = |s: &EquationSystem| s.count_where(|a| matches!(a, RelationAtom::Add(..)));
    let lowered = eliminate_additions(&units).unwrap();
    prop_assert_eq!(lowered.n(), units.n() + 9 * adds(&units));
    prop_assert_eq!(adds(&lowered), 0);
    prop_assert_eq!(projected_solutions(&lowered, n, edge), want, "additions:\n{}", lowered);
    Ok(())
}

/// `x + y = z` exactly when `(zx + 1)(zy + 1) = z^2 (xy + 1) + 1`.
pub fn robinson_identity_holds(x: u64, y: u64, z: u64) -> bool {
    let (x, y, z) = (x as u128, y as u128, z as u128);
    let identity = (z * x + 1) * (z * y + 1) == z * z * (x * y + 1) + 1;
    (x + y == z) == identity
}

/// The ten-atom gadget, with `x, y, z` pinned, is consistent exactly when
/// `x + y = z`.
pub fn gadget_agrees(gadget: &EquationSystem, x: u64, y: u64, z: u64) -> bool {
    let prefix = [x, y, z].map(BigUint::from);
    let start = PartialAssignment::with_prefix(gadget.n(), &prefix);
    // Every gadget variable is a function of x, y, z, so propagation alone
    // decides consistency.
    let consistent = match propagate(gadget, start) {
        Propagated::Consistent(a) => {
            let t = a.to_tuple().expect("propagation assigns every gadget variable");
            satisfies(&t, gadget).unwrap()
        }
        Propagated::Contradiction => false,
    };
    consistent == (x + y == z)
}

pub fn addition_gadget() -> EquationSystem {
    let add = EquationSystem::from_atoms(3, [RelationAtom::add(1, 2, 3)]).unwrap();
    eliminate_additions(&add).unwrap()
}

/// Decoding `2..=limit` and keeping tuples with `f(n) < max <= c` gives the
/// same set as direct enumeration restricted to codes `<= limit`.
pub fn flowchart_matches_direct(c: u64, limit: u64) -> Result<(), String> {
    let f = |n: usize| diobound::bound_f(n).unwrap();
    let relevant = |x: &[u64]| {
        let max = *x.iter().max().unwrap();
        max <= c && f(x.len()) < BigUint::from(max)
    };
    let mut decoded = BTreeSet::new();
    for a in 2..=limit {
        let x = decode_index(&BigUint::from(a)).map_err(|e| e.to_string())?;
        let x = x.to_u64s().unwrap();
        if relevant(&x) {
            decoded.insert(x);
        }
    }
    let mut direct = BTreeSet::new();
    let mut n = 1;
    while f(n) < BigUint::from(c) {
        for first in 1..=c {
            for_each_tuple(n, c, first, Mode::Exhaustive, |x| {
                if relevant(x) && encode_tuple(&tuple(x)).unwrap() <= BigUint::from(limit) {
                    direct.insert(x.to_vec());
                }
            });
        }
        n += 1;
    }
    if decoded == direct {
        Ok(())
    } else {
        Err(format!(
            "decoded {} tuples, direct {}; first difference {:?}",
            decoded.len(),
            direct.len(),
            decoded.symmetric_difference(&direct).next()
        ))
    }
}

/// For tuples with a repeated entry and `f(n) < max <= c`: the extension of
/// the distinct values, spread back over the positions, extends the tuple.
pub fn duplicates_extend_through_distinct(c: u64, n: usize, mode: Mode) -> Result<u64, String> {
    let f_n = diobound::bound_f(n).unwrap();
    let mut checked = 0;
    let mut failure = None;
    for first in 1..=c {
        for_each_tuple(n, c, first, mode, |x| {
            if failure.is_some() || BigUint::from(*x.iter().max().unwrap()) <= f_n {
                return;
            }
            let distinct: Vec<u64> = x.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            if distinct.len() == x.len() {
                return;
            }
            checked += 1;
            let Some(y) = find_extension(&tuple(&distinct), c, 2 * c + 2) else {
                failure = Some(format!("{distinct:?} has no extension beyond {c}"));
                return;
            };
            let spread: Vec<BigUint> = x
                .iter()
                .map(|v| y.values()[distinct.binary_search(v).unwrap()].clone())
                .collect();
            let spread = PosTuple::new(spread).unwrap();
            let ok = satisfies(&spread, &derive_signature(&tuple(x))).unwrap()
                && *spread.max_entry() > BigUint::from(c);
            if !ok {
                failure = Some(format!("{x:?}: spread extension {spread} fails"));
            }
        });
    }
    failure.map_or(Ok(checked), Err)
}

/// For `x` dominated by canonical quadruple `q`, the family listed with `q`
/// solves `P(x)` for the first `samples` parameter values.
pub fn dominance_transfers(x: [u64; 4], samples: u64) -> Result<(), String> {
    let px = derive_signature(&tuple(&x));
    let canonical = canonical_256();
    let Some(q) = canonical
        .iter()
        .find(|q| is_subsystem(&px, &derive_signature(&tuple(&q[..]))).unwrap())
    else {
        return if px.is_empty() {
            Ok(())
        } else {
            Err(format!("{x:?} is not dominated"))
        };
    };
    let family = family_catalog()
        .iter()
        .find(|f| f.instance == *q)
        .ok_or_else(|| format!("no family for {q:?}"))?;
    for t in family.t0..family.t0 + samples {
        let y = family.eval(t).ok_or_else(|| format!("family {} undefined at {t}", family.index))?;
        if !satisfies(&y, &px).unwrap() {
            return Err(format!("family {} at t = {t} gives ({y}), missing P({x:?})", family.index));
        }
    }
    Ok(())
}

pub fn canonical_256() -> &'static [[u64; 4]] {
    static CACHE: std::sync::OnceLock<Vec<[u64; 4]>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| {
        canonical_quadruples(256, Exec::Parallel)
            .unwrap()
            .into_iter()
            .map(|q| q.quadruple)
            .collect()
    })
}

/// The 63 reference instances, one per family, in catalog order.
pub const TABLE_INSTANCES: [[u64; 4]; 63] = [
    [1, 2, 3, 17],
    [1, 2, 4, 17],
    [2, 3, 4, 17],
    [2, 3, 6, 18],
    [1, 2, 9, 18],
    [1, 4, 5, 20],
    [2, 4, 5, 20],
    [2, 3, 9, 18],
    [3, 4, 5, 20],
    [1, 2, 5, 25],
    [1, 4, 5, 25],
    [4, 5, 6, 20],
    [1, 2, 16, 17],
    [2, 4, 5, 25],
    [1, 5, 6, 25],
    [3, 4, 5, 25],
    [1, 4, 16, 17],
    [2, 4, 16, 17],
    [4, 5, 6, 24],
    [1, 3, 9, 27],
    [3, 4, 16, 17],
    [4, 5, 6, 25],
    [2, 3, 9, 27],
    [4, 5, 16, 17],
    [3, 4, 9, 27],
    [5, 6, 7, 25],
    [3, 8, 9, 24],
    [4, 5, 16, 20],
    [2, 4, 8, 32],
    [2, 3, 6, 36],
    [3, 8, 9, 27],
    [4, 5, 19, 20],
    [1, 15, 16, 17],
    [3, 9, 10, 27],
    [4, 5, 16, 25],
    [4, 5, 20, 21],
    [3, 4, 9, 36],
    [3, 9, 10, 30],
    [4, 15, 16, 17],
    [2, 4, 16, 32],
    [4, 5, 20, 25],
    [1, 5, 24, 25],
    [3, 4, 12, 36],
    [4, 16, 17, 18],
    [4, 5, 24, 25],
    [5, 6, 24, 25],
    [14, 15, 16, 17],
    [3, 9, 26, 27],
    [3, 9, 27, 28],
    [5, 23, 24, 25],
    [2, 4, 8, 64],
    [3, 8, 9, 64],
    [2, 4, 16, 64],
    [3, 8, 9, 72],
    [4, 8, 16, 64],
    [1, 3, 9, 81],
    [2, 3, 9, 81],
    [3, 4, 9, 81],
    [3, 8, 9, 81],
    [3, 9, 10, 81],
    [3, 9, 27, 81],
    [3, 9, 80, 81],
    [2, 4, 16, 256],
];
