//! Bounded enumeration of positive solutions with functional propagation.
//!
//! A variable that propagation cannot determine is *free*; free variables are
//! chosen in ascending index order and tried with every value in `1..=cap`.
//! Values derived by propagation may exceed the cap.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::system::{EquationSystem, PosTuple, RelationAtom};

/// Per-variable optional values (`values[0]` is `x1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    values: Vec<Option<BigUint>>,
}

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        Self {
            values: vec![None; n],
        }
    }

    /// Assignment with `x1..x_len` fixed to `prefix`.
    pub fn with_prefix(n: usize, prefix: &[BigUint]) -> Self {
        let mut a = Self::empty(n);
        for (slot, v) in a.values.iter_mut().zip(prefix) {
            *slot = Some(v.clone());
        }
        a
    }

    pub fn get(&self, index: usize) -> Option<&BigUint> {
        self.values[index - 1].as_ref()
    }

    pub fn set(&mut self, index: usize, value: BigUint) {
        self.values[index - 1] = Some(value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_unassigned(&self) -> Option<usize> {
        self.values.iter().position(Option::is_none).map(|i| i + 1)
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn to_tuple(&self) -> Option<PosTuple> {
        let values: Option<Vec<BigUint>> = self.values.iter().cloned().collect();
        PosTuple::new(values?).ok()
    }

    /// Records `value` for `index`; `Err(())` on conflict or non-positive.
    fn assign(&mut self, index: usize, value: BigUint) -> Result<bool, ()> {
        if value.is_zero() {
            return Err(());
        }
        match &self.values[index - 1] {
            Some(existing) if *existing == value => Ok(false),
            Some(_) => Err(()),
            None => {
                self.values[index - 1] = Some(value);
                Ok(true)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagated {
    Consistent(PartialAssignment),
    Contradiction,
}

/// Applies one atom's forward/backward rules. Returns whether anything new
/// was assigned.
fn apply(atom: &RelationAtom, a: &mut PartialAssignment) -> Result<bool, ()> {
    let val = |a: &PartialAssignment, i: usize| a.values[i - 1].clone();
    match *atom {
        RelationAtom::Unit(k) => a.assign(k, BigUint::one()),
        RelationAtom::Succ(i, k) => match (val(a, i), val(a, k)) {
            (Some(x), _) => a.assign(k, x + 1u32),
            (None, Some(z)) => {
                if z <= BigUint::one() {
                    return Err(());
                }
                a.assign(i, z - 1u32)
            }
            (None, None) => Ok(false),
        },
        RelationAtom::Prod(i, j, k) => match (val(a, i), val(a, j), val(a, k)) {
            (Some(x), Some(y), _) => a.assign(k, x * y),
            (None, None, Some(z)) if i == j => {
                let root = z.sqrt();
                if &root * &root != z {
                    return Err(());
                }
                a.assign(i, root)
            }
            (Some(x), None, Some(z)) => {
                let (q, r) = z.div_rem(&x);
                if !r.is_zero() {
                    return Err(());
                }
                a.assign(j, q)
            }
            (None, Some(y), Some(z)) => {
                let (q, r) = z.div_rem(&y);
                if !r.is_zero() {
                    return Err(());
                }
                a.assign(i, q)
            }
            _ => Ok(false),
        },
        RelationAtom::Add(i, j, k) => match (val(a, i), val(a, j), val(a, k)) {
            (Some(x), Some(y), _) => a.assign(k, x + y),
            (None, None, Some(z)) if i == j => {
                if z.is_odd() {
                    return Err(());
                }
                a.assign(i, z >> 1)
            }
            (Some(x), None, Some(z)) => {
                if z <= x {
                    return Err(());
                }
                a.assign(j, z - x)
            }
            (None, Some(y), Some(z)) => {
                if z <= y {
                    return Err(());
                }
                a.assign(i, z - y)
            }
            _ => Ok(false),
        },
    }
}

/// Closes `partial` under the propagation rules until nothing changes.
///
/// Contradiction is an ordinary outcome: the partial assignment cannot be
/// extended to a positive solution.
pub fn propagate(system: &EquationSystem, partial: PartialAssignment) -> Propagated {
    assert_eq!(partial.len(), system.n(), "assignment arity must match system");
    let mut a = partial;
    loop {
        let mut changed = false;
        for atom in system.atoms() {
            match apply(atom, &mut a) {
                Ok(c) => changed |= c,
                Err(()) => return Propagated::Contradiction,
            }
        }
        if !changed {
            // Every atom with all participants assigned was checked by the
            // last sweep.
            return Propagated::Consistent(a);
        }
    }
}

/// Known upper bound on an unassigned variable: `v * y = z` gives `v <= z`
/// for assigned `z`, `v + y = z` gives `v < z`, and `v * y = y` or
/// `v * v = v` gives `v <= 1`.
fn implied_upper_bound(system: &EquationSystem, a: &PartialAssignment, v: usize) -> Option<BigUint> {
    system
        .atoms()
        .iter()
        .filter_map(|atom| match *atom {
            RelationAtom::Prod(i, j, k) if (i == v && j == k) || (j == v && i == k) => {
                Some(BigUint::one())
            }
            RelationAtom::Prod(i, j, k) if (i == v || j == v) && k != v => a.get(k).cloned(),
            RelationAtom::Add(i, j, k) if (i == v || j == v) && k != v => {
                a.get(k).map(|z| z - 1u32)
            }
            _ => None,
        })
        .min()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Solutions sorted lexicographically.
    pub solutions: Vec<PosTuple>,
    /// The search stopped at the requested limit.
    pub truncated: bool,
    /// Every choice point's range covered all feasible values (an implied
    /// upper bound was within the cap), so `solutions` is the complete
    /// positive solution set.
    pub exhaustive: bool,
}

type Accept<'a> = &'a (dyn Fn(&PosTuple) -> bool + Sync);

struct Search<'a> {
    system: &'a EquationSystem,
    cap: u64,
    limit: Option<usize>,
    /// Solutions rejected here are skipped but do not stop the search.
    accept: Option<Accept<'a>>,
}

struct Found {
    solutions: Vec<PosTuple>,
    exhaustive: bool,
}

impl Search<'_> {
    fn full(&self, found: &Found) -> bool {
        self.limit.is_some_and(|l| found.solutions.len() >= l)
    }

    fn dfs(&self, partial: PartialAssignment, found: &mut Found) {
        if self.full(found) {
            return;
        }
        let a = match propagate(self.system, partial) {
            Propagated::Consistent(a) => a,
            Propagated::Contradiction => return,
        };
        let Some(v) = a.first_unassigned() else {
            self.record(a, found);
            return;
        };
        let top = self.choice_range(&a, v, found);
        for value in 1..=top {
            if self.full(found) {
                return;
            }
            let mut next = a.clone();
            next.set(v, BigUint::from(value));
            self.dfs(next, found);
        }
    }

    fn record(&self, a: PartialAssignment, found: &mut Found) {
        let tuple = a.to_tuple().expect("complete and positive");
        if self.accept.is_none_or(|accept| accept(&tuple)) {
            found.solutions.push(tuple);
        }
    }

    /// Upper end of the values tried for free variable `v`; clears
    /// `exhaustive` if the cap cuts the feasible range.
    fn choice_range(&self, a: &PartialAssignment, v: usize, found: &mut Found) -> u64 {
        match implied_upper_bound(self.system, a, v) {
            Some(b) if b <= BigUint::from(self.cap) => u64::try_from(b).expect("below cap"),
            _ => {
                found.exhaustive = false;
                self.cap
            }
        }
    }
}

/// Enumerates positive solutions whose free-variable choices are `<= cap`,
/// stopping after `limit` solutions (in search order) when given.
pub fn enumerate_solutions(system: &EquationSystem, cap: u64, limit: Option<usize>) -> Enumeration {
    enumerate_from(system, PartialAssignment::empty(system.n()), cap, limit, Exec::Sequential)
}

/// As [`enumerate_solutions`], starting from a partial assignment, with the
/// first free variable's range split across workers.
pub fn enumerate_from(
    system: &EquationSystem,
    start: PartialAssignment,
    cap: u64,
    limit: Option<usize>,
    exec: Exec,
) -> Enumeration {
    assert!(cap >= 1, "cap must be positive");
    let search = Search {
        system,
        cap,
        limit,
        accept: None,
    };
    let mut found = Found {
        solutions: Vec::new(),
        exhaustive: true,
    };
    let root = match propagate(system, start) {
        Propagated::Consistent(a) => a,
        Propagated::Contradiction => return finish(found, false),
    };
    let Some(v) = root.first_unassigned() else {
        search.record(root, &mut found);
        return finish(found, false);
    };
    if exec == Exec::Sequential {
        search.dfs(root, &mut found);
    } else {
        let top = search.choice_range(&root, v, &mut found);
        let branches = exec.map_range(1..top + 1, |value| {
            let mut local = Found {
                solutions: Vec::new(),
                exhaustive: true,
            };
            let mut next = root.clone();
            next.set(v, BigUint::from(value));
            search.dfs(next, &mut local);
            local
        });
        for branch in branches {
            found.exhaustive &= branch.exhaustive;
            found.solutions.extend(branch.solutions);
        }
    }
    // Branches each stop at the limit on their own; keeping the first
    // `limit` in search order reproduces the sequential result.
    let truncated = limit.is_some_and(|l| found.solutions.len() >= l);
    if let Some(l) = limit {
        found.solutions.truncate(l);
    }
    finish(found, truncated)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstHit {
    pub solution: Option<PosTuple>,
    /// With no solution: every feasible free value was tried, so no accepted
    /// solution exists at all.
    pub exhaustive: bool,
}

/// The first solution in search order (ascending free variables, ascending
/// values) for which `accept` holds.
pub fn find_first(
    system: &EquationSystem,
    start: PartialAssignment,
    cap: u64,
    accept: &(dyn Fn(&PosTuple) -> bool + Sync),
) -> FirstHit {
    assert!(cap >= 1, "cap must be positive");
    let search = Search {
        system,
        cap,
        limit: Some(1),
        accept: Some(accept),
    };
    let mut found = Found {
        solutions: Vec::new(),
        exhaustive: true,
    };
    search.dfs(start, &mut found);
    let solution = found.solutions.pop();
    FirstHit {
        exhaustive: solution.is_none() && found.exhaustive,
        solution,
    }
}

fn finish(mut found: Found, truncated: bool) -> Enumeration {
    found.solutions.sort();
    Enumeration {
        solutions: found.solutions,
        truncated,
        exhaustive: found.exhaustive && !truncated,
    }
}

/// Checks `x^(2^n) = 2^(2^n) + (x - 2) * sum_{k=0}^{2^n - 1} 2^(2^n - 1 - k) x^k`
/// exactly.
pub fn verify_identity_theorem2(x: &BigInt, n: u32) -> Result<bool> {
    if n > 6 {
        return Err(Error::ParameterTooLarge {
            name: "n",
            value: n as usize,
            max: 6,
        });
    }
    let m = 1u32 << n;
    let two = BigInt::from(2);
    let lhs = x.pow(m);
    let mut sum = BigInt::zero();
    let mut x_pow = BigInt::one();
    for k in 0..m {
        sum += (BigInt::one() << (m - 1 - k) as usize) * &x_pow;
        x_pow *= x;
    }
    let rhs = two.pow(m) + (x - &two) * sum;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::RelationAtom::{Prod, Succ};

    fn sys(n: usize, atoms: &[RelationAtom]) -> EquationSystem {
        EquationSystem::from_atoms(n, atoms.iter().copied()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn assigned(a: &Propagated, i: usize) -> Option<u64> {
        match a {
            Propagated::Consistent(a) => a.get(i).map(|v| u64::try_from(v).unwrap()),
            Propagated::Contradiction => panic!("unexpected contradiction"),
        }
    }

    #[test]
    fn successor_forward() {
        let t = sys(2, &[Succ(1, 2)]);
        let mut p = PartialAssignment::empty(2);
        p.set(1, big(4));
        assert_eq!(assigned(&propagate(&t, p), 2), Some(5));
    }

    #[test]
    fn successor_backward_rejects_one() {
        let t = sys(2, &[Succ(1, 2)]);
        let mut p = PartialAssignment::empty(2);
        p.set(2, big(1));
        assert_eq!(propagate(&t, p), Propagated::Contradiction);
    }

    #[test]
    fn square_root_backward() {
        let t = sys(2, &[Prod(1, 1, 2)]);
        let mut p = PartialAssignment::empty(2);
        p.set(2, big(36));
        assert_eq!(assigned(&propagate(&t, p), 1), Some(6));
        let mut p = PartialAssignment::empty(2);
        p.set(2, big(35));
        assert_eq!(propagate(&t, p), Propagated::Contradiction);
    }

    #[test]
    fn division_backward() {
        let t = sys(3, &[Prod(1, 2, 3)]);
        let mut p = PartialAssignment::empty(3);
        p.set(1, big(5));
        p.set(3, big(12));
        assert_eq!(propagate(&t, p), Propagated::Contradiction);
        let mut p = PartialAssignment::empty(3);
        p.set(2, big(4));
        p.set(3, big(12));
        assert_eq!(assigned(&propagate(&t, p), 1), Some(3));
    }

    #[test]
    fn addition_rules() {
        let t = sys(3, &[RelationAtom::add(1, 2, 3)]);
        let mut p = PartialAssignment::empty(3);
        p.set(1, big(3));
        p.set(3, big(10));
        assert_eq!(assigned(&propagate(&t, p), 2), Some(7));
        let mut p = PartialAssignment::empty(3);
        p.set(1, big(10));
        p.set(3, big(10));
        assert_eq!(propagate(&t, p), Propagated::Contradiction);
        let doubled = sys(2, &[RelationAtom::add(1, 1, 2)]);
        let mut p = PartialAssignment::empty(2);
        p.set(2, big(7));
        assert_eq!(propagate(&doubled, p), Propagated::Contradiction);
    }

    #[test]
    fn unit_assigns_one() {
        let t = sys(1, &[RelationAtom::Unit(1)]);
        assert_eq!(assigned(&propagate(&t, PartialAssignment::empty(1)), 1), Some(1));
    }

    #[test]
    fn empty_system_enumerates_box() {
        let e = enumerate_solutions(&EquationSystem::new(1).unwrap(), 3, None);
        let got: Vec<String> = e.solutions.iter().map(ToString::to_string).collect();
        assert_eq!(got, ["1", "2", "3"]);
        assert!(!e.truncated);
        assert!(!e.exhaustive);
    }

    #[test]
    fn limit_truncates() {
        let e = enumerate_solutions(&EquationSystem::new(2).unwrap(), 5, Some(4));
        assert_eq!(e.solutions.len(), 4);
        assert!(e.truncated);
    }

    #[test]
    fn divisor_bound_makes_search_exhaustive() {
        // x1 * x2 = x3 with x3 pinned: both factors are bounded by 12.
        let t = sys(3, &[Prod(1, 2, 3)]);
        let mut start = PartialAssignment::empty(3);
        start.set(3, big(12));
        let e = enumerate_from(&t, start, 20, None, Exec::Sequential);
        assert_eq!(e.solutions.len(), 6);
        assert!(e.exhaustive);
    }

    #[test]
    fn parallel_matches_sequential() {
        let t = sys(4, &[Prod(1, 2, 3), Succ(3, 4)]);
        let a = enumerate_from(&t, PartialAssignment::empty(4), 9, None, Exec::Sequential);
        let b = enumerate_from(&t, PartialAssignment::empty(4), 9, None, Exec::Threads(3));
        assert_eq!(a, b);
        let a = enumerate_from(&t, PartialAssignment::empty(4), 9, Some(7), Exec::Sequential);
        let b = enumerate_from(&t, PartialAssignment::empty(4), 9, Some(7), Exec::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn identity_examples() {
        assert!(verify_identity_theorem2(&BigInt::from(2), 3).unwrap());
        assert!(verify_identity_theorem2(&BigInt::from(5), 2).unwrap());
        assert!(verify_identity_theorem2(&BigInt::from(-3), 2).unwrap());
        assert!(verify_identity_theorem2(&BigInt::from(1), 7).is_err());
    }
}
