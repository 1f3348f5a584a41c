//! Extensions: for a tuple `x` and a bound `c`, a tuple `y` of the same arity
//! with `max(y) > c` that satisfies every successor and product relation of
//! `x`.

use num_bigint::BigUint;
use serde::Serialize;

use super::families::family_catalog;
use super::sigmask::{is_dominated, signature_mask};
use crate::solver::{find_first, PartialAssignment};
use crate::system::{derive_signature, satisfies, PosTuple};

/// Free-variable cap used when none is given.
pub fn default_cap(c: u64) -> u64 {
    c.saturating_mul(2).saturating_add(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Catalog family with this 1-based index.
    Family(usize),
    Propagation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSearch {
    pub extension: Option<PosTuple>,
    pub route: Option<Route>,
    /// No extension exists at all: the propagation search covered every
    /// feasible value of every free variable.
    pub exhaustive: bool,
}

/// Sorting permutation of distinct values: `order[i]` is the position in
/// `x` of the `i`-th smallest entry.
fn sort_order(x: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&i| x[i]);
    order
}

fn via_family(x: &PosTuple, c: u64) -> Option<(PosTuple, usize)> {
    let values = x.to_u64s()?;
    if values.len() != 4 {
        return None;
    }
    let order = sort_order(&values);
    let sorted: Vec<u64> = order.iter().map(|&i| values[i]).collect();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mask = signature_mask(&sorted);
    let family = family_catalog()
        .iter()
        .find(|f| is_dominated(mask, signature_mask(&f.instance)))?;
    let signature = derive_signature(x);
    let bound = BigUint::from(c);
    // The maximum grows by at least one per step from the instance onward.
    for t in family.t0..=family.t0.saturating_add(c).saturating_add(1) {
        let Some(y_sorted) = family.eval(t) else {
            continue;
        };
        if *y_sorted.max_entry() <= bound {
            continue;
        }
        let y = unpermute(&y_sorted, &order);
        if satisfies(&y, &signature).expect("same arity") {
            return Some((y, family.index));
        }
    }
    None
}

fn unpermute(y_sorted: &PosTuple, order: &[usize]) -> PosTuple {
    let mut y = vec![BigUint::default(); order.len()];
    for (rank, &pos) in order.iter().enumerate() {
        y[pos] = y_sorted.values()[rank].clone();
    }
    PosTuple::new(y).expect("permuted values are positive")
}

/// Looks for an extension of `x` beyond `c`: first through the family
/// catalog (quadruples with distinct entries), then by propagation search
/// over the free variables of `x`'s signature, each tried up to `cap`.
///
/// The propagation search runs on the entries of `x` sorted by value (ties
/// by position), so the free variables swept first are the smallest ones.
/// Derived entries then grow from them and are not limited by `cap`.
pub fn search_extension(x: &PosTuple, c: u64, cap: u64) -> ExtensionSearch {
    if let Some((y, index)) = via_family(x, c) {
        return ExtensionSearch {
            extension: Some(y),
            route: Some(Route::Family(index)),
            exhaustive: false,
        };
    }
    let mut order: Vec<usize> = (0..x.arity()).collect();
    order.sort_by(|&i, &j| x.values()[i].cmp(&x.values()[j]));
    let sorted = PosTuple::new(order.iter().map(|&i| x.values()[i].clone()).collect())
        .expect("entries are positive");
    let signature = derive_signature(&sorted);
    let bound = BigUint::from(c);
    let above = move |y: &PosTuple| *y.max_entry() > bound;
    let hit = find_first(
        &signature,
        PartialAssignment::empty(x.arity()),
        cap.max(1),
        &above,
    );
    ExtensionSearch {
        route: hit.solution.as_ref().map(|_| Route::Propagation),
        extension: hit.solution.map(|y| unpermute(&y, &order)),
        exhaustive: hit.exhaustive,
    }
}

pub fn find_extension(x: &PosTuple, c: u64, cap: u64) -> Option<PosTuple> {
    search_extension(x, c, cap).extension
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &[u64]) -> PosTuple {
        PosTuple::from_u64s(v).unwrap()
    }

    #[test]
    fn singleton() {
        assert_eq!(find_extension(&tuple(&[5]), 16, 34), Some(tuple(&[17])));
    }

    #[test]
    fn forced_triple_has_none() {
        assert_eq!(find_extension(&tuple(&[2, 3, 4]), 16, 1000), None);
    }

    #[test]
    fn consecutive_triple_sweeps_first_variable() {
        // The first hit with maximum above 16 in ascending order.
        assert_eq!(find_extension(&tuple(&[3, 4, 5]), 16, 34), Some(tuple(&[15, 16, 17])));
    }

    #[test]
    fn quadruples_use_families_and_keep_positions() {
        let x = tuple(&[17, 2, 3, 1]);
        let s = search_extension(&x, 256, default_cap(256));
        let y = s.extension.unwrap();
        assert!(matches!(s.route, Some(Route::Family(_))));
        assert!(*y.max_entry() > BigUint::from(256u32));
        assert!(satisfies(&y, &derive_signature(&x)).unwrap());
    }

    #[test]
    fn derived_entries_may_exceed_the_cap() {
        // x2 * x2 = x3 and x3 * x3 = x1: sweeping x2 reaches (81, 3, 9).
        let x = tuple(&[16, 2, 4]);
        let y = find_extension(&x, 16, 34).unwrap();
        assert_eq!(y, tuple(&[81, 3, 9]));
        assert!(satisfies(&y, &derive_signature(&x)).unwrap());
    }

    #[test]
    fn exhaustive_failure_on_bounded_system() {
        // x1 * x1 = x1 bounds x1 by 1, and x2 = x1 + 1 follows.
        let s = search_extension(&tuple(&[1, 2]), 2, 6);
        assert_eq!(s.extension, None);
        assert!(s.exhaustive);
        // A free variable with no bound only reaches the cap.
        let s = search_extension(&tuple(&[2, 3, 4]), 16, 50);
        assert!(!s.exhaustive);
    }
}
