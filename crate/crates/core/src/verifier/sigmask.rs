//! Signatures of tuples of arity at most five packed into a `u128`.
//!
//! Bit `i*n + k` holds `x_i + 1 = x_k`; bit `n^2 + pair(i, j)*n + k` holds
//! `x_i * x_j = x_k` for `i <= j` (0-based), where `pair` numbers the pairs
//! `i <= j` lexicographically. Subset of signatures is `a & !b == 0`.

use crate::error::{Error, Result};
use crate::system::{EquationSystem, RelationAtom};

pub const MAX_MASK_ARITY: usize = 5;

pub type Mask = u128;

fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i <= j && j < n);
    // Rows 0..i hold n + (n - 1) + ... + (n - i + 1) pairs.
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    if n > MAX_MASK_ARITY {
        return Err(Error::ParameterTooLarge {
            name: "arity",
            value: n,
            max: MAX_MASK_ARITY,
        });
    }
    Ok(())
}

/// Signature of `x` (all entries positive). Panics above arity five; callers
/// check with [`mask_supported`].
pub fn signature_mask(x: &[u64]) -> Mask {
    let n = x.len();
    assert!((1..=MAX_MASK_ARITY).contains(&n), "arity {n} has no mask");
    let mut m: Mask = 0;
    for i in 0..n {
        for k in 0..n {
            if x[i].checked_add(1) == Some(x[k]) {
                m |= 1 << (i * n + k);
            }
        }
    }
    let base = n * n;
    let mut p = 0;
    for i in 0..n {
        for j in i..n {
            let prod = u128::from(x[i]) * u128::from(x[j]);
            for k in 0..n {
                if prod == u128::from(x[k]) {
                    m |= 1 << (base + p * n + k);
                }
            }
            p += 1;
        }
    }
    m
}

pub fn mask_supported(n: usize) -> bool {
    (1..=MAX_MASK_ARITY).contains(&n)
}

pub fn is_dominated(small: Mask, large: Mask) -> bool {
    small & !large == 0
}

/// The conjecture-form system a mask describes.
pub fn mask_to_system(mask: Mask, n: usize) -> Result<EquationSystem> {
    check_arity(n)?;
    let mut atoms = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if mask >> (i * n + k) & 1 == 1 {
                atoms.push(RelationAtom::Succ(i + 1, k + 1));
            }
        }
    }
    let mut p = 0;
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                if mask >> (n * n + p * n + k) & 1 == 1 {
                    atoms.push(RelationAtom::prod(i + 1, j + 1, k + 1));
                }
            }
            p += 1;
        }
    }
    EquationSystem::from_atoms(n, atoms)
}

/// Mask of a conjecture-form system.
pub fn system_to_mask(system: &EquationSystem) -> Result<Mask> {
    let n = system.n();
    check_arity(n)?;
    let mut m: Mask = 0;
    for atom in system.atoms() {
        m |= match *atom {
            RelationAtom::Succ(i, k) => 1 << ((i - 1) * n + (k - 1)),
            RelationAtom::Prod(i, j, k) => {
                1 << (n * n + pair_index(i - 1, j - 1, n) * n + (k - 1))
            }
            _ => return Err(Error::NotConjectureForm),
        };
    }
    Ok(m)
}

/// Smallest mask over all orderings of `x`: a label-free name for the
/// signature's isomorphism class.
pub fn class_mask(x: &[u64]) -> Mask {
    let mut v = x.to_vec();
    let mut best = signature_mask(&v);
    // Heap's algorithm, iterative.
    let n = v.len();
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                v.swap(0, i);
            } else {
                v.swap(c[i], i);
            }
            best = best.min(signature_mask(&v));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{derive_signature, PosTuple};

    #[test]
    fn pair_numbering_is_dense() {
        for n in 1..=MAX_MASK_ARITY {
            let mut expected = 0;
            for i in 0..n {
                for j in i..n {
                    assert_eq!(pair_index(i, j, n), expected, "n={n} i={i} j={j}");
                    expected += 1;
                }
            }
            assert!(n * n + expected * n <= 128);
        }
    }

    #[test]
    fn agrees_with_derived_signature() {
        for x in [[2u64, 3, 4, 17], [1, 2, 3, 17], [2, 4, 16, 256], [4, 5, 6, 20]] {
            let sig = derive_signature(&PosTuple::from_u64s(&x).unwrap());
            let m = signature_mask(&x);
            assert_eq!(mask_to_system(m, 4).unwrap(), sig);
            assert_eq!(system_to_mask(&sig).unwrap(), m);
        }
    }

    #[test]
    fn class_is_permutation_invariant() {
        assert_eq!(class_mask(&[2, 3, 4]), class_mask(&[4, 2, 3]));
        assert_eq!(class_mask(&[1, 2, 5, 25]), class_mask(&[25, 5, 1, 2]));
    }

    #[test]
    fn large_arity_rejected() {
        assert!(mask_to_system(0, 6).is_err());
    }
}
