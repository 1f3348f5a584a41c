//! The conjectural height bound `f(n)`.
//!
//! ```text
//! f(1) = 1
//! f(n) = 2^(2^(n-2))                      for 2 <= n <= 5
//! f(n) = (2 + 2^(2^(n-4)))^(2^(n-4))      for n >= 6
//! ```
//!
//! `f(n)` has roughly `4^(n-4)` bits, so values past `n = 16` are kept in
//! closed form; comparisons against concrete integers never need to expand
//! them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest bit length [`HeightBound::value`] will expand.
pub const MAX_MATERIALIZED_BITS: u64 = 1 << 25;

/// `f(n)` for a fixed arity, materialized lazily.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeightBound {
    n: usize,
}

impl HeightBound {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exact bit length of `f(n)`, saturating at `u64::MAX`.
    pub fn bits(&self) -> u64 {
        match self.n {
            1 => 1,
            2..=5 => (1u64 << (self.n - 2)) + 1,
            // (2 + 2^e)^e = 2^(e^2) * (1 + 2^(1-e))^e and the second factor
            // lies in [1, 2) once e >= 4.
            n if n - 4 < 32 => {
                let e = 1u64 << (n - 4);
                e * e + 1
            }
            _ => u64::MAX,
        }
    }

    pub fn is_materializable(&self) -> bool {
        self.bits() <= MAX_MATERIALIZED_BITS
    }

    pub fn value(&self) -> Result<BigUint> {
        if !self.is_materializable() {
            return Err(Error::BoundTooLarge(self.n));
        }
        Ok(match self.n {
            1 => BigUint::one(),
            2..=5 => BigUint::one() << (1usize << (self.n - 2)),
            n => {
                let e = 1usize << (n - 4);
                let base = (BigUint::one() << e) + 2u32;
                base.pow(e as u32)
            }
        })
    }

    /// Compares `f(n)` with `v` without expanding `f(n)` when it is
    /// obviously larger.
    pub fn cmp_value(&self, v: &BigUint) -> Ordering {
        let (fb, vb) = (self.bits(), v.bits());
        if fb != vb {
            return fb.cmp(&vb);
        }
        self.value()
            .expect("same bit length as a materialized integer")
            .cmp(v)
    }

    pub fn less_than(&self, v: &BigUint) -> bool {
        self.cmp_value(v) == Ordering::Less
    }

    pub fn less_than_u64(&self, v: u64) -> bool {
        self.less_than(&BigUint::from(v))
    }
}

impl fmt::Display for HeightBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            1 => f.write_str("1"),
            2..=5 => write!(f, "2^(2^{})", self.n - 2),
            n => write!(f, "(2+2^(2^{k}))^(2^{k})", k = n - 4),
        }
    }
}

impl Serialize for HeightBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            Ok(v) if self.bits() <= 256 => s.serialize_str(&v.to_string()),
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

/// `f(n)` as an exact integer.
pub fn bound_f(n: usize) -> Result<BigUint> {
    HeightBound::new(n)?.value()
}

/// Smallest arity `n` with `c <= f(n + 1)`; tuples of any arity whose maximum
/// lies in `(f(arity), c]` have arity at most this.
pub fn max_relevant_arity(c: &BigUint) -> usize {
    let mut n = 1;
    while (HeightBound { n: n + 1 }).less_than(c) {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bound_f(1).unwrap(), BigUint::from(1u32));
        assert_eq!(bound_f(2).unwrap(), BigUint::from(2u32));
        assert_eq!(bound_f(3).unwrap(), BigUint::from(4u32));
        assert_eq!(bound_f(4).unwrap(), BigUint::from(16u32));
        assert_eq!(bound_f(5).unwrap(), BigUint::from(256u32));
        assert_eq!(bound_f(6).unwrap(), BigUint::from(104_976u32));
    }

    #[test]
    fn zero_arity_rejected() {
        assert_eq!(bound_f(0), Err(Error::ZeroArity));
    }

    #[test]
    fn bit_lengths_are_exact() {
        for n in 1..=13 {
            let b = HeightBound::new(n).unwrap();
            assert_eq!(b.bits(), b.value().unwrap().bits(), "n={n}");
        }
    }

    #[test]
    fn huge_bounds_stay_symbolic() {
        let b = HeightBound::new(43).unwrap();
        assert!(!b.is_materializable());
        assert_eq!(b.value(), Err(Error::BoundTooLarge(43)));
        assert!(!b.less_than(&BigUint::from(u64::MAX)));
        assert_eq!(b.to_string(), "(2+2^(2^39))^(2^39)");
    }

    #[test]
    fn comparisons() {
        let f4 = HeightBound::new(4).unwrap();
        assert!(f4.less_than_u64(17));
        assert!(!f4.less_than_u64(16));
        assert_eq!(f4.cmp_value(&BigUint::from(16u32)), Ordering::Equal);
    }

    #[test]
    fn relevant_arity() {
        let arity = |c: u64| max_relevant_arity(&BigUint::from(c));
        assert_eq!(arity(2), 1);
        assert_eq!(arity(4), 2);
        assert_eq!(arity(16), 3);
        assert_eq!(arity(17), 4);
        assert_eq!(arity(256), 4);
        assert_eq!(arity(257), 5);
    }
}
