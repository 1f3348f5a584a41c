//! Prime-power indexing of tuples: `(x1, ..., xn) <-> p1^x1 * ... * pn^xn`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::system::PosTuple;

/// The first `n` primes.
pub fn first_primes(n: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// `p1^x1 * ... * pn^xn` over the first `n` primes.
pub fn encode_tuple(x: &PosTuple) -> Result<BigUint> {
    let primes = first_primes(x.arity());
    let mut out = BigUint::one();
    for (p, e) in primes.into_iter().zip(x.values()) {
        let e = e.to_u32().ok_or_else(|| Error::Invalid(format!("exponent {e} too large")))?;
        out *= BigUint::from(p).pow(e);
    }
    Ok(out)
}

/// Exponents of the prime factorization of `a`, ordered by increasing prime.
/// The primes need not be consecutive: `9` decodes to `(2)`.
pub fn decode_index(a: &BigUint) -> Result<PosTuple> {
    if *a < BigUint::from(2u32) {
        return Err(Error::ParameterTooSmall {
            name: "a",
            value: a.to_usize().unwrap_or(0),
            min: 2,
        });
    }
    let mut rest = a.clone();
    let mut exponents = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u64;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            exponents.push(BigUint::from(e));
        }
        p += 1u32;
    }
    if !rest.is_one() {
        exponents.push(BigUint::one());
    }
    PosTuple::new(exponents)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &[u64]) -> PosTuple {
        PosTuple::from_u64s(v).unwrap()
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
        assert!(first_primes(0).is_empty());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_tuple(&tuple(&[1])).unwrap(), BigUint::from(2u32));
        assert_eq!(encode_tuple(&tuple(&[1, 2])).unwrap(), BigUint::from(18u32));
        assert_eq!(encode_tuple(&tuple(&[3, 2])).unwrap(), BigUint::from(72u32));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_index(&BigUint::from(2u32)).unwrap(), tuple(&[1]));
        assert_eq!(decode_index(&BigUint::from(72u32)).unwrap(), tuple(&[3, 2]));
        assert_eq!(decode_index(&BigUint::from(9u32)).unwrap(), tuple(&[2]));
        assert_eq!(decode_index(&BigUint::from(30u32)).unwrap(), tuple(&[1, 1, 1]));
        assert!(decode_index(&BigUint::from(1u32)).is_err());
    }
}
