//! Named systems with known extremal solutions: the chains and divisor
//! systems attaining `f(n)`, the two systems exceeding the older bound
//! `2^(2^(n-1))`, and the padding system forcing `x1 = n`.
//!
//! Expected solutions are computed from their closed forms on every call.

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bound::HeightBound;
use crate::error::{Error, Result};
use crate::system::{EquationSystem, PosTuple, RelationAtom, Stage};

pub const MAX_THEOREM1_N: usize = 12;
pub const MAX_THEOREM2_N: usize = 10;
pub const MAX_COUNTEREXAMPLE_K: usize = 10;

/// How the expected solution's maximum relates to `claimed_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRelation {
    Equals,
    AtMost,
    Exceeds,
}

impl fmt::Display for BoundRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundRelation::Equals => "=",
            BoundRelation::AtMost => "<=",
            BoundRelation::Exceeds => ">",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPackage {
    pub label: String,
    pub system: EquationSystem,
    pub expected: PosTuple,
    pub claimed_bound: BigUint,
    pub relation: BoundRelation,
}

impl WitnessPackage {
    /// Whether `max(expected)` stands in `relation` to `claimed_bound`.
    pub fn relation_holds(&self) -> bool {
        let max = self.expected.max_entry();
        match self.relation {
            BoundRelation::Equals => *max == self.claimed_bound,
            BoundRelation::AtMost => *max <= self.claimed_bound,
            BoundRelation::Exceeds => *max > self.claimed_bound,
        }
    }
}

fn too_small(name: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::ParameterTooSmall { name, value, min });
    }
    Ok(())
}

fn too_large(name: &'static str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(Error::ParameterTooLarge { name, value, max });
    }
    Ok(())
}

/// `2^(2^e)`.
fn tower(e: usize) -> BigUint {
    BigUint::one() << (1usize << e)
}

/// `x1 * x1 = x1`, `x1 + 1 = x2`, `x_i * x_i = x_{i+1}` for `2 <= i < n`,
/// whose only solution is `(1, 2, 4, 16, ..., 2^(2^(n-2)))`.
pub fn theorem1_witness(n: usize) -> Result<WitnessPackage> {
    too_small("n", n, 1)?;
    too_large("n", n, MAX_THEOREM1_N)?;
    let mut atoms = vec![RelationAtom::Prod(1, 1, 1)];
    if n >= 2 {
        atoms.push(RelationAtom::Succ(1, 2));
    }
    atoms.extend((2..n).map(|i| RelationAtom::Prod(i, i, i + 1)));
    let mut values = vec![BigUint::one()];
    values.extend((2..=n).map(|i| tower(i - 2)));
    let expected = PosTuple::new(values)?;
    // Past five variables the chain falls short of f(n).
    let relation = if n <= 5 {
        BoundRelation::Equals
    } else {
        BoundRelation::AtMost
    };
    let claimed_bound = HeightBound::new(n)?.value()?;
    Ok(WitnessPackage {
        label: format!("chain n={n}"),
        system: EquationSystem::from_atoms(n, atoms)?,
        expected,
        claimed_bound,
        relation,
    })
}

/// Over `n + 4` variables: `x_i * x_i = x_{i+1}` for `i <= n`,
/// `x_{n+2} + 1 = x1`, `x_{n+3} + 1 = x_{n+2}`, `x_{n+3} * x_{n+4} = x_{n+1}`.
/// Its largest solution has `x_{n+1} = (2 + 2^(2^n))^(2^n)`, which is
/// `f(n + 4)` for `n >= 2`.
pub fn theorem2_witness(n: usize) -> Result<WitnessPackage> {
    too_small("n", n, 1)?;
    too_large("n", n, MAX_THEOREM2_N)?;
    let mut atoms: Vec<RelationAtom> = (1..=n).map(|i| RelationAtom::Prod(i, i, i + 1)).collect();
    atoms.push(RelationAtom::Succ(n + 2, 1));
    atoms.push(RelationAtom::Succ(n + 3, n + 2));
    atoms.push(RelationAtom::prod(n + 3, n + 4, n + 1));
    let two_pow = tower(n);
    let base = &two_pow + 2u32;
    let mut values: Vec<BigUint> = (1..=n + 1).map(|i| base.pow(1u32 << (i - 1))).collect();
    values.push(&two_pow + 1u32);
    values.push(two_pow.clone());
    values.push((BigUint::one() + (BigUint::one() << ((1usize << n) - 1))).pow(1u32 << n));
    let claimed_bound = base.pow(1u32 << n);
    Ok(WitnessPackage {
        label: format!("divisor n={n}"),
        system: EquationSystem::from_atoms(n + 4, atoms)?,
        expected: PosTuple::new(values)?,
        claimed_bound,
        relation: BoundRelation::Equals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    /// Addition and product atoms, `k >= 3`.
    Addition,
    /// Unit, addition and product atoms, `k >= 4`.
    Unit,
}

/// Largest `x1` with `x1 - offset` dividing `x1^(2^k)`, i.e. dividing
/// `offset^(2^k) = 2^(2^k * log2(offset))`: the candidates are the powers of
/// two up to that power.
fn largest_divisor_root(offset: u32, k: usize) -> BigUint {
    let exponent = BigUint::one() << k;
    let top_bits = (1usize << k) * offset.trailing_zeros() as usize;
    let mut best = None;
    for e in 0..=top_bits {
        let d = BigUint::one() << e;
        let x1 = &d + offset;
        if x1.modpow(&exponent, &d).is_zero() {
            best = Some(x1);
        }
    }
    best.expect("x1 - offset = 1 always divides")
}

/// The two systems on `n = k + 5` variables whose largest positive solution
/// exceeds `2^(2^(n-1))`.
pub fn counterexample_witness(kind: CounterexampleKind, k: usize) -> Result<WitnessPackage> {
    too_large("k", k, MAX_COUNTEREXAMPLE_K)?;
    let mut atoms: Vec<RelationAtom> = (1..=k).map(|i| RelationAtom::Prod(i, i, i + 1)).collect();
    let offset = match kind {
        CounterexampleKind::Addition => {
            too_small("k", k, 3)?;
            atoms.push(RelationAtom::add(k + 2, k + 2, k + 3));
            atoms.push(RelationAtom::Prod(k + 2, k + 2, k + 3));
            atoms.push(RelationAtom::add(k + 4, k + 3, 1));
            4u32
        }
        CounterexampleKind::Unit => {
            too_small("k", k, 4)?;
            atoms.push(RelationAtom::Unit(k + 2));
            atoms.push(RelationAtom::add(k + 3, k + 2, 1));
            atoms.push(RelationAtom::add(k + 4, k + 2, k + 3));
            2u32
        }
    };
    atoms.push(RelationAtom::prod(k + 4, k + 5, k + 1));
    let x1 = largest_divisor_root(offset, k);
    let mut values: Vec<BigUint> = (0..=k).map(|i| x1.pow(1u32 << i)).collect();
    let top = values[k].clone();
    match kind {
        CounterexampleKind::Addition => {
            values.push(BigUint::from(2u32));
            values.push(BigUint::from(4u32));
        }
        CounterexampleKind::Unit => {
            values.push(BigUint::one());
            values.push(&x1 - 1u32);
        }
    }
    let divisor = &x1 - offset;
    values.push(divisor.clone());
    values.push(top / divisor);
    let n = k + 5;
    Ok(WitnessPackage {
        label: format!(
            "{} counterexample k={k}",
            match kind {
                CounterexampleKind::Addition => "addition",
                CounterexampleKind::Unit => "unit",
            }
        ),
        system: EquationSystem::from_atoms(n, atoms)?,
        expected: PosTuple::new(values)?,
        claimed_bound: tower(n - 1),
        relation: BoundRelation::Exceeds,
    })
}

/// Index layout of a padded system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddingLayout {
    pub psi: Range<usize>,
    pub pads: Range<usize>,
    /// `t_1, ..., t_[n/2]`.
    pub chain: Range<usize>,
    pub u: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Padded {
    pub system: EquationSystem,
    pub layout: PaddingLayout,
}

/// Extends a conjecture-form `psi` on `s` variables to exactly `n` variables
/// so that every solution has `x1 = n` and `y = x2 + 1`. Needs `n > 2s + 2`.
pub fn theorem6_padding(psi: &EquationSystem, n: usize) -> Result<Padded> {
    if psi.stage() != Stage::ConjectureForm {
        return Err(Error::NotConjectureForm);
    }
    let s = psi.n();
    too_small("s", s, 2)?;
    too_small("n", n, 2 * s + 3)?;
    let half = n / 2;
    let pad_count = n - half - s - 2;
    let pads = s + 1..s + 1 + pad_count;
    let chain = pads.end..pads.end + half;
    let u = chain.end;
    let y = u + 1;
    debug_assert_eq!(y, n);
    let t = |i: usize| chain.start + i - 1;
    let mut system = psi.clone();
    system.add_variables(n - s);
    for p in pads.clone() {
        system.insert(RelationAtom::Prod(p, p, p))?;
    }
    system.insert(RelationAtom::Prod(t(1), t(1), t(1)))?;
    for i in 1..half {
        system.insert(RelationAtom::Succ(t(i), t(i + 1)))?;
    }
    system.insert(RelationAtom::prod(t(2), t(half), u))?;
    if n % 2 == 1 {
        system.insert(RelationAtom::Succ(u, 1))?;
    } else {
        system.insert(RelationAtom::prod(t(1), u, 1))?;
    }
    system.insert(RelationAtom::Succ(2, y))?;
    Ok(Padded {
        system,
        layout: PaddingLayout {
            psi: 1..s + 1,
            pads,
            chain,
            u,
            y,
        },
    })
}
