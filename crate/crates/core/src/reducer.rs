//! Lowering of a polynomial equation `D = 0` to a system of successor and
//! product atoms, in three passes:
//!
//! 1. [`skolem_reduce`]: a computation graph of `D` over unit, addition and
//!    product atoms. Every introduced variable is a function of `x1..xp`, so
//!    each root of `D` extends to exactly one solution.
//! 2. [`eliminate_units`]: `x = 1` becomes `x * x = x` (same positive
//!    solutions).
//! 3. [`eliminate_additions`]: each `x + y = z` becomes the ten-atom gadget
//!    built on `S(zx) * S(zy) = S(z^2 * S(xy))`, which holds exactly when
//!    `x + y = z` for positive integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bound::HeightBound;
use crate::error::{Error, Result};
use crate::poly::{Exponents, Polynomial};
use crate::solver::{propagate, PartialAssignment, Propagated};
use crate::system::{satisfies, EquationSystem, PosTuple, RelationAtom};

/// The integer-domain transform multiplies `2^p` copies of `D`.
pub const MAX_INTEGER_TRANSFORM_VARS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pass {
    Skolem,
    Units,
    Additions,
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pass::Skolem => "skolem",
            Pass::Units => "units",
            Pass::Additions => "additions",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub pass: Pass,
    pub system: EquationSystem,
}

/// Output of the lowering passes.
///
/// Variables `1..=p` are the polynomial's own in every stage; `provenance`
/// describes each introduced variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub input: Polynomial,
    pub stages: Vec<StageRecord>,
    pub provenance: BTreeMap<usize, String>,
}

impl ReductionTrace {
    pub fn final_system(&self) -> &EquationSystem {
        &self.stages.last().expect("at least one stage").system
    }

    pub fn n(&self) -> usize {
        self.final_system().n()
    }

    pub fn stage(&self, pass: Pass) -> Option<&EquationSystem> {
        self.stages.iter().find(|s| s.pass == pass).map(|s| &s.system)
    }

    /// The unique extension of `originals` through each stage, if
    /// `originals` is a positive root. Computed by forward propagation;
    /// each stage starts from the previous stage's tuple.
    pub fn lift(&self, originals: &[BigUint]) -> Option<Vec<PosTuple>> {
        let mut prefix: Vec<BigUint> = originals.to_vec();
        let mut out = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            let start = PartialAssignment::with_prefix(stage.system.n(), &prefix);
            let tuple = match propagate(&stage.system, start) {
                Propagated::Consistent(a) => a.to_tuple()?,
                Propagated::Contradiction => return None,
            };
            if !satisfies(&tuple, &stage.system).ok()? {
                return None;
            }
            prefix = tuple.values().to_vec();
            out.push(tuple);
        }
        Some(out)
    }
}

struct GraphBuilder {
    system: EquationSystem,
    provenance: BTreeMap<usize, String>,
    unit: usize,
    constants: BTreeMap<BigUint, usize>,
    powers: BTreeMap<(usize, u32), usize>,
    monomials: BTreeMap<Exponents, usize>,
}

impl GraphBuilder {
    fn new(p: usize) -> Self {
        // A constant polynomial gets the unit as its only variable.
        let mut system = EquationSystem::new(p.max(1)).expect("positive arity");
        let unit = if p == 0 { 1 } else { system.add_variables(1) };
        let mut b = Self {
            system,
            provenance: BTreeMap::new(),
            unit,
            constants: BTreeMap::new(),
            powers: BTreeMap::new(),
            monomials: BTreeMap::new(),
        };
        b.provenance.insert(unit, "1".into());
        b.push(RelationAtom::Unit(unit));
        b.constants.insert(BigUint::one(), unit);
        b
    }

    fn push(&mut self, atom: RelationAtom) {
        self.system.insert(atom).expect("indices are allocated before use");
    }

    fn fresh(&mut self, what: String) -> usize {
        let v = self.system.add_variables(1);
        self.provenance.insert(v, what);
        v
    }

    fn constant(&mut self, c: &BigUint) -> usize {
        if let Some(&v) = self.constants.get(c) {
            return v;
        }
        // Binary expansion from the top bit: double, then add one if set.
        let half = c >> 1u32;
        let h = self.constant(&half);
        let twice = &half << 1u32;
        let doubled = match self.constants.get(&twice) {
            Some(&v) => v,
            None => {
                let v = self.fresh(twice.to_string());
                self.push(RelationAtom::add(h, h, v));
                self.constants.insert(twice.clone(), v);
                v
            }
        };
        if (c & BigUint::one()).is_zero() {
            return doubled;
        }
        let v = self.fresh(c.to_string());
        self.push(RelationAtom::add(doubled, self.unit, v));
        self.constants.insert(c.clone(), v);
        v
    }

    fn power(&mut self, var: usize, e: u32) -> usize {
        if e == 1 {
            return var;
        }
        if let Some(&v) = self.powers.get(&(var, e)) {
            return v;
        }
        let v = if e.is_multiple_of(2) {
            let half = self.power(var, e / 2);
            let v = self.fresh(format!("x{var}^{e}"));
            self.push(RelationAtom::prod(half, half, v));
            v
        } else {
            let below = self.power(var, e - 1);
            let v = self.fresh(format!("x{var}^{e}"));
            self.push(RelationAtom::prod(below, var, v));
            v
        };
        self.powers.insert((var, e), v);
        v
    }

    fn monomial(&mut self, exps: &[u32]) -> usize {
        if let Some(&v) = self.monomials.get(exps) {
            return v;
        }
        let factors: Vec<usize> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| self.power(i + 1, e))
            .collect();
        let mut acc = factors[0];
        let mut prefix = vec![0; exps.len()];
        let first_var = exps.iter().position(|&e| e > 0).expect("non-constant");
        prefix[first_var] = exps[first_var];
        for (i, &e) in exps.iter().enumerate().skip(first_var + 1) {
            if e == 0 {
                continue;
            }
            prefix[i] = e;
            acc = match self.monomials.get(&prefix) {
                Some(&v) => v,
                None => {
                    let v = self.fresh(monomial_name(&prefix));
                    let factor = self.power(i + 1, e);
                    self.push(RelationAtom::prod(acc, factor, v));
                    self.monomials.insert(prefix.clone(), v);
                    v
                }
            };
        }
        self.monomials.insert(exps.to_vec(), acc);
        acc
    }

    fn term(&mut self, exps: &[u32], magnitude: &BigUint) -> usize {
        if exps.iter().all(|&e| e == 0) {
            return self.constant(magnitude);
        }
        let m = self.monomial(exps);
        if magnitude.is_one() {
            return m;
        }
        let c = self.constant(magnitude);
        let v = self.fresh(format!("{magnitude}*{}", monomial_name(exps)));
        self.push(RelationAtom::prod(c, m, v));
        v
    }

    /// Accumulates the terms of a polynomial with positive coefficients;
    /// `None` for the zero polynomial.
    fn sum(&mut self, part: &Polynomial, label: &str) -> Option<usize> {
        let mut acc: Option<usize> = None;
        for (exps, c) in part.terms() {
            let t = self.term(exps, c.magnitude());
            acc = Some(match acc {
                None => t,
                Some(prev) => {
                    let v = self.fresh(format!("{label} partial sum"));
                    self.push(RelationAtom::add(prev, t, v));
                    v
                }
            });
        }
        acc
    }
}

fn monomial_name(exps: &[u32]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| match e {
            1 => format!("x{}", i + 1),
            _ => format!("x{}^{}", i + 1, e),
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Pass 1: a system over unit, addition and product atoms whose positive
/// (non-negative, integer) solutions project bijectively onto the roots of
/// `d`.
pub fn skolem_reduce(d: &Polynomial) -> Result<ReductionTrace> {
    if d.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = d.nvars();
    if let Some(missing) = (1..=p).find(|&i| d.degree_in(i) == 0) {
        return Err(Error::MissingVariable(missing));
    }
    let mut b = GraphBuilder::new(p);
    let (pos, neg) = d.split_signs();
    let lhs = b.sum(&pos, "positive");
    let rhs = b.sum(&neg, "negative");
    let unit = b.unit;
    match (lhs, rhs) {
        (Some(l), Some(r)) => b.push(RelationAtom::prod(unit, l, r)),
        // One side vanishes: `s + 1 = 1` forces `s = 0`.
        (Some(s), None) | (None, Some(s)) => b.push(RelationAtom::add(s, unit, unit)),
        (None, None) => unreachable!("non-zero polynomial has a term"),
    }
    Ok(ReductionTrace {
        input: d.clone(),
        stages: vec![StageRecord {
            pass: Pass::Skolem,
            system: b.system,
        }],
        provenance: b.provenance,
    })
}

/// Pass 2: replaces every `x_k = 1` by `x_k * x_k = x_k`.
pub fn eliminate_units(t: &EquationSystem) -> EquationSystem {
    let atoms = t.atoms().iter().map(|atom| match *atom {
        RelationAtom::Unit(k) => RelationAtom::Prod(k, k, k),
        other => other,
    });
    EquationSystem::from_atoms(t.n(), atoms).expect("indices unchanged")
}

/// Pass 3: replaces each `x_i + x_j = x_k`, in sorted order, by the ten-atom
/// gadget over nine fresh variables.
pub fn eliminate_additions(t: &EquationSystem) -> Result<EquationSystem> {
    let mut provenance = BTreeMap::new();
    eliminate_additions_traced(t, &mut provenance)
}

fn eliminate_additions_traced(
    t: &EquationSystem,
    provenance: &mut BTreeMap<usize, String>,
) -> Result<EquationSystem> {
    if t.atoms().iter().any(|a| matches!(a, RelationAtom::Unit(_))) {
        return Err(Error::UnitAtomPresent);
    }
    let additions: Vec<RelationAtom> = t
        .atoms()
        .iter()
        .filter(|a| matches!(a, RelationAtom::Add(..)))
        .copied()
        .collect();
    let mut out = t.clone();
    for atom in additions {
        let RelationAtom::Add(x, y, z) = atom else {
            unreachable!()
        };
        out.remove(&atom);
        let base = out.add_variables(9);
        let [z1, z2, z1s, z2s, vs, u, tt, ts, v]: [usize; 9] =
            std::array::from_fn(|i| base + i);
        let names = [
            format!("x{z}*x{x}"),
            format!("x{z}*x{y}"),
            format!("x{z}*x{x}+1"),
            format!("x{z}*x{y}+1"),
            format!("(x{z}*x{x}+1)*(x{z}*x{y}+1)"),
            format!("x{z}^2"),
            format!("x{x}*x{y}"),
            format!("x{x}*x{y}+1"),
            format!("x{z}^2*(x{x}*x{y}+1)"),
        ];
        for (i, name) in names.into_iter().enumerate() {
            provenance.insert(base + i, format!("{name} [x{x} + x{y} = x{z}]"));
        }
        for gadget in [
            RelationAtom::prod(z, x, z1),
            RelationAtom::prod(z, y, z2),
            RelationAtom::Succ(z1, z1s),
            RelationAtom::Succ(z2, z2s),
            RelationAtom::prod(z1s, z2s, vs),
            RelationAtom::prod(z, z, u),
            RelationAtom::prod(x, y, tt),
            RelationAtom::Succ(tt, ts),
            RelationAtom::prod(u, ts, v),
            RelationAtom::Succ(v, vs),
        ] {
            out.insert(gadget)?;
        }
    }
    Ok(out)
}

/// All three passes.
pub fn to_conjecture_form(d: &Polynomial) -> Result<ReductionTrace> {
    let mut trace = skolem_reduce(d)?;
    let units = eliminate_units(&trace.stages[0].system);
    let additions = eliminate_additions_traced(&units, &mut trace.provenance)?;
    trace.stages.push(StageRecord {
        pass: Pass::Units,
        system: units,
    });
    trace.stages.push(StageRecord {
        pass: Pass::Additions,
        system: additions,
    });
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Positive,
    Nonnegative,
    Integer,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Positive => "positive",
            Domain::Nonnegative => "nonnegative",
            Domain::Integer => "integer",
        })
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Domain::Positive),
            "nonnegative" | "non-negative" => Ok(Domain::Nonnegative),
            "integer" => Ok(Domain::Integer),
            other => Err(Error::Invalid(format!("unknown domain `{other}`"))),
        }
    }
}

/// Rewrites `d` so that its positive roots encode the roots of `d` over
/// `domain`: `x - 1` for non-negative roots, and the product over all sign
/// patterns of `d(±(x1 - 1), ..., ±(xp - 1))` for integer roots.
pub fn domain_transform(d: &Polynomial, domain: Domain) -> Result<Polynomial> {
    let p = d.nvars();
    let shifted = |i: usize| &Polynomial::var(i, p) - &Polynomial::constant(1, p);
    match domain {
        Domain::Positive => Ok(d.clone()),
        Domain::Nonnegative => {
            let images: Vec<Polynomial> = (1..=p).map(shifted).collect();
            Ok(d.substitute(&images))
        }
        Domain::Integer => {
            if p > MAX_INTEGER_TRANSFORM_VARS {
                return Err(Error::TooManyVariables {
                    vars: p,
                    max: MAX_INTEGER_TRANSFORM_VARS,
                });
            }
            let mut product = Polynomial::constant(1, p);
            for pattern in 0u32..(1 << p) {
                let images: Vec<Polynomial> = (1..=p)
                    .map(|i| {
                        if pattern >> (i - 1) & 1 == 1 {
                            -&shifted(i)
                        } else {
                            shifted(i)
                        }
                    })
                    .collect();
                product = &product * &d.substitute(&images);
            }
            Ok(product)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjecturalBound {
    pub domain: Domain,
    /// Arity of the conjecture-form system.
    pub n: usize,
    pub bound: HeightBound,
    pub trace: ReductionTrace,
}

impl ConjecturalBound {
    /// The quantity the bound applies to, per domain.
    pub fn bounded_quantity(&self) -> &'static str {
        match self.domain {
            Domain::Positive => "x_i",
            Domain::Nonnegative => "x_i + 1",
            Domain::Integer => "|x_i| + 1",
        }
    }
}

/// Arity of the lowered system and `f` of it. Assuming the conjecture, and if
/// `d = 0` has finitely many solutions in `domain`, every solution satisfies
/// `bounded_quantity() <= f(n)`.
pub fn conjectural_bound(d: &Polynomial, domain: Domain) -> Result<ConjecturalBound> {
    let transformed = domain_transform(d, domain)?;
    let trace = to_conjecture_form(&transformed)?;
    let n = trace.n();
    Ok(ConjecturalBound {
        domain,
        n,
        bound: HeightBound::new(n)?,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Membership {
    /// A non-negative witness `(x1, ..., xm)` with `W(b, x) = 0`.
    Member { witness: Vec<String> },
    /// The whole box `[0, g(b)]^m` was searched.
    NonMember,
    /// `cap < g(b)` (or `g(b)` is unavailable) and no witness was found.
    Inconclusive { searched_edge: u64 },
}

/// Decides `b ∈ M` for `M = { b : W(b, x) = 0 for some x in N^m }` by
/// searching `[0, min(cap, g(b))]^m`, where `g(b) = f(n) - 1` comes from the
/// non-negative conjectural bound of `W(b, ·)`.
pub fn bounded_membership(w: &Polynomial, b: &BigUint, cap: u64) -> Result<Membership> {
    if w.nvars() == 0 {
        return Ok(if w.is_zero() {
            Membership::Member { witness: vec![] }
        } else {
            Membership::NonMember
        });
    }
    let fixed = w.specialize(1, &BigInt::from(b.clone()));
    let m = fixed.nvars();
    if fixed.is_zero() {
        return Ok(Membership::Member {
            witness: vec!["0".into(); m],
        });
    }
    if m == 0 {
        return Ok(Membership::NonMember);
    }
    // Only a finitely-soluble equation in every variable has a g(b).
    let g: Option<BigUint> = match conjectural_bound(&fixed, Domain::Nonnegative) {
        Ok(cb) if cb.bound.bits() <= 64 => cb.bound.value().ok().map(|f| f - 1u32),
        Ok(_) => None,
        Err(Error::MissingVariable(_)) => None,
        Err(e) => return Err(e),
    };
    let covered = g.as_ref().is_some_and(|g| *g <= BigUint::from(cap));
    let edge: u64 = match &g {
        Some(g) if covered => u64::try_from(g).expect("below cap"),
        _ => cap,
    };
    let mut point = vec![0u64; m];
    loop {
        let at: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
        if fixed.eval(&at).is_zero() {
            return Ok(Membership::Member {
                witness: point.iter().map(u64::to_string).collect(),
            });
        }
        // Odometer increment over [0, edge]^m.
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(if covered {
                    Membership::NonMember
                } else {
                    Membership::Inconclusive { searched_edge: edge }
                });
            }
            i -= 1;
            if point[i] < edge {
                point[i] += 1;
                break;
            }
            point[i] = 0;
        }
    }
}

/// Positive roots of `d` in `[1, edge]^p`, by direct evaluation.
pub fn positive_roots_in_box(d: &Polynomial, edge: u64) -> Vec<Vec<u64>> {
    let p = d.nvars();
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    let mut point = vec![1u64; p];
    loop {
        let at: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
        if d.eval(&at).is_zero() {
            out.push(point.clone());
        }
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if point[i] < edge {
                point[i] += 1;
                break;
            }
            point[i] = 1;
        }
    }
}

/// Sign helper for the integer transform: `|x| + 1` as the positive
/// representative of an integer root coordinate.
pub fn integer_to_positive(x: &BigInt) -> BigUint {
    x.abs().to_biguint().expect("non-negative") + 1u32
}
