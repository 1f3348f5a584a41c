//! Relation atoms, equation systems over indexed variables, positive tuples
//! and the signature of a tuple.
//!
//! Variable indices are 1-based throughout, matching the `x1, x2, ...`
//! notation of the text format.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One equation over indexed variables.
///
/// `Add` and `Prod` are commutative in their first two slots; the canonical
/// form keeps `i <= j`. Use [`RelationAtom::canonical`] (or the helper
/// constructors) before comparing atoms built by hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationAtom {
    /// `x_k = 1`
    Unit(usize),
    /// `x_i + 1 = x_k`
    Succ(usize, usize),
    /// `x_i + x_j = x_k`
    Add(usize, usize, usize),
    /// `x_i * x_j = x_k`
    Prod(usize, usize, usize),
}

impl RelationAtom {
    pub fn unit(k: usize) -> Self {
        RelationAtom::Unit(k)
    }

    pub fn succ(i: usize, k: usize) -> Self {
        RelationAtom::Succ(i, k)
    }

    pub fn add(i: usize, j: usize, k: usize) -> Self {
        RelationAtom::Add(i.min(j), i.max(j), k)
    }

    pub fn prod(i: usize, j: usize, k: usize) -> Self {
        RelationAtom::Prod(i.min(j), i.max(j), k)
    }

    pub fn canonical(self) -> Self {
        match self {
            RelationAtom::Add(i, j, k) => RelationAtom::add(i, j, k),
            RelationAtom::Prod(i, j, k) => RelationAtom::prod(i, j, k),
            other => other,
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        let (a, b, c) = match *self {
            RelationAtom::Unit(k) => (k, k, k),
            RelationAtom::Succ(i, k) => (i, k, k),
            RelationAtom::Add(i, j, k) | RelationAtom::Prod(i, j, k) => (i, j, k),
        };
        [a, b, c].into_iter()
    }

    pub fn max_index(&self) -> usize {
        self.indices().max().unwrap_or(0)
    }

    /// Successor and product atoms are the only ones allowed in a
    /// conjecture-form system.
    pub fn is_conjecture_form(&self) -> bool {
        matches!(self, RelationAtom::Succ(..) | RelationAtom::Prod(..))
    }

    /// Applies `map` to every index and re-canonicalizes.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        match *self {
            RelationAtom::Unit(k) => RelationAtom::Unit(map(k)),
            RelationAtom::Succ(i, k) => RelationAtom::Succ(map(i), map(k)),
            RelationAtom::Add(i, j, k) => RelationAtom::add(map(i), map(j), map(k)),
            RelationAtom::Prod(i, j, k) => RelationAtom::prod(map(i), map(j), map(k)),
        }
    }

    /// Evaluates the atom under a full assignment (`values[0]` is `x1`).
    pub fn holds(&self, values: &[BigUint]) -> bool {
        let v = |i: usize| &values[i - 1];
        match *self {
            RelationAtom::Unit(k) => v(k).is_one(),
            RelationAtom::Succ(i, k) => v(i) + 1u32 == *v(k),
            RelationAtom::Add(i, j, k) => v(i) + v(j) == *v(k),
            RelationAtom::Prod(i, j, k) => v(i) * v(j) == *v(k),
        }
    }
}

impl fmt::Display for RelationAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RelationAtom::Unit(k) => write!(f, "x{k} = 1"),
            RelationAtom::Succ(i, k) => write!(f, "x{i} + 1 = x{k}"),
            RelationAtom::Add(i, j, k) => write!(f, "x{i} + x{j} = x{k}"),
            RelationAtom::Prod(i, j, k) => write!(f, "x{i} * x{j} = x{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// Any of unit, successor, addition and product atoms.
    General,
    /// Successor and product atoms only.
    ConjectureForm,
}

/// A finite set of atoms over `n` variables.
///
/// The arity is explicit, so variables that occur in no atom are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquationSystem {
    n: usize,
    atoms: BTreeSet<RelationAtom>,
}

impl EquationSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(Self {
            n,
            atoms: BTreeSet::new(),
        })
    }

    pub fn from_atoms(n: usize, atoms: impl IntoIterator<Item = RelationAtom>) -> Result<Self> {
        let mut system = Self::new(n)?;
        for atom in atoms {
            system.insert(atom)?;
        }
        Ok(system)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &BTreeSet<RelationAtom> {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &RelationAtom) -> bool {
        self.atoms.contains(&atom.canonical())
    }

    /// Inserts the canonical form of `atom`; returns whether it was new.
    pub fn insert(&mut self, atom: RelationAtom) -> Result<bool> {
        for index in atom.indices() {
            if index == 0 {
                return Err(Error::ZeroIndex);
            }
            if index > self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok(self.atoms.insert(atom.canonical()))
    }

    pub fn remove(&mut self, atom: &RelationAtom) -> bool {
        self.atoms.remove(&atom.canonical())
    }

    /// Appends `extra` fresh variables and returns the index of the first.
    pub fn add_variables(&mut self, extra: usize) -> usize {
        let first = self.n + 1;
        self.n += extra;
        first
    }

    pub fn stage(&self) -> Stage {
        if self.atoms.iter().all(RelationAtom::is_conjecture_form) {
            Stage::ConjectureForm
        } else {
            Stage::General
        }
    }

    pub fn count_where(&self, pred: impl Fn(&RelationAtom) -> bool) -> usize {
        self.atoms.iter().filter(|a| pred(a)).count()
    }

    /// Relabels variables by `perm`, where variable `i` becomes `perm[i - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        Self::from_atoms(self.n, self.atoms.iter().map(|a| a.relabel(|i| perm[i - 1])))
    }

    /// Serializes to the line-oriented text format (always with a `vars` line).
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.n)?;
        for atom in &self.atoms {
            writeln!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl FromStr for EquationSystem {
    type Err = Error;

    /// Parses the text format.
    ///
    /// Accepted lines: `vars <n>` (before any atom), `x<i> = 1`,
    /// `x<i> + 1 = x<k>`, `x<i> + x<j> = x<k>`, `x<i> * x<j> = x<k>`, blank
    /// lines, and `#` comments. Without a `vars` line the arity is the largest
    /// index used.
    fn from_str(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut atoms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let compact: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if compact.is_empty() || compact.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::SystemSyntax { line, message };
            if let Some(rest) = compact.strip_prefix("vars") {
                if declared.is_some() || !atoms.is_empty() {
                    return Err(err("`vars` must be the first directive".into()));
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| err(format!("bad variable count `{rest}`")))?;
                if n == 0 {
                    return Err(err("variable count must be positive".into()));
                }
                declared = Some(n);
                continue;
            }
            atoms.push(parse_atom(&compact).map_err(err)?);
        }
        let n = match declared {
            Some(n) => n,
            None => atoms
                .iter()
                .map(RelationAtom::max_index)
                .max()
                .ok_or_else(|| Error::SystemSyntax {
                    line: 0,
                    message: "empty system needs a `vars` line".into(),
                })?,
        };
        Self::from_atoms(n, atoms)
    }
}

fn parse_var(token: &str) -> std::result::Result<usize, String> {
    let digits = token
        .strip_prefix('x')
        .ok_or_else(|| format!("expected a variable, found `{token}`"))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad variable `{token}`"));
    }
    let index: usize = digits.parse().map_err(|_| format!("bad variable `{token}`"))?;
    if index == 0 {
        return Err("variable indices start at 1".into());
    }
    Ok(index)
}

fn parse_atom(compact: &str) -> std::result::Result<RelationAtom, String> {
    let (lhs, rhs) = compact
        .split_once('=')
        .ok_or_else(|| format!("expected `=` in `{compact}`"))?;
    if rhs == "1" {
        return Ok(RelationAtom::Unit(parse_var(lhs)?));
    }
    let k = parse_var(rhs)?;
    if let Some((a, b)) = lhs.split_once('*') {
        return Ok(RelationAtom::prod(parse_var(a)?, parse_var(b)?, k));
    }
    if let Some((a, b)) = lhs.split_once('+') {
        let i = parse_var(a)?;
        if b == "1" {
            return Ok(RelationAtom::Succ(i, k));
        }
        return Ok(RelationAtom::add(i, parse_var(b)?, k));
    }
    Err(format!("unrecognized equation `{compact}`"))
}

/// A non-empty tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosTuple(Vec<BigUint>);

impl PosTuple {
    pub fn new(values: Vec<BigUint>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroArity);
        }
        if let Some(position) = values.iter().position(Zero::is_zero) {
            return Err(Error::NonPositiveEntry {
                position: position + 1,
                value: "0".into(),
            });
        }
        Ok(Self(values))
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_values(self) -> Vec<BigUint> {
        self.0
    }

    pub fn max_entry(&self) -> &BigUint {
        self.0.iter().max().expect("tuple is non-empty")
    }

    /// Entries as `u64` when every entry fits.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|v| u64::try_from(v).ok()).collect()
    }

    /// Tuple whose `perm[i - 1]`-th entry is this tuple's `i`-th entry.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: perm.len(),
            });
        }
        let mut out = vec![BigUint::zero(); self.arity()];
        for (i, value) in self.0.iter().enumerate() {
            out[perm[i] - 1] = value.clone();
        }
        Self::new(out)
    }
}

impl fmt::Display for PosTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for PosTuple {
    type Err = Error;

    /// Comma-separated positive integers, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = inner
            .split(',')
            .enumerate()
            .map(|(i, part)| {
                part.trim()
                    .parse::<BigUint>()
                    .map_err(|_| Error::NonPositiveEntry {
                        position: i + 1,
                        value: part.trim().to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// The signature `P(a)`: every successor and product relation that holds
/// among the entries of `a`, as a conjecture-form system over `a.arity()`
/// variables.
pub fn derive_signature(a: &PosTuple) -> EquationSystem {
    let v = a.values();
    let n = v.len();
    let mut system = EquationSystem::new(n).expect("tuple is non-empty");
    let succs: Vec<BigUint> = v.iter().map(|x| x + 1u32).collect();
    for i in 0..n {
        for k in 0..n {
            if succs[i] == v[k] {
                system.atoms.insert(RelationAtom::Succ(i + 1, k + 1));
            }
        }
        for j in i..n {
            let product = &v[i] * &v[j];
            for k in 0..n {
                if product == v[k] {
                    system.atoms.insert(RelationAtom::Prod(i + 1, j + 1, k + 1));
                }
            }
        }
    }
    system
}

/// Whether `x` solves every atom of `system`.
pub fn satisfies(x: &PosTuple, system: &EquationSystem) -> Result<bool> {
    if x.arity() != system.n() {
        return Err(Error::ArityMismatch {
            expected: system.n(),
            found: x.arity(),
        });
    }
    Ok(system.atoms().iter().all(|atom| atom.holds(x.values())))
}

/// Whether every atom of `smaller` also belongs to `larger`.
pub fn is_subsystem(smaller: &EquationSystem, larger: &EquationSystem) -> Result<bool> {
    if smaller.n() != larger.n() {
        return Err(Error::ArityMismatch {
            expected: smaller.n(),
            found: larger.n(),
        });
    }
    Ok(smaller.atoms().is_subset(larger.atoms()))
}
