//! Checking `Φ(c)`: every tuple `x` of arity `n` with `f(n) < max(x) <= c`
//! has an extension beyond `c`.

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::extension::{default_cap, search_extension};
use super::sigmask::{class_mask, signature_mask, Mask, MAX_MASK_ARITY};
use crate::bound::HeightBound;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::system::PosTuple;

/// Arity up to which a search that covered every feasible free value counts
/// as a refutation.
pub const MAX_REFUTATION_ARITY: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every tuple in `[1, c]^n`.
    #[default]
    Exhaustive,
    /// Sorted representatives `x1 <= ... <= xn`.
    Nondecreasing,
    /// Strictly increasing tuples only.
    Increasing,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "nondecreasing" => Ok(Mode::Nondecreasing),
            "increasing" => Ok(Mode::Increasing),
            other => Err(Error::Invalid(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhiOptions {
    pub mode: Mode,
    pub n_max: Option<usize>,
    /// Free-variable cap for propagation search; `2c + 2` when `None`.
    pub cap: Option<u64>,
    pub exec: Exec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArityRecord {
    pub n: usize,
    pub f_n: HeightBound,
    pub tuples_examined: u64,
    pub extensions_found: u64,
    /// Number of signatures up to relabeling among the examined tuples.
    pub signature_classes: usize,
    /// The classes themselves (smallest mask over orderings), sorted.
    #[serde(skip)]
    pub classes: Vec<Mask>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PhiStatus {
    Confirmed,
    /// `witness` has no extension at all.
    Refuted { witness: Vec<u64> },
    /// No extension for `tuple` within the cap.
    Inconclusive { cap: u64, tuple: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub c: u64,
    pub mode: Mode,
    pub n_max: Option<usize>,
    pub cap: u64,
    pub arities: Vec<ArityRecord>,
    #[serde(flatten)]
    pub status: PhiStatus,
    /// Excluded from serialization so reports diff cleanly.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn is_confirmed(&self) -> bool {
        self.status == PhiStatus::Confirmed
    }
}

/// Calls `visit` for each tuple of arity `n` with first entry `first` and
/// entries in `[1, c]`, in lexicographic order, respecting `mode`.
pub fn for_each_tuple(n: usize, c: u64, first: u64, mode: Mode, mut visit: impl FnMut(&[u64])) {
    fn fill(buf: &mut Vec<u64>, n: usize, c: u64, mode: Mode, visit: &mut dyn FnMut(&[u64])) {
        if buf.len() == n {
            visit(buf);
            return;
        }
        let prev = *buf.last().expect("first entry pushed");
        let lo = match mode {
            Mode::Exhaustive => 1,
            Mode::Nondecreasing => prev,
            Mode::Increasing => prev + 1,
        };
        for v in lo..=c {
            buf.push(v);
            fill(buf, n, c, mode, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(n);
    buf.push(first);
    fill(&mut buf, n, c, mode, &mut visit);
}

#[derive(Clone, Copy)]
struct Outcome {
    found: bool,
    exhaustive: bool,
    class: Mask,
}

#[derive(Default)]
struct Shard {
    examined: u64,
    found: u64,
    classes: BTreeSet<Mask>,
    refuted: Option<Vec<u64>>,
    inconclusive: Option<Vec<u64>>,
}

fn check_shard(n: usize, c: u64, f_n: u64, first: u64, mode: Mode, cap: u64) -> Shard {
    let mut cache: HashMap<Mask, Outcome> = HashMap::new();
    let mut shard = Shard::default();
    for_each_tuple(n, c, first, mode, |x| {
        if x.iter().copied().max().unwrap_or(0) <= f_n {
            return;
        }
        let mask = signature_mask(x);
        let outcome = *cache.entry(mask).or_insert_with(|| {
            let tuple = PosTuple::from_u64s(x).expect("entries are positive");
            let search = search_extension(&tuple, c, cap);
            Outcome {
                found: search.extension.is_some(),
                exhaustive: search.exhaustive,
                class: class_mask(x),
            }
        });
        shard.examined += 1;
        shard.classes.insert(outcome.class);
        if outcome.found {
            shard.found += 1;
        } else if outcome.exhaustive && n <= MAX_REFUTATION_ARITY {
            shard.refuted.get_or_insert_with(|| x.to_vec());
        } else {
            shard.inconclusive.get_or_insert_with(|| x.to_vec());
        }
    });
    shard
}

/// Checks `Φ(c)` for every arity `n` with `f(n) < c` (at most `n_max`).
pub fn verify_phi(c: u64, options: &PhiOptions) -> Result<VerificationReport> {
    if c < 2 {
        return Err(Error::ParameterTooSmall {
            name: "c",
            value: c as usize,
            min: 2,
        });
    }
    let started = Instant::now();
    let cap = options.cap.unwrap_or_else(|| default_cap(c));
    let mut arities = Vec::new();
    let mut refuted = None;
    let mut inconclusive = None;
    let mut n = 1;
    while options.n_max.is_none_or(|m| n <= m) {
        let f_n = HeightBound::new(n)?;
        if !f_n.less_than_u64(c) {
            break;
        }
        if n > MAX_MASK_ARITY {
            return Err(Error::ParameterTooLarge {
                name: "arity",
                value: n,
                max: MAX_MASK_ARITY,
            });
        }
        let f_small = u64::try_from(f_n.value()?).expect("below c");
        let shards = options
            .exec
            .map_range(1..c + 1, |first| check_shard(n, c, f_small, first, options.mode, cap));
        let mut record = ArityRecord {
            n,
            f_n,
            tuples_examined: 0,
            extensions_found: 0,
            signature_classes: 0,
            classes: Vec::new(),
        };
        let mut classes = BTreeSet::new();
        for shard in shards {
            record.tuples_examined += shard.examined;
            record.extensions_found += shard.found;
            classes.extend(shard.classes);
            if refuted.is_none() {
                refuted = shard.refuted;
            }
            if inconclusive.is_none() {
                inconclusive = shard.inconclusive;
            }
        }
        record.signature_classes = classes.len();
        record.classes = classes.into_iter().collect();
        arities.push(record);
        n += 1;
    }
    let status = match (refuted, inconclusive) {
        (Some(witness), _) => PhiStatus::Refuted { witness },
        (None, Some(tuple)) => PhiStatus::Inconclusive { cap, tuple },
        (None, None) => PhiStatus::Confirmed,
    };
    Ok(VerificationReport {
        c,
        mode: options.mode,
        n_max: options.n_max,
        cap,
        arities,
        status,
        wall_time: started.elapsed(),
    })
}
