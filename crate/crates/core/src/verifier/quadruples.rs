//! Canonical quadruples: a small set of strictly increasing quadruples whose
//! signatures contain the signature of every strictly increasing quadruple
//! `a < b < c < d <= limit` with `d > 16`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::Serialize;

use super::families::family_catalog;
use super::sigmask::{is_dominated, signature_mask, Mask};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::system::{derive_signature, satisfies};

/// Quadruples with maximum at most this are covered by smaller arities.
pub const SMALL_MAX: u64 = 16;

/// Parameter values checked per family.
pub const FAMILY_SAMPLES: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CanonicalQuadruple {
    pub quadruple: [u64; 4],
    #[serde(skip)]
    pub mask: Mask,
}

/// First occurrence of each signature: loop key `(b, c, l)` and quadruple.
type FirstSeen = HashMap<Mask, ((u64, u64, usize), [u64; 4])>;

/// Candidates are `{a, b, c, y}` for `a, b, c` in `[1, limit]` and `y` in
/// `{1, a + 1, a^2, ab}`, sorted, with four distinct entries and maximum in
/// `(16, limit]`. The first candidate (in loop order) of each signature is
/// kept; kept candidates whose signature is strictly contained in another
/// kept signature are dropped. Result sorted.
pub fn canonical_quadruples(limit: u64, exec: Exec) -> Result<Vec<CanonicalQuadruple>> {
    if limit <= SMALL_MAX {
        return Err(Error::ParameterTooSmall {
            name: "limit",
            value: limit as usize,
            min: SMALL_MAX as usize + 1,
        });
    }
    // Per `a`: first occurrence of each signature, keyed by (b, c, l).
    let shards = exec.map_range(1..limit + 1, |a| {
        let mut first = FirstSeen::new();
        for b in 1..=limit {
            for c in 1..=limit {
                let candidates = [1, a + 1, a * a, a * b];
                for (l, &y) in candidates.iter().enumerate() {
                    let mut x = [a, b, c, y];
                    x.sort_unstable();
                    if x[0] == x[1] || x[1] == x[2] || x[2] == x[3] {
                        continue;
                    }
                    if x[3] <= SMALL_MAX || x[3] > limit {
                        continue;
                    }
                    first
                        .entry(signature_mask(&x))
                        .or_insert(((b, c, l), x));
                }
            }
        }
        let mut found: Vec<_> = first.into_iter().collect();
        found.sort_by_key(|&(_, (key, _))| key);
        found
    });
    let mut seen = BTreeSet::new();
    let mut kept: Vec<(Mask, [u64; 4])> = Vec::new();
    for shard in shards {
        for (mask, (_, x)) in shard {
            if seen.insert(mask) {
                kept.push((mask, x));
            }
        }
    }
    let mut out: Vec<CanonicalQuadruple> = kept
        .iter()
        .filter(|&&(m, _)| {
            !kept
                .iter()
                .any(|&(other, _)| other != m && is_dominated(m, other))
        })
        .map(|&(mask, quadruple)| CanonicalQuadruple { quadruple, mask })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyFailure {
    pub family: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub limit: u64,
    pub canonical: usize,
    pub quadruples_scanned: u64,
    /// Increasing quadruples whose signature no canonical signature contains.
    pub undominated: Vec<[u64; 4]>,
    /// Canonical quadruples whose signature no catalog instance contains.
    pub uncatalogued: Vec<[u64; 4]>,
    pub family_failures: Vec<FamilyFailure>,
}

impl CoverageReport {
    pub fn ok(&self) -> bool {
        self.undominated.is_empty() && self.uncatalogued.is_empty() && self.family_failures.is_empty()
    }
}

/// Each family reproduces its instance at `t0` and, for `FAMILY_SAMPLES`
/// consecutive values from `t0`, yields quadruples satisfying the instance's
/// signature with strictly growing maximum.
pub fn check_families() -> Vec<FamilyFailure> {
    let mut failures = Vec::new();
    for family in family_catalog() {
        let fail = |reason: String| FamilyFailure {
            family: family.index,
            reason,
        };
        let at_t0 = family.eval(family.t0).and_then(|y| y.to_u64s());
        if at_t0.as_deref() != Some(&family.instance[..]) {
            failures.push(fail(format!("t0 = {} does not give the instance", family.t0)));
            continue;
        }
        let signature = derive_signature(
            &crate::system::PosTuple::from_u64s(&family.instance).expect("positive"),
        );
        let mut last_max: Option<BigUint> = None;
        for t in family.t0..family.t0 + FAMILY_SAMPLES {
            let Some(y) = family.eval(t) else {
                failures.push(fail(format!("non-positive entry at t = {t}")));
                break;
            };
            if !satisfies(&y, &signature).expect("arity four") {
                failures.push(fail(format!("({y}) misses the instance signature at t = {t}")));
                break;
            }
            if last_max.as_ref().is_some_and(|m| y.max_entry() <= m) {
                failures.push(fail(format!("maximum does not grow at t = {t}")));
                break;
            }
            last_max = Some(y.max_entry().clone());
        }
    }
    failures
}

/// Scans every `a < b < c < d <= limit` with `d > 16` for a canonical
/// signature containing its own, and checks the family catalog.
pub fn verify_coverage(limit: u64, exec: Exec) -> Result<CoverageReport> {
    let canonical = canonical_quadruples(limit, exec)?;
    let masks: Vec<Mask> = canonical.iter().map(|q| q.mask).collect();
    let shards = exec.map_range(1..limit + 1, |a| {
        let mut cache: HashMap<Mask, bool> = HashMap::new();
        let mut scanned = 0u64;
        let mut missing = Vec::new();
        for b in a + 1..=limit {
            for c in b + 1..=limit {
                for d in (c + 1).max(SMALL_MAX + 1)..=limit {
                    let x = [a, b, c, d];
                    scanned += 1;
                    let m = signature_mask(&x);
                    let covered = *cache
                        .entry(m)
                        .or_insert_with(|| masks.iter().any(|&q| is_dominated(m, q)));
                    if !covered {
                        missing.push(x);
                    }
                }
            }
        }
        (scanned, missing)
    });
    let mut quadruples_scanned = 0;
    let mut undominated = Vec::new();
    for (scanned, missing) in shards {
        quadruples_scanned += scanned;
        undominated.extend(missing);
    }
    let catalog: Vec<Mask> = family_catalog()
        .iter()
        .map(|f| signature_mask(&f.instance))
        .collect();
    let uncatalogued = canonical
        .iter()
        .filter(|q| !catalog.iter().any(|&f| is_dominated(q.mask, f)))
        .map(|q| q.quadruple)
        .collect();
    Ok(CoverageReport {
        limit,
        canonical: canonical.len(),
        quadruples_scanned,
        undominated,
        uncatalogued,
        family_failures: check_families(),
    })
}
