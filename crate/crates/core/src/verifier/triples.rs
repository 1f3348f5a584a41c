//! Classification of the signatures `P(a1, a2, a3)` with `1 < a1 < a2 < a3`.
//!
//! Such a signature uses only `x1+1=x2`, `x2+1=x3`, `x1*x1=x2`, `x1*x1=x3`,
//! `x1*x2=x3` and `x2*x2=x3`, with at most one of the first and third and at
//! most one of the last three. This gives a 6 by 4 grid of candidate systems.

use num_bigint::BigUint;
use serde::Serialize;

use super::extension::search_extension;
use crate::poly::{parse_polynomial, Polynomial};
use crate::solver::enumerate_solutions;
use crate::system::{derive_signature, satisfies, EquationSystem, PosTuple, RelationAtom};

pub const ROW_LABELS: [&str; 6] = [
    "{}",
    "{x1+1=x2}",
    "{x1*x1=x2}",
    "{x2+1=x3}",
    "{x1+1=x2, x2+1=x3}",
    "{x1*x1=x2, x2+1=x3}",
];

pub const COLUMN_LABELS: [&str; 4] = ["{}", "{x1*x1=x3}", "{x1*x2=x3}", "{x2*x2=x3}"];

fn row_atoms(row: usize) -> Vec<RelationAtom> {
    use RelationAtom::*;
    match row {
        0 => vec![],
        1 => vec![Succ(1, 2)],
        2 => vec![Prod(1, 1, 2)],
        3 => vec![Succ(2, 3)],
        4 => vec![Succ(1, 2), Succ(2, 3)],
        5 => vec![Prod(1, 1, 2), Succ(2, 3)],
        _ => unreachable!(),
    }
}

fn column_atoms(col: usize) -> Vec<RelationAtom> {
    use RelationAtom::*;
    match col {
        0 => vec![],
        1 => vec![Prod(1, 1, 3)],
        2 => vec![Prod(1, 2, 3)],
        3 => vec![Prod(2, 2, 3)],
        _ => unreachable!(),
    }
}

/// Solution templates in `s, t, u` for the cells with infinitely many
/// solutions.
const TEMPLATES: [[Option<[&str; 3]>; 4]; 6] = [
    [
        Some(["s", "t", "u"]),
        Some(["s", "t", "s^2"]),
        Some(["s", "t", "s*t"]),
        Some(["s", "t", "t^2"]),
    ],
    [
        Some(["s", "s+1", "u"]),
        Some(["s", "s+1", "s^2"]),
        Some(["s", "s+1", "s*(s+1)"]),
        Some(["s", "s+1", "(s+1)^2"]),
    ],
    [
        Some(["s", "s^2", "u"]),
        None,
        Some(["s", "s^2", "s^3"]),
        Some(["s", "s^2", "s^4"]),
    ],
    [Some(["s", "t", "t+1"]), Some(["s", "s^2-1", "s^2"]), None, None],
    [Some(["s", "s+1", "s+2"]), None, None, None],
    [Some(["s", "s^2", "s^2+1"]), None, None, None],
];

/// Parameter samples per template.
pub const TEMPLATE_SAMPLES: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum CellClass {
    /// No `1 < a1 < a2 < a3 <= search_bound` has this signature.
    NotInF,
    /// The template solves the system with unbounded maximum.
    InfiniteFamily { template: String },
    /// The solutions found with free values up to the search bound.
    UniquelySolved { solutions: Vec<[u64; 3]>, exhaustive: bool },
    /// Realized, but neither a template nor a single solution.
    Unresolved { solutions_found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub row: usize,
    pub column: usize,
    pub system: String,
    /// Smallest triple (in lexicographic order) with this signature.
    pub realized_by: Option<[u64; 3]>,
    #[serde(flatten)]
    pub class: CellClass,
    #[serde(skip)]
    pub atoms: EquationSystem,
}

fn cell_system(row: usize, col: usize) -> EquationSystem {
    EquationSystem::from_atoms(3, row_atoms(row).into_iter().chain(column_atoms(col)))
        .expect("indices within 3")
}

fn template_holds(template: &[&str; 3], system: &EquationSystem) -> bool {
    let polys: Vec<Polynomial> = template
        .iter()
        .map(|c| {
            let text = c.replace('s', "x1").replace('t', "x2").replace('u', "x3");
            parse_polynomial(&text).expect("template parses").with_nvars(3)
        })
        .collect();
    let mut last_max: Option<BigUint> = None;
    for j in 0..TEMPLATE_SAMPLES {
        // s < t < s^2 < u keeps every template entry positive.
        let s = 3 + j;
        let t = s + 1;
        let u = t * t * t + j;
        let at = [s, t, u].map(num_bigint::BigInt::from);
        let values: Option<Vec<BigUint>> = polys.iter().map(|p| p.eval(&at).to_biguint()).collect();
        let Some(y) = values.and_then(|v| PosTuple::new(v).ok()) else {
            return false;
        };
        if !satisfies(&y, system).expect("arity three") {
            return false;
        }
        if last_max.as_ref().is_some_and(|m| y.max_entry() <= m) {
            return false;
        }
        last_max = Some(y.max_entry().clone());
    }
    true
}

fn first_realization(system: &EquationSystem, bound: u64) -> Option<[u64; 3]> {
    for a1 in 2..=bound {
        for a2 in a1 + 1..=bound {
            for a3 in a2 + 1..=bound {
                let x = PosTuple::from_u64s(&[a1, a2, a3]).expect("positive");
                if derive_signature(&x) == *system {
                    return Some([a1, a2, a3]);
                }
            }
        }
    }
    None
}

/// The 24 cells in row-major order. `search_bound` limits both the search
/// for realizing triples and the free values of the solution enumeration.
pub fn classify_triples(search_bound: u64) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(24);
    for row in 0..6 {
        for col in 0..4 {
            let system = cell_system(row, col);
            let realized_by = first_realization(&system, search_bound);
            let class = if realized_by.is_none() {
                CellClass::NotInF
            } else if let Some(t) = TEMPLATES[row][col].filter(|t| template_holds(t, &system)) {
                CellClass::InfiniteFamily {
                    template: format!("({})", t.join(", ")),
                }
            } else {
                let e = enumerate_solutions(&system, search_bound, None);
                let solutions: Vec<[u64; 3]> = e
                    .solutions
                    .iter()
                    .filter_map(|y| y.to_u64s().map(|v| [v[0], v[1], v[2]]))
                    .collect();
                if solutions.len() == 1 {
                    CellClass::UniquelySolved {
                        solutions,
                        exhaustive: e.exhaustive,
                    }
                } else {
                    CellClass::Unresolved {
                        solutions_found: solutions.len(),
                    }
                }
            };
            let label = match (row, col) {
                (0, 0) => "{}".to_string(),
                (0, c) => COLUMN_LABELS[c].to_string(),
                (r, 0) => ROW_LABELS[r].to_string(),
                (r, c) => format!("{} u {}", ROW_LABELS[r], COLUMN_LABELS[c]),
            };
            cells.push(Cell {
                row,
                column: col,
                system: label,
                realized_by,
                class,
                atoms: system,
            });
        }
    }
    cells
}

/// Triples `(1, a2, a3)` with `a3 <= bound` whose signature has no solution
/// with maximum above `bound` (free values up to `2 bound + 2`).
pub fn leading_one_without_extension(bound: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for a2 in 2..=bound {
        for a3 in a2 + 1..=bound {
            let x = PosTuple::from_u64s(&[1, a2, a3]).expect("positive");
            if search_extension(&x, bound, 2 * bound + 2).extension.is_none() {
                out.push([1, a2, a3]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let cells = classify_triples(40);
        assert_eq!(cells.len(), 24);
        let not_in_f = cells.iter().filter(|c| c.class == CellClass::NotInF).count();
        assert_eq!(not_in_f, 8);
    }

    #[test]
    fn unique_cell() {
        let cells = classify_triples(40);
        let unique: Vec<&Cell> = cells
            .iter()
            .filter(|c| matches!(c.class, CellClass::UniquelySolved { .. }))
            .collect();
        assert_eq!(unique.len(), 1);
        assert_eq!((unique[0].row, unique[0].column), (4, 1));
        assert_eq!(unique[0].realized_by, Some([2, 3, 4]));
    }

    #[test]
    fn leading_one() {
        assert_eq!(leading_one_without_extension(24), vec![[1, 2, 3], [1, 2, 4]]);
    }
}
