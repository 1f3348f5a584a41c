//! The 63 one-parameter families of quadruples, each with the canonical
//! quadruple it passes through. Every family value at `t >= t0` satisfies the
//! signature of its instance and the maximum grows with `t`.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::poly::{parse_polynomial, Polynomial};
use crate::system::PosTuple;

#[derive(Debug, Clone)]
pub struct ParametricFamily {
    /// 1-based position in the catalog.
    pub index: usize,
    /// Components as written, in the parameter `t`.
    pub components: [&'static str; 4],
    polys: [Polynomial; 4],
    pub instance: [u64; 4],
    /// The parameter value giving `instance`; the family is used for
    /// `t >= t0`.
    pub t0: u64,
}

impl ParametricFamily {
    /// The quadruple at `t`, or `None` if some entry is not positive.
    pub fn eval(&self, t: u64) -> Option<PosTuple> {
        let at = [BigInt::from(t)];
        let values: Option<Vec<BigUint>> = self
            .polys
            .iter()
            .map(|p| {
                let v = p.eval(&at);
                if v.is_positive() {
                    v.to_biguint()
                } else {
                    None
                }
            })
            .collect();
        PosTuple::new(values?).ok()
    }

    pub fn label(&self) -> String {
        format!("({})", self.components.join(", "))
    }
}

type Row = ([&'static str; 4], [u64; 4], u64);

const ROWS: [Row; 63] = [
    (["1", "2", "3", "t"], [1, 2, 3, 17], 17),
    (["1", "2", "4", "t"], [1, 2, 4, 17], 17),
    (["2", "3", "4", "t"], [2, 3, 4, 17], 17),
    (["t", "t+1", "t*(t+1)", "t*(t+1)^2"], [2, 3, 6, 18], 2),
    (["1", "2", "t", "2*t"], [1, 2, 9, 18], 9),
    (["1", "t", "t+1", "t*(t+1)"], [1, 4, 5, 20], 4),
    (["t", "t^2", "t^2+1", "t^2*(t^2+1)"], [2, 4, 5, 20], 2),
    (["t", "t+1", "(t+1)^2", "t*(t+1)^2"], [2, 3, 9, 18], 2),
    (["t", "t+1", "t+2", "(t+1)*(t+2)"], [3, 4, 5, 20], 3),
    (["1", "2", "t", "t^2"], [1, 2, 5, 25], 5),
    (["1", "t", "t+1", "(t+1)^2"], [1, 4, 5, 25], 4),
    (["t", "t+1", "t+2", "t*(t+1)"], [4, 5, 6, 20], 4),
    (["1", "2", "t", "t+1"], [1, 2, 16, 17], 16),
    (["t", "t^2", "t^2+1", "(t^2+1)^2"], [2, 4, 5, 25], 2),
    (["1", "t", "t+1", "t^2"], [1, 5, 6, 25], 5),
    (["t", "t+1", "t+2", "(t+2)^2"], [3, 4, 5, 25], 3),
    (["1", "t", "t^2", "t^2+1"], [1, 4, 16, 17], 4),
    (["t", "t^2", "t^4", "t^4+1"], [2, 4, 16, 17], 2),
    (["t", "t+1", "t+2", "t*(t+2)"], [4, 5, 6, 24], 4),
    (["1", "t", "t^2", "t^3"], [1, 3, 9, 27], 3),
    (["t", "t+1", "(t+1)^2", "(t+1)^2+1"], [3, 4, 16, 17], 3),
    (["t", "t+1", "t+2", "(t+1)^2"], [4, 5, 6, 25], 4),
    (["t", "t+1", "(t+1)^2", "(t+1)^3"], [2, 3, 9, 27], 2),
    (["t", "t+1", "t^2", "t^2+1"], [4, 5, 16, 17], 4),
    (["t", "t+1", "t^2", "t^3"], [3, 4, 9, 27], 3),
    (["t", "t+1", "t+2", "t^2"], [5, 6, 7, 25], 5),
    (["t", "t^2-1", "t^2", "t*(t^2-1)"], [3, 8, 9, 24], 3),
    (["t", "t+1", "t^2", "t*(t+1)"], [4, 5, 16, 20], 4),
    (["t", "t^2", "t^3", "t^5"], [2, 4, 8, 32], 2),
    (["t", "t+1", "t*(t+1)", "t^2*(t+1)^2"], [2, 3, 6, 36], 2),
    (["t", "t^2-1", "t^2", "t^3"], [3, 8, 9, 27], 3),
    (["t", "t+1", "t*(t+1)-1", "t*(t+1)"], [4, 5, 19, 20], 4),
    (["1", "t", "t+1", "t+2"], [1, 15, 16, 17], 15),
    (["t", "t^2", "t^2+1", "t^3"], [3, 9, 10, 27], 3),
    (["t", "t+1", "t^2", "(t+1)^2"], [4, 5, 16, 25], 4),
    (["t", "t+1", "t*(t+1)", "t*(t+1)+1"], [4, 5, 20, 21], 4),
    (["t", "t+1", "t^2", "(t+1)*t^2"], [3, 4, 9, 36], 3),
    (["t", "t^2", "t^2+1", "t*(t^2+1)"], [3, 9, 10, 30], 3),
    (["t", "t^2-1", "t^2", "t^2+1"], [4, 15, 16, 17], 4),
    (["t", "t^2", "t^4", "t^5"], [2, 4, 16, 32], 2),
    (["t", "t+1", "t*(t+1)", "(t+1)^2"], [4, 5, 20, 25], 4),
    (["1", "t", "t^2-1", "t^2"], [1, 5, 24, 25], 5),
    (["t", "t+1", "t*(t+1)", "t^2*(t+1)"], [3, 4, 12, 36], 3),
    (["t", "t^2", "t^2+1", "t^2+2"], [4, 16, 17, 18], 4),
    (["t", "t+1", "(t+1)^2-1", "(t+1)^2"], [4, 5, 24, 25], 4),
    (["t", "t+1", "t^2-1", "t^2"], [5, 6, 24, 25], 5),
    (["t", "t+1", "t+2", "t+3"], [14, 15, 16, 17], 14),
    (["t", "t^2", "t^3-1", "t^3"], [3, 9, 26, 27], 3),
    (["t", "t^2", "t^3", "t^3+1"], [3, 9, 27, 28], 3),
    (["t", "t^2-2", "t^2-1", "t^2"], [5, 23, 24, 25], 5),
    (["t", "t^2", "t^3", "t^6"], [2, 4, 8, 64], 2),
    (["t", "t^2-1", "t^2", "(t^2-1)^2"], [3, 8, 9, 64], 3),
    (["t", "t^2", "t^4", "t^6"], [2, 4, 16, 64], 2),
    (["t", "t^2-1", "t^2", "(t^2-1)*t^2"], [3, 8, 9, 72], 3),
    (["t^2", "t^3", "t^4", "t^6"], [4, 8, 16, 64], 2),
    (["1", "t", "t^2", "t^4"], [1, 3, 9, 81], 3),
    (["t", "t+1", "(t+1)^2", "(t+1)^4"], [2, 3, 9, 81], 2),
    (["t", "t+1", "t^2", "t^4"], [3, 4, 9, 81], 3),
    (["t", "t^2-1", "t^2", "t^4"], [3, 8, 9, 81], 3),
    (["t", "t^2", "t^2+1", "t^4"], [3, 9, 10, 81], 3),
    (["t", "t^2", "t^3", "t^4"], [3, 9, 27, 81], 3),
    (["t", "t^2", "t^4-1", "t^4"], [3, 9, 80, 81], 3),
    (["t", "t^2", "t^4", "t^8"], [2, 4, 16, 256], 2),
];

fn build() -> Vec<ParametricFamily> {
    ROWS.iter()
        .enumerate()
        .map(|(i, &(components, instance, t0))| {
            let polys = components.map(|c| {
                parse_polynomial(&c.replace('t', "x1"))
                    .expect("catalog entries parse")
                    .with_nvars(1)
            });
            ParametricFamily {
                index: i + 1,
                components,
                polys,
                instance,
                t0,
            }
        })
        .collect()
}

/// The shared, immutable catalog.
pub fn family_catalog() -> &'static [ParametricFamily] {
    static CATALOG: OnceLock<Vec<ParametricFamily>> = OnceLock::new();
    CATALOG.get_or_init(build)
}
