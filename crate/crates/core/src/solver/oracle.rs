//! Exhaustive search used to cross-check solver verdicts.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, Integer};
use crate::decimal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteSolution {
    #[serde(with = "decimal")]
    pub x: Integer,
    #[serde(with = "decimal")]
    pub y: Integer,
    pub m: u32,
}

/// Every `(x, y, m)` with `2 <= y <= y_max`, `0 <= m <= m_max`, `x >= 1`,
/// `gcd(x, y) = 1` and `c x^2 + p^(2m) = 4 y^n`, ordered by `y` then `m`.
///
/// Iterates over `y` and `m` and recovers `x` as an exact square root, so no
/// bound on `x` is needed. The `y` range is split across threads; the merge
/// keeps the ascending order.
pub fn brute_force_solutions(
    c: &Integer,
    p: &Integer,
    n: u32,
    m_max: u32,
    y_max: u64,
) -> Vec<BruteSolution> {
    brute_force_range(c, p, n, m_max, 2, y_max)
}

/// [`brute_force_solutions`] restricted to `y_min <= y <= y_max` (and `y >= 2`).
pub fn brute_force_range(
    c: &Integer,
    p: &Integer,
    n: u32,
    m_max: u32,
    y_min: u64,
    y_max: u64,
) -> Vec<BruteSolution> {
    if !c.is_positive() || y_max < 2 {
        return Vec::new();
    }
    let p2 = p * p;
    let mut p_powers = Vec::with_capacity(m_max as usize + 1);
    let mut acc = Integer::one();
    for _ in 0..=m_max {
        p_powers.push(acc.clone());
        acc *= &p2;
    }

    (y_min.max(2)..=y_max)
        .into_par_iter()
        .flat_map_iter(|y| {
            let y = Integer::from(y);
            let four_yn = num_traits::pow(y.clone(), n as usize) * 4u32;
            let mut found = Vec::new();
            for (m, pp) in p_powers.iter().enumerate() {
                let diff = &four_yn - pp;
                if !diff.is_positive() {
                    // p^(2m) only grows with m (|p| >= 2); for |p| <= 1 it is
                    // constant and the same test would fail again.
                    break;
                }
                let (quot, rem) = num_integer::Integer::div_rem(&diff, c);
                if !rem.is_zero() {
                    continue;
                }
                let Some(x) = arith::is_square(&quot) else {
                    continue;
                };
                if x.is_zero() || !arith::gcd(&x, &y).is_one() {
                    continue;
                }
                found.push(BruteSolution {
                    x,
                    y: y.clone(),
                    m: m as u32,
                });
            }
            found
        })
        .collect()
}
