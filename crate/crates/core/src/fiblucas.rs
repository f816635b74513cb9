//! Fibonacci and Lucas numbers, their square classifications, and the
//! identities `4F_k - F_{k-2e} = L_{k+e}`, `4L_k - L_{k-2e} = 5F_{k+e}`.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, Integer};
use crate::decimal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibError {
    #[error("shifted index {0} is negative")]
    NegativeIndex(i64),
    #[error("epsilon must be +1 or -1, got {0}")]
    BadEpsilon(i8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Fib,
    Lucas,
}

/// `(F_k, F_{k+1})` by fast doubling.
fn fib_pair(k: u64) -> (Integer, Integer) {
    if k == 0 {
        return (Integer::zero(), Integer::one());
    }
    let (a, b) = fib_pair(k / 2);
    // F_2n = F_n (2F_{n+1} - F_n), F_{2n+1} = F_n^2 + F_{n+1}^2
    let c = &a * (&b * 2u32 - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

pub fn fibonacci(k: u64) -> Integer {
    fib_pair(k).0
}

pub fn lucas(k: u64) -> Integer {
    // L_k = 2F_{k+1} - F_k
    let (f, g) = fib_pair(k);
    g * 2u32 - f
}

/// `F_0..=F_n` and `L_0..=L_n` by the plain recurrences.
pub struct Table {
    pub fib: Vec<Integer>,
    pub lucas: Vec<Integer>,
}

impl Table {
    pub fn new(n: usize) -> Self {
        let mut fib = vec![Integer::zero(), Integer::one()];
        let mut lucas = vec![Integer::from(2), Integer::one()];
        for k in 2..=n.max(1) {
            fib.push(&fib[k - 1] + &fib[k - 2]);
            lucas.push(&lucas[k - 1] + &lucas[k - 2]);
        }
        fib.truncate(n + 1);
        lucas.truncate(n + 1);
        Table { fib, lucas }
    }

    pub fn get(&self, kind: Kind) -> &[Integer] {
        match kind {
            Kind::Fib => &self.fib,
            Kind::Lucas => &self.lucas,
        }
    }
}

/// Indices `k <= max_k` whose term is a perfect square.
pub fn square_terms(kind: Kind, max_k: u64) -> BTreeSet<u64> {
    let table = Table::new(max_k as usize);
    table
        .get(kind)
        .iter()
        .enumerate()
        .filter(|(_, v)| arith::is_square(v).is_some())
        .map(|(k, _)| k as u64)
        .collect()
}

/// Indices `k <= max_k` with `F_k = 5x^2`, `x >= 1`. `F_0 = 5*0^2` is left
/// out.
pub fn five_square_terms(max_k: u64) -> BTreeSet<u64> {
    let table = Table::new(max_k as usize);
    table
        .fib
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| {
            let (q, r) = v.div_rem(&Integer::from(5));
            r.is_zero() && !q.is_zero() && arith::is_square(&q).is_some()
        })
        .map(|(k, _)| k as u64)
        .collect()
}

/// Both sides of the two shifted-index identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub k: u64,
    pub epsilon: i8,
    /// `4F_k - F_{k-2e}`
    #[serde(with = "decimal")]
    pub fib_lhs: Integer,
    /// `L_{k+e}`
    #[serde(with = "decimal")]
    pub fib_rhs: Integer,
    /// `4L_k - L_{k-2e}`
    #[serde(with = "decimal")]
    pub lucas_lhs: Integer,
    /// `5F_{k+e}`
    #[serde(with = "decimal")]
    pub lucas_rhs: Integer,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.fib_lhs == self.fib_rhs && self.lucas_lhs == self.lucas_rhs
    }
}

fn shifted_indices(k: u64, epsilon: i8) -> Result<(u64, u64), FibError> {
    if epsilon != 1 && epsilon != -1 {
        return Err(FibError::BadEpsilon(epsilon));
    }
    let lower = k as i64 - 2 * epsilon as i64;
    let upper = k as i64 + epsilon as i64;
    if lower < 0 || upper < 0 {
        return Err(FibError::NegativeIndex(lower.min(upper)));
    }
    Ok((lower as u64, upper as u64))
}

pub fn identity_check(k: u64, epsilon: i8) -> Result<IdentityReport, FibError> {
    let (lower, upper) = shifted_indices(k, epsilon)?;
    Ok(IdentityReport {
        k,
        epsilon,
        fib_lhs: fibonacci(k) * 4u32 - fibonacci(lower),
        fib_rhs: lucas(upper),
        lucas_lhs: lucas(k) * 4u32 - lucas(lower),
        lucas_rhs: fibonacci(upper) * 5u32,
    })
}

/// Runs [`identity_check`] for every `k` in `0..=max_k` and both signs of
/// epsilon where the lower index is defined, reusing one precomputed table.
/// Returns the failing `(k, epsilon)` pairs.
pub fn identity_sweep(max_k: u64) -> Vec<(u64, i8)> {
    let table = Table::new(max_k as usize + 2);
    let (f, l) = (&table.fib, &table.lucas);
    let mut failures = Vec::new();
    for k in 0..=max_k {
        for eps in [1i8, -1] {
            let Ok((lo, up)) = shifted_indices(k, eps) else {
                continue;
            };
            let (k, lo, up) = (k as usize, lo as usize, up as usize);
            let ok = &f[k] * 4u32 - &f[lo] == l[up] && &l[k] * 4u32 - &l[lo] == &f[up] * 5u32;
            if !ok {
                failures.push((k as u64, eps));
            }
        }
    }
    failures
}
