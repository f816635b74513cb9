//! Lehmer pairs, Lehmer numbers and primitive divisors.
//!
//! A pair is described by its parameters `a = (alpha + beta)^2` and
//! `b = (alpha - beta)^2`, so `alpha*beta = (a - b)/4`. Lehmer numbers are
//! computed two ways: an integer recurrence, and exact powering in the ring
//! `Z[s][X]/(X^2 - sX + Q)` with `s^2 = a`, `Q = alpha*beta`.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, FactorBudget, Integer};
use crate::decimal;
use crate::fiblucas;

/// Indices `d` with `phi(d) <= 4`. A root of unity in a field of degree at
/// most four has one of these orders.
const SMALL_ROOT_ORDERS: [u32; 9] = [1, 2, 3, 4, 5, 6, 8, 10, 12];

/// Odd primes in `[7, 29]` whose defect list is empty.
const EMPTY_DEFECT_PRIMES: [u32; 5] = [11, 17, 19, 23, 29];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LehmerError {
    #[error("({a}, {b}) are not Lehmer parameters: {reason}")]
    InvalidParams {
        a: Integer,
        b: Integer,
        reason: &'static str,
    },
    #[error("index must be at least {min}, got {ell}")]
    IndexTooSmall { ell: u32, min: u32 },
    #[error("no defect classification available for index {0}")]
    UnsupportedIndex(u32),
    #[error("ring power has a non-zero irrational component at index {0}")]
    NotRational(u32),
}

/// Validated parameters `(a, b)` of a Lehmer pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LehmerParams {
    #[serde(with = "decimal")]
    a: Integer,
    #[serde(with = "decimal")]
    b: Integer,
}

impl fmt::Display for LehmerParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl LehmerParams {
    pub fn new(a: Integer, b: Integer) -> Result<Self, LehmerError> {
        let invalid = |reason| LehmerError::InvalidParams {
            a: a.clone(),
            b: b.clone(),
            reason,
        };
        if a.is_zero() || b.is_zero() {
            return Err(invalid("a and b must be non-zero"));
        }
        if a == b {
            return Err(invalid("a = b makes alpha*beta vanish"));
        }
        let diff = &a - &b;
        if !diff.is_multiple_of(&Integer::from(4)) {
            return Err(invalid("a and b must agree mod 4"));
        }
        let q = diff / 4;
        if !arith::gcd(&a, &q).is_one() {
            return Err(invalid("(alpha+beta)^2 and alpha*beta are not coprime"));
        }
        let raw = LehmerParams { a, b };
        let seq = raw.sequence(12);
        if SMALL_ROOT_ORDERS.iter().any(|&d| seq[d as usize].is_zero()) {
            return Err(LehmerError::InvalidParams {
                a: raw.a,
                b: raw.b,
                reason: "alpha/beta is a root of unity",
            });
        }
        Ok(raw)
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self, LehmerError> {
        Self::new(Integer::from(a), Integer::from(b))
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    /// `alpha * beta = (a - b) / 4`.
    pub fn product(&self) -> Integer {
        (&self.a - &self.b) / 4
    }

    /// `L_0, ..., L_n` by the recurrence
    /// `L_{k+2} = a L_{k+1} - Q L_k` for odd `k + 2`, `L_{k+1} - Q L_k` for even.
    fn sequence(&self, n: u32) -> Vec<Integer> {
        let q = self.product();
        let mut seq = Vec::with_capacity(n as usize + 1);
        seq.push(Integer::zero());
        if n == 0 {
            return seq;
        }
        seq.push(Integer::one());
        for k in 2..=n as usize {
            let prev = &seq[k - 1];
            let lead = if k % 2 == 1 { &self.a * prev } else { prev.clone() };
            let next = lead - &q * &seq[k - 2];
            seq.push(next);
        }
        seq
    }
}

/// `L_ell(alpha, beta)` via the integer recurrence.
pub fn lehmer_number(params: &LehmerParams, ell: u32) -> Result<Integer, LehmerError> {
    if ell < 1 {
        return Err(LehmerError::IndexTooSmall { ell, min: 1 });
    }
    Ok(params.sequence(ell).swap_remove(ell as usize))
}

/// Lehmer numbers `L_1 .. L_ell` (index 0 holds `L_0 = 0`).
pub fn lehmer_sequence(params: &LehmerParams, ell: u32) -> Vec<Integer> {
    params.sequence(ell)
}

/// Element `e0 + e1*s` of `Z[s]`, `s^2 = a`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RootA {
    e0: Integer,
    e1: Integer,
}

impl RootA {
    fn int(v: Integer) -> Self {
        RootA {
            e0: v,
            e1: Integer::zero(),
        }
    }

    fn s() -> Self {
        RootA {
            e0: Integer::zero(),
            e1: Integer::one(),
        }
    }

    fn mul(&self, rhs: &RootA, a: &Integer) -> RootA {
        RootA {
            e0: &self.e0 * &rhs.e0 + a * &self.e1 * &rhs.e1,
            e1: &self.e0 * &rhs.e1 + &self.e1 * &rhs.e0,
        }
    }

    fn add(&self, rhs: &RootA) -> RootA {
        RootA {
            e0: &self.e0 + &rhs.e0,
            e1: &self.e1 + &rhs.e1,
        }
    }

    fn scale(&self, k: &Integer) -> RootA {
        RootA {
            e0: &self.e0 * k,
            e1: &self.e1 * k,
        }
    }
}

/// `c0 + c1*X` where `X` is a root of `X^2 - sX + Q`.
#[derive(Debug, Clone)]
struct PairElem {
    c0: RootA,
    c1: RootA,
}

impl PairElem {
    fn mul(&self, rhs: &PairElem, a: &Integer, q: &Integer) -> PairElem {
        let c1c1 = self.c1.mul(&rhs.c1, a);
        let c0 = self.c0.mul(&rhs.c0, a).add(&c1c1.scale(&-q));
        let c1 = self
            .c0
            .mul(&rhs.c1, a)
            .add(&self.c1.mul(&rhs.c0, a))
            .add(&c1c1.mul(&RootA::s(), a));
        PairElem { c0, c1 }
    }
}

/// `L_ell(alpha, beta)` by powering `alpha` in exact ring arithmetic.
///
/// `alpha^n = A_n + B_n*alpha` and the same for `beta`, so
/// `alpha^n - beta^n = B_n (alpha - beta)` and `B_n` is read off directly.
/// `B_n` lies in `Z[s]`; its `s`-component must vanish for odd `n` and its
/// rational component for even `n`, otherwise [`LehmerError::NotRational`].
pub fn lehmer_number_exact(params: &LehmerParams, ell: u32) -> Result<Integer, LehmerError> {
    if ell < 1 {
        return Err(LehmerError::IndexTooSmall { ell, min: 1 });
    }
    let a = params.a();
    let q = params.product();
    let mut acc = PairElem {
        c0: RootA::int(Integer::one()),
        c1: RootA::int(Integer::zero()),
    };
    let mut base = PairElem {
        c0: RootA::int(Integer::zero()),
        c1: RootA::int(Integer::one()),
    };
    let mut e = ell;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base, a, &q);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base, a, &q);
        }
    }
    let b_n = acc.c1;
    if ell % 2 == 1 {
        if !b_n.e1.is_zero() {
            return Err(LehmerError::NotRational(ell));
        }
        Ok(b_n.e0)
    } else {
        if !b_n.e0.is_zero() {
            return Err(LehmerError::NotRational(ell));
        }
        Ok(b_n.e1)
    }
}

/// Outcome of the primitive-divisor test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveDivisor {
    pub exists: bool,
    /// Part of `|L_ell|` coprime to `a*b*L_1*...*L_{ell-1}`.
    #[serde(with = "decimal")]
    pub residual: Integer,
    /// Smallest prime factor of `residual`, when a cheap factorization finds one.
    #[serde(with = "decimal::option")]
    pub witness: Option<Integer>,
}

/// Whether `L_ell` has a prime factor dividing none of
/// `(alpha^2 - beta^2)^2 = a*b` and `L_1, ..., L_{ell-1}`.
///
/// Every common factor with a forbidden term is divided out by repeated gcd
/// until nothing changes; a primitive divisor exists iff something larger
/// than one remains.
pub fn primitive_divisor_exists(
    params: &LehmerParams,
    ell: u32,
) -> Result<PrimitiveDivisor, LehmerError> {
    if ell < 2 {
        return Err(LehmerError::IndexTooSmall { ell, min: 2 });
    }
    let seq = params.sequence(ell);
    let mut residual = seq[ell as usize].abs();
    let forbidden = [params.a(), params.b()]
        .into_iter()
        .chain(seq[1..ell as usize].iter());
    for f in forbidden {
        let mut g = residual.gcd(f);
        while !g.is_one() && !residual.is_one() {
            residual /= &g;
            g = residual.gcd(&g);
        }
    }
    let exists = residual > Integer::one();
    let witness = if exists {
        let budget = FactorBudget {
            trial_bound: 100_000,
            rho_iterations: 100_000,
        };
        arith::factorize(&residual, &budget)
            .ok()
            .and_then(|f| f.factors.first().map(|(p, _)| p.clone()))
    } else {
        None
    };
    Ok(PrimitiveDivisor {
        exists,
        residual,
        witness,
    })
}

/// `(a1, b1)` and `(a2, b2)` describe equivalent pairs: scaling both
/// elements by `+-1` fixes the parameters, scaling by `+-i` negates both.
pub fn is_equivalent(p1: &LehmerParams, p2: &LehmerParams) -> bool {
    (p1.a == p2.a && p1.b == p2.b) || (p1.a == -&p2.a && p1.b == -&p2.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    FixedPair,
    TFamily,
    PowerOfThreeFamily,
    FibonacciFamily,
    LucasFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct FamilyIndices {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectEntry {
    pub ell: u32,
    pub params: LehmerParams,
    pub family: Family,
    pub indices: FamilyIndices,
}

/// A family member dropped while building a [`DefectTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedCandidate {
    #[serde(with = "decimal")]
    pub a: Integer,
    #[serde(with = "decimal")]
    pub b: Integer,
    pub family: Family,
    pub indices: FamilyIndices,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectTable {
    pub ell: u32,
    pub entries: Vec<DefectEntry>,
    pub rejected: Vec<RejectedCandidate>,
}

struct TableBuilder {
    ell: u32,
    seen: HashSet<(Integer, Integer)>,
    table: DefectTable,
}

impl TableBuilder {
    fn new(ell: u32) -> Self {
        TableBuilder {
            ell,
            seen: HashSet::new(),
            table: DefectTable {
                ell,
                entries: Vec::new(),
                rejected: Vec::new(),
            },
        }
    }

    fn offer(&mut self, a: Integer, b: Integer, family: Family, indices: FamilyIndices) {
        if !self.seen.insert((a.clone(), b.clone())) {
            return;
        }
        let reject = |reason: String| RejectedCandidate {
            a: a.clone(),
            b: b.clone(),
            family,
            indices,
            reason,
        };
        let params = match LehmerParams::new(a.clone(), b.clone()) {
            Ok(p) => p,
            Err(e) => {
                self.table.rejected.push(reject(e.to_string()));
                return;
            }
        };
        match primitive_divisor_exists(&params, self.ell) {
            Ok(pd) if !pd.exists => self.table.entries.push(DefectEntry {
                ell: self.ell,
                params,
                family,
                indices,
            }),
            Ok(pd) => self.table.rejected.push(reject(format!(
                "L_{} has primitive part {}",
                self.ell, pd.residual
            ))),
            Err(e) => self.table.rejected.push(reject(e.to_string())),
        }
    }
}

/// Parameters whose `ell`-th Lehmer number has no primitive divisor.
///
/// `bound` caps `|t|`, `k` and the Fibonacci/Lucas indices of the parametric
/// families at `ell = 3, 5`. The finite lists for `ell = 7, 13` ignore it;
/// the other primes up to 29 have no defective pairs, and neither does any
/// index above 30. Each candidate is re-verified before it is emitted and
/// anything that fails validation lands in `rejected`.
pub fn defective_pairs(ell: u32, bound: u32) -> Result<DefectTable, LehmerError> {
    let mut tb = TableBuilder::new(ell);
    let int = |v: i64| Integer::from(v);
    match ell {
        3 => {
            let t_range = || (-(bound as i64)..=bound as i64).filter(|&t| t != 0);
            for t in t_range().filter(|&t| t != 1) {
                tb.offer(
                    int(1 + t),
                    int(1 - 3 * t),
                    Family::TFamily,
                    FamilyIndices {
                        t: Some(t),
                        ..Default::default()
                    },
                );
            }
            for k in 0..=bound {
                let p3 = num_traits::pow(Integer::from(3), k as usize);
                for t in t_range().filter(|t| t % 3 != 0) {
                    if (k, t) == (1, 1) {
                        continue;
                    }
                    tb.offer(
                        &p3 + t,
                        &p3 - 3 * t,
                        Family::PowerOfThreeFamily,
                        FamilyIndices {
                            k: Some(k),
                            t: Some(t),
                            ..Default::default()
                        },
                    );
                }
            }
        }
        5 => {
            for k in 3..=bound.max(2) {
                for eps in [1i8, -1] {
                    let lower = fiblucas::fibonacci((k as i64 - 2 * eps as i64) as u64);
                    let fk = fiblucas::fibonacci(k as u64);
                    tb.offer(
                        lower.clone(),
                        lower - 4 * fk,
                        Family::FibonacciFamily,
                        FamilyIndices {
                            k: Some(k),
                            epsilon: Some(eps),
                            ..Default::default()
                        },
                    );
                }
            }
            for k in (0..=bound).filter(|&k| k != 1) {
                for eps in [1i8, -1] {
                    let idx = k as i64 - 2 * eps as i64;
                    if idx < 0 {
                        continue;
                    }
                    let lower = fiblucas::lucas(idx as u64);
                    let lk = fiblucas::lucas(k as u64);
                    tb.offer(
                        lower.clone(),
                        lower - 4 * lk,
                        Family::LucasFamily,
                        FamilyIndices {
                            k: Some(k),
                            epsilon: Some(eps),
                            ..Default::default()
                        },
                    );
                }
            }
        }
        7 => {
            for (a, b) in [(1, -7), (1, -19), (3, -5), (5, -7), (13, -3), (14, -22)] {
                tb.offer(int(a), int(b), Family::FixedPair, FamilyIndices::default());
            }
        }
        13 => tb.offer(int(1), int(-7), Family::FixedPair, FamilyIndices::default()),
        e if EMPTY_DEFECT_PRIMES.contains(&e) || e > 30 => {}
        e => return Err(LehmerError::UnsupportedIndex(e)),
    }
    Ok(tb.table)
}
