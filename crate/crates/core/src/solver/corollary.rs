//! Fixture families for the four no-solution corollaries, replayed through
//! [`solve`](super::solve) and optionally cross-checked by the oracle.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use super::{brute_force_solutions, solve_with, ProblemInstance, SolveError, SolveOptions};
use crate::arith::{self, Integer};
use crate::classnum;

/// The list of `c` whose class numbers are claimed to be powers of two up to
/// 32, kept exactly as published (including 29, which is `1 (mod 4)` and has
/// `h(-29) = 6`).
pub const SIGMA: [u32; 103] = [
    7, 11, 15, 19, 35, 39, 43, 51, 55, 67, 91, 95, 111, 115, 123, 155, 163, 183, 187, 195, 203,
    219, 235, 259, 267, 29, 295, 299, 323, 355, 371, 395, 399, 403, 407, 427, 435, 471, 483, 555,
    559, 579, 583, 595, 627, 651, 663, 667, 715, 723, 763, 791, 795, 799, 895, 903, 915, 939, 943,
    955, 979, 987, 995, 1003, 1015, 1023, 1027, 1043, 1047, 1119, 1131, 1139, 1155, 1159, 1195,
    1227, 1239, 1243, 1299, 1339, 1379, 1387, 1411, 1435, 1443, 1463, 1507, 1551, 1555, 1595,
    1635, 1651, 1659, 1731, 1767, 1771, 1795, 1803, 1939, 1943, 1947, 1983, 1995,
];

const SIGMA_CLASS_NUMBERS: [u64; 6] = [1, 2, 4, 8, 16, 32];

const COR4_P: [u32; 7] = [3, 7, 11, 19, 43, 67, 163];
const COR4_Q: [u32; 4] = [19, 43, 67, 163];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorollaryError {
    #[error("instance {0} is outside the range of corollary {1}")]
    OutOfRange(ProblemInstance, CorollaryId),
    #[error("unknown corollary {0}; expected 1, 2, 3 or 4")]
    Unknown(u8),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorollaryId {
    /// `p | n`.
    One,
    /// `c = q` prime, `q | n`, `m = q`, `p != +-1 (mod q)`.
    Two,
    /// `c` in [`SIGMA`], `n = p`.
    Three,
    /// `p` in {3,7,11,19,43,67,163}, `c = n = q` in {19,43,67,163}.
    Four,
}

impl CorollaryId {
    pub const ALL: [CorollaryId; 4] = [
        CorollaryId::One,
        CorollaryId::Two,
        CorollaryId::Three,
        CorollaryId::Four,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl TryFrom<u8> for CorollaryId {
    type Error = CorollaryError;
    fn try_from(v: u8) -> Result<Self, CorollaryError> {
        match v {
            1 => Ok(CorollaryId::One),
            2 => Ok(CorollaryId::Two),
            3 => Ok(CorollaryId::Three),
            4 => Ok(CorollaryId::Four),
            other => Err(CorollaryError::Unknown(other)),
        }
    }
}

impl fmt::Display for CorollaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Class-number check for one member of [`SIGMA`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaRow {
    pub c: u32,
    pub c_mod4: u32,
    pub squarefree: bool,
    pub class_number: Option<u64>,
    /// `c = 3 (mod 4)`, square-free, and `h(-c)` in {1,2,4,8,16,32}.
    pub confirmed: bool,
}

pub fn sigma_class_table() -> Vec<SigmaRow> {
    SIGMA
        .iter()
        .map(|&c| {
            let ci = Integer::from(c);
            let squarefree = arith::is_squarefree(&ci).unwrap_or(false);
            let class_number = classnum::class_number(&ci).ok();
            let confirmed = c % 4 == 3
                && squarefree
                && class_number.is_some_and(|h| SIGMA_CLASS_NUMBERS.contains(&h));
            SigmaRow {
                c,
                c_mod4: c % 4,
                squarefree,
                class_number,
                confirmed,
            }
        })
        .collect()
}

fn odd_primes_below(limit: u32) -> impl Iterator<Item = u32> {
    (3..limit)
        .step_by(2)
        .filter(|&v| arith::is_prime(&Integer::from(v)))
}

/// Whether `inst` lies inside the stated range of corollary `id`.
pub fn in_range(id: CorollaryId, inst: &ProblemInstance) -> bool {
    let p_odd_prime = inst.p > Integer::one() && inst.p.is_odd() && arith::is_prime(&inst.p);
    let n_ok = inst.n >= 3 && inst.n % 2 == 1;
    let h = classnum::class_number(&inst.c).ok();
    let n_coprime_h =
        h.is_some_and(|h| arith::gcd(&Integer::from(inst.n), &Integer::from(h)).is_one());
    if !(p_odd_prime && n_ok && n_coprime_h) {
        return false;
    }
    let c_small = inst.c.to_u32();
    let p_small = inst.p.to_u32();
    match id {
        CorollaryId::One => {
            inst.c > Integer::from(3)
                && (Integer::from(inst.n) % &inst.p) == Integer::from(0)
        }
        CorollaryId::Two => match c_small {
            Some(q) if q >= 3 && arith::is_prime(&inst.c) => {
                let r = inst.p.mod_floor(&inst.c);
                inst.n.is_multiple_of(q) && inst.m == q && !r.is_one() && r != Integer::from(q - 1)
            }
            _ => false,
        },
        CorollaryId::Three => {
            c_small.is_some_and(|c| SIGMA.contains(&c) && c % 4 == 3)
                && p_small == Some(inst.n)
        }
        CorollaryId::Four => {
            p_small.is_some_and(|p| COR4_P.contains(&p))
                && c_small.is_some_and(|c| COR4_Q.contains(&c) && c == inst.n)
        }
    }
}

/// The default instance set replayed for corollary `id`.
pub fn corollary_fixtures(id: CorollaryId) -> Vec<ProblemInstance> {
    let mut out = Vec::new();
    match id {
        CorollaryId::One => {
            for c in [7u32, 11, 19] {
                for p in [3u32, 5] {
                    for n in [p, 3 * p] {
                        for m in 0..=2 {
                            out.push(ProblemInstance::new(c, p, m, n));
                        }
                    }
                }
            }
        }
        CorollaryId::Two => {
            for q in [7u32, 11, 19, 23] {
                for p in odd_primes_below(30).filter(|p| p % q != 1 && p % q != q - 1) {
                    for n in [q, 3 * q] {
                        out.push(ProblemInstance::new(q, p, q, n));
                    }
                }
            }
        }
        CorollaryId::Three => {
            for row in sigma_class_table().iter().filter(|r| r.confirmed) {
                for p in [3u32, 5, 7] {
                    for m in 0..=1 {
                        out.push(ProblemInstance::new(row.c, p, m, p));
                    }
                }
            }
        }
        CorollaryId::Four => {
            for q in COR4_Q {
                for p in COR4_P {
                    for m in 0..=1 {
                        out.push(ProblemInstance::new(q, p, m, q));
                    }
                }
            }
        }
    }
    out.retain(|inst| in_range(id, inst));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryRow {
    pub instance: ProblemInstance,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    /// The solver returned a no-solution verdict.
    pub pass: bool,
    /// Oracle solutions at this `m` equal the solver's with `y` in range, when run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub corollary: u8,
    pub rows: Vec<CorollaryRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<SigmaRow>>,
}

impl CorollaryReport {
    pub fn all_pass(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.pass && r.oracle_agrees != Some(false))
    }
}

/// Runs the solver over `instances` (or the default fixtures) and records
/// whether each one comes back with no solutions. With `oracle_y_max` the
/// brute-force search over `y <= oracle_y_max` at the instance's `m` runs too.
pub fn corollary_report(
    id: CorollaryId,
    instances: Option<Vec<ProblemInstance>>,
    oracle_y_max: Option<u64>,
    opts: &SolveOptions,
) -> Result<CorollaryReport, CorollaryError> {
    let sigma = (id == CorollaryId::Three).then(sigma_class_table);
    let instances = match instances {
        Some(list) => {
            if let Some(bad) = list.iter().find(|i| !in_range(id, i)) {
                return Err(CorollaryError::OutOfRange(bad.clone(), id));
            }
            list
        }
        None => corollary_fixtures(id),
    };

    let mut rows = Vec::with_capacity(instances.len());
    for inst in instances {
        let outcome = solve_with(&inst, opts)?;
        let oracle_agrees = oracle_y_max.map(|y_max| {
            let found: Vec<(Integer, Integer)> =
                brute_force_solutions(&inst.c, &inst.p, inst.n, inst.m, y_max)
                    .into_iter()
                    .filter(|s| s.m == inst.m)
                    .map(|s| (s.x, s.y))
                    .collect();
            let bound = Integer::from(y_max);
            let mut solved: Vec<(Integer, Integer)> =
                outcome.xy().into_iter().filter(|(_, y)| *y <= bound).collect();
            solved.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
            found == solved
        });
        rows.push(CorollaryRow {
            verdict: outcome.verdict.label(),
            reason: outcome.reason().map(|r| r.as_str()),
            pass: outcome.is_no_solutions(),
            oracle_agrees,
            instance: inst,
        });
    }
    Ok(CorollaryReport {
        corollary: id.number(),
        rows,
        sigma,
    })
}
