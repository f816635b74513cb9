//! Decision procedure for `c*x^2 + p^(2m) = 4*y^n` with `x >= 1`, `y > 1`,
//! `gcd(x, y) = 1`.
//!
//! For every prime `q | n` the equation forces odd `u >= 1` and `v = p^k`
//! with `v |I(c,u,v,q)| = 2^(q-1) p^m`. Such witnesses are found by exact
//! root finding below a proven bound. If some `q` admits none there are no
//! solutions. Otherwise each witness at the smallest `q` gives
//! `x = u|R(c,u,v,q)| / 2^(q-1)` and `Y = (u^2 c + v^2)/4`, and writing
//! `n = r*q`, the solutions are those with `Y = y^r`, checked by substitution.

mod corollary;
mod oracle;

pub use corollary::{
    corollary_fixtures, corollary_report, in_range, sigma_class_table, CorollaryError, CorollaryId,
    CorollaryReport, CorollaryRow, SigmaRow, SIGMA,
};
pub use oracle::{brute_force_range, brute_force_solutions, BruteSolution};

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, FactorBudget, Integer};
use crate::classnum::{self, ClassNumberError};
use crate::decimal;
use crate::poly::Poly;
use crate::rsums::{self, SumPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    ClassNumber(#[from] ClassNumberError),
    #[error("exponent {0} is not an odd prime")]
    NotOddPrime(u32),
}

impl SolveError {
    pub fn is_incomplete_factorization(&self) -> bool {
        matches!(
            self,
            SolveError::Arith(ArithError::IncompleteFactorization { .. })
                | SolveError::ClassNumber(ClassNumberError::Arith(
                    ArithError::IncompleteFactorization { .. }
                ))
        )
    }
}

/// The tuple `(c, p, m, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemInstance {
    #[serde(with = "decimal")]
    pub c: Integer,
    #[serde(with = "decimal")]
    pub p: Integer,
    pub m: u32,
    pub n: u32,
}

impl ProblemInstance {
    pub fn new(c: impl Into<Integer>, p: impl Into<Integer>, m: u32, n: u32) -> Self {
        ProblemInstance {
            c: c.into(),
            p: p.into(),
            m,
            n,
        }
    }

    /// `p^(2m)`.
    pub fn p_power(&self) -> Integer {
        num_traits::pow(self.p.clone(), 2 * self.m as usize)
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*x^2 + {}^{} = 4*y^{}",
            self.c,
            self.p,
            2 * self.m,
            self.n
        )
    }
}

/// Pass/fail of each hypothesis, plus the necessary condition `c = 3 (mod 4)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub c_gt_3: bool,
    pub c_squarefree: bool,
    pub p_odd_prime: bool,
    pub p_ndiv_c: bool,
    pub n_ge_3: bool,
    pub gcd_2h: bool,
    /// Not a hypothesis: any solution has odd `x`, which forces `c = 3 (mod 4)`.
    pub c_mod4_is_3: bool,
    /// `c` is 1 or 2; reduction mod 4 already rules out solutions.
    pub c_unsolvable_mod4: bool,
    /// `h(-c)`, when `c` is square-free and positive.
    pub class_number: Option<u64>,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.c_gt_3, "c_gt_3"),
            (self.c_squarefree, "c_squarefree"),
            (self.p_odd_prime, "p_odd_prime"),
            (self.p_ndiv_c, "p_ndiv_c"),
            (self.n_ge_3, "n_ge_3"),
            (self.gcd_2h, "gcd_2h"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

/// A certified solution and the witness it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "decimal")]
    pub x: Integer,
    #[serde(with = "decimal")]
    pub y: Integer,
    #[serde(with = "decimal")]
    pub u: Integer,
    /// `p^k` from the witness.
    #[serde(with = "decimal")]
    pub v: Integer,
    /// Prime factor of `n` the witness lives at.
    pub q: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoSolutionReason {
    /// No witness `(u, p^k)` at this prime `q | n`, or none giving a
    /// coprime `(x, y)`.
    NoWitness { q: u32 },
    /// `n = r*q` with `r >= 3`, and no `Y` from the witnesses at `q` is an
    /// `r`-th power.
    CompositeExponent { q: u32, r: u32 },
    /// `c` is not `3 (mod 4)`, so `x` cannot be odd.
    CNot3Mod4,
    /// `m = 0`: `c*x^2 + 1 = 4*y^n` has no solutions.
    M0Ljunggren,
    /// `p | c` with `m >= 1`: then `p | y`, so `p^2 | c x^2`, so `p | x`.
    PDividesC,
}

impl NoSolutionReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoSolutionReason::NoWitness { .. } => "no-u-witness-at-prime-q",
            NoSolutionReason::CompositeExponent { .. } => "composite-exponent-descent",
            NoSolutionReason::CNot3Mod4 => "c-not-3-mod-4",
            NoSolutionReason::M0Ljunggren => "m0-ljunggren",
            NoSolutionReason::PDividesC => "p-divides-c",
        }
    }

    pub fn prime(&self) -> Option<u32> {
        match *self {
            NoSolutionReason::NoWitness { q } | NoSolutionReason::CompositeExponent { q, .. } => {
                Some(q)
            }
            _ => None,
        }
    }
}

impl fmt::Display for NoSolutionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoSolutionReason::NoWitness { q } => write!(f, "{} (q = {q})", self.as_str()),
            NoSolutionReason::CompositeExponent { q, r } => {
                write!(f, "{} (n = {r}*{q})", self.as_str())
            }
            _ => f.write_str(self.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solutions(Vec<SolutionRecord>),
    NoSolutions(NoSolutionReason),
    HypothesisViolation,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Solutions(_) => "solutions",
            Verdict::NoSolutions(_) => "no-solutions",
            Verdict::HypothesisViolation => "hypothesis-violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub instance: ProblemInstance,
    pub verdict: Verdict,
    pub report: HypothesisReport,
}

impl SolveOutcome {
    pub fn solutions(&self) -> &[SolutionRecord] {
        match &self.verdict {
            Verdict::Solutions(s) => s,
            _ => &[],
        }
    }

    pub fn reason(&self) -> Option<NoSolutionReason> {
        match self.verdict {
            Verdict::NoSolutions(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_no_solutions(&self) -> bool {
        matches!(self.verdict, Verdict::NoSolutions(_))
    }

    /// `(x, y)` pairs of the solution set.
    pub fn xy(&self) -> Vec<(Integer, Integer)> {
        self.solutions()
            .iter()
            .map(|s| (s.x.clone(), s.y.clone()))
            .collect()
    }

    pub fn to_json(&self) -> OutcomeJson {
        OutcomeJson {
            instance: self.instance.clone(),
            verdict: self.verdict.label().to_string(),
            reason: self.reason().map(|r| r.as_str().to_string()),
            reason_prime: self.reason().and_then(|r| r.prime()),
            solutions: self.solutions().to_vec(),
            hypothesis_report: self.report.clone(),
        }
    }
}

/// Wire form of a [`SolveOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub instance: ProblemInstance,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason_prime: Option<u32>,
    pub solutions: Vec<SolutionRecord>,
    pub hypothesis_report: HypothesisReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct SolveOptions {
    pub budget: FactorBudget,
    /// Skip the search for `v = p^k` at `q` unless `2^(q-1) p^m = +-v^q`
    /// modulo `q` and modulo `c`. For `k = 0` these are the conditions
    /// `p^m = +-1 (mod q)` and `2^(q-1) p^m = +-1 (mod c)`.
    pub congruence_screens: bool,
}


pub fn check_hypotheses(inst: &ProblemInstance) -> Result<HypothesisReport, SolveError> {
    check_hypotheses_with(inst, &FactorBudget::default())
}

pub fn check_hypotheses_with(
    inst: &ProblemInstance,
    budget: &FactorBudget,
) -> Result<HypothesisReport, SolveError> {
    let c = &inst.c;
    let p = &inst.p;
    let c_squarefree = arith::is_squarefree_with(c, budget)?;
    let class_number = if c_squarefree {
        Some(classnum::class_number(c)?)
    } else {
        None
    };
    let gcd_2h = match class_number {
        Some(h) => arith::gcd(&Integer::from(inst.n), &Integer::from(2 * h)).is_one(),
        None => false,
    };
    let p_odd_prime = p.is_positive() && p.is_odd() && arith::is_prime(p);
    let p_ndiv_c = !p.is_zero() && !c.is_multiple_of(p);
    Ok(HypothesisReport {
        c_gt_3: *c > Integer::from(3),
        c_squarefree,
        p_odd_prime,
        p_ndiv_c,
        n_ge_3: inst.n >= 3,
        gcd_2h,
        c_mod4_is_3: c.mod_floor(&Integer::from(4)) == Integer::from(3),
        c_unsolvable_mod4: *c == Integer::from(1) || *c == Integer::from(2),
        class_number,
    })
}

/// A solution of the prime-exponent equation at `q` comes from
/// `(x sqrt(-c) + p^m) / 2 = +-((u sqrt(-c) + v) / 2)^q` with `u`, `v` odd
/// and `v = p^k`, `0 <= k <= m`. Comparing parts gives
/// `v |I(c,u,v,q)| = 2^(q-1) p^m` and `x = u |R(c,u,v,q)| / 2^(q-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "decimal")]
    pub u: Integer,
    /// Exponent of `p` in `v`.
    pub k: u32,
}

/// Target `2^(q-1) p^m` of the witness equation.
fn witness_target(p: &Integer, m: u32, q: u32) -> Integer {
    (Integer::one() << (q - 1)) * num_traits::pow(p.clone(), m as usize)
}

/// Smallest odd `u >= 1` with `pred(u)`, for `pred` monotone in `u`,
/// starting the walk from `guess`.
fn first_odd(guess: Integer, pred: impl Fn(&Integer) -> bool) -> Integer {
    let mut u = if guess.is_even() { guess + 1u32 } else { guess };
    if u < Integer::one() {
        u = Integer::one();
    }
    while !pred(&u) {
        u += 2u32;
    }
    while u > Integer::one() && pred(&(&u - 2u32)) {
        u -= 2u32;
    }
    u
}

/// First odd `u` past which `|I(c,u,v,q)|` exceeds `target` for good.
///
/// Term `j` of `I(c,u,v,q)` has size `C(q,2j+1) (u^2 c)^((q-1)/2-j) v^(2j)`
/// and consecutive terms shrink by a factor of at least
/// `u^2 c (2j+2)(2j+3) / (v^2 (q-2j-1)(q-2j-2)) >= 6 u^2 c / (q^2 v^2)`. Once
/// `u^2 c >= q^2 v^2` the alternating sum is dominated by its leading term:
/// `|I| >= (5/6) q u^(q-1) c^((q-1)/2) > (q/2) u^(q-1) c^((q-1)/2)`, which is
/// increasing in `u`.
pub fn witness_bound(c: &Integer, v: &Integer, target: &Integer, q: u32) -> Integer {
    let qq = Integer::from(q);
    let half = (q as usize - 1) / 2;
    let c_pow = num_traits::pow(c.clone(), half);
    let target2 = target * 2u32;
    let qv2 = (&qq * v) * (&qq * v);

    // u^2 c >= q^2 v^2
    let a = first_odd((&qv2 / c).sqrt(), |u| u * u * c >= qv2);
    // q u^(q-1) c^half > 2 target
    let b_guess = (&target2 / (&qq * &c_pow)).nth_root(q - 1);
    let b = first_odd(b_guess, |u| {
        &qq * num_traits::pow(u.clone(), q as usize - 1) * &c_pow > target2
    });
    a.max(b)
}

/// [`witness_bound`] for `v = 1` and target `2^(q-1) p^m`.
pub fn u_search_limit(c: &Integer, p: &Integer, m: u32, q: u32) -> Integer {
    witness_bound(c, &Integer::one(), &witness_target(p, m, q), q)
}

fn check_odd_prime(q: u32) -> Result<(), SolveError> {
    if q >= 3 && q % 2 == 1 && arith::is_prime(&Integer::from(q)) {
        Ok(())
    } else {
        Err(SolveError::NotOddPrime(q))
    }
}

/// Odd `u` in `[1, witness_bound]` with `|I(c,u,v,q)| = target`, ascending.
///
/// `I` is a polynomial in `w = u^2`, so this solves `P(w) = +-target` for
/// integer `w` and keeps the odd squares.
fn odd_u_with_imag(c: &Integer, v: &Integer, target: &Integer, q: u32) -> Vec<Integer> {
    let sums = SumPolynomial::imag(c, v, q).expect("q is odd");
    let poly = Poly::new(sums.coeffs().to_vec());
    let limit = witness_bound(c, v, target, q);
    let w_max = &limit * &limit;
    let mut out: Vec<Integer> = [target.clone(), -target.clone()]
        .iter()
        .flat_map(|t| poly.add_constant(&-t).integer_roots(&Integer::one(), &w_max))
        .filter_map(|w| arith::is_square(&w))
        .filter(|u| u.is_odd())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every odd `u >= 1` with `|I(c,u,1,q)| = 2^(q-1) p^m`, ascending.
///
/// Requires `c >= 1` and `q` an odd prime.
pub fn find_u_candidates(
    c: &Integer,
    p: &Integer,
    m: u32,
    q: u32,
) -> Result<Vec<Integer>, SolveError> {
    check_odd_prime(q)?;
    Ok(odd_u_with_imag(c, &Integer::one(), &witness_target(p, m, q), q))
}

/// Every witness `(u, k)` at `q`: odd `u >= 1`, `0 <= k <= m`, with
/// `p^k |I(c,u,p^k,q)| = 2^(q-1) p^m`. Ordered by `k`, then `u`.
pub fn find_witnesses(
    c: &Integer,
    p: &Integer,
    m: u32,
    q: u32,
) -> Result<Vec<Witness>, SolveError> {
    find_witnesses_screened(c, p, m, q, false)
}

fn find_witnesses_screened(
    c: &Integer,
    p: &Integer,
    m: u32,
    q: u32,
    screens: bool,
) -> Result<Vec<Witness>, SolveError> {
    check_odd_prime(q)?;
    let mut out = Vec::new();
    for k in 0..=m {
        if screens && !passes_congruence_screens(c, p, m, q, k) {
            continue;
        }
        let v = num_traits::pow(p.clone(), k as usize);
        let target = witness_target(p, m - k, q);
        out.extend(
            odd_u_with_imag(c, &v, &target, q)
                .into_iter()
                .map(|u| Witness { u, k }),
        );
    }
    Ok(out)
}

/// Necessary condition for a witness with `v = p^k` at `q`: modulo `q` and
/// modulo `c`, `I(c,u,v,q) = (-v^2)^((q-1)/2)`, so
/// `2^(q-1) p^m = +-v^q` modulo both.
fn passes_congruence_screens(c: &Integer, p: &Integer, m: u32, q: u32, k: u32) -> bool {
    let target = witness_target(p, m, q);
    let vq = num_traits::pow(p.clone(), (k * q) as usize);
    let plus_minus = |modulus: &Integer| {
        if modulus.is_one() {
            return true;
        }
        let t = target.mod_floor(modulus);
        let s = vq.mod_floor(modulus);
        t == s || (&t + &s).mod_floor(modulus).is_zero()
    };
    plus_minus(&Integer::from(q)) && plus_minus(c)
}

/// `(x, Y)` at exponent `q` from a witness, if the formulas give integers.
fn solution_from_witness(
    c: &Integer,
    p: &Integer,
    w: &Witness,
    q: u32,
) -> Option<(Integer, Integer, Integer)> {
    let v = num_traits::pow(p.clone(), w.k as usize);
    let r = rsums::r_sum(c, &w.u, &v, q).ok()?;
    let (x, x_rem) = (&w.u * r.abs()).div_rem(&(Integer::one() << (q - 1)));
    let (y, y_rem) = (&w.u * &w.u * c + &v * &v).div_rem(&Integer::from(4));
    if !x_rem.is_zero() || !y_rem.is_zero() {
        return None;
    }
    Some((x, y, v))
}

/// `c x^2 + p^(2m) = 4 y^n` exactly, `x >= 1`, `y > 1`, `gcd(x, y) = 1`.
pub fn verify_solution(inst: &ProblemInstance, x: &Integer, y: &Integer) -> bool {
    if !x.is_positive() || *y <= Integer::one() {
        return false;
    }
    if !arith::gcd(x, y).is_one() {
        return false;
    }
    let lhs = &inst.c * x * x + inst.p_power();
    let rhs = num_traits::pow(y.clone(), inst.n as usize) * 4u32;
    lhs == rhs
}

pub fn solve(inst: &ProblemInstance) -> Result<SolveOutcome, SolveError> {
    solve_with(inst, &SolveOptions::default())
}

pub fn solve_with(inst: &ProblemInstance, opts: &SolveOptions) -> Result<SolveOutcome, SolveError> {
    let report = check_hypotheses_with(inst, &opts.budget)?;
    let done = |verdict| SolveOutcome {
        instance: inst.clone(),
        verdict,
        report: report.clone(),
    };

    if !report.passes() {
        // `p | c` is the only failure: settled directly for m >= 1, and for
        // m = 0 the prime plays no role at all.
        if report.failures() != ["p_ndiv_c"] {
            return Ok(done(Verdict::HypothesisViolation));
        }
        if inst.m >= 1 {
            return Ok(done(Verdict::NoSolutions(NoSolutionReason::PDividesC)));
        }
    }
    if !report.c_mod4_is_3 {
        return Ok(done(Verdict::NoSolutions(NoSolutionReason::CNot3Mod4)));
    }

    let ljunggren_or = |reason| {
        if inst.m == 0 {
            NoSolutionReason::M0Ljunggren
        } else {
            reason
        }
    };

    let factors = arith::factorize(&Integer::from(inst.n), &opts.budget)?.into_complete()?;
    let primes: Vec<u32> = factors
        .primes()
        .map(|q| q.to_u32().expect("prime factor of a u32"))
        .collect();

    let mut witnesses = Vec::with_capacity(primes.len());
    for &q in &primes {
        let found =
            find_witnesses_screened(&inst.c, &inst.p, inst.m, q, opts.congruence_screens)?;
        if found.is_empty() {
            return Ok(done(Verdict::NoSolutions(ljunggren_or(
                NoSolutionReason::NoWitness { q },
            ))));
        }
        witnesses.push((q, found));
    }

    // Any solution at n = r*q is a solution at q with Y = y^r.
    let (q, found) = &witnesses[0];
    let (q, r) = (*q, inst.n / *q);
    let mut records: Vec<SolutionRecord> = found
        .iter()
        .filter_map(|w| {
            let (x, big_y, v) = solution_from_witness(&inst.c, &inst.p, w, q)?;
            let y = big_y.nth_root(r);
            (num_traits::pow(y.clone(), r as usize) == big_y).then(|| SolutionRecord {
                x,
                y,
                u: w.u.clone(),
                v,
                q,
            })
        })
        .filter(|s| verify_solution(inst, &s.x, &s.y))
        .collect();
    records.sort_by(|a, b| (&a.y, &a.x).cmp(&(&b.y, &b.x)));
    records.dedup_by(|a, b| a.x == b.x && a.y == b.y);

    if records.is_empty() {
        let reason = if r == 1 {
            NoSolutionReason::NoWitness { q }
        } else {
            NoSolutionReason::CompositeExponent { q, r }
        };
        return Ok(done(Verdict::NoSolutions(ljunggren_or(reason))));
    }
    Ok(done(Verdict::Solutions(records)))
}
