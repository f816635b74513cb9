//! Exact integer utilities: gcd, primality, factorization, square and
//! square-free detection. Nothing in here touches floating point.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// Arbitrary-precision signed integer used for every arithmetic value.
pub type Integer = BigInt;

/// Miller-Rabin with the first thirteen prime bases is deterministic below
/// this bound (Sorenson and Webster).
pub const DETERMINISTIC_PRIMALITY_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Default number of random Miller-Rabin rounds above the deterministic bound.
/// The error probability for a composite is at most `4^-rounds`.
pub const DEFAULT_MR_ROUNDS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("factorization of {n} is incomplete: cofactor {cofactor} left after budget")]
    IncompleteFactorization { n: Integer, cofactor: Integer },
    #[error("cannot factor zero")]
    Zero,
}

/// Effort limits for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over every divisor up to this bound.
    pub trial_bound: u64,
    /// Total Pollard-Brent iterations allowed across all splitting attempts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 2_000_000,
        }
    }
}

impl FactorBudget {
    pub fn with_rho_iterations(rho_iterations: u64) -> Self {
        FactorBudget {
            rho_iterations,
            ..Self::default()
        }
    }
}

/// Prime factorization `sign * prod(p^e) * cofactor`.
///
/// Primes are sorted ascending with no repeats. A cofactor other than one
/// means the budget ran out before the remaining part could be split; it is
/// composite (the primality test already rejected it) or at least unproven.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    pub factors: Vec<(Integer, u32)>,
    pub cofactor: Integer,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Multiplies everything back together, sign included.
    pub fn product(&self) -> Integer {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.negative {
            -acc
        } else {
            acc
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Returns `self` when complete, otherwise the incomplete-factorization
    /// error carrying the leftover cofactor.
    pub fn into_complete(self) -> Result<Self, ArithError> {
        if self.is_complete() {
            Ok(self)
        } else {
            Err(ArithError::IncompleteFactorization {
                n: self.product(),
                cofactor: self.cofactor,
            })
        }
    }

    fn push(&mut self, p: Integer, e: u32) {
        match self.factors.binary_search_by(|(q, _)| q.cmp(&p)) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (p, e)),
        }
    }
}

/// Non-negative greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    a.gcd(b)
}

/// `true` iff `|n|` is prime.
pub fn is_prime(n: &Integer) -> bool {
    is_prime_with_rounds(n, DEFAULT_MR_ROUNDS)
}

/// Primality with a configurable number of random rounds for inputs at or
/// above [`DETERMINISTIC_PRIMALITY_BOUND`]. Below the bound the answer is
/// exact and `rounds` is ignored.
pub fn is_prime_with_rounds(n: &Integer, rounds: u32) -> bool {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for p in DETERMINISTIC_BASES {
            let p = u64::from(p);
            if small == p {
                return true;
            }
            if small % p == 0 {
                return false;
            }
        }
        if small < 43 * 43 {
            return true;
        }
    } else {
        for p in DETERMINISTIC_BASES {
            if (&n % p).is_zero() {
                return false;
            }
        }
    }

    let one = Integer::one();
    let n_minus_1 = &n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let witness = |a: &Integer| -> bool {
        // true = `a` proves n composite
        let mut x = a.modpow(&d, &n);
        if x == one || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % &n;
            if x == n_minus_1 {
                return false;
            }
            if x == one {
                return true;
            }
        }
        true
    };

    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_PRIMALITY_BOUND) {
        return !DETERMINISTIC_BASES
            .iter()
            .any(|&a| witness(&Integer::from(a)));
    }

    // Seeded from n so the verdict for a given input never changes between runs.
    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le().1) {
        *slot = byte;
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    let two = Integer::from(2u32);
    for _ in 0..rounds.max(1) {
        let a = rng.gen_bigint_range(&two, &n_minus_1);
        if witness(&a) {
            return false;
        }
    }
    true
}

/// Integer square root if `n` is a perfect square.
///
/// Uses integer Newton iteration and confirms the result by squaring.
pub fn is_square(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// `true` iff no prime square divides `n`. Requires `n >= 1`; zero and
/// negatives are rejected as not square-free.
pub fn is_squarefree(n: &Integer) -> Result<bool, ArithError> {
    is_squarefree_with(n, &FactorBudget::default())
}

pub fn is_squarefree_with(n: &Integer, budget: &FactorBudget) -> Result<bool, ArithError> {
    if !n.is_positive() {
        return Ok(false);
    }
    let f = factorize(n, budget)?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        // A repeated prime is conclusive even if the cofactor is unsplit.
        return Ok(false);
    }
    let f = f.into_complete()?;
    Ok(f.factors.iter().all(|&(_, e)| e == 1))
}

/// Factors `n` into primes within `budget`.
///
/// Trial division first, then perfect-power detection and Pollard-Brent on
/// what remains. A leftover that could not be split is returned as the
/// cofactor rather than being reported prime.
pub fn factorize(n: &Integer, budget: &FactorBudget) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut out = Factorization {
        negative: n.is_negative(),
        factors: Vec::new(),
        cofactor: Integer::one(),
    };
    let mut rem = n.abs();

    for p in [2u64, 3, 5] {
        strip_small(&mut rem, p, &mut out);
    }
    // 6k +- 1 wheel
    let mut d = 7u64;
    let mut step = 4u64;
    let mut checked_prime = false;
    while d <= budget.trial_bound && !rem.is_one() {
        if Integer::from(d) * d > rem {
            break;
        }
        strip_small(&mut rem, d, &mut out);
        if d > 1000 && !checked_prime {
            // Avoid a full trial run on a large prime remainder.
            checked_prime = true;
            if is_prime(&rem) {
                break;
            }
        }
        d += step;
        step = 6 - step;
    }
    if rem.is_one() {
        return Ok(out);
    }
    if Integer::from(d) * d > rem || is_prime(&rem) {
        out.push(rem, 1);
        return Ok(out);
    }

    let mut iterations_left = budget.rho_iterations;
    let mut stack = vec![(rem, 1u32)];
    while let Some((m, e)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m, e);
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, e * k));
            continue;
        }
        match pollard_brent(&m, &mut iterations_left) {
            Some(f) => {
                let g = &m / &f;
                stack.push((f, e));
                stack.push((g, e));
            }
            None => {
                out.cofactor *= num_traits::pow(m, e as usize);
            }
        }
    }
    Ok(out)
}

fn strip_small(rem: &mut Integer, p: u64, out: &mut Factorization) {
    let mut e = 0u32;
    loop {
        let (q, r) = rem.div_rem(&Integer::from(p));
        if !r.is_zero() {
            break;
        }
        *rem = q;
        e += 1;
    }
    if e > 0 {
        out.push(Integer::from(p), e);
    }
}

/// Largest `k >= 2` with `m = r^k`, if any.
fn perfect_power(m: &Integer) -> Option<(Integer, u32)> {
    let bits = m.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = m.nth_root(k);
        if r > Integer::one() && &num_traits::pow(r.clone(), k as usize) == m {
            return Some((r, k));
        }
    }
    None
}

/// Brent's variant of Pollard rho. Returns a proper factor of the odd
/// composite `n`, or `None` once the shared iteration budget is spent.
fn pollard_brent(n: &Integer, budget: &mut u64) -> Option<Integer> {
    const BATCH: u64 = 128;
    if n.is_even() {
        return Some(Integer::from(2));
    }
    for increment in 1u32.. {
        if *budget == 0 {
            return None;
        }
        let c = Integer::from(increment);
        let f = |v: &Integer| (v * v + &c) % n;
        let mut y = Integer::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = Integer::one();
        let mut g = Integer::one();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            *budget = budget.saturating_sub(r);
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                *budget = budget.saturating_sub(m);
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if *budget == 0 && g.is_one() {
                return None;
            }
        }
        if &g == n {
            // The batched product overshot; replay one step at a time.
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    unreachable!("increment space exhausted")
}
