//! The binomial sums R(c,u,v,t) and I(c,u,v,t) for odd `t`, and an
//! independent route to the same numbers by powering `u*sqrt(c) + v*i`.
//!
//! For odd `t` the two are tied by
//!
//! ```text
//! (u*sqrt(c) + v*i)^t = u*R(c,u,v,t)*sqrt(c) + v*I(c,u,v,t)*i
//! ```

use std::ops::{Add, Mul};

use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, Integer};
use crate::decimal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("exponent t = {0} must be odd and positive")]
    BadExponent(u32),
    #[error("congruence report needs an odd prime t, got {0}")]
    NotOddPrime(u32),
    #[error("u and v must be non-zero to extract R and I")]
    ZeroCoefficient,
    #[error("power does not have the odd-power shape u*R*sqrt(c) + v*I*i: {0}")]
    MalformedPower(String),
}

fn check_exponent(t: u32) -> Result<(), SumError> {
    if t % 2 == 1 {
        Ok(())
    } else {
        Err(SumError::BadExponent(t))
    }
}

/// Row `t` of Pascal's triangle.
fn binomial_row(t: u32) -> Vec<Integer> {
    let mut row = vec![Integer::one()];
    for _ in 0..t {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(Integer::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(Integer::one());
        row = next;
    }
    row
}

/// One of the two sums as a polynomial in `w = u^2`:
/// `sum_j coeff_j * w^((t-1)/2 - j)`.
#[derive(Debug, Clone)]
pub struct SumPolynomial {
    /// Highest power of `w` first.
    coeffs: Vec<Integer>,
}

impl SumPolynomial {
    fn build(c: &Integer, v: &Integer, t: u32, offset: usize) -> Result<Self, SumError> {
        check_exponent(t)?;
        let half = (t as usize - 1) / 2;
        let row = binomial_row(t);
        let neg_v2 = -(v * v);
        let mut coeffs = Vec::with_capacity(half + 1);
        let mut v_pow = Integer::one();
        for j in 0..=half {
            let c_pow = num_traits::pow(c.clone(), half - j);
            coeffs.push(&row[2 * j + offset] * c_pow * &v_pow);
            v_pow *= &neg_v2;
        }
        Ok(SumPolynomial { coeffs })
    }

    pub fn real(c: &Integer, v: &Integer, t: u32) -> Result<Self, SumError> {
        Self::build(c, v, t, 0)
    }

    pub fn imag(c: &Integer, v: &Integer, t: u32) -> Result<Self, SumError> {
        Self::build(c, v, t, 1)
    }

    /// Coefficients in `w = u^2`, highest power first.
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn eval(&self, u: &Integer) -> Integer {
        let w = u * u;
        self.coeffs
            .iter()
            .fold(Integer::zero(), |acc, coeff| acc * &w + coeff)
    }
}

/// `R(c,u,v,t) = sum_j C(t,2j) u^(t-2j-1) c^((t-1)/2-j) (-v^2)^j`.
pub fn r_sum(c: &Integer, u: &Integer, v: &Integer, t: u32) -> Result<Integer, SumError> {
    direct_sum(c, u, v, t, 0)
}

/// `I(c,u,v,t) = sum_j C(t,2j+1) u^(t-2j-1) c^((t-1)/2-j) (-v^2)^j`.
pub fn i_sum(c: &Integer, u: &Integer, v: &Integer, t: u32) -> Result<Integer, SumError> {
    direct_sum(c, u, v, t, 1)
}

// Term-by-term evaluation, kept separate from `SumPolynomial` so the two can
// be checked against each other.
fn direct_sum(
    c: &Integer,
    u: &Integer,
    v: &Integer,
    t: u32,
    offset: usize,
) -> Result<Integer, SumError> {
    check_exponent(t)?;
    let half = (t as usize - 1) / 2;
    let row = binomial_row(t);
    let neg_v2 = -(v * v);
    let mut total = Integer::zero();
    for j in 0..=half {
        let term = &row[2 * j + offset]
            * num_traits::pow(u.clone(), t as usize - 2 * j - 1)
            * num_traits::pow(c.clone(), half - j)
            * num_traits::pow(neg_v2.clone(), j);
        total += term;
    }
    Ok(total)
}

/// Gaussian integer `re + im*i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gaussian {
    pub re: Integer,
    pub im: Integer,
}

impl Gaussian {
    pub fn new(re: Integer, im: Integer) -> Self {
        Gaussian { re, im }
    }

    pub fn zero() -> Self {
        Gaussian::new(Integer::zero(), Integer::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// `g0 + g1*sqrt(c)` with Gaussian-integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussPair {
    pub c: Integer,
    pub g0: Gaussian,
    pub g1: Gaussian,
}

impl GaussPair {
    pub fn one(c: &Integer) -> Self {
        GaussPair {
            c: c.clone(),
            g0: Gaussian::new(Integer::one(), Integer::zero()),
            g1: Gaussian::zero(),
        }
    }

    /// `u*sqrt(c) + v*i`.
    pub fn from_uv(c: &Integer, u: &Integer, v: &Integer) -> Self {
        GaussPair {
            c: c.clone(),
            g0: Gaussian::new(Integer::zero(), v.clone()),
            g1: Gaussian::new(u.clone(), Integer::zero()),
        }
    }

    pub fn mul(&self, rhs: &GaussPair) -> GaussPair {
        debug_assert_eq!(self.c, rhs.c);
        let g1h1 = &self.g1 * &rhs.g1;
        let g0 = &(&self.g0 * &rhs.g0) + &Gaussian::new(&g1h1.re * &self.c, &g1h1.im * &self.c);
        let g1 = &(&self.g0 * &rhs.g1) + &(&self.g1 * &rhs.g0);
        GaussPair {
            c: self.c.clone(),
            g0,
            g1,
        }
    }

    pub fn pow(&self, mut e: u32) -> GaussPair {
        let mut base = self.clone();
        let mut acc = GaussPair::one(&self.c);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Values of `R` and `I` for one tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumPair {
    #[serde(rename = "R", with = "decimal")]
    pub r: Integer,
    #[serde(rename = "I", with = "decimal")]
    pub i: Integer,
}

/// `(R, I)` read off `(u*sqrt(c) + v*i)^t` computed in `GaussPair` form.
pub fn power_in_ring(c: &Integer, u: &Integer, v: &Integer, t: u32) -> Result<SumPair, SumError> {
    check_exponent(t)?;
    if u.is_zero() || v.is_zero() {
        return Err(SumError::ZeroCoefficient);
    }
    let p = GaussPair::from_uv(c, u, v).pow(t);
    if !p.g0.re.is_zero() || !p.g1.im.is_zero() {
        return Err(SumError::MalformedPower(format!(
            "rational part {} and i*sqrt(c) part {} should vanish",
            p.g0.re, p.g1.im
        )));
    }
    let (r, r_rem) = p.g1.re.div_rem(u);
    let (i, i_rem) = p.g0.im.div_rem(v);
    if !r_rem.is_zero() || !i_rem.is_zero() {
        return Err(SumError::MalformedPower(format!(
            "coefficients {} and {} not divisible by u and v",
            p.g1.re, p.g0.im
        )));
    }
    Ok(SumPair { r, i })
}

/// One residue comparison in a [`CongruenceReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceLine {
    pub name: &'static str,
    #[serde(with = "decimal")]
    pub modulus: Integer,
    /// Residue of the sum itself.
    #[serde(with = "decimal")]
    pub residue: Integer,
    /// Residue predicted by expanding the sum; uses `(-v^2)^((t-1)/2)`.
    #[serde(with = "decimal")]
    pub expected: Integer,
    /// Residue of the variant written with `(-v)^((t-1)/2)`, reported for
    /// comparison only.
    #[serde(with = "decimal")]
    pub linear_v_variant: Integer,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub sums: SumPair,
    pub lines: Vec<CongruenceLine>,
}

impl CongruenceReport {
    pub fn all_hold(&self) -> bool {
        self.lines.iter().all(|l| l.holds)
    }
}

/// Checks the residues of `R` and `I` modulo `t` and modulo `c`.
///
/// Only the `j = 0` term of `R` survives mod `t` and only the last term of
/// either sum survives mod `c` (or mod `t` for `I`), since the binomials
/// `C(t, s)` with `0 < s < t` are divisible by the prime `t`.
pub fn congruence_check(
    c: &Integer,
    u: &Integer,
    v: &Integer,
    t: u32,
) -> Result<CongruenceReport, SumError> {
    if t < 3 || t.is_multiple_of(2) || !arith::is_prime(&Integer::from(t)) {
        return Err(SumError::NotOddPrime(t));
    }
    let r = r_sum(c, u, v, t)?;
    let i = i_sum(c, u, v, t)?;
    let tt = Integer::from(t);
    let half = (t as usize - 1) / 2;
    let neg_v2_pow = num_traits::pow(-(v * v), half);
    let neg_v_pow = num_traits::pow(-v.clone(), half);
    let modc = c.clone();

    let line = |name, value: &Integer, modulus: &Integer, expected: Integer, variant: Integer| {
        let residue = value.mod_floor(modulus);
        let expected = expected.mod_floor(modulus);
        CongruenceLine {
            name,
            modulus: modulus.clone(),
            holds: residue == expected,
            residue,
            expected,
            linear_v_variant: variant.mod_floor(modulus),
        }
    };

    let r_mod_t_expected = num_traits::pow(u.clone(), t as usize - 1) * num_traits::pow(c.clone(), half);
    let lines = vec![
        line("R mod t", &r, &tt, r_mod_t_expected.clone(), r_mod_t_expected),
        line("R mod c", &r, &modc, &tt * &neg_v2_pow, &tt * &neg_v_pow),
        line("I mod t", &i, &tt, neg_v2_pow.clone(), neg_v_pow.clone()),
        line("I mod c", &i, &modc, neg_v2_pow, neg_v_pow),
    ];
    Ok(CongruenceReport {
        sums: SumPair { r, i },
        lines,
    })
}
