//! Integer polynomials and exact integer root finding on an interval.
//!
//! Roots are located without floating point: the real critical points of
//! `f` are bracketed between consecutive integers by recursing on `f'`, and
//! on each stretch where `f` is monotone a binary search finds the integer
//! zero if there is one.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::arith::Integer;

/// Polynomial with integer coefficients, highest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Integer>,
}

impl Poly {
    pub fn new(coeffs: Vec<Integer>) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        Poly {
            coeffs: coeffs[lead..].to_vec(),
        }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, w: &Integer) -> Integer {
        self.coeffs
            .iter()
            .fold(Integer::zero(), |acc, c| acc * w + c)
    }

    pub fn derivative(&self) -> Poly {
        let d = self.coeffs.len().saturating_sub(1);
        Poly::new(
            self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Integer::from(d - i))
                .collect(),
        )
    }

    /// `self + k` as a new polynomial.
    pub fn add_constant(&self, k: &Integer) -> Poly {
        let mut coeffs = self.coeffs.clone();
        match coeffs.last_mut() {
            Some(last) => *last += k,
            None => coeffs.push(k.clone()),
        }
        Poly::new(coeffs)
    }

    /// Every integer `w` in `[lo, hi]` with `self(w) = 0`, ascending.
    ///
    /// The zero polynomial has every point as a root; it returns an empty
    /// list rather than enumerating the interval.
    pub fn integer_roots(&self, lo: &Integer, hi: &Integer) -> Vec<Integer> {
        if lo > hi || self.degree().is_none() {
            return Vec::new();
        }
        let splits = self.monotone_splits(lo, hi);
        let mut roots: Vec<Integer> = Vec::new();
        let mut push = |w: Integer| {
            if roots.last() != Some(&w) {
                roots.push(w);
            }
        };
        for pair in splits.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa.is_zero() {
                push(a.clone());
            }
            if b - a > Integer::from(1) && fa.sign() != fb.sign() && !fb.is_zero() && !fa.is_zero()
            {
                if let Some(w) = self.zero_in_monotone(a, b, &fa) {
                    push(w);
                }
            }
            if fb.is_zero() {
                push(b.clone());
            }
        }
        if splits.len() == 1 && self.eval(&splits[0]).is_zero() {
            push(splits[0].clone());
        }
        roots
    }

    /// Sorted points covering `[lo, hi]` such that between neighbours either
    /// `self` is monotone over the reals or the gap is at most 1.
    fn monotone_splits(&self, lo: &Integer, hi: &Integer) -> Vec<Integer> {
        if self.coeffs.len() <= 2 || lo == hi {
            return if lo == hi {
                vec![lo.clone()]
            } else {
                vec![lo.clone(), hi.clone()]
            };
        }
        let deriv = self.derivative();
        let inner = deriv.monotone_splits(lo, hi);
        let mut out: Vec<Integer> = Vec::with_capacity(inner.len() * 2);
        for pair in inner.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if out.last() != Some(a) {
                out.push(a.clone());
            }
            if b - a > Integer::from(1) {
                let (da, db) = (deriv.eval(a), deriv.eval(b));
                if !da.is_zero() && !db.is_zero() && da.sign() != db.sign() {
                    // deriv is monotone on [a, b]: its one root sits in [t, t+1].
                    let t = deriv.last_with_sign(a, b, &da);
                    let t1 = &t + 1u32;
                    if &t != a {
                        out.push(t);
                    }
                    if &t1 != b {
                        out.push(t1);
                    }
                }
            }
            out.push(b.clone());
        }
        out
    }

    /// On a monotone stretch with `sign(f(a)) != sign(f(b))`, the largest
    /// `t` in `[a, b)` with `sign(f(t)) = sign(f(a))`.
    fn last_with_sign(&self, a: &Integer, b: &Integer, fa: &Integer) -> Integer {
        let (mut lo, mut hi) = (a.clone(), b.clone());
        while &hi - &lo > Integer::from(1) {
            let mid: Integer = (&lo + &hi) >> 1;
            if self.eval(&mid).sign() == fa.sign() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Integer zero strictly inside a monotone stretch, if any.
    fn zero_in_monotone(&self, a: &Integer, b: &Integer, fa: &Integer) -> Option<Integer> {
        let t = self.last_with_sign(a, b, fa);
        let t1 = &t + 1u32;
        match self.eval(&t1).cmp(&Integer::zero()) {
            Ordering::Equal => Some(t1),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| Integer::from(v)).collect())
    }

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    fn brute(p: &Poly, lo: i64, hi: i64) -> Vec<Integer> {
        (lo..=hi).map(int).filter(|w| p.eval(w).is_zero()).collect()
    }

    #[test]
    fn small_examples() {
        // (w - 3)(w - 10)(w + 4)
        let p = poly(&[1, -9, -22, 120]);
        assert_eq!(p.integer_roots(&int(-100), &int(100)), vec![int(-4), int(3), int(10)]);
        assert_eq!(p.integer_roots(&int(4), &int(9)), vec![]);
        assert_eq!(p.integer_roots(&int(10), &int(10)), vec![int(10)]);
        // double root
        let p = poly(&[1, -14, 49]);
        assert_eq!(p.integer_roots(&int(0), &int(1000)), vec![int(7)]);
        assert_eq!(poly(&[5]).integer_roots(&int(0), &int(9)), vec![]);
        assert_eq!(poly(&[]).integer_roots(&int(0), &int(9)), vec![]);
        assert_eq!(poly(&[0, 0, 2, -6]).degree(), Some(1));
    }

    #[test]
    fn derivative_example() {
        assert_eq!(poly(&[3, 0, -2, 7]).derivative(), poly(&[9, 0, -2]));
    }

    proptest! {
        #[test]
        fn matches_brute_force_on_products(
            roots in proptest::collection::vec(-60i64..60, 1..6),
            lead in prop_oneof![Just(1i64), Just(-1), Just(2), Just(-3)],
            shift in -3i64..3,
            lo in -80i64..0,
            hi in 0i64..80,
        ) {
            let mut coeffs = vec![int(lead)];
            for r in &roots {
                let mut next = coeffs.clone();
                next.push(Integer::zero());
                for (i, c) in coeffs.iter().enumerate() {
                    next[i + 1] -= c * int(*r);
                }
                coeffs = next;
            }
            let p = Poly::new(coeffs).add_constant(&int(shift));
            prop_assert_eq!(p.integer_roots(&int(lo), &int(hi)), brute(&p, lo, hi));
        }

        #[test]
        fn matches_brute_force_random(
            coeffs in proptest::collection::vec(-50i64..50, 1..7),
            lo in -60i64..0,
            hi in 0i64..60,
        ) {
            let p = poly(&coeffs);
            if p.degree().is_some() {
                prop_assert_eq!(p.integer_roots(&int(lo), &int(hi)), brute(&p, lo, hi));
            }
        }
    }
}
