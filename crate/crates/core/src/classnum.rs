//! Class numbers of imaginary quadratic fields by counting reduced forms.

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::arith::{self, ArithError, Integer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassNumberError {
    #[error("{0} is not a square-free positive integer")]
    NotSquarefree(Integer),
    #[error("discriminant for c = {0} is too large for exhaustive form enumeration")]
    TooLarge(Integer),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Negative discriminant `D` with `D = 0, 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Discriminant(i128);

impl Discriminant {
    pub fn value(self) -> i128 {
        self.0
    }
}

/// The form `a X^2 + b XY + k Y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedForm {
    pub a: i128,
    pub b: i128,
    pub k: i128,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.k
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, k) = (self.a, self.b, self.k);
        -a < b && b <= a && a <= k && (b >= 0 || (a != k && a != b.abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.k) == 1
    }
}

/// Largest `|D|` accepted; enumeration cost grows linearly in `|D|`.
pub const MAX_ABS_DISCRIMINANT: i128 = 10_000_000_000;

/// `D = -c` when `c = 3 (mod 4)`, otherwise `D = -4c`.
pub fn fundamental_discriminant(c: &Integer) -> Result<Discriminant, ClassNumberError> {
    if !arith::is_squarefree(c)? {
        return Err(ClassNumberError::NotSquarefree(c.clone()));
    }
    let small = c
        .to_i128()
        .filter(|&v| v <= MAX_ABS_DISCRIMINANT / 4 || (v % 4 == 3 && v <= MAX_ABS_DISCRIMINANT))
        .ok_or_else(|| ClassNumberError::TooLarge(c.clone()))?;
    Ok(if small.rem_euclid(4) == 3 {
        Discriminant(-small)
    } else {
        Discriminant(-4 * small)
    })
}

/// All reduced primitive forms of discriminant `disc`, ordered by `(a, b)`.
///
/// Reduction forces `3a^2 <= |D|`, so the outer loop is finite.
pub fn reduced_forms(disc: Discriminant) -> Vec<ReducedForm> {
    let d = disc.0;
    let abs_d = -d;
    let mut out = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= abs_d {
        // b has the parity of D
        let mut b = -a + 1;
        if (b - d).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let form = ReducedForm {
                    a,
                    b,
                    k: num / (4 * a),
                };
                if form.is_reduced() && form.is_primitive() {
                    out.push(form);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

/// `h(-c)`: number of reduced primitive forms of the fundamental discriminant.
pub fn class_number(c: &Integer) -> Result<u64, ClassNumberError> {
    let disc = fundamental_discriminant(c)?;
    Ok(reduced_forms(disc).len() as u64)
}

/// `gcd(n, 2 h(-c)) = 1`.
pub fn gcd_condition(n: &Integer, c: &Integer) -> Result<bool, ClassNumberError> {
    let h = class_number(c)?;
    let g = arith::gcd(n, &Integer::from(2 * h));
    Ok(g.abs() == Integer::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    // Naive oracle: scan every (a, b) pair with |b| <= a <= sqrt(|D|) and
    // apply the reduction rules directly.
    fn naive_count(d: i128) -> usize {
        let mut count = 0;
        for a in 1..=(-d) {
            if a * a > -d {
                break;
            }
            for b in -a..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let f = ReducedForm {
                    a,
                    b,
                    k: num / (4 * a),
                };
                if f.is_reduced() && f.is_primitive() {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(fundamental_discriminant(&int(7)).unwrap().value(), -7);
        assert_eq!(fundamental_discriminant(&int(5)).unwrap().value(), -20);
        assert_eq!(fundamental_discriminant(&int(15)).unwrap().value(), -15);
        assert_eq!(
            fundamental_discriminant(&int(12)),
            Err(ClassNumberError::NotSquarefree(int(12)))
        );
    }

    #[test]
    fn oversized_discriminant_rejected() {
        let c = Integer::from(10_000_000_019i64);
        assert!(matches!(
            fundamental_discriminant(&c),
            Err(ClassNumberError::TooLarge(_))
        ));
        assert!(fundamental_discriminant(&Integer::from(2_500_000_001i64)).is_err());
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(&int(7)).unwrap(), 1);
        assert_eq!(class_number(&int(15)).unwrap(), 2);
        assert_eq!(class_number(&int(47)).unwrap(), 5);
        assert_eq!(class_number(&int(29)).unwrap(), 6);
        assert_eq!(class_number(&int(1)).unwrap(), 1);
        assert_eq!(class_number(&int(5)).unwrap(), 2);
    }

    #[test]
    fn forms_of_minus_15() {
        let forms = reduced_forms(Discriminant(-15));
        assert_eq!(
            forms,
            vec![
                ReducedForm { a: 1, b: 1, k: 4 },
                ReducedForm { a: 2, b: 1, k: 2 }
            ]
        );
        for f in forms {
            assert_eq!(f.discriminant(), -15);
        }
    }

    #[test]
    fn heegner_numbers_have_class_number_one() {
        for c in [1, 2, 3, 7, 11, 19, 43, 67, 163] {
            assert_eq!(class_number(&int(c)).unwrap(), 1, "c = {c}");
        }
    }

    #[test]
    fn gcd_condition_examples() {
        assert!(gcd_condition(&int(3), &int(7)).unwrap());
        assert!(!gcd_condition(&int(4), &int(7)).unwrap());
        assert!(!gcd_condition(&int(5), &int(47)).unwrap());
    }

    #[test]
    fn enumeration_matches_naive_scan() {
        for c in 1i64..400 {
            let Ok(disc) = fundamental_discriminant(&int(c)) else {
                continue;
            };
            assert_eq!(reduced_forms(disc).len(), naive_count(disc.value()), "c = {c}");
        }
    }

    #[test]
    fn class_number_of_prime_below_prime() {
        for q in (3i64..=1000).filter(|&q| arith::is_prime(&int(q))) {
            assert!(class_number(&int(q)).unwrap() < q as u64, "q = {q}");
        }
    }
}
