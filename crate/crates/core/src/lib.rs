//! Solver and certification toolkit for `c*x^2 + p^(2m) = 4*y^n`.
//!
//! * [`arith`]: gcd, primality, factorization, square tests
//! * [`classnum`]: class numbers `h(-c)` from reduced forms
//! * [`rsums`]: the sums `R(c,u,v,t)`, `I(c,u,v,t)` and their ring identity
//! * [`lehmer`]: Lehmer numbers, primitive divisors, defect tables
//! * [`fiblucas`]: Fibonacci/Lucas numbers and their square classifications
//! * [`solver`]: the decision procedure, brute-force oracle and corollary fixtures
//! * [`parse`]: text parsers for integers and instances

pub mod arith;
pub mod classnum;
pub mod decimal;
pub mod fiblucas;
pub mod lehmer;
pub mod parse;
pub mod poly;
pub mod rsums;
pub mod solver;

pub use arith::Integer;
pub use solver::{solve, ProblemInstance, SolveOutcome, Verdict};
