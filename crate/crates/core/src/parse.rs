//! Parsers for integers and problem instances given as text.
//!
//! Integers accept an optional sign, `_` digit separators, and the shorthands
//! `B^E` and `MeE` (`M * 10^E`). Instances are `key=value` lists such as
//! `c=7,p=5,m=1,n=3`.

use std::str::FromStr;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::Integer;
use crate::solver::ProblemInstance;

/// Longest digit string accepted.
pub const MAX_DIGITS: usize = 10_000;
/// Largest exponent accepted in `B^E` and `MeE`.
pub const MAX_EXPONENT: u32 = 4_096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("invalid integer literal {0:?}")]
    InvalidInteger(String),
    #[error("integer literal longer than {MAX_DIGITS} digits")]
    TooLong,
    #[error("exponent {0} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge(String),
    #[error("value {0} does not fit the field {1}")]
    OutOfRange(String, &'static str),
    #[error("unknown key {0:?}; expected c, p, m or n")]
    UnknownKey(String),
    #[error("key {0} given twice")]
    DuplicateKey(&'static str),
    #[error("missing key {0}")]
    MissingKey(&'static str),
    #[error("expected key=value, got {0:?}")]
    MalformedPair(String),
}

fn parse_plain(s: &str) -> Result<Integer, ParseError> {
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    if body.is_empty()
        || body.starts_with('_')
        || body.ends_with('_')
        || !body.bytes().all(|b| b.is_ascii_digit() || b == b'_')
    {
        return Err(ParseError::InvalidInteger(s.to_string()));
    }
    let digits: String = body.chars().filter(|&ch| ch != '_').collect();
    if digits.len() > MAX_DIGITS {
        return Err(ParseError::TooLong);
    }
    let v = Integer::from_str(&digits).map_err(|_| ParseError::InvalidInteger(s.to_string()))?;
    Ok(if neg { -v } else { v })
}

fn parse_exponent(s: &str) -> Result<u32, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::InvalidInteger(s.to_string()));
    }
    match s.parse::<u32>() {
        Ok(e) if e <= MAX_EXPONENT => Ok(e),
        _ => Err(ParseError::ExponentTooLarge(s.to_string())),
    }
}

pub fn parse_integer(input: &str) -> Result<Integer, ParseError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some((base, exp)) = s.split_once('^') {
        let base = parse_plain(base.trim())?;
        let exp = parse_exponent(exp.trim())?;
        return Ok(num_traits::pow(base, exp as usize));
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant = parse_plain(mant.trim())?;
        let exp = parse_exponent(exp.trim())?;
        return Ok(mant * num_traits::pow(Integer::from(10), exp as usize));
    }
    parse_plain(s)
}

/// [`parse_integer`] narrowed to `u32`.
pub fn parse_u32(input: &str, field: &'static str) -> Result<u32, ParseError> {
    let v = parse_integer(input)?;
    v.to_u32()
        .ok_or_else(|| ParseError::OutOfRange(v.to_string(), field))
}

/// [`parse_integer`] narrowed to `u64`.
pub fn parse_u64(input: &str, field: &'static str) -> Result<u64, ParseError> {
    let v = parse_integer(input)?;
    v.to_u64()
        .ok_or_else(|| ParseError::OutOfRange(v.to_string(), field))
}

/// Parses `c=..,p=..,m=..,n=..` in any order; commas, semicolons and
/// whitespace all separate pairs.
pub fn parse_instance(input: &str) -> Result<ProblemInstance, ParseError> {
    let mut c = None;
    let mut p = None;
    let mut m = None;
    let mut n = None;
    let pairs = input
        .split(|ch: char| ch == ',' || ch == ';' || ch.is_whitespace())
        .filter(|s| !s.is_empty());
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| ParseError::MalformedPair(pair.to_string()))?;
        let key = key.trim().to_ascii_lowercase();
        fn set<T>(slot: &mut Option<T>, v: T, name: &'static str) -> Result<(), ParseError> {
            if slot.replace(v).is_some() {
                Err(ParseError::DuplicateKey(name))
            } else {
                Ok(())
            }
        }
        match key.as_str() {
            "c" => set(&mut c, parse_integer(value)?, "c")?,
            "p" => set(&mut p, parse_integer(value)?, "p")?,
            "m" => set(&mut m, parse_u32(value, "m")?, "m")?,
            "n" => set(&mut n, parse_u32(value, "n")?, "n")?,
            _ => return Err(ParseError::UnknownKey(key)),
        }
    }
    Ok(ProblemInstance {
        c: c.ok_or(ParseError::MissingKey("c"))?,
        p: p.ok_or(ParseError::MissingKey("p"))?,
        m: m.ok_or(ParseError::MissingKey("m"))?,
        n: n.ok_or(ParseError::MissingKey("n"))?,
    })
}
