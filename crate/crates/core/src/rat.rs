//! Exact rational coordinates. Every coordinate in this crate is a
//! `BigRational`; no floating point enters any order computation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CuError, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Parse "p/q" or a plain integer "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk_err = || CuError::Parse(format!("invalid rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| mk_err())?;
        let den: BigInt = q.trim().parse().map_err(|_| mk_err())?;
        if den.is_zero() {
            return Err(CuError::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| mk_err())?;
        Ok(Rat::from_integer(num))
    }
}

/// Format as "p/q", or "p" when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduce into [0, 1) for circle coordinates.
pub fn mod1(r: &Rat) -> Rat {
    let f = r.floor();
    r - f
}

/// Arc-length distance on the circle of circumference 1.
pub fn circle_dist(a: &Rat, b: &Rat) -> Rat {
    let d = mod1(&(a - b));
    let alt = Rat::one() - &d;
    if d <= alt {
        d
    } else {
        alt
    }
}

/// Absolute distance on the line.
pub fn line_dist(a: &Rat, b: &Rat) -> Rat {
    (a - b).abs()
}
