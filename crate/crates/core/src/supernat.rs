//! Supernatural numbers given by a cycling list of primes. The partial
//! product `q_n` sets the partition scale `1/q_n` of the level-`n` basis.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{CuError, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Supernatural {
    primes: Vec<u64>,
}

impl Supernatural {
    /// The list is cycled: the n-th factor is `primes[n % len]`.
    pub fn new(primes: Vec<u64>) -> Result<Supernatural> {
        if primes.is_empty() {
            return Err(CuError::Invalid("supernatural number needs at least one prime".into()));
        }
        if primes.iter().any(|&p| p < 2 || !is_prime(p)) {
            return Err(CuError::Invalid(format!("non-prime factor in {primes:?}")));
        }
        Ok(Supernatural { primes })
    }

    pub fn pow_of(p: u64) -> Supernatural {
        Supernatural::new(vec![p]).expect("prime")
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `q_n`, the product of the first `n` factors; `q_0 = 1`.
    pub fn partial(&self, n: usize) -> BigInt {
        let mut q = BigInt::from(1);
        for i in 0..n {
            q *= self.primes[i % self.primes.len()];
        }
        q
    }

    /// `1/q_n` as a rational scale.
    pub fn scale(&self, n: usize) -> Rat {
        Rat::new(BigInt::from(1), self.partial(n))
    }

    /// `q_n` as usize when it fits, for cell counting.
    pub fn partial_usize(&self, n: usize) -> Result<usize> {
        let q = self.partial(n);
        let (_, digits) = q.to_u64_digits();
        if digits.len() != 1 || digits[0] > (1 << 40) {
            return Err(CuError::TooLarge(format!("q_{n} = {q}")));
        }
        Ok(digits[0] as usize)
    }
}

impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        write!(f, "({})^oo", strs.join("*"))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
