//! Coefficient rings for chain-level elimination.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::int::Int;
use crate::error::{Error, Result};

/// The operations the reduction engine needs from a coefficient ring.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn from_int(&self, v: &Int) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// The inverse of `a` if `a` is a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = Int;

    fn zero(&self) -> Int {
        Int::ZERO
    }
    fn from_int(&self, v: &Int) -> Int {
        v.clone()
    }
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Int, b: &Int) -> Int {
        a + b
    }
    fn mul(&self, a: &Int, b: &Int) -> Int {
        a * b
    }
    fn neg(&self, a: &Int) -> Int {
        -a
    }
    fn unit_inverse(&self, a: &Int) -> Option<Int> {
        if a.is_unit() {
            Some(a.clone())
        } else {
            None
        }
    }
}

/// The field with `p` elements, `p` prime.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_int(&self, v: &Int) -> u64 {
        let p = self.p as i128;
        match v {
            Int::Small(x) => (*x as i128).rem_euclid(p) as u64,
            Int::Big(b) => {
                let r = &**b % num_bigint::BigInt::from(self.p);
                let r = num_traits::ToPrimitive::to_i128(&r).unwrap_or(0);
                r.rem_euclid(p) as u64
            }
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
}

pub fn is_prime(p: u64) -> bool {
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

/// Coefficient choice for homology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Integers,
    Mod(u64),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(p) => write!(f, "F{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u64 {
            let inv = f.unit_inverse(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.from_int(&Int::Small(-1)), 6);
        assert!(PrimeField::new(9).is_err());
    }
}
