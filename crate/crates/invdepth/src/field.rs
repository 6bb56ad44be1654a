//! Arithmetic in the prime field F_p with coefficients stored as canonical
//! residues in [0, p).

use crate::error::{Error, Result};

/// A prime field F_p, primality checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldPrime {
    p: u32,
}

impl FieldPrime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Structural(format!("{p} is not prime")));
        }
        Ok(FieldPrime { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn addm(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn negm(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mulm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn powm(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod p; panics on zero.
pub fn invm(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    powm(a, p as u64 - 2, p)
}
