//! Arithmetic in the prime field F_p.
//!
//! The modulus is restricted to primes below 2^31 so that products of two
//! residues fit in a `u64` without reduction tricks.

use crate::error::{Error, Result};

/// Largest admissible modulus.
pub const MAX_P: u64 = 1 << 31;

/// Deterministic primality test by trial division; adequate for p < 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_modulus(p: u64) -> Result<()> {
    if p > MAX_P {
        return Err(Error::Invalid(format!("modulus {p} exceeds 2^31")));
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("modulus {p} is not prime")));
    }
    Ok(())
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

/// Reduce an arbitrary signed integer into [0, p).
pub fn reduce_i128(n: i128, p: u64) -> u64 {
    let m = (n % p as i128 + p as i128) as u64;
    if m >= p {
        m - p
    } else {
        m
    }
}

pub fn pow(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero mod p.
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero");
    pow(a, (p - 2) as u128, p)
}

/// An element of F_p.  Arithmetic panics on modulus mismatch; residues are
/// kept reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub fn new(value: i128, p: u64) -> Result<Fp> {
        check_modulus(p)?;
        Ok(Fp {
            value: reduce_i128(value, p),
            p,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        Ok(Fp {
            value: inv(self.value, self.p),
            p: self.p,
        })
    }

    pub fn pow(&self, e: u128) -> Fp {
        Fp {
            value: pow(self.value, e, self.p),
            p: self.p,
        }
    }

    fn check(&self, other: &Fp) {
        assert_eq!(self.p, other.p, "prime field modulus mismatch");
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            value: add(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            value: sub(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            value: mul(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: neg(self.value, self.p),
            p: self.p,
        }
    }
}

impl std::fmt::Display for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(7));
        assert!(is_prime(2147483647));
        assert!(!is_prime(1));
        assert!(!is_prime(9));
        assert!(!is_prime(91));
    }

    #[test]
    fn field_ops() {
        let p = 7;
        for a in 0..p {
            for b in 0..p {
                assert_eq!(add(a, b, p), (a + b) % p);
                assert_eq!(sub(a, b, p), (a + p - b) % p);
                assert_eq!(mul(a, b, p), a * b % p);
            }
            if a != 0 {
                assert_eq!(mul(a, inv(a, p), p), 1);
            }
        }
    }

    #[test]
    fn fermat_fixed_points() {
        // every residue is fixed by the Frobenius on the prime field
        for p in [2u64, 3, 5, 7] {
            for a in 0..p {
                assert_eq!(pow(a, p as u128, p), a);
            }
        }
    }

    #[test]
    fn reduce_negative() {
        assert_eq!(reduce_i128(-1, 3), 2);
        assert_eq!(reduce_i128(-6, 3), 0);
        assert_eq!(reduce_i128(14, 3), 2);
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(Fp::new(1, 6).is_err());
        assert!(Fp::new(1, 1 << 32).is_err());
    }
}
