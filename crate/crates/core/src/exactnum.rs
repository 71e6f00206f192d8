//! Exact integers and rationals, and their reduction modulo prime powers.
//!
//! Every quantity is carried as an exact [`BigRational`] until the very end,
//! where [`reduce_mod`] maps it into `Z/p^e`. A denominator divisible by `p`
//! is the single place where a congruence can become ill-posed, and it is
//! reported as [`Error::NotPIntegral`].

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn prime_power(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `2^e` as an exact rational; negative exponents allowed.
pub fn pow2(e: i64) -> BigRational {
    let mag = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        from_int(mag)
    } else {
        BigRational::new_raw(BigInt::one(), mag)
    }
}

/// `(-1)^n`.
pub fn sign_pow(n: u64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p_big = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, rem) = m.div_rem(&p_big);
        if !rem.is_zero() {
            return Ok(v);
        }
        m = q;
        v += 1;
    }
}

/// `v` such that `q = p^v * (p-free numerator / p-free denominator)`.
pub fn padic_valuation(q: &BigRational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let vn = int_valuation(q.numer(), p)? as i64;
    let vd = int_valuation(q.denom(), p)? as i64;
    Ok(vn - vd)
}

/// `x` in `[0, m)` with `a * x ≡ 1 (mod m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let not_invertible = || Error::NotInvertible {
        a: a.to_string(),
        m: m.to_string(),
    };
    if !m.is_positive() {
        return Err(not_invertible());
    }
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(not_invertible());
    }
    Ok(ext.x.mod_floor(m))
}

/// Reduces a `p`-integral rational into `Z/p^e`.
pub fn reduce_mod(q: &BigRational, p: u64, e: u32) -> Result<Residue> {
    check_modulus(p, e)?;
    let p_big = BigInt::from(p);
    if (q.denom() % &p_big).is_zero() {
        return Err(Error::NotPIntegral {
            p,
            value: q.to_string(),
        });
    }
    let m = BigInt::from(prime_power(p, e));
    let inv = mod_inverse(q.denom(), &m)?;
    Ok(Residue::reduced(q.numer() * inv, p, e, &m))
}

/// Reduces `num / den` without first bringing the fraction to lowest terms.
///
/// Only powers of `p` are cancelled, so this avoids a full gcd on very large
/// operands. Fails when the quotient is not `p`-integral.
pub fn reduce_fraction(num: &BigInt, den: &BigInt, p: u64, e: u32) -> Result<Residue> {
    check_modulus(p, e)?;
    let vd = int_valuation(den, p)?;
    let p_big = BigInt::from(p);
    let (mut num, mut den) = (num.clone(), den.clone());
    if vd > 0 {
        let pv = p_big.pow(vd as u32);
        let (q, rem) = num.div_rem(&pv);
        if !rem.is_zero() {
            return Err(Error::NotPIntegral {
                p,
                value: format!("{num}/{den}"),
            });
        }
        num = q;
        den /= pv;
    }
    let m = BigInt::from(prime_power(p, e));
    let inv = mod_inverse(&den, &m)?;
    Ok(Residue::reduced(num * inv, p, e, &m))
}

fn check_modulus(p: u64, e: u32) -> Result<()> {
    if e == 0 {
        return Err(Error::ZeroExponent);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// An element of `Z/p^e` with its modulus attached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    p: u64,
    e: u32,
}

impl Residue {
    /// Any integer, reduced to its representative in `[0, p^e)`.
    pub fn new(value: impl Into<BigInt>, p: u64, e: u32) -> Result<Self> {
        check_modulus(p, e)?;
        let m = BigInt::from(prime_power(p, e));
        Ok(Self::reduced(value.into(), p, e, &m))
    }

    pub fn zero(p: u64, e: u32) -> Result<Self> {
        Self::new(BigInt::zero(), p, e)
    }

    // Caller guarantees p prime and e > 0.
    fn reduced(value: BigInt, p: u64, e: u32, m: &BigInt) -> Self {
        let value = value
            .mod_floor(m)
            .to_biguint()
            .expect("mod_floor by a positive modulus is nonnegative");
        Residue { value, p, e }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> BigUint {
        prime_power(self.p, self.e)
    }

    /// The modulus written as `p^e`.
    pub fn modulus_label(&self) -> String {
        format!("{}^{}", self.p, self.e)
    }

    pub fn same_modulus(&self, other: &Residue) -> bool {
        self.p == other.p && self.e == other.e
    }

    /// The smallest nonnegative integer representative.
    pub fn lift(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.value.clone())
    }

    fn binary(&self, other: &Residue, op: impl Fn(BigInt, BigInt) -> BigInt) -> Result<Residue> {
        if !self.same_modulus(other) {
            return Err(Error::ModulusMismatch {
                left: self.modulus_label(),
                right: other.modulus_label(),
            });
        }
        let m = BigInt::from(self.modulus());
        Ok(Self::reduced(op(self.lift(), other.lift()), self.p, self.e, &m))
    }

    pub fn checked_add(&self, other: &Residue) -> Result<Residue> {
        self.binary(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Residue) -> Result<Residue> {
        self.binary(other, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &Residue) -> Result<Residue> {
        self.binary(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Residue {
        let m = BigInt::from(self.modulus());
        Self::reduced(-self.lift(), self.p, self.e, &m)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus_label())
    }
}
