//! Bernoulli and Euler numbers and polynomials, exactly and modulo `p`;
//! Fermat quotients; Legendre symbols.
//!
//! The exact Bernoulli route is the reference; the modular table is the
//! working path for indices up to `p - 2`, where no Bernoulli denominator is
//! divisible by `p`. Euler values come from the Bernoulli polynomials through
//! `E_{n-1}(x) = 2^n/n (B_n((x+1)/2) - B_n(x/2))`, and Euler numbers through
//! `E_m = 2^m E_m(1/2)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::exactnum::{from_int, is_prime, ratio, reduce_mod, BigRational, Residue};

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Inverse modulo a prime by Fermat; `a` must be nonzero mod p.
fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn small_residue(q: &BigRational, p: u64) -> Result<u64> {
    Ok(reduce_mod(q, p, 1)?.to_u64().expect("residue below p"))
}

/// All of `B_0, ..., B_n` from `sum_{j=0}^{n} C(n+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: u64) -> Vec<BigRational> {
    let mut table: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    table.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += b * from_int(binomial(m as i64 + 1, j as i64));
        }
        table.push(-acc / from_int(BigInt::from(m + 1)));
    }
    table
}

pub fn bernoulli_exact(n: u64) -> BigRational {
    bernoulli_numbers(n).pop().expect("table is never empty")
}

/// `B_n(x) = sum_k C(n,k) B_k x^{n-k}`, exact.
pub fn bernoulli_poly_exact(n: u64, x: &BigRational) -> BigRational {
    eval_bernoulli_poly(&bernoulli_numbers(n), n, x)
}

/// `B_n(x)` from a precomputed `B_0..B_n` (at least `n + 1` entries).
pub(crate) fn eval_bernoulli_poly(b: &[BigRational], n: u64, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut x_pow = BigRational::one();
    // descending k so x_pow tracks x^{n-k}
    for k in (0..=n).rev() {
        acc += &b[k as usize] * from_int(binomial(n as i64, k as i64)) * &x_pow;
        x_pow *= x;
    }
    acc
}

/// `B_0, ..., B_maxIndex` reduced modulo `p`, for `maxIndex <= p - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTableModP {
    p: u64,
    entries: Vec<u64>,
    factorials: Vec<u64>,
    inv_factorials: Vec<u64>,
}

impl BernoulliTableModP {
    pub fn new(p: u64, max_index: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if max_index + 2 > p {
            return Err(Error::IndexRange {
                index: max_index,
                p,
                max: p.saturating_sub(2),
            });
        }
        // factorials up to max_index + 1 <= p - 1 are units mod p
        let top = max_index as usize + 1;
        let mut factorials = vec![1u64; top + 1];
        for i in 1..=top {
            factorials[i] = mul_mod(factorials[i - 1], i as u64, p);
        }
        let mut inv_factorials = vec![1u64; top + 1];
        inv_factorials[top] = inv_mod_prime(factorials[top], p);
        for i in (1..=top).rev() {
            inv_factorials[i - 1] = mul_mod(inv_factorials[i], i as u64, p);
        }

        let mut table = BernoulliTableModP {
            p,
            entries: Vec::with_capacity(top),
            factorials,
            inv_factorials,
        };
        table.entries.push(1 % p);
        for m in 1..=max_index {
            let mut acc = 0u64;
            for (j, &b) in table.entries.iter().enumerate() {
                if b != 0 {
                    acc = (acc + mul_mod(table.binomial(m + 1, j as u64), b, p)) % p;
                }
            }
            let inv = inv_mod_prime(m + 1, p);
            table.entries.push((p - mul_mod(acc, inv, p)) % p);
        }
        Ok(table)
    }

    fn binomial(&self, n: u64, k: u64) -> u64 {
        let p = self.p;
        mul_mod(
            self.factorials[n as usize],
            mul_mod(
                self.inv_factorials[k as usize],
                self.inv_factorials[(n - k) as usize],
                p,
            ),
            p,
        )
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn max_index(&self) -> u64 {
        self.entries.len() as u64 - 1
    }

    /// Residues `B_k mod p` as integers in `[0, p)`.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, k: u64) -> Result<Residue> {
        let value = *self.entries.get(k as usize).ok_or(Error::IndexRange {
            index: k,
            p: self.p,
            max: self.max_index(),
        })?;
        Residue::new(value, self.p, 1)
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n > self.max_index() {
            return Err(Error::IndexRange {
                index: n,
                p: self.p,
                max: self.max_index(),
            });
        }
        Ok(())
    }

    fn poly_small(&self, n: u64, x: &BigRational) -> Result<u64> {
        self.check_index(n)?;
        let p = self.p;
        let x = small_residue(x, p)?;
        let mut acc = 0u64;
        let mut x_pow = 1 % p;
        for k in (0..=n).rev() {
            let term = mul_mod(self.binomial(n, k), self.entries[k as usize], p);
            acc = (acc + mul_mod(term, x_pow, p)) % p;
            x_pow = mul_mod(x_pow, x, p);
        }
        Ok(acc)
    }

    /// `B_n(x) mod p`.
    pub fn poly(&self, n: u64, x: &BigRational) -> Result<Residue> {
        Residue::new(self.poly_small(n, x)?, self.p, 1)
    }

    /// `E_m(x) mod p`, needs `m + 1` in the table.
    pub fn euler_poly(&self, m: u64, x: &BigRational) -> Result<Residue> {
        let n = m + 1;
        self.check_index(n)?;
        let p = self.p;
        small_residue(x, p)?;
        let two = from_int(BigInt::from(2));
        let upper = self.poly_small(n, &((x + BigRational::one()) / &two))?;
        let lower = self.poly_small(n, &(x / &two))?;
        let scale = mul_mod(pow_mod(2, n, p), inv_mod_prime(n % p, p), p);
        let diff = (upper + p - lower) % p;
        Residue::new(mul_mod(scale, diff, p), p, 1)
    }

    /// Euler number `E_m mod p`, as `2^m E_m(1/2)`.
    pub fn euler_number(&self, m: u64) -> Result<Residue> {
        let half = self.euler_poly(m, &ratio(1, 2))?;
        let half = half.to_u64().expect("residue below p");
        Residue::new(mul_mod(pow_mod(2, m, self.p), half, self.p), self.p, 1)
    }
}

/// `B_n(x) mod p` for `0 <= n <= p - 2` and `p`-integral `x`.
pub fn bernoulli_poly_mod_p(n: u64, x: &BigRational, p: u64) -> Result<Residue> {
    BernoulliTableModP::new(p, n)?.poly(n, x)
}

fn euler_table(m: u64, p: u64) -> Result<BernoulliTableModP> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m + 3 > p {
        return Err(Error::IndexRange {
            index: m,
            p,
            max: p.saturating_sub(3),
        });
    }
    BernoulliTableModP::new(p, m + 1)
}

/// `E_m(x) mod p` for `0 <= m <= p - 3`.
pub fn euler_poly_mod_p(m: u64, x: &BigRational, p: u64) -> Result<Residue> {
    euler_table(m, p)?.euler_poly(m, x)
}

/// Euler number `E_m mod p` for `0 <= m <= p - 3`.
pub fn euler_number_mod_p(m: u64, p: u64) -> Result<Residue> {
    euler_table(m, p)?.euler_number(m)
}

/// Fermat quotient `q_p(2) = (2^{p-1} - 1)/p`.
pub fn fermat_quotient2(p: u64) -> BigInt {
    ((BigInt::one() << (p - 1)) - 1u32) / p
}

/// Legendre symbol by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}
