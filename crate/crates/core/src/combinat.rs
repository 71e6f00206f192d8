//! Factorials, binomials, raising factorials and harmonic numbers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{from_int, BigRational};

/// Generalized binomial coefficient `n(n-1)...(n-k+1)/k!` for any integer `n`.
///
/// Zero when `k < 0`, or when `n >= 0` and `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || (n >= 0 && k > n) {
        return BigInt::zero();
    }
    let k = if n >= 0 && k > n - k { n - k } else { k };
    let mut c = BigInt::one();
    // C(n, i + 1) = C(n, i) (n - i) / (i + 1), exact at every step.
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

/// `C(2n, n)`.
pub fn central_binomial(n: u64) -> BigInt {
    binomial(2 * n as i64, n as i64)
}

/// `a(a-1)...(a-k+1)/k!` for a rational `a`.
pub fn binomial_rational(a: &BigRational, k: u64) -> BigRational {
    let mut num = BigRational::one();
    let mut term = a.clone();
    for _ in 0..k {
        num *= &term;
        term -= BigRational::one();
    }
    num / from_int(factorial(k))
}

/// Raising factorial `(a)_n = a(a+1)...(a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= &term;
        term += BigRational::one();
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    product_range(1, n)
}

/// `1 / n!`, taken to be zero for negative `n`.
pub fn reciprocal_factorial(n: i64) -> BigRational {
    if n < 0 {
        BigRational::zero()
    } else {
        BigRational::new_raw(BigInt::one(), factorial(n as u64))
    }
}

/// `lo (lo+1) ... hi`, by binary splitting; empty products are 1.
pub fn product_range(lo: u64, hi: u64) -> BigInt {
    if lo > hi {
        return BigInt::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigInt::one(), |acc, v| acc * v);
    }
    let mid = lo + (hi - lo) / 2;
    product_range(lo, mid) * product_range(mid + 1, hi)
}

/// Product of arbitrary integers by a balanced tree.
pub fn product_of(values: &[BigInt]) -> BigInt {
    match values.len() {
        0 => BigInt::one(),
        1 => values[0].clone(),
        n => product_of(&values[..n / 2]) * product_of(&values[n / 2..]),
    }
}

/// `H_n^{(order)} = sum_{0<k<=n} 1/k^order`, exact.
pub fn harmonic(n: u64, order: u32) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    let (num, den) = harmonic_split(1, n, order);
    BigRational::new(num, den)
}

// sum_{k=lo}^{hi} 1/k^order as an unreduced fraction.
fn harmonic_split(lo: u64, hi: u64, order: u32) -> (BigInt, BigInt) {
    if hi - lo < 8 {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for k in lo..=hi {
            let kp = BigInt::from(k).pow(order);
            num = num * &kp + &den;
            den *= kp;
        }
        return (num, den);
    }
    let mid = lo + (hi - lo) / 2;
    let (a, b) = harmonic_split(lo, mid, order);
    let (c, d) = harmonic_split(mid + 1, hi, order);
    (a * &d + c * &b, b * d)
}

/// `q - floor(q)`, always in `[0, 1)`.
pub fn frac_part(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Prefix tables of `H_k` and `H_k^{(2)}` for `0 <= k <= limit`.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    first: Vec<BigRational>,
    second: Vec<BigRational>,
}

impl HarmonicTable {
    pub fn new(limit: u64) -> Self {
        let mut first = Vec::with_capacity(limit as usize + 1);
        let mut second = Vec::with_capacity(limit as usize + 1);
        first.push(BigRational::zero());
        second.push(BigRational::zero());
        for k in 1..=limit {
            let kb = BigInt::from(k);
            let h1 = &first[k as usize - 1] + BigRational::new_raw(BigInt::one(), kb.clone());
            let h2 = &second[k as usize - 1] + BigRational::new_raw(BigInt::one(), &kb * &kb);
            first.push(h1);
            second.push(h2);
        }
        HarmonicTable { first, second }
    }

    pub fn limit(&self) -> u64 {
        self.first.len() as u64 - 1
    }

    /// `H_k`; panics beyond the table limit.
    pub fn h1(&self, k: u64) -> &BigRational {
        &self.first[k as usize]
    }

    /// `H_k^{(2)}`; panics beyond the table limit.
    pub fn h2(&self, k: u64) -> &BigRational {
        &self.second[k as usize]
    }
}

/// Memoized `n!`, grown on demand.
///
/// Build one per worker, or size it up front and share it read-only.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    values: Vec<BigInt>,
}

impl Default for FactorialTable {
    fn default() -> Self {
        Self::new(0)
    }
}

impl FactorialTable {
    pub fn new(limit: u64) -> Self {
        let mut table = FactorialTable {
            values: vec![BigInt::one()],
        };
        table.ensure(limit);
        table
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn ensure(&mut self, limit: u64) {
        while self.limit() < limit {
            let n = self.values.len() as u64;
            let next = &self.values[n as usize - 1] * n;
            self.values.push(next);
        }
    }

    /// `n!` when already tabulated.
    pub fn get(&self, n: u64) -> Option<&BigInt> {
        self.values.get(n as usize)
    }

    pub fn factorial(&mut self, n: u64) -> &BigInt {
        self.ensure(n);
        &self.values[n as usize]
    }
}
