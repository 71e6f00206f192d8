//! The truncated hypergeometric series appearing on the left of the congruences.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::{factorial, pochhammer};
use crate::error::{Error, Result};
use crate::exactnum::{from_int, is_prime, ratio, sign_pow, BigRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesId {
    /// `sum_{n=0}^{(p-1)/2} (3n+1) C(2n,n)^3 / (-8)^n`
    S8Half,
    /// `sum_{n=0}^{p^r-1} (3n+1) C(2n,n)^3 / (-8)^n`
    S8Full,
    /// `sum_{k=0}^{(p-1)/2} (4k+1) (-1)^k ((1/2)_k / k!)^3`
    S64Vh,
    /// `sum_{k=0}^{p-1} (4k+1) C(2k,k)^3 / (-64)^k`
    S64Sun,
    /// `sum_{k=0}^{(p^r-1)/2} (4k+1) C(2k,k)^3 / (-64)^k`
    S64GuoHalf,
    /// `sum_{k=0}^{p^r-1} (4k+1) C(2k,k)^3 / (-64)^k`
    S64GuoFull,
    /// `sum_{n=0}^{(p-1)/2} (6n+1) C(2n,n)^3 / (-512)^n`
    S512Half,
    /// `sum_{n=0}^{p-1} (6n+1) C(2n,n)^3 / (-512)^n`
    S512Full,
    /// `sum_{k=0}^{(p+1)/2} (-1)^k (4k-1) (-1/2)_k^3 / k!^3`
    Sgl,
}

impl SeriesId {
    pub const ALL: [SeriesId; 9] = [
        SeriesId::S8Half,
        SeriesId::S8Full,
        SeriesId::S64Vh,
        SeriesId::S64Sun,
        SeriesId::S64GuoHalf,
        SeriesId::S64GuoFull,
        SeriesId::S512Half,
        SeriesId::S512Full,
        SeriesId::Sgl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::S8Half => "S8-half",
            SeriesId::S8Full => "S8-full",
            SeriesId::S64Vh => "S64-vh",
            SeriesId::S64Sun => "S64-sun",
            SeriesId::S64GuoHalf => "S64-guo-half",
            SeriesId::S64GuoFull => "S64-guo-full",
            SeriesId::S512Half => "S512-half",
            SeriesId::S512Full => "S512-full",
            SeriesId::Sgl => "Sgl",
        }
    }

    /// Whether the upper limit depends on `r`.
    pub fn uses_r(self) -> bool {
        matches!(self, SeriesId::S8Full | SeriesId::S64GuoHalf | SeriesId::S64GuoFull)
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// `p^r`, rejecting values that do not fit a machine word.
pub fn prime_power_u64(p: u64, r: u32) -> Result<u64> {
    p.checked_pow(r)
        .ok_or_else(|| Error::Config(format!("{p}^{r} does not fit in 64 bits")))
}

/// The exact partial sum, in lowest terms.
pub fn eval_series(id: SeriesId, p: u64, r: u32) -> Result<BigRational> {
    let (num, den) = series_fraction(id, p, r)?;
    Ok(BigRational::new(num, den))
}

/// The partial sum as an unreduced `num / den` with `den > 0`.
///
/// The central-binomial families come back over a power of two with the
/// common factor of two already cancelled, which is far cheaper than a gcd.
pub fn series_fraction(id: SeriesId, p: u64, r: u32) -> Result<(BigInt, BigInt)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::ZeroExponent);
    }
    let r = if id.uses_r() { r } else { 1 };
    let pr = prime_power_u64(p, r)?;
    let h = (p - 1) / 2;
    let fraction = match id {
        SeriesId::S8Half => central_cube_sum(h, 3, 1, 3),
        SeriesId::S8Full => central_cube_sum(pr - 1, 3, 1, 3),
        SeriesId::S64Sun => central_cube_sum(p - 1, 4, 1, 6),
        SeriesId::S64GuoHalf => central_cube_sum((pr - 1) / 2, 4, 1, 6),
        SeriesId::S64GuoFull => central_cube_sum(pr - 1, 4, 1, 6),
        SeriesId::S512Half => central_cube_sum(h, 6, 1, 9),
        SeriesId::S512Full => central_cube_sum(p - 1, 6, 1, 9),
        SeriesId::S64Vh => into_parts(van_hamme(h)),
        SeriesId::Sgl => into_parts(guo_liu((p + 1) / 2)),
    };
    Ok(fraction)
}

fn into_parts(q: BigRational) -> (BigInt, BigInt) {
    let (n, d) = q.into();
    (n, d)
}

/// `sum_{n=0}^{last} (a n + b) C(2n,n)^3 / (-2^shift)^n`.
///
/// Horner accumulation over the common denominator `2^{shift * last}`;
/// `C(2n,n)^3` is advanced by the exact ratio `(2(2n+1))^3 / (n+1)^3`.
pub fn central_cube_sum(last: u64, a: u64, b: u64, shift: u32) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut cube = BigInt::one();
    for n in 0..=last {
        acc <<= shift as usize;
        acc = -acc;
        acc += &cube * (a * n + b);
        let (up, down) = (2 * (2 * n as u128 + 1), n as u128 + 1);
        cube *= up * up * up;
        cube /= down * down * down;
    }
    // acc = sum (a n + b) C^3 (-1)^{last-n} 2^{shift (last-n)}
    if last % 2 == 1 {
        acc = -acc;
    }
    let twos = acc.trailing_zeros().unwrap_or(0).min(shift as u64 * last);
    acc >>= twos as usize;
    (acc, BigInt::one() << (shift as u64 * last - twos) as usize)
}

fn van_hamme(last: u64) -> BigRational {
    let half = ratio(1, 2);
    (0..=last)
        .map(|k| {
            let c = pochhammer(&half, k) / from_int(factorial(k));
            ratio((4 * k + 1) as i64 * sign_pow(k), 1) * &c * &c * &c
        })
        .sum()
}

fn guo_liu(last: u64) -> BigRational {
    let minus_half = ratio(-1, 2);
    (0..=last)
        .map(|k| {
            let c = pochhammer(&minus_half, k) / from_int(factorial(k));
            ratio((4 * k as i64 - 1) * sign_pow(k), 1) * &c * &c * &c
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::central_binomial;
    use crate::exactnum::pow2;

    fn direct(last: u64, a: u64, b: u64, shift: u32) -> BigRational {
        (0..=last)
            .map(|n| {
                let c = central_binomial(n);
                from_int(BigInt::from(a * n + b) * &c * &c * &c)
                    * pow2(-(shift as i64) * n as i64)
                    * ratio(sign_pow(n), 1)
            })
            .sum()
    }

    #[test]
    fn small_partial_sums() {
        assert_eq!(eval_series(SeriesId::S8Half, 5, 1).unwrap(), ratio(165, 8));
        assert_eq!(eval_series(SeriesId::S8Full, 5, 1).unwrap(), ratio(487935, 512));
        assert_eq!(eval_series(SeriesId::S64Vh, 5, 1).unwrap(), ratio(435, 512));
    }

    #[test]
    fn guo_liu_terms() {
        // (-1/2)_k / k! = -1/2, -1/8, -1/16 for k = 1, 2, 3
        let m = ratio(-1, 2);
        assert_eq!(pochhammer(&m, 1), ratio(-1, 2));
        assert_eq!(pochhammer(&m, 2) / ratio(2, 1), ratio(-1, 8));
        assert_eq!(pochhammer(&m, 3) / ratio(6, 1), ratio(-1, 16));
        let expected = ratio(-1, 1) + ratio(3, 8) + ratio(-7, 512) + ratio(11, 4096);
        assert_eq!(eval_series(SeriesId::Sgl, 5, 1).unwrap(), expected);
    }

    #[test]
    fn horner_matches_direct_sum() {
        for &(a, b, shift) in &[(3, 1, 3), (4, 1, 6), (6, 1, 9)] {
            for last in 0..=40 {
                let (n, d) = central_cube_sum(last, a, b, shift);
                assert_eq!(BigRational::new(n, d), direct(last, a, b, shift), "last = {last}");
            }
        }
    }

    #[test]
    fn van_hamme_matches_central_form() {
        for p in [5u64, 7, 11, 13, 29, 31] {
            let (n, d) = central_cube_sum((p - 1) / 2, 4, 1, 6);
            assert_eq!(eval_series(SeriesId::S64Vh, p, 1).unwrap(), BigRational::new(n, d));
        }
    }

    #[test]
    fn r_only_moves_power_indexed_bounds() {
        assert_eq!(
            eval_series(SeriesId::S8Half, 7, 3).unwrap(),
            eval_series(SeriesId::S8Half, 7, 1).unwrap()
        );
        assert_eq!(
            eval_series(SeriesId::S8Full, 5, 2).unwrap(),
            direct(24, 3, 1, 3)
        );
        assert_eq!(
            eval_series(SeriesId::S64GuoHalf, 3, 2).unwrap(),
            direct(4, 4, 1, 6)
        );
    }

    #[test]
    fn names_round_trip() {
        for id in SeriesId::ALL {
            assert_eq!(id.name().parse::<SeriesId>().unwrap(), id);
        }
        assert!(matches!("S7-half".parse::<SeriesId>(), Err(Error::UnknownId(_))));
        assert!(matches!(eval_series(SeriesId::S8Half, 9, 1), Err(Error::NotPrime(9))));
    }
}
