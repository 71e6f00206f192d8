//! The WZ pair
//!
//! ```text
//! F(n,k) = (-1)^n (3n-2k+1) C(2n,n) C(2n-2k,n-k) C(2n-2k,n)   / 2^{3n-2k}
//! G(n,k) = (-1)^{n+1} n     C(2n,n) C(2n-2k,n-k) C(2n-2k,n-1) / 2^{3n-2k}
//! ```
//!
//! with `F(n,k-1) - F(n,k) = G(n+1,k) - G(n,k)`. Both sides of that relation,
//! divided by `F(n,k)`, are fixed rational functions, so exact agreement on a
//! deep enough grid is the certificate used here.

use num_traits::Zero;
use rayon::prelude::*;

use crate::combinat::{binomial, factorial, pochhammer, reciprocal_factorial};
use crate::exactnum::{from_int, int, pow2, ratio, sign_pow, BigRational};

/// Outcome of an exact identity check over a finite grid.
///
/// `failures` holds the `(n, k)` points where the identity failed, sorted.
/// For one-parameter checks the second coordinate is a sub-index (or 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridVerdict {
    n_max: u64,
    k_max: u64,
    checked: u64,
    failures: Vec<(u64, u64)>,
    pass: bool,
}

impl GridVerdict {
    pub fn new(n_max: u64, k_max: u64, checked: u64, mut failures: Vec<(u64, u64)>) -> Self {
        failures.sort_unstable();
        let pass = failures.is_empty();
        GridVerdict {
            n_max,
            k_max,
            checked,
            failures,
            pass,
        }
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    /// Number of grid points evaluated.
    pub fn checked(&self) -> u64 {
        self.checked
    }

    pub fn failures(&self) -> &[(u64, u64)] {
        &self.failures
    }

    pub fn pass(&self) -> bool {
        self.pass
    }
}

/// Vanishes for `n < k` through `C(2n-2k, n-k)`.
pub fn eval_f(n: u64, k: u64) -> BigRational {
    let (ni, ki) = (n as i64, k as i64);
    let num = int(sign_pow(n) * (3 * ni - 2 * ki + 1))
        * binomial(2 * ni, ni)
        * binomial(2 * ni - 2 * ki, ni - ki)
        * binomial(2 * ni - 2 * ki, ni);
    from_int(num) / pow2(3 * ni - 2 * ki)
}

pub fn eval_g(n: u64, k: u64) -> BigRational {
    let (ni, ki) = (n as i64, k as i64);
    let num = int(-sign_pow(n) * ni)
        * binomial(2 * ni, ni)
        * binomial(2 * ni - 2 * ki, ni - ki)
        * binomial(2 * ni - 2 * ki, ni - 1);
    from_int(num) / pow2(3 * ni - 2 * ki)
}

/// `F(n,k-1) - F(n,k) = G(n+1,k) - G(n,k)` for `0 <= n <= n_max`, `1 <= k <= k_max`.
pub fn check_pair_identity(n_max: u64, k_max: u64) -> GridVerdict {
    let failures: Vec<(u64, u64)> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let f: Vec<BigRational> = (0..=k_max).map(|k| eval_f(n, k)).collect();
            let g: Vec<BigRational> = (0..=k_max).map(|k| eval_g(n, k)).collect();
            let g_next: Vec<BigRational> = (0..=k_max).map(|k| eval_g(n + 1, k)).collect();
            (1..=k_max as usize)
                .filter(move |&k| &f[k - 1] - &f[k] != &g_next[k] - &g[k])
                .map(move |k| (n, k as u64))
                .collect::<Vec<_>>()
        })
        .collect();
    GridVerdict::new(n_max, k_max, (n_max + 1) * k_max, failures)
}

/// `(sum_{n=0}^{m} F(n,0), sum_{k=1}^{m} G(m+1,k))`; the two agree.
pub fn telescope_half_sum(m: u64) -> (BigRational, BigRational) {
    let left = (0..=m).map(|n| eval_f(n, 0)).sum();
    let right = (1..=m).map(|k| eval_g(m + 1, k)).sum();
    (left, right)
}

/// `(sum_{n<M} F(n,0), sum_{k=1}^{M-1} G(M,k))`; the two agree.
pub fn telescope_full_sum(upper: u64) -> (BigRational, BigRational) {
    let left = (0..upper).map(|n| eval_f(n, 0)).sum();
    let right = (1..upper).map(|k| eval_g(upper, k)).sum();
    (left, right)
}

/// `G(M,k) = 0` for every `(M+1)/2 < k < M`.
pub fn tail_vanishes(upper: u64) -> bool {
    ((upper + 1) / 2 + 1..upper).all(|k| eval_g(upper, k).is_zero())
}

/// Closed form of `G((p+1)/2, k)` as a product of central-binomial,
/// factorial and Pochhammer factors.
///
/// `p_odd` is any odd integer `>= 5`; `1 <= k <= (p_odd+1)/2`. The reciprocal
/// of a negative factorial is zero.
pub fn closed_form_g(p_odd: u64, k: u64) -> BigRational {
    assert!(p_odd >= 5 && p_odd % 2 == 1, "p_odd must be odd and at least 5");
    assert!(k >= 1 && k <= (p_odd + 1) / 2, "k out of range");
    let h = (p_odd - 1) / 2;
    let pi = p_odd as i64;
    let central = binomial(pi - 1, h as i64);
    let prefactor = from_int(int(32 * pi * sign_pow(h)) * central.pow(3))
        / pow2((3 * pi + 3) / 2);
    let shifted = ratio(pi + 2 - 2 * k as i64, 2);
    let poch = pochhammer(&shifted, k - 1);
    prefactor * from_int(factorial(h)) * reciprocal_factorial((pi + 3) / 2 - 2 * k as i64)
        / (&poch * &poch)
        / pow2(2 * k as i64)
}

/// Half-sum telescoping for every `1 <= m <= m_max`.
pub fn check_half_sums(m_max: u64) -> GridVerdict {
    let failures = (1..=m_max)
        .into_par_iter()
        .filter(|&m| {
            let (a, b) = telescope_half_sum(m);
            a != b
        })
        .map(|m| (m, 0))
        .collect();
    GridVerdict::new(m_max, 0, m_max, failures)
}

/// Full-sum telescoping plus upper-tail vanishing for every `2 <= M <= upper_max`.
///
/// A failure `(M, 0)` is a telescoping mismatch, `(M, 1)` a nonvanishing tail.
pub fn check_full_sums(upper_max: u64) -> GridVerdict {
    let failures = (2..=upper_max)
        .into_par_iter()
        .flat_map_iter(|m| {
            let (a, b) = telescope_full_sum(m);
            let mut bad = Vec::new();
            if a != b {
                bad.push((m, 0));
            }
            if !tail_vanishes(m) {
                bad.push((m, 1));
            }
            bad
        })
        .collect();
    GridVerdict::new(upper_max, 1, 2 * upper_max.saturating_sub(1), failures)
}

/// `closed_form_g(p, k) = G((p+1)/2, k)` for odd `5 <= p <= p_max` and all admissible `k`.
pub fn check_closed_form(p_max: u64) -> GridVerdict {
    let odds: Vec<u64> = (5..=p_max).step_by(2).collect();
    let checked = odds.iter().map(|p| (p + 1) / 2).sum();
    let failures = odds
        .into_par_iter()
        .flat_map_iter(|p| {
            (1..=(p + 1) / 2)
                .filter(move |&k| closed_form_g(p, k) != eval_g((p + 1) / 2, k))
                .map(move |k| (p, k))
                .collect::<Vec<_>>()
        })
        .collect();
    GridVerdict::new(p_max, (p_max + 1) / 2, checked, failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::central_binomial;

    #[test]
    fn point_values() {
        assert_eq!(eval_f(0, 0), ratio(1, 1));
        assert_eq!(eval_f(1, 0), ratio(-4, 1));
        for n in 1..=10 {
            assert!(eval_f(n, n).is_zero());
        }
        for k in 0..5 {
            assert!(eval_g(0, k).is_zero());
        }
        assert_eq!(eval_g(1, 1), ratio(1, 1));
        assert_eq!(eval_g(2, 1), ratio(-3, 1));
        assert_eq!(eval_f(2, 0), ratio(189, 8));
    }

    #[test]
    fn support_below_diagonal() {
        for k in 1..=60 {
            for n in 0..k {
                assert!(eval_f(n, k).is_zero() && eval_g(n, k).is_zero(), "({n}, {k})");
            }
        }
    }

    #[test]
    fn g_vanishes_when_lower_binomial_out_of_range() {
        for n in 1..=40u64 {
            for k in 0..=n {
                if 2 * n < 2 * k + n - 1 {
                    assert!(eval_g(n, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn pair_identity_small_points() {
        assert_eq!(&eval_f(1, 0) - &eval_f(1, 1), &eval_g(2, 1) - &eval_g(1, 1));
        assert_eq!(&eval_f(0, 0) - &eval_f(0, 1), ratio(1, 1));
        assert_eq!(&eval_g(1, 1) - &eval_g(0, 1), ratio(1, 1));
        assert!(check_pair_identity(1, 1).pass());
    }

    #[test]
    fn pair_identity_grid() {
        let v = check_pair_identity(40, 40);
        assert!(v.pass(), "{:?}", v.failures());
        assert_eq!(v.checked(), 41 * 40);
    }

    #[test]
    fn telescoping_examples() {
        assert_eq!(telescope_half_sum(1), (ratio(-3, 1), ratio(-3, 1)));
        let (a, b) = telescope_half_sum(2);
        assert_eq!(a, ratio(165, 8));
        assert_eq!(b, ratio(165, 8));
        assert_eq!(telescope_full_sum(2), (ratio(-3, 1), ratio(-3, 1)));
        let (a, b) = telescope_full_sum(5);
        assert_eq!(a, ratio(487935, 512));
        assert_eq!(a, b);
        for m in 3..=99 {
            assert!(tail_vanishes(m), "M = {m}");
        }
    }

    #[test]
    fn odd_upper_sum_truncates() {
        for m in (3..=61u64).step_by(2) {
            let full: BigRational = (1..m).map(|k| eval_g(m, k)).sum();
            let truncated: BigRational = (1..=(m + 1) / 2).map(|k| eval_g(m, k)).sum();
            assert_eq!(full, truncated);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_g(5, 1), eval_g(3, 1));
        assert!(closed_form_g(5, 3).is_zero());
        assert!(eval_g(3, 3).is_zero());
        assert_eq!(closed_form_g(9, 2), eval_g(5, 2));
        assert!(check_closed_form(41).pass());
    }

    #[test]
    fn f_at_zero_is_theorem_summand() {
        let mut partial_f = BigRational::zero();
        let mut partial_s = BigRational::zero();
        for n in 0..=100u64 {
            partial_f += eval_f(n, 0);
            let c = central_binomial(n);
            partial_s += from_int(int(3 * n as i64 + 1) * c.pow(3)) / pow2(3 * n as i64)
                * ratio(sign_pow(n), 1);
            assert_eq!(partial_f, partial_s);
        }
    }
}
