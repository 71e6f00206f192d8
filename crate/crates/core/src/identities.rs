//! Finite, prime-free identities used on the way to the congruences.
//!
//! Each entry is checked by evaluating both sides exactly. Entries with an
//! inner parameter (I10, I12) check every inner case for a given `n` and
//! report failures by sub-index.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::combinat::{binomial, binomial_rational, factorial, frac_part, reciprocal_factorial, HarmonicTable};
use crate::error::{Error, Result};
use crate::exactnum::{from_int, int, pow2, ratio, sign_pow, BigRational};
use crate::special::{bernoulli_numbers, eval_bernoulli_poly};
use crate::wz::GridVerdict;

/// Bounds of the inner grid swept by I10 for each upper bound `P`.
pub const POWER_SUM_MAX_MODULUS: u64 = 8;
pub const POWER_SUM_MAX_EXPONENT: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    I7,
    I8,
    I9,
    I10,
    I11,
    I12,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::I1,
        IdentityId::I2,
        IdentityId::I3,
        IdentityId::I4,
        IdentityId::I5,
        IdentityId::I6,
        IdentityId::I7,
        IdentityId::I8,
        IdentityId::I9,
        IdentityId::I10,
        IdentityId::I11,
        IdentityId::I12,
    ];

    pub fn spec(self) -> &'static IdentitySpec {
        &REGISTRY[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// Registry record for one identity.
#[derive(Debug)]
pub struct IdentitySpec {
    pub id: IdentityId,
    pub name: &'static str,
    pub statement: &'static str,
    /// Smallest `n` on which both sides are defined.
    pub range_start: u64,
}

static REGISTRY: [IdentitySpec; 12] = [
    IdentitySpec {
        id: IdentityId::I1,
        name: "I1",
        statement: "sum_{k=0}^n C(2n,k) C(2n-k,k)/4^k = C(4n,2n)/4^n",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I2,
        name: "I2",
        statement: "sum_{k=0}^n C(2n+1,k) C(2n+1-k,k)/4^k = C(4n+1,2n+1)/4^n",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I3,
        name: "I3",
        statement: "sum_{k=0}^n C(2n,k) C(2n-k,k) H_k/4^k = C(4n,2n)/4^n (3H_{2n} - 2H_{4n})",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I4,
        name: "I4",
        statement: "sum_{k=0}^n C(2n+1,k) C(2n+1-k,k) H_k/4^k = C(4n+1,2n+1)/4^n (3H_{2n+1} - 2H_{4n+2})",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I5,
        name: "I5",
        statement: "sum_{k=0}^n C(2n,k) C(2n-k,k) (H_k^2 + H_k^(2))/4^k \
                    = C(4n,2n)/4^n ((5H_{2n}^(2) - 4H_{4n}^(2)) + (3H_{2n} - 2H_{4n})^2)",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I6,
        name: "I6",
        statement: "sum_{k=0}^n C(2n+1,k) C(2n+1-k,k) (H_k^2 + H_k^(2))/4^k \
                    = C(4n+1,2n+1)/4^n ((5H_{2n+1}^(2) - 4H_{4n+2}^(2)) + (3H_{2n+1} - 2H_{4n+2})^2)",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I7,
        name: "I7",
        statement: "sum_{k=1}^n C(n,k) C(-3/4,k) H_k^(2) \
                    = (-1)^n C(-1/4,n) (H_n^(2) - sum_{k=1}^n (-1)^k/(k^2 C(-1/4,k)))",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I8,
        name: "I8",
        statement: "sum_{k=1}^n C(n,k) C(-1/4,k) H_k^(2) \
                    = (-1)^n C(-3/4,n) (H_n^(2) - sum_{k=1}^n (-1)^k/(k^2 C(-3/4,k)))",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I9,
        name: "I9",
        statement: "sum_{k=1}^n (-1)^k/(k^2 C(n,k)) = H_n^(2) + 2 sum_{k=1}^n (-1)^k/k^2",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I10,
        name: "I10",
        statement: "sum_{0<=x<P, x=r mod m} x^k \
                    = m^k/(k+1) (B_{k+1}(P/m + {(r-P)/m}) - B_{k+1}({r/m})), \
                    all m <= 8, 0 <= r < m, k <= 6",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I11,
        name: "I11",
        statement: "C(4n,2n) C(2n,n)/64^n = C(-1/4,n) C(-3/4,n)",
        range_start: 0,
    },
    IdentitySpec {
        id: IdentityId::I12,
        name: "I12",
        statement: "C(2n-2k,n-1) = C(2n-2k,n-k) (n-k)!^2/((n-1)! (n+1-2k)!), all 1 <= k <= n",
        range_start: 1,
    },
];

pub fn registry() -> &'static [IdentitySpec] {
    &REGISTRY
}

/// `sum_{0 <= x < upper, x ≡ r (mod m)} x^k`, with `0^0 = 1`.
pub fn power_sum(upper: u64, m: u64, r: u64, k: u32) -> BigInt {
    (r % m..upper)
        .step_by(m as usize)
        .map(|x| BigInt::from(x).pow(k))
        .sum()
}

/// The Bernoulli-polynomial closed form of [`power_sum`].
pub fn power_sum_bernoulli(upper: u64, m: u64, r: u64, k: u32) -> BigRational {
    let b = bernoulli_numbers(k as u64 + 1);
    power_sum_closed(&b, upper, m, r, k)
}

fn power_sum_closed(b: &[BigRational], upper: u64, m: u64, r: u64, k: u32) -> BigRational {
    let (upper_i, m_i, r_i) = (upper as i64, m as i64, r as i64);
    let top = ratio(upper_i, m_i) + frac_part(&ratio(r_i - upper_i, m_i));
    let bottom = frac_part(&ratio(r_i, m_i));
    let n = k as u64 + 1;
    let diff = eval_bernoulli_poly(b, n, &top) - eval_bernoulli_poly(b, n, &bottom);
    from_int(BigInt::from(m).pow(k)) * diff / ratio(n as i64, 1)
}

// Shared read-only state for evaluating identities at many n.
struct Tables {
    harmonic: HarmonicTable,
    bernoulli: Vec<BigRational>,
    quarter: Vec<BigRational>,
    three_quarters: Vec<BigRational>,
}

impl Tables {
    fn for_range(id: IdentityId, n_max: u64) -> Self {
        let harmonic_limit = match id {
            IdentityId::I3 | IdentityId::I4 | IdentityId::I5 | IdentityId::I6 => 4 * n_max + 2,
            IdentityId::I7 | IdentityId::I8 | IdentityId::I9 => n_max,
            _ => 0,
        };
        let binom_limit = match id {
            IdentityId::I7 | IdentityId::I8 | IdentityId::I11 => n_max,
            _ => 0,
        };
        let bernoulli_limit = match id {
            IdentityId::I10 => POWER_SUM_MAX_EXPONENT + 1,
            _ => 0,
        };
        let quarter = ratio(-1, 4);
        let three_quarters = ratio(-3, 4);
        Tables {
            harmonic: HarmonicTable::new(harmonic_limit),
            bernoulli: bernoulli_numbers(bernoulli_limit),
            quarter: (0..=binom_limit).map(|k| binomial_rational(&quarter, k)).collect(),
            three_quarters: (0..=binom_limit)
                .map(|k| binomial_rational(&three_quarters, k))
                .collect(),
        }
    }
}

struct Case {
    sub_index: u64,
    lhs: BigRational,
    rhs: BigRational,
}

fn single(lhs: BigRational, rhs: BigRational) -> Vec<Case> {
    vec![Case {
        sub_index: 0,
        lhs,
        rhs,
    }]
}

fn quarter_power(n: u64) -> BigRational {
    pow2(-2 * n as i64)
}

// sum_{k=0}^n C(row,k) C(row-k,k) w(k)/4^k
fn trinomial_sum(row: u64, n: u64, weight: impl Fn(u64) -> BigRational) -> BigRational {
    (0..=n)
        .map(|k| {
            let c = binomial(row as i64, k as i64) * binomial(row as i64 - k as i64, k as i64);
            from_int(c) * weight(k) * quarter_power(k)
        })
        .sum()
}

fn harmonic_weighted(t: &Tables, id: IdentityId, n: u64) -> Vec<Case> {
    let h = &t.harmonic;
    let (row, top, lead) = match id {
        IdentityId::I3 | IdentityId::I5 => (2 * n, 4 * n, binomial(4 * n as i64, 2 * n as i64)),
        _ => (2 * n + 1, 4 * n + 2, binomial(4 * n as i64 + 1, 2 * n as i64 + 1)),
    };
    let lead = from_int(lead) * quarter_power(n);
    let first = ratio(3, 1) * h.h1(row) - ratio(2, 1) * h.h1(top);
    match id {
        IdentityId::I3 | IdentityId::I4 => {
            single(trinomial_sum(row, n, |k| h.h1(k).clone()), lead * first)
        }
        _ => {
            let second = ratio(5, 1) * h.h2(row) - ratio(4, 1) * h.h2(top);
            let lhs = trinomial_sum(row, n, |k| h.h1(k) * h.h1(k) + h.h2(k));
            single(lhs, lead * (second + &first * &first))
        }
    }
}

fn quarter_identity(t: &Tables, n: u64, swapped: bool) -> Vec<Case> {
    let (inner, outer) = if swapped {
        (&t.quarter, &t.three_quarters)
    } else {
        (&t.three_quarters, &t.quarter)
    };
    let h = &t.harmonic;
    let lhs: BigRational = (1..=n)
        .map(|k| from_int(binomial(n as i64, k as i64)) * &inner[k as usize] * h.h2(k))
        .sum();
    let alt: BigRational = (1..=n)
        .map(|k| ratio(sign_pow(k), (k * k) as i64) / &outer[k as usize])
        .sum();
    let rhs = ratio(sign_pow(n), 1) * &outer[n as usize] * (h.h2(n) - alt);
    single(lhs, rhs)
}

fn evaluate(t: &Tables, id: IdentityId, n: u64) -> Vec<Case> {
    match id {
        IdentityId::I1 => single(
            trinomial_sum(2 * n, n, |_| BigRational::one()),
            from_int(binomial(4 * n as i64, 2 * n as i64)) * quarter_power(n),
        ),
        IdentityId::I2 => single(
            trinomial_sum(2 * n + 1, n, |_| BigRational::one()),
            from_int(binomial(4 * n as i64 + 1, 2 * n as i64 + 1)) * quarter_power(n),
        ),
        IdentityId::I3 | IdentityId::I4 | IdentityId::I5 | IdentityId::I6 => {
            harmonic_weighted(t, id, n)
        }
        IdentityId::I7 => quarter_identity(t, n, false),
        IdentityId::I8 => quarter_identity(t, n, true),
        IdentityId::I9 => {
            let lhs: BigRational = (1..=n)
                .map(|k| {
                    BigRational::new(int(sign_pow(k)), BigInt::from(k * k) * binomial(n as i64, k as i64))
                })
                .sum();
            let alt: BigRational = (1..=n).map(|k| ratio(sign_pow(k), (k * k) as i64)).sum();
            single(lhs, t.harmonic.h2(n) + ratio(2, 1) * alt)
        }
        IdentityId::I10 => {
            let mut cases = Vec::new();
            for m in 1..=POWER_SUM_MAX_MODULUS {
                for r in 0..m {
                    for k in 0..=POWER_SUM_MAX_EXPONENT as u32 {
                        cases.push(Case {
                            sub_index: m * 100 + r * 10 + k as u64,
                            lhs: from_int(power_sum(n, m, r, k)),
                            rhs: power_sum_closed(&t.bernoulli, n, m, r, k),
                        });
                    }
                }
            }
            cases
        }
        IdentityId::I11 => {
            let c = binomial(4 * n as i64, 2 * n as i64) * binomial(2 * n as i64, n as i64);
            single(
                from_int(c) * pow2(-6 * n as i64),
                &t.quarter[n as usize] * &t.three_quarters[n as usize],
            )
        }
        IdentityId::I12 => (1..=n)
            .map(|k| {
                let (ni, ki) = (n as i64, k as i64);
                let rhs = from_int(binomial(2 * ni - 2 * ki, ni - ki) * factorial(n - k).pow(2))
                    * reciprocal_factorial(ni - 1)
                    * reciprocal_factorial(ni + 1 - 2 * ki);
                Case {
                    sub_index: k,
                    lhs: from_int(binomial(2 * ni - 2 * ki, ni - 1)),
                    rhs,
                }
            })
            .collect(),
    }
}

fn check_range_start(id: IdentityId, n: u64) -> Result<()> {
    let start = id.spec().range_start;
    if n < start {
        return Err(Error::OutOfRange {
            id: id.name().to_string(),
            n,
            start,
        });
    }
    Ok(())
}

/// Both sides of `id` at `n` agree exactly (every inner case, where present).
pub fn check_identity(id: IdentityId, n: u64) -> Result<bool> {
    check_range_start(id, n)?;
    let tables = Tables::for_range(id, n);
    Ok(evaluate(&tables, id, n).iter().all(|c| c.lhs == c.rhs))
}

/// [`check_identity`] over `[range_start, n_max]`; failing `(n, sub_index)` pairs collected.
pub fn check_identity_range(id: IdentityId, n_max: u64) -> Result<GridVerdict> {
    let start = id.spec().range_start;
    let tables = Tables::for_range(id, n_max);
    if n_max < start {
        return Ok(GridVerdict::new(n_max, 0, 0, Vec::new()));
    }
    let per_n: Vec<(u64, Vec<(u64, u64)>)> = (start..=n_max)
        .into_par_iter()
        .map(|n| {
            let cases = evaluate(&tables, id, n);
            let failures = cases
                .iter()
                .filter(|c| c.lhs != c.rhs)
                .map(|c| (n, c.sub_index))
                .collect();
            (cases.len() as u64, failures)
        })
        .collect();
    let checked = per_n.iter().map(|(c, _)| c).sum();
    let failures = per_n.into_iter().flat_map(|(_, f)| f).collect();
    let k_max = match id {
        IdentityId::I10 => POWER_SUM_MAX_MODULUS * 100 + POWER_SUM_MAX_EXPONENT,
        IdentityId::I12 => n_max,
        _ => 0,
    };
    Ok(GridVerdict::new(n_max, k_max, checked, failures))
}
