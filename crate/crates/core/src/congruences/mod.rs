//! Congruences checked at exact prime-power moduli.
//!
//! A row may have several parts (per-`k` instances, or a chain of
//! equalities). Each part is reduced and compared as soon as it is produced,
//! so quantified rows never hold their whole range in memory. A verdict
//! reports the first failing part, or the first part when all pass.

mod registry;
mod series;

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, padic_valuation, reduce_fraction, reduce_mod, sign_pow, BigRational, Residue};

pub use registry::{
    alternating_square_sum, bernoulli_difference, euler_number_lift, euler_quarter_lift, g_half_row_sum,
    main_rhs_with, registry, CongruenceId, CongruenceSpec, Exponent, Method,
};
pub use series::{central_cube_sum, eval_series, prime_power_u64, series_fraction, SeriesId};

/// One side of a congruence before reduction.
#[derive(Clone, Debug)]
pub enum Side {
    Exact(BigRational),
    /// `num / den`, not necessarily in lowest terms.
    Ratio(BigInt, BigInt),
    Residue(Residue),
}

impl Side {
    fn reduce(&self, p: u64, e: u32) -> Result<Residue> {
        match self {
            Side::Exact(q) => reduce_mod(q, p, e),
            Side::Ratio(num, den) => reduce_fraction(num, den, p, e),
            Side::Residue(r) if r.prime() == p && r.exponent() == e => Ok(r.clone()),
            Side::Residue(r) => Err(Error::ModulusMismatch {
                left: r.modulus_label(),
                right: format!("{p}^{e}"),
            }),
        }
    }
}

/// Outcome of one `(id, p, r)` check.
///
/// `lhs` and `rhs` are `None` only when that side failed to reduce (its
/// denominator was divisible by `p`); `detail` then says which.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub id: CongruenceId,
    pub p: u64,
    pub r: u32,
    pub e: u32,
    pub lhs: Option<Residue>,
    pub rhs: Option<Residue>,
    pub pass: bool,
    pub micros: u64,
    pub detail: Option<String>,
}

impl Verdict {
    /// `p^e`.
    pub fn modulus_label(&self) -> String {
        format!("{}^{}", self.p, self.e)
    }
}

struct Failure {
    lhs: Option<Residue>,
    rhs: Option<Residue>,
    detail: String,
}

/// Streaming comparison of the parts of one row.
pub(crate) struct Sink {
    p: u64,
    e: u32,
    parts: u64,
    first: Option<(Residue, Residue)>,
    failure: Option<Failure>,
}

impl Sink {
    fn new(p: u64, e: u32) -> Self {
        Sink {
            p,
            e,
            parts: 0,
            first: None,
            failure: None,
        }
    }

    fn side(&self, side: &Side) -> Result<Option<Residue>> {
        match side.reduce(self.p, self.e) {
            Ok(r) => Ok(Some(r)),
            Err(Error::NotPIntegral { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub(crate) fn check(&mut self, label: impl FnOnce() -> String, lhs: Side, rhs: Side) -> Result<()> {
        let left = self.side(&lhs)?;
        let right = self.side(&rhs)?;
        self.record(label, left, right, None)
    }

    /// Passes when `q` is zero or `v_p(q) >= e`; reported against a zero right side.
    pub(crate) fn check_valuation(&mut self, label: impl FnOnce() -> String, q: &BigRational) -> Result<()> {
        let held = q.is_zero() || padic_valuation(q, self.p)? >= self.e as i64;
        let left = self.side(&Side::Exact(q.clone()))?;
        let right = Some(Residue::zero(self.p, self.e)?);
        self.record(label, left, right, Some(held))
    }

    fn record(
        &mut self,
        label: impl FnOnce() -> String,
        lhs: Option<Residue>,
        rhs: Option<Residue>,
        held: Option<bool>,
    ) -> Result<()> {
        self.parts += 1;
        let pass = match (&lhs, &rhs) {
            (Some(a), Some(b)) => held.unwrap_or(a == b),
            _ => false,
        };
        if self.failure.is_none() && !pass {
            let label = label();
            let detail = match (&lhs, &rhs) {
                (None, _) => format!("{label}: left side is not {}-integral", self.p),
                (_, None) => format!("{label}: right side is not {}-integral", self.p),
                _ => format!("{label}: sides differ"),
            };
            self.failure = Some(Failure { lhs, rhs, detail });
        } else if self.first.is_none() {
            if let (Some(a), Some(b)) = (lhs, rhs) {
                self.first = Some((a, b));
            }
        }
        Ok(())
    }

    fn finish(self, id: CongruenceId, p: u64, r: u32, micros: u64) -> Verdict {
        let (lhs, rhs, pass, detail) = match self.failure {
            Some(f) => (f.lhs, f.rhs, false, Some(f.detail)),
            None => match self.first {
                Some((a, b)) => {
                    let detail = (self.parts > 1).then(|| format!("{} parts", self.parts));
                    (Some(a), Some(b), true, detail)
                }
                None => (None, None, false, Some("no parts evaluated".to_string())),
            },
        };
        Verdict {
            id,
            p,
            r,
            e: self.e,
            lhs,
            rhs,
            pass,
            micros,
            detail,
        }
    }
}

/// Evaluates row `id` at `(p, r)`.
///
/// Fails with [`Error::NotPrime`] or [`Error::Inapplicable`] outside the row's
/// domain. A side that cannot be reduced yields a failed verdict, not an error.
pub fn check_congruence(id: CongruenceId, p: u64, r: u32) -> Result<Verdict> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !id.applicable(p, r) {
        return Err(Error::Inapplicable {
            id: id.name().to_string(),
            p,
            r,
        });
    }
    let start = Instant::now();
    let mut sink = Sink::new(p, id.exponent(r));
    registry::evaluate(id, p, r, &mut sink)?;
    let micros = start.elapsed().as_micros() as u64;
    Ok(sink.finish(id, p, r, micros))
}

/// Every applicable `(id, p, r)` with `r <= r_max`, ordered by id (registry
/// order), then `p`, then `r`, whatever the scheduling.
pub fn run_suite(ids: &[CongruenceId], primes: &[u64], r_max: u32) -> Result<Vec<Verdict>> {
    let mut ids = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let mut primes: Vec<u64> = primes.iter().copied().filter(|&p| is_prime(p)).collect();
    primes.sort_unstable();
    primes.dedup();
    let tasks: Vec<(CongruenceId, u64, u32)> = ids
        .iter()
        .flat_map(|&id| {
            primes.iter().flat_map(move |&p| {
                (1..=r_max)
                    .filter(move |&r| id.applicable(p, r))
                    .map(move |r| (id, p, r))
            })
        })
        .collect();
    tasks
        .into_par_iter()
        .map(|(id, p, r)| check_congruence(id, p, r))
        .collect()
}

/// `E_{p-3}(1/4) mod p` through the alternating sum: `2(-1)^f sum_{k<=f} (-1)^k/k^2`.
pub fn euler_quarter_via_altsum(p: u64) -> Result<Residue> {
    let f = (p - 1) / 4;
    let value = alternating_square_sum(f) * BigRational::from_integer(BigInt::from(2 * sign_pow(f)));
    reduce_mod(&value, p, 1)
}

/// `E_{p-3}(1/4) mod p` through `(-1)^f (B_{p-2}({(4-p)/8}) - B_{p-2}({-p/8})) / 4`.
pub fn euler_quarter_via_bernoulli(p: u64) -> Result<Residue> {
    let f = (p - 1) / 4;
    // bernoulli_difference already carries the factor 1/8
    let two = Residue::new(2 * sign_pow(f), p, 1)?;
    bernoulli_difference(p)?.checked_mul(&two)
}
