//! Every congruence as a registry row: statement, applicability, modulus and
//! an evaluator that streams its parts into a [`Sink`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::{prime_power_u64, series_fraction, SeriesId};
use super::{Side, Sink};
use crate::combinat::{binomial, central_binomial, factorial, frac_part, harmonic, pochhammer, HarmonicTable};
use crate::error::{Error, Result};
use crate::exactnum::{from_int, int, pow2, ratio, reduce_fraction, reduce_mod, sign_pow, BigRational, Residue};
use crate::special::{euler_number_mod_p, euler_poly_mod_p, fermat_quotient2, legendre_symbol, BernoulliTableModP};
use crate::wz::eval_g;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CongruenceId {
    ThmMain,
    ThmPrimePower,
    VanHamme,
    WolstenholmeH1,
    WolstenholmeH2,
    Central2p1p,
    Sun64,
    GuoLiu,
    LongCxh512,
    Mao512,
    Cxh8Full,
    RemarkSunC51,
    GuoHalf64,
    GuoConjFull64,
    Morley,
    MorleyPower,
    Lemma22,
    Lemma23,
    Lemma24,
    Lemma26a,
    Lemma26b,
    Lemma26Altsum,
    Lemma27,
    Binom16k,
    PochExpansion,
    TwoPowerHalf,
    Lemma32,
    Lemma33,
    Central2pr,
    Ps1,
    Ps2,
    Ps3,
    NegBinomUnit,
}

/// How the modulus exponent depends on `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Fixed(u32),
    /// `r + c`
    RPlus(u32),
}

/// How the two sides are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Equal residues modulo `p^e`.
    Residue,
    /// The left side is zero or has `p`-adic valuation at least `e`.
    Valuation,
}

#[derive(Debug)]
pub struct CongruenceSpec {
    pub id: CongruenceId,
    pub name: &'static str,
    pub statement: &'static str,
    /// Smallest prime the row applies to.
    pub min_p: u64,
    /// Whether the row is checked at `r > 1`.
    pub r_indexed: bool,
    pub exponent: Exponent,
    pub method: Method,
}

macro_rules! row {
    ($id:ident, $name:literal, $min_p:literal, $r:literal, $exp:expr, $statement:literal) => {
        row!($id, $name, $min_p, $r, $exp, Method::Residue, $statement)
    };
    ($id:ident, $name:literal, $min_p:literal, $r:literal, $exp:expr, $method:expr, $statement:literal) => {
        CongruenceSpec {
            id: CongruenceId::$id,
            name: $name,
            statement: $statement,
            min_p: $min_p,
            r_indexed: $r,
            exponent: $exp,
            method: $method,
        }
    };
}

use Exponent::{Fixed, RPlus};

static REGISTRY: [CongruenceSpec; 33] = [
    row!(ThmMain, "thm-main", 5, false, Fixed(4),
        "sum_{n=0}^{(p-1)/2} (3n+1) C(2n,n)^3/(-8)^n = p(-1/p) + (p^3/4)(2/p) E_{p-3}(1/4)"),
    row!(ThmPrimePower, "thm-prime-power", 5, true, RPlus(2),
        "sum_{n=0}^{p^r-1} (3n+1) C(2n,n)^3/(-8)^n = (-1)^{(p^r-1)/2} p^r"),
    row!(VanHamme, "vanhamme", 3, false, Fixed(3),
        "sum_{k=0}^{(p-1)/2} (4k+1)(-1)^k ((1/2)_k/k!)^3 = (-1)^{(p-1)/2} p"),
    row!(WolstenholmeH1, "wolstenholme-h1", 5, false, Fixed(2), Method::Valuation,
        "H_{p-1} = 0"),
    row!(WolstenholmeH2, "wolstenholme-h2", 5, false, Fixed(1), Method::Valuation,
        "H_{p-1}^(2) = 0"),
    row!(Central2p1p, "central-2p1p", 5, false, Fixed(3),
        "C(2p-1,p-1) = 1"),
    row!(Sun64, "sun-64", 5, false, Fixed(4),
        "sum_{k=0}^{p-1} (4k+1) C(2k,k)^3/(-64)^k = (-1)^{(p-1)/2} p + p^3 E_{p-3}"),
    row!(GuoLiu, "guo-liu", 5, false, Fixed(4),
        "sum_{k=0}^{(p+1)/2} (-1)^k (4k-1) (-1/2)_k^3/k!^3 = p(-1)^{(p+1)/2} + p^3 (2 - E_{p-3})"),
    row!(LongCxh512, "long-cxh-512", 3, false, Fixed(2),
        "sum_{n=0}^{(p-1)/2} (6n+1) C(2n,n)^3/(-512)^n = p(-2/p)"),
    row!(Mao512, "mao-512", 5, false, Fixed(4),
        "sum_{n=0}^{(p-1)/2} (6n+1) C(2n,n)^3/(-512)^n = p(-2/p) + (p^3/4)(2/p) E_{p-3}"),
    row!(Cxh8Full, "cxh-8-full", 5, false, Fixed(4),
        "sum_{n=0}^{p-1} (3n+1) C(2n,n)^3/(-8)^n = p(-1)^{(p-1)/2} + p^3 E_{p-3}"),
    row!(RemarkSunC51, "remark-sun-c51", 5, false, Fixed(4),
        "sum_{n=0}^{(p-1)/2} (3n+1) C(2n,n)^3/(-8)^n \
         = 4(2/p) sum_{n=0}^{p-1} (6n+1) C(2n,n)^3/(-512)^n - 3p(-1/p)"),
    row!(GuoHalf64, "guo-half-64", 5, true, RPlus(2),
        "sum_{k=0}^{(p^r-1)/2} (4k+1) C(2k,k)^3/(-64)^k = (-1)^{(p-1)r/2} p^r"),
    row!(GuoConjFull64, "guo-conj-full-64", 5, true, RPlus(2),
        "sum_{k=0}^{p^r-1} (4k+1) C(2k,k)^3/(-64)^k = (-1)^{(p-1)r/2} p^r"),
    row!(Morley, "morley", 5, false, Fixed(3),
        "C(p-1,(p-1)/2) = (-1)^{(p-1)/2} 4^{p-1}"),
    row!(MorleyPower, "morley-power", 5, true, Fixed(3),
        "C(p^r-1,(p^r-1)/2) = (-1)^{(p^r-1)/2} 4^{p^r-1}"),
    row!(Lemma22, "lemma-2.2", 5, false, Fixed(3),
        "2^{(9p-9)/2} sum_{k=0}^{(p-3)/2} C((p-1)/2,2k) C(2k,k)/4^k \
         = (-1)^{(p-1)/2} (1 + 6p q_p(2) + 15p^2 q_p(2)^2)"),
    row!(Lemma23, "lemma-2.3", 5, false, Fixed(2),
        "2^{(9p-9)/2} sum_{k=0}^{(p-3)/2} C((p-1)/2,2k) C(2k,k) H_k/4^k \
         = -3(-1)^{(p-1)/2} (2q_p(2) + 11p q_p(2)^2)"),
    row!(Lemma24, "lemma-2.4", 5, false, Fixed(1),
        "2^{(9p-9)/2} sum_{k=0}^{(p-3)/2} C((p-1)/2,2k) C(2k,k) (H_k^2 + H_k^(2))/4^k \
         = 36(-1)^{(p-1)/2} q_p(2)^2"),
    row!(Lemma26a, "lemma-2.6a", 5, false, Fixed(1),
        "sum_{k=0}^{(p-3)/2} C((p-1)/2,2k) C(2k,k) H_k^(2)/4^k \
         = sum_{k=1}^{floor((p-1)/4)} C(4k,2k) C(2k,k) H_k^(2)/64^k"),
    row!(Lemma26b, "lemma-2.6b", 5, false, Fixed(1),
        "sum_{k=1}^{floor((p-1)/4)} C(4k,2k) C(2k,k) H_k^(2)/64^k = -E_{p-3}(1/4)"),
    row!(Lemma26Altsum, "lemma-2.6-altsum", 5, false, Fixed(1),
        "sum_{k=1}^{f} C(4k,2k) C(2k,k) H_k^(2)/64^k = -2(-1)^f sum_{k=1}^{f} (-1)^k/k^2, \
         and sum_{k=1}^{f} (-1)^k/k^2 = (1/8)(B_{p-2}({(4-p)/8}) - B_{p-2}({-p/8})), \
         f = floor((p-1)/4)"),
    row!(Lemma27, "lemma-2.7", 5, false, Fixed(4),
        "sum_{k=1}^{(p-1)/2} G((p+1)/2,k) = p(-1/p) + (p^3/4)(2/p) E_{p-3}(1/4)"),
    row!(Binom16k, "binom-16k", 5, false, Fixed(1),
        "C((p-1)/2,2k) = C(4k,2k)/16^k for all 0 <= k <= floor((p-1)/4)"),
    row!(PochExpansion, "poch-expansion", 5, false, Fixed(3),
        "(p/2+1-k)_{k-1}^2 = (k-1)!^2 (1 - pH_{k-1} + (p^2/4)(2H_{k-1}^2 - H_{k-1}^(2))) \
         for all 1 <= k <= (p-1)/2"),
    row!(TwoPowerHalf, "two-power-half", 5, false, Fixed(3),
        "2^{(p-1)/2} = (2/p)(1 + (p/2) q_p(2) - (p^2/8) q_p(2)^2)"),
    row!(Lemma32, "lemma-3.2", 5, true, RPlus(2),
        "G(p^r,(p^r+1)/2) = (-1)^{(p^r-1)/2} p^r"),
    row!(Lemma33, "lemma-3.3", 5, true, RPlus(2),
        "sum_{k=1}^{(p^r-1)/2} G(p^r,k) = 0"),
    row!(Central2pr, "central-2pr", 5, true, Fixed(2),
        "C(2p^r,p^r) = 2 - 4p^r H_{p^r-1} = 2 - 4p H_{p-1} = 2"),
    row!(Ps1, "ps-1", 5, true, RPlus(1),
        "l C(2l,l) C(2k,k) = -2p^r for all k + l = p^r, 0 < l < p^r/2"),
    row!(Ps2, "ps-2", 5, true, Fixed(2),
        "-2p^r/(l C(2l,l)) = C(2k,k) for all k + l = p^r, 0 < l < p^r/2"),
    row!(Ps3, "ps-3", 5, true, Fixed(1),
        "C(2p^r-2l,p^r-l) = 0 for all 0 < l < p^r/2"),
    row!(NegBinomUnit, "neg-binom-unit", 5, true, Fixed(1),
        "C(-p^r-1,p^r-2k) = -prod_{j=1}^{p^r-2k} (1 + p^r/j) = 1 for all 1 <= k <= (p^r-1)/2"),
];

pub fn registry() -> &'static [CongruenceSpec] {
    &REGISTRY
}

impl CongruenceId {
    pub fn all() -> impl Iterator<Item = CongruenceId> {
        REGISTRY.iter().map(|s| s.id)
    }

    pub fn spec(self) -> &'static CongruenceSpec {
        &REGISTRY[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }

    /// Modulus exponent `e` at `(p, r)`.
    pub fn exponent(self, r: u32) -> u32 {
        match self.spec().exponent {
            Fixed(e) => e,
            RPlus(c) => r + c,
        }
    }

    /// Whether `(p, r)` is in the domain of the row; `p` is assumed prime.
    pub fn applicable(self, p: u64, r: u32) -> bool {
        let spec = self.spec();
        p >= spec.min_p && r >= 1 && (spec.r_indexed || r == 1)
    }
}

impl fmt::Display for CongruenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CongruenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        REGISTRY
            .iter()
            .find(|spec| spec.name == s)
            .map(|spec| spec.id)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

fn z(n: impl Into<BigInt>) -> BigRational {
    from_int(n.into())
}

fn sign(n: u64) -> BigRational {
    ratio(sign_pow(n), 1)
}

fn legendre(a: i64, p: u64) -> BigRational {
    ratio(legendre_symbol(a, p) as i64, 1)
}

fn cubed(p: u64) -> BigRational {
    z(BigInt::from(p).pow(3))
}

/// `E_{p-3} mod p`, lifted to its representative in `[0, p)`.
pub fn euler_number_lift(p: u64) -> Result<BigInt> {
    Ok(euler_number_mod_p(p - 3, p)?.lift())
}

/// `E_{p-3}(1/4) mod p`, lifted to its representative in `[0, p)`.
pub fn euler_quarter_lift(p: u64) -> Result<BigInt> {
    Ok(euler_poly_mod_p(p - 3, &ratio(1, 4), p)?.lift())
}

/// `p(-1/p) + (p^3/4)(2/p) E`, with `E` any integer representative of `E_{p-3}(1/4)`.
pub fn main_rhs_with(p: u64, euler_quarter: &BigInt) -> BigRational {
    z(p) * legendre(-1, p) + cubed(p) / z(4) * legendre(2, p) * z(euler_quarter.clone())
}

fn main_rhs(p: u64) -> Result<BigRational> {
    Ok(main_rhs_with(p, &euler_quarter_lift(p)?))
}

fn series(id: SeriesId, p: u64, r: u32) -> Result<Side> {
    let (num, den) = series_fraction(id, p, r)?;
    Ok(Side::Ratio(num, den))
}

fn label(s: &'static str) -> impl FnOnce() -> String {
    move || s.to_string()
}

/// `sum_{k=0}^{(p-3)/2} C((p-1)/2,2k) C(2k,k) w(k)/4^k`.
fn half_binomial_sum(p: u64, weight: impl Fn(u64) -> BigRational) -> BigRational {
    let h = (p - 1) as i64 / 2;
    (0..=(p - 3) / 2)
        .map(|k| {
            let ki = k as i64;
            z(binomial(h, 2 * ki) * binomial(2 * ki, ki)) * weight(k) * pow2(-2 * ki)
        })
        .sum()
}

/// `sum_{k=1}^{f} C(4k,2k) C(2k,k) H_k^(2)/64^k`.
fn sixty_four_sum(f: u64, h: &HarmonicTable) -> BigRational {
    (1..=f)
        .map(|k| {
            let ki = k as i64;
            z(binomial(4 * ki, 2 * ki) * binomial(2 * ki, ki)) * h.h2(k) * pow2(-6 * ki)
        })
        .sum()
}

/// `sum_{k=1}^{f} (-1)^k/k^2`.
pub fn alternating_square_sum(f: u64) -> BigRational {
    (1..=f).map(|k| ratio(sign_pow(k), (k * k) as i64)).sum()
}

/// `(1/8)(B_{p-2}({(4-p)/8}) - B_{p-2}({-p/8})) mod p`.
pub fn bernoulli_difference(p: u64) -> Result<Residue> {
    let table = BernoulliTableModP::new(p, p - 2)?;
    let pi = p as i64;
    let upper = table.poly(p - 2, &frac_part(&ratio(4 - pi, 8)))?;
    let lower = table.poly(p - 2, &frac_part(&ratio(-pi, 8)))?;
    let eighth = reduce_mod(&ratio(1, 8), p, 1)?;
    upper.checked_sub(&lower)?.checked_mul(&eighth)
}

/// `sum_{k=1}^{(P-1)/2} G(P,k)` for odd `P >= 3`, as `num / 2^{3P}`.
///
/// Factors out `P C(2P,P) / 2^{3P}` and accumulates
/// `sum_{j=(P+1)/2}^{P-1} C(2j,j) C(2j,P-1) 4^{P-j}` with an exact ratio
/// recurrence in `j`, so no big-by-big product is formed inside the loop.
pub fn g_half_row_sum(pr: u64) -> (BigInt, BigInt) {
    let p = pr as i64;
    let j0 = (pr + 1) / 2;
    let mut term = binomial(2 * j0 as i64, j0 as i64) * binomial(2 * j0 as i64, p - 1);
    let mut acc = BigInt::zero();
    for j in j0..pr {
        acc = (acc << 2usize) + &term;
        let j = j as u128;
        let q = pr as u128;
        term *= 2 * (2 * j + 1) * (2 * j + 2) * (2 * j + 1);
        term /= (j + 1) * (2 * j + 3 - q) * (2 * j + 2 - q);
    }
    // acc = sum term_j 4^{P-1-j}; the factor (-1)^{P+1} is +1 for odd P
    let num = BigInt::from(pr) * central_binomial(pr) * (acc << 2usize);
    (num, BigInt::one() << (3 * pr) as usize)
}

pub(crate) fn evaluate(id: CongruenceId, p: u64, r: u32, sink: &mut Sink) -> Result<()> {
    use CongruenceId::*;
    let pr = prime_power_u64(p, r)?;
    let h = (p - 1) / 2;
    let hr = (pr - 1) / 2;
    let pz = z(p);
    match id {
        ThmMain => sink.check(label("sum"), series(SeriesId::S8Half, p, 1)?, Side::Exact(main_rhs(p)?)),
        ThmPrimePower => sink.check(
            label("sum"),
            series(SeriesId::S8Full, p, r)?,
            Side::Exact(sign(hr) * z(pr)),
        ),
        VanHamme => sink.check(label("sum"), series(SeriesId::S64Vh, p, 1)?, Side::Exact(sign(h) * pz)),
        WolstenholmeH1 => sink.check_valuation(label("H_{p-1}"), &harmonic(p - 1, 1)),
        WolstenholmeH2 => sink.check_valuation(label("H_{p-1}^(2)"), &harmonic(p - 1, 2)),
        Central2p1p => {
            let c = binomial(2 * p as i64 - 1, p as i64 - 1);
            sink.check(label("binomial"), Side::Ratio(c, int(1)), Side::Exact(z(1)))
        }
        Sun64 => {
            let rhs = sign(h) * &pz + cubed(p) * z(euler_number_lift(p)?);
            sink.check(label("sum"), series(SeriesId::S64Sun, p, 1)?, Side::Exact(rhs))
        }
        GuoLiu => {
            let rhs = &pz * sign((p + 1) / 2) + cubed(p) * (z(2) - z(euler_number_lift(p)?));
            sink.check(label("sum"), series(SeriesId::Sgl, p, 1)?, Side::Exact(rhs))
        }
        LongCxh512 => sink.check(
            label("sum"),
            series(SeriesId::S512Half, p, 1)?,
            Side::Exact(&pz * legendre(-2, p)),
        ),
        Mao512 => {
            let rhs = &pz * legendre(-2, p)
                + cubed(p) / z(4) * legendre(2, p) * z(euler_number_lift(p)?);
            sink.check(label("sum"), series(SeriesId::S512Half, p, 1)?, Side::Exact(rhs))
        }
        Cxh8Full => {
            let rhs = &pz * sign(h) + cubed(p) * z(euler_number_lift(p)?);
            sink.check(label("sum"), series(SeriesId::S8Full, p, 1)?, Side::Exact(rhs))
        }
        RemarkSunC51 => {
            let full = crate::congruences::eval_series(SeriesId::S512Full, p, 1)?;
            let rhs = z(4) * legendre(2, p) * full - z(3) * &pz * legendre(-1, p);
            sink.check(label("sum"), series(SeriesId::S8Half, p, 1)?, Side::Exact(rhs))
        }
        GuoHalf64 | GuoConjFull64 => {
            let which = if id == GuoHalf64 {
                SeriesId::S64GuoHalf
            } else {
                SeriesId::S64GuoFull
            };
            let rhs = sign((p - 1) * r as u64 / 2) * z(pr);
            sink.check(label("sum"), series(which, p, r)?, Side::Exact(rhs))
        }
        Morley => {
            let lhs = binomial(p as i64 - 1, h as i64);
            let rhs = sign(h) * z(BigInt::from(4).pow(p as u32 - 1));
            sink.check(label("binomial"), Side::Ratio(lhs, int(1)), Side::Exact(rhs))
        }
        MorleyPower => {
            let lhs = binomial(pr as i64 - 1, hr as i64);
            let modulus = BigInt::from(p).pow(3);
            let power = BigInt::from(4).modpow(&BigInt::from(pr - 1), &modulus);
            let rhs = Residue::new(power * sign_pow(hr), p, 3)?;
            sink.check(label("binomial"), Side::Ratio(lhs, int(1)), Side::Residue(rhs))
        }
        Lemma22 | Lemma23 | Lemma24 => {
            let scale = pow2((9 * p as i64 - 9) / 2);
            let q = z(fermat_quotient2(p));
            let table = HarmonicTable::new((p - 3) / 2);
            let (sum, rhs) = match id {
                Lemma22 => (
                    half_binomial_sum(p, |_| z(1)),
                    sign(h) * (z(1) + z(6) * &pz * &q + z(15) * &pz * &pz * &q * &q),
                ),
                Lemma23 => (
                    half_binomial_sum(p, |k| table.h1(k).clone()),
                    z(-3) * sign(h) * (z(2) * &q + z(11) * &pz * &q * &q),
                ),
                _ => (
                    half_binomial_sum(p, |k| table.h1(k) * table.h1(k) + table.h2(k)),
                    z(36) * sign(h) * &q * &q,
                ),
            };
            sink.check(label("sum"), Side::Exact(scale * sum), Side::Exact(rhs))
        }
        Lemma26a | Lemma26b | Lemma26Altsum => {
            let f = (p - 1) / 4;
            let table = HarmonicTable::new((p - 3) / 2);
            let quarter_sum = sixty_four_sum(f, &table);
            match id {
                Lemma26a => {
                    let lhs = half_binomial_sum(p, |k| table.h2(k).clone());
                    sink.check(label("sum"), Side::Exact(lhs), Side::Exact(quarter_sum))
                }
                Lemma26b => {
                    let rhs = -z(euler_quarter_lift(p)?);
                    sink.check(label("sum"), Side::Exact(quarter_sum), Side::Exact(rhs))
                }
                _ => {
                    let alt = alternating_square_sum(f);
                    sink.check(
                        label("sixty-four sum"),
                        Side::Exact(quarter_sum),
                        Side::Exact(z(-2) * sign(f) * &alt),
                    )?;
                    sink.check(
                        label("bernoulli"),
                        Side::Exact(alt),
                        Side::Residue(bernoulli_difference(p)?),
                    )
                }
            }
        }
        Lemma27 => {
            let lhs: BigRational = (1..=h).map(|k| eval_g(h + 1, k)).sum();
            sink.check(label("sum"), Side::Exact(lhs), Side::Exact(main_rhs(p)?))
        }
        Binom16k => {
            for k in 0..=(p - 1) / 4 {
                let ki = k as i64;
                let lhs = binomial(h as i64, 2 * ki);
                let rhs = z(binomial(4 * ki, 2 * ki)) * pow2(-4 * ki);
                sink.check(|| format!("k = {k}"), Side::Ratio(lhs, int(1)), Side::Exact(rhs))?;
            }
            Ok(())
        }
        PochExpansion => {
            let table = HarmonicTable::new(h);
            for k in 1..=h {
                let base = ratio(p as i64, 2) + ratio(1 - k as i64, 1);
                let poch = pochhammer(&base, k - 1);
                let (h1, h2) = (table.h1(k - 1), table.h2(k - 1));
                let inner = z(1) - &pz * h1 + &pz * &pz / z(4) * (z(2) * h1 * h1 - h2);
                let rhs = z(factorial(k - 1).pow(2)) * inner;
                sink.check(|| format!("k = {k}"), Side::Exact(&poch * &poch), Side::Exact(rhs))?;
            }
            Ok(())
        }
        TwoPowerHalf => {
            let q = z(fermat_quotient2(p));
            let rhs = legendre(2, p)
                * (z(1) + &pz / z(2) * &q - &pz * &pz / z(8) * &q * &q);
            sink.check(label("power"), Side::Ratio(BigInt::one() << h as usize, int(1)), Side::Exact(rhs))
        }
        Lemma32 => sink.check(
            label("G"),
            Side::Exact(eval_g(pr, (pr + 1) / 2)),
            Side::Exact(sign(hr) * z(pr)),
        ),
        Lemma33 => {
            let (num, den) = g_half_row_sum(pr);
            sink.check(label("sum"), Side::Ratio(num, den), Side::Exact(z(0)))
        }
        Central2pr => {
            let top = z(2) - z(4) * z(pr) * harmonic(pr - 1, 1);
            let bottom = z(2) - z(4) * &pz * harmonic(p - 1, 1);
            sink.check(
                label("binomial"),
                Side::Ratio(central_binomial(pr), int(1)),
                Side::Exact(top.clone()),
            )?;
            sink.check(label("harmonic at p^r"), Side::Exact(top), Side::Exact(bottom.clone()))?;
            sink.check(label("harmonic at p"), Side::Exact(bottom), Side::Exact(z(2)))
        }
        Ps1 | Ps2 | Ps3 => central_pairs(pr, |l, up, down| {
            let k = pr - l;
            let at = || format!("l = {l}, k = {k}");
            match id {
                Ps1 => {
                    let e = r + 1;
                    let lhs = Residue::new(int(l as i64), p, e)?
                        .checked_mul(&Residue::new(up.clone(), p, e)?)?
                        .checked_mul(&Residue::new(down.clone(), p, e)?)?;
                    let rhs = Residue::new(BigInt::from(pr) * -2, p, e)?;
                    sink.check(at, Side::Residue(lhs), Side::Residue(rhs))
                }
                Ps2 => sink.check(
                    at,
                    Side::Ratio(BigInt::from(pr) * -2, up * l),
                    Side::Residue(Residue::new(down.clone(), p, 2)?),
                ),
                _ => sink.check(
                    at,
                    Side::Residue(Residue::new(down.clone(), p, 1)?),
                    Side::Exact(z(0)),
                ),
            }
        }),
        NegBinomUnit => {
            let one = Residue::new(int(1), p, 1)?;
            let mut coefficient = BigInt::one();
            let mut product = one.clone();
            for m in 1..=pr.saturating_sub(2) {
                // C(-P-1, m) = C(-P-1, m-1) (-P-m)/m
                coefficient *= -BigInt::from(pr + m);
                coefficient /= m;
                let factor = reduce_fraction(&BigInt::from(pr + m), &BigInt::from(m), p, 1)?;
                product = product.checked_mul(&factor)?;
                if m % 2 == 1 {
                    let k = (pr - m) / 2;
                    let negated = product.neg();
                    sink.check(
                        || format!("k = {k}, binomial"),
                        Side::Residue(Residue::new(coefficient.clone(), p, 1)?),
                        Side::Residue(negated.clone()),
                    )?;
                    sink.check(
                        || format!("k = {k}, unit"),
                        Side::Residue(negated),
                        Side::Residue(one.clone()),
                    )?;
                }
            }
            Ok(())
        }
    }
}

/// Calls `visit(l, C(2l,l), C(2k,k))` for `k = P - l` and `0 < l < P/2`.
///
/// Both central binomials are advanced by exact small ratios: `C(2l,l)`
/// upward from `C(0,0)`, `C(2k,k)` downward from `C(2P-2,P-1)`.
fn central_pairs(
    pr: u64,
    mut visit: impl FnMut(u64, &BigInt, &BigInt) -> Result<()>,
) -> Result<()> {
    if pr < 3 {
        return Ok(());
    }
    let mut up = BigInt::one();
    let mut down = central_binomial(pr - 1);
    for l in 1..=(pr - 1) / 2 {
        up *= 2 * (2 * l - 1);
        up /= l;
        if l > 1 {
            let k = pr - l;
            down *= k + 1;
            down /= 2 * (2 * k + 1);
        }
        visit(l, &up, &down)?;
    }
    Ok(())
}
