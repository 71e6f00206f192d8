//! Acceptance gate: one line per criterion, then a nonzero exit if any failed.
//!
//! Every comparison is exact residue or rational equality; there is no
//! tolerance to tune.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use supercong::combinat::{binomial, pochhammer};
use supercong::congruences::{
    check_congruence, eval_series, euler_quarter_via_altsum, euler_quarter_via_bernoulli, run_suite, CongruenceId,
    SeriesId, Verdict,
};
use supercong::exactnum::{mod_inverse, padic_valuation, primes_in, ratio, reduce_mod, BigRational, Residue};
use supercong::identities::{check_identity_range, IdentityId};
use supercong::special::{bernoulli_exact, euler_poly_mod_p, BernoulliTableModP};
use supercong::wz::{check_closed_form, check_full_sums, check_half_sums, check_pair_identity};

struct Outcome {
    pass: bool,
    summary: String,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
        }
    }
}

fn criterion(n: u32, title: &str, budget: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_budget = budget.map_or(true, |b| elapsed <= b);
    let pass = outcome.pass && in_budget;
    let timing = match budget {
        Some(b) => format!("{:.2}s, budget {}s", elapsed.as_secs_f64(), b.as_secs()),
        None => format!("{:.2}s", elapsed.as_secs_f64()),
    };
    println!(
        "{} [{n}] {title} | tolerance: exact | {} | {timing}",
        if pass { "PASS" } else { "FAIL" },
        outcome.summary
    );
    pass
}

fn residue(v: &Option<Residue>) -> String {
    v.as_ref().map_or("-".to_string(), |r| r.value().to_string())
}

/// Runs the given ids and summarises failures per id.
fn suite_outcome(groups: &[(&[CongruenceId], u64, u32)], spot: impl FnOnce() -> (bool, String)) -> Outcome {
    let mut verdicts: Vec<Verdict> = Vec::new();
    for &(ids, p_max, r_max) in groups {
        match run_suite(ids, &primes_in(5, p_max), r_max) {
            Ok(v) => verdicts.extend(v),
            Err(e) => return Outcome::new(false, format!("suite error: {e}")),
        }
    }
    let mut failing: Vec<String> = Vec::new();
    let all_ids: Vec<CongruenceId> = groups.iter().flat_map(|g| g.0.iter().copied()).collect();
    for id in &all_ids {
        let of_id: Vec<&Verdict> = verdicts.iter().filter(|v| v.id == *id).collect();
        let bad: Vec<&&Verdict> = of_id.iter().filter(|v| !v.pass).collect();
        if let Some(first) = bad.first() {
            failing.push(format!(
                "{id} fails at {}/{} (p, r), first p={} r={}: {} [lhs {} rhs {} mod {}]",
                bad.len(),
                of_id.len(),
                first.p,
                first.r,
                first.detail.as_deref().unwrap_or(""),
                residue(&first.lhs),
                residue(&first.rhs),
                first.modulus_label(),
            ));
        }
    }
    let (spot_ok, spot_text) = spot();
    let pass = failing.is_empty() && spot_ok && !verdicts.is_empty();
    let mut summary = format!(
        "{} ids, {} verdicts, {} failing; spot: {spot_text}",
        all_ids.len(),
        verdicts.len(),
        verdicts.iter().filter(|v| !v.pass).count()
    );
    for f in failing {
        summary.push_str("; ");
        summary.push_str(&f);
    }
    Outcome::new(pass, summary)
}

fn spot(id: CongruenceId, p: u64, r: u32, expected: u64) -> (bool, String) {
    match check_congruence(id, p, r) {
        Ok(v) => {
            let ok = v.pass
                && v.lhs.as_ref().and_then(Residue::to_u64) == Some(expected)
                && v.rhs.as_ref().and_then(Residue::to_u64) == Some(expected);
            (
                ok,
                format!(
                    "{id} at p={p}: {} = {} mod {} (expected {expected})",
                    residue(&v.lhs),
                    residue(&v.rhs),
                    v.modulus_label()
                ),
            )
        }
        Err(e) => (false, format!("{id} at p={p}: {e}")),
    }
}

fn theorem() -> Outcome {
    suite_outcome(&[(&[CongruenceId::ThmMain], 199, 1)], || spot(CongruenceId::ThmMain, 5, 1, 255))
}

fn prime_power_theorem() -> Outcome {
    let mut verdicts = match run_suite(&[CongruenceId::ThmPrimePower], &primes_in(5, 47), 2) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    match check_congruence(CongruenceId::ThmPrimePower, 5, 3) {
        Ok(v) => verdicts.push(v),
        Err(e) => return Outcome::new(false, e.to_string()),
    }
    let bad: Vec<String> = verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| format!("(p={}, r={})", v.p, v.r))
        .collect();
    let (spot_ok, spot_text) = spot(CongruenceId::ThmPrimePower, 5, 1, 5);
    Outcome::new(
        bad.is_empty() && spot_ok,
        format!("{} verdicts, failing {:?}; spot: {spot_text}", verdicts.len(), bad),
    )
}

fn cited_suite() -> Outcome {
    use CongruenceId::*;
    let fixed: &[CongruenceId] = &[
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
    ];
    let powered: &[CongruenceId] = &[GuoHalf64, GuoConjFull64];
    suite_outcome(&[(fixed, 199, 1), (powered, 31, 2)], || {
        let exact = eval_series(SeriesId::S64Vh, 5, 1).ok();
        let (ok, text) = spot(VanHamme, 5, 1, 5);
        let sum_ok = exact == Some(ratio(435, 512));
        (ok && sum_ok, format!("{text}, sum 435/512: {sum_ok}"))
    })
}

fn lemma_suite() -> Outcome {
    use CongruenceId::*;
    let fixed: &[CongruenceId] = &[
        Morley,
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
    ];
    let powered: &[CongruenceId] = &[MorleyPower, Lemma32, Lemma33, Central2pr, Ps1, Ps2, Ps3, NegBinomUnit];
    suite_outcome(&[(fixed, 199, 1), (powered, 31, 2)], || {
        let (ok, text) = spot(Lemma22, 5, 1, 91);
        let direct = reduce_mod(&ratio(393216, 1), 5, 3).ok().and_then(|r| r.to_u64()) == Some(91)
            && 3466 % 125 == 91;
        (ok && direct, text)
    })
}

fn wz_certification() -> Outcome {
    let pair = check_pair_identity(100, 100);
    let half = check_half_sums(100);
    let full = check_full_sums(200);
    let closed = check_closed_form(99);
    let parts = [("pair 100x100", &pair), ("half m<=100", &half), ("full M<=200", &full), ("closed p<=99", &closed)];
    let text: Vec<String> = parts
        .iter()
        .map(|(name, v)| format!("{name}: {} checked, {} failures", v.checked(), v.failures().len()))
        .collect();
    Outcome::new(parts.iter().all(|(_, v)| v.pass()), text.join(", "))
}

fn identity_suite() -> Outcome {
    let mut text = Vec::new();
    let mut pass = true;
    for id in IdentityId::ALL {
        match check_identity_range(id, 200) {
            Ok(v) => {
                pass &= v.pass();
                if !v.pass() {
                    text.push(format!("{id} fails at {:?}", &v.failures()[..v.failures().len().min(3)]));
                } else {
                    text.push(format!("{id} {}", v.checked()));
                }
            }
            Err(e) => {
                pass = false;
                text.push(format!("{id}: {e}"));
            }
        }
    }
    Outcome::new(pass, format!("n <= 200, cases per id: {}", text.join(", ")))
}

fn dual_euler() -> Outcome {
    let primes = primes_in(5, 499);
    let mut bad = Vec::new();
    for &p in &primes {
        let direct = euler_poly_mod_p(p - 3, &ratio(1, 4), p);
        let via_b = euler_quarter_via_bernoulli(p);
        let via_a = euler_quarter_via_altsum(p);
        match (direct, via_b, via_a) {
            (Ok(d), Ok(b), Ok(a)) if d == b && d == a => {}
            _ => bad.push(p),
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{} primes in 5..499, disagreeing at {:?}", primes.len(), bad),
    )
}

fn p_integral(p: u64) -> impl Strategy<Value = BigRational> {
    (-1_000_000i64..1_000_000, 1i64..1_000_000)
        .prop_filter("p-free denominator", move |(_, d)| d % p as i64 != 0)
        .prop_map(|(n, d)| ratio(n, d))
}

fn any_rational() -> impl Strategy<Value = BigRational> {
    (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| ratio(n, d))
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(primes_in(5, 60))
}

fn property_suites() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    let mut results: Vec<(&str, Result<(), String>)> = Vec::new();
    let mut run = |name: &'static str, r: Result<(), String>| results.push((name, r));

    run(
        "field laws",
        runner
            .run(&(any_rational(), any_rational(), any_rational()), |(a, b, c)| {
                prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
                prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
                prop_assert!(a.denom() > &BigInt::from(0));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run(
        "reduction homomorphism, e <= 6",
        runner
            .run(
                &small_prime().prop_flat_map(|p| (Just(p), 1u32..=6, p_integral(p), p_integral(p))),
                |(p, e, a, b)| {
                    let (ra, rb) = (reduce_mod(&a, p, e).unwrap(), reduce_mod(&b, p, e).unwrap());
                    prop_assert_eq!(reduce_mod(&(&a + &b), p, e).unwrap(), ra.checked_add(&rb).unwrap());
                    prop_assert_eq!(reduce_mod(&(&a - &b), p, e).unwrap(), ra.checked_sub(&rb).unwrap());
                    prop_assert_eq!(reduce_mod(&(&a * &b), p, e).unwrap(), ra.checked_mul(&rb).unwrap());
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );
    run(
        "valuation additivity and inverses",
        runner
            .run(&(small_prime(), any_rational(), any_rational(), 1i64..100_000), |(p, a, b, m)| {
                prop_assume!(a != BigRational::from_integer(0.into()) && b != BigRational::from_integer(0.into()));
                prop_assert_eq!(
                    padic_valuation(&(&a * &b), p).unwrap(),
                    padic_valuation(&a, p).unwrap() + padic_valuation(&b, p).unwrap()
                );
                let (x, modulus) = (BigInt::from(m), BigInt::from(p).pow(3));
                if let Ok(inv) = mod_inverse(&x, &modulus) {
                    prop_assert_eq!((inv * x) % &modulus, BigInt::one());
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run("pascal rule on [-50, 50] x [0, 50]", {
        let bad = (-50i64..=50)
            .flat_map(|n| (0i64..=50).map(move |k| (n, k)))
            .find(|&(n, k)| binomial(n, k) != binomial(n - 1, k - 1) + binomial(n - 1, k));
        bad.map_or(Ok(()), |nk| Err(format!("fails at {nk:?}")))
    });
    run(
        "pochhammer composition, m + n <= 60",
        runner
            .run(&(any_rational(), 0u64..=30, 0u64..=30), |(a, m, n)| {
                let shifted = &a + ratio(m as i64, 1);
                prop_assert_eq!(pochhammer(&a, m + n), pochhammer(&a, m) * pochhammer(&shifted, n));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run("odd bernoulli numbers vanish, 2n+1 <= 81", {
        let bad = (1u64..=40).find(|n| bernoulli_exact(2 * n + 1) != BigRational::from_integer(0.into()));
        bad.map_or(Ok(()), |n| Err(format!("B_{} nonzero", 2 * n + 1)))
    });
    run(
        "bernoulli reflection and translation mod p",
        runner
            .run(
                &small_prime().prop_flat_map(|p| (Just(p), p_integral(p), p_integral(p))),
                |(p, x, y)| {
                    let table = BernoulliTableModP::new(p, p - 2).unwrap();
                    let xr = reduce_mod(&x, p, 1).unwrap();
                    for n in 0..=p - 2 {
                        let lhs = table.poly(n, &(BigRational::one() - &x)).unwrap();
                        let rhs = table.poly(n, &x).unwrap();
                        prop_assert_eq!(lhs, if n % 2 == 0 { rhs.clone() } else { rhs.neg() });

                        let mut sum = Residue::zero(p, 1).unwrap();
                        let mut x_pow = Residue::new(1, p, 1).unwrap();
                        for k in 0..=n {
                            let c = Residue::new(binomial(n as i64, k as i64), p, 1).unwrap();
                            let term = c.checked_mul(&table.poly(n - k, &y).unwrap()).unwrap();
                            sum = sum.checked_add(&term.checked_mul(&x_pow).unwrap()).unwrap();
                            x_pow = x_pow.checked_mul(&xr).unwrap();
                        }
                        prop_assert_eq!(table.poly(n, &(&x + &y)).unwrap(), sum);
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );

    let failed: Vec<String> = results
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    let names: Vec<&str> = results.iter().map(|(n, _)| *n).collect();
    Outcome::new(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} suites: {}", names.len(), names.join(", "))
        } else {
            failed.join("; ")
        },
    )
}

fn determinism() -> Outcome {
    let args = [
        "verify",
        "--primes",
        "5:60",
        "--ids",
        "all",
        "--r-max",
        "2",
        "--wz-grid",
        "20",
        "--identities-n-max",
        "40",
        "--no-timing",
    ];
    let runs: Vec<_> = (0..2)
        .map(|_| Command::new(env!("CARGO_BIN_EXE_supercong")).args(args).output())
        .collect();
    match (&runs[0], &runs[1]) {
        (Ok(a), Ok(b)) => {
            let same = a.stdout == b.stdout && !a.stdout.is_empty();
            Outcome::new(
                same,
                format!(
                    "two runs, {} report bytes, {} lines, byte-identical: {same}",
                    a.stdout.len(),
                    a.stdout.iter().filter(|&&c| c == b'\n').count()
                ),
            )
        }
        _ => Outcome::new(false, "could not run the binary"),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "theorem, mod p^4, 5 <= p <= 199", Some(secs(10)), theorem),
        criterion(2, "prime-power theorem, mod p^{r+2}, p <= 47 r <= 2, p = 5 r = 3", Some(secs(30)), prime_power_theorem),
        criterion(3, "cited congruences, p <= 199 (r-indexed p <= 31, r <= 2)", None, cited_suite),
        criterion(4, "lemma suite, p <= 199 (power-indexed p <= 31, r <= 2)", None, lemma_suite),
        criterion(5, "WZ certification", Some(secs(60)), wz_certification),
        criterion(6, "identities I1-I12, n <= 200", Some(secs(60)), identity_suite),
        criterion(7, "two routes to E_{p-3}(1/4) mod p, 5 <= p <= 499", None, dual_euler),
        criterion(8, "property suites", None, property_suites),
        criterion(9, "report determinism with --no-timing", None, determinism),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
