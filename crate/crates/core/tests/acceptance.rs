//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them on success). The numeric criteria are
//! checked against independent brute-force oracles written in this file.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use mzv_core::verify::{
    check_cancellation, check_drop1_axioms, check_fmzv, check_hoffman_diamond, check_lemma41,
    check_main_theorem, scan_conjectures,
};
use mzv_core::{
    diamond_flat_p, drop1, eval_lincomb, hoffman_diamond_instance, primes_in_range, zeta_p_mod,
    zeta_trunc_exact, zeta_trunc_float, CheckStatus, Composition, EvalBackend, Evaluation, LinComb,
    DEFAULT_MEMO_CAP,
};

fn comp(parts: &[u32]) -> Composition {
    Composition::new(parts.to_vec()).unwrap()
}

fn word_lc(parts: &[u32]) -> LinComb {
    LinComb::from_word(comp(parts).to_word())
}

fn verdict(criterion: &str, pass: bool, detail: String) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn ac01_main_identity_scan_weight_12() {
    let report = check_main_theorem(12, DEFAULT_MEMO_CAP);
    verdict(
        "1 main identity scan (weight <= 12)",
        report.status == CheckStatus::Pass && report.elapsed_ms < 5 * 60 * 1000,
        format!(
            "{} cases, {} failures, {} ms",
            report.cases_total,
            report.failures.len(),
            report.elapsed_ms
        ),
    );
}

// Stretch target, not gating.
#[test]
#[ignore]
fn ac01_stretch_main_identity_scan_weight_14() {
    let report = check_main_theorem(14, DEFAULT_MEMO_CAP);
    verdict(
        "1s main identity scan (weight <= 14)",
        report.status == CheckStatus::Pass,
        format!("{} cases, {} ms", report.cases_total, report.elapsed_ms),
    );
}

#[test]
fn ac02_drop1_axioms_weight_12() {
    let report = check_drop1_axioms(12, DEFAULT_MEMO_CAP);
    verdict(
        "2 drop-1 axioms (weight <= 12)",
        report.status == CheckStatus::Pass && report.elapsed_ms < 2 * 60 * 1000,
        format!(
            "{} cases, {} failures, {} ms",
            report.cases_total,
            report.failures.len(),
            report.elapsed_ms
        ),
    );
}

#[test]
fn ac03_micro_oracles() {
    let cases: [(&[u32], LinComb); 4] = [
        (&[2], word_lc(&[2])),
        (&[1, 2], word_lc(&[3])),
        (&[1, 3], {
            let mut p = word_lc(&[4]);
            p.add_scaled(&word_lc(&[2, 2]), &-BigRational::one());
            p
        }),
        (&[3, 1, 2], {
            let mut p = word_lc(&[3, 3]).scale(&BigRational::from_integer(2.into()));
            p.add_scaled(&word_lc(&[2, 2, 2]), &BigRational::one());
            p
        }),
    ];
    let mut all = true;
    for (parts, expected) in &cases {
        let got = drop1(&comp(parts).to_word()).unwrap();
        if &got != expected {
            all = false;
            eprintln!("drop1({parts:?}) = {got}, expected {expected}");
        }
    }
    verdict(
        "3 hand-verified micro-oracles",
        all,
        format!("{} exact images", cases.len()),
    );
}

#[test]
fn ac04_hoffman_basis_reproduction_float() {
    const N: u64 = 10_000_000;
    let q = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let mut basis = LinComb::from_term(comp(&[2, 2, 2, 2]).to_word(), q(-2048, 4125));
    basis.add_term(comp(&[2, 3, 3]).to_word(), &q(-17, 275));
    basis.add_term(comp(&[3, 2, 3]).to_word(), &q(2, 275));
    basis.add_term(comp(&[3, 3, 2]).to_word(), &q(113, 275));

    let started = std::time::Instant::now();
    let lhs = zeta_trunc_float(&comp(&[3, 1, 4]), N).unwrap().value;
    let rhs = match eval_lincomb(&basis, &EvalBackend::Float { truncation: N }).unwrap() {
        Evaluation::Float(x) => x,
        other => panic!("float backend returned {other:?}"),
    };
    let elapsed = started.elapsed();
    let diff = (lhs - rhs).abs();
    verdict(
        "4 rational Hoffman-basis reproduction at N=1e7",
        diff <= 1e-3 && elapsed.as_secs() < 10,
        format!("|diff| = {diff:.3e}, {} ms", elapsed.as_millis()),
    );
}

#[test]
fn ac05_exact_diamond_instances() {
    let report = check_hoffman_diamond(4, 40);
    let (lhs, rhs) = hoffman_diamond_instance(1, 3);
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    verdict(
        "5 exact truncated diamond identity (c <= 4, N <= 40)",
        report.status == CheckStatus::Pass && lhs == quarter && rhs == quarter,
        format!("{} cases, hand case (c=1, N=3) = {lhs}", report.cases_total),
    );
}

#[test]
fn ac06_chain_sum_congruence_weight_8() {
    let primes = primes_in_range(5, 97);
    let report = check_lemma41(8, &primes).unwrap();
    verdict(
        "6 chain-sum congruence (weight <= 8, primes 5..97)",
        report.status == CheckStatus::Pass && report.elapsed_ms < 60 * 1000,
        format!(
            "{} cases, {} failures, {} ms",
            report.cases_total,
            report.failures.len(),
            report.elapsed_ms
        ),
    );
}

#[test]
fn ac07_fmzv_suite_weight_8() {
    let primes = primes_in_range(11, 199);
    let report = check_fmzv(8, &primes).unwrap();
    // Flagged exceptions are tolerated only under the small-prime rule; the
    // checker itself enforces p <= weight + 1 for those, so any failure at a
    // large prime lands in `failures` and flips the status.
    verdict(
        "7 finite-sum suite (weight <= 8, primes 11..199)",
        report.status == CheckStatus::Pass,
        format!(
            "{} cases, {} failures, {} flagged small-prime exceptions",
            report.cases_total,
            report.failures.len(),
            report.exceptions.len()
        ),
    );
}

#[test]
fn ac08_oracle_equivalence() {
    use rayon::prelude::*;

    let comps = small_compositions();
    let cases: u64 = comps
        .par_iter()
        .map(|k| {
            let mut cases = 0u64;
            for n in 1..=60u64 {
                let naive = naive_zeta_exact(k.parts(), n);
                assert_eq!(zeta_trunc_exact(k, n).unwrap(), naive, "exact k={k} N={n}");
                let naive_f = naive_zeta_float(k.parts(), n);
                let dp_f = zeta_trunc_float(k, n).unwrap().value;
                let tolerance = 1e-12 * naive_f.max(1e-300);
                assert!(
                    (dp_f - naive_f).abs() <= tolerance || (naive_f == 0.0 && dp_f == 0.0),
                    "float k={k} N={n}: {dp_f} vs {naive_f}"
                );
                cases += 2;
            }
            for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                let naive = naive_zeta_mod(k.parts(), p);
                assert_eq!(zeta_p_mod(k, p).unwrap().residue, naive, "mod k={k} p={p}");
                cases += 1;
            }
            cases
        })
        .sum();

    // Diamond-flat chain against the literal block-structured loop.
    let mut diamond_cases = 0u64;
    for k in enumerate_small_admissible(5) {
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            let naive = naive_diamond(k.parts(), p);
            assert_eq!(
                diamond_flat_p(&k, p).unwrap().residue,
                naive,
                "diamond k={k} p={p}"
            );
            diamond_cases += 1;
        }
    }

    verdict(
        "8 DP evaluators match naive nested loops",
        true,
        format!("{cases} zeta cases, {diamond_cases} diamond cases"),
    );
}

#[test]
fn ac09_conjecture_scan_weight_10() {
    let report = scan_conjectures(10, DEFAULT_MEMO_CAP);
    verdict(
        "9 conjecture scan (weight <= 10)",
        report.status == CheckStatus::Pass && report.elapsed_ms < 2 * 60 * 1000,
        format!(
            "{} cases, {} findings, {} ms",
            report.cases_total,
            report.failures.len(),
            report.elapsed_ms
        ),
    );
}

#[test]
fn ac10_bracket_cancellation_identity() {
    let report = check_cancellation(5, DEFAULT_MEMO_CAP);
    verdict(
        "10 four-term bracket cancellation (block weight <= 5)",
        report.status == CheckStatus::Pass,
        format!(
            "{} (bracket, A, B) cases, {} failures",
            report.cases_total,
            report.failures.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// Independent oracles: plain nested loops, no shared code with the evaluators.
// ---------------------------------------------------------------------------

/// All compositions with depth <= 3 and parts in {1, 2, 3}.
fn small_compositions() -> Vec<Composition> {
    let mut out = vec![Composition::empty()];
    for a in 1..=3u32 {
        out.push(comp(&[a]));
        for b in 1..=3u32 {
            out.push(comp(&[a, b]));
            for c in 1..=3u32 {
                out.push(comp(&[a, b, c]));
            }
        }
    }
    out
}

/// Nonempty admissible compositions of weight <= bound.
fn enumerate_small_admissible(bound: u32) -> Vec<Composition> {
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<u32>, remaining: u32, out: &mut Vec<Composition>) {
        if let Some(&last) = prefix.last() {
            if last >= 2 {
                out.push(Composition::new(prefix.clone()).unwrap());
            }
        }
        for part in 1..=remaining {
            prefix.push(part);
            rec(prefix, remaining - part, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), bound, &mut out);
    out
}

fn naive_zeta_exact(parts: &[u32], n: u64) -> BigRational {
    // factors[k][m] = m^{-k}, precomputed so the nested loops below stay cheap.
    let max_part = parts.iter().copied().max().unwrap_or(1) as usize;
    let factors: Vec<Vec<BigRational>> = (0..=max_part)
        .map(|k| {
            (0..n)
                .map(|m| {
                    if m == 0 {
                        BigRational::zero()
                    } else {
                        BigRational::new(BigInt::one(), BigInt::from(m).pow(k as u32))
                    }
                })
                .collect()
        })
        .collect();
    fn rec(parts: &[u32], min: u64, n: u64, factors: &[Vec<BigRational>]) -> BigRational {
        let mut acc = BigRational::zero();
        match parts.split_first() {
            None => unreachable!("handled by caller"),
            Some((&k, rest)) => {
                for m in min..n {
                    let factor = &factors[k as usize][m as usize];
                    if rest.is_empty() {
                        acc += factor;
                    } else {
                        acc += factor * rec(rest, m + 1, n, factors);
                    }
                }
            }
        }
        acc
    }
    if parts.is_empty() {
        BigRational::one()
    } else {
        rec(parts, 1, n, &factors)
    }
}

fn naive_zeta_float(parts: &[u32], n: u64) -> f64 {
    fn rec(parts: &[u32], min: u64, n: u64) -> f64 {
        match parts.split_first() {
            None => 1.0,
            Some((&k, rest)) => {
                let mut acc = 0.0;
                for m in min..n {
                    acc += rec(rest, m + 1, n) / (m as f64).powi(k as i32);
                }
                acc
            }
        }
    }
    rec(parts, 1, n)
}

fn oracle_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn oracle_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = oracle_mul(acc, base, p);
        }
        base = oracle_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn oracle_inv(a: u64, p: u64) -> u64 {
    oracle_pow(a, p - 2, p)
}

fn naive_zeta_mod(parts: &[u32], p: u64) -> u64 {
    fn rec(parts: &[u32], min: u64, p: u64) -> u64 {
        match parts.split_first() {
            None => 1 % p,
            Some((&k, rest)) => {
                let mut acc = 0;
                for m in min..p {
                    let factor = oracle_inv(oracle_pow(m, k as u64, p), p);
                    acc = (acc + oracle_mul(factor, rec(rest, m + 1, p), p)) % p;
                }
                acc
            }
        }
    }
    rec(parts, 1, p)
}

/// Literal transcription of the block-structured chain sum: inside block i the
/// a_i variables carry (p - v)^{-1} and the b_i variables v^{-1}, weakly
/// increasing, with a strict jump between blocks.
fn naive_diamond(parts: &[u32], p: u64) -> u64 {
    let mut blocks: Vec<(u32, u32)> = Vec::new();
    let mut ones = 0u32;
    for &part in parts {
        if part == 1 {
            ones += 1;
        } else {
            blocks.push((ones + 1, part - 1));
            ones = 0;
        }
    }
    assert_eq!(ones, 0, "oracle needs an admissible composition");

    fn rec(blocks: &[(u32, u32)], bi: usize, vi: u32, min: u64, p: u64) -> u64 {
        if bi == blocks.len() {
            return 1 % p;
        }
        let (a, b) = blocks[bi];
        let mut acc = 0;
        for v in min..p {
            let factor = if vi < a {
                oracle_inv(p - v, p)
            } else {
                oracle_inv(v, p)
            };
            let rest = if vi + 1 < a + b {
                rec(blocks, bi, vi + 1, v, p)
            } else {
                rec(blocks, bi + 1, 0, v + 1, p)
            };
            acc = (acc + oracle_mul(factor, rest, p)) % p;
        }
        acc
    }
    rec(&blocks, 0, 0, 1, p)
}
