//! Named checkers for the algebraic and mod-p identities, plus scanners for
//! the two open conjectures. Every checker returns a [`CheckReport`]; failures
//! are recorded, never thrown. Case fan-out uses the ambient rayon pool with
//! per-worker engines, and reports merge deterministically.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{shuffle, star, LinComb};
use crate::drop1::{enumerate_family, tuple_surgery, Drop1, FamilyKind, SurgerySpec};
use crate::numeric::{
    diamond_flat_p, hoffman_diamond_instance, is_prime_u64, zeta_p_mod, NumericError,
};
use crate::words::{
    enumerate_admissible, enumerate_geq2, enumerate_h23, BracketForm, Composition, Word,
};

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Exception,
}

/// One failing (or flagged) case: the input and both serialized sides.
#[derive(Serialize, Clone, PartialEq, Eq, Debug)]
pub struct CaseRecord {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

/// Structured record of one verification run. `status` is `pass` exactly when
/// no failure was recorded and the run completed; flagged small-prime
/// exceptions do not fail a run.
#[derive(Serialize, Clone, Debug)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub cases_total: u64,
    pub failures: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub exceptions: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
    pub status: CheckStatus,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Failures (and flagged exceptions) as CSV with an `input,lhs,rhs` header.
    pub fn failures_csv(&self) -> String {
        let field = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::from("kind,input,lhs,rhs\n");
        for (kind, rec) in self
            .failures
            .iter()
            .map(|r| ("failure", r))
            .chain(self.exceptions.iter().map(|r| ("exception", r)))
        {
            out.push_str(&format!(
                "{kind},{},{},{}\n",
                field(&rec.input),
                field(&rec.lhs),
                field(&rec.rhs)
            ));
        }
        out
    }

    pub fn render_text(&self) -> String {
        let status = match self.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Exception => "EXCEPTION",
        };
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut out = format!(
            "check {}: {} ({} cases, {} failures, {} flagged, {} ms) [{}]\n",
            self.check,
            status,
            self.cases_total,
            self.failures.len(),
            self.exceptions.len(),
            self.elapsed_ms,
            params
        );
        const SHOWN: usize = 25;
        for rec in self.failures.iter().take(SHOWN) {
            out.push_str(&format!(
                "  FAIL {}\n    lhs: {}\n    rhs: {}\n",
                rec.input, rec.lhs, rec.rhs
            ));
        }
        if self.failures.len() > SHOWN {
            out.push_str(&format!(
                "  ... and {} more failures\n",
                self.failures.len() - SHOWN
            ));
        }
        for rec in self.exceptions.iter().take(SHOWN) {
            out.push_str(&format!(
                "  flagged {}\n    lhs: {}\n    rhs: {}\n",
                rec.input, rec.lhs, rec.rhs
            ));
        }
        if let Some(err) = &self.error {
            out.push_str(&format!("  error: {err}\n"));
        }
        out
    }
}

enum Outcome {
    Pass,
    Fail(CaseRecord),
    /// A mismatch excused by the small-prime rule; reported, not failed.
    Flagged(CaseRecord),
}

/// Run the cases over the ambient rayon pool with one engine per worker,
/// preserving case order, then assemble the report. Failures sort by input
/// serialization so reports are identical regardless of pool size.
fn run_report<C, S, I, F>(
    name: &str,
    params: Vec<(&str, String)>,
    cases: Vec<C>,
    init: I,
    run: F,
) -> CheckReport
where
    C: Sync,
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &C) -> Result<Outcome, String> + Sync + Send,
{
    let started = Instant::now();
    let cases_total = cases.len() as u64;
    let results: Vec<Result<Outcome, String>> = cases
        .par_iter()
        .map_init(&init, |state, case| run(state, case))
        .collect();

    let mut failures = Vec::new();
    let mut exceptions = Vec::new();
    let mut error = None;
    for result in results {
        match result {
            Ok(Outcome::Pass) => {}
            Ok(Outcome::Fail(rec)) => failures.push(rec),
            Ok(Outcome::Flagged(rec)) => exceptions.push(rec),
            Err(e) => {
                error.get_or_insert(e);
            }
        }
    }
    failures.sort_by(|a, b| a.input.cmp(&b.input));
    exceptions.sort_by(|a, b| a.input.cmp(&b.input));

    let status = if error.is_some() {
        CheckStatus::Exception
    } else if failures.is_empty() {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CheckReport {
        check: name.to_string(),
        params: params
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        cases_total,
        failures,
        exceptions,
        error,
        elapsed_ms: started.elapsed().as_millis() as u64,
        status,
    }
}

fn equality_case(input: String, lhs: &LinComb, rhs: &LinComb) -> Outcome {
    if lhs == rhs {
        Outcome::Pass
    } else {
        Outcome::Fail(CaseRecord {
            input,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    }
}

/// For every ordered pair of {2,3}-indexed words with total weight within the
/// bound, checks that the drop-1 image of w1 tau(w2) equals w1 * w2.
pub fn check_main_theorem(max_total_weight: u32, memo_cap: usize) -> CheckReport {
    let words = enumerate_h23(max_total_weight);
    let mut cases = Vec::new();
    for w1 in &words {
        for w2 in &words {
            if w1.weight() + w2.weight() <= max_total_weight {
                cases.push((w1.clone(), w2.clone()));
            }
        }
    }
    run_report(
        "main",
        vec![("max_total_weight", max_total_weight.to_string())],
        cases,
        || Drop1::with_cap(memo_cap),
        |engine, (w1, w2)| {
            let product_word = w1.to_word().concat(&w2.to_word().tau());
            let lhs = engine.apply(&product_word).map_err(|e| e.to_string())?;
            let rhs = star(w1, w2).expect("arguments enumerated inside H23");
            Ok(equality_case(format!("w1={w1} w2={w2}"), &lhs, &rhs))
        },
    )
}

enum AxiomCase {
    FixedPoint(Composition),
    TauInvariance(Composition),
    Idempotence(Composition),
}

/// Fixed points on H^{>=2} words, plus tau-invariance and idempotence on H0
/// words, exhaustively up to the weight bound.
pub fn check_drop1_axioms(max_weight: u32, memo_cap: usize) -> CheckReport {
    let mut cases = Vec::new();
    for k in enumerate_geq2(max_weight) {
        cases.push(AxiomCase::FixedPoint(k));
    }
    for k in enumerate_admissible(max_weight) {
        cases.push(AxiomCase::TauInvariance(k.clone()));
        cases.push(AxiomCase::Idempotence(k));
    }
    run_report(
        "axioms",
        vec![("max_weight", max_weight.to_string())],
        cases,
        || Drop1::with_cap(memo_cap),
        |engine, case| {
            let err = |e: crate::drop1::Drop1Error| e.to_string();
            Ok(match case {
                AxiomCase::FixedPoint(k) => {
                    let w = k.to_word();
                    let lhs = engine.apply(&w).map_err(err)?;
                    equality_case(format!("fixed-point w={k}"), &lhs, &LinComb::from_word(w))
                }
                AxiomCase::TauInvariance(k) => {
                    let w = k.to_word();
                    let lhs = engine.apply(&w).map_err(err)?;
                    let rhs = engine.apply(&w.tau()).map_err(err)?;
                    equality_case(format!("tau-invariance w={k}"), &lhs, &rhs)
                }
                AxiomCase::Idempotence(k) => {
                    let image = engine.apply(&k.to_word()).map_err(err)?;
                    let twice = engine.apply_linear(&image).map_err(err)?;
                    equality_case(format!("idempotence w={k}"), &twice, &image)
                }
            })
        },
    )
}

fn twos(count: u32) -> impl Iterator<Item = u32> {
    std::iter::repeat_n(2, count as usize)
}

fn comp_of(parts: Vec<u32>) -> Composition {
    Composition::new(parts).expect("parts >= 1")
}

/// For each (a, b, c) in range, checks that the drop-1 image of the word of
/// ({2}^{a-1}, 3, {2}^{c-1}, 1, {2}^b) is the three-term combination
/// ({2}^{a+b+c}) + ({2}^{a-1},3,{2}^{b-1},3,{2}^{c-1}) + ({2}^{b-1},3,{2}^{a-1},3,{2}^{c-1}).
pub fn check_hs_families(a_max: u32, b_max: u32, c_max: u32, memo_cap: usize) -> CheckReport {
    let mut cases = Vec::new();
    for a in 1..=a_max {
        for b in 1..=b_max {
            for c in 1..=c_max {
                cases.push((a, b, c));
            }
        }
    }
    run_report(
        "families",
        vec![
            ("a_max", a_max.to_string()),
            ("b_max", b_max.to_string()),
            ("c_max", c_max.to_string()),
        ],
        cases,
        || Drop1::with_cap(memo_cap),
        |engine, &(a, b, c)| {
            let source: Vec<u32> = twos(a - 1)
                .chain([3])
                .chain(twos(c - 1))
                .chain([1])
                .chain(twos(b))
                .collect();
            let lhs = engine
                .apply(&comp_of(source).to_word())
                .map_err(|e| e.to_string())?;

            let three_term = |first: u32, second: u32| -> Word {
                let parts: Vec<u32> = twos(first - 1)
                    .chain([3])
                    .chain(twos(second - 1))
                    .chain([3])
                    .chain(twos(c - 1))
                    .collect();
                comp_of(parts).to_word()
            };
            let mut rhs = LinComb::from_word(comp_of(twos(a + b + c).collect()).to_word());
            rhs.add_term(three_term(a, b), &crate::algebra::rat(1));
            rhs.add_term(three_term(b, a), &crate::algebra::rat(1));
            Ok(equality_case(format!("a={a} b={b} c={c}"), &lhs, &rhs))
        },
    )
}

fn ensure_primes(primes: &[u64]) -> Result<(), NumericError> {
    for &p in primes {
        if !is_prime_u64(p) {
            return Err(NumericError::NotPrime(p));
        }
    }
    Ok(())
}

fn primes_param(primes: &[u64]) -> String {
    primes
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// For every admissible composition within the weight bound and every listed
/// prime, checks the chain-sum congruence
/// diamond_flat_p(k) = (-1)^l zeta_p(a_1+b_1, ..., a_s+b_s) mod p.
pub fn check_lemma41(weight_max: u32, primes: &[u64]) -> Result<CheckReport, NumericError> {
    ensure_primes(primes)?;
    let comps: Vec<Composition> = enumerate_admissible(weight_max)
        .into_iter()
        .filter(|k| !k.is_empty())
        .collect();
    let mut cases = Vec::new();
    for &p in primes {
        for k in &comps {
            cases.push((k.clone(), p));
        }
    }
    Ok(run_report(
        "lemma41",
        vec![
            ("weight_max", weight_max.to_string()),
            ("primes", primes_param(primes)),
        ],
        cases,
        || (),
        |_, (k, p)| {
            let chain = diamond_flat_p(k, *p).map_err(|e| e.to_string())?;
            let blocks = crate::words::ChainBlocks::from_composition(k).expect("k is admissible");
            let plain = zeta_p_mod(&blocks.merged(), *p).map_err(|e| e.to_string())?;
            let signed = if blocks.sign_exponent() % 2 == 1 {
                (*p - plain.residue) % *p
            } else {
                plain.residue
            };
            Ok(if chain.residue == signed {
                Outcome::Pass
            } else {
                Outcome::Fail(CaseRecord {
                    input: format!("k={k} p={p}"),
                    lhs: chain.residue.to_string(),
                    rhs: signed.to_string(),
                })
            })
        },
    ))
}

struct PairData {
    w1: Composition,
    w2: Composition,
    weight: u32,
    reversal: Composition,
    star_image: LinComb,
    shuffle_image: LinComb,
}

enum FmzvCase {
    Reversal(usize, u64),
    Shuffle(usize, u64),
    DoubleShuffle(usize, u64),
    AllTwos { c: u32, p: u64 },
    HoffmanInstance { c: u32, p: u64 },
}

/// Per-worker cache of zeta_p residues keyed by (prime, index list).
#[derive(Default)]
struct ZetaCache {
    map: HashMap<(u64, Vec<u32>), u64>,
}

impl ZetaCache {
    fn zeta(&mut self, k: &Composition, p: u64) -> u64 {
        if let Some(&hit) = self.map.get(&(p, k.parts().to_vec())) {
            return hit;
        }
        let value = zeta_p_mod(k, p).expect("prime validated").residue;
        self.map.insert((p, k.parts().to_vec()), value);
        value
    }

    /// Residue of an integral combination of composition words.
    fn eval(&mut self, image: &LinComb, p: u64) -> u64 {
        let mut acc = 0u64;
        for (w, coeff) in image.terms() {
            let k = w.to_composition().expect("image words lie in yH");
            let c = crate::numeric::residue_of_rational(coeff, p).expect("integral coefficient");
            acc = (acc + crate::numeric::mul_mod(c, self.zeta(&k, p), p)) % p;
        }
        acc
    }
}

/// The three finite-sum congruences for every ordered pair of {2,3}-indexed
/// words within the weight bound, over every listed prime:
///
/// 1. reversal:        (-1)^{wt(w2)} zeta_p(w1 . rev(w2)) = zeta_p(w1 * w2)
/// 2. shuffle:         (-1)^{wt(w2)} zeta_p(w1 . rev(w2)) = zeta_p(w1 sh w2)
/// 3. double shuffle:  zeta_p(w1 sh w2 - w1 * w2) = 0
///
/// plus the fixed instances zeta_p({2}^{c+2}) = 0 and
/// zeta_p(3, {2}^{c-1}, 3) + 2 zeta_p(3, 3, {2}^{c-1}) = 0 for c <= 3.
///
/// These hold in the quotient over all primes; a mismatch at p <= weight + 1
/// is reported as a flagged small-prime exception rather than a failure.
pub fn check_fmzv(max_total_weight: u32, primes: &[u64]) -> Result<CheckReport, NumericError> {
    ensure_primes(primes)?;
    let words = enumerate_h23(max_total_weight);
    let mut pairs = Vec::new();
    for w1 in &words {
        for w2 in &words {
            if w1.weight() + w2.weight() > max_total_weight {
                continue;
            }
            pairs.push(PairData {
                w1: w1.clone(),
                w2: w2.clone(),
                weight: w1.weight() + w2.weight(),
                reversal: w1.concat(&w2.reversed()),
                star_image: star(w1, w2).expect("enumerated inside H23"),
                shuffle_image: shuffle(&w1.to_word(), &w2.to_word()),
            });
        }
    }

    let mut cases = Vec::new();
    for &p in primes {
        for idx in 0..pairs.len() {
            cases.push(FmzvCase::Reversal(idx, p));
            cases.push(FmzvCase::Shuffle(idx, p));
            cases.push(FmzvCase::DoubleShuffle(idx, p));
        }
        for c in 1..=3 {
            cases.push(FmzvCase::AllTwos { c, p });
            cases.push(FmzvCase::HoffmanInstance { c, p });
        }
    }

    let pairs = &pairs;
    let report = run_report(
        "fmzv",
        vec![
            ("max_total_weight", max_total_weight.to_string()),
            ("primes", primes_param(primes)),
        ],
        cases,
        ZetaCache::default,
        move |cache, case| {
            let congruence = |weight: u32, p: u64, lhs: u64, rhs: u64, input: String| {
                if lhs == rhs {
                    Outcome::Pass
                } else {
                    let record = CaseRecord {
                        input,
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    };
                    if p <= (weight + 1) as u64 {
                        Outcome::Flagged(record)
                    } else {
                        Outcome::Fail(record)
                    }
                }
            };
            Ok(match *case {
                FmzvCase::Reversal(idx, p) => {
                    let pair = &pairs[idx];
                    let lhs = signed_residue(cache.zeta(&pair.reversal, p), pair.w2.weight(), p);
                    let rhs = cache.eval(&pair.star_image, p);
                    congruence(
                        pair.weight,
                        p,
                        lhs,
                        rhs,
                        format!("reversal w1={} w2={} p={p}", pair.w1, pair.w2),
                    )
                }
                FmzvCase::Shuffle(idx, p) => {
                    let pair = &pairs[idx];
                    let lhs = signed_residue(cache.zeta(&pair.reversal, p), pair.w2.weight(), p);
                    let rhs = cache.eval(&pair.shuffle_image, p);
                    congruence(
                        pair.weight,
                        p,
                        lhs,
                        rhs,
                        format!("shuffle w1={} w2={} p={p}", pair.w1, pair.w2),
                    )
                }
                FmzvCase::DoubleShuffle(idx, p) => {
                    let pair = &pairs[idx];
                    let sh = cache.eval(&pair.shuffle_image, p);
                    let st = cache.eval(&pair.star_image, p);
                    congruence(
                        pair.weight,
                        p,
                        (sh + p - st) % p,
                        0,
                        format!("double-shuffle w1={} w2={} p={p}", pair.w1, pair.w2),
                    )
                }
                FmzvCase::AllTwos { c, p } => {
                    let lhs = cache.zeta(&comp_of(twos(c + 2).collect()), p);
                    congruence(2 * c + 4, p, lhs, 0, format!("all-twos c={c} p={p}"))
                }
                FmzvCase::HoffmanInstance { c, p } => {
                    let head = comp_of([3].into_iter().chain(twos(c - 1)).chain([3]).collect());
                    let tail = comp_of([3, 3].into_iter().chain(twos(c - 1)).collect());
                    let lhs = (cache.zeta(&head, p) + 2 * cache.zeta(&tail, p)) % p;
                    congruence(2 * c + 4, p, lhs, 0, format!("hoffman c={c} p={p}"))
                }
            })
        },
    );
    Ok(report)
}

fn signed_residue(residue: u64, weight: u32, p: u64) -> u64 {
    if weight % 2 == 1 {
        (p - residue) % p
    } else {
        residue
    }
}

/// The exact truncated diamond identity: lhs(c, N) = rhs(c, N) for all
/// 1 <= c <= c_max and 2 <= N <= n_max.
pub fn check_hoffman_diamond(c_max: u32, n_max: u64) -> CheckReport {
    let mut cases = Vec::new();
    for c in 1..=c_max {
        for n in 2..=n_max {
            cases.push((c, n));
        }
    }
    run_report(
        "hoffman-diamond",
        vec![("c_max", c_max.to_string()), ("n_max", n_max.to_string())],
        cases,
        || (),
        |_, &(c, n)| {
            let (lhs, rhs) = hoffman_diamond_instance(c, n);
            Ok(if lhs == rhs {
                Outcome::Pass
            } else {
                Outcome::Fail(CaseRecord {
                    input: format!("c={c} N={n}"),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                })
            })
        },
    )
}

/// All compositions of exactly n with parts >= 1.
fn compositions_of(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << (n - 1)) {
        let mut parts = Vec::new();
        let mut current = 1u32;
        for gap in 0..n - 1 {
            if mask >> gap & 1 == 1 {
                parts.push(current);
                current = 1;
            } else {
                current += 1;
            }
        }
        parts.push(current);
        out.push(parts);
    }
    out
}

struct CancellationCase {
    bracket: BracketForm,
    delete: Vec<usize>,
    decrement: Vec<usize>,
}

/// The four-term cancellation behind the c = 1 step of the main identity: for
/// every bracket [a_1..a_r; b_1..b_s; 1] with r, s >= 1 and sum(a) + sum(b)
/// within the bound, and every A in EvenOddPairs(ones) and B inside the
/// large positions avoiding {2 l_r, 2 l_r + 1},
///
/// D(c - A - B) = D(c - A - B - {2 l_r}) x + D(c - A - B - {2 l_r + 1}) x
///              + D(c - A - B - {2 l_r, 2 l_r + 1}) z_2.
pub fn check_cancellation(max_block_weight: u32, memo_cap: usize) -> CheckReport {
    let mut cases = Vec::new();
    for wa in 1..max_block_weight {
        for wb in 1..=(max_block_weight - wa) {
            for a in compositions_of(wa) {
                for b in compositions_of(wb) {
                    let bracket = BracketForm::new(a.clone(), b.clone(), 1).expect("parts >= 1");
                    let pivot = 2 * a.iter().sum::<u32>() as usize;
                    let tuple = bracket.expand();
                    debug_assert_eq!(tuple.entries()[pivot - 1], 2);
                    debug_assert_eq!(tuple.entries()[pivot], 2);
                    let ones = tuple.ones_positions();
                    let free: Vec<usize> = tuple
                        .greater_positions()
                        .into_iter()
                        .filter(|&i| i != pivot && i != pivot + 1)
                        .collect();
                    for delete in enumerate_family(FamilyKind::EvenOddPairs, &ones) {
                        for mask in 0u64..(1 << free.len()) {
                            let decrement: Vec<usize> = free
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, &v)| v)
                                .collect();
                            cases.push(CancellationCase {
                                bracket: bracket.clone(),
                                delete: delete.clone(),
                                decrement,
                            });
                        }
                    }
                }
            }
        }
    }
    run_report(
        "cancellation",
        vec![("max_block_weight", max_block_weight.to_string())],
        cases,
        || Drop1::with_cap(memo_cap),
        |engine, case| {
            let tuple = case.bracket.expand();
            let pivot = 2 * case.bracket.a().iter().sum::<u32>() as usize;
            let image = |engine: &mut Drop1, extra: &[usize]| -> Result<LinComb, String> {
                let mut decrement = case.decrement.clone();
                decrement.extend_from_slice(extra);
                let spec = SurgerySpec {
                    delete: case.delete.clone(),
                    decrement,
                };
                let sub = tuple_surgery(&tuple, &spec).map_err(|e| e.to_string())?;
                engine.frak_d(&sub).map_err(|e| e.to_string())
            };
            let base = image(engine, &[])?;
            let mut rhs = image(engine, &[pivot])?
                .append_x_power(1)
                .expect("pivot surgery keeps the word nonempty");
            rhs.add_scaled(
                &image(engine, &[pivot + 1])?
                    .append_x_power(1)
                    .expect("pivot surgery keeps the word nonempty"),
                &crate::algebra::rat(1),
            );
            rhs.add_scaled(
                &image(engine, &[pivot, pivot + 1])?.append_z(2),
                &crate::algebra::rat(1),
            );
            let input = format!(
                "bracket={} A={:?} B={:?}",
                case.bracket, case.delete, case.decrement
            );
            Ok(equality_case(input, &base, &rhs))
        },
    )
}

/// Exhaustive scan of the two conjectures over all H0 words within the weight
/// bound: words sharing a drop-1 image must be a mirror pair {w, tau(w)}, and
/// a word whose image has only parts in {2,3} must factor as w1 tau(w2) with
/// both factors {2,3}-indexed. A failure here is a candidate counterexample,
/// i.e. a mathematical finding rather than an implementation bug; the report
/// carries that note in its params.
pub fn scan_conjectures(max_weight: u32, memo_cap: usize) -> CheckReport {
    let started = Instant::now();
    let words = enumerate_admissible(max_weight);
    let images: Vec<Result<LinComb, String>> = words
        .par_iter()
        .map_init(
            || Drop1::with_cap(memo_cap),
            |engine, k| engine.apply(&k.to_word()).map_err(|e| e.to_string()),
        )
        .collect();

    let params: BTreeMap<String, String> = [
        ("max_weight".to_string(), max_weight.to_string()),
        (
            "on_failure".to_string(),
            "failures are candidate counterexamples (mathematical findings), not bugs".to_string(),
        ),
    ]
    .into_iter()
    .collect();

    let mut pairs: Vec<(&Composition, &LinComb)> = Vec::with_capacity(words.len());
    for (k, image) in words.iter().zip(&images) {
        match image {
            Ok(image) => pairs.push((k, image)),
            Err(e) => {
                return CheckReport {
                    check: "conjectures".into(),
                    params,
                    cases_total: words.len() as u64,
                    failures: Vec::new(),
                    exceptions: Vec::new(),
                    error: Some(e.clone()),
                    elapsed_ms: started.elapsed().as_millis() as u64,
                    status: CheckStatus::Exception,
                }
            }
        }
    }

    let mut failures = Vec::new();

    // Fiber check: group words by serialized image.
    let mut fibers: BTreeMap<String, Vec<&Composition>> = BTreeMap::new();
    for &(k, image) in &pairs {
        fibers.entry(image.to_string()).or_default().push(k);
    }
    for (image, members) in &fibers {
        let w0 = members[0].to_word();
        let expected_mirror = w0.tau();
        let ok = match members.len() {
            1 => true,
            2 => members[1].to_word() == expected_mirror,
            _ => false,
        };
        if !ok {
            let listed = members
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(" ; ");
            failures.push(CaseRecord {
                input: format!("fiber image={image}"),
                lhs: listed,
                rhs: format!("{{{}, tau}}", members[0]),
            });
        }
    }

    // Image check: a {2,3}-only image forces a w1 tau(w2) factorization.
    for &(k, image) in &pairs {
        let in_h23 = image.words().all(|w| w.membership().in_h23);
        if !in_h23 {
            continue;
        }
        let w = k.to_word();
        let letters = w.letters();
        let factors = (0..=letters.len()).any(|cut| {
            let left = Word::from_letters(letters[..cut].iter().copied());
            let right = Word::from_letters(letters[cut..].iter().copied());
            left.membership().in_h23 && right.tau().membership().in_h23
        });
        if !factors {
            failures.push(CaseRecord {
                input: format!("factorization w={k}"),
                lhs: image.to_string(),
                rhs: "no w1 tau(w2) factorization with both factors in H23".into(),
            });
        }
    }

    failures.sort_by(|a, b| a.input.cmp(&b.input));
    let status = if failures.is_empty() {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CheckReport {
        check: "conjectures".into(),
        params,
        cases_total: (fibers.len() + pairs.len()) as u64,
        failures,
        exceptions: Vec::new(),
        error: None,
        elapsed_ms: started.elapsed().as_millis() as u64,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drop1::DEFAULT_MEMO_CAP;

    #[test]
    fn main_theorem_small_scan_passes() {
        let report = check_main_theorem(6, DEFAULT_MEMO_CAP);
        assert_eq!(report.status, CheckStatus::Pass);
        assert!(report.failures.is_empty());
        // Pairs of {2,3}-words with total weight <= 6, ordered.
        assert_eq!(report.cases_total, 21);
    }

    #[test]
    fn main_theorem_trivial_bound() {
        let report = check_main_theorem(0, DEFAULT_MEMO_CAP);
        assert_eq!(report.cases_total, 1);
        assert_eq!(report.status, CheckStatus::Pass);
    }

    #[test]
    fn axioms_small_scan_passes() {
        let report = check_drop1_axioms(7, DEFAULT_MEMO_CAP);
        assert_eq!(report.status, CheckStatus::Pass);
    }

    #[test]
    fn families_scan_passes() {
        let report = check_hs_families(3, 3, 3, DEFAULT_MEMO_CAP);
        assert_eq!(report.status, CheckStatus::Pass);
        assert_eq!(report.cases_total, 27);
    }

    #[test]
    fn lemma41_small_scan_passes() {
        let report = check_lemma41(5, &[5, 7, 11]).unwrap();
        assert_eq!(report.status, CheckStatus::Pass);
        assert!(check_lemma41(4, &[6]).is_err());
    }

    #[test]
    fn fmzv_small_scan_passes() {
        let report = check_fmzv(6, &[11, 13]).unwrap();
        assert_eq!(report.status, CheckStatus::Pass, "{}", report.render_text());
        assert!(report.failures.is_empty());
        // Weight-10 instances at p = 11 are allowed to land in exceptions only.
        for rec in &report.exceptions {
            assert!(rec.input.ends_with("p=11"), "unexpected exception {rec:?}");
        }
    }

    #[test]
    fn hoffman_diamond_small_scan_passes() {
        let report = check_hoffman_diamond(2, 12);
        assert_eq!(report.status, CheckStatus::Pass);
    }

    #[test]
    fn cancellation_small_scan_passes() {
        let report = check_cancellation(3, DEFAULT_MEMO_CAP);
        assert_eq!(report.status, CheckStatus::Pass, "{}", report.render_text());
        assert!(report.cases_total > 0);
    }

    #[test]
    fn conjecture_scan_small_passes() {
        let report = scan_conjectures(6, DEFAULT_MEMO_CAP);
        assert_eq!(report.status, CheckStatus::Pass, "{}", report.render_text());
        assert!(report.params.contains_key("on_failure"));
    }

    #[test]
    fn conjecture_scan_surfaces_cache_overflow() {
        let report = scan_conjectures(8, 2);
        assert_eq!(report.status, CheckStatus::Exception);
        assert!(report.error.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = check_main_theorem(5, DEFAULT_MEMO_CAP);
        let b = check_main_theorem(5, DEFAULT_MEMO_CAP);
        let scrub = |mut v: serde_json::Value| {
            v["elapsed_ms"] = 0.into();
            v
        };
        assert_eq!(
            scrub(serde_json::from_str(&a.to_json()).unwrap()),
            scrub(serde_json::from_str(&b.to_json()).unwrap())
        );
    }

    #[test]
    fn report_serialization_shape() {
        let report = check_hs_families(1, 1, 1, DEFAULT_MEMO_CAP);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "check",
            "params",
            "cases_total",
            "failures",
            "elapsed_ms",
            "status",
        ] {
            assert!(v.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(v["status"], "pass");
        let csv = report.failures_csv();
        assert!(csv.starts_with("kind,input,lhs,rhs"));
    }
}
