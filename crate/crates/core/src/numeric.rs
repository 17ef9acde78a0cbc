//! Numeric semantics: truncated zeta sums (floating and exact rational),
//! mod-p finite sums, the diamond-flat chain sum, and the exact N-truncated
//! diamond identity.
//!
//! All evaluators share one chain-DP shape: variables v_1 .. v_L range over
//! [1, N), each step multiplies by a per-variable factor, and consecutive
//! variables are tied by a weak (<=) or strict (<) bond. Processing values in
//! ascending order with one snapshot per value gives O(L N) arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::LinComb;
use crate::words::{ChainBlocks, Composition, WordError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("truncation bound must be >= 1")]
    NonPositiveN,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("coefficient denominator vanishes mod {p}")]
    DenominatorVanishes { p: u64 },
}

/// An exact partial sum over chains below N, with a heuristic tail bound.
///
/// `tail_estimate` is r (1 + ln N)^{r-1} / ((k_r - 1) N^{k_r - 1}) for
/// admissible indices; it tracks the true Theta(log^{r-1} N / N^{k_r-1}) tail
/// but is not a proven bound, so downstream tolerances keep a 5x margin. For
/// a last part of 1 the sum diverges and the estimate is infinite.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct TruncatedValue {
    pub value: f64,
    pub tail_estimate: f64,
    pub truncation: u64,
}

/// A residue in [0, p) for a prime modulus p.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ResidueValue {
    pub residue: u64,
    pub modulus: u64,
}

impl fmt::Display for ResidueValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Fermat inverse; the modulus must be prime and n nonzero mod p.
fn inv_mod(n: u64, p: u64) -> u64 {
    debug_assert!(!n.is_multiple_of(p));
    pow_mod(n, p - 2, p)
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in the inclusive range lo..=hi, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime_u64(n)).collect()
}

fn ensure_prime(p: u64) -> Result<(), NumericError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(NumericError::NotPrime(p))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Bond {
    Weak,
    Strict,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Factor {
    /// v^{-k}
    InversePower(u32),
    /// (N - v)^{-1}, with N the evaluation bound
    InverseComplement,
}

#[derive(Clone, Copy, Debug)]
struct ChainStep {
    factor: Factor,
    bond: Bond,
}

fn strict_power_chain(k: &Composition) -> Vec<ChainStep> {
    k.parts()
        .iter()
        .map(|&part| ChainStep {
            factor: Factor::InversePower(part),
            bond: Bond::Strict,
        })
        .collect()
}

/// Steps of the diamond-flat chain: per block, a descending-factor variables
/// then b plain ones, weakly increasing inside a block and strictly between
/// blocks.
fn diamond_chain(blocks: &ChainBlocks) -> Vec<ChainStep> {
    let mut steps = Vec::with_capacity(blocks.chain_length() as usize);
    for (bi, &(a, b)) in blocks.blocks().iter().enumerate() {
        for ai in 0..a {
            let bond = if bi > 0 && ai == 0 {
                Bond::Strict
            } else {
                Bond::Weak
            };
            steps.push(ChainStep {
                factor: Factor::InverseComplement,
                bond,
            });
        }
        for _ in 0..b {
            steps.push(ChainStep {
                factor: Factor::InversePower(1),
                bond: Bond::Weak,
            });
        }
    }
    steps
}

fn chain_sum_exact(bound: u64, steps: &[ChainStep]) -> BigRational {
    let len = steps.len();
    let mut cells = vec![BigRational::zero(); len + 1];
    cells[0] = BigRational::one();
    for m in 1..bound {
        let snapshot = cells.clone();
        for (j, step) in steps.iter().enumerate() {
            let base = match step.bond {
                Bond::Strict => &snapshot[j],
                Bond::Weak => &cells[j],
            };
            if base.is_zero() {
                continue;
            }
            let denom = match step.factor {
                Factor::InversePower(k) => BigInt::from(m).pow(k),
                Factor::InverseComplement => BigInt::from(bound - m),
            };
            let add = base * BigRational::new(BigInt::one(), denom);
            cells[j + 1] += add;
        }
    }
    cells[len].clone()
}

fn chain_sum_mod(p: u64, steps: &[ChainStep]) -> u64 {
    let len = steps.len();
    let mut cells = vec![0u64; len + 1];
    cells[0] = 1;
    for m in 1..p {
        let snapshot = cells.clone();
        for (j, step) in steps.iter().enumerate() {
            let base = match step.bond {
                Bond::Strict => snapshot[j],
                Bond::Weak => cells[j],
            };
            if base == 0 {
                continue;
            }
            let factor = match step.factor {
                Factor::InversePower(k) => pow_mod(inv_mod(m, p), k as u64, p),
                Factor::InverseComplement => inv_mod(p - m, p),
            };
            cells[j + 1] = (cells[j + 1] + mul_mod(base, factor, p)) % p;
        }
    }
    cells[len]
}

/// Exact floating partial sum over 0 < n_1 < ... < n_r < N, with compensated
/// accumulation in ascending n. Nondecreasing in N.
pub fn zeta_trunc_float(k: &Composition, n: u64) -> Result<TruncatedValue, NumericError> {
    if n == 0 {
        return Err(NumericError::NonPositiveN);
    }
    let parts = k.parts();
    let r = parts.len();
    if r == 0 {
        return Ok(TruncatedValue {
            value: 1.0,
            tail_estimate: 0.0,
            truncation: n,
        });
    }
    let mut cells = vec![Kahan::default(); r];
    for m in 1..n {
        let mf = m as f64;
        for j in (0..r).rev() {
            let prev = if j == 0 { 1.0 } else { cells[j - 1].value() };
            if prev != 0.0 {
                cells[j].add(prev / mf.powi(parts[j] as i32));
            }
        }
    }
    Ok(TruncatedValue {
        value: cells[r - 1].value(),
        tail_estimate: tail_estimate(k, n),
        truncation: n,
    })
}

/// Heuristic tail bound for the truncated sum; see [`TruncatedValue`].
pub fn tail_estimate(k: &Composition, n: u64) -> f64 {
    let r = k.depth();
    if r == 0 {
        return 0.0;
    }
    let last = *k.parts().last().unwrap();
    if last < 2 {
        return f64::INFINITY;
    }
    let nf = n as f64;
    r as f64 * (1.0 + nf.ln()).powi(r as i32 - 1) / ((last - 1) as f64 * nf.powi(last as i32 - 1))
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum
    }
}

/// Exact rational partial sum over 0 < n_1 < ... < n_r < N. Intended for
/// small N (denominators grow like lcm(1..N)^max-part).
pub fn zeta_trunc_exact(k: &Composition, n: u64) -> Result<BigRational, NumericError> {
    if n == 0 {
        return Err(NumericError::NonPositiveN);
    }
    Ok(chain_sum_exact(n, &strict_power_chain(k)))
}

/// The finite sum over 0 < n_1 < ... < n_r < p in the p-element field.
pub fn zeta_p_mod(k: &Composition, p: u64) -> Result<ResidueValue, NumericError> {
    ensure_prime(p)?;
    Ok(ResidueValue {
        residue: chain_sum_mod(p, &strict_power_chain(k)),
        modulus: p,
    })
}

/// The diamond-flat chain sum mod p for an admissible composition: blocks of
/// weakly increasing variables with (p - v)^{-1} factors on the leading a_i
/// positions and v^{-1} on the b_i positions, strict bonds between blocks.
pub fn diamond_flat_p(k: &Composition, p: u64) -> Result<ResidueValue, NumericError> {
    ensure_prime(p)?;
    let blocks = ChainBlocks::from_composition(k)?;
    Ok(ResidueValue {
        residue: chain_sum_mod(p, &diamond_chain(&blocks)),
        modulus: p,
    })
}

/// Both sides of the exact N-truncated diamond identity for the family
/// indexed by c >= 1:
///
/// * lhs = (strict chain for (3, {2}^{c-1}, 1, 2) below N) plus the same
///   chain with the last bond weak and the factor (N - n_{c+1})^{-1} in place
///   of n_{c+1}^{-1};
/// * rhs = (strict chain for ({2}^{c+2})) + 2 (strict chain for (3, 3, {2}^{c-1})).
///
/// The two sides agree exactly for every N >= 1.
pub fn hoffman_diamond_instance(c: u32, n: u64) -> (BigRational, BigRational) {
    assert!(c >= 1, "the diamond family is indexed by c >= 1");
    assert!(n >= 1);
    let twos = |count: u32| std::iter::repeat_n(2u32, count as usize);

    let strict_parts: Vec<u32> = [3].into_iter().chain(twos(c - 1)).chain([1, 2]).collect();
    let lhs_strict = chain_sum_exact(
        n,
        &strict_power_chain(&Composition::new(strict_parts).unwrap()),
    );

    let mut weak_steps = vec![ChainStep {
        factor: Factor::InversePower(3),
        bond: Bond::Strict,
    }];
    weak_steps.extend((0..c - 1).map(|_| ChainStep {
        factor: Factor::InversePower(2),
        bond: Bond::Strict,
    }));
    weak_steps.push(ChainStep {
        factor: Factor::InverseComplement,
        bond: Bond::Strict,
    });
    weak_steps.push(ChainStep {
        factor: Factor::InversePower(2),
        bond: Bond::Weak,
    });
    let lhs_weak = chain_sum_exact(n, &weak_steps);

    let all_twos = Composition::new(twos(c + 2).collect()).unwrap();
    let with_threes: Vec<u32> = [3, 3].into_iter().chain(twos(c - 1)).collect();
    let rhs = chain_sum_exact(n, &strict_power_chain(&all_twos))
        + BigRational::from_integer(2.into())
            * chain_sum_exact(
                n,
                &strict_power_chain(&Composition::new(with_threes).unwrap()),
            );

    (lhs_strict + lhs_weak, rhs)
}

/// Which numeric semantics to evaluate a combination under.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EvalBackend {
    Float { truncation: u64 },
    Exact { truncation: u64 },
    ModP { modulus: u64 },
}

#[derive(Clone, PartialEq, Debug)]
pub enum Evaluation {
    Float(f64),
    Exact(BigRational),
    Residue(ResidueValue),
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Float(x) => write!(f, "{x}"),
            Evaluation::Exact(q) => write!(f, "{q}"),
            Evaluation::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// Residue of an exact rational mod a prime: numerator times the Fermat
/// inverse of the denominator.
pub fn residue_of_rational(q: &BigRational, p: u64) -> Result<u64, NumericError> {
    let pb = BigInt::from(p);
    let to_residue = |x: &BigInt| -> u64 {
        let mut r = x % &pb;
        if r.is_negative() {
            r += &pb;
        }
        r.to_u64().expect("residue fits in u64")
    };
    let den = to_residue(q.denom());
    if den == 0 {
        return Err(NumericError::DenominatorVanishes { p });
    }
    Ok(mul_mod(to_residue(q.numer()), inv_mod(den, p), p))
}

/// Coefficient-weighted evaluation of a combination whose words all lie in
/// Z + yH (so each has a composition view).
pub fn eval_lincomb(p: &LinComb, backend: &EvalBackend) -> Result<Evaluation, NumericError> {
    match *backend {
        EvalBackend::Float { truncation } => {
            if truncation == 0 {
                return Err(NumericError::NonPositiveN);
            }
            let mut acc = Kahan::default();
            for (w, coeff) in p.terms() {
                let k = w.to_composition()?;
                let v = zeta_trunc_float(&k, truncation)?;
                acc.add(coeff.to_f64().expect("coefficient fits in f64") * v.value);
            }
            Ok(Evaluation::Float(acc.value()))
        }
        EvalBackend::Exact { truncation } => {
            if truncation == 0 {
                return Err(NumericError::NonPositiveN);
            }
            let mut acc = BigRational::zero();
            for (w, coeff) in p.terms() {
                let k = w.to_composition()?;
                acc += coeff * zeta_trunc_exact(&k, truncation)?;
            }
            Ok(Evaluation::Exact(acc))
        }
        EvalBackend::ModP { modulus } => {
            ensure_prime(modulus)?;
            let mut acc = 0u64;
            for (w, coeff) in p.terms() {
                let k = w.to_composition()?;
                let v = zeta_p_mod(&k, modulus)?.residue;
                acc = (acc + mul_mod(residue_of_rational(coeff, modulus)?, v, modulus)) % modulus;
            }
            Ok(Evaluation::Residue(ResidueValue {
                residue: acc,
                modulus,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, LinComb};

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn exact_small_sums() {
        assert_eq!(zeta_trunc_exact(&comp(&[2]), 4).unwrap(), q(49, 36));
        assert_eq!(zeta_trunc_exact(&comp(&[1, 2]), 4).unwrap(), q(5, 12));
        assert_eq!(
            zeta_trunc_exact(&Composition::empty(), 17).unwrap(),
            q(1, 1)
        );
        assert_eq!(zeta_trunc_exact(&comp(&[2]), 1).unwrap(), q(0, 1));
        assert_eq!(
            zeta_trunc_exact(&comp(&[2]), 0),
            Err(NumericError::NonPositiveN)
        );
    }

    #[test]
    fn float_matches_closed_forms() {
        let v = zeta_trunc_float(&comp(&[2]), 1_000_000).unwrap();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(
            (v.value - zeta2).abs() < 1.1e-6,
            "value {} vs {}",
            v.value,
            zeta2
        );
        assert!(v.value < zeta2);
        // The tail estimate is a heuristic, not a bound: require the right scale.
        let true_tail = zeta2 - v.value;
        assert!(v.tail_estimate > 0.5 * true_tail && v.tail_estimate < 5.0 * true_tail);

        let v = zeta_trunc_float(&comp(&[2, 2]), 1_000_000).unwrap();
        let zeta22 = std::f64::consts::PI.powi(4) / 120.0;
        assert!((v.value - zeta22).abs() < 2e-5);

        assert_eq!(zeta_trunc_float(&comp(&[2]), 1).unwrap().value, 0.0);
    }

    #[test]
    fn float_is_monotone_in_truncation() {
        let mut prev = 0.0;
        for n in 1..40 {
            let v = zeta_trunc_float(&comp(&[1, 2]), n).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn mod_p_hand_values() {
        assert_eq!(zeta_p_mod(&comp(&[2]), 5).unwrap().residue, 0);
        assert_eq!(zeta_p_mod(&Composition::empty(), 7).unwrap().residue, 1);
        // The weight-6 all-2s sum vanishes for p = 11 > 7.
        assert_eq!(zeta_p_mod(&comp(&[2, 2, 2]), 11).unwrap().residue, 0);
        assert_eq!(zeta_p_mod(&comp(&[2]), 6), Err(NumericError::NotPrime(6)));
    }

    #[test]
    fn diamond_flat_hand_values() {
        // Single block (a, b) = (1, 1): sum of 1/((5-n) m) over n <= m < 5 is 0 mod 5.
        let d = diamond_flat_p(&comp(&[2]), 5).unwrap();
        assert_eq!(d.residue, 0);
        assert_eq!(d.residue, zeta_p_mod(&comp(&[2]), 5).unwrap().residue);

        // (1,2): l = 1, so the chain sum is minus zeta_7(3).
        let d = diamond_flat_p(&comp(&[1, 2]), 7).unwrap().residue;
        let z = zeta_p_mod(&comp(&[3]), 7).unwrap().residue;
        assert_eq!(d, (7 - z) % 7);

        // (2,2): two blocks, l = 0.
        let d = diamond_flat_p(&comp(&[2, 2]), 11).unwrap().residue;
        let z = zeta_p_mod(&comp(&[2, 2]), 11).unwrap().residue;
        assert_eq!(d, z);

        assert!(matches!(
            diamond_flat_p(&comp(&[2, 1]), 5),
            Err(NumericError::Word(_))
        ));
        assert_eq!(
            diamond_flat_p(&comp(&[2]), 9),
            Err(NumericError::NotPrime(9))
        );
    }

    #[test]
    fn hoffman_diamond_hand_case() {
        let (lhs, rhs) = hoffman_diamond_instance(1, 3);
        assert_eq!(lhs, q(1, 4));
        assert_eq!(rhs, q(1, 4));
        let (lhs, rhs) = hoffman_diamond_instance(1, 2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_lincomb_linearity() {
        let mut p = LinComb::from_term(comp(&[3, 3]).to_word(), rat(2));
        p.add_term(comp(&[2, 2, 2]).to_word(), &rat(1));
        let got = eval_lincomb(&p, &EvalBackend::ModP { modulus: 11 }).unwrap();
        let z33 = zeta_p_mod(&comp(&[3, 3]), 11).unwrap().residue;
        let z222 = zeta_p_mod(&comp(&[2, 2, 2]), 11).unwrap().residue;
        assert_eq!(
            got,
            Evaluation::Residue(ResidueValue {
                residue: (2 * z33 + z222) % 11,
                modulus: 11
            })
        );

        let zero = eval_lincomb(&LinComb::zero(), &EvalBackend::Exact { truncation: 5 }).unwrap();
        assert_eq!(zero, Evaluation::Exact(BigRational::zero()));

        let v = eval_lincomb(
            &LinComb::from_word(comp(&[2]).to_word()),
            &EvalBackend::Float {
                truncation: 100_000,
            },
        )
        .unwrap();
        if let Evaluation::Float(x) = v {
            assert!((x - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-5);
        } else {
            panic!("expected float");
        }
    }

    #[test]
    fn eval_rejects_non_composition_words() {
        let p = LinComb::from_word(crate::words::Word::from_letters([
            crate::words::Letter::X,
            crate::words::Letter::Y,
        ]));
        assert!(matches!(
            eval_lincomb(&p, &EvalBackend::Exact { truncation: 5 }),
            Err(NumericError::Word(WordError::NotInYH))
        ));
    }

    #[test]
    fn primality_checks() {
        let primes: Vec<u64> = primes_in_range(2, 50);
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime_u64(2_147_483_649));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime_u64(1));
    }
}
