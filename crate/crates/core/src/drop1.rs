//! The drop-1 operator: pair-set families, tuple surgery, and the memoized
//! recursion on exponent tuples, with the word-level wrapper.
//!
//! Everything here works on 1-based positions into an exponent tuple
//! (c_1, ..., c_{2t}), matching the usual statement of the recursion. An
//! "eo-pair" is {i, i+1} with i even, an "oe-pair" is {i, i+1} with i odd.

use std::collections::HashMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::LinComb;
use crate::words::{ExponentTuple, Word};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Drop1Error {
    #[error("memo cache exceeded its cap of {cap} entries")]
    CacheOverflow { cap: usize },
    #[error("drop-1 is defined on H0 only; {word} is outside")]
    OutsideH0 { word: String },
    #[error("invalid surgery: {reason}")]
    InvalidSurgery { reason: String },
}

/// The four pair-set families over a ground set S of positions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyKind {
    /// Disjoint unions of eo-pairs {i, i+1} contained in S, i even.
    EvenOddPairs,
    /// Disjoint unions of oe-pairs {i, i+1} contained in S, i odd.
    OddEvenPairs,
    /// Subsets of S containing no eo-pair.
    NoEvenOddPair,
    /// Subsets of S containing no oe-pair.
    NoOddEvenPair,
}

/// Enumerate the members of the named family, each exactly once, as sorted
/// index vectors. Pair families are generated by pair-subset bitmask
/// ascending; the crossed families by a subset walk that skips any subset
/// containing a forbidden adjacency.
pub fn enumerate_family(kind: FamilyKind, ground: &[usize]) -> Vec<Vec<usize>> {
    debug_assert!(
        ground.windows(2).all(|w| w[0] < w[1]),
        "ground set must be sorted"
    );
    match kind {
        FamilyKind::EvenOddPairs => pair_unions(ground, 0),
        FamilyKind::OddEvenPairs => pair_unions(ground, 1),
        FamilyKind::NoEvenOddPair => adjacency_free_subsets(ground, 0),
        FamilyKind::NoOddEvenPair => adjacency_free_subsets(ground, 1),
    }
}

/// Unions of available pairs {i, i+1} with i ≡ parity (mod 2). Distinct such
/// pairs are automatically disjoint.
fn pair_unions(ground: &[usize], parity: usize) -> Vec<Vec<usize>> {
    let pairs: Vec<usize> = ground
        .iter()
        .copied()
        .filter(|&i| i % 2 == parity && ground.binary_search(&(i + 1)).is_ok())
        .collect();
    assert!(pairs.len() < usize::BITS as usize, "ground set too large");
    let mut out = Vec::with_capacity(1 << pairs.len());
    for mask in 0usize..(1 << pairs.len()) {
        let mut member = Vec::new();
        for (idx, &i) in pairs.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                member.push(i);
                member.push(i + 1);
            }
        }
        member.sort_unstable();
        out.push(member);
    }
    out
}

/// Subsets of the ground set containing no pair {i, i+1} with i ≡ parity,
/// walked in bitmask-ascending order.
fn adjacency_free_subsets(ground: &[usize], parity: usize) -> Vec<Vec<usize>> {
    assert!(
        ground.len() < 26,
        "ground set too large for subset enumeration"
    );
    let mut forbidden: Vec<usize> = Vec::new();
    for (idx, &i) in ground.iter().enumerate() {
        if i % 2 == parity && ground.get(idx + 1) == Some(&(i + 1)) {
            forbidden.push(1 << idx | 1 << (idx + 1));
        }
    }
    let mut out = Vec::new();
    'masks: for mask in 0usize..(1 << ground.len()) {
        for &f in &forbidden {
            if mask & f == f {
                continue 'masks;
            }
        }
        let member: Vec<usize> = ground
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask >> idx & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        out.push(member);
    }
    out
}

/// A tuple surgery: delete the positions in `delete`, then subtract one at the
/// surviving positions in `decrement`. Positions are 1-based indices into the
/// original tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurgerySpec {
    pub delete: Vec<usize>,
    pub decrement: Vec<usize>,
}

/// Validated surgery. `delete` must hit only entries equal to 1 and have even
/// cardinality (so the result is again a tuple); `decrement` must hit only
/// entries greater than 1. The two sets are disjoint by construction.
pub fn tuple_surgery(c: &ExponentTuple, spec: &SurgerySpec) -> Result<ExponentTuple, Drop1Error> {
    let n = c.len();
    let invalid = |reason: String| Err(Drop1Error::InvalidSurgery { reason });
    for set in [&spec.delete, &spec.decrement] {
        let mut seen = vec![false; n + 1];
        for &i in set.iter() {
            if i == 0 || i > n {
                return invalid(format!("index {i} out of range 1..={n}"));
            }
            if seen[i] {
                return invalid(format!("index {i} repeated"));
            }
            seen[i] = true;
        }
    }
    for &i in &spec.delete {
        if c.entries()[i - 1] != 1 {
            return invalid(format!(
                "delete index {i} hits entry {} (must be 1)",
                c.entries()[i - 1]
            ));
        }
    }
    for &i in &spec.decrement {
        if c.entries()[i - 1] < 2 {
            return invalid(format!("decrement index {i} hits entry 1"));
        }
    }
    if !spec.delete.len().is_multiple_of(2) {
        return invalid(format!(
            "deleting {} positions leaves an odd-length tuple",
            spec.delete.len()
        ));
    }
    Ok(apply_surgery(c, &spec.delete, &spec.decrement))
}

fn apply_surgery(c: &ExponentTuple, delete: &[usize], decrement: &[usize]) -> ExponentTuple {
    let mut entries = Vec::with_capacity(c.len() - delete.len());
    for (idx, &entry) in c.entries().iter().enumerate() {
        let pos = idx + 1;
        if delete.contains(&pos) {
            continue;
        }
        let dec = decrement.contains(&pos) as u32;
        entries.push(entry - dec);
    }
    ExponentTuple::from_entries_unchecked(entries)
}

pub const DEFAULT_MEMO_CAP: usize = 1 << 20;

/// Engine for the drop-1 recursion, carrying a write-once memo keyed by the
/// exact exponent tuple. Results are identical for any cap large enough to
/// complete; on overflow the run errors instead of evicting.
pub struct Drop1 {
    memo: HashMap<ExponentTuple, LinComb>,
    cap: usize,
}

impl Default for Drop1 {
    fn default() -> Self {
        Self::new()
    }
}

impl Drop1 {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_MEMO_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        Drop1 {
            memo: HashMap::new(),
            cap,
        }
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    /// The tuple-level recursion. For a nonempty tuple c of length 2t, with
    /// ones = positions of 1-entries and bigs = positions of larger entries:
    ///
    /// * sum 1: A in EvenOddPairs(ones), B in NoEvenOddPair(bigs), #A+#B >= 1,
    ///   contributes (-1)^{#B-1} D(surgery) x^{#A+#B};
    /// * sum 2: same (A, B) range with #A+#B >= 2, contributes
    ///   (-1)^{#B-1} D(surgery) z_{#A+#B};
    /// * sum 3: A in OddEvenPairs(ones), B in NoOddEvenPair(bigs), #A+#B >= 2,
    ///   contributes (-1)^{#B} D(surgery) z_{#A+#B};
    ///
    /// and D(empty) = 1. Every recursive call strictly lowers the entry sum,
    /// and every term of the result has weight equal to the entry sum.
    pub fn frak_d(&mut self, c: &ExponentTuple) -> Result<LinComb, Drop1Error> {
        if let Some(hit) = self.memo.get(c) {
            return Ok(hit.clone());
        }
        if c.is_empty() {
            return Ok(LinComb::unit());
        }
        let ones = c.ones_positions();
        let bigs = c.greater_positions();

        let mut acc = LinComb::zero();

        // Sums 1 and 2 share their (A, B) range and their surgered tuple.
        let dels = enumerate_family(FamilyKind::EvenOddPairs, &ones);
        let decs = enumerate_family(FamilyKind::NoEvenOddPair, &bigs);
        for a in &dels {
            for b in &decs {
                let m = (a.len() + b.len()) as u32;
                if m == 0 {
                    continue;
                }
                // No eo-pair contains position 1, so position 1 survives and
                // the surgered tuple is nonempty; its image has no unit term.
                debug_assert!(a.first() != Some(&1));
                let sub = apply_surgery(c, a, b);
                let image = self.frak_d(&sub)?;
                let sign = sign_rational(b.len() + 1);
                let with_x = image
                    .append_x_power(m)
                    .expect("surgery in sums 1-2 keeps position 1, so no unit term");
                acc.add_scaled(&with_x, &sign);
                if m >= 2 {
                    acc.add_scaled(&image.append_z(m), &sign);
                }
            }
        }

        // Sum 3.
        let dels = enumerate_family(FamilyKind::OddEvenPairs, &ones);
        let decs = enumerate_family(FamilyKind::NoOddEvenPair, &bigs);
        for a in &dels {
            for b in &decs {
                let m = (a.len() + b.len()) as u32;
                if m < 2 {
                    continue;
                }
                let sub = apply_surgery(c, a, b);
                let image = self.frak_d(&sub)?;
                acc.add_scaled(&image.append_z(m), &sign_rational(b.len()));
            }
        }

        if self.memo.len() >= self.cap {
            return Err(Drop1Error::CacheOverflow { cap: self.cap });
        }
        self.memo.insert(c.clone(), acc.clone());
        Ok(acc)
    }

    /// Word-level operator: convert to the exponent tuple and recurse.
    /// Defined on H0; the unit maps to itself.
    pub fn apply(&mut self, w: &Word) -> Result<LinComb, Drop1Error> {
        let tuple = w.to_exponent_tuple().map_err(|_| Drop1Error::OutsideH0 {
            word: w.to_string(),
        })?;
        self.frak_d(&tuple)
    }

    /// Linear extension, term-wise over a combination of H0 words.
    pub fn apply_linear(&mut self, p: &LinComb) -> Result<LinComb, Drop1Error> {
        let mut out = LinComb::zero();
        for (w, coeff) in p.terms() {
            let image = self.apply(w)?;
            out.add_scaled(&image, coeff);
        }
        Ok(out)
    }
}

fn sign_rational(exponent: usize) -> BigRational {
    if exponent.is_multiple_of(2) {
        BigRational::from_integer(1.into())
    } else {
        BigRational::from_integer((-1).into())
    }
}

/// One-shot wrapper around [`Drop1::apply`] with a fresh engine.
pub fn drop1(w: &Word) -> Result<LinComb, Drop1Error> {
    Drop1::new().apply(w)
}
