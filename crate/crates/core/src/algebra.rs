//! Exact linear combinations of words, the shuffle product, and the star
//! product on words with parts in {2, 3}.
//!
//! Coefficients are arbitrary-precision rationals throughout; an integrality
//! predicate distinguishes the Z-valued combinations. No zero coefficient is
//! ever stored, so equality is term-by-term map equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::{Composition, Letter, Word, WordError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("cannot append x^m (m >= 1) to a combination containing the unit word")]
    AppendToUnit,
    #[error("star product arguments must have all parts in {{2,3}}")]
    OutsideH23,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A sparse, canonical linear combination of words with rational coefficients.
///
/// Terms iterate in the graded-lexicographic word order, which fixes the
/// serialized form: terms like "2·3,3 + 1·2,2,2" print compositions when every
/// word lies in Z + yH (the unit word prints as "()"), and raw letters
/// otherwise (the unit prints as "1").
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinComb {
    terms: BTreeMap<Word, BigRational>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    /// The unit 1 of the algebra, i.e. the empty word with coefficient one.
    pub fn unit() -> Self {
        LinComb::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigRational::one());
        LinComb { terms }
    }

    pub fn from_term(w: Word, coeff: BigRational) -> Self {
        let mut p = LinComb::zero();
        p.add_term(w, &coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, w: Word, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// self += scale * other.
    pub fn add_scaled(&mut self, other: &LinComb, scale: &BigRational) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), &(c * scale));
        }
    }

    pub fn scale(&self, r: &BigRational) -> LinComb {
        let mut out = LinComb::zero();
        out.add_scaled(self, r);
        out
    }

    /// Bilinear concatenation product; associative with unit [`LinComb::unit`].
    pub fn concat(&self, other: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_term(u.concat(v), &(cu * cv));
            }
        }
        out
    }

    pub fn concat_word(&self, w: &Word) -> LinComb {
        let mut out = LinComb::zero();
        for (u, c) in &self.terms {
            out.add_term(u.concat(w), c);
        }
        out
    }

    fn map_words_infallible(&self, f: impl Fn(&Word) -> Word) -> LinComb {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c);
        }
        out
    }

    /// Apply a word map term-wise, keeping coefficients. Errors from the map
    /// propagate (e.g. reversal of a word with no composition form).
    pub fn map_words(
        &self,
        f: impl Fn(&Word) -> Result<Word, WordError>,
    ) -> Result<LinComb, WordError> {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w)?, c);
        }
        Ok(out)
    }

    /// Right-multiply every word by x^m. With m = 0 this is the identity; for
    /// m >= 1 it increments the last composition part of each word, so the
    /// unit word is rejected.
    pub fn append_x_power(&self, m: u32) -> Result<LinComb, AlgebraError> {
        if m == 0 {
            return Ok(self.clone());
        }
        if self.terms.contains_key(&Word::empty()) {
            return Err(AlgebraError::AppendToUnit);
        }
        Ok(self.map_words_infallible(|w| w.append_x(m)))
    }

    /// Right-multiply every word by z_k; k >= 2 keeps H^{>=2} stable.
    pub fn append_z(&self, k: u32) -> LinComb {
        assert!(k >= 2, "append_z takes k >= 2");
        self.map_words_infallible(|w| w.append_z(k))
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl Add<&LinComb> for &LinComb {
    type Output = LinComb;

    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigRational::one());
        out
    }
}

impl Sub<&LinComb> for &LinComb {
    type Output = LinComb;

    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRational::one());
        out
    }
}

impl Neg for &LinComb {
    type Output = LinComb;

    fn neg(self) -> LinComb {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let composition_mode = self
            .terms
            .keys()
            .all(|w| w.letters().first().is_none_or(|&l| l == Letter::Y));
        let mut first = true;
        for (w, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if mag.is_integer() {
                write!(f, "{}", mag.numer())?;
            } else {
                write!(f, "{}/{}", mag.numer(), mag.denom())?;
            }
            write!(f, "\u{b7}")?;
            if composition_mode {
                write!(f, "{}", w.to_composition().expect("composition mode"))?;
            } else {
                write!(f, "{w}")?;
            }
        }
        Ok(())
    }
}

/// Shuffle product of two words, by the table recursion
/// S(i, j) = S(i-1, j)·u_i + S(i, j-1)·v_j with S(0, 0) = 1.
pub fn shuffle(u: &Word, v: &Word) -> LinComb {
    let ul = u.letters();
    let vl = v.letters();
    let mut table: Vec<Vec<LinComb>> = vec![vec![LinComb::zero(); vl.len() + 1]; ul.len() + 1];
    for i in 0..=ul.len() {
        for j in 0..=vl.len() {
            if i == 0 && j == 0 {
                table[0][0] = LinComb::unit();
                continue;
            }
            let mut acc = LinComb::zero();
            if i > 0 {
                let prev = table[i - 1][j].map_words_infallible(|w| {
                    Word::from_letters(w.letters().iter().copied().chain([ul[i - 1]]))
                });
                acc.add_scaled(&prev, &BigRational::one());
            }
            if j > 0 {
                let prev = table[i][j - 1].map_words_infallible(|w| {
                    Word::from_letters(w.letters().iter().copied().chain([vl[j - 1]]))
                });
                acc.add_scaled(&prev, &BigRational::one());
            }
            table[i][j] = acc;
        }
    }
    table[ul.len()][vl.len()].clone()
}

/// Bilinear extension of the shuffle product.
pub fn shuffle_linear(p: &LinComb, q: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (u, cu) in p.terms() {
        for (v, cv) in q.terms() {
            out.add_scaled(&shuffle(u, v), &(cu * cv));
        }
    }
    out
}

/// The star product on {2,3}-indexed words, defined by structural recursion on
/// trailing parts:
///
/// * 1 is a two-sided unit,
/// * a trailing 2 on either side factors out: w z2 * w' = w * w' z2 = (w * w') z2,
/// * trailing 3s combine: w z3 * w' z3 = (w * w' z3) z3 + (w z3 * w') z3 + (w * w') z2^3.
///
/// The two rules overlap when both sides end in 2; the left branch is taken
/// first, which is consistent because both orders give (w * w') z2 z2.
/// Memoized on the pair of index lists. The result is an integral combination
/// of {2,3}-indexed words with nonnegative coefficients, weight-additive term
/// by term.
pub fn star(w1: &Composition, w2: &Composition) -> Result<LinComb, AlgebraError> {
    if !w1.all_parts_in_23() || !w2.all_parts_in_23() {
        return Err(AlgebraError::OutsideH23);
    }
    let mut memo: HashMap<(Vec<u32>, Vec<u32>), LinComb> = HashMap::new();
    Ok(star_rec(w1.parts(), w2.parts(), &mut memo))
}

fn star_rec(a: &[u32], b: &[u32], memo: &mut HashMap<(Vec<u32>, Vec<u32>), LinComb>) -> LinComb {
    if a.is_empty() {
        return LinComb::from_word(Composition::new(b.to_vec()).unwrap().to_word());
    }
    if b.is_empty() {
        return LinComb::from_word(Composition::new(a.to_vec()).unwrap().to_word());
    }
    let key = (a.to_vec(), b.to_vec());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let (ah, at) = a.split_at(a.len() - 1);
    let (bh, bt) = b.split_at(b.len() - 1);
    let result = if at[0] == 2 {
        star_rec(ah, b, memo).append_z(2)
    } else if bt[0] == 2 {
        star_rec(a, bh, memo).append_z(2)
    } else {
        let mut acc = star_rec(ah, b, memo).append_z(3);
        acc.add_scaled(&star_rec(a, bh, memo).append_z(3), &BigRational::one());
        acc.add_scaled(
            &star_rec(ah, bh, memo).append_z(2).append_z(2).append_z(2),
            &BigRational::one(),
        );
        acc
    };
    memo.insert(key, result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn word(parts: &[u32]) -> Word {
        comp(parts).to_word()
    }

    #[test]
    fn addition_cancels() {
        let mut p = LinComb::from_term(word(&[2, 1]), rat(2));
        p.add_term(word(&[2, 1]), &rat(-2));
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn concat_of_z_words() {
        let p = LinComb::from_word(word(&[2])).concat(&LinComb::from_word(word(&[3])));
        assert_eq!(p, LinComb::from_word(word(&[2, 3])));
        assert_eq!(word(&[2, 3]).to_string(), "yxyxx");
        // Unit laws.
        let q = LinComb::unit().concat(&p);
        assert_eq!(q, p);
    }

    #[test]
    fn scaling_is_linear() {
        let p = LinComb::from_word(word(&[2]));
        let half = p.scale(&rat_frac(1, 2));
        assert_eq!(&half + &half, p);
    }

    #[test]
    fn append_x_power_shifts_last_part() {
        let p = LinComb::from_word(word(&[2]));
        assert_eq!(p.append_x_power(1).unwrap(), LinComb::from_word(word(&[3])));
        assert_eq!(p.append_x_power(0).unwrap(), p);
        assert_eq!(
            LinComb::unit().append_x_power(2),
            Err(AlgebraError::AppendToUnit)
        );
    }

    #[test]
    fn append_z_pushes_part() {
        let p = LinComb::from_word(word(&[2]));
        assert_eq!(p.append_z(2), LinComb::from_word(word(&[2, 2])));
    }

    #[test]
    fn shuffle_squares_yx() {
        // yx sh yx = 2 yxyx + 4 yyxx; coefficient sum C(4,2) = 6.
        let p = shuffle(&word(&[2]), &word(&[2]));
        assert_eq!(p.coeff(&word(&[2, 2])), rat(2));
        assert_eq!(p.coeff(&word(&[1, 3])), rat(4));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn shuffle_unit_law() {
        let w = word(&[3]);
        assert_eq!(shuffle(&Word::empty(), &w), LinComb::from_word(w.clone()));
        assert_eq!(shuffle(&w, &Word::empty()), LinComb::from_word(w));
    }

    #[test]
    fn shuffle_single_letters() {
        let y = Word::from_letters([Letter::Y]);
        let x = Word::from_letters([Letter::X]);
        let p = shuffle(&y, &x);
        assert_eq!(p.coeff(&Word::from_letters([Letter::Y, Letter::X])), rat(1));
        assert_eq!(p.coeff(&Word::from_letters([Letter::X, Letter::Y])), rat(1));
        assert_eq!(p.num_terms(), 2);
        // Mixed-start words print in letter mode.
        assert_eq!(p.to_string(), "1\u{b7}xy + 1\u{b7}yx");
    }

    #[test]
    fn star_of_z3_z3() {
        let p = star(&comp(&[3]), &comp(&[3])).unwrap();
        let mut expected = LinComb::from_term(word(&[3, 3]), rat(2));
        expected.add_term(word(&[2, 2, 2]), &rat(1));
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "2\u{b7}3,3 + 1\u{b7}2,2,2");
    }

    #[test]
    fn star_of_z2_z2_is_not_harmonic() {
        let p = star(&comp(&[2]), &comp(&[2])).unwrap();
        assert_eq!(p, LinComb::from_word(word(&[2, 2])));
    }

    #[test]
    fn star_mixed_example() {
        let p = star(&comp(&[2, 3]), &comp(&[3])).unwrap();
        let mut expected = LinComb::from_word(word(&[3, 2, 3]));
        expected.add_term(word(&[2, 3, 3]), &rat(1));
        expected.add_term(word(&[2, 2, 2, 2]), &rat(1));
        assert_eq!(p, expected);
    }

    #[test]
    fn star_rejects_other_parts() {
        assert_eq!(
            star(&comp(&[4]), &comp(&[2])),
            Err(AlgebraError::OutsideH23)
        );
        assert_eq!(
            star(&comp(&[2]), &comp(&[1, 2])),
            Err(AlgebraError::OutsideH23)
        );
    }

    #[test]
    fn star_unit_cases() {
        let p = star(&Composition::empty(), &comp(&[2, 3])).unwrap();
        assert_eq!(p, LinComb::from_word(word(&[2, 3])));
        let p = star(&Composition::empty(), &Composition::empty()).unwrap();
        assert_eq!(p, LinComb::unit());
    }

    #[test]
    fn map_words_applies_tau_termwise() {
        let mut p = LinComb::from_word(word(&[3]));
        p.add_term(word(&[2]), &rat(1));
        let q = p.map_words(|w| Ok(w.tau())).unwrap();
        let mut expected = LinComb::from_word(word(&[1, 2]));
        expected.add_term(word(&[2]), &rat(1));
        assert_eq!(q, expected);
        assert_eq!(
            LinComb::zero().map_words(|w| Ok(w.tau())).unwrap(),
            LinComb::zero()
        );
    }

    #[test]
    fn reversal_is_termwise_on_compositions() {
        let p = LinComb::from_term(word(&[3, 3]), rat(2));
        let q = p
            .map_words(|w| Ok(w.to_composition()?.reversed().to_word()))
            .unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn display_negative_and_fractional() {
        let mut p = LinComb::from_term(word(&[4]), rat(1));
        p.add_term(word(&[2, 2]), &rat(-1));
        assert_eq!(p.to_string(), "1\u{b7}4 - 1\u{b7}2,2");
        let q = LinComb::from_term(word(&[2]), rat_frac(-2048, 4125));
        assert_eq!(q.to_string(), "-2048/4125\u{b7}2");
        assert_eq!(LinComb::unit().to_string(), "1\u{b7}()");
    }

    #[test]
    fn integrality_predicate() {
        let p = LinComb::from_term(word(&[2]), rat_frac(1, 2));
        assert!(!p.is_integral());
        assert!((&p + &p).is_integral());
    }
}
