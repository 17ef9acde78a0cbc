//! Words over the two-letter alphabet {x, y} and their standard encodings.
//!
//! The canonical representation of an algebra element is the letter sequence;
//! compositions (index lists), exponent tuples and bracket forms are derived
//! views computed on demand, so there is exactly one source of truth.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Errors raised by parsing and by encoding conversions.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("composition part must be >= 1 (part {index} is {found})")]
    NonPositivePart { index: usize, found: u64 },
    #[error("word does not start with y, so it has no composition form")]
    NotInYH,
    #[error("word is outside H0 (must be empty, or start with y and end with x)")]
    NotInH0,
    #[error("composition is not admissible (last part must be >= 2)")]
    NotAdmissible,
    #[error("exponent tuple must have even length and strictly positive entries")]
    MalformedTuple,
    #[error("bracket entries must be >= 1")]
    BracketEntry,
    #[error("exponent tuple is not the expansion of any bracket form: {0}")]
    NotBracketShaped(String),
}

/// One letter of the alphabet. `X` sorts before `Y`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A word in the free monoid on {x, y}; the empty word is the algebra unit 1.
///
/// Equality is plain letter-sequence equality. The ordering is graded
/// (shorter words first) and then lexicographic on letters with x < y, which
/// on composition-encodable words puts larger leading parts first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word {
            letters: letters.into_iter().collect(),
        }
    }

    /// The word z_k = y x^{k-1}.
    pub fn z(k: u32) -> Self {
        assert!(k >= 1, "z_k requires k >= 1");
        let mut letters = Vec::with_capacity(k as usize);
        letters.push(Letter::Y);
        letters.extend(std::iter::repeat_n(Letter::X, k as usize - 1));
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Total degree: the letter count.
    pub fn weight(&self) -> u32 {
        self.letters.len() as u32
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Right-multiply by x^m.
    pub fn append_x(&self, m: u32) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(std::iter::repeat_n(Letter::X, m as usize));
        Word { letters }
    }

    /// Right-multiply by z_k.
    pub fn append_z(&self, k: u32) -> Word {
        self.concat(&Word::z(k))
    }

    /// The anti-automorphism swapping x and y: reverse the letters, then swap.
    /// An involution fixing the unit.
    pub fn tau(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.swapped()).collect(),
        }
    }

    pub fn membership(&self) -> Membership {
        let in_yh = self.letters.first().is_none_or(|&l| l == Letter::Y);
        let in_h0 = in_yh && self.letters.last().is_none_or(|&l| l == Letter::X);
        let (in_geq2, in_h23) = match self.to_composition() {
            Ok(c) => (c.all_parts_at_least(2), c.all_parts_in_23()),
            Err(_) => (false, false),
        };
        Membership {
            in_h0,
            in_h23,
            in_geq2,
            in_yh,
        }
    }

    pub fn is_in_h0(&self) -> bool {
        self.membership().in_h0
    }

    /// Composition view: defined exactly when the word lies in Z + yH.
    pub fn to_composition(&self) -> Result<Composition, WordError> {
        if self.letters.first().is_some_and(|&l| l == Letter::X) {
            return Err(WordError::NotInYH);
        }
        let mut parts = Vec::new();
        for &l in &self.letters {
            match l {
                Letter::Y => parts.push(1u32),
                Letter::X => *parts.last_mut().expect("word starts with y") += 1,
            }
        }
        Ok(Composition { parts })
    }

    /// Exponent-tuple view: defined exactly when the word lies in H0.
    pub fn to_exponent_tuple(&self) -> Result<ExponentTuple, WordError> {
        if !self.is_in_h0() {
            return Err(WordError::NotInH0);
        }
        let mut entries: Vec<u32> = Vec::new();
        let mut current = Letter::X; // a leading y opens a fresh run
        for &l in &self.letters {
            if l == current {
                *entries.last_mut().unwrap() += 1;
            } else {
                entries.push(1);
                current = l;
            }
        }
        debug_assert!(entries.len().is_multiple_of(2));
        Ok(ExponentTuple { entries })
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Subring membership flags. The implications in_h23 => in_geq2 => in_h0 => in_yh hold.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Membership {
    pub in_h0: bool,
    pub in_h23: bool,
    pub in_geq2: bool,
    pub in_yh: bool,
}

/// An index list (k_1, ..., k_r) of parts >= 1, encoding z_{k_1} ... z_{k_r}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, WordError> {
        for (i, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(WordError::NonPositivePart {
                    index: i + 1,
                    found: 0,
                });
            }
        }
        Ok(Composition { parts })
    }

    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    /// Single part z_k.
    pub fn z(k: u32) -> Self {
        assert!(k >= 1);
        Composition { parts: vec![k] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The mirrored index list (k_r, ..., k_1). An involution.
    pub fn reversed(&self) -> Composition {
        Composition {
            parts: self.parts.iter().rev().copied().collect(),
        }
    }

    /// Admissible means empty or last part >= 2 (the word lies in H0).
    pub fn is_admissible(&self) -> bool {
        self.parts.last().is_none_or(|&k| k >= 2)
    }

    pub fn all_parts_in_23(&self) -> bool {
        self.parts.iter().all(|&k| k == 2 || k == 3)
    }

    pub fn all_parts_at_least(&self, bound: u32) -> bool {
        self.parts.iter().all(|&k| k >= bound)
    }

    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Composition { parts }
    }

    pub fn push(&mut self, k: u32) {
        assert!(k >= 1);
        self.parts.push(k);
    }

    pub fn to_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &k in &self.parts {
            letters.push(Letter::Y);
            letters.extend(std::iter::repeat_n(Letter::X, k as usize - 1));
        }
        Word { letters }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// The tuple (c_1, ..., c_{2t}) of positive integers encoding the H0 word
/// y^{c_1} x^{c_2} ... y^{c_{2t-1}} x^{c_{2t}}; the empty tuple encodes 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentTuple {
    entries: Vec<u32>,
}

impl ExponentTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self, WordError> {
        if !entries.len().is_multiple_of(2) || entries.contains(&0) {
            return Err(WordError::MalformedTuple);
        }
        Ok(ExponentTuple { entries })
    }

    pub fn empty() -> Self {
        ExponentTuple {
            entries: Vec::new(),
        }
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(entries.len().is_multiple_of(2) && entries.iter().all(|&e| e >= 1));
        ExponentTuple { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Half the tuple length (the t in 2t).
    pub fn half_length(&self) -> usize {
        self.entries.len() / 2
    }

    /// Sum of the entries; equals the weight of the encoded word.
    pub fn entry_sum(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// 1-based positions i with c_i = 1.
    pub fn ones_positions(&self) -> Vec<usize> {
        (1..=self.entries.len())
            .filter(|&i| self.entries[i - 1] == 1)
            .collect()
    }

    /// 1-based positions i with c_i > 1.
    pub fn greater_positions(&self) -> Vec<usize> {
        (1..=self.entries.len())
            .filter(|&i| self.entries[i - 1] > 1)
            .collect()
    }

    pub fn to_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.entry_sum() as usize);
        for (i, &c) in self.entries.iter().enumerate() {
            let l = if i % 2 == 0 { Letter::Y } else { Letter::X };
            letters.extend(std::iter::repeat_n(l, c as usize));
        }
        Word { letters }
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "()");
        }
        let strs: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// The three-segment bracket [a_1,...,a_r; b_1,...,b_s; c] with r, s >= 0 and
/// c >= 1, a compact name for the exponent tuple
/// ({1}^{2a_1-1}, 2, ..., {1}^{2a_r-1}, 2, {1}^{2c-2}, 2, {1}^{2b_1-1}, ..., 2, {1}^{2b_s-1}).
/// With r = 0 the leading run is {1}^{2c-2}; with s = 0 nothing follows it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BracketForm {
    a: Vec<u32>,
    b: Vec<u32>,
    c: u32,
}

impl BracketForm {
    pub fn new(a: Vec<u32>, b: Vec<u32>, c: u32) -> Result<Self, WordError> {
        if c == 0 || a.contains(&0) || b.contains(&0) {
            return Err(WordError::BracketEntry);
        }
        Ok(BracketForm { a, b, c })
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Prefix sums l_1, ..., l_r of the a-segment.
    pub fn l_prefix(&self) -> Vec<u32> {
        self.a
            .iter()
            .scan(0u32, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    /// Prefix sums m_1, ..., m_s of the b-segment.
    pub fn m_prefix(&self) -> Vec<u32> {
        self.b
            .iter()
            .scan(0u32, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    /// t = sum(a) + sum(b) + c - 1; the expansion has length 2t.
    pub fn half_length(&self) -> u32 {
        self.a.iter().sum::<u32>() + self.b.iter().sum::<u32>() + self.c - 1
    }

    pub fn expand(&self) -> ExponentTuple {
        let mut entries: Vec<u32> = Vec::with_capacity(2 * self.half_length() as usize);
        for &ai in &self.a {
            entries.extend(std::iter::repeat_n(1, 2 * ai as usize - 1));
            entries.push(2);
        }
        entries.extend(std::iter::repeat_n(1, 2 * self.c as usize - 2));
        for (j, &bj) in self.b.iter().enumerate() {
            let _ = j;
            entries.push(2);
            entries.extend(std::iter::repeat_n(1, 2 * bj as usize - 1));
        }
        debug_assert_eq!(entries.len() as u32, 2 * self.half_length());
        ExponentTuple::from_entries_unchecked(entries)
    }

    /// Recover the bracket from an expansion. Inverse of [`expand`](Self::expand)
    /// on its image; tuples with entries other than 1 and 2, or with the 2s in
    /// an impossible pattern, are rejected.
    pub fn from_exponent_tuple(t: &ExponentTuple) -> Result<Self, WordError> {
        let shape_err = |m: &str| WordError::NotBracketShaped(m.to_string());
        if t.entries.iter().any(|&e| e > 2) {
            return Err(shape_err("entries must be 1 or 2"));
        }
        let two_positions: Vec<usize> = (1..=t.len()).filter(|&i| t.entries[i - 1] == 2).collect();
        // Even-position 2s close a-blocks, odd-position 2s open b-blocks; the
        // a-block 2s must all come first.
        let split = two_positions
            .iter()
            .position(|&p| p % 2 == 1)
            .unwrap_or(two_positions.len());
        if two_positions[split..].iter().any(|&p| p % 2 == 0) {
            return Err(shape_err("an even-position 2 follows an odd-position 2"));
        }
        let evens = &two_positions[..split];
        let odds = &two_positions[split..];

        let mut a = Vec::new();
        let mut prev_end = 0usize;
        for &p in evens {
            let run = p - prev_end - 1;
            if run.is_multiple_of(2) {
                return Err(shape_err("a-segment run has even length"));
            }
            a.push(run.div_ceil(2) as u32);
            prev_end = p;
        }

        let c_run_end = odds.first().map_or(t.len(), |&p| p - 1);
        let c_run = c_run_end - prev_end;
        if !c_run.is_multiple_of(2) {
            return Err(shape_err("c-segment run has odd length"));
        }
        let c = (c_run / 2 + 1) as u32;

        let mut b = Vec::new();
        for (j, &p) in odds.iter().enumerate() {
            let end = odds.get(j + 1).map_or(t.len(), |&q| q - 1);
            let run = end - p;
            if run.is_multiple_of(2) {
                return Err(shape_err("b-segment run has even length"));
            }
            b.push(run.div_ceil(2) as u32);
        }

        let bracket = BracketForm { a, b, c };
        if &bracket.expand() != t {
            return Err(shape_err("expansion mismatch"));
        }
        Ok(bracket)
    }
}

impl fmt::Display for BracketForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "[{};{};{}]", join(&self.a), join(&self.b), self.c)
    }
}

/// Block decomposition ((a_1, b_1), ..., (a_s, b_s)) of an admissible
/// composition ({1}^{a_1-1}, b_1+1, ..., {1}^{a_s-1}, b_s+1), read off by
/// taking maximal runs of 1s. This two-segment form drives the mod-p chain
/// sum; it carries no c-component and is never coerced to a [`BracketForm`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainBlocks {
    blocks: Vec<(u32, u32)>,
}

impl ChainBlocks {
    pub fn from_composition(k: &Composition) -> Result<Self, WordError> {
        let mut blocks = Vec::new();
        let mut ones_run = 0u32;
        for &part in k.parts() {
            if part == 1 {
                ones_run += 1;
            } else {
                blocks.push((ones_run + 1, part - 1));
                ones_run = 0;
            }
        }
        if ones_run > 0 {
            return Err(WordError::NotAdmissible);
        }
        Ok(ChainBlocks { blocks })
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    /// Merged composition (a_1+b_1, ..., a_s+b_s).
    pub fn merged(&self) -> Composition {
        Composition {
            parts: self.blocks.iter().map(|&(a, b)| a + b).collect(),
        }
    }

    /// l = a_1 + ... + a_s - s, the exponent of the sign (-1)^l.
    pub fn sign_exponent(&self) -> u32 {
        self.blocks.iter().map(|&(a, _)| a - 1).sum()
    }

    /// Total number of chained variables; equals the composition weight.
    pub fn chain_length(&self) -> u32 {
        self.blocks.iter().map(|&(a, b)| a + b).sum()
    }

    pub fn to_composition(&self) -> Composition {
        let mut parts = Vec::new();
        for &(a, b) in &self.blocks {
            parts.extend(std::iter::repeat_n(1, a as usize - 1));
            parts.push(b + 1);
        }
        Composition { parts }
    }
}

impl fmt::Display for ChainBlocks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |it: Vec<String>| it.join(",");
        let a = join(self.blocks.iter().map(|(a, _)| a.to_string()).collect());
        let b = join(self.blocks.iter().map(|(_, b)| b.to_string()).collect());
        write!(f, "[{a};{b}]")
    }
}

/// Result of parsing the two word grammars: `/[xy]+/` or `/\d+(,\d+)*/`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Parsed {
    Word(Word),
    Composition(Composition),
}

impl Parsed {
    /// The underlying word, whichever grammar produced it.
    pub fn into_word(self) -> Word {
        match self {
            Parsed::Word(w) => w,
            Parsed::Composition(c) => c.to_word(),
        }
    }
}

fn strip_ws(text: &str) -> String {
    text.chars().filter(|c| !c.is_ascii_whitespace()).collect()
}

/// Parse letter form ("yxx") or composition form ("3,1,4"). ASCII-only,
/// whitespace-insensitive; positions refer to the input with spaces removed.
pub fn parse_word(text: &str) -> Result<Parsed, WordError> {
    let s = strip_ws(text);
    if s.is_empty() {
        return Err(WordError::Syntax {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let first = s.chars().next().unwrap();
    if first == 'x' || first == 'y' {
        let mut letters = Vec::with_capacity(s.len());
        for (pos, ch) in s.char_indices() {
            match ch {
                'x' => letters.push(Letter::X),
                'y' => letters.push(Letter::Y),
                _ => {
                    return Err(WordError::Syntax {
                        pos,
                        msg: format!("expected x or y, found {ch:?}"),
                    })
                }
            }
        }
        Ok(Parsed::Word(Word { letters }))
    } else if first.is_ascii_digit() {
        let mut parts = Vec::new();
        for (index, piece) in s.split(',').enumerate() {
            if piece.is_empty() || !piece.chars().all(|c| c.is_ascii_digit()) {
                let pos = s.split(',').take(index).map(|p| p.len() + 1).sum();
                return Err(WordError::Syntax {
                    pos,
                    msg: format!("expected a positive integer, found {piece:?}"),
                });
            }
            let value: u64 = piece.parse().map_err(|_| WordError::Syntax {
                pos: 0,
                msg: format!("part {piece:?} overflows"),
            })?;
            if value == 0 {
                return Err(WordError::NonPositivePart {
                    index: index + 1,
                    found: value,
                });
            }
            if value > u32::MAX as u64 {
                return Err(WordError::Syntax {
                    pos: 0,
                    msg: format!("part {value} is too large"),
                });
            }
            parts.push(value as u32);
        }
        Ok(Parsed::Composition(Composition { parts }))
    } else {
        Err(WordError::Syntax {
            pos: 0,
            msg: format!("expected a letter word or a composition, found {first:?}"),
        })
    }
}

/// Parse the bracket grammar "[a1,..;b1,..;c]"; the a and b segments may be empty.
pub fn parse_bracket(text: &str) -> Result<BracketForm, WordError> {
    let s = strip_ws(text);
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| WordError::Syntax {
            pos: 0,
            msg: "bracket form must be enclosed in [ ]".into(),
        })?;
    let segments: Vec<&str> = inner.split(';').collect();
    if segments.len() != 3 {
        return Err(WordError::Syntax {
            pos: 0,
            msg: format!("bracket form needs 3 segments, found {}", segments.len()),
        });
    }
    let parse_list = |seg: &str| -> Result<Vec<u32>, WordError> {
        if seg.is_empty() {
            return Ok(Vec::new());
        }
        seg.split(',')
            .map(|p| {
                p.parse::<u32>().map_err(|_| WordError::Syntax {
                    pos: 0,
                    msg: format!("bad bracket entry {p:?}"),
                })
            })
            .collect()
    };
    let a = parse_list(segments[0])?;
    let b = parse_list(segments[1])?;
    let c: u32 = segments[2].parse().map_err(|_| WordError::Syntax {
        pos: 0,
        msg: format!("bad bracket entry {:?}", segments[2]),
    })?;
    BracketForm::new(a, b, c)
}

/// All compositions of weight <= max_weight with parts in {2, 3}, i.e. the
/// words of H^{2,3}, including the empty one. Graded, deterministic order.
pub fn enumerate_h23(max_weight: u32) -> Vec<Composition> {
    enumerate_filtered(max_weight, &[2, 3], false)
}

/// All compositions of weight <= max_weight with parts >= 2 (words of H^{>=2}).
pub fn enumerate_geq2(max_weight: u32) -> Vec<Composition> {
    let parts: Vec<u32> = (2..=max_weight.max(2)).collect();
    enumerate_filtered(max_weight, &parts, false)
}

/// All admissible compositions of weight <= max_weight (words of H0): empty,
/// or arbitrary parts with the last one >= 2.
pub fn enumerate_admissible(max_weight: u32) -> Vec<Composition> {
    let parts: Vec<u32> = (1..=max_weight.max(1)).collect();
    enumerate_filtered(max_weight, &parts, true)
}

fn enumerate_filtered(max_weight: u32, allowed: &[u32], last_at_least_2: bool) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn rec(
        out: &mut Vec<Composition>,
        stack: &mut Vec<u32>,
        remaining: u32,
        allowed: &[u32],
        last_at_least_2: bool,
    ) {
        if stack.last().is_none_or(|&k| !last_at_least_2 || k >= 2) {
            out.push(Composition {
                parts: stack.clone(),
            });
        }
        for &k in allowed {
            if k <= remaining {
                stack.push(k);
                rec(out, stack, remaining - k, allowed, last_at_least_2);
                stack.pop();
            }
        }
    }
    rec(&mut out, &mut stack, max_weight, allowed, last_at_least_2);
    out.sort_by_key(|p| p.to_word());
    out
}
