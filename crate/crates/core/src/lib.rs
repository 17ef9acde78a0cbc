//! Exact word-algebra kernel for multiple zeta values.
//!
//! The crate has five layers:
//!
//! * [`words`] — canonical words over {x, y}, the composition / exponent-tuple
//!   / bracket encodings, and the structural maps (tau, reversal, weight,
//!   subring membership);
//! * [`algebra`] — sparse rational linear combinations, concatenation, the
//!   shuffle product, and the star product on {2,3}-indexed words;
//! * [`drop1`](mod@drop1) — the drop-1 operator: pair-set family enumeration, tuple
//!   surgery, and the memoized recursion on exponent tuples;
//! * [`numeric`] — truncated zeta sums (floating and exact rational), mod-p
//!   finite sums, and the diamond-flat chain sums;
//! * [`verify`] — checkers for the identities relating all of the above and
//!   scanners for the two open conjectures, reporting as JSON/CSV/text.
//!
//! All values are immutable after construction and every operation is pure;
//! the drop-1 engines carry an explicit write-once memo so callers choose
//! between shared and per-worker caching.

pub mod algebra;
pub mod drop1;
pub mod numeric;
pub mod verify;
pub mod words;

pub use algebra::{shuffle, shuffle_linear, star, AlgebraError, LinComb};
pub use drop1::{
    drop1, enumerate_family, tuple_surgery, Drop1, Drop1Error, FamilyKind, SurgerySpec,
    DEFAULT_MEMO_CAP,
};
pub use numeric::{
    diamond_flat_p, eval_lincomb, hoffman_diamond_instance, is_prime_u64, primes_in_range,
    zeta_p_mod, zeta_trunc_exact, zeta_trunc_float, EvalBackend, Evaluation, NumericError,
    ResidueValue, TruncatedValue,
};
pub use verify::{CaseRecord, CheckReport, CheckStatus};
pub use words::{
    parse_bracket, parse_word, BracketForm, ChainBlocks, Composition, ExponentTuple, Letter,
    Membership, Parsed, Word, WordError,
};
