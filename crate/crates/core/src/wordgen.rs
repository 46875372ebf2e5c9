//! Digit words of billiard directions: the "+i within, +j between" rule.
//!
//! Fix a table and an admissible pair `(n, q)`. The reduced word of the
//! direction is generated from the q-cycle decomposition of ℤ/nℤ: start
//! at digit 0; inside a cycle each further element advances the digit by
//! `i` (the *within* step), and moving to the next cycle advances it by
//! `j` (the *between* step), everything mod the alphabet size `m`. One
//! pass over the `q` cycles emits `n` digits and drifts the leading digit
//! by `net = i(n−q) + jq  (mod m)`; the word closes after
//! `n · ord` digits, where `ord` is the additive order of `net` in ℤ/mℤ.
//!
//! Per-table rules: A2 `(i, j, m) = (+1, −1, 3)`; B2 `(+1, +0, 2)`;
//! D2 `(+0, +1, 2)`; G2 reduces to the same rectangular-lattice rule as
//! D2. Full billiard words restore the per-table redundant labels
//! ([`expand_a2`], [`expand_b2`], [`expand_g2`], [`expand_d2`]); the
//! label conventions are frozen calibration constants shared with
//! [`crate::geom`], which re-derives every word by exact ray tracing.

use crate::qcycle::{self, CycleStructure, Parameters, QcycleError};
use num_integer::Integer;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The four reflection-tiling tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// Equilateral triangle.
    A2,
    /// 45-45-90 triangle.
    B2,
    /// Square.
    D2,
    /// 30-60-90 triangle.
    G2,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [TableKind::A2, TableKind::B2, TableKind::D2, TableKind::G2];

    /// The digit rule of the table's reduced words.
    pub fn reduced_rule(self) -> StepRule {
        match self {
            TableKind::A2 => A2_RULE,
            TableKind::B2 => B2_RULE,
            // G2 straightens to a rectangular lattice and shares D2's rule.
            TableKind::D2 | TableKind::G2 => D2_RULE,
        }
    }

    /// Alphabet size of the table's full billiard words.
    pub fn full_alphabet(self) -> u8 {
        match self {
            TableKind::A2 | TableKind::B2 | TableKind::G2 => 3,
            TableKind::D2 => 4,
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TableKind::A2 => "A2",
            TableKind::B2 => "B2",
            TableKind::D2 => "D2",
            TableKind::G2 => "G2",
        };
        f.write_str(name)
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A2" => Ok(TableKind::A2),
            "B2" => Ok(TableKind::B2),
            "D2" => Ok(TableKind::D2),
            "G2" => Ok(TableKind::G2),
            other => Err(format!("unknown table {other:?} (expected A2, B2, D2, or G2)")),
        }
    }
}

/// A "+i within, +j between" digit rule over the alphabet `{0, …, m−1}`.
/// Increments are stored as nonnegative residues mod `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRule {
    /// Digit increment between consecutive elements of one cycle.
    pub within: u8,
    /// Digit increment when crossing from one cycle to the next.
    pub between: u8,
    /// Alphabet size `m ≥ 2`.
    pub alphabet: u8,
}

/// Equilateral triangle: `+1` within, `−1 ≡ +2` between, mod 3.
pub const A2_RULE: StepRule = StepRule { within: 1, between: 2, alphabet: 3 };
/// 45-45-90 triangle: `+1` within, `+0` between, mod 2.
pub const B2_RULE: StepRule = StepRule { within: 1, between: 0, alphabet: 2 };
/// Square (and the straightened 30-60-90 lattice): `+0` within, `+1`
/// between, mod 2.
pub const D2_RULE: StepRule = StepRule { within: 0, between: 1, alphabet: 2 };

impl StepRule {
    /// Leading-digit drift after one pass of `n` digits:
    /// `i·(n−q) + j·q mod m`.
    pub fn net_shift(&self, params: &Parameters) -> u8 {
        let m = self.alphabet as u64;
        let net = (self.within as u64 * (params.n - params.q) + self.between as u64 * params.q) % m;
        net as u8
    }

    /// Number of passes until the word closes: the additive order of
    /// [`StepRule::net_shift`] in ℤ/mℤ.
    pub fn passes(&self, params: &Parameters) -> u64 {
        let m = self.alphabet as u64;
        m / m.gcd(&(self.net_shift(params) as u64))
    }
}

/// A periodic digit word, stored as exactly one period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    /// Alphabet size; every digit is `< alphabet`.
    pub alphabet: u8,
    /// One full period.
    pub digits: Vec<u8>,
}

impl Word {
    /// Builds a word, validating that it is nonempty and within alphabet.
    pub fn new(alphabet: u8, digits: Vec<u8>) -> Result<Word, WordError> {
        if digits.is_empty() {
            return Err(WordError::Empty);
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= alphabet) {
            return Err(WordError::DigitOutOfRange { digit, alphabet });
        }
        Ok(Word { alphabet, digits })
    }

    /// Period length (the stored digit count).
    pub fn period(&self) -> usize {
        self.digits.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("m", &self.alphabet)?;
        map.serialize_entry("period", &self.period())?;
        map.serialize_entry("digits", &self.to_string())?;
        map.end()
    }
}

/// Errors of word construction and expansion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word must contain at least one digit")]
    Empty,
    #[error("digit {digit} is outside the alphabet {{0..{alphabet}}}")]
    DigitOutOfRange { digit: u8, alphabet: u8 },
    #[error("expected a word over an alphabet of {expected} digits, got {got}")]
    WrongAlphabet { expected: u8, got: u8 },
    #[error("cyclically adjacent digits at position {pos} are equal; not a ternary rule word")]
    AdjacentEqualDigits { pos: usize },
    #[error("not a digit character: {ch:?}")]
    NonDigitInput { ch: char },
    #[error("not a binary run word: {reason}")]
    InvalidStream { reason: &'static str },
    #[error("streams describe different directions: ({n_left},{q_left}) vs ({n_right},{q_right})")]
    MismatchedStreams { n_left: u64, q_left: u64, n_right: u64, q_right: u64 },
}

/// Parses a digit string, ignoring whitespace and the cosmetic `|`
/// separators used when printing block groupings.
pub fn parse_digits(s: &str) -> Result<Vec<u8>, WordError> {
    let mut digits = Vec::with_capacity(s.len());
    for ch in s.chars() {
        if ch.is_whitespace() || ch == '|' {
            continue;
        }
        let d = ch.to_digit(10).ok_or(WordError::NonDigitInput { ch })?;
        digits.push(d as u8);
    }
    Ok(digits)
}

/// Smallest `p` dividing `xs.len()` such that the cyclic sequence is
/// invariant under rotation by `p`.
pub fn minimal_cyclic_period<T: PartialEq>(xs: &[T]) -> usize {
    let len = xs.len();
    for p in 1..=len {
        if len % p == 0 && (0..len).all(|i| xs[i] == xs[(i + p) % len]) {
            return p;
        }
    }
    len
}

/// The reduced word of a pointed cycle structure under a step rule.
///
/// Starts at digit 0 on the first element of the first listed cycle and
/// runs for [`StepRule::passes`] passes, so the output is exactly one
/// period (which is minimal: a shorter period would have to divide the
/// block pattern, and the block pattern repeats only per pass).
pub fn reduced_word(s: &CycleStructure, rule: &StepRule) -> Word {
    let m = rule.alphabet;
    let passes = rule.passes(&s.params);
    let mut digits = Vec::with_capacity((s.params.n * passes) as usize);
    let mut d = 0u8;
    for _ in 0..passes {
        for cycle in &s.cycles {
            for i in 0..cycle.len() {
                if i > 0 {
                    d = (d + rule.within) % m;
                }
                digits.push(d);
            }
            d = (d + rule.between) % m;
        }
    }
    Word { alphabet: m, digits }
}

/// Expands an A2 reduced word to the full billiard word: between every
/// two cyclically-adjacent (necessarily distinct) digits, insert the one
/// digit of `{0,1,2}` that is neither.
pub fn expand_a2(w: &Word) -> Result<Word, WordError> {
    if w.alphabet != 3 {
        return Err(WordError::WrongAlphabet { expected: 3, got: w.alphabet });
    }
    let p = w.period();
    let mut digits = Vec::with_capacity(2 * p);
    for (pos, &x) in w.digits.iter().enumerate() {
        let y = w.digits[(pos + 1) % p];
        if x == y {
            return Err(WordError::AdjacentEqualDigits { pos });
        }
        digits.push(x);
        digits.push(3 - x - y);
    }
    Ok(Word { alphabet: 3, digits })
}

/// Expands a B2 reduced word: map the binary digits through
/// `0 ↦ 1, 1 ↦ 2` (the two coordinate-edge labels) and interleave the
/// constant diagonal label 0 in front of every digit.
pub fn expand_b2(w: &Word) -> Result<Word, WordError> {
    if w.alphabet != 2 {
        return Err(WordError::WrongAlphabet { expected: 2, got: w.alphabet });
    }
    let mut digits = Vec::with_capacity(2 * w.period());
    for &x in &w.digits {
        digits.push(0);
        digits.push(x + 1);
    }
    Ok(Word { alphabet: 3, digits })
}

/// Expands a G2 reduced word: interleave the constant long-edge label 2
/// after every digit.
pub fn expand_g2(w: &Word) -> Result<Word, WordError> {
    if w.alphabet != 2 {
        return Err(WordError::WrongAlphabet { expected: 2, got: w.alphabet });
    }
    let mut digits = Vec::with_capacity(2 * w.period());
    for &x in &w.digits {
        digits.push(x);
        digits.push(2);
    }
    Ok(Word { alphabet: 3, digits })
}

/// One grid crossing of a D2 ray, in trajectory order.
#[derive(Debug, Clone, Copy)]
struct GridEvent {
    /// Crossing of the vertical line `x = line` (else horizontal
    /// `y = line`).
    vertical: bool,
    line: u64,
}

/// Crossing schedule of the ray `x(t) = 2m/n + ε + 2qt`,
/// `y(t) = 2(n−q)t` against the integer grid over `t ∈ [0, passes)`,
/// with `0 ≤ m < n`. Crossing times are compared exactly on the integer
/// scale `2qn(n−q)`; the infinitesimal ε > 0 places a vertical crossing
/// before a simultaneous horizontal one and keeps the ray off every
/// lattice vertex. The first event is always the `y = 0` crossing at
/// `t = 0`, where the ray starts on an edge of label 0.
fn d2_events(n: u64, q: u64, m: u64, passes: u64) -> Vec<GridEvent> {
    let (ni, qi, mi) = (n as i128, q as i128, m as i128);
    // First vertical line strictly ahead of x(0); exact hits at t = 0
    // belong to t < 0 because of +ε.
    let j0 = 2 * m / n + 1;
    let mut events = Vec::with_capacity((2 * n * passes) as usize);
    let mut xs = (j0..j0 + 2 * q * passes)
        .map(|j| (((j as i128) * ni - 2 * mi) * (ni - qi), j))
        .peekable();
    let mut ys = (0..2 * (n - q) * passes)
        .map(|l| ((l as i128) * qi * ni, l))
        .peekable();
    loop {
        match (xs.peek().copied(), ys.peek().copied()) {
            // Ties go to the vertical crossing (its time carries −ε/2q).
            (Some((tx, j)), Some((ty, _))) if tx <= ty => {
                xs.next();
                events.push(GridEvent { vertical: true, line: j });
            }
            (_, Some((_, l))) => {
                ys.next();
                events.push(GridEvent { vertical: false, line: l });
            }
            (Some((_, j)), None) => {
                xs.next();
                events.push(GridEvent { vertical: true, line: j });
            }
            (None, None) => break,
        }
    }
    events
}

/// Label of a grid crossing under the frozen D2 edge-label tables.
///
/// Both coordinate directions are label-periodic with period 4 in x and
/// 2 in y: vertical lines `x = 2j` carry 0/3 (by parity of `j`, the even
/// sublattice), `x = 2j+1` carry 1/2 (odd sublattice); horizontal edges
/// take the label of the x-strip they lie in, with the same sublattice
/// split by the parity of `y`.
fn d2_label(n: u64, q: u64, m: u64, ev: GridEvent) -> u8 {
    if ev.vertical {
        let c = ev.line;
        if c % 2 == 0 {
            if (c / 2) % 2 == 1 { 0 } else { 3 }
        } else if ((c - 1) / 2) % 2 == 0 {
            1
        } else {
            2
        }
    } else {
        let l = ev.line;
        // x at the crossing is a/b + ε with a = 2m(n−q) + lqn, b = n(n−q).
        let a = 2 * m * (n - q) + l * q * n;
        let b = n * (n - q);
        if l % 2 == 0 {
            // Strip [2j, 2j+2): j = ⌊(a/b + ε)/2⌋ = a div 2b.
            if (a / (2 * b)) % 2 == 0 { 0 } else { 3 }
        } else {
            // Strip [2j−1, 2j+1): j = ⌊(a/b + 1 + ε)/2⌋ = (a+b) div 2b.
            if ((a + b) / (2 * b)) % 2 == 0 { 1 } else { 2 }
        }
    }
}

/// Full D2 billiard word of the ray offset by `2m/n` in x (the
/// trajectory translates that sweep out the direction's class).
/// `m = 0` is the canonical start.
pub(crate) fn d2_full_word_at_offset(n: u64, q: u64, m: u64) -> Result<Word, QcycleError> {
    let params = Parameters::new(n, q)?;
    let passes = D2_RULE.passes(&params);
    let digits = d2_events(n, q, m, passes)
        .into_iter()
        .map(|ev| d2_label(n, q, m, ev))
        .collect();
    Ok(Word { alphabet: 4, digits })
}

/// The two canonically-pointed binary streams of a D2 direction: the
/// even-sublattice stream (full labels `{0,3}`) and the odd-sublattice
/// stream (full labels `{1,2}`).
///
/// The even stream is exactly the reduced word of the decomposition.
/// The odd stream is the same cyclic word pointed where the trajectory
/// first meets the odd sublattice, which is generally mid-block: it is
/// produced by walking the crossing schedule and flipping the digit
/// after every vertical crossing (a vertical crossing emits the last
/// digit of its block).
pub fn d2_stream_words(n: u64, q: u64) -> Result<(Word, Word), QcycleError> {
    let s = qcycle::decompose(n, q)?;
    let w03 = reduced_word(&s, &D2_RULE);
    let passes = D2_RULE.passes(&s.params);
    let mut digits = Vec::with_capacity((s.params.n * passes) as usize);
    let mut d = 0u8;
    for ev in d2_events(n, q, 0, passes) {
        if ev.line % 2 == 1 {
            digits.push(d);
            if ev.vertical {
                d ^= 1;
            }
        }
    }
    Ok((w03, Word { alphabet: 2, digits }))
}

/// Recovers the direction parameters described by a binary run word:
/// run lengths must take at most two values differing by one, arranged
/// with cyclic period `q`, for a whole number of passes. With `aligned`,
/// additionally requires the word to start a run with digit 0 (the
/// pointing of a canonical even stream).
fn d2_recover_params(w: &Word, aligned: bool) -> Result<Parameters, WordError> {
    if w.alphabet != 2 {
        return Err(WordError::WrongAlphabet { expected: 2, got: w.alphabet });
    }
    let p = w.period();
    let digits = &w.digits;
    if digits.iter().all(|&d| d == digits[0]) {
        return Err(WordError::InvalidStream { reason: "constant digits have no between-steps" });
    }
    if aligned && (digits[0] != 0 || digits[p - 1] == digits[0]) {
        return Err(WordError::InvalidStream {
            reason: "stream must start a run of digit 0",
        });
    }
    // Cyclic run lengths, starting from the run containing position 0
    // (wrap-merged so rotations see the same cyclic sequence).
    let mut runs: Vec<u64> = Vec::new();
    let mut len = 1u64;
    for i in 1..p {
        if digits[i] == digits[i - 1] {
            len += 1;
        } else {
            runs.push(len);
            len = 1;
        }
    }
    runs.push(len);
    if runs.len() > 1 && digits[p - 1] == digits[0] {
        let last = runs.pop().unwrap();
        runs[0] += last;
    }
    let b = *runs.iter().min().unwrap();
    let long = *runs.iter().max().unwrap();
    if long > b + 1 {
        return Err(WordError::InvalidStream {
            reason: "run lengths must take two values differing by one",
        });
    }
    let q = minimal_cyclic_period(&runs) as u64;
    let r = runs[..q as usize].iter().filter(|&&l| l == b + 1).count() as u64;
    let n = b * q + r;
    let params = Parameters::new(n, q).map_err(|_| WordError::InvalidStream {
        reason: "recovered parameters are not an admissible pair",
    })?;
    let passes = D2_RULE.passes(&params);
    if runs.len() as u64 != q * passes || p as u64 != n * passes {
        return Err(WordError::InvalidStream {
            reason: "period is not a whole number of passes",
        });
    }
    Ok(params)
}

/// Shuffles the two binary streams of one D2 direction into the full
/// word over `{0,1,2,3}`: digits are consumed in exact crossing order
/// (even-sublattice stream mapped `0 ↦ 0, 1 ↦ 3`, odd stream mapped
/// `0 ↦ 1, 1 ↦ 2`), so between two consecutive even-stream digits the
/// ray crosses 1, 12, 21, or 2 from the odd stream.
///
/// Both inputs must describe the same direction; the even stream must
/// carry the canonical pointing (start of a 0-run), the odd stream the
/// trajectory pointing produced by [`d2_stream_words`].
pub fn expand_d2(w03: &Word, w12: &Word) -> Result<Word, WordError> {
    let p03 = d2_recover_params(w03, true)?;
    let p12 = d2_recover_params(w12, false)?;
    if p03 != p12 {
        return Err(WordError::MismatchedStreams {
            n_left: p03.n,
            q_left: p03.q,
            n_right: p12.n,
            q_right: p12.q,
        });
    }
    let (n, q) = (p03.n, p03.q);
    let passes = D2_RULE.passes(&p03);
    let (mut i03, mut i12) = (0usize, 0usize);
    let mut digits = Vec::with_capacity(2 * w03.period());
    for ev in d2_events(n, q, 0, passes) {
        if ev.line % 2 == 0 {
            digits.push(if w03.digits[i03] == 0 { 0 } else { 3 });
            i03 += 1;
        } else {
            digits.push(w12.digits[i12] + 1);
            i12 += 1;
        }
    }
    debug_assert_eq!((i03, i12), (w03.period(), w12.period()));
    Ok(Word { alphabet: 4, digits })
}

/// Full billiard word of the table's canonical `(n, q)` direction.
pub fn word_of_direction(table: TableKind, n: u64, q: u64) -> Result<Word, QcycleError> {
    let s = qcycle::decompose(n, q)?;
    let w = reduced_word(&s, &table.reduced_rule());
    let full = match table {
        TableKind::A2 => expand_a2(&w).expect("rule words alternate digits"),
        TableKind::B2 => expand_b2(&w).expect("reduced word is binary"),
        TableKind::G2 => expand_g2(&w).expect("reduced word is binary"),
        TableKind::D2 => {
            let (w03, w12) = d2_stream_words(n, q)?;
            expand_d2(&w03, &w12).expect("canonical streams are compatible")
        }
    };
    Ok(full)
}

/// Reduced billiard word of the table's canonical `(n, q)` direction.
pub fn reduced_word_of_direction(table: TableKind, n: u64, q: u64) -> Result<Word, QcycleError> {
    let s = qcycle::decompose(n, q)?;
    Ok(reduced_word(&s, &table.reduced_rule()))
}
