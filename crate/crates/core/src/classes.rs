//! Translation classes: the family of words swept out by translating a
//! trajectory sideways without changing its direction.
//!
//! Sliding the start point of an `(n, q)` trajectory across one spacing
//! interval passes through `n` singular offsets; between consecutive
//! offsets the pointed word is constant, and the distinct words that
//! appear are exactly the `q` words obtained by iterating the `+1`
//! shift action on the cycle structure. Consecutive members differ by
//! one cyclically-adjacent transposition of the block-length tuple —
//! the combinatorial shadow of the trajectory crossing one vertex.

use crate::qcycle::{self, CycleStructure, Parameters};
use crate::wordgen::{self, StepRule, Word};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// One member of a translation class: a pointed cycle structure and its
/// reduced word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMember {
    pub structure: CycleStructure,
    pub word: Word,
}

impl ClassMember {
    /// Anchor residue of the member (the class's member index).
    pub fn anchor(&self) -> u64 {
        self.structure.anchor()
    }

    /// Block-length tuple of the member, one pass.
    pub fn lengths(&self) -> Vec<u64> {
        self.structure.lengths()
    }
}

impl Serialize for ClassMember {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("anchor", &self.anchor())?;
        map.serialize_entry("lengths", &self.lengths())?;
        map.serialize_entry("word", &self.word)?;
        map.end()
    }
}

/// The `q` pointed words of one direction, in `+1`-shift encounter
/// order starting from the canonical member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationClass {
    pub params: Parameters,
    pub rule: StepRule,
    pub members: Vec<ClassMember>,
}

impl Serialize for TranslationClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("n", &self.params.n)?;
        map.serialize_entry("q", &self.params.q)?;
        map.serialize_entry("b", &self.params.b)?;
        map.serialize_entry("r", &self.params.r)?;
        map.serialize_entry("members", &self.members)?;
        map.end()
    }
}

/// Enumerates the translation class of a direction by iterating the
/// shift action until the anchor returns; exactly `q` distinct members
/// appear.
pub fn translation_class(params: Parameters, rule: &StepRule) -> TranslationClass {
    let mut s = qcycle::decompose(params.n, params.q).expect("parameters are validated");
    let first = s.anchor();
    let mut members = Vec::with_capacity(params.q as usize);
    loop {
        let word = wordgen::reduced_word(&s, rule);
        let next = s.shift();
        members.push(ClassMember { structure: s, word });
        if next.anchor() == first {
            break;
        }
        s = next;
    }
    debug_assert_eq!(members.len() as u64, params.q);
    TranslationClass { params, rule: *rule, members }
}

/// Outcome of the adjacent-transposition check on a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyCheck {
    pub ok: bool,
    /// For each cyclically-consecutive member pair `(k, k+1)`, the
    /// start index `t` of the swapped length positions `(t, t+1 mod q)`
    /// — `None` when the pair is not one adjacent transposition apart.
    pub witnesses: Vec<Option<usize>>,
}

/// Verifies that consecutive class members (cyclically) differ by
/// exactly one adjacent transposition of their length tuples, returning
/// the transposition positions as witnesses. Vacuously true for q = 1.
pub fn class_adjacency_check(class: &TranslationClass) -> AdjacencyCheck {
    let q = class.members.len();
    if q < 2 {
        return AdjacencyCheck { ok: true, witnesses: Vec::new() };
    }
    let witnesses: Vec<Option<usize>> = (0..q)
        .map(|k| {
            let xs = class.members[k].lengths();
            let ys = class.members[(k + 1) % q].lengths();
            adjacent_transposition_index(&xs, &ys)
        })
        .collect();
    AdjacencyCheck { ok: witnesses.iter().all(|w| w.is_some()), witnesses }
}

/// If `ys` equals `xs` with the (distinct) entries at cyclic positions
/// `(t, t+1)` swapped, for exactly one `t`, returns that `t`.
fn adjacent_transposition_index(xs: &[u64], ys: &[u64]) -> Option<usize> {
    let len = xs.len();
    if ys.len() != len || len < 2 {
        return None;
    }
    let i = (0..len).find(|&i| xs[i] != ys[i])?;
    // The swapped pair either starts at the first difference or — only
    // possible for i = 0 — wraps around from the last position.
    for t in [i, (i + len - 1) % len] {
        let u = (t + 1) % len;
        let mut swapped = xs.to_vec();
        swapped.swap(t, u);
        if swapped == ys && xs[t] != xs[u] {
            return Some(t);
        }
    }
    None
}
