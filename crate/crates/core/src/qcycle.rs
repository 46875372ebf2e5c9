//! q-cycle decomposition of ℤ/nℤ.
//!
//! Fix coprime integers `0 < q < n` and write `n = b·q + r` with
//! `0 ≤ r < q`. The residues `{0, …, n−1}` split into `q` arithmetic
//! progressions `C_a = a, a+q, a+2q, …` (all terms `< n`), one for each
//! anchor `a < q`; exactly `r` of them (those with `a < r`) hold `b+1`
//! elements and the remaining `q−r` hold `b`. Walking the single orbit
//! `0, q, 2q, … (mod n)` visits the cycles in the order
//! `C_0, C_{−r}, C_{−2r}, …` (anchors read mod `q`): past the top of a
//! cycle the orbit lands on the anchor `(a − r) mod q`.
//!
//! A [`CycleStructure`] is this decomposition together with a
//! distinguished starting cycle. The `+1` translation acts on structures
//! by advancing every anchor, which re-points the traversal at the cycle
//! anchored one higher; the action has order exactly `q` and swaps one
//! cyclically-adjacent pair of the length tuple per application (see
//! [`CycleStructure::shift`]). These structures drive the digit words in
//! [`crate::wordgen`].

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

/// Validation errors for q-cycle parameters and residue arguments.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcycleError {
    /// `n` must be a positive integer.
    #[error("n must be positive")]
    ZeroN,
    /// `q` must be a positive integer.
    #[error("q must be positive")]
    ZeroQ,
    /// The pair must be coprime for the cycles to partition ℤ/nℤ.
    #[error("n = {n} and q = {q} are not coprime")]
    NotCoprime { n: u64, q: u64 },
    /// The word rules need strictly more within-steps than between-steps,
    /// i.e. `2q < n`; the degenerate pair `(2, 1)` is admitted as well.
    #[error("require 2q < n (or the pair (2,1)); got n = {n}, q = {q}")]
    RatioTooLarge { n: u64, q: u64 },
    /// Anchor argument outside `0..q`.
    #[error("residue {a} is not in 0..{q}")]
    ResidueOutOfRange { a: u64, q: u64 },
}

/// The admissible pair `(n, q)` with its long division `n = b·q + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub n: u64,
    pub q: u64,
    /// Quotient of `n / q`; the short cycle length.
    pub b: u64,
    /// Remainder of `n mod q`; the number of long cycles.
    pub r: u64,
}

impl Parameters {
    /// Validates `(n, q)` and performs the long division.
    ///
    /// Admissible pairs are coprime with `2q < n`, plus the degenerate
    /// `(2, 1)`. Each failure mode gets its own error variant.
    pub fn new(n: u64, q: u64) -> Result<Self, QcycleError> {
        if n == 0 {
            return Err(QcycleError::ZeroN);
        }
        if q == 0 {
            return Err(QcycleError::ZeroQ);
        }
        if n.gcd(&q) != 1 {
            return Err(QcycleError::NotCoprime { n, q });
        }
        if 2 * q >= n && (n, q) != (2, 1) {
            return Err(QcycleError::RatioTooLarge { n, q });
        }
        Ok(Parameters { n, q, b: n / q, r: n % q })
    }

    /// Anchor of the cycle that the orbit visits after `C_a`, namely
    /// `(a − r) mod q`: the orbit leaves the top of `C_a` (which is
    /// `≥ n − q`) and wraps to `top + q − n`.
    pub fn successor_min(&self, a: u64) -> Result<u64, QcycleError> {
        if a >= self.q {
            return Err(QcycleError::ResidueOutOfRange { a, q: self.q });
        }
        Ok((a + self.q - self.r) % self.q)
    }

    /// The anchors in traversal order: `(−k·r) mod q` for `k = 0 … q−1`.
    pub fn minimal_order(&self) -> Vec<u64> {
        let mut order = Vec::with_capacity(self.q as usize);
        let mut a = 0;
        for _ in 0..self.q {
            order.push(a);
            a = (a + self.q - self.r) % self.q;
        }
        order
    }
}

/// One q-cycle: the arithmetic progression `min, min+q, …` below `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub min: u64,
    pub elements: Vec<u64>,
}

impl Cycle {
    fn new(params: &Parameters, a: u64) -> Cycle {
        let elements: Vec<u64> = (a..params.n).step_by(params.q as usize).collect();
        Cycle { min: a, elements }
    }

    /// Number of elements: `b+1` for anchors below `r`, else `b`.
    pub fn len(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The ordered q-cycle decomposition of ℤ/nℤ, pointed at a starting cycle.
///
/// [`decompose`] anchors the traversal at `C_0`; the `+1` action
/// ([`CycleStructure::shift`]) re-points it one anchor higher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleStructure {
    #[serde(flatten)]
    pub params: Parameters,
    pub cycles: Vec<Cycle>,
}

impl CycleStructure {
    fn anchored_at(params: Parameters, start: u64) -> CycleStructure {
        let mut cycles = Vec::with_capacity(params.q as usize);
        let mut a = start;
        for _ in 0..params.q {
            cycles.push(Cycle::new(&params, a));
            a = (a + params.q - params.r) % params.q;
        }
        CycleStructure { params, cycles }
    }

    /// Anchor of the distinguished first cycle.
    pub fn anchor(&self) -> u64 {
        self.cycles[0].min
    }

    /// The ordered tuple of cycle lengths.
    pub fn lengths(&self) -> Vec<u64> {
        self.cycles.iter().map(Cycle::len).collect()
    }

    /// The `+1` translation: every residue moves up by one, which sends
    /// the cycle anchored at `a` to the one anchored at `(a+1) mod q`.
    /// The cycles themselves are the fixed partition of ℤ/nℤ; only the
    /// distinguished starting cycle moves, so `shift` has order exactly
    /// `q`, and for `q ≥ 2` each application changes the length tuple by
    /// exactly one cyclically-adjacent transposition.
    pub fn shift(&self) -> CycleStructure {
        let q = self.params.q;
        if q == 1 {
            return self.clone();
        }
        let next = (self.anchor() + 1) % q;
        let pos = self
            .cycles
            .iter()
            .position(|c| c.min == next)
            .expect("every anchor occurs exactly once");
        let mut cycles = self.cycles.clone();
        cycles.rotate_left(pos);
        CycleStructure { params: self.params, cycles }
    }
}

/// Decomposes ℤ/nℤ into q-cycles, listed in traversal order from `C_0`.
pub fn decompose(n: u64, q: u64) -> Result<CycleStructure, QcycleError> {
    let params = Parameters::new(n, q)?;
    Ok(CycleStructure::anchored_at(params, 0))
}

/// Builds the same decomposition as [`decompose`] by recursion on the
/// division chain instead of by walking the orbit.
///
/// With `n = b·q + r`, the traversal order of the `(n, q)` anchors is the
/// element order of the `(q, q−r)` structure: build that structure
/// (recursively; base case `q = 1` is the single trivial cycle), then
/// read off its cycles' elements in listed order and replace each element
/// `y` by the cycle `C_y` of `n`. The inner pairs need not satisfy the
/// `2q < n` gate, so the recursion validates only positivity/coprimality.
pub fn euclid_construct(n: u64, q: u64) -> Result<CycleStructure, QcycleError> {
    let params = Parameters::new(n, q)?;
    let mut cycles = Vec::with_capacity(q as usize);
    for a in anchor_order(n, q) {
        cycles.push(Cycle::new(&params, a));
    }
    Ok(CycleStructure { params, cycles })
}

/// Anchor traversal order of `(n, q)` via the Euclidean recursion.
/// Requires `0 < q ≤ n` and `gcd(n, q) = 1`.
fn anchor_order(n: u64, q: u64) -> Vec<u64> {
    if q == 1 {
        return vec![0];
    }
    let r = n % q;
    // Flatten the (q, q−r) structure: each of its cycles is a rising run
    // with step q−r below q; their elements in listed order are the
    // anchors of (n, q) in traversal order.
    let mut order = Vec::with_capacity(q as usize);
    for a in anchor_order(q, q - r) {
        order.extend((a..q).step_by((q - r) as usize));
    }
    order
}
