//! Exact-rational ray tracing on the four labeled reflection lattices.
//!
//! Unfolding a billiard trajectory replaces reflection at an edge by
//! continuation into a mirror copy of the table, so the trajectory
//! becomes a straight ray and the table edges become a plane-filling
//! arrangement of lines. Everything here works in the basis `(v1, v2)`
//! of the arrangement's translation lattice, where every edge family is
//! a family of parallel lines with *integer* offsets:
//!
//! * equilateral (`A2`): three families `u ∈ ℤ`, `v ∈ ℤ`, `u+v ∈ ℤ`;
//! * 45-45-90 (`B2`): the square grid `u, v ∈ ℤ` plus the diagonals
//!   `u+v ∈ ℤ` (hypotenuses);
//! * square (`D2`): the grid `u, v ∈ ℤ`;
//! * 30-60-90 (`G2`): straightened onto the rectangular grid
//!   `u, v ∈ ℤ` plus `u+v ∈ ℤ` for the long edges.
//!
//! Working in basis coordinates keeps every computation in ℚ — no √3
//! ever appears. A crossing lands on a lattice vertex exactly when both
//! basis coordinates are integers; such a ray is singular (the folded
//! trajectory hits a corner and dies there).
//!
//! Edge labels are frozen calibration tables, (doubly) periodic under
//! the label-preserving translation subgroup `H`:
//!
//! * `A2`: at `v = k` the label is `k − ⌊u⌋ − 1`, at `u = k` it is
//!   `⌊v⌋ − k`, at `u+v = k` it is `k − 2⌊u⌋`, all mod 3;
//!   `H = {(s,t) : s ≡ t (mod 3)}`.
//! * `B2`: diagonals are 0; `v = k` is 1 or 2 by the parity of `k`
//!   (even ↦ 1); `u = k` takes the opposite choice for the `v`-strip
//!   it sits in; `H = ℤ × 2ℤ`.
//! * `D2`: `u = k` carries `3,1,0,2` for `k ≡ 0,1,2,3 (mod 4)`;
//!   horizontal edges take `0/3` (even `k`, by parity of `⌊u/2⌋`) or
//!   `1/2` (odd `k`, by parity of `⌊(u+1)/2⌋`); `H = 4ℤ × 2ℤ`.
//! * `G2`: long edges are 2; `u = k` is `(k+1) mod 2`; `v = k` is
//!   `m mod 2` in the strip `u ∈ [m, m+1)`; `H = 2ℤ × ℤ`.
//!
//! The labeled torus `ℝ²/H` is tiled by 6 (`A2`), 4 (`B2`), 8 (`D2`),
//! and 4 (`G2`) fundamental tiles. The calibration is pinned by the
//! worked `(23,5)` equilateral example and cross-checked against the
//! combinatorial generator in [`crate::wordgen`] for every table.

use crate::qcycle::{Parameters, QcycleError};
use crate::wordgen::{TableKind, Word};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

/// Exact rational scalar used throughout the module.
pub type Rat = Ratio<i128>;

/// A point (or direction vector) in lattice-basis coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalPoint {
    pub u: Rat,
    pub v: Rat,
}

impl RationalPoint {
    pub fn new(u: Rat, v: Rat) -> Self {
        RationalPoint { u, v }
    }

    /// Both coordinates integral: the point is a lattice vertex.
    pub fn is_vertex(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }
}

/// A ray `t ↦ p0 + t·v0`, `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalRay {
    pub p0: RationalPoint,
    pub v0: RationalPoint,
}

/// One family of parallel lattice lines: the solutions of
/// `coef.0·u + coef.1·v ∈ ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Family {
    pub name: &'static str,
    pub coef: (i128, i128),
}

/// A labeled unfolding lattice.
#[derive(Debug, Clone)]
pub struct LatticeModel {
    pub kind: TableKind,
    /// Edge-line families, in a fixed order.
    pub families: Vec<Family>,
    /// Generators of the label-preserving translation subgroup `H`.
    pub label_translations: [(i128, i128); 2],
    /// Index of `H` in the full (unlabeled) translation lattice.
    pub label_index: u64,
    /// Fundamental tiles per labeled torus `ℝ²/H`.
    pub tiles_per_torus: u64,
}

/// One edge crossing along a ray. `t` is measured along the primitive
/// integer direction vector of the ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingEvent {
    pub t: Rat,
    /// Index into [`LatticeModel::families`].
    pub family: usize,
    /// Integer line offset: the crossed line is `coef·(u,v) = line`.
    pub line: i128,
    pub label: u8,
    /// The crossing is a lattice vertex; it terminates the trace.
    pub singular: bool,
}

/// Periodicity report of a rational-direction ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodReport {
    /// Smallest multiple of the primitive direction lying in `H`.
    pub multiplier: u64,
    /// The label-preserving translation `λ` along the ray.
    pub translation: (i128, i128),
    /// Edge crossings per period (= label period of the full word).
    pub crossings: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("start point lies on a lattice vertex")]
    StartOnVertex,
    #[error("trajectory hits a lattice vertex at t = {t}")]
    Singular { t: Rat },
    #[error(transparent)]
    Parameters(#[from] QcycleError),
}

/// Builds the labeled lattice of a table.
pub fn build_model(kind: TableKind) -> LatticeModel {
    let u = Family { name: "u", coef: (1, 0) };
    let v = Family { name: "v", coef: (0, 1) };
    let anti = Family { name: "u+v", coef: (1, 1) };
    match kind {
        TableKind::A2 => LatticeModel {
            kind,
            families: vec![u, v, anti],
            label_translations: [(1, 1), (0, 3)],
            label_index: 3,
            tiles_per_torus: 6,
        },
        TableKind::B2 => LatticeModel {
            kind,
            families: vec![u, v, anti],
            label_translations: [(1, 0), (0, 2)],
            label_index: 2,
            tiles_per_torus: 4,
        },
        TableKind::D2 => LatticeModel {
            kind,
            families: vec![u, v],
            label_translations: [(4, 0), (0, 2)],
            label_index: 8,
            tiles_per_torus: 8,
        },
        TableKind::G2 => LatticeModel {
            kind,
            families: vec![u, v, anti],
            label_translations: [(2, 0), (0, 1)],
            label_index: 2,
            tiles_per_torus: 4,
        },
    }
}

fn floor_int(x: Rat) -> i128 {
    x.floor().to_integer()
}

/// Label of the crossing of line `coef·(u,v) = k` at `point`, from the
/// frozen per-table label tables (see module docs). Well-defined for
/// nonsingular crossings; at a vertex the value is immaterial because
/// the trace terminates.
fn crossing_label(kind: TableKind, coef: (i128, i128), k: i128, point: &RationalPoint) -> u8 {
    match kind {
        TableKind::A2 => match coef {
            (0, 1) => (k - floor_int(point.u) - 1).rem_euclid(3) as u8,
            (1, 0) => (floor_int(point.v) - k).rem_euclid(3) as u8,
            _ => (k - 2 * floor_int(point.u)).rem_euclid(3) as u8,
        },
        TableKind::B2 => match coef {
            (1, 1) => 0,
            (0, 1) => {
                if k.rem_euclid(2) == 0 { 1 } else { 2 }
            }
            _ => {
                if floor_int(point.v).rem_euclid(2) == 0 { 2 } else { 1 }
            }
        },
        TableKind::D2 => match coef {
            (1, 0) => [3, 1, 0, 2][k.rem_euclid(4) as usize],
            _ => {
                if k.rem_euclid(2) == 0 {
                    if floor_int(point.u / 2).rem_euclid(2) == 0 { 0 } else { 3 }
                } else if floor_int((point.u + 1) / 2).rem_euclid(2) == 0 {
                    1
                } else {
                    2
                }
            }
        },
        TableKind::G2 => match coef {
            (1, 1) => 2,
            (1, 0) => ((k + 1).rem_euclid(2)) as u8,
            _ => (floor_int(point.u).rem_euclid(2)) as u8,
        },
    }
}

/// Reduces a rational direction to its primitive integer vector.
fn primitive_direction(v0: &RationalPoint) -> Result<(i128, i128), GeomError> {
    if v0.u.is_zero() && v0.v.is_zero() {
        return Err(GeomError::ZeroDirection);
    }
    let den = v0.u.denom().lcm(v0.v.denom());
    let p = v0.u.numer() * (den / v0.u.denom());
    let s = v0.v.numer() * (den / v0.v.denom());
    let g = p.gcd(&s);
    Ok((p / g, s / g))
}

struct FamilyWalker {
    family: usize,
    coef: (i128, i128),
    /// Form value at `p0`.
    phi0: Rat,
    /// Form derivative along the primitive direction (nonzero).
    rate: i128,
    /// Next integer line to be crossed.
    k: i128,
}

impl FamilyWalker {
    fn next_t(&self) -> Rat {
        (Rat::from_integer(self.k) - self.phi0) / Rat::from_integer(self.rate)
    }
}

/// Traces the first `count` edge crossings of `ray`, in increasing `t`.
///
/// Crossings already under way at `t = 0` (the start point lying on a
/// lattice line) are emitted first; a vertex crossing is emitted with
/// `singular` set and terminates the trace early.
pub fn trace(
    model: &LatticeModel,
    ray: &RationalRay,
    count: usize,
) -> Result<Vec<CrossingEvent>, GeomError> {
    let (p, s) = primitive_direction(&ray.v0)?;
    let mut walkers = Vec::with_capacity(model.families.len());
    for (idx, fam) in model.families.iter().enumerate() {
        let rate = fam.coef.0 * p + fam.coef.1 * s;
        if rate == 0 {
            continue; // the ray is parallel to this family
        }
        let phi0 = Rat::from_integer(fam.coef.0) * ray.p0.u + Rat::from_integer(fam.coef.1) * ray.p0.v;
        let k = if phi0.is_integer() {
            phi0.to_integer()
        } else if rate > 0 {
            floor_int(phi0) + 1
        } else {
            floor_int(phi0)
        };
        walkers.push(FamilyWalker { family: idx, coef: fam.coef, phi0, rate, k });
    }
    let mut events = Vec::with_capacity(count);
    while events.len() < count {
        let (wi, t) = walkers
            .iter()
            .enumerate()
            .map(|(i, w)| (i, w.next_t()))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("every table has a family transverse to a nonzero direction");
        let w = &mut walkers[wi];
        let point = RationalPoint::new(
            ray.p0.u + t * Rat::from_integer(p),
            ray.p0.v + t * Rat::from_integer(s),
        );
        let singular = point.is_vertex();
        events.push(CrossingEvent {
            t,
            family: w.family,
            line: w.k,
            label: crossing_label(model.kind, w.coef, w.k, &point),
            singular,
        });
        if singular {
            break;
        }
        w.k += w.rate.signum();
    }
    Ok(events)
}

/// The first `count` crossing labels of `ray`, or the singularity that
/// interrupts them (a vertex start is itself a singularity at `t = 0`).
pub fn simulate(
    model: &LatticeModel,
    ray: &RationalRay,
    count: usize,
) -> Result<Vec<u8>, GeomError> {
    let events = trace(model, ray, count)?;
    if let Some(ev) = events.last().filter(|ev| ev.singular) {
        return Err(GeomError::Singular { t: ev.t });
    }
    Ok(events.into_iter().map(|ev| ev.label).collect())
}

/// True iff any of the first `horizon` crossings is a lattice vertex.
/// A start point already on a vertex violates the precondition.
pub fn is_singular(
    model: &LatticeModel,
    ray: &RationalRay,
    horizon: usize,
) -> Result<bool, GeomError> {
    if ray.p0.is_vertex() {
        return Err(GeomError::StartOnVertex);
    }
    let events = trace(model, ray, horizon)?;
    Ok(events.last().is_some_and(|ev| ev.singular))
}

/// Smallest label-preserving lattice translation along the ray
/// direction, with the crossing count of one full period.
pub fn detect_period(model: &LatticeModel, ray: &RationalRay) -> Result<PeriodReport, GeomError> {
    let (p, s) = primitive_direction(&ray.v0)?;
    // H is cut out by congruences on (u, v); the smallest k with
    // k·(p,s) ∈ H is the lcm of the per-congruence orders.
    let constraints: &[(i128, i128)] = match model.kind {
        TableKind::A2 => &[(p - s, 3)],
        TableKind::B2 => &[(s, 2)],
        TableKind::D2 => &[(p, 4), (s, 2)],
        TableKind::G2 => &[(p, 2)],
    };
    let mut k: i128 = 1;
    for &(value, modulus) in constraints {
        k = k.lcm(&(modulus / modulus.gcd(&value.rem_euclid(modulus))));
    }
    let translation = (k * p, k * s);
    let crossings = model
        .families
        .iter()
        .map(|f| (f.coef.0 * translation.0 + f.coef.1 * translation.1).abs() as u64)
        .sum();
    Ok(PeriodReport { multiplier: k as u64, translation, crossings })
}

/// Direction vector of the `(n, q)` trajectory in basis coordinates.
pub fn direction_of(n: u64, q: u64) -> Result<RationalPoint, QcycleError> {
    let params = Parameters::new(n, q)?;
    Ok(RationalPoint::new(
        Rat::from_integer(params.q as i128),
        Rat::from_integer((params.n - params.q) as i128),
    ))
}

/// Canonical generic start point of the table, displaced by
/// `ε = 1 / (2n² · 2^attempt)` from the corner along the start edge.
/// Every table starts on an edge of label 0, so traces begin with the
/// `t = 0` crossing of that edge.
fn start_point(kind: TableKind, n: u64, attempt: u32) -> RationalPoint {
    let eps = Rat::new(1, 2 * (n as i128) * (n as i128) << attempt);
    match kind {
        // On the diagonal edge u + v = 0.
        TableKind::A2 | TableKind::B2 => RationalPoint::new(eps, -eps),
        // On the horizontal edge v = 0.
        TableKind::D2 | TableKind::G2 => RationalPoint::new(eps, Rat::zero()),
    }
}

/// The canonical ray of the `(n, q)` direction on a table.
pub fn canonical_ray(kind: TableKind, n: u64, q: u64) -> Result<RationalRay, QcycleError> {
    Ok(RationalRay { p0: start_point(kind, n, 0), v0: direction_of(n, q)? })
}

/// The `m`-th of the `n` start points sweeping one interval of
/// translated trajectories per member of the direction's translation
/// class (`0 ≤ m < n`). `m = 0` is the canonical ray.
pub fn sweep_ray(kind: TableKind, n: u64, q: u64, m: u64) -> Result<RationalRay, QcycleError> {
    let mut p0 = start_point(kind, n, 0);
    let shift = match kind {
        // Along the start edge: each unit interval of the edge meets n
        // singular offsets, one per vertex ray.
        TableKind::A2 | TableKind::B2 => Rat::new(m as i128, n as i128),
        TableKind::G2 => Rat::new(m as i128, n as i128),
        // The D2 label tables have x-period 4 over a 2-step grid, so
        // translates advance in steps of 2/n.
        TableKind::D2 => Rat::new(2 * m as i128, n as i128),
    };
    p0.u += shift;
    if matches!(kind, TableKind::A2 | TableKind::B2) {
        p0.v -= shift; // stay on the diagonal start edge
    }
    Ok(RationalRay { p0, v0: direction_of(n, q)? })
}

/// Full-period billiard word of the `(n, q)` direction, by exact ray
/// tracing. Retries with a smaller start offset if the canonical ray is
/// singular (which the 1/(2n²) offset provably never is; the retry is
/// defensive).
pub fn word_by_simulation(kind: TableKind, n: u64, q: u64) -> Result<Word, GeomError> {
    let v0 = direction_of(n, q)?;
    let model = build_model(kind);
    let mut last = GeomError::ZeroDirection;
    for attempt in 0..8 {
        let ray = RationalRay { p0: start_point(kind, n, attempt), v0 };
        let period = detect_period(&model, &ray)?;
        match simulate(&model, &ray, period.crossings as usize) {
            Ok(digits) => {
                let word = Word::new(kind.full_alphabet(), digits)
                    .expect("a period has at least one crossing");
                return Ok(word);
            }
            Err(err @ GeomError::Singular { .. }) => last = err,
            Err(err) => return Err(err),
        }
    }
    Err(last)
}
