//! Periodic digit sequences of rational billiard trajectories on the four
//! convex polygons that tile the plane by reflection — the equilateral
//! triangle, the 45-45-90 triangle, the square, and the 30-60-90 triangle
//! (tables A2, B2, D2, G2 after their reflection groups).
//!
//! A billiard trajectory with direction parametrized by a coprime pair
//! `(n, q)` unfolds to a straight ray in a labeled line arrangement; the
//! labels it crosses form a periodic word. This crate provides
//!
//! * [`qcycle`] — the q-cycle decompositions of ℤ/nℤ that control the
//!   block structure of those words,
//! * [`wordgen`] — the per-table "+i within, +j between" digit rules,
//!   reduced words, and full-word expansions,
//! * [`recognizer`] — deciding whether a digit string is such a word and
//!   recovering `(n, q)`,
//! * [`geom`] — an exact-rational ray tracer over the labeled arrangements,
//!   used as an independent correctness oracle,
//! * [`classes`] — the translation class of a direction: the `q` pointed
//!   words reachable by translating the trajectory.

pub mod classes;
pub mod geom;
pub mod qcycle;
pub mod recognizer;
pub mod wordgen;
