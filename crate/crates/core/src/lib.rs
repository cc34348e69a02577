//! Exact-arithmetic toolkit for elliptic curves over ℚ induced by rational
//! Diophantine triples.
//!
//! A rational Diophantine triple is a set of three nonzero rationals
//! `{a, b, c}` such that `ab+1`, `ac+1`, `bc+1` are all squares of rationals.
//! Each triple induces the curve `y² = (ax+1)(bx+1)(cx+1)`, equivalently
//! `y² = (x+ab)(x+ac)(x+bc)`, which has full rational 2-torsion.
//!
//! The crate provides:
//!
//! * exact rational arithmetic with square detection and square classes over
//!   coprime bases ([`arith`]),
//! * Weierstrass curves over ℚ with the group law, ℚ-isomorphism testing and
//!   torsion computation ([`curve`]),
//! * triples, the Lasić parametrization and the induced curve ([`triples`]),
//! * the two-parameter `(u,v)` family with five sections ([`family_uv`]),
//! * the one-parameter subfamilies, quartic reductions and seven-point
//!   construction ([`family_w`]),
//! * Mestre–Nagao sieving over parameter grids ([`sieve`]),
//! * rank lower-bound certificates by 2-descent over the full 2-torsion
//!   ([`descent`]).

pub mod arith;
pub mod curve;
pub mod descent;
pub mod family_uv;
pub mod family_w;
pub mod poly;
pub mod rat;
pub mod records;
pub mod sieve;
pub mod triples;

pub use curve::{CurveQ, PointQ, SplitCurve};
pub use rat::Rat;
