//! Exact invariants of complex plane curve singularities.
//!
//! From the equisingularity data of a curve (characteristic exponents of the
//! branches plus pairwise intersection multiplicities) this crate computes
//! the multivariable Poincare series by three independent pipelines and
//! verifies their coincidence:
//!
//! * [`pipelines::poincare_factorization`] — the product over the special
//!   vertices of the dual resolution graph ([`resolution_graph`]);
//! * [`pipelines::poincare_iterative`] — the recursion over approximating
//!   curves driven by satellite weights ([`equisingularity`]);
//! * [`pipelines::alexander_iterative`] — the Alexander polynomial of the
//!   associated link, iterated over the same satellization order with
//!   exponents taken from linking numbers.
//!
//! For a single branch the series coincides with the generating series of
//! the value semigroup ([`semigroup`]) and `(t - 1) P(t)` is the Alexander
//! polynomial of the knot. All arithmetic is exact ([`series`]).

pub mod equisingularity;
pub mod pipelines;
pub mod resolution_graph;
pub mod sampling;
pub mod semigroup;
pub mod series;
