//! Minimal canonical comprehensive Gröbner systems for parametric
//! polynomial ideals over the rationals.
//!
//! The crate is organised bottom-up:
//! - [`polyring`]: exact polynomial arithmetic, block term orders, parsing.
//! - [`groebner`]: Buchberger's algorithm, reduced bases, normal forms,
//!   elimination, ideal operations.
//! - [`primdec`]: factorization over Q and minimal primes of radicals.
//! - [`constructible`]: canonical trees of prime ideals representing
//!   constructible sets, and the canonical form of a union of locally
//!   closed segments.
//! - [`cgs`]: the case discussion producing a disjoint reduced comprehensive
//!   Gröbner system.
//! - [`mccgs`]: merging of cases with equal leading-monomial sets into the
//!   minimal canonical system.

pub mod cgs;
pub mod constructible;
pub mod groebner;
pub mod mccgs;
pub mod polyring;
pub mod primdec;

pub use cgs::{
    discuss, lpp_set, oracle_check, reduce_on_segment, sample_segment, specializes_like,
    split_segment, Case, CoeffOutcome, Discussion, Segment, SegmentSplit,
};
pub use constructible::{difftocantree, gcs, gcs_with, PTree, RedSpec};
pub use groebner::{buchberger, normal_form, reduce_basis, spoly, Ideal};
pub use mccgs::{merge_cases, minimal_system, CanonicalSystem, Group};
pub use primdec::{minimal_primes, minimal_primes_with, Factorization, Factorizer, MinimalPrimes};
pub use polyring::{
    gcd, gcd_many, mono_to_text, parse_poly, squarefree_part, Monomial, OrderKind, ParseError,
    Poly, TermOrder, VarSpace,
};
