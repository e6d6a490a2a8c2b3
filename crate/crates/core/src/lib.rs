//! Linear repair schemes for full-length Reed-Solomon codes.
//!
//! A code over `F = GF(q^ell)` is repaired one symbol at a time by
//! downloading base-field subsymbols from the surviving nodes. This crate
//! builds such schemes from dual codewords, counts their repair bandwidth
//! and I/O cost exactly (per-node I/O matrices and, independently, the
//! Hamming weight of the span of the dual words), executes repairs, builds
//! low-I/O schemes from affine q-polynomials, and searches small fields
//! exhaustively for the true minimum I/O cost.

pub mod code;
pub mod construction;
pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod qpoly;
pub mod repair;
pub mod search;
pub mod weight;

pub use code::{Codeword, RsCode};
pub use construction::{
    bandwidth_equals_io, compare_baselines, construct_scheme, default_s, predicted_cost,
    Comparison, Construction, TransferWitness,
};
pub use error::{Error, Result};
pub use field::{Elem, FieldContext, FieldSpec};
pub use linalg::{BMatrix, PrimeField};
pub use poly::Poly;
pub use qpoly::{intersect_trace_kernels, solve_annihilator, QPolynomial, Subspace};
pub use repair::{CostReport, NodeCost, RepairScheme, Repairer, SchemeSpec, StripeStore, Violation};
pub use search::{
    gaussian_binomial, lower_bound, min_io_exhaustive, verify_bound, BoundReport, SearchOptions,
    SearchOutcome,
};
pub use weight::{coset_weight, CosetWeight, SubVector};
