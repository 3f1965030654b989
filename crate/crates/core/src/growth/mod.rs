//! Partial products, approximate closure of symmetry sets, and growth checks.
//!
//! Starting from `A ⊆ sym_α(Y)`, [`approx_closure`] keeps the pairs
//! `(g⁻¹, h)` whose images overlap in at least `(α²/2)|Y|` points, and
//! [`uniform_closure`] restricts to one dyadic multiplicity class.
//! [`bsg_pipeline`] iterates this, picks the stage of smallest growth, finds
//! the densest abelian coset there, and carries it back to `A`.

mod closure;
mod pipeline;
mod products;
mod relation;

pub use closure::{
    alpha_at, approx_closure, dyadic_bucket, translate_density, uniform_closure, Closure, Pullback,
    UniformClosure,
};
pub use pipeline::{bsg_pipeline, PullbackRecord, StageRecord, StructureReport};
pub use products::{
    inverses, product_set, ruzsa_check, triple_product, word_product, RuzsaCheck, TripleProduct,
};
pub use relation::{partial_product, Relation};
