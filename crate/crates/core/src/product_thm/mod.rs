//! Structure of sets of affine maps with small tripling, and the sum-product
//! harness built on the line family `ℓ_{b,c}(x) = c(x - b)`.
//!
//! Unspecified constants are evaluated at 1 and reported as margins; only
//! set-level identities (commutators are translations, the orbit-stabilizer
//! count, richness of the family) are asserted.

mod dichotomy;
mod lemma6;
mod sumprod;

pub use dichotomy::{coset_overlap, dichotomy_check, torus_overlap, Branch, DichotomyReport};
pub use lemma6::{
    abelian_concentration, commutator_witness, difference_product_size, lemma6_decomposition,
    nine_fold_check, quotient_image, Concentration, Lemma6Decomposition, Lemma6Report,
    NineFoldCheck, NINE_FOLD_MAX,
};
pub use sumprod::{
    asym_experiment, elekes_family, expander_check, product_set, sumset, AsymReport,
    ExpanderCheck, ASYM_MAX_DEPTH,
};
