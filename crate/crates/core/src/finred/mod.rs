//! The finite reductive layer: GL(n, F_p) with its standard Borel, torus and
//! parabolic subgroups, torus characters, and the classification invariants
//! of irreducible modules in natural characteristic.
//!
//! Roots and the Weyl group are hard-coded for type A_{n-1}: simple roots are
//! indexed 1..=n-1 with alpha_i = e_i - e_{i+1}, the Weyl group is S_n acting
//! by permutation matrices, and w_0 is the order-reversing permutation.

mod group;
mod classify;
mod checks;

pub use group::{
    Coinvariants, FiniteGL, GroupRep, Parabolic, Permutation, RootSet, TorusCharacter,
    coinvariants, fixed_space,
};
pub use classify::{
    Classification, IrreducibleData, build_gl, classify, parameters, special_rep,
};
pub use checks::{
    DeckSplit, DualityReport, ProductEquivalenceReport, WeightSupport, check_duality,
    is_m_coregular, is_m_regular, rregu_equivalence, unipotent_splitting, weight_support,
};
