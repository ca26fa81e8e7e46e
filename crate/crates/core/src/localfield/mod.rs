//! Exact arithmetic in F = F_p((t)) with explicit precision, matrix normal
//! forms over the valuation ring o = F_p[[t]], and enumeration of the finite
//! coset quotients showing up in Hecke-operator sums.
//!
//! Precision contract: scalar operations propagate precision honestly and
//! never truncate silently. The few operations that must choose a working
//! precision (unit inversion inside normal forms) take it from a
//! [`LocalContext`] budget; a budget that turns out to be too small surfaces
//! as a `PrecisionExhausted` error, never as a wrong answer.

mod laurent;
mod matrix;
mod hermite;
mod cosets;

pub use laurent::{LaurentScalar, Prec};
pub use matrix::{LocalContext, LocalElt, reduce_mod_t};
pub use hermite::{CosetKey, Smith, canonical_coset, canonical_coset_with_transform,
    canonical_right_key, iwasawa, iwahori_factor, smith, smith_invariants};
pub use cosets::{
    Positivity, QuotientKind, block_scalar_element, enum_quotient, in_k, in_k_plus, in_ksk,
    in_ksp, in_levi_compact_coset, in_parahoric, in_psp, membership_region, p0_orbit,
    positivity, unipotent_reps, upper_positions, lower_positions, Region,
};
