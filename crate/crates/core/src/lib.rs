//! Exact computational engine for mod-p representations of GL(n, F_p) and
//! their Hecke algebras over the local function field F_p((t)).
//!
//! The crate is organized bottom-up:
//!
//! * [`ff`] — dense exact linear algebra over prime fields F_p,
//! * [`fpoly`] — univariate polynomials over F_p (characteristic polynomials,
//!   factorization) backing the module chopper,
//! * [`meataxe`] — decomposition of finite-group modules into certified
//!   irreducible composition factors,
//! * [`finred`] — GL(n, F_p) with its parabolic subgroups, classification of
//!   irreducible modules by torus character and stabilizer parabolic, and the
//!   structural checks on those invariants,
//! * [`localfield`] — exact Laurent-series arithmetic, matrix normal forms
//!   over F_p[[t]], Iwasawa decompositions and coset enumeration in
//!   GL(n, F_p((t))),
//! * [`hecke`] — compactly induced vectors, Hecke operators, both Satake
//!   transforms, the compact-to-parabolic intertwiner, and the verification
//!   suites run by the CLI,
//! * [`report`] — structured pass/fail reports shared by the suites.
//!
//! All arithmetic is exact; comparisons in every suite are exact equality.

pub mod error;
pub mod ff;
pub mod fpoly;
pub mod meataxe;
pub mod finred;
pub mod localfield;
pub mod hecke;
pub mod report;

pub use error::CoreError;
