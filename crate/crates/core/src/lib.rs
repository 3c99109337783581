//! A workbench for truth theories over the logic HYPE.
//!
//! The crate provides, in one place:
//!
//! * abstract syntax, parsing and Gödel coding for the arithmetical truth
//!   languages (`syntax`, `codec`, `eval`),
//! * an ordinal notation system below Γ₀ in Veblen normal form (`ordinals`),
//! * a trusted checker for multi-conclusion sequent derivations in the
//!   HYPE-based systems G1h, G1h with equality, HYA, KFL and KFL* (`kernel`),
//! * generators that emit kernel-checkable derivations: classical recapture,
//!   Gentzen-jump progressions and transfinite induction up to ω-towers
//!   (`derivers`),
//! * finite Routley-frame models, countermodel search, the Kripke fixed-point
//!   operator over finite sentence universes and the KFL soundness audit
//!   (`semantics`),
//! * the two-layered translations into the classical truth/falsity language,
//!   with a semantic equivalence audit (`translate`).
//!
//! All values are immutable and all operations are pure, so everything here
//! can be shared freely across threads.

pub mod codec;
pub mod derivers;
pub mod eval;
pub mod kernel;
pub mod ordinals;
pub mod pairing;
pub mod script;
pub mod semantics;
pub mod syntax;
pub mod tactics;
pub mod translate;

pub use codec::{decode, encode_formula, encode_term, Code, Decoded};
pub use kernel::{check, AxiomId, CheckReport, Derivation, Rule, Sequent, System};
pub use ordinals::{OrdClass, Ordinal};
pub use syntax::{Formula, Lang, Term};
