//! Propositional refutations in the redundancy proof systems BC, RAT, SPR, PR
//! and SR: clause algebra, unit propagation, redundancy checks, a proof
//! verifier, file formats, formula generators, proof builders and proof
//! transformations.

pub mod builders;
pub mod clause;
pub mod formats;
pub mod formula;
pub mod gens;
pub mod oracle;
pub mod par;
pub mod proofsys;
pub mod redundancy;
pub mod subst;
pub mod transforms;
pub mod up;

pub use clause::{Clause, Lit, Tautology, Var};
pub use formula::Formula;
pub use proofsys::{verify, Checker, Proof, ProofStep, SystemSpec, Verdict, VerifyReport};
pub use redundancy::{Rule, Witness};
pub use subst::{
    clause_of, compose, negate_clause, restrict_clause, restrict_formula, Apply, Image,
    PartialAssignment, Restricted, Substitution,
};
pub use up::{derives_1, derives_1_trace, rup_to_resolution, unit_propagate, Propagator, UpStatus, UpTrace};
