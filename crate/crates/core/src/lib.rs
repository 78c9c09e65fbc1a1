//! Exact computation with marked groups.
//!
//! The crate works with two families of groups that are fully decidable:
//! finitely generated abelian groups in invariant-factor form and the
//! generalized dihedral groups `Dih(A) = A ⋊ Z/2` built on them. On top of
//! exact arithmetic it provides
//!
//! * free-group words, Nielsen moves and ball enumeration ([`words`]),
//! * Smith normal form, generation tests and cyclic residual quotients
//!   ([`abelian`]),
//! * generalized dihedral arithmetic and Cayley table materialization
//!   ([`dihedral`], [`tables`]),
//! * universal sentences and exhaustive model checking ([`logic`]),
//! * relation balls, the marked-group metric, convergence reports,
//!   limit decisions and Cantor–Bendixson ranks ([`topology`]),
//! * classification of markings up to automorphism ([`classify`]),
//! * a small text DSL, JSON/DOT emitters and the command implementations
//!   behind the `mgs` binary ([`dsl`], [`closure_map`], [`commands`]).
//!
//! Runnable walkthroughs live in `examples/`, one per capability.

pub mod abelian;
pub mod classify;
pub mod closure_map;
pub mod commands;
pub mod config;
pub mod dihedral;
pub mod dsl;
pub mod error;
pub mod group;
pub mod logic;
pub mod matrix;
pub mod tables;
pub mod topology;
pub mod words;

pub use abelian::{AbelianElement, AbelianGroup, CyclicOrder, CyclicQuotientMap, Order};
pub use classify::{DihAutomorphism, MarkingClass};
pub use config::Limits;
pub use dihedral::{GenDihedralElement, GenDihedralGroup};
pub use error::{Error, Result};
pub use group::{AnyElement, AnyGroup, Group};
pub use logic::{Formula, UniversalSentence, Verdict};
pub use tables::FiniteGroupTable;
pub use topology::{ConvergenceReport, MarkedGroup, RelationBall};
pub use words::{FreeGroup, Letter, NielsenMove, Word};
