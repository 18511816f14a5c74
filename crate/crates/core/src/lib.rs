//! Reduction from imperfect-information concurrent game structures (iCGS)
//! to guarded-command game structures with visibility control (vCGS), an
//! operational semantics for the latter, and an explicit-state ATL/ATL*
//! model checker under uniform positional strategies.
//!
//! The pipeline exercised by the cross-validation harness is
//!
//! ```text
//! Icgs --reduction::compile--> Vcgs --vcgs::Machine::unfold--> Icgs
//!   \                                                            |
//!    checker::check(phi)                  checker::check(duplicate_next(phi))
//! ```
//!
//! Parallel evaluation is behind the `parallel` feature (on by default);
//! every parallel loop has a sequential path selected through [`Exec`].

pub mod checker;
pub mod error;
pub mod format;
pub mod gen;
pub mod logic;
pub mod model;
pub mod oracle;
pub mod par;
pub mod reduction;
pub mod vcgs;
pub mod xval;

pub use error::{Error, Result};
pub use logic::{Coalition, Dialect, Formula};
pub use model::{ActionId, AgentId, Icgs, IcgsBuilder, JointAction, PropId, StateId};
pub use par::Exec;
pub use reduction::{compile, ReductionConfig};
pub use vcgs::{Machine, Vcgs};
