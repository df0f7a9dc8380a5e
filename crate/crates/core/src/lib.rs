//! LTL property patterns extended with events (signal edges).
//!
//! The crate holds a formula language with rising/falling edge operators,
//! exact evaluation over ultimately periodic (lasso) traces, a catalog of
//! pattern/scope formulas, a checker for closure under stuttering and a set
//! of algebraic laws for edges.
//!
//! ```
//! use edge_patterns::catalog::{instantiate, PatternId, PatternInstance, ScopeId};
//! use edge_patterns::{parse, stutter};
//!
//! let inst = PatternInstance {
//!     pattern: PatternId::Response,
//!     scope: ScopeId::Globally,
//!     combo: 3,
//!     bindings: [("P", "req"), ("S", "grant")]
//!         .into_iter()
//!         .map(|(k, v)| (k.to_string(), parse(v).unwrap()))
//!         .collect(),
//! };
//! let f = instantiate(&inst).unwrap();
//! assert_eq!(f.to_string(), "[] (up(req) -> <> up(grant))");
//! assert!(stutter::check_syntactic(&f).is_proved());
//! ```

pub mod catalog;
pub mod formula;
pub mod generate;
pub mod laws;
pub mod semantics;
pub mod stutter;
pub mod syntax;

pub use catalog::{CellId, PatternId, PatternInstance, ScopeId, Variant};
pub use formula::{Alphabet, AlphabetError, Formula};
pub use laws::Law;
pub use semantics::{enumerate_traces, eval, LassoTrace, Position, State, TraceError};
pub use stutter::{Bounds, CheckOptions, Counterexample, CusVerdict};
pub use syntax::{parse, print_canonical, print_spin, ParseError, SourceSpan};
