//! Reactive multi-context systems.
//!
//! Contexts with their own logics exchange information through bridge rules
//! and react to timed input streams. The crate computes equilibria and
//! equilibria streams, repairs for inconsistent systems, grounded equilibria
//! and the well-founded stream.

pub mod bundled;
pub mod error;
pub mod logic;
pub mod model;
pub mod policy;
pub mod repair;
pub mod schema;
pub mod solver;
pub mod stream;
pub mod syntax;
pub mod term;
pub mod trace;
pub mod wfs;

pub use error::{Error, Result};
pub use logic::{BeliefSet, Formula, KnowledgeBase, Logic, LogicKind};
pub use model::{
    satisfies, BeliefState, BridgeLiteral, BridgeRule, Context, HeadKind, Input, InputLanguage, InputStream, KbConfig,
    LiteralSource, ReactiveMcs,
};
pub use policy::ManagementPolicy;
pub use repair::{analyze, find_repair, minimal_repairs, verify_repair, Analysis, Repair, RepairPolicy};
pub use solver::{enumerate_equilibria, minimal_equilibria, relevant_beliefs, Solver};
pub use stream::{
    query_belief, run_partial_stream, run_stream, verify_partial_stream, verify_stream, EquilibriaStream,
    PartialStream, QueryMode, Selector, StreamRun,
};
pub use syntax::{emit_stream, emit_system, parse_atom, parse_pattern, parse_stream, parse_system};
pub use term::{Atom, Belief, PTerm, Symbol, Term};
pub use trace::{TraceFilter, TraceTable};
pub use wfs::{
    check_reducible, grounded_equilibria, grounded_iteration, is_reducible, run_grounded_stream, run_wf_stream,
    well_founded_model, ReducibilityMode, ReducibilityReport, WellFoundedModel, WellFoundedStream,
};
