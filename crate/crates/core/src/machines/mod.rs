//! Machines at every level of the tower and their reference interpreters.

mod circular;
mod cts;
mod tag;
mod tm;

pub use circular::{Ab, CircularConfig, RightAction, RightTm};
pub use cts::{parse_yn, yn_string, CtsState, CtsStep, CyclicTagSystem};
pub use tag::{Run, RunWord, TagStep, TagSystem, TagTape};
pub use tm::{Action, Move, StateId, SymbolId, TmConfiguration, TmStep, TuringMachine};
