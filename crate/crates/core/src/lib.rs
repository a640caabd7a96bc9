//! A compiler tower from Turing machines down to Rule 110 initial states,
//! with reference interpreters at every level and lockstep cross-checks
//! between neighbouring levels.

pub mod emulators;
pub mod cts2r110;
pub mod error;
pub mod formats;
pub mod machines;
pub mod nearywoods;
pub mod pipeline;
pub mod r110;
pub mod tag2cts;
pub mod tm2tag;
pub mod xcheck;

pub use error::{Error, Result};
