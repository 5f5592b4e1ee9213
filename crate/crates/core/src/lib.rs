#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod environment;
pub mod error;
pub mod freeenergy;
pub mod optimize;
pub mod polymer;
pub mod queue;
pub mod rmt;
pub mod specialfn;
pub mod stats;

pub use error::{Error, Result};
