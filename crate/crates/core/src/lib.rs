pub mod cli;
pub mod error;
pub mod global;
pub mod graphs;
pub mod harness;
pub mod integrate;
pub mod networked;
pub mod reduced;
