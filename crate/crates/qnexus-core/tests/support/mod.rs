//! Oracles shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

pub mod corpus;
pub mod grid;
pub mod sim;
