//! Shared test oracles and fixtures.
#![allow(dead_code)]

pub mod english;
pub mod features;
pub mod oracle;
pub mod ranking;
pub mod scorer;
pub mod suite;
pub mod tags;
