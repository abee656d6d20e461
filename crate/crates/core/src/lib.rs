//! Causal graph dynamics over labeled port graphs.

#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod category;
pub mod corpus;
pub mod disk;
pub mod dot;
pub mod dynamics;
pub mod exec;
pub mod graph;
pub mod io;
pub mod library;
pub mod monotonizer;
pub mod rule;
pub mod verify;
