//! Command-line tools and the local HTTP JSON service around
//! `relocviz-core`.

pub mod api;
pub mod commands;
pub mod config;
