//! Command implementations behind the `tabnoise` binary.

pub mod commands;
pub mod manifest;
pub mod server;
