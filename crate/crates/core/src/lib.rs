pub mod bench;
pub mod cli;
pub mod config;
pub mod error;
pub mod generator;
pub mod numeric;
pub mod oracle;
pub mod quasi;
pub mod recurrence;
pub mod reference;
pub mod selftest;
pub mod symbolic;
pub mod trace;
pub mod variant;
