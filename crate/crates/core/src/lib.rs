pub mod bench;
pub mod cli;
pub mod codec;
pub mod config;
pub mod dpf;
pub mod error;
pub mod espat_b;
pub mod espat_plus;
pub mod group;
pub mod ingest;
pub mod prg;
pub mod sim;
pub mod spatial;
mod trie;

pub use error::FssError;
