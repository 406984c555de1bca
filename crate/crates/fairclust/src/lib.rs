pub mod backend;
pub mod data;
pub mod eval;
pub mod exchange;

pub use fairclust_core as core;
